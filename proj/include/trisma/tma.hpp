#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trisma/channel.hpp"

namespace trisma {

/// Control-signal timing parameters of the time-modulated element driver.
struct TmaParams {
    double t_p = 1e-6;   // code element time, seconds
    double a_max = 1.0;  // maximum representable amplitude
};

/// One element's control timing: zero-state start time and duration.
struct ControlTiming {
    double t_on = 0.0;  // in [0, t_p)
    double tau = 0.0;   // in [0, t_p]
};

/// Maps (amplitude, phase) to control timing. The duration is taken on the
/// ascending branch (tau in [0, t_p/2]) which makes the mapping single-valued;
/// the start time is the canonical representative in [0, t_p).
ControlTiming encode(double amplitude, double phase, const TmaParams& params);

/// Inverse map; phase is wrapped into (-pi, pi].
std::pair<double, double> decode(const ControlTiming& timing, const TmaParams& params);

/// Applies the precoder to a symbol vector and encodes every element of the
/// resulting frame. Throws std::out_of_range naming the first element whose
/// amplitude exceeds params.a_max.
struct PrecodedFrame {
    CVec x;
    std::vector<ControlTiming> timings;
};
PrecodedFrame precode_frame(const CMat& precoder, const CVec& symbols, const TmaParams& params);

/// CSV dump of per-element (amplitude, phase, t_on, tau).
void dump_tma_csv(const PrecodedFrame& frame, const TmaParams& params, const std::string& path);

}  // namespace trisma
