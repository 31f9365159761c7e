#include "trisma/tma.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace trisma {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_phase(double phi) {
    // into (-pi, pi]
    double w = std::fmod(phi, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    if (w > kPi) w -= 2.0 * kPi;
    return w;
}
}  // namespace

ControlTiming encode(double amplitude, double phase, const TmaParams& params) {
    if (amplitude < 0 || amplitude > params.a_max * (1.0 + 1e-12)) {
        throw std::out_of_range("tma encode: amplitude outside [0, a_max]");
    }
    const double ratio = std::min(1.0, amplitude / params.a_max);
    ControlTiming t;
    // amplitude relation A/A_max = sin(pi*tau/T_p), ascending branch
    t.tau = params.t_p / kPi * std::asin(ratio);
    // phase relation -pi*(2*t_on + tau)/T_p = phase (mod 2*pi)
    double t_on = (-phase * params.t_p / kPi - t.tau) / 2.0;
    t_on = std::fmod(t_on, params.t_p);
    if (t_on < 0) t_on += params.t_p;
    if (t_on >= params.t_p) t_on = 0.0;
    t.t_on = t_on;
    return t;
}

std::pair<double, double> decode(const ControlTiming& timing, const TmaParams& params) {
    const double amplitude = params.a_max * std::sin(kPi * timing.tau / params.t_p);
    const double phase = wrap_phase(-kPi * (2.0 * timing.t_on + timing.tau) / params.t_p);
    return {amplitude, phase};
}

PrecodedFrame precode_frame(const CMat& precoder, const CVec& symbols, const TmaParams& params) {
    if (precoder.cols() != symbols.size())
        throw std::invalid_argument("precode_frame: precoder/symbol dimension mismatch");
    PrecodedFrame frame;
    frame.x = precoder * symbols;
    frame.timings.reserve(frame.x.size());
    for (Eigen::Index m = 0; m < frame.x.size(); ++m) {
        const double amp = std::abs(frame.x[m]);
        if (amp > params.a_max * (1.0 + 1e-12)) {
            throw std::out_of_range("precode_frame: element " + std::to_string(m) +
                                    " amplitude exceeds a_max");
        }
        const double phase = (amp == 0.0) ? 0.0 : std::arg(frame.x[m]);
        frame.timings.push_back(encode(std::min(amp, params.a_max), phase, params));
    }
    return frame;
}

void dump_tma_csv(const PrecodedFrame& frame, const TmaParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_tma_csv: cannot open " + path);
    out << "element,amplitude,phase,t_on,tau\n";
    for (Eigen::Index m = 0; m < frame.x.size(); ++m) {
        auto [amp, phase] = decode(frame.timings[m], params);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g,%.9g,%.9g\n",
                      static_cast<long long>(m), amp, phase, frame.timings[m].t_on,
                      frame.timings[m].tau);
        out << buf;
    }
}

}  // namespace trisma
