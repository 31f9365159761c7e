#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "trisma/config.hpp"
#include "trisma/rng.hpp"

namespace trisma {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Feed-antenna to aperture link under the spherical wave assumption. Every
/// entry has the same modulus |feed_gain|; only the per-element phase varies
/// with the exact feed-to-element distance.
struct NearFieldChannel {
    CVec h;
    std::complex<double> feed_gain{0.0, 0.0};
};

/// Aperture to receiver Rician link.
struct UserChannel {
    CVec g;
    double pathloss = 0.0;   // amplitude factor xi
    double rician_k = 0.0;
    double azimuth = 0.0;    // radians
    double elevation = 0.0;  // radians
};

/// Cascade f = diag(h) g and its rank-one lift F = f f^H.
struct EffectiveChannel {
    CVec f;
    CMat F;
};

struct ChannelSet {
    NearFieldChannel feed;
    std::vector<UserChannel> cu_channels;
    std::vector<UserChannel> pu_channels;
    std::vector<EffectiveChannel> cu_effective;
    std::vector<EffectiveChannel> pu_effective;
    // Single-antenna equivalents (same path loss and Rician statistics, no
    // aperture); consumed by the no-aperture benchmark.
    std::vector<std::complex<double>> direct_cu;
    std::vector<std::complex<double>> direct_pu;
    Geometry geometry;

    int num_elements() const { return static_cast<int>(feed.h.size()); }
    std::uint64_t hash() const;
};

NearFieldChannel feed_to_ris(const SystemConfig& cfg);

/// Amplitude path-loss factor: xi^2 = ref_gain * distance^(-exponent).
double path_loss(const SystemConfig& cfg, double distance_m);

UserChannel ris_to_receiver(const SystemConfig& cfg, const Eigen::Vector2d& position,
                            RandomStream& substream);

EffectiveChannel effective(const NearFieldChannel& h, const UserChannel& g);

/// Draws geometry and all fading realizations for one scenario instance.
ChannelSet synthesize_channels(const SystemConfig& cfg);

/// Reduces a set to its single-antenna equivalent (direct links become the
/// effective channels; the aperture disappears).
ChannelSet scalar_equivalent(const ChannelSet& set);

/// Binary dump: little-endian doubles, row-major complex pairs.
void save_channels(const ChannelSet& set, const std::string& path);
ChannelSet load_channels(const std::string& path);

}  // namespace trisma
