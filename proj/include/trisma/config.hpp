#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace trisma {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Power-style dB conversion, linear = 10^(dB/10).
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }
inline double dbw_to_watts(double dbw) { return db_to_linear(dbw); }

/// Full scenario description: element grid, user counts, RF constants,
/// power budget, interference thresholds and solver tolerances. All powers
/// are stored in linear watts, rates in bits/s, frequencies in Hz.
struct SystemConfig {
    int m_rows = 3;
    int m_cols = 3;
    int num_cus = 5;
    int num_pus = 5;
    double carrier_freq_hz = 3.0e9;
    double bandwidth_hz = 2.0e7;
    double p_max_watts = 10.0;       // 10 dBw
    double p_cir_watts = 1.0;
    double noise_power_watts = 1e-12;  // -90 dBm
    double i_c_th_watts = 1e-11;       // -80 dBm
    double i_p_th_watts = 1e-9;        // -60 dBm
    double r_th_bps = 1e6;             // 1 Mbps
    double eta0_fraction = 0.5;        // SE floor as a fraction of the SE maximum
    double rician_k = 1.0;
    double pathloss_exponent = 2.5;
    double pathloss_ref_gain_db = -30.0;  // gain at 1 m
    double cu_radius_m = 350.0;
    double pu_radius_m = 500.0;
    double feed_distance_m = 0.5;
    double eps0 = 1e-3;
    std::uint64_t rng_seed = 1;

    int num_elements() const { return m_rows * m_cols; }
    double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
    /// Element spacing is always half the carrier wavelength.
    double element_spacing_m() const { return wavelength_m() / 2.0; }
    double pathloss_ref_gain_linear() const { return db_to_linear(pathloss_ref_gain_db); }
    double transmit_budget_watts() const { return p_max_watts - p_cir_watts; }

    bool operator==(const SystemConfig&) const = default;
};

/// User drop around the base station (at the origin). Positions are planar;
/// the feed sits on the aperture broadside axis.
struct Geometry {
    std::vector<Eigen::Vector2d> cu_positions;
    std::vector<Eigen::Vector2d> pu_positions;
    Eigen::Vector3d feed_position = Eigen::Vector3d::Zero();
};

/// Table-default scenario.
SystemConfig default_config();

/// Throws std::invalid_argument when an invariant is broken.
void validate_config(const SystemConfig& cfg);

/// Parses a flat "key: value" document. '#' starts a comment. Values accept
/// explicit unit suffixes (Hz/kHz/MHz/GHz, W/mW/dBw/dBm, bps/kbps/Mbps, dB,
/// m/km); missing keys keep their defaults; unknown keys are an error.
SystemConfig parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SystemConfig& cfg);

/// Seeded uniform placement over the CU/PU disks.
Geometry place_users(const SystemConfig& cfg);

}  // namespace trisma
