#include "trisma/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "trisma/rng.hpp"

namespace trisma {

SystemConfig default_config() { return SystemConfig{}; }

void validate_config(const SystemConfig& cfg) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument("config: " + what);
    };
    require(cfg.m_rows > 0 && cfg.m_cols > 0, "m_rows/m_cols must be positive");
    require(cfg.num_cus > 0, "num_cus must be positive");
    require(cfg.num_pus >= 0, "num_pus must be nonnegative");
    require(cfg.carrier_freq_hz > 0, "carrier_freq must be positive");
    require(cfg.bandwidth_hz > 0, "bandwidth must be positive");
    require(cfg.p_max_watts > 0, "p_max must be positive");
    require(cfg.p_cir_watts > 0, "p_cir must be positive");
    require(cfg.p_max_watts > cfg.p_cir_watts, "p_max must exceed p_cir");
    require(cfg.noise_power_watts > 0, "noise_power must be positive");
    require(cfg.i_c_th_watts > 0, "i_c_th must be positive");
    require(cfg.i_p_th_watts > 0, "i_p_th must be positive");
    require(cfg.r_th_bps >= 0, "r_th must be nonnegative");
    require(cfg.eta0_fraction >= 0 && cfg.eta0_fraction <= 1, "eta0_fraction must be in [0,1]");
    require(cfg.rician_k >= 0, "rician_k must be nonnegative");
    require(cfg.pathloss_exponent > 0, "pathloss_exponent must be positive");
    require(cfg.cu_radius_m > 0 && cfg.pu_radius_m > 0, "user radii must be positive");
    require(cfg.feed_distance_m > 0, "feed_distance must be positive");
    require(cfg.eps0 > 0, "eps0 must be positive");
}

namespace {

enum class Unit { Plain, Frequency, Power, Rate, GainDb, Length, Seed };

struct KeyInfo {
    Unit unit;
    // writes the parsed linear value into the config
    void (*set)(SystemConfig&, double);
    double (*get)(const SystemConfig&);
};

double parse_value(const std::string& key, const std::string& raw, Unit unit, int line_no) {
    std::istringstream iss(raw);
    double num = 0;
    std::string suffix;
    if (!(iss >> num)) {
        throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                    ": key '" + key + "' has malformed value '" + raw + "'");
    }
    iss >> suffix;
    std::string extra;
    if (iss >> extra) {
        throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                    ": key '" + key + "' has trailing content");
    }
    auto bad_suffix = [&]() -> double {
        throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                    ": key '" + key + "' has unsupported unit '" + suffix + "'");
    };
    switch (unit) {
        case Unit::Plain:
        case Unit::Seed:
            if (!suffix.empty()) return bad_suffix();
            return num;
        case Unit::Frequency:
            if (suffix.empty() || suffix == "Hz") return num;
            if (suffix == "kHz") return num * 1e3;
            if (suffix == "MHz") return num * 1e6;
            if (suffix == "GHz") return num * 1e9;
            return bad_suffix();
        case Unit::Power:
            if (suffix.empty() || suffix == "W") return num;
            if (suffix == "mW") return num * 1e-3;
            if (suffix == "kW") return num * 1e3;
            if (suffix == "dBw" || suffix == "dBW") return dbw_to_watts(num);
            if (suffix == "dBm") return dbm_to_watts(num);
            return bad_suffix();
        case Unit::Rate:
            if (suffix.empty() || suffix == "bps") return num;
            if (suffix == "kbps") return num * 1e3;
            if (suffix == "Mbps") return num * 1e6;
            if (suffix == "Gbps") return num * 1e9;
            return bad_suffix();
        case Unit::GainDb:
            if (suffix.empty() || suffix == "dB") return num;
            return bad_suffix();
        case Unit::Length:
            if (suffix.empty() || suffix == "m") return num;
            if (suffix == "km") return num * 1e3;
            return bad_suffix();
    }
    return num;
}

const std::map<std::string, KeyInfo>& key_table() {
    static const std::map<std::string, KeyInfo> table = {
        {"m_rows", {Unit::Plain, [](SystemConfig& c, double v) { c.m_rows = (int)v; },
                    [](const SystemConfig& c) { return (double)c.m_rows; }}},
        {"m_cols", {Unit::Plain, [](SystemConfig& c, double v) { c.m_cols = (int)v; },
                    [](const SystemConfig& c) { return (double)c.m_cols; }}},
        {"num_cus", {Unit::Plain, [](SystemConfig& c, double v) { c.num_cus = (int)v; },
                     [](const SystemConfig& c) { return (double)c.num_cus; }}},
        {"num_pus", {Unit::Plain, [](SystemConfig& c, double v) { c.num_pus = (int)v; },
                     [](const SystemConfig& c) { return (double)c.num_pus; }}},
        {"carrier_freq", {Unit::Frequency, [](SystemConfig& c, double v) { c.carrier_freq_hz = v; },
                          [](const SystemConfig& c) { return c.carrier_freq_hz; }}},
        {"bandwidth", {Unit::Frequency, [](SystemConfig& c, double v) { c.bandwidth_hz = v; },
                       [](const SystemConfig& c) { return c.bandwidth_hz; }}},
        {"p_max", {Unit::Power, [](SystemConfig& c, double v) { c.p_max_watts = v; },
                   [](const SystemConfig& c) { return c.p_max_watts; }}},
        {"p_cir", {Unit::Power, [](SystemConfig& c, double v) { c.p_cir_watts = v; },
                   [](const SystemConfig& c) { return c.p_cir_watts; }}},
        {"noise_power", {Unit::Power, [](SystemConfig& c, double v) { c.noise_power_watts = v; },
                         [](const SystemConfig& c) { return c.noise_power_watts; }}},
        {"i_c_th", {Unit::Power, [](SystemConfig& c, double v) { c.i_c_th_watts = v; },
                    [](const SystemConfig& c) { return c.i_c_th_watts; }}},
        {"i_p_th", {Unit::Power, [](SystemConfig& c, double v) { c.i_p_th_watts = v; },
                    [](const SystemConfig& c) { return c.i_p_th_watts; }}},
        {"r_th", {Unit::Rate, [](SystemConfig& c, double v) { c.r_th_bps = v; },
                  [](const SystemConfig& c) { return c.r_th_bps; }}},
        {"eta0_fraction", {Unit::Plain, [](SystemConfig& c, double v) { c.eta0_fraction = v; },
                           [](const SystemConfig& c) { return c.eta0_fraction; }}},
        {"rician_k", {Unit::Plain, [](SystemConfig& c, double v) { c.rician_k = v; },
                      [](const SystemConfig& c) { return c.rician_k; }}},
        {"pathloss_exponent", {Unit::Plain, [](SystemConfig& c, double v) { c.pathloss_exponent = v; },
                               [](const SystemConfig& c) { return c.pathloss_exponent; }}},
        {"pathloss_ref_gain", {Unit::GainDb, [](SystemConfig& c, double v) { c.pathloss_ref_gain_db = v; },
                               [](const SystemConfig& c) { return c.pathloss_ref_gain_db; }}},
        {"cu_radius", {Unit::Length, [](SystemConfig& c, double v) { c.cu_radius_m = v; },
                       [](const SystemConfig& c) { return c.cu_radius_m; }}},
        {"pu_radius", {Unit::Length, [](SystemConfig& c, double v) { c.pu_radius_m = v; },
                       [](const SystemConfig& c) { return c.pu_radius_m; }}},
        {"feed_distance", {Unit::Length, [](SystemConfig& c, double v) { c.feed_distance_m = v; },
                           [](const SystemConfig& c) { return c.feed_distance_m; }}},
        {"eps0", {Unit::Plain, [](SystemConfig& c, double v) { c.eps0 = v; },
                  [](const SystemConfig& c) { return c.eps0; }}},
        {"rng_seed", {Unit::Seed, [](SystemConfig& c, double v) { c.rng_seed = (std::uint64_t)v; },
                      [](const SystemConfig& c) { return (double)c.rng_seed; }}},
    };
    return table;
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
    SystemConfig cfg = default_config();
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                        ": expected 'key: value'");
        }
        std::string key = line.substr(0, colon);
        if (auto k_end = key.find_last_not_of(" \t"); k_end != std::string::npos)
            key = key.substr(0, k_end + 1);
        std::string value = line.substr(colon + 1);
        const auto& table = key_table();
        auto it = table.find(key);
        if (it == table.end()) {
            throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
        it->second.set(cfg, parse_value(key, value, it->second.unit, line_no));
    }
    validate_config(cfg);
    return cfg;
}

std::string serialize_config(const SystemConfig& cfg) {
    // canonical units: W, Hz, bps, dB, m; %.17g keeps doubles bit-exact
    std::ostringstream out;
    auto emit = [&](const char* key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << key << ": " << buf << "\n";
    };
    out << "# trisma scenario\n";
    emit("m_rows", cfg.m_rows);
    emit("m_cols", cfg.m_cols);
    emit("num_cus", cfg.num_cus);
    emit("num_pus", cfg.num_pus);
    emit("carrier_freq", cfg.carrier_freq_hz);
    emit("bandwidth", cfg.bandwidth_hz);
    emit("p_max", cfg.p_max_watts);
    emit("p_cir", cfg.p_cir_watts);
    emit("noise_power", cfg.noise_power_watts);
    emit("i_c_th", cfg.i_c_th_watts);
    emit("i_p_th", cfg.i_p_th_watts);
    emit("r_th", cfg.r_th_bps);
    emit("eta0_fraction", cfg.eta0_fraction);
    emit("rician_k", cfg.rician_k);
    emit("pathloss_exponent", cfg.pathloss_exponent);
    emit("pathloss_ref_gain", cfg.pathloss_ref_gain_db);
    emit("cu_radius", cfg.cu_radius_m);
    emit("pu_radius", cfg.pu_radius_m);
    emit("feed_distance", cfg.feed_distance_m);
    emit("eps0", cfg.eps0);
    out << "rng_seed: " << cfg.rng_seed << "\n";
    return out.str();
}

namespace {

std::vector<Eigen::Vector2d> draw_disk(RandomStream& stream, int count, double radius) {
    std::vector<Eigen::Vector2d> points;
    points.reserve(count);
    for (int i = 0; i < count; ++i) {
        double r = 0;
        do {
            r = radius * std::sqrt(stream.uniform01());
        } while (r <= 0);
        const double theta = 2.0 * 3.14159265358979323846 * stream.uniform01();
        points.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
    return points;
}

}  // namespace

Geometry place_users(const SystemConfig& cfg) {
    validate_config(cfg);
    Geometry geo;
    auto cu_stream = RandomStream::substream(cfg.rng_seed, stream_tag::geometry_cu);
    auto pu_stream = RandomStream::substream(cfg.rng_seed, stream_tag::geometry_pu);
    geo.cu_positions = draw_disk(cu_stream, cfg.num_cus, cfg.cu_radius_m);
    geo.pu_positions = draw_disk(pu_stream, cfg.num_pus, cfg.pu_radius_m);
    geo.feed_position = Eigen::Vector3d(0.0, 0.0, cfg.feed_distance_m);
    return geo;
}

}  // namespace trisma
