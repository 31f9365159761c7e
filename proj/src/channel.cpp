#include "trisma/channel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace trisma {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kJ{0.0, 1.0};
}  // namespace

NearFieldChannel feed_to_ris(const SystemConfig& cfg) {
    validate_config(cfg);
    const int rows = cfg.m_rows;
    const int cols = cfg.m_cols;
    const double lambda = cfg.wavelength_m();
    const double d_f = cfg.element_spacing_m();
    const double d0 = cfg.feed_distance_m;

    // Free-space amplitude at the feed distance; phase reference zero.
    const double alpha_mag = std::sqrt(cfg.pathloss_ref_gain_linear() / (d0 * d0));

    NearFieldChannel ch;
    ch.feed_gain = alpha_mag;
    ch.h.resize(rows * cols);
    int idx = 0;
    for (int mr = 1; mr <= rows; ++mr) {
        for (int mc = 1; mc <= cols; ++mc, ++idx) {
            const double dr = (2.0 * mr - rows - 1.0) / 2.0;
            const double dc = (2.0 * mc - cols - 1.0) / 2.0;
            const double d_elem = d_f * std::sqrt(dr * dr + dc * dc);
            const double dist = std::sqrt(d0 * d0 + d_elem * d_elem);
            // distance expressed in carrier wavelengths before the 2*pi phase
            ch.h[idx] = ch.feed_gain * std::exp(-kJ * (2.0 * kPi * dist / lambda));
        }
    }
    return ch;
}

double path_loss(const SystemConfig& cfg, double distance_m) {
    if (!(distance_m > 0)) throw std::invalid_argument("path_loss: distance must be positive");
    const double gain = cfg.pathloss_ref_gain_linear() * std::pow(distance_m, -cfg.pathloss_exponent);
    return std::sqrt(gain);
}

UserChannel ris_to_receiver(const SystemConfig& cfg, const Eigen::Vector2d& position,
                            RandomStream& substream) {
    const double dist = position.norm();
    if (!(dist > 0)) throw std::invalid_argument("ris_to_receiver: receiver at zero distance");

    UserChannel ch;
    ch.pathloss = path_loss(cfg, dist);
    ch.rician_k = cfg.rician_k;
    ch.azimuth = std::atan2(position.y(), position.x());
    // Receivers lie in the aperture's far-horizon plane: pitch fixed at
    // broadside-orthogonal, azimuth taken from the planar position.
    ch.elevation = kPi / 2.0;

    const int rows = cfg.m_rows;
    const int cols = cfg.m_cols;
    // d_f = lambda/2, so the normalized spacings reduce to direction cosines / 2.
    const double delta_r = 0.5 * std::sin(ch.elevation) * std::cos(ch.azimuth);
    const double delta_c = 0.5 * std::sin(ch.elevation) * std::sin(ch.azimuth);

    CVec steer(rows * cols);
    int idx = 0;
    for (int mr = 0; mr < rows; ++mr) {
        for (int mc = 0; mc < cols; ++mc, ++idx) {
            steer[idx] = std::exp(-kJ * (2.0 * kPi * (delta_r * mr + delta_c * mc)));
        }
    }

    const double kappa = cfg.rician_k;
    const double los_w = std::sqrt(kappa / (kappa + 1.0));
    const double nlos_w = std::sqrt(1.0 / (kappa + 1.0));
    CVec nlos(rows * cols);
    for (int m = 0; m < rows * cols; ++m) nlos[m] = substream.cnormal();

    ch.g = ch.pathloss * (los_w * steer + nlos_w * nlos);
    return ch;
}

EffectiveChannel effective(const NearFieldChannel& h, const UserChannel& g) {
    if (h.h.size() != g.g.size())
        throw std::invalid_argument("effective: channel length mismatch");
    EffectiveChannel eff;
    eff.f = h.h.cwiseProduct(g.g);
    eff.F = eff.f * eff.f.adjoint();
    return eff;
}

namespace {

std::complex<double> draw_direct(const SystemConfig& cfg, double distance, RandomStream& stream) {
    const double xi = path_loss(cfg, distance);
    const double kappa = cfg.rician_k;
    const double los_w = std::sqrt(kappa / (kappa + 1.0));
    const double nlos_w = std::sqrt(1.0 / (kappa + 1.0));
    return xi * (los_w + nlos_w * stream.cnormal());
}

}  // namespace

ChannelSet synthesize_channels(const SystemConfig& cfg) {
    ChannelSet set;
    set.geometry = place_users(cfg);
    set.feed = feed_to_ris(cfg);

    set.cu_channels.reserve(cfg.num_cus);
    set.cu_effective.reserve(cfg.num_cus);
    for (int k = 0; k < cfg.num_cus; ++k) {
        auto stream = RandomStream::substream(mix_seed(cfg.rng_seed, stream_tag::fading_cu), k);
        set.cu_channels.push_back(ris_to_receiver(cfg, set.geometry.cu_positions[k], stream));
        set.cu_effective.push_back(effective(set.feed, set.cu_channels.back()));
        auto direct = RandomStream::substream(mix_seed(cfg.rng_seed, stream_tag::direct_cu), k);
        set.direct_cu.push_back(draw_direct(cfg, set.geometry.cu_positions[k].norm(), direct));
    }
    set.pu_channels.reserve(cfg.num_pus);
    set.pu_effective.reserve(cfg.num_pus);
    for (int n = 0; n < cfg.num_pus; ++n) {
        auto stream = RandomStream::substream(mix_seed(cfg.rng_seed, stream_tag::fading_pu), n);
        set.pu_channels.push_back(ris_to_receiver(cfg, set.geometry.pu_positions[n], stream));
        set.pu_effective.push_back(effective(set.feed, set.pu_channels.back()));
        auto direct = RandomStream::substream(mix_seed(cfg.rng_seed, stream_tag::direct_pu), n);
        set.direct_pu.push_back(draw_direct(cfg, set.geometry.pu_positions[n].norm(), direct));
    }
    return set;
}

ChannelSet scalar_equivalent(const ChannelSet& set) {
    ChannelSet out;
    out.geometry = set.geometry;
    out.feed.feed_gain = 1.0;
    out.feed.h = CVec::Ones(1);
    auto reduce = [&](const std::vector<UserChannel>& users,
                      const std::vector<std::complex<double>>& direct,
                      std::vector<UserChannel>& users_out, std::vector<EffectiveChannel>& eff_out) {
        for (std::size_t i = 0; i < users.size(); ++i) {
            UserChannel u;
            u.g = CVec::Constant(1, direct[i]);
            u.pathloss = users[i].pathloss;
            u.rician_k = users[i].rician_k;
            u.azimuth = users[i].azimuth;
            u.elevation = users[i].elevation;
            users_out.push_back(u);
            eff_out.push_back(effective(out.feed, u));
        }
    };
    reduce(set.cu_channels, set.direct_cu, out.cu_channels, out.cu_effective);
    reduce(set.pu_channels, set.direct_pu, out.pu_channels, out.pu_effective);
    out.direct_cu = set.direct_cu;
    out.direct_pu = set.direct_pu;
    return out;
}

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        hash ^= p[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t hash_cvec(std::uint64_t hash, const CVec& v) {
    return fnv1a(hash, v.data(), sizeof(std::complex<double>) * v.size());
}

void write_cvec(std::ofstream& out, const CVec& v) {
    std::uint64_t n = v.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(v.data()), sizeof(std::complex<double>) * v.size());
}

CVec read_cvec(std::ifstream& in) {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || n > (1ULL << 24)) throw std::runtime_error("channel dump: corrupt vector header");
    CVec v(n);
    in.read(reinterpret_cast<char*>(v.data()), sizeof(std::complex<double>) * n);
    if (!in) throw std::runtime_error("channel dump: truncated vector");
    return v;
}

void write_user(std::ofstream& out, const UserChannel& u) {
    write_cvec(out, u.g);
    double meta[4] = {u.pathloss, u.rician_k, u.azimuth, u.elevation};
    out.write(reinterpret_cast<const char*>(meta), sizeof(meta));
}

UserChannel read_user(std::ifstream& in) {
    UserChannel u;
    u.g = read_cvec(in);
    double meta[4];
    in.read(reinterpret_cast<char*>(meta), sizeof(meta));
    u.pathloss = meta[0];
    u.rician_k = meta[1];
    u.azimuth = meta[2];
    u.elevation = meta[3];
    return u;
}

constexpr char kMagic[8] = {'T', 'R', 'C', 'H', 'S', 'E', 'T', '1'};

}  // namespace

std::uint64_t ChannelSet::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = hash_cvec(h, feed.h);
    for (const auto& u : cu_channels) h = hash_cvec(h, u.g);
    for (const auto& u : pu_channels) h = hash_cvec(h, u.g);
    h = fnv1a(h, direct_cu.data(), sizeof(std::complex<double>) * direct_cu.size());
    h = fnv1a(h, direct_pu.data(), sizeof(std::complex<double>) * direct_pu.size());
    return h;
}

void save_channels(const ChannelSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_channels: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    std::uint64_t counts[2] = {set.cu_channels.size(), set.pu_channels.size()};
    out.write(reinterpret_cast<const char*>(counts), sizeof(counts));
    write_cvec(out, set.feed.h);
    double gain[2] = {set.feed.feed_gain.real(), set.feed.feed_gain.imag()};
    out.write(reinterpret_cast<const char*>(gain), sizeof(gain));
    for (const auto& u : set.cu_channels) write_user(out, u);
    for (const auto& u : set.pu_channels) write_user(out, u);
    out.write(reinterpret_cast<const char*>(set.direct_cu.data()),
              sizeof(std::complex<double>) * set.direct_cu.size());
    out.write(reinterpret_cast<const char*>(set.direct_pu.data()),
              sizeof(std::complex<double>) * set.direct_pu.size());
    if (!out) throw std::runtime_error("save_channels: write failure on " + path);
}

ChannelSet load_channels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_channels: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("load_channels: bad magic in " + path);
    std::uint64_t counts[2];
    in.read(reinterpret_cast<char*>(counts), sizeof(counts));
    ChannelSet set;
    set.feed.h = read_cvec(in);
    double gain[2];
    in.read(reinterpret_cast<char*>(gain), sizeof(gain));
    set.feed.feed_gain = {gain[0], gain[1]};
    for (std::uint64_t k = 0; k < counts[0]; ++k) {
        set.cu_channels.push_back(read_user(in));
        set.cu_effective.push_back(effective(set.feed, set.cu_channels.back()));
    }
    for (std::uint64_t n = 0; n < counts[1]; ++n) {
        set.pu_channels.push_back(read_user(in));
        set.pu_effective.push_back(effective(set.feed, set.pu_channels.back()));
    }
    set.direct_cu.resize(counts[0]);
    set.direct_pu.resize(counts[1]);
    in.read(reinterpret_cast<char*>(set.direct_cu.data()),
            sizeof(std::complex<double>) * set.direct_cu.size());
    in.read(reinterpret_cast<char*>(set.direct_pu.data()),
            sizeof(std::complex<double>) * set.direct_pu.size());
    if (!in) throw std::runtime_error("load_channels: truncated file " + path);
    return set;
}

}  // namespace trisma
