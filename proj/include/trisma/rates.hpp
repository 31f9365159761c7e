#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trisma/channel.hpp"
#include "trisma/config.hpp"

namespace trisma {

/// Precoding matrix split into the shared-stream column and the per-user
/// private columns.
struct Precoders {
    CVec common;                 // zero-length when the scheme has no shared stream
    std::vector<CVec> privates;  // one column per served user

    double total_power() const {
        double p = common.squaredNorm();
        for (const auto& v : privates) p += v.squaredNorm();
        return p;
    }
    CMat matrix() const;  // [common, p_1, ..., p_K] (private-only when common absent)
};

/// Which private streams interfere each user's own-stream detection. The
/// plain rate-splitting plan has everyone interfering everyone; the SIC
/// benchmark cancels already-decoded streams.
struct StreamPlan {
    bool common = true;
    std::vector<std::vector<int>> interferers;

    static StreamPlan rsma(int num_users);
    static StreamPlan sdma(int num_users);
    /// order = user indices sorted by decode sequence (first decoded first);
    /// a user sees interference only from streams decoded after its own.
    static StreamPlan noma(const std::vector<int>& order);
    int num_users() const { return static_cast<int>(interferers.size()); }
};

/// Everything the studies need from one candidate solution, plus per-family
/// feasibility flags at relative tolerance 1e-6.
struct RateReport {
    std::vector<double> common_rates;   // bps, shared-stream rate seen by each user
    std::vector<double> private_rates;  // bps
    double r_c = 0.0;                   // min over users of common_rates
    std::vector<double> c_split;        // bps, per-user credit of the shared rate
    double r_tot = 0.0;                 // bps
    double p_tot = 0.0;                 // watts
    double se = 0.0;                    // bps/Hz
    double ee = 0.0;                    // bps/W

    bool feasible_power = true;
    bool feasible_common_split = true;
    bool feasible_qos = true;
    bool feasible_interference = true;
    bool feasible() const {
        return feasible_power && feasible_common_split && feasible_qos && feasible_interference;
    }
    std::string to_json() const;
};

inline constexpr double kFeasibilityTol = 1e-6;

/// Shared-stream SINR of user k: |f_k^H p_c|^2 / (sum_i |f_k^H p_i|^2 + sigma^2).
double common_sinr(const ChannelSet& ch, const Precoders& pre, const SystemConfig& cfg, int k);

/// Own-stream SINR of user k with interference over i != k.
double private_sinr(const ChannelSet& ch, const Precoders& pre, const SystemConfig& cfg, int k);

/// (common watts, private watts) received at protected user n.
std::pair<double, double> interference_at_pu(const ChannelSet& ch, const Precoders& pre, int n);

/// Full evaluation of a candidate (precoders, shared-rate split).
RateReport rate_report(const ChannelSet& ch, const Precoders& pre,
                       const Eigen::VectorXd& c_split, const SystemConfig& cfg);

/// Plan-aware evaluation: same checks with the plan's interferer sets (used
/// for the SIC and private-only benchmarks). For the rsma plan this equals
/// rate_report.
RateReport plan_rate_report(const ChannelSet& ch, const Precoders& pre,
                            const Eigen::VectorXd& c_split, const SystemConfig& cfg,
                            const StreamPlan& plan);

}  // namespace trisma
