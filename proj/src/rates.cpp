#include "trisma/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace trisma {

CMat Precoders::matrix() const {
    const int m = privates.empty() ? static_cast<int>(common.size())
                                   : static_cast<int>(privates[0].size());
    const bool has_common = common.size() > 0;
    CMat P(m, (has_common ? 1 : 0) + privates.size());
    int col = 0;
    if (has_common) P.col(col++) = common;
    for (const auto& p : privates) P.col(col++) = p;
    return P;
}

StreamPlan StreamPlan::rsma(int num_users) {
    StreamPlan plan;
    plan.common = true;
    plan.interferers.resize(num_users);
    for (int k = 0; k < num_users; ++k)
        for (int i = 0; i < num_users; ++i)
            if (i != k) plan.interferers[k].push_back(i);
    return plan;
}

StreamPlan StreamPlan::sdma(int num_users) {
    StreamPlan plan = rsma(num_users);
    plan.common = false;
    return plan;
}

StreamPlan StreamPlan::noma(const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    std::vector<int> pos(n, 0);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    StreamPlan plan;
    plan.common = false;
    plan.interferers.resize(n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            if (pos[j] > pos[k]) plan.interferers[k].push_back(j);
    return plan;
}

namespace {

double stream_power(const CVec& f, const CVec& p) {
    if (p.size() == 0) return 0.0;
    const std::complex<double> inner = f.adjoint() * p;
    return std::norm(inner);
}

}  // namespace

double common_sinr(const ChannelSet& ch, const Precoders& pre, const SystemConfig& cfg, int k) {
    const CVec& f = ch.cu_effective.at(k).f;
    const double num = stream_power(f, pre.common);
    double den = cfg.noise_power_watts;
    for (const auto& p : pre.privates) den += stream_power(f, p);
    return num / den;
}

double private_sinr(const ChannelSet& ch, const Precoders& pre, const SystemConfig& cfg, int k) {
    const CVec& f = ch.cu_effective.at(k).f;
    const double num = stream_power(f, pre.privates.at(k));
    double den = cfg.noise_power_watts;
    for (std::size_t i = 0; i < pre.privates.size(); ++i)
        if (static_cast<int>(i) != k) den += stream_power(f, pre.privates[i]);
    return num / den;
}

std::pair<double, double> interference_at_pu(const ChannelSet& ch, const Precoders& pre, int n) {
    const CVec& f = ch.pu_effective.at(n).f;
    double c = stream_power(f, pre.common);
    double p = 0.0;
    for (const auto& pk : pre.privates) p += stream_power(f, pk);
    return {c, p};
}

RateReport plan_rate_report(const ChannelSet& ch, const Precoders& pre,
                            const Eigen::VectorXd& c_split, const SystemConfig& cfg,
                            const StreamPlan& plan) {
    const int K = plan.num_users();
    if (static_cast<int>(pre.privates.size()) != K)
        throw std::invalid_argument("rate_report: precoder count mismatch");
    if (plan.common && c_split.size() != K)
        throw std::invalid_argument("rate_report: c_split length mismatch");
    for (Eigen::Index k = 0; k < c_split.size(); ++k)
        if (c_split[k] < 0) throw std::invalid_argument("rate_report: negative common-rate split");

    RateReport rep;
    const double w = cfg.bandwidth_hz;
    rep.private_rates.resize(K);
    rep.common_rates.assign(K, 0.0);
    rep.c_split.assign(c_split.data(), c_split.data() + c_split.size());
    rep.c_split.resize(K, 0.0);

    for (int k = 0; k < K; ++k) {
        const CVec& f = ch.cu_effective.at(k).f;
        double den = cfg.noise_power_watts;
        for (int i : plan.interferers[k]) den += stream_power(f, pre.privates[i]);
        const double own = stream_power(f, pre.privates[k]);
        rep.private_rates[k] = w * std::log2(1.0 + own / den);
        if (plan.common) {
            // the shared stream is decoded first: every private stream interferes
            double full_den = cfg.noise_power_watts;
            for (const auto& p : pre.privates) full_den += stream_power(f, p);
            rep.common_rates[k] = w * std::log2(1.0 + stream_power(f, pre.common) / full_den);
        }
    }

    rep.r_c = plan.common && K > 0
                  ? *std::min_element(rep.common_rates.begin(), rep.common_rates.end())
                  : 0.0;
    double split_sum = 0.0;
    for (double c : rep.c_split) split_sum += c;
    rep.r_tot = split_sum;
    for (double r : rep.private_rates) rep.r_tot += r;
    rep.p_tot = pre.total_power() + cfg.p_cir_watts;
    rep.se = rep.r_tot / w;
    rep.ee = rep.r_tot / rep.p_tot;

    const double tol = kFeasibilityTol;
    rep.feasible_power = rep.p_tot <= cfg.p_max_watts * (1.0 + tol);
    rep.feasible_common_split = split_sum <= rep.r_c + tol * std::max(1.0, rep.r_c);
    rep.feasible_qos = true;
    for (int k = 0; k < K; ++k) {
        const double delivered = rep.c_split[k] + rep.private_rates[k];
        if (delivered < cfg.r_th_bps * (1.0 - tol)) rep.feasible_qos = false;
    }
    rep.feasible_interference = true;
    for (std::size_t n = 0; n < ch.pu_effective.size(); ++n) {
        auto [ic, ip] = interference_at_pu(ch, pre, static_cast<int>(n));
        if (ic > cfg.i_c_th_watts * (1.0 + tol)) rep.feasible_interference = false;
        if (ip > cfg.i_p_th_watts * (1.0 + tol)) rep.feasible_interference = false;
    }
    return rep;
}

RateReport rate_report(const ChannelSet& ch, const Precoders& pre,
                       const Eigen::VectorXd& c_split, const SystemConfig& cfg) {
    return plan_rate_report(ch, pre, c_split, cfg,
                            StreamPlan::rsma(static_cast<int>(pre.privates.size())));
}

std::string RateReport::to_json() const {
    std::ostringstream out;
    out.precision(12);
    auto arr = [&](const std::vector<double>& v) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
        out << "]";
    };
    out << "{\"common_rates\":";
    arr(common_rates);
    out << ",\"private_rates\":";
    arr(private_rates);
    out << ",\"r_c\":" << r_c << ",\"c_split\":";
    arr(c_split);
    out << ",\"r_tot\":" << r_tot << ",\"p_tot\":" << p_tot << ",\"se\":" << se
        << ",\"ee\":" << ee << ",\"feasible\":" << (feasible() ? "true" : "false")
        << ",\"feasible_power\":" << (feasible_power ? "true" : "false")
        << ",\"feasible_common_split\":" << (feasible_common_split ? "true" : "false")
        << ",\"feasible_qos\":" << (feasible_qos ? "true" : "false")
        << ",\"feasible_interference\":" << (feasible_interference ? "true" : "false") << "}";
    return out.str();
}

}  // namespace trisma
