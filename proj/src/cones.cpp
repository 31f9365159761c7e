#include <cmath>
#include <stdexcept>

#include "trisma/conic.hpp"

namespace trisma::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

int block_rows(const ConeBlock& block) {
    switch (block.kind) {
        case ConeKind::Zero:
        case ConeKind::NonNeg:
        case ConeKind::SecondOrder:
            return block.dim;
        case ConeKind::Psd:
            return svec_dim(block.dim);
        case ConeKind::Exp:
            return 3 * block.dim;
    }
    return 0;
}

int ConeSpec::total_rows() const {
    int rows = 0;
    for (const auto& b : blocks) rows += block_rows(b);
    return rows;
}

int svec_dim(int side) { return side * (side + 1) / 2; }

Eigen::VectorXd svec(const Eigen::MatrixXd& sym) {
    const int n = static_cast<int>(sym.rows());
    Eigen::VectorXd v(svec_dim(n));
    int k = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i, ++k) v[k] = (i == j) ? sym(i, j) : kSqrt2 * sym(i, j);
    return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int side) {
    Eigen::MatrixXd m(side, side);
    int k = 0;
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i <= j; ++i, ++k) {
            const double val = (i == j) ? v[k] : v[k] / kSqrt2;
            m(i, j) = val;
            m(j, i) = val;
        }
    }
    return m;
}

namespace {

void project_soc(Eigen::Ref<Eigen::VectorXd> v) {
    const int n = static_cast<int>(v.size());
    const double t = v[0];
    const double z = n > 1 ? v.tail(n - 1).norm() : 0.0;
    if (z <= t) return;          // inside
    if (z <= -t) {               // polar: project to origin
        v.setZero();
        return;
    }
    const double scale = (t + z) / (2.0 * z);
    v[0] = (t + z) / 2.0;
    v.tail(n - 1) *= scale;
}

void project_psd(int side, Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::MatrixXd m = smat(v, side);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    m = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
    v = svec(m);
}

// --- exponential cone ---
// Kexp = cl{(x,y,z) : y > 0, y*exp(x/y) <= z}
// Kexp* = cl{(u,v,w) : u < 0, -u*exp(v/u) <= e*w}

bool in_exp_primal(double r, double s, double t, double tol) {
    if (s > 0 && s * std::exp(r / s) <= t + tol) return true;
    if (std::abs(s) <= tol && r <= tol && t >= -tol) return true;
    return false;
}

bool in_exp_polar(double r, double s, double t, double tol) {
    // v in polar(Kexp) iff -v in Kexp*
    if (r > 0 && r * std::exp(s / r) + 2.718281828459045235 * t <= tol) return true;
    if (std::abs(r) <= tol && s <= tol && t <= tol) return true;
    return false;
}

// Root function for the boundary projection, derived from the stationarity
// system with rho = x/y of the projected point:
//   h(rho) = ((rho-1) r + s) e^rho - (r - rho s) e^{-rho} - (rho^2 - rho + 1) t
double exp_root_fun(double rho, double r, double s, double t) {
    const double ep = std::exp(rho);
    const double em = std::exp(-rho);
    return ((rho - 1.0) * r + s) * ep - (r - rho * s) * em - (rho * rho - rho + 1.0) * t;
}

double exp_root_deriv(double rho, double r, double s, double t) {
    const double ep = std::exp(rho);
    const double em = std::exp(-rho);
    return (rho * r + s) * ep + (s + r - rho * s) * em - (2.0 * rho - 1.0) * t;
}

// Recovers the projected point for a candidate root; returns false when the
// parametrization is invalid there (y <= 0 or negative multiplier).
bool exp_point_from_rho(double rho, double r, double s, double t, Eigen::Vector3d& p) {
    const double ep = std::exp(rho);
    const double d1 = rho + ep * ep;
    const double d2 = 1.0 - (rho - 1.0) * ep * ep;
    double y;
    if (std::abs(d1) >= std::abs(d2)) {
        if (d1 == 0.0) return false;
        y = (r + t * ep) / d1;
    } else {
        if (d2 == 0.0) return false;
        y = (s - t * (rho - 1.0) * ep) / d2;
    }
    if (!(y > 0.0)) return false;
    const double z = y * ep;
    const double mu = z - t;  // multiplier, must be >= 0 at a projection
    if (mu < -1e-12) return false;
    p = Eigen::Vector3d(rho * y, y, z);
    return true;
}

void project_exp_triple(Eigen::Ref<Eigen::VectorXd> v) {
    const double scale = v.norm();
    if (scale == 0.0) return;
    // projection is positively homogeneous; normalize for conditioning
    double r = v[0] / scale, s = v[1] / scale, t = v[2] / scale;
    const double tol = 1e-15;

    if (in_exp_primal(r, s, t, tol)) return;
    if (in_exp_polar(r, s, t, tol)) {
        v.setZero();
        return;
    }
    if (r <= 0 && s <= 0) {
        // nearest point lies on the {y = 0, x <= 0, z >= 0} face
        v[1] = 0.0;
        v[2] = std::max(v[2], 0.0);
        return;
    }

    Eigen::Vector3d best = Eigen::Vector3d(std::min(r, 0.0), 0.0, std::max(t, 0.0));
    double best_dist = (best - Eigen::Vector3d(r, s, t)).norm();

    auto refine = [&](double lo, double hi, double flo) {
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = exp_root_fun(mid, r, s, t);
            if (flo * fm <= 0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
            if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) break;
        }
        double rho = 0.5 * (lo + hi);
        for (int it = 0; it < 10; ++it) {  // Newton polish
            const double f = exp_root_fun(rho, r, s, t);
            const double df = exp_root_deriv(rho, r, s, t);
            if (df == 0.0) break;
            const double step = f / df;
            const double next = rho - step;
            if (next < lo || next > hi) break;
            rho = next;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(rho))) break;
        }
        Eigen::Vector3d cand;
        if (exp_point_from_rho(rho, r, s, t, cand)) {
            const double dist = (cand - Eigen::Vector3d(r, s, t)).norm();
            if (dist < best_dist) {
                best = cand;
                best_dist = dist;
            }
        }
    };

    // cheap expanding bracket around zero first
    double lo = -0.5, hi = 0.5;
    double flo = exp_root_fun(lo, r, s, t), fhi = exp_root_fun(hi, r, s, t);
    for (int it = 0; it < 90 && flo * fhi > 0 && std::abs(lo) < 62; ++it) {
        lo -= 0.7;
        hi += 0.7;
        flo = exp_root_fun(lo, r, s, t);
        fhi = exp_root_fun(hi, r, s, t);
    }
    bool found = false;
    if (flo * fhi <= 0) {
        refine(lo, hi, flo);
        found = best[1] > 0.0;
    }
    if (!found) {
        // dense scan fallback: pick up every sign change
        const int grid = 120;
        double prev_rho = -60.0, prev_f = exp_root_fun(prev_rho, r, s, t);
        for (int i = 1; i <= grid; ++i) {
            const double rho_i = -60.0 + 120.0 * i / grid;
            const double f_i = exp_root_fun(rho_i, r, s, t);
            if (prev_f * f_i <= 0) refine(prev_rho, rho_i, prev_f);
            prev_rho = rho_i;
            prev_f = f_i;
        }
    }
    v[0] = best[0] * scale;
    v[1] = best[1] * scale;
    v[2] = best[2] * scale;
}

}  // namespace

void project_block(const ConeBlock& block, Eigen::Ref<Eigen::VectorXd> v) {
    if (!v.allFinite()) throw std::invalid_argument("cone projection: non-finite input");
    switch (block.kind) {
        case ConeKind::Zero:
            v.setZero();
            return;
        case ConeKind::NonNeg:
            v = v.cwiseMax(0.0);
            return;
        case ConeKind::SecondOrder:
            project_soc(v);
            return;
        case ConeKind::Psd:
            project_psd(block.dim, v);
            return;
        case ConeKind::Exp:
            for (int i = 0; i < block.dim; ++i) project_exp_triple(v.segment(3 * i, 3));
            return;
    }
}

void project_dual_block(const ConeBlock& block, Eigen::Ref<Eigen::VectorXd> v) {
    switch (block.kind) {
        case ConeKind::Zero:
            return;  // dual of {0} is everything
        case ConeKind::NonNeg:
        case ConeKind::SecondOrder:
        case ConeKind::Psd:
            project_block(block, v);  // self-dual
            return;
        case ConeKind::Exp: {
            // via Moreau: proj_{K*}(v) = v + proj_K(-v)
            Eigen::VectorXd neg = -v;
            project_block(block, neg);
            v += neg;
            return;
        }
    }
}

Eigen::VectorXd project_cone(const ConeSpec& spec, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = v;
    int offset = 0;
    for (const auto& block : spec.blocks) {
        const int rows = block_rows(block);
        project_block(block, out.segment(offset, rows));
        offset += rows;
    }
    return out;
}

Eigen::VectorXd project_dual_cone(const ConeSpec& spec, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = v;
    int offset = 0;
    for (const auto& block : spec.blocks) {
        const int rows = block_rows(block);
        project_dual_block(block, out.segment(offset, rows));
        offset += rows;
    }
    return out;
}

}  // namespace trisma::conic
