#include <Eigen/SparseCholesky>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "trisma/conic.hpp"

namespace trisma::conic {

const char* status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::PrimalInfeasible: return "primal_infeasible";
        case SolveStatus::DualInfeasible: return "dual_infeasible";
        case SolveStatus::IterLimit: return "iter_limit";
    }
    return "unknown";
}

void ConeProgram::validate() const {
    const int n = static_cast<int>(c.size());
    const int m = static_cast<int>(b.size());
    if (A.rows() != m || A.cols() != n)
        throw std::invalid_argument("cone program: A dimensions disagree with b/c");
    if (cones.total_rows() != m)
        throw std::invalid_argument("cone program: cone dimension does not match b");
    std::vector<bool> row_used(m, false);
    for (int col = 0; col < A.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
            if (it.value() != 0.0) row_used[it.row()] = true;
    for (int i = 0; i < m; ++i)
        if (!row_used[i])
            throw std::invalid_argument("cone program: all-zero row " + std::to_string(i));
}

void ConeProgram::dump(std::ostream& out) const {
    out << "# cone program: n m nnz\n";
    out << c.size() << " " << b.size() << " " << A.nonZeros() << "\n";
    out << "# cones\n";
    for (const auto& blk : cones.blocks) {
        switch (blk.kind) {
            case ConeKind::Zero: out << "zero "; break;
            case ConeKind::NonNeg: out << "nonneg "; break;
            case ConeKind::SecondOrder: out << "soc "; break;
            case ConeKind::Psd: out << "psd "; break;
            case ConeKind::Exp: out << "exp "; break;
        }
        out << blk.dim << "\n";
    }
    out << "# c\n";
    for (Eigen::Index i = 0; i < c.size(); ++i) out << c[i] << "\n";
    out << "# b\n";
    for (Eigen::Index i = 0; i < b.size(); ++i) out << b[i] << "\n";
    out << "# A triplets (row col value)\n";
    for (int col = 0; col < A.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
            out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

void ConeProgram::dump_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cone dump: cannot open " + path);
    out.precision(17);
    dump(out);
}

namespace {

struct Scaling {
    Eigen::VectorXd row;  // E
    Eigen::VectorXd col;  // D
    double sigma_b = 1.0;
    double sigma_c = 1.0;
};

// Ruiz equilibration; rows of one non-separable cone block share a factor so
// scaled slacks stay inside the cone.
Scaling equilibrate(Eigen::SparseMatrix<double>& A, Eigen::VectorXd& b, Eigen::VectorXd& c,
                    const ConeSpec& spec, bool enabled) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    Scaling sc;
    sc.row = Eigen::VectorXd::Ones(m);
    sc.col = Eigen::VectorXd::Ones(n);
    if (enabled) {
        for (int pass = 0; pass < 10; ++pass) {
            Eigen::VectorXd row_max = Eigen::VectorXd::Zero(m);
            Eigen::VectorXd col_max = Eigen::VectorXd::Zero(n);
            for (int col = 0; col < A.outerSize(); ++col) {
                for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
                    const double a = std::abs(it.value());
                    row_max[it.row()] = std::max(row_max[it.row()], a);
                    col_max[col] = std::max(col_max[col], a);
                }
            }
            // uniform factor within non-separable blocks
            int offset = 0;
            for (const auto& blk : spec.blocks) {
                const int rows = block_rows(blk);
                if (blk.kind == ConeKind::SecondOrder || blk.kind == ConeKind::Psd ||
                    blk.kind == ConeKind::Exp) {
                    const double mx = row_max.segment(offset, rows).maxCoeff();
                    row_max.segment(offset, rows).setConstant(mx);
                }
                offset += rows;
            }
            auto factor = [](double v) { return v > 1e-12 ? 1.0 / std::sqrt(v) : 1.0; };
            Eigen::VectorXd er = row_max.unaryExpr(factor);
            Eigen::VectorXd ec = col_max.unaryExpr(factor);
            A = er.asDiagonal() * A * ec.asDiagonal();
            sc.row = sc.row.cwiseProduct(er);
            sc.col = sc.col.cwiseProduct(ec);
        }
    }
    b = sc.row.cwiseProduct(b);
    c = sc.col.cwiseProduct(c);
    sc.sigma_b = std::max(b.norm(), 1e-6);
    sc.sigma_c = std::max(c.norm(), 1e-6);
    b /= sc.sigma_b;
    c /= sc.sigma_c;
    return sc;
}

}  // namespace

ConeSolution solve(const ConeProgram& prog, const SolveSettings& settings) {
    prog.validate();
    const int n = static_cast<int>(prog.c.size());
    const int m = static_cast<int>(prog.b.size());

    Eigen::SparseMatrix<double> A = prog.A;
    Eigen::VectorXd b = prog.b;
    Eigen::VectorXd c = prog.c;
    const Scaling sc = equilibrate(A, b, c, prog.cones, settings.ruiz_scaling);

    // KKT = [[I, A'],[A, -I]]; quasi-definite, factorized once.
    Eigen::SparseMatrix<double> kkt(n + m, n + m);
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(A.nonZeros() + n + m);
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, 1.0);
        for (int i = 0; i < m; ++i) trips.emplace_back(n + i, n + i, -1.0);
        for (int col = 0; col < A.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
                trips.emplace_back(n + it.row(), it.col(), it.value());
                trips.emplace_back(it.col(), n + it.row(), it.value());
            }
        kkt.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(kkt);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("cone solve: KKT factorization failed");

    // solve M [z1;z2] = [r1;r2] with M = [[I, A'],[-A, I]]: the KKT system with
    // rhs [r1; -r2] has the same solution blocks
    auto m_solve = [&](const Eigen::VectorXd& r1, const Eigen::VectorXd& r2) {
        Eigen::VectorXd rhs(n + m);
        rhs.head(n) = r1;
        rhs.tail(m) = -r2;
        Eigen::VectorXd z = ldlt.solve(rhs);
        // one step of iterative refinement
        Eigen::VectorXd resid = rhs - kkt * z;
        if (resid.lpNorm<Eigen::Infinity>() > 1e-13 * (1.0 + rhs.lpNorm<Eigen::Infinity>()))
            z += ldlt.solve(resid);
        return z;
    };

    const Eigen::VectorXd h_sol = [&] {
        Eigen::VectorXd q = m_solve(c, b);
        return q;
    }();
    const double h_dot_q = c.dot(h_sol.head(n)) + b.dot(h_sol.tail(m));

    // iterate u = (x, y, tau), v = (0, s, kappa)
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n + m + 1);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n + m + 1);
    if (settings.warm != nullptr && settings.warm->x.size() == n &&
        settings.warm->y.size() == m && settings.warm->s.size() == m) {
        u.head(n) = sc.col.cwiseInverse().cwiseProduct(settings.warm->x) / sc.sigma_b;
        u.segment(n, m) = sc.row.cwiseInverse().cwiseProduct(settings.warm->y) / sc.sigma_c;
        u[n + m] = 1.0;
        v.segment(n, m) = sc.row.cwiseProduct(settings.warm->s) / sc.sigma_b;
    } else {
        u[n + m] = 1.0;
        v[n + m] = 1.0;
    }

    ConeSolution sol;
    auto unscale = [&](const Eigen::VectorXd& ux, const Eigen::VectorXd& uy,
                       const Eigen::VectorXd& vs, double tau) {
        sol.x = sc.sigma_b * sc.col.cwiseProduct(ux) / tau;
        sol.y = sc.sigma_c * sc.row.cwiseProduct(uy) / tau;
        sol.s = sc.sigma_b * vs.cwiseQuotient(sc.row) / tau;
    };

    const double alpha = settings.relaxation;
    int iter = 0;
    for (; iter < settings.max_iters; ++iter) {
        // linear step: ut = (I+Q)^{-1} (u + v)
        const Eigen::VectorXd w = u + v;
        Eigen::VectorXd p = m_solve(w.head(n), w.segment(n, m));
        const double wt = w[n + m];
        const double ut_tau =
            (wt + c.dot(p.head(n)) + b.dot(p.tail(m))) / (1.0 + h_dot_q);
        Eigen::VectorXd ut(n + m + 1);
        ut.head(n + m) = p - ut_tau * h_sol;
        ut[n + m] = ut_tau;

        // relaxed projection step
        Eigen::VectorXd t = alpha * ut + (1.0 - alpha) * u;
        Eigen::VectorXd z = t - v;
        Eigen::VectorXd u_next(n + m + 1);
        u_next.head(n) = z.head(n);  // x free
        u_next.segment(n, m) = project_dual_cone(prog.cones, z.segment(n, m));
        u_next[n + m] = std::max(z[n + m], 0.0);
        v += u_next - t;
        u = u_next;

        if (!u.allFinite() || !v.allFinite())
            throw std::runtime_error("cone solve: non-finite iterate at iteration " +
                                     std::to_string(iter));

        if ((iter + 1) % settings.check_interval != 0 && iter + 1 != settings.max_iters)
            continue;

        const double tau = u[n + m];
        if (tau > 1e-9) {
            unscale(u.head(n), u.segment(n, m), v.segment(n, m), tau);
            const Eigen::VectorXd pr = prog.A * sol.x + sol.s - prog.b;
            const Eigen::VectorXd dr = prog.A.transpose() * sol.y + prog.c;
            const double cx = prog.c.dot(sol.x);
            const double by = prog.b.dot(sol.y);
            sol.res_primal = pr.norm() / (1.0 + prog.b.norm());
            sol.res_dual = dr.norm() / (1.0 + prog.c.norm());
            sol.res_gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
            if (sol.res_primal <= settings.tol && sol.res_dual <= settings.tol &&
                sol.res_gap <= settings.tol) {
                sol.status = SolveStatus::Optimal;
                sol.iterations = iter + 1;
                return sol;
            }
        }
        // certificates, in unscaled terms
        {
            Eigen::VectorXd y_raw = sc.sigma_c * sc.row.cwiseProduct(u.segment(n, m));
            const double by = prog.b.dot(y_raw);
            if (by < -1e-12) {
                y_raw /= -by;  // certificate normalized to b'y = -1
                if ((prog.A.transpose() * y_raw).norm() <=
                    settings.tol * std::max(1.0, y_raw.norm())) {
                    sol.status = SolveStatus::PrimalInfeasible;
                    sol.iterations = iter + 1;
                    sol.x.setZero(n);
                    sol.s.setZero(m);
                    sol.y = y_raw;
                    return sol;
                }
            }
            Eigen::VectorXd x_raw = sc.sigma_b * sc.col.cwiseProduct(u.head(n));
            const double cx = prog.c.dot(x_raw);
            if (cx < -1e-12) {
                x_raw /= -cx;  // certificate normalized to c'x = -1
                Eigen::VectorXd ax = prog.A * x_raw;
                Eigen::VectorXd s_cert = project_cone(prog.cones, -ax);
                if ((ax + s_cert).norm() <= settings.tol * std::max(1.0, x_raw.norm())) {
                    sol.status = SolveStatus::DualInfeasible;
                    sol.iterations = iter + 1;
                    sol.x = x_raw;
                    sol.s = s_cert;
                    sol.y.setZero(m);
                    return sol;
                }
            }
        }
    }

    const double tau = std::max(u[n + m], 1e-12);
    unscale(u.head(n), u.segment(n, m), v.segment(n, m), tau);
    const Eigen::VectorXd pr = prog.A * sol.x + sol.s - prog.b;
    const Eigen::VectorXd dr = prog.A.transpose() * sol.y + prog.c;
    const double cx = prog.c.dot(sol.x);
    const double by = prog.b.dot(sol.y);
    sol.res_primal = pr.norm() / (1.0 + prog.b.norm());
    sol.res_dual = dr.norm() / (1.0 + prog.c.norm());
    sol.res_gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
    sol.status = SolveStatus::IterLimit;
    sol.iterations = iter;
    return sol;
}

}  // namespace trisma::conic
