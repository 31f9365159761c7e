#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

namespace trisma::conic {

/// Supported cone blocks. `dim` is the vector length for Zero/NonNeg/
/// SecondOrder, the matrix side for Psd (occupying side*(side+1)/2 slots in
/// scaled-symmetric vectorization), and the number of (x,y,z) triples for Exp.
enum class ConeKind { Zero, NonNeg, SecondOrder, Psd, Exp };

struct ConeBlock {
    ConeKind kind;
    int dim;
};

int block_rows(const ConeBlock& block);

struct ConeSpec {
    std::vector<ConeBlock> blocks;
    int total_rows() const;
};

/// Standard-form cone program: minimize c'x subject to Ax + s = b, s in K.
struct ConeProgram {
    Eigen::VectorXd c;
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    ConeSpec cones;

    void validate() const;  // throws std::invalid_argument
    void dump(std::ostream& out) const;
    void dump_file(const std::string& path) const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, IterLimit };

const char* status_name(SolveStatus status);

struct ConeSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd s;
    SolveStatus status = SolveStatus::IterLimit;
    double res_primal = 0.0;
    double res_dual = 0.0;
    double res_gap = 0.0;
    int iterations = 0;
};

struct SolveSettings {
    double tol = 1e-6;
    int max_iters = 50000;
    bool ruiz_scaling = true;
    double relaxation = 1.5;
    int check_interval = 25;
    /// Previous solution of a same-shaped program; used as the initial iterate.
    const ConeSolution* warm = nullptr;
};

/// Operator-splitting solve of the homogeneous self-dual embedding:
/// alternates a cached quasi-definite KKT solve with a cone projection.
/// Deterministic for fixed inputs.
ConeSolution solve(const ConeProgram& prog, const SolveSettings& settings = {});

// --- projections (exposed for property tests) ---

/// Euclidean projection of one block onto its cone, in place.
void project_block(const ConeBlock& block, Eigen::Ref<Eigen::VectorXd> v);
/// Projection onto the dual cone.
void project_dual_block(const ConeBlock& block, Eigen::Ref<Eigen::VectorXd> v);

Eigen::VectorXd project_cone(const ConeSpec& spec, const Eigen::VectorXd& v);
Eigen::VectorXd project_dual_cone(const ConeSpec& spec, const Eigen::VectorXd& v);

// --- scaled symmetric vectorization (sqrt(2) off-diagonals) ---

int svec_dim(int side);
Eigen::VectorXd svec(const Eigen::MatrixXd& sym);
Eigen::MatrixXd smat(const Eigen::VectorXd& v, int side);

}  // namespace trisma::conic
