#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "xxz/model.hpp"

namespace xxz {

struct LanczosOptions {
    int n_pairs = 2;
    double tol = 1e-10;       // accepted max residual ||H v - lambda v||
    int max_iter = 20000;     // matrix-vector product budget for the whole call
    std::uint64_t seed = 12345;
    double tol_degen = 1e-8;  // absolute; couplings are order one
    int krylov_cap = 400;     // thick-restart ceiling on the stored basis
};

/// Lowest two eigenpairs of the sector Hamiltonian. psi0 is normalized with
/// its first nonzero amplitude (ascending basis order) positive.
struct GroundStateResult {
    double e0 = 0.0;
    double e1 = 0.0;
    std::vector<double> psi0;
    double residual0 = 0.0;
    double residual1 = 0.0;
    bool degenerate = false;  // e1 - e0 < tol_degen
    int iterations = 0;       // matrix-vector products consumed
};

class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual(best_residual) {}
    double best_residual;
};

/// Lanczos with full reorthogonalization and thick restart. Deterministic for
/// a fixed seed: seeded pseudo-random start vector, fixed-order reductions,
/// deterministic restart policy. Throws NonConvergenceError when the matvec
/// budget runs out (callers may retry with another seed).
GroundStateResult lanczos_extremal(const SparseSymmetricMatrix& m, const LanczosOptions& opt = {});

/// Full spectrum of a small instance, eigenvalues ascending. Verification
/// oracle; guarded to dim <= 4000.
struct DenseSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues[k]
};
DenseSpectrum dense_eigensolve_oracle(const SparseSymmetricMatrix& m);

/// (e1 - e0) / (|j_leg| * N), the nonnegative excitation energy difference
/// per spin within the sector.
double energy_gap_per_spin(const GroundStateResult& result, const LadderSpec& spec);

}  // namespace xxz
