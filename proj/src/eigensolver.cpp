#include "xxz/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace xxz {

namespace {

// Deterministic uniform doubles in [-1, 1). mt19937_64 output is fully
// specified by the standard; the mapping avoids std::uniform_real_distribution,
// whose output is implementation-defined.
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}
    double next() {
        return static_cast<double>(gen_() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
    }

  private:
    std::mt19937_64 gen_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::vector<double>& x, double alpha) {
    for (double& v : x) v *= alpha;
}

// Two-pass classical Gram-Schmidt against a list of vectors; accumulates the
// removed coefficients for the first `n_coeff` vectors into `coeff`.
void orthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis,
                   std::vector<double>* coeff = nullptr, std::size_t n_coeff = 0) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const double c = dot(basis[i], w);
            axpy(-c, basis[i], w);
            if (coeff && i < n_coeff) (*coeff)[i] += c;
        }
    }
}

struct PairResult {
    double lambda = 0.0;
    std::vector<double> vec;
    double residual = 0.0;
};

// One extremal eigenpair of H restricted to the orthogonal complement of
// `deflate`, by Lanczos with full reorthogonalization and thick restart.
PairResult solve_lowest(const SparseSymmetricMatrix& h,
                        const std::vector<std::vector<double>>& deflate, const LanczosOptions& opt,
                        DetRng& rng, int& matvecs_left) {
    const std::size_t n = h.dim;
    const std::size_t m_cap =
        std::min<std::size_t>(static_cast<std::size_t>(opt.krylov_cap), n - deflate.size());
    const int n_keep = 8;  // Ritz vectors carried through a thick restart

    auto fresh_vector = [&](const std::vector<std::vector<double>>& basis) {
        std::vector<double> v(n);
        for (int attempt = 0; attempt < 64; ++attempt) {
            for (double& x : v) x = rng.next();
            orthogonalize(v, deflate);
            orthogonalize(v, basis);
            const double nrm = norm(v);
            if (nrm > 1e-8) {
                scale(v, 1.0 / nrm);
                return v;
            }
        }
        throw NonConvergenceError("lanczos: could not generate a start vector", 1.0);
    };

    std::vector<std::vector<double>> basis;
    basis.reserve(m_cap + 1);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_cap) + 1,
                                              static_cast<Eigen::Index>(m_cap) + 1);
    basis.push_back(fresh_vector(basis));
    double beta_last = 0.0;
    double best_bound = std::numeric_limits<double>::max();

    std::vector<double> w(n), coeff;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

    while (matvecs_left > 0) {
        const std::size_t j = basis.size() - 1;
        apply_hamiltonian(h, basis[j], w);
        --matvecs_left;

        orthogonalize(w, deflate);
        coeff.assign(basis.size(), 0.0);
        orthogonalize(w, basis, &coeff, basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) {
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = coeff[i];
            t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = coeff[i];
        }
        beta_last = norm(w);

        const std::size_t m = basis.size();
        const bool breakdown = beta_last < 1e-13 * std::max(1.0, std::abs(coeff[j]));

        // Rayleigh-Ritz check, throttled once the projected matrix gets large.
        const bool check = breakdown || m == m_cap || m <= 120 || m % 4 == 0;
        if (check) {
            es.compute(t.topLeftCorner(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
            const Eigen::VectorXd& theta = es.eigenvalues();
            const Eigen::VectorXd y = es.eigenvectors().col(0);
            const double bound = std::abs(beta_last * y(static_cast<Eigen::Index>(m) - 1));
            best_bound = std::min(best_bound, bound);

            if (bound < 0.5 * opt.tol || breakdown || m == n - deflate.size()) {
                std::vector<double> u(n, 0.0);
                for (std::size_t i = 0; i < m; ++i) axpy(y(static_cast<Eigen::Index>(i)), basis[i], u);
                const double unrm = norm(u);
                if (unrm > 0.5) {
                    scale(u, 1.0 / unrm);
                    std::vector<double> hu(n);
                    apply_hamiltonian(h, u, hu);
                    --matvecs_left;
                    axpy(-theta(0), u, hu);
                    const double res = norm(hu);
                    best_bound = std::min(best_bound, res);
                    if (res < opt.tol || m == n - deflate.size()) {
                        return {theta(0), std::move(u), res};
                    }
                }
                if (breakdown) {
                    // Invariant subspace without the target converged: widen
                    // the search with a fresh deterministic direction.
                    basis.push_back(fresh_vector(basis));
                    continue;
                }
            }

            if (m == m_cap) {
                // Thick restart: keep the lowest Ritz vectors, then continue
                // the iteration from the current residual direction.
                const std::size_t keep = std::min<std::size_t>(n_keep, m - 1);
                std::vector<std::vector<double>> kept;
                kept.reserve(keep + 1);
                for (std::size_t k = 0; k < keep; ++k) {
                    std::vector<double> u(n, 0.0);
                    for (std::size_t i = 0; i < m; ++i) {
                        axpy(es.eigenvectors()(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(k)),
                             basis[i], u);
                    }
                    const double unrm = norm(u);
                    if (unrm > 1e-12) scale(u, 1.0 / unrm);
                    kept.push_back(std::move(u));
                }
                basis = std::move(kept);
                t.setZero();
                for (std::size_t k = 0; k < basis.size(); ++k) {
                    t(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = theta(static_cast<Eigen::Index>(k));
                }
                if (beta_last > 1e-13) {
                    scale(w, 1.0 / beta_last);
                    orthogonalize(w, deflate);
                    orthogonalize(w, basis);
                    const double wn = norm(w);
                    if (wn > 1e-8) {
                        scale(w, 1.0 / wn);
                        basis.push_back(w);
                    } else {
                        basis.push_back(fresh_vector(basis));
                    }
                } else {
                    basis.push_back(fresh_vector(basis));
                }
                // The coupling column of the appended vector is filled on the
                // next pass, when H is applied to it.
                w.assign(n, 0.0);
                continue;
            }
        }

        if (breakdown) {
            basis.push_back(fresh_vector(basis));
        } else {
            scale(w, 1.0 / beta_last);
            basis.push_back(w);
            w.assign(n, 0.0);
        }
    }
    throw NonConvergenceError("lanczos: matvec budget exhausted, best residual " +
                                  std::to_string(best_bound),
                              best_bound);
}

void apply_sign_convention(std::vector<double>& v) {
    for (double x : v) {
        if (std::abs(x) > 1e-12) {
            if (x < 0) {
                for (double& y : v) y = -y;
            }
            return;
        }
    }
}

}  // namespace

GroundStateResult lanczos_extremal(const SparseSymmetricMatrix& m, const LanczosOptions& opt) {
    if (m.dim < static_cast<std::size_t>(opt.n_pairs)) {
        throw std::invalid_argument("lanczos_extremal: dim " + std::to_string(m.dim) +
                                    " < n_pairs " + std::to_string(opt.n_pairs));
    }
    if (m.dim < 2) throw std::invalid_argument("lanczos_extremal: dim must be >= 2");
    if (opt.tol <= 0) throw std::invalid_argument("lanczos_extremal: tol must be positive");

    DetRng rng(opt.seed);
    int budget = opt.max_iter;

    std::vector<std::vector<double>> deflate;
    PairResult p0 = solve_lowest(m, deflate, opt, rng, budget);
    deflate.push_back(p0.vec);
    PairResult p1 = solve_lowest(m, deflate, opt, rng, budget);

    if (p1.lambda < p0.lambda) std::swap(p0, p1);

    GroundStateResult result;
    result.e0 = p0.lambda;
    result.e1 = p1.lambda;
    result.psi0 = std::move(p0.vec);
    const double nrm = norm(result.psi0);
    if (nrm > 0) scale(result.psi0, 1.0 / nrm);
    apply_sign_convention(result.psi0);
    result.residual0 = p0.residual;
    result.residual1 = p1.residual;
    result.degenerate = (result.e1 - result.e0) < opt.tol_degen;
    result.iterations = opt.max_iter - budget;
    return result;
}

DenseSpectrum dense_eigensolve_oracle(const SparseSymmetricMatrix& m) {
    if (m.dim > 4000) {
        throw std::invalid_argument("dense_eigensolve_oracle: dim " + std::to_string(m.dim) +
                                    " exceeds the 4000 guard");
    }
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.dim),
                                                  static_cast<Eigen::Index>(m.dim));
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t k = m.row_start[i]; k < m.row_start[i + 1]; ++k) {
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m.col[k])) = m.val[k];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    return {es.eigenvalues(), es.eigenvectors()};
}

double energy_gap_per_spin(const GroundStateResult& result, const LadderSpec& spec) {
    const double n = static_cast<double>(spec.n_sites());
    return std::abs(result.e1 - result.e0) / (std::abs(spec.j_leg) * n);
}

}  // namespace xxz
