#include "xxz/entanglement.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

namespace xxz {

namespace {

Eigen::Matrix4d spin_flip_matrix() {
    Eigen::Matrix4d y;
    y << 0, 0, 0, -1,
         0, 0, 1, 0,
         0, 1, 0, 0,
         -1, 0, 0, 0;
    return y;
}

// Bits of the subset-local index land on the subset's sites, ascending site
// order to most-significant-first local bits (same convention as the RDMs).
std::vector<std::uint32_t> scatter_table(std::uint32_t sites_mask, int n_sites) {
    std::vector<int> sites;
    for (int s = 0; s < n_sites; ++s) {
        if ((sites_mask >> s) & 1u) sites.push_back(s);
    }
    const int k = static_cast<int>(sites.size());
    std::vector<std::uint32_t> table(std::size_t{1} << k);
    for (std::uint32_t a = 0; a < table.size(); ++a) {
        std::uint32_t m = 0;
        for (int j = 0; j < k; ++j) {
            if ((a >> (k - 1 - j)) & 1u) m |= (1u << sites[static_cast<std::size_t>(j)]);
        }
        table[a] = m;
    }
    return table;
}

// xorshift-style generator for the deterministic power-iteration start; the
// seed mixes in the partition mask so every partition gets its own vector.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Candidate {
    double lambda_sq = -1.0;
    std::size_t order = static_cast<std::size_t>(-1);  // canonical enumeration index

    bool better_than(const Candidate& other) const {
        if (lambda_sq != other.lambda_sq) return lambda_sq > other.lambda_sq;
        return order < other.order;  // exact tie: first in canonical order wins
    }
};

}  // namespace

double concurrence(const DensityMatrix& rho) {
    if (rho.n_sub != 2 || rho.entries.rows() != 4 || rho.entries.cols() != 4) {
        throw std::invalid_argument("concurrence: need a two-qubit density matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> psd_check(rho.entries);
    if (psd_check.eigenvalues().minCoeff() < -1e-8) {
        throw std::invalid_argument("concurrence: density matrix is not PSD (min eigenvalue " +
                                    std::to_string(psd_check.eigenvalues().minCoeff()) + ")");
    }

    const Eigen::Matrix4d k = rho.entries * spin_flip_matrix();
    Eigen::EigenSolver<Eigen::Matrix4d> es(k, /*computeEigenvectors=*/false);
    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) lambda[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(lambda.begin(), lambda.end(), std::greater<double>());
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

std::vector<Bipartition> enumerate_bipartitions(int n_sites, std::optional<int> max_size_a) {
    if (n_sites < 2 || n_sites > 24) {
        throw std::invalid_argument("enumerate_bipartitions: n_sites out of range");
    }
    const int cap = max_size_a.value_or((n_sites + 1) / 2);
    std::vector<Bipartition> parts;
    for (int size = 1; size < n_sites; ++size) {
        const int min_side = std::min(size, n_sites - size);
        if (min_side > cap) continue;
        // Masks containing site 0 with `size` bits, ascending: Gosper's hack
        // over the remaining n-1 sites, shifted up and joined with bit 0.
        const int k = size - 1;
        const std::uint32_t limit = std::uint32_t{1} << (n_sites - 1);
        if (k == 0) {
            parts.push_back({1u, size, n_sites});
            continue;
        }
        std::uint32_t m = (std::uint32_t{1} << k) - 1;
        while (m < limit) {
            parts.push_back({(m << 1) | 1u, size, n_sites});
            const std::uint32_t c = m & -m;
            const std::uint32_t ripple = m + c;
            m = ripple | (((m ^ ripple) >> 2) / c);
        }
    }
    return parts;
}

double max_schmidt_sq(const FullStateVector& state, const Bipartition& part) {
    const int n = state.n_sites;
    if (part.n_sites != n || part.part_a == 0 || part.size_a <= 0 || part.size_a >= n ||
        (part.part_a & 1u) == 0 ||
        std::popcount(part.part_a) != part.size_a) {
        throw std::invalid_argument("max_schmidt_sq: invalid canonical partition");
    }
    const std::uint32_t all = (std::uint32_t{1} << n) - 1;
    // Work on the smaller side; its reduced state shares the nonzero spectrum.
    const bool a_small = part.size_a <= n - part.size_a;
    const std::uint32_t small_mask = a_small ? part.part_a : (all & ~part.part_a);
    const std::uint32_t big_mask = all & ~small_mask;
    const auto scatter_s = scatter_table(small_mask, n);
    const auto scatter_b = scatter_table(big_mask, n);
    const std::size_t ds = scatter_s.size();
    const std::size_t db = scatter_b.size();

    // Row-major gather of the reshaped state, rows on the small side.
    std::vector<double> m(ds * db);
    for (std::size_t a = 0; a < ds; ++a) {
        const std::uint32_t base = scatter_s[a];
        double* row = m.data() + a * db;
        for (std::size_t b = 0; b < db; ++b) {
            row[b] = state.amplitudes[base | scatter_b[b]];
        }
    }

    if (ds <= 64) {
        Eigen::MatrixXd gram(static_cast<Eigen::Index>(ds), static_cast<Eigen::Index>(ds));
        for (std::size_t i = 0; i < ds; ++i) {
            for (std::size_t j = i; j < ds; ++j) {
                double s = 0.0;
                const double* ri = m.data() + i * db;
                const double* rj = m.data() + j * db;
                for (std::size_t b = 0; b < db; ++b) s += ri[b] * rj[b];
                gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
                gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    }

    // Power iteration on M M^T without forming the Gram matrix. The Rayleigh
    // quotient of a unit v is |M^T v|^2, monotone under the iteration.
    std::uint64_t seed = 0x5851f42d4c957f2dULL ^ (static_cast<std::uint64_t>(part.part_a) << 20);
    std::vector<double> v(ds), y(db), w(ds);
    double vnorm2 = 0.0;
    for (double& x : v) {
        x = static_cast<double>(splitmix64(seed) >> 11) * (2.0 / 9007199254740992.0) - 1.0;
        vnorm2 += x * x;
    }
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (double& x : v) x *= inv;

    double lambda = 0.0;
    const int max_iter = 100000;
    for (int it = 0; it < max_iter; ++it) {
        // y = M^T v
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t a = 0; a < ds; ++a) {
            const double va = v[a];
            if (va == 0.0) continue;
            const double* row = m.data() + a * db;
            for (std::size_t b = 0; b < db; ++b) y[b] += va * row[b];
        }
        double lambda_new = 0.0;
        for (std::size_t b = 0; b < db; ++b) lambda_new += y[b] * y[b];
        // w = M y
        double wnorm2 = 0.0;
        for (std::size_t a = 0; a < ds; ++a) {
            const double* row = m.data() + a * db;
            double s = 0.0;
            for (std::size_t b = 0; b < db; ++b) s += row[b] * y[b];
            w[a] = s;
            wnorm2 += s * s;
        }
        if (wnorm2 <= 0.0) {
            // Start vector landed in the null space; draw a fresh one.
            double n2 = 0.0;
            for (double& x : v) {
                x = static_cast<double>(splitmix64(seed) >> 11) * (2.0 / 9007199254740992.0) - 1.0;
                n2 += x * x;
            }
            const double ninv = 1.0 / std::sqrt(n2);
            for (double& x : v) x *= ninv;
            lambda = 0.0;
            continue;
        }
        const double winv = 1.0 / std::sqrt(wnorm2);
        for (std::size_t a = 0; a < ds; ++a) v[a] = w[a] * winv;
        if (std::abs(lambda_new - lambda) <= 1e-12 * std::max(1.0, lambda_new)) {
            return lambda_new;
        }
        lambda = lambda_new;
    }
    return lambda;
}

GgmResult ggm(const FullStateVector& state, std::optional<int> restriction, int workers) {
    const double nrm = state.norm();
    if (std::abs(nrm - 1.0) > 1e-10) {
        throw std::invalid_argument("ggm: state is not normalized (|norm - 1| = " +
                                    std::to_string(std::abs(nrm - 1.0)) + ")");
    }
    const auto parts = enumerate_bipartitions(state.n_sites, restriction);
    const std::size_t total = parts.size();
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));

    auto scan_range = [&](std::size_t begin, std::size_t end) {
        Candidate best;
        for (std::size_t i = begin; i < end; ++i) {
            Candidate c{max_schmidt_sq(state, parts[i]), i};
            if (c.better_than(best)) best = c;
        }
        return best;
    };

    Candidate best;
    if (n_workers == 1) {
        best = scan_range(0, total);
    } else {
        std::vector<Candidate> local(static_cast<std::size_t>(n_workers));
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        const std::size_t chunk = 32;
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                Candidate mine;
                for (;;) {
                    const std::size_t begin = next.fetch_add(chunk);
                    if (begin >= total) break;
                    const Candidate c = scan_range(begin, std::min(begin + chunk, total));
                    if (c.better_than(mine)) mine = c;
                }
                local[static_cast<std::size_t>(w)] = mine;
            });
        }
        for (auto& th : pool) th.join();
        for (const Candidate& c : local) {
            if (c.order != static_cast<std::size_t>(-1) && c.better_than(best)) best = c;
        }
    }

    GgmResult result;
    result.lambda_max_sq = best.lambda_sq;
    result.value = std::max(0.0, 1.0 - best.lambda_sq);
    result.argmax_partition = parts[best.order];
    result.restricted = restriction.has_value() && *restriction < state.n_sites / 2;
    return result;
}

}  // namespace xxz
