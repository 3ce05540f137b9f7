#include "xxz/state_analysis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xxz {

namespace {

void check_state(const FullStateVector& state) {
    if (state.n_sites < 1 || state.n_sites > 24) {
        throw std::invalid_argument("state: n_sites out of range");
    }
    if (state.amplitudes.size() != (std::size_t{1} << state.n_sites)) {
        throw std::invalid_argument("state: amplitude count != 2^n_sites");
    }
}

// Masks composed from subset bit patterns: scatter[a] places the bits of the
// subset-local index a onto the subset's site positions, ascending site order
// mapping to most-significant-first local bits.
std::vector<std::uint32_t> scatter_table(const std::vector<int>& sites) {
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

std::vector<int> mask_to_sites(std::uint32_t mask, int n_sites) {
    std::vector<int> sites;
    for (int s = 0; s < n_sites; ++s) {
        if ((mask >> s) & 1u) sites.push_back(s);
    }
    return sites;
}

}  // namespace

double FullStateVector::norm() const {
    double s = 0.0;
    for (double a : amplitudes) s += a * a;
    return std::sqrt(s);
}

FullStateVector embed_to_full(const std::vector<double>& psi_sector, const SectorBasis& basis) {
    if (psi_sector.size() != basis.size()) {
        throw std::invalid_argument("embed_to_full: sector vector length " +
                                    std::to_string(psi_sector.size()) + " != basis size " +
                                    std::to_string(basis.size()));
    }
    FullStateVector full;
    full.n_sites = basis.n_sites();
    full.amplitudes.assign(std::size_t{1} << basis.n_sites(), 0.0);
    for (std::size_t r = 0; r < basis.size(); ++r) {
        full.amplitudes[basis.state(r)] = psi_sector[r];
    }
    return full;
}

DensityMatrix partial_trace(const FullStateVector& state, std::uint32_t kept_sites_mask) {
    check_state(state);
    const std::uint32_t all = (std::uint32_t{1} << state.n_sites) - 1;
    if (kept_sites_mask == 0 || kept_sites_mask == all || (kept_sites_mask & ~all) != 0) {
        throw std::invalid_argument("partial_trace: subset must be a nonempty proper subset");
    }
    const auto kept = mask_to_sites(kept_sites_mask, state.n_sites);
    const auto traced = mask_to_sites(all & ~kept_sites_mask, state.n_sites);
    const auto scatter_a = scatter_table(kept);
    const auto scatter_b = scatter_table(traced);
    const std::size_t da = scatter_a.size();
    const std::size_t db = scatter_b.size();

    Eigen::MatrixXd m(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
    for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t b = 0; b < db; ++b) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                state.amplitudes[scatter_a[a] | scatter_b[b]];
        }
    }

    DensityMatrix rho;
    rho.n_sub = static_cast<int>(kept.size());
    rho.entries = m * m.transpose();
    return rho;
}

DensityMatrix two_site_rdm(const FullStateVector& state, int site_a, int site_b) {
    check_state(state);
    if (site_a == site_b) {
        throw std::invalid_argument("two_site_rdm: coincident sites");
    }
    if (site_a < 0 || site_a >= state.n_sites || site_b < 0 || site_b >= state.n_sites) {
        throw std::invalid_argument("two_site_rdm: site out of range");
    }
    const std::uint32_t all = (std::uint32_t{1} << state.n_sites) - 1;
    const std::uint32_t pair_mask = (1u << site_a) | (1u << site_b);
    const auto traced = mask_to_sites(all & ~pair_mask, state.n_sites);
    const auto scatter_b = scatter_table(traced);
    const std::size_t db = scatter_b.size();

    // Explicit (site_a, site_b) ordering: site_a supplies the high bit even
    // when site_a > site_b.
    Eigen::MatrixXd m(4, static_cast<Eigen::Index>(db));
    for (std::uint32_t a = 0; a < 4; ++a) {
        std::uint32_t base = 0;
        if (a & 2u) base |= (1u << site_a);
        if (a & 1u) base |= (1u << site_b);
        for (std::size_t b = 0; b < db; ++b) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                state.amplitudes[base | scatter_b[b]];
        }
    }

    DensityMatrix rho;
    rho.n_sub = 2;
    rho.entries = m * m.transpose();
    return rho;
}

double pauli_pair_expectation(const DensityMatrix& rho, Axis first, Axis second) {
    if (rho.n_sub != 2) throw std::invalid_argument("pauli_pair_expectation: need a two-site RDM");
    const Eigen::MatrixXd& r = rho.entries;
    if (first == Axis::y || second == Axis::y) {
        if (first == Axis::y && second == Axis::y) {
            // Real form of sigma_y x sigma_y.
            return -r(0, 3) + r(1, 2) + r(2, 1) - r(3, 0);
        }
        // A single sigma_y against a real symmetric RDM traces to zero:
        // tr(rho (sigma_y x s)) picks up i*(antisymmetric part) only.
        return 0.0;
    }
    auto single = [](Axis ax) {
        Eigen::Matrix2d s;
        if (ax == Axis::x) {
            s << 0, 1, 1, 0;
        } else {
            s << -1, 0, 0, 1;
        }
        return s;
    };
    const Eigen::Matrix2d sa = single(first);
    const Eigen::Matrix2d sb = single(second);
    Eigen::Matrix4d op;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) op(2 * i + k, 2 * j + l) = sa(i, j) * sb(k, l);
    return (r * op).trace();
}

double pauli_single_expectation(const DensityMatrix& rho, int which, Axis axis) {
    if (rho.n_sub != 2) throw std::invalid_argument("pauli_single_expectation: need a two-site RDM");
    if (which != 0 && which != 1) throw std::invalid_argument("pauli_single_expectation: which must be 0 or 1");
    const Eigen::MatrixXd& r = rho.entries;
    switch (axis) {
        case Axis::x:
            return which == 0 ? r(0, 2) + r(1, 3) + r(2, 0) + r(3, 1)
                              : r(0, 1) + r(1, 0) + r(2, 3) + r(3, 2);
        case Axis::y:
            return 0.0;  // i*(rho_ij - rho_ji) vanishes on real symmetric rho
        case Axis::z:
            return which == 0 ? -r(0, 0) - r(1, 1) + r(2, 2) + r(3, 3)
                              : -r(0, 0) + r(1, 1) - r(2, 2) + r(3, 3);
    }
    return 0.0;
}

double spin_correlation(const FullStateVector& state, int site_i, int site_j, Axis axis) {
    const DensityMatrix rho = two_site_rdm(state, site_i, site_j);
    const double pair = pauli_pair_expectation(rho, axis, axis);
    const double si = pauli_single_expectation(rho, 0, axis);
    const double sj = pauli_single_expectation(rho, 1, axis);
    return pair - si * sj;
}

double site_magnetization(const FullStateVector& state, int site, Axis axis) {
    check_state(state);
    if (site < 0 || site >= state.n_sites) {
        throw std::invalid_argument("site_magnetization: site out of range");
    }
    const DensityMatrix rho = partial_trace(state, 1u << site);
    const Eigen::MatrixXd& r = rho.entries;
    switch (axis) {
        case Axis::x: return r(0, 1) + r(1, 0);
        case Axis::y: return 0.0;
        case Axis::z: return r(1, 1) - r(0, 0);
    }
    return 0.0;
}

}  // namespace xxz
