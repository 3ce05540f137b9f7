#include "xxz/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xxz {

void LadderSpec::validate() const {
    if (n_rungs < 3) {
        throw std::invalid_argument("LadderSpec: n_rungs must be >= 3 with periodic boundary, got " +
                                    std::to_string(n_rungs));
    }
    if (!std::isfinite(j_leg) || !std::isfinite(j_rung) || !std::isfinite(delta)) {
        throw std::invalid_argument("LadderSpec: couplings must be finite");
    }
}

int site_index(const LadderSpec& spec, int rung, int leg) {
    if (rung < 0 || rung >= spec.n_rungs) {
        throw std::invalid_argument("site_index: rung " + std::to_string(rung) + " out of range [0, " +
                                    std::to_string(spec.n_rungs) + ")");
    }
    if (leg != 0 && leg != 1) {
        throw std::invalid_argument("site_index: leg must be 0 or 1, got " + std::to_string(leg));
    }
    return 2 * rung + leg;
}

std::vector<Bond> ladder_bonds(const LadderSpec& spec) {
    spec.validate();
    std::vector<Bond> bonds;
    bonds.reserve(3 * spec.n_rungs);
    const int r = spec.n_rungs;
    for (int i = 0; i < r; ++i) {
        for (int leg = 0; leg < 2; ++leg) {
            bonds.push_back({site_index(spec, i, leg), site_index(spec, (i + 1) % r, leg), spec.j_leg});
        }
        bonds.push_back({site_index(spec, i, 0), site_index(spec, i, 1), spec.j_rung});
    }
    return bonds;
}

std::vector<std::pair<int, int>> nn_leg_pairs(const LadderSpec& spec) {
    std::vector<std::pair<int, int>> pairs;
    const int r = spec.n_rungs;
    for (int i = 0; i < r; ++i) {
        for (int leg = 0; leg < 2; ++leg) {
            pairs.emplace_back(site_index(spec, i, leg), site_index(spec, (i + 1) % r, leg));
        }
    }
    return pairs;
}

std::vector<std::pair<int, int>> nn_rung_pairs(const LadderSpec& spec) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < spec.n_rungs; ++i) {
        pairs.emplace_back(site_index(spec, i, 0), site_index(spec, i, 1));
    }
    return pairs;
}

SectorBasis::SectorBasis(int n_sites, int sz_total) : n_sites_(n_sites), sz_total_(sz_total) {
    if (n_sites < 1 || n_sites > 24) {
        throw std::invalid_argument("SectorBasis: n_sites must be in [1, 24], got " +
                                    std::to_string(n_sites));
    }
    if (std::abs(sz_total) > n_sites || (n_sites + sz_total) % 2 != 0) {
        throw std::invalid_argument("SectorBasis: sz_total " + std::to_string(sz_total) +
                                    " has wrong parity or magnitude for n_sites " +
                                    std::to_string(n_sites));
    }
    const int n_up = (n_sites + sz_total) / 2;
    const std::uint32_t limit = std::uint32_t{1} << n_sites;

    if (n_up == 0) {
        states_.push_back(0);
    } else {
        // Gosper's hack walks popcount-n_up masks in ascending order.
        std::uint32_t m = (std::uint32_t{1} << n_up) - 1;
        while (m < limit) {
            states_.push_back(m);
            const std::uint32_t c = m & -m;
            const std::uint32_t ripple = m + c;
            m = ripple | (((m ^ ripple) >> 2) / c);
            if (c == 0) break;  // unreachable for m != 0, kept as a guard
        }
    }

    rank_.assign(limit, -1);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        rank_[states_[i]] = static_cast<std::int32_t>(i);
    }
}

std::int64_t SectorBasis::rank_of(std::uint32_t mask) const {
    if (mask >= rank_.size()) return -1;
    return rank_[mask];
}

SectorBasis enumerate_sector_basis(int n_sites, int sz_total) {
    return SectorBasis(n_sites, sz_total);
}

bool SparseSymmetricMatrix::is_symmetric(double tol) const {
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) {
            const std::uint32_t j = col[k];
            if (j == i) continue;
            // binary search for (j, i)
            const auto begin = this->col.begin() + static_cast<std::ptrdiff_t>(row_start[j]);
            const auto end = this->col.begin() + static_cast<std::ptrdiff_t>(row_start[j + 1]);
            const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(i));
            if (it == end || *it != i) return false;
            const std::size_t pos = static_cast<std::size_t>(it - this->col.begin());
            if (std::abs(val[pos] - val[k]) > tol) return false;
        }
    }
    return true;
}

SparseSymmetricMatrix SparseSymmetricMatrix::identity(std::size_t n) {
    SparseSymmetricMatrix m;
    m.dim = n;
    m.row_start.resize(n + 1);
    m.col.resize(n);
    m.val.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_start[i] = i;
        m.col[i] = static_cast<std::uint32_t>(i);
    }
    m.row_start[n] = n;
    return m;
}

SparseSymmetricMatrix build_hamiltonian(const LadderSpec& spec, const SectorBasis& basis) {
    spec.validate();
    if (basis.n_sites() != spec.n_sites()) {
        throw std::invalid_argument("build_hamiltonian: basis has " + std::to_string(basis.n_sites()) +
                                    " sites, spec has " + std::to_string(spec.n_sites()));
    }
    const auto bonds = ladder_bonds(spec);
    const std::size_t dim = basis.size();

    SparseSymmetricMatrix h;
    h.dim = dim;
    h.row_start.resize(dim + 1);
    h.col.reserve(dim * (bonds.size() / 2 + 1));
    h.val.reserve(dim * (bonds.size() / 2 + 1));

    std::vector<std::pair<std::uint32_t, double>> row;
    row.reserve(bonds.size() + 1);

    for (std::size_t r = 0; r < dim; ++r) {
        h.row_start[r] = h.col.size();
        const std::uint32_t m = basis.state(r);
        row.clear();
        // Per-leg and rung contributions accumulate separately so that the
        // leg-swap permutation maps diagonals onto each other bit-exactly
        // (a single running sum would reassociate across the swap).
        double diag_leg[2] = {0.0, 0.0};
        double diag_rung = 0.0;
        for (const Bond& b : bonds) {
            const bool ba = (m >> b.a) & 1u;
            const bool bb = (m >> b.b) & 1u;
            const double term = (ba == bb) ? b.j * spec.delta : -b.j * spec.delta;
            if ((b.a & 1) == (b.b & 1)) {
                diag_leg[b.a & 1] += term;
            } else {
                diag_rung += term;
            }
            if (ba != bb && b.j != 0.0) {
                const std::uint32_t flipped = m ^ ((1u << b.a) | (1u << b.b));
                const std::int64_t c = basis.rank_of(flipped);
                // Sector closure: the swap preserves popcount, so c >= 0 always.
                row.emplace_back(static_cast<std::uint32_t>(c), 2.0 * b.j);
            }
        }
        row.emplace_back(static_cast<std::uint32_t>(r), (diag_leg[0] + diag_leg[1]) + diag_rung);
        std::sort(row.begin(), row.end());
        // Distinct bonds flip distinct bit pairs, so duplicate columns cannot
        // occur for n_rungs >= 3; merge anyway to keep the invariant local.
        for (const auto& [c, v] : row) {
            if (h.col.size() > h.row_start[r] && h.col.back() == c) {
                h.val.back() += v;
            } else {
                h.col.push_back(c);
                h.val.push_back(v);
            }
        }
    }
    h.row_start[dim] = h.col.size();
    return h;
}

void apply_hamiltonian(const SparseSymmetricMatrix& m, const std::vector<double>& x,
                       std::vector<double>& y) {
    if (x.size() != m.dim) {
        throw std::invalid_argument("apply_hamiltonian: vector length " + std::to_string(x.size()) +
                                    " != dim " + std::to_string(m.dim));
    }
    y.resize(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        double acc = 0.0;
        for (std::size_t k = m.row_start[i]; k < m.row_start[i + 1]; ++k) {
            acc += m.val[k] * x[m.col[k]];
        }
        y[i] = acc;
    }
}

std::vector<double> apply_hamiltonian(const SparseSymmetricMatrix& m, const std::vector<double>& x) {
    std::vector<double> y;
    apply_hamiltonian(m, x, y);
    return y;
}

}  // namespace xxz
