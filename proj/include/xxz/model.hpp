#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace xxz {

enum class Boundary { periodic };
enum class OperatorConvention { pauli };

/// Physical description of one two-leg ladder instance. Operators are Pauli
/// matrices (eigenvalues +-1); the z-z part of every bond is scaled by delta.
struct LadderSpec {
    int n_rungs = 8;     // total spins N = 2 * n_rungs
    double j_leg = 1.0;  // identical on both legs
    double j_rung = 1.0;
    double delta = 1.0;
    Boundary boundary = Boundary::periodic;
    OperatorConvention convention = OperatorConvention::pauli;

    int n_sites() const { return 2 * n_rungs; }

    /// Throws std::invalid_argument on non-finite couplings or n_rungs < 3
    /// (a periodic two-rung ladder would double-count its leg bonds).
    void validate() const;
};

/// Linear site label for rung r, leg l: 2*r + l. This is the bit position of
/// the site in every basis mask.
int site_index(const LadderSpec& spec, int rung, int leg);

struct Bond {
    int a;
    int b;
    double j;
};

/// All exchange bonds: each periodic leg bond once per leg, plus one rung
/// bond per rung (3 * n_rungs bonds total).
std::vector<Bond> ladder_bonds(const LadderSpec& spec);

/// Nearest-neighbour (site, site) pairs along the legs / along the rungs,
/// in a fixed canonical order. Used for averaged per-pair observables.
std::vector<std::pair<int, int>> nn_leg_pairs(const LadderSpec& spec);
std::vector<std::pair<int, int>> nn_rung_pairs(const LadderSpec& spec);

/// Enumerated basis of the fixed-magnetization subspace. Bit s of a mask set
/// means site s points up (sigma^z = +1); sz_total = n_up - n_down. Masks are
/// stored in ascending numeric order with an exact inverse rank lookup.
class SectorBasis {
  public:
    SectorBasis(int n_sites, int sz_total);

    int n_sites() const { return n_sites_; }
    int sz_total() const { return sz_total_; }
    std::size_t size() const { return states_.size(); }
    std::uint32_t state(std::size_t rank) const { return states_[rank]; }
    const std::vector<std::uint32_t>& states() const { return states_; }

    /// Rank of a mask in the sector, or -1 if the mask is not in it.
    std::int64_t rank_of(std::uint32_t mask) const;

  private:
    int n_sites_;
    int sz_total_;
    std::vector<std::uint32_t> states_;
    std::vector<std::int32_t> rank_;  // dense 2^n lookup table
};

SectorBasis enumerate_sector_basis(int n_sites, int sz_total);

/// Real symmetric sparse matrix in compressed-row layout. Every off-diagonal
/// entry is stored once per row (full pattern, not half), columns ascending
/// within each row.
struct SparseSymmetricMatrix {
    std::size_t dim = 0;
    std::vector<std::size_t> row_start;  // length dim + 1
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    std::size_t nnz() const { return col.size(); }
    bool is_symmetric(double tol = 1e-14) const;

    static SparseSymmetricMatrix identity(std::size_t n);
};

/// Sector Hamiltonian of H = H_legs + H_rungs in the Pauli convention.
/// Per bond with coupling J: diagonal J * delta * s_a * s_b with s = +-1 from
/// the mask bits; off-diagonal 2*J connecting masks that differ by swapping
/// one antiparallel pair (sigma^x sigma^x + sigma^y sigma^y flips |ud> <-> |du>
/// with amplitude 2 and annihilates parallel pairs).
SparseSymmetricMatrix build_hamiltonian(const LadderSpec& spec, const SectorBasis& basis);

/// y = m * x with deterministic summation order (ascending column per row).
void apply_hamiltonian(const SparseSymmetricMatrix& m, const std::vector<double>& x,
                       std::vector<double>& y);
std::vector<double> apply_hamiltonian(const SparseSymmetricMatrix& m,
                                      const std::vector<double>& x);

}  // namespace xxz
