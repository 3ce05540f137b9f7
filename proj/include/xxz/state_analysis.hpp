#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "xxz/model.hpp"

namespace xxz {

/// Pure state over the full 2^N computational basis; amplitudes[mask] with
/// bit s of the mask giving the orientation of site s (1 = up). Amplitudes
/// are real throughout this library.
struct FullStateVector {
    int n_sites = 0;
    std::vector<double> amplitudes;

    double norm() const;
};

/// Reduced state of a site subset. Real symmetric since the global amplitudes
/// are real. Basis convention: kept sites in ascending order map to bit
/// positions most-significant first, so for sites {a, b} with a < b the index
/// is (bit_a << 1) | bit_b and bit 1 means up.
struct DensityMatrix {
    int n_sub = 0;
    Eigen::MatrixXd entries;

    double trace() const { return entries.trace(); }
};

/// Lift a sector vector to the full Hilbert space: amplitude of mask m is
/// psi_sector[rank(m)] inside the sector and 0 elsewhere.
FullStateVector embed_to_full(const std::vector<double>& psi_sector, const SectorBasis& basis);

/// rho_A = Tr_B |psi><psi| for the sites in kept_sites_mask, computed by
/// gathering amplitudes into a 2^|A| x 2^|B| matrix and forming its row Gram
/// matrix. kept_sites_mask must be a nonempty proper subset.
DensityMatrix partial_trace(const FullStateVector& state, std::uint32_t kept_sites_mask);

/// 4x4 reduced state with explicit qubit order (site_a, site_b): site_a is
/// the more significant bit regardless of which site index is larger.
DensityMatrix two_site_rdm(const FullStateVector& state, int site_a, int site_b);

enum class Axis { x, y, z };

/// Expectation values from a two-site RDM in the ordering convention above.
double pauli_pair_expectation(const DensityMatrix& rho, Axis first, Axis second);
double pauli_single_expectation(const DensityMatrix& rho, int which, Axis axis);

/// Connected correlator <s^b_i s^b_j> - <s^b_i><s^b_j> of Pauli operators.
/// The single-site terms are evaluated and subtracted explicitly even though
/// they vanish analytically in the Sz = 0 sector.
double spin_correlation(const FullStateVector& state, int site_i, int site_j, Axis axis);

/// <sigma^axis_site> from the one-site reduced state.
double site_magnetization(const FullStateVector& state, int site, Axis axis);

}  // namespace xxz
