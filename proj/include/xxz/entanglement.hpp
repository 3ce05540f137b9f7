#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xxz/state_analysis.hpp"

namespace xxz {

/// One A:B split of the sites. The stored representative always contains
/// site 0, so each split appears exactly once.
struct Bipartition {
    std::uint32_t part_a = 0;
    int size_a = 0;
    int n_sites = 0;

    int min_side() const { return size_a < n_sites - size_a ? size_a : n_sites - size_a; }
};

struct GgmResult {
    double value = 0.0;           // 1 - lambda_max_sq, clamped at 0
    double lambda_max_sq = 1.0;   // maximizing squared Schmidt coefficient
    Bipartition argmax_partition;
    bool restricted = false;      // true when the enumerated family was capped
};

/// Wootters concurrence of a two-qubit density matrix. For the real symmetric
/// matrices produced here, the square roots of the eigenvalues of
/// rho * rho_tilde equal the absolute eigenvalues of rho * (sigma_y x sigma_y),
/// which is what gets computed (it avoids taking square roots of eigenvalues
/// that are zero up to rounding). Rejects inputs that are not positive
/// semidefinite beyond tolerance.
double concurrence(const DensityMatrix& rho);

/// Every canonical bipartition (site 0 in A) exactly once, ordered by
/// ascending size of A then ascending mask: 2^(N-1) - 1 splits in total.
/// max_size_a, when given, keeps only splits whose smaller side has at most
/// that many sites (the default, half the sites rounded up, keeps all of
/// them); a capped family makes downstream GGM values bounds, not exact.
std::vector<Bipartition> enumerate_bipartitions(int n_sites,
                                                std::optional<int> max_size_a = std::nullopt);

/// Largest squared Schmidt coefficient of the state across the split: the top
/// eigenvalue of the reduced state of the smaller side. Dense symmetric
/// eigensolve for side dimension <= 64; deterministic power iteration with
/// tolerance 1e-12 above that.
double max_schmidt_sq(const FullStateVector& state, const Bipartition& part);

/// Generalized geometric measure: 1 minus the maximum of max_schmidt_sq over
/// the enumerated bipartition family. The bipartition loop may run on several
/// workers; the reduction is order-independent and ties resolve in canonical
/// enumeration order, so the result does not depend on the worker count.
GgmResult ggm(const FullStateVector& state, std::optional<int> restriction = std::nullopt,
              int workers = 1);

}  // namespace xxz
