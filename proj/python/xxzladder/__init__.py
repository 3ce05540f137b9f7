"""Exact diagonalization and entanglement analysis of two-leg spin-1/2 XXZ ladders."""

from xxzladder._core import (
    GgmResult,
    GroundStateResult,
    LadderSpec,
    ScanRecord,
    SectorBasis,
    SparseSymmetricMatrix,
    build_hamiltonian,
    concurrence,
    dense_eigenvalues,
    embed_to_full,
    enumerate_sector_basis,
    evaluate_point,
    ggm,
    lanczos_extremal,
    partial_trace,
    records_to_csv,
    run_phase_scan,
    site_index,
    spin_correlation,
    two_site_rdm,
)

__all__ = [
    "GgmResult",
    "GroundStateResult",
    "LadderSpec",
    "ScanRecord",
    "SectorBasis",
    "SparseSymmetricMatrix",
    "build_hamiltonian",
    "concurrence",
    "dense_eigenvalues",
    "embed_to_full",
    "enumerate_sector_basis",
    "evaluate_point",
    "ggm",
    "lanczos_extremal",
    "partial_trace",
    "records_to_csv",
    "run_phase_scan",
    "site_index",
    "spin_correlation",
    "two_site_rdm",
]
