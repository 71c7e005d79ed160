"""Dense exact diagonalization and phase sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .basis import FockBasis
from .errors import NumericalContractError
from .hamiltonians import HermitianOperator, ModelParams, build_site_hamiltonian
from .util import parallel_map, write_csv

#: Relative tolerances on the eigensolver's own output, checked on every call.
RESIDUAL_RTOL = 1e-9
ORTHONORMALITY_ATOL = 1e-9


@dataclass
class EigenResult:
    """Eigenvalues (ascending) and matching eigenvectors (columns)."""

    energies: np.ndarray
    vectors: np.ndarray
    basis: FockBasis | None = None
    params: ModelParams | None = None

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def ground_vector(self) -> np.ndarray:
        return self.vectors[:, 0]


def eigensolve(operator: HermitianOperator | np.ndarray, n_levels: int | None = None) -> EigenResult:
    """Full dense Hermitian diagonalization, optionally truncated to ``n_levels``.

    Raises a numerical-contract error for non-Hermitian input, and verifies
    the residual and orthonormality guarantees on the returned pairs.
    """
    basis = params = None
    if isinstance(operator, HermitianOperator):
        matrix = operator.matrix
        basis, params = operator.basis, operator.params
    else:
        matrix = np.asarray(operator, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise NumericalContractError(f"expected a square matrix, got shape {matrix.shape}")
        deviation = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
        if deviation > 1e-12:
            raise NumericalContractError(
                f"eigensolve requires a hermitian matrix: max |H - H^dagger| = {deviation:.3e}"
            )
    energies, vectors = np.linalg.eigh(matrix)

    scale = max(float(np.max(np.abs(energies))), 1e-300)
    residual = np.max(np.abs(matrix @ vectors - vectors * energies))
    if residual > RESIDUAL_RTOL * scale:
        raise NumericalContractError(f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_RTOL} * |H|")
    gram = vectors.conj().T @ vectors
    ortho = np.max(np.abs(gram - np.eye(gram.shape[0])))
    if ortho > ORTHONORMALITY_ATOL:
        raise NumericalContractError(f"eigenvector orthonormality defect {ortho:.3e}")

    if n_levels is not None:
        n_levels = min(int(n_levels), len(energies))
        energies = energies[:n_levels]
        vectors = vectors[:, :n_levels]
    return EigenResult(energies=energies, vectors=vectors, basis=basis, params=params)


@dataclass
class SpectrumTable:
    """Lowest levels of the ring Hamiltonian on a grid of phase twists."""

    phis: np.ndarray
    n_levels: int
    energies: np.ndarray  # shape (len(phis), n_levels)
    params: ModelParams

    def rows(self):
        for i, phi in enumerate(self.phis):
            for level in range(self.n_levels):
                yield (float(phi), level, float(self.energies[i, level]))

    def to_csv(self, path, comment: str | None = None) -> None:
        write_csv(path, ("phi", "level", "energy"), self.rows(), comment=comment)


def spectrum_sweep(
    params: ModelParams,
    phi_grid: Sequence[float],
    n_levels: int = 6,
    threads: int = 1,
) -> SpectrumTable:
    """Diagonalize the site Hamiltonian at each phase of ``phi_grid``."""
    phis = np.asarray(list(phi_grid), dtype=float)
    dim = (params.n + 1) * (params.n + 2) // 2
    n_levels = max(1, min(int(n_levels), dim))

    def solve_one(phi: float) -> np.ndarray:
        h = build_site_hamiltonian(params.with_phi(phi))
        return eigensolve(h, n_levels=n_levels).energies

    levels = parallel_map(solve_one, list(phis), threads=threads)
    return SpectrumTable(
        phis=phis, n_levels=n_levels, energies=np.array(levels), params=params
    )
