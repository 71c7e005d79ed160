"""Cat-state diagnostics of exact ground states near the flow anti-crossing.

The ground state near phi = pi is dominated by the pair of flow Fock states
|N,0,0> (no flow) and |0,N,0> (one clockwise quantum per atom).  The metrics
report the two amplitudes a0 and a1, their magnitude ratio, relative phase,
and the weight |a0|^2 + |a1|^2 captured by the pair.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .basis import FockBasis, embed_single_flow
from .errors import NumericalContractError
from .hamiltonians import ModelParams, build_site_hamiltonian
from .solver import eigensolve
from .util import parallel_map, write_csv

#: Offsets smaller than this are treated as sitting exactly on the crossing,
#: where the two lowest levels are quasi-degenerate.
CROSSING_DPHI_ATOL = 1e-12


@dataclass
class CatMetrics:
    """Amplitudes of the two cat components in a normalised state."""

    a0: complex
    a1: complex
    ratio: float
    theta: float
    captured_norm: float
    diverged: bool = False


def _pair_amplitudes(state: np.ndarray, basis: FockBasis) -> tuple[complex, complex]:
    n = basis.n
    if basis.interpretation == "flow":
        return complex(state[basis.index((n, 0, 0))]), complex(state[basis.index((0, n, 0))])
    e0 = embed_single_flow(n, 0)
    e1 = embed_single_flow(n, 1)
    return complex(e0.conj() @ state), complex(e1.conj() @ state)


def cat_amplitudes(state: Sequence[complex], basis: FockBasis) -> CatMetrics:
    """Cat metrics of a state given in the site or flow basis.

    The global phase is fixed so that a0 is real and non-negative (if a0
    vanishes, so that a1 is); theta is then arg(a1) in (-pi, pi].  A vanishing
    a1 with finite a0 is reported as an infinite ratio and flagged.
    """
    vec = np.asarray(state, dtype=complex)
    if vec.shape != (basis.dimension,):
        raise NumericalContractError(
            f"state has shape {vec.shape}, basis dimension is {basis.dimension}"
        )
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise NumericalContractError("cannot compute cat metrics of a zero state")
    vec = vec / norm

    a0, a1 = _pair_amplitudes(vec, basis)
    reference = a0 if abs(a0) > 0.0 else a1
    if abs(reference) > 0.0:
        rotation = cmath.exp(-1j * cmath.phase(reference))
        a0 *= rotation
        a1 *= rotation
        a0 = complex(a0.real, 0.0) if abs(a0) > 0.0 else a0

    diverged = abs(a1) == 0.0
    if diverged:
        ratio = math.inf if abs(a0) > 0.0 else math.nan
    else:
        ratio = abs(a0) / abs(a1)
    return CatMetrics(
        a0=a0,
        a1=a1,
        ratio=ratio,
        theta=float(np.angle(a1)),
        captured_norm=abs(a0) ** 2 + abs(a1) ** 2,
        diverged=diverged,
    )


def crossing_pair_state(vectors: np.ndarray, basis: FockBasis) -> np.ndarray:
    """Combination of two quasi-degenerate vectors maximising the cat weight.

    On the crossing the solver may return an arbitrary basis of the lowest
    two-dimensional subspace; the metrics are evaluated on the combination
    that maximises |a0|^2 + |a1|^2, i.e. the top eigenvector of the 2x2 Gram
    matrix of the projections onto the cat pair.
    """
    n = basis.n
    e0 = embed_single_flow(n, 0)
    e1 = embed_single_flow(n, 1)
    a = np.vstack([e0.conj() @ vectors, e1.conj() @ vectors])  # (2, n_vectors)
    gram = a.conj().T @ a
    eigvals, eigvecs = np.linalg.eigh(gram)
    return vectors @ eigvecs[:, -1]


@dataclass
class CatScanTable:
    """Cat metrics of the exact ground state over a grid of offsets from pi."""

    n: int
    u_over_j: float
    dphis: np.ndarray
    metrics: list[CatMetrics]
    ratio_analytic: np.ndarray
    params: ModelParams

    def rows(self):
        for i in range(len(self.dphis)):
            m = self.metrics[i]
            yield (
                self.n,
                self.u_over_j,
                float(self.dphis[i]),
                m.a0.real,
                m.a0.imag,
                m.a1.real,
                m.a1.imag,
                m.ratio,
                m.captured_norm,
                float(self.ratio_analytic[i]),
            )

    def to_csv(self, path, comment: str | None = None) -> None:
        header = (
            "N", "u_over_j", "dphi", "a0_re", "a0_im", "a1_re", "a1_im",
            "ratio", "captured_norm", "ratio_analytic",
        )
        write_csv(path, header, self.rows(), comment=comment)


def ground_cat_metrics(params: ModelParams, dphi: float) -> CatMetrics:
    """Cat metrics of the exact ground state at phase twist pi + dphi."""
    operator = build_site_hamiltonian(params.with_phi(math.pi + dphi))
    result = eigensolve(operator, n_levels=2)
    if abs(dphi) <= CROSSING_DPHI_ATOL and result.vectors.shape[1] >= 2:
        state = crossing_pair_state(result.vectors[:, :2], operator.basis)
    else:
        state = result.ground_vector
    return cat_amplitudes(state, operator.basis)


def catscan(
    params: ModelParams,
    dphi_grid: Sequence[float],
    threads: int = 1,
) -> CatScanTable:
    """Scan the exact cat metrics and the two-level prediction over offsets.

    The analytic ratio column requires equal tunnelling; with unequal bonds
    it is reported as nan.
    """
    from .effective import effective_point  # deferred to avoid an import cycle

    dphis = np.asarray(list(dphi_grid), dtype=float)

    def one(dphi: float) -> tuple[CatMetrics, float]:
        metrics = ground_cat_metrics(params, dphi)
        if params.equal_j:
            analytic = abs(effective_point(params, dphi).predicted_ratio)
        else:
            analytic = math.nan
        return metrics, analytic

    results = parallel_map(one, list(dphis), threads=threads)
    j1 = params.j1
    reference_u = params.u0 if params.dipolar else params.u
    return CatScanTable(
        n=params.n,
        u_over_j=(reference_u / j1) if j1 != 0 else math.nan,
        dphis=dphis,
        metrics=[m for m, _ in results],
        ratio_analytic=np.array([r for _, r in results]),
        params=params,
    )
