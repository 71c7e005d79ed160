"""Two-level reduction of the flow-state anti-crossing.

Near phase twist phi = pi the zero-flow state |N,0,0> and the single
clockwise-flow state |0,N,0> are quasi-degenerate.  Eliminating every other
flow state yields an effective 2x2 model

    [[E0 + eps, v01], [conj(v01), E0 - eps]]

with detuning eps(phi) = J N - 2 J N cos(phi/3) and an effective coupling
v01 obtained either by exact elimination (resolvent / partitioning) or by a
perturbative sum over coupling paths through intermediate states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .basis import FockBasis, quasimomentum_sector
from .errors import (
    NearResonantIntermediateError,
    NumericalContractError,
    UnsupportedConfigurationError,
)
from .hamiltonians import HermitianOperator, ModelParams, build_flow_hamiltonian, flow_hamiltonian_by_conjugation
from .util import parallel_map, write_csv

#: An eliminated state closer to the working energy than this (relative to the
#: operator scale) makes the resolvent ill-conditioned.
RESONANCE_RTOL = 1e-10


def epsilon_of_phi(params: ModelParams, phi: float) -> float:
    """Detuning of the zero-flow level from its crossing-point energy.

    eps(phi) = J N - 2 J N cos(phi/3); zero at phi = pi, negative at phi = 0,
    slope J N / sqrt(3) at the crossing.  Requires equal tunnelling.
    """
    if not params.equal_j:
        raise UnsupportedConfigurationError("detuning formula requires equal tunnelling")
    jn = params.j1 * params.n
    return jn - 2.0 * jn * math.cos(phi / 3.0)


@dataclass
class TwoLevelModel:
    """Prediction of the effective 2x2 anti-crossing model.

    ``predicted_energies`` is (E0 - r, E0 + r) with r = sqrt(eps^2 + |v01|^2);
    ``predicted_ratio`` is the signed ground-state amplitude ratio a0/a1 of
    the zero-flow and clockwise-flow components, -v01 / (eps + r); the
    excited branch uses the opposite sign of r.
    """

    e0: float
    eps: float
    v01: complex
    lam: float | None = None
    degenerate: bool = field(init=False, default=False)
    predicted_energies: tuple[float, float] = field(init=False, default=(0.0, 0.0))
    predicted_ratio: complex = field(init=False, default=0j)
    predicted_ratio_excited: complex = field(init=False, default=0j)

    def __post_init__(self):
        r = math.hypot(self.eps, abs(self.v01))
        self.predicted_energies = (self.e0 - r, self.e0 + r)
        self.degenerate = r == 0.0
        self.predicted_ratio = self._branch_ratio(+r)
        self.predicted_ratio_excited = self._branch_ratio(-r)

    def _branch_ratio(self, signed_r: float) -> complex:
        if self.degenerate:
            return complex(float("nan"), float("nan"))
        den = self.eps + signed_r
        if den == 0.0:
            return complex(float("inf"))
        return -self.v01 / den


def two_level_predict(e0: float, eps: float, v01: complex, lam: float | None = None) -> TwoLevelModel:
    """Evaluate the 2x2 model for a given detuning and coupling."""
    return TwoLevelModel(e0=float(e0), eps=float(eps), v01=complex(v01), lam=lam)


# ---------------------------------------------------------------------------
# Exact elimination (partitioning with a self-consistent working energy)
# ---------------------------------------------------------------------------


@dataclass
class LowdinResult:
    """Effective coupling from exact elimination of the intermediate space."""

    v01: complex
    lam: float
    heff: np.ndarray  # the converged 2x2 effective matrix
    iterations: int


def default_flow_targets(basis: FockBasis) -> tuple[int, int]:
    """Indices of |N,0,0> and |0,N,0> in a flow basis."""
    n = basis.n
    return basis.index((n, 0, 0)), basis.index((0, n, 0))


def _elimination_space(operator: HermitianOperator, targets: tuple[int, int]) -> np.ndarray:
    """Indices eliminated by the reduction.

    With equal tunnelling the quasi-momentum sectors decouple exactly, so when
    both targets live in one sector only that sector's other states matter;
    otherwise every non-target state is kept.
    """
    basis = operator.basis
    t0, t1 = targets
    indices = np.arange(basis.dimension)
    params = operator.params
    if params is not None and params.equal_j:
        k0 = quasimomentum_sector(basis.states[t0])
        k1 = quasimomentum_sector(basis.states[t1])
        if k0 == k1:
            sector = [i for i in indices if quasimomentum_sector(basis.states[i]) == k0]
            return np.array([i for i in sector if i not in (t0, t1)], dtype=np.intp)
    return np.array([i for i in indices if i not in (t0, t1)], dtype=np.intp)


def lowdin_coupling(
    operator: HermitianOperator,
    targets: tuple[int, int] | None = None,
    seed_energy: float | None = None,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> LowdinResult:
    """Exact effective coupling between two flow states.

    Builds H_eff(lam) = H_PP + H_PQ (lam - H_QQ)^{-1} H_QP over the target
    pair P and iterates lam to self-consistency with the resulting ground
    energy (|delta lam| < tol, at most ``max_iter`` steps).  The seed is the
    mean target diagonal, which at phi = pi is the shared crossing energy.

    Raises a near-resonant-intermediate error if an eliminated level sits on
    top of the working energy, and a numerical-contract error if the fixed
    point does not converge.
    """
    basis = operator.basis
    if basis.interpretation != "flow":
        raise UnsupportedConfigurationError("elimination expects a flow-basis operator")
    if targets is None:
        targets = default_flow_targets(basis)
    t0, t1 = targets
    h = operator.matrix
    q_indices = _elimination_space(operator, (t0, t1))

    h_pp = np.array([[h[t0, t0], h[t0, t1]], [h[t1, t0], h[t1, t1]]], dtype=complex)
    if len(q_indices) == 0:
        lam = float(np.linalg.eigvalsh(h_pp)[0])
        return LowdinResult(v01=complex(h_pp[0, 1]), lam=lam, heff=h_pp, iterations=0)

    h_qq = h[np.ix_(q_indices, q_indices)]
    h_qp = h[np.ix_(q_indices, [t0, t1])]
    e_q, z = np.linalg.eigh(h_qq)
    b = z.conj().T @ h_qp  # (dim Q, 2) in the eigenbasis of H_QQ
    scale = max(1.0, float(np.max(np.abs(operator.matrix))))

    def effective(lam: float) -> np.ndarray:
        gaps = lam - e_q
        nearest = int(np.argmin(np.abs(gaps)))
        if abs(gaps[nearest]) < RESONANCE_RTOL * scale:
            dominant = int(np.argmax(np.abs(z[:, nearest])))
            occ = basis.states[q_indices[dominant]]
            raise NearResonantIntermediateError(
                f"eliminated state {occ} lies within {abs(gaps[nearest]):.3e} of the "
                f"working energy {lam:.12g}",
                occupation=occ,
            )
        return h_pp + b.conj().T @ (b / gaps[:, None])

    lam = float(np.mean([h[t0, t0].real, h[t1, t1].real])) if seed_energy is None else float(seed_energy)
    heff = effective(lam)
    for iteration in range(1, max_iter + 1):
        lam_next = float(np.linalg.eigvalsh(heff)[0])
        heff = effective(lam_next)
        if abs(lam_next - lam) < tol:
            return LowdinResult(v01=complex(heff[0, 1]), lam=lam_next, heff=heff, iterations=iteration)
        lam = lam_next
    raise NumericalContractError(
        f"working-energy fixed point did not converge within {max_iter} iterations"
    )


# ---------------------------------------------------------------------------
# Coupling graph and perturbative path sum
# ---------------------------------------------------------------------------


@dataclass
class CouplingGraph:
    """States, diagonal energies and off-diagonal couplings of a flow operator."""

    basis: FockBasis | None
    diagonal: np.ndarray
    edges: dict[tuple[int, int], complex]  # keyed (i, j) with i < j
    adjacency: dict[int, tuple[int, ...]]

    def describe_state(self, i: int):
        return self.basis.states[i] if self.basis is not None else i

    def edge_value(self, i: int, j: int) -> complex:
        if i < j:
            return self.edges[(i, j)]
        return self.edges[(j, i)].conjugate()

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency.get(i, ())

    def connected_component(self, start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for other in self.neighbors(node):
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return seen

    def simple_paths(self, start: int, goal: int, max_intermediates: int) -> Iterator[tuple[int, ...]]:
        """Yield simple paths start -> goal with at most ``max_intermediates``
        states strictly between the endpoints, in deterministic order."""

        path = [start]
        on_path = {start}

        def extend() -> Iterator[tuple[int, ...]]:
            node = path[-1]
            for other in self.neighbors(node):
                if other == goal:
                    yield tuple(path) + (goal,)
                    continue
                if other in on_path or other == start or len(path) - 1 >= max_intermediates:
                    continue
                path.append(other)
                on_path.add(other)
                yield from extend()
                path.pop()
                on_path.remove(other)

        if start == goal:
            return
        yield from extend()


def build_coupling_graph(
    operator: HermitianOperator | np.ndarray, tol: float = 1e-14
) -> CouplingGraph:
    """Graph of states joined by matrix elements larger than ``tol``.

    Accepts a flow-basis operator or any dense Hermitian matrix (useful for
    explicit few-state models).
    """
    if isinstance(operator, HermitianOperator):
        h, basis = operator.matrix, operator.basis
    else:
        h = np.asarray(operator, dtype=complex)
        deviation = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
        if deviation > 1e-12:
            raise NumericalContractError(
                f"coupling graph requires a hermitian matrix: max |H - H^dagger| = {deviation:.3e}"
            )
        basis = None
    dim = h.shape[0]
    edges: dict[tuple[int, int], complex] = {}
    adjacency: dict[int, list[int]] = {i: [] for i in range(dim)}
    for i in range(dim):
        for j in range(i + 1, dim):
            if abs(h[i, j]) > tol:
                edges[(i, j)] = complex(h[i, j])
                adjacency[i].append(j)
                adjacency[j].append(i)
    return CouplingGraph(
        basis=basis,
        diagonal=np.real(np.diag(h)).copy(),
        edges=edges,
        adjacency={i: tuple(sorted(nbrs)) for i, nbrs in adjacency.items()},
    )


def _complement_factor(graph: CouplingGraph, nodes: Sequence[int], lam: float) -> complex:
    """det(lam - H) over ``nodes``, normalised by prod(lam - diagonal).

    This is the correction from closed loops among eliminated states that lie
    off the path: it equals 1 when those states are mutually uncoupled, and
    contributes terms like -V_ij V_ji / ((lam - e_i)(lam - e_j)) otherwise.
    """
    if len(nodes) == 0:
        return 1.0 + 0j
    nodes = list(nodes)
    gaps = lam - graph.diagonal[nodes]
    scale = max(1.0, float(np.max(np.abs(graph.diagonal))))
    nearest = int(np.argmin(np.abs(gaps)))
    if abs(gaps[nearest]) < RESONANCE_RTOL * scale:
        occ = graph.describe_state(nodes[nearest])
        raise NearResonantIntermediateError(
            f"eliminated state {occ} lies within {abs(gaps[nearest]):.3e} of the "
            f"working energy {lam:.12g}",
            occupation=occ if isinstance(occ, tuple) else None,
        )
    m = np.zeros((len(nodes), len(nodes)), dtype=complex)
    pos = {node: idx for idx, node in enumerate(nodes)}
    for idx, node in enumerate(nodes):
        m[idx, idx] = 1.0  # (lam - e_i) / (lam - e_i)
        for other in graph.neighbors(node):
            if other in pos:
                m[idx, pos[other]] = -graph.edge_value(node, other) / gaps[pos[other]]
    return complex(np.linalg.det(m))


def path_coupling(
    graph: CouplingGraph,
    targets: tuple[int, int],
    lam: float,
    max_order: int,
) -> complex:
    """Perturbative coupling as a sum over simple paths between the targets.

    Each path with intermediates (i, ..., p) contributes

        V_{0i} V_{i.} ... V_{p1} / [(lam - e_i) ... (lam - e_p)]

    multiplied by the loop-correction factor of the eliminated states off the
    path (so a direct edge also picks up terms like
    -V_{01} V_{23} V_{32} / ((lam - e_2)(lam - e_3))).  ``max_order`` caps the
    number of intermediate states per path; the direct edge is order zero.
    Summed to all orders this reproduces the exact elimination coupling up to
    overall resolvent normalisation.
    """
    t0, t1 = targets
    if t0 == t1:
        raise UnsupportedConfigurationError("path coupling needs two distinct targets")
    component = graph.connected_component(t0)
    if t1 not in component:
        return 0j
    eliminated = component - {t0, t1}
    scale = max(1.0, float(np.max(np.abs(graph.diagonal))) if len(graph.diagonal) else 1.0)

    total = 0j
    for path in graph.simple_paths(t0, t1, max_intermediates=max_order):
        weight = 1.0 + 0j
        for a, b in zip(path, path[1:]):
            weight *= graph.edge_value(a, b)
        for node in path[1:-1]:
            gap = lam - graph.diagonal[node]
            if abs(gap) < RESONANCE_RTOL * scale:
                occ = graph.describe_state(node)
                raise NearResonantIntermediateError(
                    f"intermediate state {occ} lies within "
                    f"{abs(gap):.3e} of the working energy {lam:.12g}",
                    occupation=occ if isinstance(occ, tuple) else None,
                )
            weight /= gap
        off_path = sorted(eliminated - set(path))
        total += weight * _complement_factor(graph, off_path, lam)
    return total


# ---------------------------------------------------------------------------
# Report over a grid of phase offsets
# ---------------------------------------------------------------------------


@dataclass
class EffectiveTable:
    """Two-level machinery evaluated on a grid of offsets dphi from pi."""

    dphis: np.ndarray
    eps: np.ndarray
    v01_abs: np.ndarray
    ratio_analytic: np.ndarray
    e_minus: np.ndarray
    e_plus: np.ndarray
    params: ModelParams

    def rows(self):
        for i in range(len(self.dphis)):
            yield (
                float(self.dphis[i]),
                float(self.eps[i]),
                float(self.v01_abs[i]),
                float(self.ratio_analytic[i]),
                float(self.e_minus[i]),
                float(self.e_plus[i]),
            )

    def to_csv(self, path, comment: str | None = None) -> None:
        write_csv(
            path,
            ("dphi", "eps", "v01_abs", "ratio_analytic", "E_minus", "E_plus"),
            self.rows(),
            comment=comment,
        )


def effective_point(params: ModelParams, dphi: float) -> TwoLevelModel:
    """Two-level prediction at phase twist pi + dphi.

    The coupling and the centre energy E0 come from exact elimination at the
    working phase; the detuning uses the analytic eps(phi).
    """
    phi = math.pi + dphi
    p = params.with_phi(phi)
    operator = build_flow_hamiltonian(p) if p.equal_j else flow_hamiltonian_by_conjugation(p)
    result = lowdin_coupling(operator)
    e0 = 0.5 * float(np.real(result.heff[0, 0] + result.heff[1, 1]))
    eps = epsilon_of_phi(params, phi)
    return two_level_predict(e0, eps, result.v01, lam=result.lam)


def effective_report(
    params: ModelParams,
    dphi_grid: Sequence[float],
    threads: int = 1,
) -> EffectiveTable:
    """Tabulate the two-level machinery over a grid of offsets from pi."""
    if not params.equal_j:
        raise UnsupportedConfigurationError("the two-level report requires equal tunnelling")
    dphis = np.asarray(list(dphi_grid), dtype=float)
    models = parallel_map(lambda d: effective_point(params, d), list(dphis), threads=threads)
    return EffectiveTable(
        dphis=dphis,
        eps=np.array([m.eps for m in models]),
        v01_abs=np.array([abs(m.v01) for m in models]),
        ratio_analytic=np.array([abs(m.predicted_ratio) for m in models]),
        e_minus=np.array([m.predicted_energies[0] for m in models]),
        e_plus=np.array([m.predicted_energies[1] for m in models]),
        params=params,
    )
