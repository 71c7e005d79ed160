"""Hamiltonian builders for N bosons on a phase-twisted three-site ring.

Site basis (operators a, b, c on sites 0, 1, 2):

    H = -[J1 e^{i phi/3} a^b + J2 e^{i phi/3} b^c + J3 e^{i phi/3} c^a + h.c.]
        + interactions

with contact interactions U (a^2 a^2 + b^2 b^2 + c^2 c^2) (number convention
n(n-1), no 1/2), or dipolar interactions
U0 sum_j n_j(n_j-1) + U1 [(a^+)^2 b^2 + (b^+)^2 c^2 + (c^+)^2 a^2 + h.c.].

Flow basis (equal tunnelling J only): the kinetic part is diagonal,

    -J (2 n_alpha - n_beta - n_gamma) cos(phi/3)
    - sqrt(3) J (n_beta - n_gamma) sin(phi/3),

and the contact interaction becomes

    (U/3) [ sum_k m_k^2 m_k^2 + 4 (n_a n_b + n_a n_g + n_b n_g)
            + 2 (alpha^2 beta^+ gamma^+ + beta^2 alpha^+ gamma^+
                 + gamma^2 alpha^+ beta^+ + h.c.) ].

For unequal tunnelling the flow form is obtained by unitary conjugation of
the site Hamiltonian with the mode transform.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .basis import FockBasis, enumerate_fock, mode_transform_matrix
from .errors import NumericalContractError, UnsupportedConfigurationError

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the ring model.

    ``j`` holds the three bond tunnelling strengths (a-b, b-c, c-a); a scalar
    is broadcast to all three bonds.  ``u`` is the contact interaction, used
    when ``dipolar`` is False; ``u0``/``u1`` are the on-site and
    pair-exchange strengths of the dipolar variant, used when ``dipolar`` is
    True.  ``phi`` is the applied phase twist threading the ring.
    """

    n: int
    j: tuple[float, float, float] = (1.0, 1.0, 1.0)
    u: float = 0.0
    u0: float = 0.0
    u1: float = 0.0
    phi: float = 0.0
    dipolar: bool = False

    def __post_init__(self):
        if isinstance(self.j, (int, float)):
            object.__setattr__(self, "j", (float(self.j),) * 3)
        else:
            if len(self.j) != 3:
                raise UnsupportedConfigurationError(f"need 3 tunnelling strengths, got {self.j!r}")
            object.__setattr__(self, "j", tuple(float(v) for v in self.j))
        if self.n < 1:
            raise UnsupportedConfigurationError(f"particle number must be >= 1, got {self.n}")
        for name in ("u", "u0", "u1", "phi"):
            value = getattr(self, name)
            object.__setattr__(self, name, float(value))
            if not math.isfinite(getattr(self, name)):
                raise UnsupportedConfigurationError(f"parameter {name} must be finite, got {value!r}")
        if any(not math.isfinite(v) for v in self.j):
            raise UnsupportedConfigurationError(f"tunnelling strengths must be finite, got {self.j!r}")

    @property
    def equal_j(self) -> bool:
        return self.j[0] == self.j[1] == self.j[2]

    @property
    def j1(self) -> float:
        return self.j[0]

    def with_phi(self, phi: float) -> "ModelParams":
        return dataclasses.replace(self, phi=float(phi))


@dataclass
class HermitianOperator:
    """A dense Hermitian matrix together with its basis and parameters.

    Hermiticity is verified entrywise at construction (tolerance
    ``hermitian_atol``) and the matrix is then symmetrised exactly so that
    downstream solvers see H == H^dagger to machine precision.
    """

    matrix: np.ndarray
    basis: FockBasis
    params: ModelParams | None = None
    hermitian_atol: float = 1e-12

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NumericalContractError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.basis.dimension:
            raise NumericalContractError(
                f"matrix dimension {m.shape[0]} does not match basis dimension {self.basis.dimension}"
            )
        deviation = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if deviation > self.hermitian_atol:
            raise NumericalContractError(
                f"operator is not hermitian: max |H - H^dagger| = {deviation:.3e}"
            )
        self.matrix = 0.5 * (m + m.conj().T)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def dump(self, path) -> None:
        """Write the matrix as coordinate-format text: ``row col re im`` lines."""
        lines = [
            "%% ringcat hermitian operator, coordinate complex",
            f"%% basis={self.basis.interpretation} n={self.basis.n} dim={self.dimension}",
        ]
        entries = [
            (i, j, self.matrix[i, j])
            for i in range(self.dimension)
            for j in range(self.dimension)
            if self.matrix[i, j] != 0
        ]
        lines.append(f"{self.dimension} {self.dimension} {len(entries)}")
        for i, j, v in entries:
            lines.append(f"{i} {j} {v.real:.17g} {v.imag:.17g}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def build_site_hamiltonian(params: ModelParams) -> HermitianOperator:
    """Dense site-basis Hamiltonian for the given parameters."""
    basis = enumerate_fock(params.n, "site")
    dim = basis.dimension
    h = np.zeros((dim, dim), dtype=complex)
    phase = np.exp(1j * params.phi / 3.0)
    bonds = ((0, 1, params.j[0]), (1, 2, params.j[1]), (2, 0, params.j[2]))

    for s, occ in enumerate(basis.states):
        # Hopping: -J_pq e^{i phi/3} a_p^dagger a_q + h.c. on each directed bond.
        for p, q, j_pq in bonds:
            if occ[q] == 0:
                continue
            raised = list(occ)
            raised[q] -= 1
            raised[p] += 1
            t = basis.index(raised)
            value = -j_pq * phase * math.sqrt(occ[q] * (occ[p] + 1.0))
            h[t, s] += value
            h[s, t] += value.conjugate()
        if params.dipolar:
            h[s, s] += params.u0 * sum(nj * (nj - 1) for nj in occ)
            # Pair exchange (a_p^dagger)^2 a_q^2 + h.c. around the ring.
            for p, q in ((0, 1), (1, 2), (2, 0)):
                if occ[q] < 2:
                    continue
                raised = list(occ)
                raised[q] -= 2
                raised[p] += 2
                t = basis.index(raised)
                value = params.u1 * math.sqrt(
                    occ[q] * (occ[q] - 1.0) * (occ[p] + 1.0) * (occ[p] + 2.0)
                )
                h[t, s] += value
                h[s, t] += value
        else:
            h[s, s] += params.u * sum(nj * (nj - 1) for nj in occ)
    return HermitianOperator(h, basis, params)


def _flow_interaction_coefficients(params: ModelParams) -> tuple[float, float, float]:
    """(self, density-density, pair-exchange) coefficients of the flow form."""
    if params.dipolar:
        # Printed dipolar flow form, kept verbatim as a comparison target; see
        # tests for its relation to the conjugated site operator.
        return (
            (params.u0 + params.u1) / 6.0,
            (4.0 * params.u0 + params.u1) / 6.0,
            (2.0 * params.u0 - params.u1) / 6.0,
        )
    return params.u / 3.0, 4.0 * params.u / 3.0, 2.0 * params.u / 3.0


def build_flow_hamiltonian(params: ModelParams) -> HermitianOperator:
    """Dense flow-basis Hamiltonian from the analytic flow-form expressions.

    Requires equal tunnelling on all bonds; otherwise the kinetic part is not
    diagonal in the flow basis and ``flow_hamiltonian_by_conjugation`` must be
    used instead.
    """
    if not params.equal_j:
        raise UnsupportedConfigurationError(
            "analytic flow Hamiltonian requires equal tunnelling; "
            "use flow_hamiltonian_by_conjugation for unequal bonds"
        )
    j = params.j1
    basis = enumerate_fock(params.n, "flow")
    dim = basis.dimension
    h = np.zeros((dim, dim), dtype=complex)
    cos_p = math.cos(params.phi / 3.0)
    sin_p = math.sin(params.phi / 3.0)
    c_self, c_dens, c_exch = _flow_interaction_coefficients(params)

    # Each exchange term annihilates two quanta of one mode and creates one in
    # each of the other two; total quasi-momentum is conserved mod 3.
    exchange = ((0, 1, 2), (1, 0, 2), (2, 0, 1))  # (lowered twice, raised, raised)

    for s, (na, nb, ng) in enumerate(basis.states):
        h[s, s] += -j * (2 * na - nb - ng) * cos_p - _SQRT3 * j * (nb - ng) * sin_p
        h[s, s] += c_self * (na * (na - 1) + nb * (nb - 1) + ng * (ng - 1))
        h[s, s] += c_dens * (na * nb + na * ng + nb * ng)
        occ = (na, nb, ng)
        for low, up1, up2 in exchange:
            if occ[low] < 2:
                continue
            raised = list(occ)
            raised[low] -= 2
            raised[up1] += 1
            raised[up2] += 1
            t = basis.index(raised)
            value = c_exch * math.sqrt(
                occ[low] * (occ[low] - 1.0) * (raised[up1]) * (raised[up2])
            )
            h[t, s] += value
            h[s, t] += value
    return HermitianOperator(h, basis, params)


def flow_hamiltonian_by_conjugation(params: ModelParams) -> HermitianOperator:
    """Flow-basis Hamiltonian by unitary conjugation of the site Hamiltonian.

    Valid for any tunnelling pattern; this is the authoritative flow-basis
    operator when the analytic form does not apply.
    """
    site = build_site_hamiltonian(params)
    w = mode_transform_matrix(params.n)
    flow_matrix = w.conj().T @ site.matrix @ w
    basis = enumerate_fock(params.n, "flow")
    return HermitianOperator(flow_matrix, basis, params, hermitian_atol=1e-10)
