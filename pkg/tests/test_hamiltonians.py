"""Tests for the site- and flow-basis ring Hamiltonians."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ringcat import (
    HermitianOperator,
    ModelParams,
    NumericalContractError,
    UnsupportedConfigurationError,
    build_flow_hamiltonian,
    build_site_hamiltonian,
    enumerate_fock,
    flow_hamiltonian_by_conjugation,
    mode_transform_matrix,
    quasimomentum_sector,
)


def test_params_broadcast_and_properties():
    p = ModelParams(n=3, j=0.7)
    assert p.j == (0.7, 0.7, 0.7)
    assert p.equal_j
    assert p.j1 == 0.7
    q = ModelParams(n=3, j=(1.0, 2.0, 3.0))
    assert not q.equal_j
    assert q.with_phi(1.5).phi == 1.5
    assert q.with_phi(1.5).j == q.j


def test_params_validation():
    with pytest.raises(UnsupportedConfigurationError):
        ModelParams(n=0)
    with pytest.raises(UnsupportedConfigurationError):
        ModelParams(n=2, j=(1.0, 2.0))
    with pytest.raises(UnsupportedConfigurationError):
        ModelParams(n=2, u=math.inf)
    with pytest.raises(UnsupportedConfigurationError):
        ModelParams(n=2, phi=math.nan)


def test_operator_rejects_non_hermitian_and_wrong_shape():
    basis = enumerate_fock(1)
    bad = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(NumericalContractError):
        HermitianOperator(matrix=bad, basis=basis)
    with pytest.raises(NumericalContractError):
        HermitianOperator(matrix=np.zeros((2, 3)), basis=basis)
    with pytest.raises(NumericalContractError):
        HermitianOperator(matrix=np.zeros((4, 4)), basis=basis)


@pytest.mark.parametrize("n", [1, 2, 4])
@pytest.mark.parametrize("phi", [0.0, 1.3, math.pi])
@pytest.mark.parametrize(
    "kwargs",
    [
        {"u": 0.5},
        {"j": (1.0, 0.8, 1.2), "u": 0.5},
        {"u0": 0.4, "u1": 0.1, "dipolar": True},
    ],
)
def test_site_hamiltonian_is_hermitian(n, phi, kwargs):
    op = build_site_hamiltonian(ModelParams(n=n, phi=phi, **kwargs))
    np.testing.assert_allclose(op.matrix, op.matrix.conj().T, atol=1e-14)


@pytest.mark.parametrize("phi", [0.0, 0.7, math.pi, 4.0, 2 * math.pi])
def test_single_particle_spectrum(phi):
    """One atom on the ring: levels are -2J cos((phi - 2 pi k) / 3)."""
    j = 1.0
    op = build_site_hamiltonian(ModelParams(n=1, j=j, phi=phi))
    got = np.linalg.eigvalsh(op.matrix)
    expected = np.sort([-2 * j * math.cos((phi - 2 * math.pi * k) / 3.0) for k in range(3)])
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_single_particle_matrix_with_unequal_bonds():
    j = (1.0, 2.0, 3.0)
    phi = 0.9
    op = build_site_hamiltonian(ModelParams(n=1, j=j, phi=phi))
    hop = np.exp(1j * phi / 3.0)
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 1] = -j[0] * hop  # a^dag b
    expected[1, 2] = -j[1] * hop  # b^dag c
    expected[2, 0] = -j[2] * hop  # c^dag a
    expected += expected.conj().T
    np.testing.assert_allclose(op.matrix, expected, atol=1e-14)


@pytest.mark.parametrize("n, u", [(2, 0.3), (3, 1.0), (4, 0.05)])
def test_contact_interaction_diagonal(n, u):
    """With tunnelling off, the energy is U * sum_j n_j (n_j - 1)."""
    op = build_site_hamiltonian(ModelParams(n=n, j=0.0, u=u))
    expected = [u * sum(m * (m - 1) for m in occ) for occ in op.basis.states]
    np.testing.assert_allclose(np.diag(op.matrix).real, expected, atol=1e-14)
    np.testing.assert_allclose(op.matrix, np.diag(np.diag(op.matrix)), atol=1e-14)


def test_dipolar_reduces_to_contact_without_pair_exchange():
    base = dict(n=3, j=0.9, phi=2.1)
    contact = build_site_hamiltonian(ModelParams(u=0.37, **base))
    dipolar = build_site_hamiltonian(ModelParams(u0=0.37, u1=0.0, dipolar=True, **base))
    np.testing.assert_allclose(dipolar.matrix, contact.matrix, atol=1e-14)


def test_dipolar_pair_exchange_element():
    """(a^dag)^2 b^2 moves a boson pair with amplitude U1 sqrt((na+1)(na+2) nb(nb-1))."""
    u1 = 0.25
    op = build_site_hamiltonian(ModelParams(n=2, j=0.0, u0=0.0, u1=u1, dipolar=True))
    b = op.basis
    elem = op.matrix[b.index((2, 0, 0)), b.index((0, 2, 0))]
    np.testing.assert_allclose(elem, u1 * math.sqrt(1 * 2 * 2 * 1), atol=1e-14)
    # and its mirror around the ring
    elem_cb = op.matrix[b.index((0, 0, 2)), b.index((0, 2, 0))]
    np.testing.assert_allclose(elem_cb, u1 * 2.0, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("phi", [0.0, 1.1, math.pi])
def test_flow_hamiltonian_diagonal(n, phi):
    j, u = 1.0, 0.4
    op = build_flow_hamiltonian(ModelParams(n=n, j=j, u=u, phi=phi))
    for i, (qa, qb, qc) in enumerate(op.basis.states):
        kinetic = -j * (2 * qa - qb - qc) * math.cos(phi / 3.0) - math.sqrt(3.0) * j * (
            qb - qc
        ) * math.sin(phi / 3.0)
        pairs = qa * (qa - 1) + qb * (qb - 1) + qc * (qc - 1)
        cross = qa * qb + qa * qc + qb * qc
        interaction = (u / 3.0) * pairs + (4.0 * u / 3.0) * cross
        np.testing.assert_allclose(op.matrix[i, i].real, kinetic + interaction, atol=1e-12)


def test_flow_hamiltonian_exchange_element():
    """alpha alpha -> beta^dag gamma^dag carries 2U/3 sqrt(na(na-1)(nb+1)(nc+1))."""
    u = 0.9
    op = build_flow_hamiltonian(ModelParams(n=2, j=1.0, u=u, phi=0.3))
    b = op.basis
    elem = op.matrix[b.index((0, 1, 1)), b.index((2, 0, 0))]
    np.testing.assert_allclose(elem, (2.0 * u / 3.0) * math.sqrt(2.0), atol=1e-13)


def test_flow_hamiltonian_requires_equal_tunnelling():
    with pytest.raises(UnsupportedConfigurationError):
        build_flow_hamiltonian(ModelParams(n=2, j=(1.0, 1.1, 1.0)))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("phi", [0.0, math.pi / 2, math.pi])
def test_conjugation_matches_analytic_flow_form(n, phi):
    params = ModelParams(n=n, j=1.0, u=0.3, phi=phi)
    analytic = build_flow_hamiltonian(params)
    conjugated = flow_hamiltonian_by_conjugation(params)
    np.testing.assert_allclose(conjugated.matrix, analytic.matrix, atol=1e-10)


@pytest.mark.parametrize("dipolar_kwargs", [{}, {"u0": 0.3, "u1": 0.08, "dipolar": True}])
def test_conjugation_preserves_spectrum(dipolar_kwargs):
    params = ModelParams(n=4, j=(1.0, 0.7, 1.3), u=0.2, phi=1.9, **dipolar_kwargs)
    site = build_site_hamiltonian(params)
    flow = flow_hamiltonian_by_conjugation(params)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(flow.matrix), np.linalg.eigvalsh(site.matrix), atol=1e-10
    )


def test_conjugation_is_the_basis_change():
    params = ModelParams(n=3, j=1.0, u=0.5, phi=2.2)
    site = build_site_hamiltonian(params)
    flow = flow_hamiltonian_by_conjugation(params)
    w = mode_transform_matrix(3)
    np.testing.assert_allclose(flow.matrix, w.conj().T @ site.matrix @ w, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_flow_hamiltonian_conserves_quasimomentum(n):
    op = build_flow_hamiltonian(ModelParams(n=n, j=1.0, u=0.8, phi=1.4))
    sectors = [quasimomentum_sector(occ) for occ in op.basis.states]
    for i in range(op.dimension):
        for j in range(op.dimension):
            if sectors[i] != sectors[j]:
                assert abs(op.matrix[i, j]) < 1e-14


def test_dump_round_trips(tmp_path):
    op = build_site_hamiltonian(ModelParams(n=2, j=1.0, u=0.3, phi=1.1))
    path = tmp_path / "op.txt"
    op.dump(path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("%%")
    rows, cols, count = (int(v) for v in lines[2].split())
    assert rows == cols == op.dimension
    rebuilt = np.zeros((rows, cols), dtype=complex)
    entries = lines[3:]
    assert len(entries) == count
    for line in entries:
        i, j, re, im = line.split()
        rebuilt[int(i), int(j)] = float(re) + 1j * float(im)
    # %.17g round-trips doubles exactly
    np.testing.assert_array_equal(rebuilt, op.matrix)


@pytest.mark.parametrize("n", [2, 4])
def test_noninteracting_flow_operator_is_diagonal(n):
    matrix = build_flow_hamiltonian(ModelParams(n=n, u=0.0, phi=1.3)).matrix
    off = matrix - np.diag(np.diag(matrix))
    assert np.max(np.abs(off)) == 0.0


def test_unequal_tunnelling_couples_quasimomentum_sectors():
    params = ModelParams(n=2, j=(1.0, 0.8, 1.2), u=0.1, phi=0.7)
    op = flow_hamiltonian_by_conjugation(params)
    occupations = list(op.basis)
    cross = max(
        abs(op.matrix[i, j])
        for i in range(op.basis.dimension)
        for j in range(op.basis.dimension)
        if quasimomentum_sector(occupations[i]) != quasimomentum_sector(occupations[j])
    )
    assert cross > 1e-2
