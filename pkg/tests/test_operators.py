import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import kept_index, partial_trace_unit
from ssr_ent.catalysis import two_orbital_state, wedge_density
from ssr_ent.fock import enumerate_basis, parse_occupation, system_basis, system_layout
from ssr_ent.operators import (
    DensityOperator,
    align,
    check_density,
    fermionic_partial_trace,
    hermitian_eigenvalues,
    jacobi_eigh,
    mixture,
    pure_state,
    purity,
)
from ssr_ent.ssr import decompose


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_density(rng, basis, layout, rank=None):
    n = len(basis)
    g = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    m = g @ g.conj().T
    return DensityOperator(tuple(basis), m / np.trace(m).real, layout)


def oracle_trace(rho, kept):
    traced = [m for m in rho.layout.canonical_order if m not in kept]
    out = np.zeros((2 ** len(kept),) * 2, dtype=complex)
    for i, n in enumerate(rho.basis):
        for j, m in enumerate(rho.basis):
            if rho.matrix[i, j] != 0:
                out += rho.matrix[i, j] * partial_trace_unit(n, m, list(kept), traced)
    return out


def test_purity_of_pure_and_maximally_mixed(layout):
    psi = pure_state({"00,11": 0.6, "11,00": 0.8}, layout)
    assert purity(psi) == pytest.approx(1.0, abs=1e-14)
    basis = system_basis()
    mixed = DensityOperator(tuple(basis), np.eye(4) / 4, layout)
    assert purity(mixed) == pytest.approx(0.25, abs=1e-14)


def test_mixture_of_orthogonal_states(layout):
    a = pure_state({"00,11": 1.0}, layout)
    b = pure_state({"01,10": 1.0}, layout)
    rho = mixture([(0.3, a), (0.7, b)])
    assert rho.trace() == pytest.approx(1.0)
    assert purity(rho) == pytest.approx(0.3 ** 2 + 0.7 ** 2)
    assert rho.element("01,10", "01,10") == pytest.approx(0.7)


def test_pure_state_normalization_and_errors(layout):
    rho = pure_state({"00,11": 1.0, "11,00": 1.0}, layout, normalize=True)
    assert rho.trace() == pytest.approx(1.0)
    assert rho.element("00,11", "11,00") == pytest.approx(0.5)
    with pytest.raises(ValueError):
        pure_state({"00,11": 1.0}, layout, basis=[parse_occupation("01,10", layout)])


def test_density_operator_is_immutable(rho_even):
    with pytest.raises(ValueError):
        rho_even.matrix[0, 0] = 2.0


def test_embed_and_align(layout):
    a = pure_state({"00,11": 1.0}, layout)
    b = pure_state({"01,10": 1.0}, layout)
    ea, eb = align(a, b)
    assert ea.basis == eb.basis and ea.dim == 2
    assert ea.element("00,11", "00,11") == 1.0 and ea.element("01,10", "01,10") == 0.0


def test_check_density_rejects_bad_matrices(layout):
    basis = tuple(system_basis())
    with pytest.raises(ValueError, match="Hermitian"):
        check_density(DensityOperator(basis, np.triu(np.ones((4, 4))) / 4, layout))
    with pytest.raises(ValueError, match="trace"):
        check_density(DensityOperator(basis, np.eye(4) / 2, layout))
    with pytest.raises(ValueError, match="positive"):
        check_density(DensityOperator(basis, np.diag([1.5, -0.5, 0, 0]), layout))


def test_jacobi_against_closed_form_two_by_two(rng):
    for _ in range(200):
        a, d = rng.normal(size=2)
        b = complex(*rng.normal(size=2))
        m = np.array([[a, b], [b.conjugate(), d]])
        mean, half = (a + d) / 2, math.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
        got = hermitian_eigenvalues(m).eigenvalues
        assert got[0] == pytest.approx(mean + half, abs=1e-12)
        assert got[1] == pytest.approx(mean - half, abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 6, 16])
def test_jacobi_on_random_hermitian_matrices(rng, n):
    for _ in range(5):
        m = random_hermitian(rng, n)
        res = hermitian_eigenvalues(m)
        assert res.residual <= 1e-10
        assert sum(res.eigenvalues) == pytest.approx(np.trace(m).real, abs=1e-10)
        assert list(res.eigenvalues) == sorted(res.eigenvalues, reverse=True)
        v = res.eigenvectors
        assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
        assert np.allclose(res.eigenvalues, np.linalg.eigvalsh(m)[::-1], atol=1e-10)


def test_jacobi_diagonal_and_degenerate_inputs():
    vals, vecs, sweeps = jacobi_eigh(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert sorted(vals) == [1.0, 2.0, 3.0] and sweeps <= 1
    res = hermitian_eigenvalues(np.eye(5))
    assert res.eigenvalues == (1.0,) * 5


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))


def test_partial_trace_of_product_like_sector_state(layout):
    p = 0.16
    rho = pure_state({"00,11": math.sqrt(p), "11,00": math.sqrt(1 - p)}, layout)
    red = fermionic_partial_trace(rho, "A")
    assert [s.occupations for s in red.basis] == [(0, 0), (1, 1)]
    assert np.allclose(red.matrix, np.diag([p, 1 - p]), atol=1e-15)


def test_partial_trace_sign_on_odd_sector(layout):
    # The two kets differ on B, so tracing B leaves no A coherence.
    rho = pure_state({"01,10": math.sqrt(0.5), "10,01": math.sqrt(0.5)}, layout)
    red = fermionic_partial_trace(rho, "A")
    assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-15)
    both = pure_state({"01,10": 1.0}, layout)
    assert fermionic_partial_trace(both, "B").element("10", "10") == pytest.approx(1.0)


def test_partial_trace_keeps_trace_and_hermiticity(rng, layout):
    basis = enumerate_basis(layout)
    for _ in range(10):
        rho = random_density(rng, basis, layout)
        for keep in ("A", "B", ["A↑", "B↓"], "B↑"):
            red = fermionic_partial_trace(rho, keep)
            assert red.trace() == pytest.approx(1.0, abs=1e-12)
            assert np.allclose(red.matrix, red.matrix.conj().T, atol=1e-14)
            assert min(hermitian_eigenvalues(red).eigenvalues) >= -1e-12


def test_partial_trace_equal_spectra_for_pure_states(rng, layout):
    basis = system_basis()
    for _ in range(20):
        rho = random_density(rng, basis, layout, rank=1)
        a = hermitian_eigenvalues(fermionic_partial_trace(rho, "A")).eigenvalues
        b = hermitian_eigenvalues(fermionic_partial_trace(rho, "B")).eigenvalues
        assert np.allclose(sorted(a), sorted(b), atol=1e-12)


def test_partial_trace_nested_equals_direct(rng, joint_layout):
    basis = enumerate_basis(joint_layout, number=4, parity=0, spin=0.0)
    rho = random_density(rng, basis, joint_layout)
    direct = fermionic_partial_trace(rho, "A")
    staged = fermionic_partial_trace(fermionic_partial_trace(rho, ("A↑", "A↓", "A′↑", "A′↓", "B↑")), "A")
    assert staged.layout == direct.layout and staged.basis == direct.basis
    assert np.allclose(staged.matrix, direct.matrix, atol=1e-12)


def test_partial_trace_matches_oracle_on_random_states(rng, layout):
    basis = enumerate_basis(layout)
    rho = random_density(rng, basis, layout)
    for keep in (("A↑", "A↓"), ("B↑", "B↓"), ("A↓", "B↑")):
        red = fermionic_partial_trace(rho, keep)
        ref = oracle_trace(rho, keep)
        for i, n in enumerate(red.basis):
            for j, m in enumerate(red.basis):
                assert abs(red.matrix[i, j] - ref[kept_index(n, keep), kept_index(m, keep)]) <= 1e-12


def test_partial_trace_rejects_unknown_party(layout, rho_even):
    with pytest.raises(KeyError):
        fermionic_partial_trace(rho_even, "C")


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_schmidt_spectrum_of_parametrized_pure_states(p, phase):
    layout = system_layout()
    rho = pure_state({"01,10": math.sqrt(p), "10,01": math.sqrt(1 - p) * complex(math.cos(phase), math.sin(phase))}, layout)
    vals = hermitian_eigenvalues(fermionic_partial_trace(rho, "A")).eigenvalues
    assert sorted(vals) == pytest.approx(sorted([p, 1 - p]), abs=1e-12)


def test_diagonal_input_skips_rotation():
    m = np.diag([0.2, 0.5, 0.3]).astype(complex)
    res = hermitian_eigenvalues(m)
    assert res.eigenvalues == (0.5, 0.3, 0.2) and res.sweeps == 0
    assert np.allclose(m @ res.eigenvectors, res.eigenvectors * np.array(res.eigenvalues))
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.diag([1.0, 1j]))


def test_rank_one_sector_matrix_has_unit_spectrum(layout):
    p = 0.16
    rho = two_orbital_state(1.0, p, 0.5)
    sector = decompose(rho, "parity")["ee"].projection
    assert hermitian_eigenvalues(sector).eigenvalues == pytest.approx((1.0, 0.0), abs=1e-12)
    assert hermitian_eigenvalues(np.diag([0.16, 0.84])).eigenvalues == (0.84, 0.16)


def test_partial_trace_of_diagonal_product_state(layout):
    basis = enumerate_basis(layout)
    pa = np.array([0.1, 0.2, 0.3, 0.4])
    pb = np.array([0.4, 0.3, 0.2, 0.1])
    weights = [pa[2 * s.occupations[0] + s.occupations[1]] * pb[2 * s.occupations[2] + s.occupations[3]] for s in basis]
    rho = DensityOperator(tuple(basis), np.diag(weights), layout)
    assert np.allclose(fermionic_partial_trace(rho, "A").matrix, np.diag(pa))
    assert np.allclose(fermionic_partial_trace(rho, "B").matrix, np.diag(pb))


def test_joint_reduced_spectrum_of_parity_example(rho_even, tau_parity):
    # Two equally weighted sectors with orthogonal reduced supports: each
    # contributes its Schmidt vector at half weight.
    joint = wedge_density(rho_even, tau_parity)
    spectrum = hermitian_eigenvalues(fermionic_partial_trace(joint, "B")).eigenvalues
    want = sorted([x / 2 for x in (0.63, 0.21, 0.12, 0.04)] * 2, reverse=True)
    assert [v for v in spectrum if v > 1e-12] == pytest.approx(want, abs=1e-12)
