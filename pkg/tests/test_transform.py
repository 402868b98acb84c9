import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from ssr_ent.catalysis import two_orbital_state
from ssr_ent.fock import catalyst_layout
from ssr_ent.operators import pure_state
from ssr_ent.ssr import decompose
from ssr_ent.transform import FailingStep, ImpureSectorError, Verdict, decide, schmidt_vector

unit = st.floats(0, 1)


def test_schmidt_vector_of_sector_states(layout):
    rho = pure_state({"00,11": 0.4, "11,00": math.sqrt(0.84)}, layout)
    assert schmidt_vector(rho).support() == pytest.approx((0.84, 0.16), abs=1e-12)
    assert schmidt_vector(rho, keep="B").support() == pytest.approx((0.84, 0.16), abs=1e-12)


def test_schmidt_vector_of_target_and_product_states(sigma_odd, layout):
    odd = decompose(sigma_odd, "parity")["oo"].projection
    assert schmidt_vector(odd).support() == pytest.approx((0.91, 0.09), abs=1e-12)
    product = pure_state({"10,01": 1.0}, layout)
    assert schmidt_vector(product).support() == pytest.approx((1.0,))


def test_schmidt_vector_rejects_mixed_input():
    with pytest.raises(ImpureSectorError):
        schmidt_vector(decompose(two_orbital_state(1.0, 0.3, 0.5, alpha1=0.0), "parity")["ee"].projection)


def test_uncatalyzed_parity_change_fails_at_step_two(rho_even, sigma_odd):
    report = decide(rho_even, sigma_odd)
    assert report.verdict is Verdict.IMPOSSIBLE
    assert report.failing_step is FailingStep.SECTOR_WEIGHT_MISMATCH and report.step == 2


def test_identity_is_possible(rho_even):
    assert decide(rho_even, rho_even).possible


def test_majorization_direction():
    weak = two_orbital_state(1.0, 0.5, 0.5)
    strong = two_orbital_state(1.0, 0.9, 0.5)
    assert decide(weak, strong).possible
    report = decide(strong, weak)
    assert report.failing_step is FailingStep.MAJORIZATION_FAILURE
    assert report.per_sector[0].majorization_ok is False


def test_chi_mismatch_is_step_one(layout):
    coherent = pure_state({"00,11": math.sqrt(0.5), "01,10": math.sqrt(0.5)}, layout)
    report = decide(coherent, two_orbital_state(0.5, 1.0, 1.0))
    assert report.failing_step is FailingStep.CHI_MISMATCH and report.step == 1
    assert report.chi_distance == pytest.approx(0.5)


def test_mixed_sector_is_undecidable():
    rho = two_orbital_state(1.0, 0.5, 0.5, alpha1=0.1)
    sigma = two_orbital_state(1.0, 0.9, 0.5)
    report = decide(rho, sigma)
    assert report.verdict is Verdict.UNDECIDABLE
    assert report.failing_step is FailingStep.IMPURITY_IN_SECTOR
    assert report.notes


def test_majorization_failure_outranks_impurity():
    # ee is pure but runs the wrong way; oo is mixed.
    rho = two_orbital_state(0.5, 0.9, 0.5, alpha2=0.1)
    sigma = two_orbital_state(0.5, 0.5, 0.5, alpha2=0.1)
    report = decide(rho, sigma)
    assert report.verdict is Verdict.IMPOSSIBLE
    assert report.failing_step is FailingStep.MAJORIZATION_FAILURE


def test_number_ssr_decision():
    rho = two_orbital_state(1.0, 0.5, 0.5)
    sigma = two_orbital_state(1.0, 0.9, 0.5)
    # Under N-SSR the |00,11>-|11,00> coherence is cross-sector, so it is chi.
    report = decide(rho, sigma, "number")
    assert report.failing_step is FailingStep.CHI_MISMATCH
    assert report.chi_distance == pytest.approx(0.5 - 0.3)
    incoherent = two_orbital_state(1.0, 0.5, 0.5, alpha1=0.0)
    shifted = two_orbital_state(1.0, 0.9, 0.5, alpha1=0.0)
    assert decide(incoherent, shifted, "number").failing_step is FailingStep.SECTOR_WEIGHT_MISMATCH
    assert decide(incoherent, incoherent, "number").possible


def test_layouts_must_agree(rho_even):
    other = pure_state({"00,11": 1.0}, catalyst_layout())
    with pytest.raises(ValueError):
        decide(rho_even, other)


def test_report_serializes(rho_even, sigma_odd):
    d = decide(rho_even, sigma_odd).to_dict()
    assert d["verdict"] == "impossible" and d["step"] == 2
    assert {s["sector"] for s in d["sectors"]} == {"ee", "oo"}


@settings(max_examples=40, deadline=None)
@given(unit, unit, unit, unit, st.floats(0, 2 * math.pi))
def test_local_phases_do_not_matter(S, p1, p2, q1, theta):
    rho = two_orbital_state(S, p1, p2)
    sigma = two_orbital_state(S, q1, p2)
    ph = cmath.exp(1j * theta)
    sigma_rot = two_orbital_state(S, q1, p2, alpha1=ph * math.sqrt(q1 * (1 - q1)))
    assert decide(rho, sigma).verdict is decide(rho, sigma_rot).verdict


@settings(max_examples=40, deadline=None)
@given(unit, unit, unit, unit)
def test_transitivity(S, a, b, c):
    x, y, z = (two_orbital_state(S, v, 0.5) for v in (a, b, c))
    if decide(x, y).possible and decide(y, z).possible:
        assert decide(x, z).possible


@settings(max_examples=40, deadline=None)
@given(unit, unit, unit, unit, unit)
def test_single_sector_rule(S, p1, p2, q1, q2):
    """Possible exactly when each occupied sector's Schmidt vector is majorized."""
    rho, sigma = two_orbital_state(S, p1, p2), two_orbital_state(S, q1, q2)

    def closed(p, q):
        # Two-outcome rule: max(q, 1 - q) >= max(p, 1 - p).
        return max(q, 1 - q) >= max(p, 1 - p) - 1e-9

    expected = (S < 1e-9 or closed(p1, q1)) and (S > 1 - 1e-9 or closed(p2, q2))
    assert decide(rho, sigma).possible == expected


@settings(max_examples=40, deadline=None)
@given(unit, unit, unit, st.floats(0, 2 * math.pi))
def test_identity_for_block_diagonal_pure_sector_states(S, p1, p2, theta):
    rho = two_orbital_state(S, p1, p2, alpha2=cmath.exp(1j * theta) * math.sqrt(p2 * (1 - p2)))
    assert decide(rho, rho).possible


@settings(max_examples=40, deadline=None)
@given(unit, unit, unit, unit, unit)
def test_one_way_conversions_are_strict(S, p1, p2, q1, q2):
    rho, sigma = two_orbital_state(S, p1, p2), two_orbital_state(S, q1, q2)
    forward, backward = decide(rho, sigma), decide(sigma, rho)
    if forward.possible and backward.failing_step is FailingStep.MAJORIZATION_FAILURE:
        strict = [
            s for s in forward.per_sector
            if s.schmidt_rho is not None
            and max(abs(a - b) for a, b in zip(s.schmidt_rho.padded(4), s.schmidt_sigma.padded(4))) > 1e-9
        ]
        assert strict
