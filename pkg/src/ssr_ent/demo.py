"""Worked examples: parity change by catalysis, and a transformation no catalyst helps."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalysis import CatalystSpec, build_catalyst, search_catalyst, two_orbital_state, wedge_density
from .fock import catalyst_layout, system_basis, system_layout
from .majorization import majorizes
from .operators import DensityOperator, mixture, pure_state, purity
from .ssr import decompose
from .transform import FailingStep, Verdict, decide, schmidt_vector

GOLDEN_TOL = 1e-9


def parity_initial() -> DensityOperator:
    """``0.4|00,11> + sqrt(0.84)|11,00>``: all weight in the even-even sector."""
    return pure_state({"00,11": 0.4, "11,00": math.sqrt(0.84)}, system_layout(), system_basis())


def parity_target() -> DensityOperator:
    """``0.3|01,10> + sqrt(0.91)|10,01>``: all weight in the odd-odd sector."""
    return pure_state({"01,10": 0.3, "10,01": math.sqrt(0.91)}, system_layout(), system_basis())


def parity_catalyst() -> DensityOperator:
    """Equal mixture of ``0.5|00,11> + sqrt(0.75)|11,00>`` and ``0.5|01,10> + sqrt(0.75)|10,01>``."""
    layout = catalyst_layout()
    return mixture([
        (0.5, pure_state({"00,11": 0.5, "11,00": math.sqrt(0.75)}, layout)),
        (0.5, pure_state({"01,10": 0.5, "10,01": math.sqrt(0.75)}, layout)),
    ])


@dataclass
class Check:
    name: str
    computed: object
    expected: object
    ok: bool

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: got {self.computed}, expected {self.expected}"


def _vec_check(name, vec, expected) -> Check:
    got = tuple(round(v, 12) for v in vec.support())
    want = tuple(sorted(expected, reverse=True))
    ok = len(got) == len(want) and all(abs(a - b) <= GOLDEN_TOL for a, b in zip(got, want))
    return Check(name, list(got), list(want), ok)


def _num_check(name, got, want) -> Check:
    return Check(name, round(float(got), 12), want, abs(got - want) <= GOLDEN_TOL)


def catalysis_walkthrough() -> list[Check]:
    """The parity-changing conversion, checked value by value."""
    rho, sigma, tau = parity_initial(), parity_target(), parity_catalyst()
    checks = []
    bare = decide(rho, sigma)
    checks.append(Check(
        "uncatalyzed verdict", f"{bare.verdict.value}/step {bare.step}", "impossible/step 2",
        bare.verdict is Verdict.IMPOSSIBLE and bare.failing_step is FailingStep.SECTOR_WEIGHT_MISMATCH,
    ))
    rho_j, sigma_j = wedge_density(rho, tau), wedge_density(sigma, tau)
    dec_r, dec_s = decompose(rho_j, "parity"), decompose(sigma_j, "parity")
    golden_r = (0.04, 0.12, 0.21, 0.63)
    golden_s = (0.0225, 0.0675, 0.2275, 0.6825)
    # S + R - 2SR with R = 1/2 and S in {1, 0}.
    checks.append(_num_check("joint odd-odd weight (initial)", dec_r["oo"].weight, 0.5))
    checks.append(_num_check("joint odd-odd weight (target)", dec_s["oo"].weight, 0.5))
    for sector in ("ee", "oo"):
        pr, ps = dec_r[sector].projection, dec_s[sector].projection
        # 1 - 2S(1 - S) at S = 1 (initial) and S = 0 (target).
        checks.append(_num_check(f"purity of joint {sector} projection", min(purity(pr), purity(ps)), 1.0))
        vr, vs = schmidt_vector(pr), schmidt_vector(ps)
        checks.append(_vec_check(f"initial joint Schmidt vector, sector {sector}", vr, golden_r))
        checks.append(_vec_check(f"target joint Schmidt vector, sector {sector}", vs, golden_s))
        checks.append(Check(f"target majorizes initial in {sector}", majorizes(vs, vr), True, majorizes(vs, vr)))
    joint = decide(rho_j, sigma_j)
    checks.append(Check("catalyzed verdict", joint.verdict.value, "possible", joint.possible))
    return checks


def no_go_walkthrough(seed: int = 0, grid_step: float = 0.05) -> list[Check]:
    """Opposite majorization preorders in the two sectors survive every catalyst."""
    S = 0.5
    rho = two_orbital_state(S, 0.16, 0.09)
    sigma = two_orbital_state(S, 0.09, 0.16)
    checks = []
    bare = decide(rho, sigma)
    checks.append(Check(
        "uncatalyzed verdict", f"{bare.verdict.value}/{bare.failing_step.value}", "impossible/majorization_failure",
        bare.failing_step is FailingStep.MAJORIZATION_FAILURE,
    ))
    # An odd catalyst (R = 0) pairs the system's odd block with the joint even-even sector.
    for R, expected in ((0.0, (False, True)), (1.0, (True, False))):
        tau = build_catalyst(CatalystSpec(R, 0.25, 0.25))
        report = decide(wedge_density(rho, tau), wedge_density(sigma, tau))
        flags = tuple(s.majorization_ok for s in report.per_sector)
        checks.append(Check(f"R = {R:g}: per-sector preorder (ee, oo)", flags, expected, flags == expected))
    spec = CatalystSpec(0.5, 0.25, 0.25)
    tau = build_catalyst(spec)
    dec = decompose(wedge_density(rho, tau), "parity")
    checks.append(_num_check("R = 1/2: joint sector purity", purity(dec["ee"].projection), 1 - 2 * S * (1 - S)))

    # Product structure of the joint spectra at R = 1 for random parameters.
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        p1, p2, r1 = rng.uniform(0, 1, size=3)
        state = two_orbital_state(S, p1, p2)
        joint = decompose(wedge_density(state, build_catalyst(CatalystSpec(1.0, r1, 0.5))), "parity")
        for p, sector in ((p1, "ee"), (p2, "oo")):
            got = np.sort(schmidt_vector(joint[sector].projection).values)[-4:]
            want = np.sort([p * r1, p * (1 - r1), (1 - p) * r1, (1 - p) * (1 - r1)])
            worst = max(worst, float(np.max(np.abs(got - want))))
    checks.append(Check("R = 1 product spectra (20 samples, max error)", worst, f"<= {GOLDEN_TOL}", worst <= GOLDEN_TOL))

    result = search_catalyst(rho, sigma, "parity", grid_step)
    at_step3 = sum(n for k, n in result.rejections.items() if FailingStep(k).step == 3)
    checks.append(Check(
        f"catalyst scan (grid {grid_step:g})", f"found={result.found}, step-3 rejections {at_step3}/{result.examined}",
        "exhausted, all at step 3", not result.found and at_step3 == result.examined,
    ))
    return checks


DEMOS = {"example1": no_go_walkthrough, "example2": catalysis_walkthrough}
