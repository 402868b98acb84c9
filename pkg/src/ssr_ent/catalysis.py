"""Two-orbital state family, fermionic joint states and the catalyst scan."""
from __future__ import annotations

import cmath
import functools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .fock import ModeLayout, OccupationState, catalyst_layout, parse_occupation, system_basis, system_layout, wedge_layout, wedge_state
from .operators import DensityOperator, fermionic_partial_trace
from .ssr import SsrKind
from .transform import TransformationReport, decide

# Sector s_ee is spanned by |00,11>, |11,00>; s_oo by |01,10>, |10,01>.
SECTOR_KETS = (("00,11", "11,00"), ("01,10", "10,01"))


def _unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


@functools.lru_cache(maxsize=32)
def _sector_positions(layout: ModeLayout):
    basis = tuple(system_basis(layout))
    pos = {s: i for i, s in enumerate(basis)}
    return basis, tuple(tuple(pos[parse_occupation(k, layout)] for k in kets) for kets in SECTOR_KETS)


def two_orbital_state(
    P: float,
    p1: float,
    p2: float,
    alpha1: complex | None = None,
    alpha2: complex | None = None,
    *,
    chi: np.ndarray | None = None,
    layout: ModeLayout | None = None,
) -> DensityOperator:
    """``P rho_ee + (1 - P) rho_oo + chi`` on the two-electron, zero-spin basis.

    ``rho_ee`` puts ``p1`` on ``|00,11>`` and ``1 - p1`` on ``|11,00>`` with
    coherence ``alpha1`` between them; ``rho_oo`` likewise with ``p2`` on
    ``|01,10>``.  Omitted coherences default to the pure value ``sqrt(p(1-p))``.
    """
    layout = layout or system_layout()
    P, p1, p2 = (_unit_interval(n, v) for n, v in (("P", P), ("p1", p1), ("p2", p2)))
    basis, sector_pos = _sector_positions(layout)
    m = np.zeros((4, 4), dtype=complex)
    for weight, p, alpha, (i, j) in (
        (P, p1, alpha1, sector_pos[0]),
        (1 - P, p2, alpha2, sector_pos[1]),
    ):
        if alpha is None:
            alpha = math.sqrt(p * (1 - p))
        m[i, i] += weight * p
        m[j, j] += weight * (1 - p)
        m[i, j] += weight * alpha
        m[j, i] += weight * complex(alpha).conjugate()
    if chi is not None:
        chi = np.asarray(chi, dtype=complex)
        same_sector = np.zeros((4, 4), dtype=bool)
        for idx in sector_pos:
            same_sector[np.ix_(idx, idx)] = True
        if np.any(np.abs(chi[same_sector]) > 0):
            raise ValueError("chi may only couple different sectors")
        m += chi
    return DensityOperator(basis, m, layout)


@dataclass(frozen=True)
class CatalystSpec:
    """``tau = R tau_e + (1 - R) tau_o`` with pure sector blocks and no cross-sector terms."""

    R: float
    r1: float
    r2: float
    phase1: complex = 1.0
    phase2: complex = 1.0

    def __post_init__(self):
        for name in ("R", "r1", "r2"):
            _unit_interval(name, getattr(self, name))
        for name in ("phase1", "phase2"):
            if abs(abs(complex(getattr(self, name))) - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit modulus")

    @property
    def gamma1(self) -> complex:
        return complex(self.phase1) * math.sqrt(self.r1 * (1 - self.r1))

    @property
    def gamma2(self) -> complex:
        return complex(self.phase2) * math.sqrt(self.r2 * (1 - self.r2))

    def pure_components(self) -> list[tuple[float, dict[str, complex]]]:
        """``tau`` as a mixture of its two pure sector states (text-keyed amplitudes)."""
        out = []
        for weight, r, phase, (first, second) in (
            (self.R, self.r1, self.phase1, SECTOR_KETS[0]),
            (1 - self.R, self.r2, self.phase2, SECTOR_KETS[1]),
        ):
            out.append((weight, {first: math.sqrt(r), second: complex(phase).conjugate() * math.sqrt(1 - r)}))
        return out

    def to_dict(self) -> dict:
        def ph(z):
            z = complex(z)
            return [z.real, z.imag]

        return {"R": self.R, "r1": self.r1, "r2": self.r2, "phase1": ph(self.phase1), "phase2": ph(self.phase2)}


def build_catalyst(spec: CatalystSpec, layout: ModeLayout | None = None) -> DensityOperator:
    return two_orbital_state(
        spec.R, spec.r1, spec.r2, spec.gamma1, spec.gamma2, layout=layout or catalyst_layout()
    )


@functools.lru_cache(maxsize=128)
def _wedge_plan(
    basis_a: tuple[OccupationState, ...],
    basis_b: tuple[OccupationState, ...],
    joint_layout: ModeLayout,
):
    joint, signs = [], []
    for a in basis_a:
        for b in basis_b:
            signed = wedge_state(a, b, joint_layout)
            joint.append(signed.state)
            signs.append(signed.sign)
    joint_basis = tuple(sorted(joint, key=lambda s: s.occupations))
    pos = {s: i for i, s in enumerate(joint_basis)}
    order = np.array([pos[s] for s in joint], dtype=int)
    signs = np.array(signs, dtype=float)
    return joint_basis, np.ix_(order, order), np.outer(signs, signs)


def wedge_density(
    rho: DensityOperator, tau: DensityOperator, joint_layout: ModeLayout | None = None
) -> DensityOperator:
    """``rho ∧ tau``: matrix elements ``<a∧c| . |b∧d> = rho_ab tau_cd`` with wedge signs."""
    if set(rho.layout.canonical_order) & set(tau.layout.canonical_order):
        raise ValueError("wedge factors must live on disjoint mode sets")
    joint_layout = joint_layout or wedge_layout(rho.layout, tau.layout)
    if set(joint_layout.canonical_order) != set(rho.layout.canonical_order) | set(tau.layout.canonical_order):
        raise ValueError("joint layout does not cover exactly the modes of both factors")
    joint_basis, index, signs = _wedge_plan(rho.basis, tau.basis, joint_layout)
    m = np.zeros((len(joint_basis),) * 2, dtype=complex)
    m[index] = np.kron(rho.matrix, tau.matrix) * signs
    return DensityOperator(joint_basis, m, joint_layout)


def lattice(step: float) -> list[float]:
    """``0, step, 2 step, ...`` up to and including 1."""
    if not 0 < step <= 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5], got {step}")
    n = int(math.floor(1 / step + 1e-9))
    points = [round(k * step, 12) for k in range(n + 1)]
    if points[-1] < 1 - 1e-12:
        points.append(1.0)
    return points


def phase_lattice(points: int) -> list[complex]:
    if points < 1:
        raise ValueError("need at least one phase point")
    return [1.0 + 0j if k == 0 else cmath.exp(2j * math.pi * k / points) for k in range(points)]


@dataclass
class CatalysisResult:
    found: bool
    catalyst: CatalystSpec | None = None
    joint_report: TransformationReport | None = None
    examined: int = 0
    rejections: Counter = field(default_factory=Counter)
    solutions: list[CatalystSpec] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "catalyst": None if self.catalyst is None else self.catalyst.to_dict(),
            "joint_report": None if self.joint_report is None else self.joint_report.to_dict(),
            "examined": self.examined,
            "rejections": {k: self.rejections[k] for k in sorted(self.rejections)},
            "solutions": [s.to_dict() for s in self.solutions],
        }


def search_catalyst(
    rho: DensityOperator,
    sigma: DensityOperator,
    ssr: SsrKind | str = SsrKind.LOCAL_PARITY,
    grid_step: float = 0.05,
    *,
    phase_points: int = 1,
    collect_all: bool = False,
    keep: str | None = None,
    catalyst_modes: ModeLayout | None = None,
) -> CatalysisResult:
    """Scan the catalyst family for one making ``rho ∧ tau -> sigma ∧ tau`` possible.

    Lattice order is ``R``, then ``r1``, then ``r2`` (then phases), all
    ascending; the first success is returned unless ``collect_all`` is set,
    in which case the whole lattice is scanned and every success recorded.
    Rejections are tallied by failing step.
    """
    ssr = SsrKind.parse(ssr)
    cat_layout = catalyst_modes or catalyst_layout()
    joint_layout = wedge_layout(rho.layout, cat_layout)
    points = lattice(grid_step)
    phases = phase_lattice(phase_points)
    result = CatalysisResult(found=False)
    for R in points:
        for r1 in points:
            for r2 in points:
                for ph1 in phases:
                    for ph2 in phases:
                        spec = CatalystSpec(R, r1, r2, ph1, ph2)
                        tau = build_catalyst(spec, cat_layout)
                        report = decide(
                            wedge_density(rho, tau, joint_layout),
                            wedge_density(sigma, tau, joint_layout),
                            ssr,
                            keep=keep,
                            diagnostics=False,
                        )
                        result.examined += 1
                        if not report.possible:
                            result.rejections[report.failing_step.value] += 1
                            continue
                        if not result.found:
                            result.found, result.catalyst = True, spec
                            result.joint_report = decide(
                                wedge_density(rho, tau, joint_layout),
                                wedge_density(sigma, tau, joint_layout),
                                ssr,
                                keep=keep,
                            )
                        result.solutions.append(spec)
                        if not collect_all:
                            return result
    return result


def catalyst_preserved(
    rho: DensityOperator, sigma: DensityOperator, tau: DensityOperator, atol: float = 1e-9
) -> bool:
    """The catalyst's reduced state is ``tau`` both in ``rho ∧ tau`` and in ``sigma ∧ tau``."""
    joint_layout = wedge_layout(rho.layout, tau.layout)
    for state in (rho, sigma):
        joint = wedge_density(state, tau, joint_layout)
        reduced = fermionic_partial_trace(joint, tau.layout.canonical_order)
        target = DensityOperator(
            tuple(OccupationState(s.occupations, reduced.layout) for s in tau.basis), tau.matrix, reduced.layout
        )
        if not reduced.allclose(target, atol=atol):
            return False
    return True
