"""Convertibility of bipartite fermionic mode states under local-SSR-restricted LOCC.

``decide`` runs three checks in order:

1. the cross-sector terms ``chi`` of both states coincide;
2. the sector weights coincide;
3. inside every occupied sector, both normalized projections are pure and the
   reduced spectrum of the initial one is majorized by that of the target.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .majorization import ProbabilityVector, majorizes, partial_sums_desc
from .operators import DensityOperator, align, fermionic_partial_trace, hermitian_eigenvalues, purity
from .ssr import SectorLabel, SsrKind, decompose

EPS_CHI = 1e-9
EPS_WEIGHT = 1e-9
EPS_PURE = 1e-9


class Verdict(enum.Enum):
    POSSIBLE = "possible"
    IMPOSSIBLE = "impossible"
    UNDECIDABLE = "undecidable"


class FailingStep(enum.Enum):
    CHI_MISMATCH = "chi_mismatch"
    SECTOR_WEIGHT_MISMATCH = "sector_weight_mismatch"
    MAJORIZATION_FAILURE = "majorization_failure"
    IMPURITY_IN_SECTOR = "impurity_in_sector"

    @property
    def step(self) -> int:
        return {"chi_mismatch": 1, "sector_weight_mismatch": 2}.get(self.value, 3)


class ImpureSectorError(ValueError):
    """A sector projection is mixed, so its reduced spectrum is not a Schmidt vector."""


def schmidt_vector(sector_proj: DensityOperator, keep: str | None = None) -> ProbabilityVector:
    """Schmidt coefficients of a pure sector projection, descending."""
    p = purity(sector_proj)
    if p < 1 - EPS_PURE:
        raise ImpureSectorError(f"sector projection has purity {p:.12g} < 1")
    keep = sector_proj.layout.parties[0] if keep is None else keep
    reduced = fermionic_partial_trace(sector_proj, keep)
    spectrum = hermitian_eigenvalues(reduced).eigenvalues
    return ProbabilityVector(spectrum)


@dataclass(frozen=True)
class SectorReport:
    label: SectorLabel
    weight_rho: float
    weight_sigma: float
    purity_rho: float | None
    purity_sigma: float | None
    schmidt_rho: ProbabilityVector | None = None
    schmidt_sigma: ProbabilityVector | None = None
    majorization_ok: bool | None = None

    def to_dict(self) -> dict:
        def vec(v):
            return None if v is None else list(v.sorted_desc())

        return {
            "sector": str(self.label),
            "weight_rho": self.weight_rho,
            "weight_sigma": self.weight_sigma,
            "purity_rho": self.purity_rho,
            "purity_sigma": self.purity_sigma,
            "schmidt_rho": vec(self.schmidt_rho),
            "schmidt_sigma": vec(self.schmidt_sigma),
            "partial_sums_rho": None if self.schmidt_rho is None else list(partial_sums_desc(self.schmidt_rho)),
            "partial_sums_sigma": None if self.schmidt_sigma is None else list(partial_sums_desc(self.schmidt_sigma)),
            "majorization_ok": self.majorization_ok,
        }


@dataclass(frozen=True)
class TransformationReport:
    verdict: Verdict
    failing_step: FailingStep | None
    per_sector: tuple[SectorReport, ...]
    chi_distance: float
    ssr: SsrKind = SsrKind.LOCAL_PARITY
    notes: tuple[str, ...] = field(default=())

    @property
    def possible(self) -> bool:
        return self.verdict is Verdict.POSSIBLE

    @property
    def step(self) -> int | None:
        return None if self.failing_step is None else self.failing_step.step

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "failing_step": None if self.failing_step is None else self.failing_step.value,
            "step": self.step,
            "ssr": self.ssr.value,
            "chi_distance": self.chi_distance,
            "sectors": [s.to_dict() for s in self.per_sector],
            "notes": list(self.notes),
        }


def _maybe_schmidt(proj: DensityOperator | None, pur: float | None, keep: str | None):
    if proj is None or pur is None or pur < 1 - EPS_PURE:
        return None
    return schmidt_vector(proj, keep)


def decide(
    rho: DensityOperator,
    sigma: DensityOperator,
    ssr: SsrKind | str = SsrKind.LOCAL_PARITY,
    *,
    keep: str | None = None,
    diagnostics: bool = True,
) -> TransformationReport:
    """Decide whether ``rho`` can be turned into ``sigma`` deterministically.

    With ``diagnostics=False`` Schmidt vectors are only computed when step 3 is
    reached, which keeps catalyst scans cheap.
    """
    ssr = SsrKind.parse(ssr)
    if rho.layout != sigma.layout:
        raise ValueError("initial and target states live on different layouts")
    rho, sigma = align(rho, sigma)
    dec_r, dec_s = decompose(rho, ssr), decompose(sigma, ssr)

    chi_distance = float(np.max(np.abs(dec_r.chi - dec_s.chi), initial=0.0))
    failing = None
    if chi_distance > EPS_CHI:
        failing = FailingStep.CHI_MISMATCH
    elif any(abs(a.weight - b.weight) > EPS_WEIGHT for a, b in zip(dec_r.sectors, dec_s.sectors)):
        failing = FailingStep.SECTOR_WEIGHT_MISMATCH

    reports = []
    any_impure = any_fail = False
    for a, b in zip(dec_r.sectors, dec_s.sectors):
        pur_r = None if a.projection is None else purity(a.projection)
        pur_s = None if b.projection is None else purity(b.projection)
        if failing is not None:
            if diagnostics:
                sr, ss = _maybe_schmidt(a.projection, pur_r, keep), _maybe_schmidt(b.projection, pur_s, keep)
            else:
                sr = ss = None
            reports.append(SectorReport(a.label, a.weight, b.weight, pur_r, pur_s, sr, ss))
            continue
        if a.projection is None and b.projection is None:
            reports.append(SectorReport(a.label, a.weight, b.weight, pur_r, pur_s))
            continue
        sr, ss = _maybe_schmidt(a.projection, pur_r, keep), _maybe_schmidt(b.projection, pur_s, keep)
        ok = None
        if sr is None or ss is None:
            any_impure = True
        else:
            ok = majorizes(ss, sr)
            any_fail |= not ok
        reports.append(SectorReport(a.label, a.weight, b.weight, pur_r, pur_s, sr, ss, ok))

    notes = []
    if failing is not None:
        verdict = Verdict.IMPOSSIBLE
    elif any_fail:
        # A pure sector that cannot convert rules the whole transformation out.
        verdict, failing = Verdict.IMPOSSIBLE, FailingStep.MAJORIZATION_FAILURE
    elif any_impure:
        verdict, failing = Verdict.UNDECIDABLE, FailingStep.IMPURITY_IN_SECTOR
        notes.append("mixed sector projection: majorization does not settle convertibility")
    else:
        verdict = Verdict.POSSIBLE
    return TransformationReport(verdict, failing, tuple(reports), chi_distance, ssr, tuple(notes))
