"""Local superselection rules and the sector decomposition of a state.

A local SSR labels each basis ket by per-party quantum numbers.  Any operator
splits into its sector-diagonal blocks, which carry the weights and
normalized projections, and the cross-sector remainder ``chi``.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .fock import ModeLayout, OccupationState
from .operators import EPS_TRACE, DensityOperator


class SsrKind(enum.Enum):
    LOCAL_PARITY = "parity"
    LOCAL_NUMBER = "number"

    @classmethod
    def parse(cls, value: str | SsrKind) -> SsrKind:
        if isinstance(value, cls):
            return value
        aliases = {"p": cls.LOCAL_PARITY, "n": cls.LOCAL_NUMBER}
        try:
            return aliases.get(value.lower()) or cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown SSR {value!r}; use 'parity' or 'number'") from None


@dataclass(frozen=True)
class SectorLabel:
    """Per-party parity bits (P-SSR) or particle counts (N-SSR)."""

    values: tuple[int, ...]
    kind: SsrKind
    parties: tuple[str, ...]

    def __str__(self):
        if self.kind is SsrKind.LOCAL_PARITY:
            return "".join("eo"[v] for v in self.values)
        return "(" + ",".join(map(str, self.values)) + ")"

    def __lt__(self, other):
        return self.values < other.values


def sector_of(state: OccupationState, ssr: SsrKind | str) -> SectorLabel:
    ssr = SsrKind.parse(ssr)
    layout = state.layout
    if ssr is SsrKind.LOCAL_PARITY:
        values = tuple(state.party_parity(p) for p in layout.parties)
    else:
        values = tuple(state.party_number(p) for p in layout.parties)
    return SectorLabel(values, ssr, layout.parties)


@dataclass(frozen=True, eq=False)
class Sector:
    label: SectorLabel
    weight: float
    projection: DensityOperator | None  # None when the weight vanishes
    indices: tuple[int, ...]

    @property
    def is_empty(self) -> bool:
        return self.projection is None


@dataclass(frozen=True, eq=False)
class SectorDecomposition:
    sectors: tuple[Sector, ...]
    chi: np.ndarray
    ssr: SsrKind
    basis: tuple[OccupationState, ...]
    layout: ModeLayout

    @property
    def labels(self) -> tuple[SectorLabel, ...]:
        return tuple(s.label for s in self.sectors)

    def weight(self, label: SectorLabel | str) -> float:
        return self[label].weight

    def __getitem__(self, label: SectorLabel | str) -> Sector:
        for sector in self.sectors:
            if sector.label == label or str(sector.label) == label:
                return sector
        raise KeyError(f"no sector {label}")

    def reassemble(self) -> np.ndarray:
        out = self.chi.copy()
        for sector in self.sectors:
            if sector.projection is not None:
                idx = np.ix_(sector.indices, sector.indices)
                out[idx] += sector.weight * sector.projection.matrix
        return out

    @property
    def chi_is_zero(self) -> bool:
        return bool(np.max(np.abs(self.chi), initial=0.0) <= EPS_TRACE)


@functools.lru_cache(maxsize=256)
def _sector_indices(basis: tuple[OccupationState, ...], ssr: SsrKind):
    groups: dict[SectorLabel, list[int]] = {}
    for i, state in enumerate(basis):
        groups.setdefault(sector_of(state, ssr), []).append(i)
    labels = sorted(groups)
    block = np.zeros((len(basis), len(basis)), dtype=bool)
    for label in labels:
        idx = groups[label]
        block[np.ix_(idx, idx)] = True
    return tuple((label, tuple(groups[label])) for label in labels), block


def decompose(rho: DensityOperator, ssr: SsrKind | str) -> SectorDecomposition:
    """Split ``rho`` into sector weights, normalized sector blocks and ``chi``.

    Every sector present in ``rho.basis`` is reported, including empty ones.
    """
    ssr = SsrKind.parse(ssr)
    groups, block = _sector_indices(rho.basis, ssr)
    m = rho.matrix
    sectors = []
    for label, idx in groups:
        sub = m[np.ix_(idx, idx)]
        weight = float(np.trace(sub).real)
        if weight > EPS_TRACE:
            proj = DensityOperator(tuple(rho.basis[i] for i in idx), sub / weight, rho.layout)
        else:
            proj = None
        sectors.append(Sector(label, weight, proj, idx))
    chi = np.where(block, 0.0, m)
    return SectorDecomposition(tuple(sectors), chi, ssr, rho.basis, rho.layout)


def physical_part(rho: DensityOperator, ssr: SsrKind | str) -> DensityOperator:
    """``rho - chi``: the block-diagonal part that survives the local SSR."""
    _, block = _sector_indices(rho.basis, SsrKind.parse(ssr))
    return DensityOperator(rho.basis, np.where(block, rho.matrix, 0.0), rho.layout)
