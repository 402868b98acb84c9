"""Probability vectors and the majorization preorder."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

EPS_MAJ = 1e-9
EPS_NEG = 1e-10
TOLERANCE_ENV = "SSR_ENT_TOLERANCE"


def majorization_tolerance() -> float:
    """``EPS_MAJ``, unless overridden by the ``SSR_ENT_TOLERANCE`` environment variable."""
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or not raw.strip():
        return EPS_MAJ
    value = float(raw)
    if not value >= 0:
        raise ValueError(f"{TOLERANCE_ENV} must be a nonnegative number, got {raw!r}")
    return value


@dataclass(frozen=True)
class ProbabilityVector:
    values: tuple[float, ...]

    def __init__(self, values: Iterable[float], *, tol: float | None = None):
        vals = np.asarray(list(values), dtype=float)
        tol = majorization_tolerance() if tol is None else tol
        if vals.size == 0:
            raise ValueError("empty probability vector")
        if np.any(vals < -EPS_NEG):
            raise ValueError(f"negative probability {vals.min():.3g}")
        if abs(vals.sum() - 1.0) > tol:
            raise ValueError(f"probabilities sum to {vals.sum():.12g}, not 1")
        object.__setattr__(self, "values", tuple(float(v) for v in np.clip(vals, 0.0, None)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def sorted_desc(self) -> tuple[float, ...]:
        return tuple(sorted(self.values, reverse=True))

    def support(self, tol: float = EPS_NEG) -> tuple[float, ...]:
        """Descending entries above ``tol``."""
        return tuple(v for v in self.sorted_desc() if v > tol)

    def padded(self, n: int) -> tuple[float, ...]:
        return self.sorted_desc() + (0.0,) * (n - len(self))

    def __str__(self):
        return "{" + ", ".join(f"{v:.6g}" for v in self.sorted_desc()) + "}"


def _as_vector(x) -> ProbabilityVector:
    return x if isinstance(x, ProbabilityVector) else ProbabilityVector(x)


def partial_sums_desc(x: ProbabilityVector | Iterable[float]) -> tuple[float, ...]:
    return tuple(float(s) for s in np.cumsum(_as_vector(x).sorted_desc()))


def majorizes(y, x, tol: float | None = None) -> bool:
    """True iff ``x ≺ y``: each leading partial sum of ``y`` dominates that of ``x``."""
    x, y = _as_vector(x), _as_vector(y)
    tol = majorization_tolerance() if tol is None else tol
    n = max(len(x), len(y))
    sx = np.cumsum(x.padded(n))
    sy = np.cumsum(y.padded(n))
    if abs(sx[-1] - sy[-1]) > tol:
        raise ValueError(f"totals differ: {sx[-1]:.12g} vs {sy[-1]:.12g}")
    return bool(np.all(sy >= sx - tol))

