"""Small dense Hermitian operators over a declared Fock basis."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fock import ModeLayout, OccupationState, parse_occupation, reorder_sign

EPS_HERM = 1e-10
EPS_TRACE = 1e-10
EPS_PSD = 1e-10
EPS_EIG = 1e-10


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A matrix indexed by ``basis``; validity is checked by :func:`check_density`.

    Sector projections and other intermediate operators reuse this type, so
    construction does not insist on unit trace.
    """

    basis: tuple[OccupationState, ...]
    matrix: np.ndarray
    layout: ModeLayout

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {matrix.shape}")
        if matrix.shape[0] != len(basis):
            raise ValueError(f"{matrix.shape[0]}x{matrix.shape[0]} matrix for {len(basis)} basis states")
        _check_basis(basis, self.layout)
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @functools.cached_property
    def index(self) -> dict[OccupationState, int]:
        return {s: i for i, s in enumerate(self.basis)}

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def element(self, ket: OccupationState | str, bra: OccupationState | str) -> complex:
        ket, bra = (parse_occupation(s, self.layout) if isinstance(s, str) else s for s in (ket, bra))
        idx = self.index
        if ket not in idx or bra not in idx:
            return 0j
        return complex(self.matrix[idx[ket], idx[bra]])

    def embed(self, basis: Sequence[OccupationState]) -> DensityOperator:
        """The same operator written over a larger ``basis`` (zero-padded)."""
        basis = tuple(basis)
        pos = {s: i for i, s in enumerate(basis)}
        missing = [s for s in self.basis if s not in pos]
        if missing:
            raise ValueError(f"target basis lacks {missing[0]}")
        idx = np.array([pos[s] for s in self.basis], dtype=int)
        out = np.zeros((len(basis), len(basis)), dtype=complex)
        out[np.ix_(idx, idx)] = self.matrix
        return DensityOperator(basis, out, self.layout)

    def allclose(self, other: DensityOperator, atol: float = 1e-12) -> bool:
        if self.layout != other.layout:
            return False
        a, b = align(self, other)
        return bool(np.allclose(a.matrix, b.matrix, rtol=0, atol=atol))


@functools.lru_cache(maxsize=1024)
def _check_basis(basis: tuple[OccupationState, ...], layout: ModeLayout) -> None:
    if any(s.layout != layout for s in basis):
        raise ValueError("basis states must share the operator's layout")
    if len(set(basis)) != len(basis):
        raise ValueError("basis states must be distinct")


def align(*ops: DensityOperator) -> tuple[DensityOperator, ...]:
    """Rewrite operators on one layout over the sorted union of their bases."""
    layout = ops[0].layout
    if any(op.layout != layout for op in ops):
        raise ValueError("operators live on different layouts")
    if all(op.basis == ops[0].basis for op in ops):
        return ops
    union = sorted({s for op in ops for s in op.basis}, key=lambda s: s.occupations)
    return tuple(op.embed(union) for op in ops)


def _as_state(s: OccupationState | str, layout: ModeLayout) -> OccupationState:
    return parse_occupation(s, layout) if isinstance(s, str) else s


def pure_state(
    amplitudes: Mapping[OccupationState | str, complex],
    layout: ModeLayout,
    basis: Sequence[OccupationState] | None = None,
    *,
    normalize: bool = False,
) -> DensityOperator:
    """``|psi><psi|`` from amplitudes keyed by basis state (or its text form)."""
    amps = {_as_state(k, layout): complex(v) for k, v in amplitudes.items()}
    if basis is None:
        basis = sorted(amps, key=lambda s: s.occupations)
    basis = tuple(basis)
    pos = {s: i for i, s in enumerate(basis)}
    vec = np.zeros(len(basis), dtype=complex)
    for state, amp in amps.items():
        if state not in pos:
            raise ValueError(f"{state} is not in the basis")
        vec[pos[state]] += amp
    if normalize:
        vec /= np.linalg.norm(vec)
    return DensityOperator(basis, np.outer(vec, vec.conj()), layout)


def mixture(terms: Iterable[tuple[float, DensityOperator]]) -> DensityOperator:
    """Convex combination ``sum_k w_k rho_k`` over the union basis."""
    terms = list(terms)
    ops = align(*(op for _, op in terms))
    matrix = sum(w * op.matrix for (w, _), op in zip(terms, ops))
    return DensityOperator(ops[0].basis, matrix, ops[0].layout)


def check_density(rho: DensityOperator, *, trace: float | None = 1.0) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, PSD and (optionally) of given trace."""
    m = rho.matrix
    herm = np.max(np.abs(m - m.conj().T), initial=0.0)
    if herm > EPS_HERM:
        raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3g})")
    if trace is not None and abs(np.trace(m).real - trace) > EPS_TRACE:
        raise ValueError(f"trace {np.trace(m).real:.12g} differs from {trace}")
    lowest = hermitian_eigenvalues(rho).eigenvalues[-1] if rho.dim else 0.0
    if lowest < -EPS_PSD:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {lowest:.3g})")


def purity(rho: DensityOperator) -> float:
    """``tr(rho^2)``."""
    m = rho.matrix
    # tr(M M) = sum_ij M_ij M_ji; for Hermitian M this is the squared Frobenius norm.
    return float(np.einsum("ij,ji->", m, m).real)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: tuple[float, ...]
    eigenvectors: np.ndarray
    residual: float
    sweeps: int


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-15, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray, int]:
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvectors as columns,
    in the original (unsorted) order of the diagonal.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.max(np.abs(a), initial=0.0), np.finfo(float).tiny)
    for sweep in range(max_sweeps + 1):
        off = np.abs(a - np.diag(np.diag(a)))
        if off.max(initial=0.0) <= tol * scale:
            return np.diag(a).real.copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= tol * scale * 1e-3:
                    continue
                # Phase rotation makes a[p, q] real, then a real Givens rotation zeroes it.
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, cols] = v[:, cols] @ g
    raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def hermitian_eigenvalues(rho: DensityOperator | np.ndarray) -> SpectrumResult:
    """Real spectrum, descending, of a Hermitian operator."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if m.shape[0] == 0:
        return SpectrumResult((), np.zeros((0, 0), dtype=complex), 0.0, 0)
    herm = np.max(np.abs(m - m.conj().T))
    if herm > EPS_HERM:
        raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3g})")
    diag = np.diagonal(m)
    if np.count_nonzero(m) == np.count_nonzero(diag):
        # Already diagonal (the usual case for reduced states of sector blocks).
        order = np.argsort(-diag.real, kind="stable")
        vecs = np.eye(m.shape[0], dtype=complex)[:, order]
        return SpectrumResult(tuple(float(x) for x in diag.real[order]), vecs, 0.0, 0)
    vals, vecs, sweeps = jacobi_eigh((m + m.conj().T) / 2)
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    residual = float(np.max(np.abs(m @ vecs - vecs * vals)))
    if residual > EPS_EIG * max(1.0, np.max(np.abs(m))):
        raise RuntimeError(f"eigen-residual {residual:.3g} exceeds tolerance")
    return SpectrumResult(tuple(float(x) for x in vals), vecs, residual, sweeps)


def _kept_modes(layout: ModeLayout, keep: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(keep, str):
        if keep in layout.parties:
            return layout.modes_of(keep)
        if keep in layout.canonical_order:
            return (keep,)
        raise KeyError(f"unknown party or mode {keep!r}")
    keep = set(keep)
    unknown = keep - set(layout.canonical_order)
    if unknown:
        raise KeyError(f"unknown modes {sorted(unknown)}")
    return tuple(m for m in layout.canonical_order if m in keep)


@functools.lru_cache(maxsize=256)
def _trace_plan(basis: tuple[OccupationState, ...], layout: ModeLayout, kept: tuple[str, ...]):
    traced = tuple(m for m in layout.canonical_order if m not in kept)
    # Kept operators to the left, traced ones next to the vacuum; then contract.
    split_order = kept + traced
    sub = layout.restrict(kept)
    kept_part = [s.restrict(kept) for s in basis]
    traced_part = [s.restrict(traced).occupations for s in basis]
    signs = np.array([reorder_sign(s, layout.canonical_order, split_order) for s in basis])
    reduced_basis = tuple(sorted(set(kept_part), key=lambda s: s.occupations))
    pos = {s: i for i, s in enumerate(reduced_basis)}
    k = np.array([pos[s] for s in kept_part], dtype=int)
    rows, cols = [], []
    for i in range(len(basis)):
        for j in range(len(basis)):
            if traced_part[i] == traced_part[j]:
                rows.append(i)
                cols.append(j)
    rows, cols = np.array(rows, dtype=int), np.array(cols, dtype=int)
    return sub, reduced_basis, rows, cols, k[rows], k[cols], signs[rows] * signs[cols]


def fermionic_partial_trace(rho: DensityOperator, keep: str | Iterable[str]) -> DensityOperator:
    """Reduce ``rho`` onto a party (or an explicit set of modes).

    ``<n_k| out |m_k> = sum_t s(n_k t) s(m_k t) <n_k t| rho |m_k t>``, where
    ``s`` is the sign of moving the kept creation operators in front of the
    traced ones.  The reduced basis holds the kept-mode configurations that
    occur in ``rho.basis``, lexicographically ordered.
    """
    kept = _kept_modes(rho.layout, keep)
    sub, reduced_basis, rows, cols, out_r, out_c, phi = _trace_plan(rho.basis, rho.layout, kept)
    out = np.zeros((len(reduced_basis), len(reduced_basis)), dtype=complex)
    np.add.at(out, (out_r, out_c), phi * rho.matrix[rows, cols])
    return DensityOperator(reduced_basis, out, sub)
