"""Fermionic occupation-number basis and wedge-product sign bookkeeping.

A basis ket ``|n_1 n_2 ... n_k>`` is read as ``(c_1^+)^{n_1} ... (c_k^+)^{n_k} |vac>``
with the creation operators written in the layout's canonical mode order.
Moving creation operators past each other costs a factor of -1 per crossing
of two occupied modes; that is the only fermionic structure tracked here.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

UP = "↑"
DOWN = "↓"


@dataclass(frozen=True)
class ModeLayout:
    """Parties, their modes, and the global (canonical) mode order.

    The canonical order groups modes by party, in party order, unless an
    explicit ``canonical_order`` is given.
    """

    parties: tuple[str, ...]
    modes_per_party: tuple[tuple[str, ...], ...]
    canonical_order: tuple[str, ...] = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.parties) != len(self.modes_per_party):
            raise ValueError("one mode list per party is required")
        if len(set(self.parties)) != len(self.parties):
            raise ValueError(f"duplicate party labels in {self.parties}")
        modes = [m for group in self.modes_per_party for m in group]
        if len(set(modes)) != len(modes):
            raise ValueError(f"mode labels must be unique, got {modes}")
        if not self.canonical_order:
            object.__setattr__(self, "canonical_order", tuple(modes))
        elif sorted(self.canonical_order) != sorted(modes):
            raise ValueError("canonical_order must be a permutation of the layout's modes")
        object.__setattr__(
            self, "_hash", hash((self.parties, self.modes_per_party, self.canonical_order))
        )

    def __hash__(self):
        return self._hash

    @classmethod
    def from_parties(cls, parties: Mapping[str, Sequence[str]]) -> ModeLayout:
        return cls(tuple(parties), tuple(tuple(m) for m in parties.values()))

    @property
    def n_modes(self) -> int:
        return len(self.canonical_order)

    def modes_of(self, party: str) -> tuple[str, ...]:
        try:
            return self.modes_per_party[self.parties.index(party)]
        except ValueError:
            raise KeyError(f"unknown party {party!r}; layout has {self.parties}") from None

    def index(self, mode: str) -> int:
        return self.canonical_order.index(mode)

    def party_indices(self, party: str) -> tuple[int, ...]:
        """Canonical positions of ``party``'s modes."""
        return tuple(self.index(m) for m in self.modes_of(party))

    def restrict(self, modes: Iterable[str]) -> ModeLayout:
        """Sub-layout on ``modes``, keeping party grouping and relative order."""
        keep = set(modes)
        parties, groups = [], []
        for party, group in zip(self.parties, self.modes_per_party):
            sub = tuple(m for m in group if m in keep)
            if sub:
                parties.append(party)
                groups.append(sub)
        order = tuple(m for m in self.canonical_order if m in keep)
        return ModeLayout(tuple(parties), tuple(groups), order)


def orbital_layout(*orbitals: str, parties: Sequence[str] = ("A", "B")) -> ModeLayout:
    """One spin orbital (``X↑``, ``X↓``) per party, e.g. ``orbital_layout("A", "B")``."""
    if len(orbitals) != len(parties):
        raise ValueError("one orbital name per party")
    return ModeLayout(
        tuple(parties), tuple((f"{o}{UP}", f"{o}{DOWN}") for o in orbitals)
    )


def system_layout() -> ModeLayout:
    """The two-orbital system ``(A↑, A↓, B↑, B↓)``."""
    return orbital_layout("A", "B")


def catalyst_layout() -> ModeLayout:
    """The ancillary two-orbital system ``(A′↑, A′↓, B′↑, B′↓)``."""
    return orbital_layout("A′", "B′")


def wedge_layout(*layouts: ModeLayout) -> ModeLayout:
    """Joint layout grouping modes by party, factors in the order given.

    ``wedge_layout(system_layout(), catalyst_layout())`` yields
    ``(A↑, A↓, A′↑, A′↓, B↑, B↓, B′↑, B′↓)``.
    """
    parties: dict[str, list[str]] = {}
    for layout in layouts:
        for party in layout.parties:
            parties.setdefault(party, [])
            parties[party].extend(m for m in layout.canonical_order if m in layout.modes_of(party))
    return ModeLayout.from_parties(parties)


@dataclass(frozen=True)
class OccupationState:
    occupations: tuple[int, ...]
    layout: ModeLayout
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        occupations = tuple(int(b) for b in self.occupations)
        if len(occupations) != self.layout.n_modes:
            raise ValueError(
                f"{len(occupations)} occupations for a {self.layout.n_modes}-mode layout"
            )
        if any(b not in (0, 1) for b in occupations):
            raise ValueError(f"occupations must be 0/1, got {occupations}")
        object.__setattr__(self, "occupations", occupations)
        object.__setattr__(self, "_hash", hash((occupations, self.layout)))

    def __hash__(self):
        return self._hash

    @property
    def number(self) -> int:
        return sum(self.occupations)

    @property
    def parity(self) -> int:
        return self.number % 2

    @property
    def occupied_modes(self) -> tuple[str, ...]:
        return tuple(m for m, b in zip(self.layout.canonical_order, self.occupations) if b)

    def party_bits(self, party: str) -> tuple[int, ...]:
        return tuple(self.occupations[i] for i in self.layout.party_indices(party))

    def party_number(self, party: str) -> int:
        return sum(self.party_bits(party))

    def party_parity(self, party: str) -> int:
        return self.party_number(party) % 2

    @property
    def spin(self) -> float:
        """Total S_z read off the ``↑``/``↓`` suffixes of the occupied modes."""
        twice = 0
        for mode in self.occupied_modes:
            if mode.endswith(UP):
                twice += 1
            elif mode.endswith(DOWN):
                twice -= 1
        return twice / 2

    def restrict(self, modes: Sequence[str]) -> OccupationState:
        sub = self.layout.restrict(modes)
        lookup = dict(zip(self.layout.canonical_order, self.occupations))
        return OccupationState(tuple(lookup[m] for m in sub.canonical_order), sub)

    def __str__(self):
        return format_occupation(self)


@dataclass(frozen=True)
class SignedState:
    state: OccupationState
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


def enumerate_basis(
    layout: ModeLayout,
    *,
    number: int | None = None,
    parity: int | None = None,
    spin: float | None = None,
) -> list[OccupationState]:
    """All occupation states of ``layout`` passing the filters, in lexicographic order."""
    out = []
    for bits in itertools.product((0, 1), repeat=layout.n_modes):
        state = OccupationState(bits, layout)
        if number is not None and state.number != number:
            continue
        if parity is not None and state.parity != parity % 2:
            continue
        if spin is not None and state.spin != spin:
            continue
        out.append(state)
    return out


def system_basis(layout: ModeLayout | None = None) -> list[OccupationState]:
    """Two electrons, zero spin: ``|00,11>, |01,10>, |10,01>, |11,00>``."""
    return list(_system_basis(layout or system_layout()))


@functools.lru_cache(maxsize=64)
def _system_basis(layout: ModeLayout) -> tuple[OccupationState, ...]:
    return tuple(enumerate_basis(layout, number=2, spin=0.0))


def _inversion_sign(sequence: Sequence[int]) -> int:
    inversions = 0
    for i, a in enumerate(sequence):
        for b in sequence[i + 1:]:
            if a > b:
                inversions += 1
    return -1 if inversions % 2 else 1


def _check_same_modes(from_order: Sequence[str], to_order: Sequence[str]) -> None:
    if len(from_order) != len(to_order) or set(from_order) != set(to_order):
        raise ValueError("orders must be permutations of the same mode set")


def reorder_sign(occ: OccupationState, from_order: Sequence[str], to_order: Sequence[str]) -> int:
    """Sign from re-sorting ``occ``'s creation operators from one mode order to another."""
    _check_same_modes(from_order, to_order)
    if set(from_order) != set(occ.layout.canonical_order):
        raise ValueError("orders do not match the state's mode set")
    occupied = set(occ.occupied_modes)
    target = {m: i for i, m in enumerate(to_order)}
    return _inversion_sign([target[m] for m in from_order if m in occupied])


def wedge_state(a: OccupationState, b: OccupationState, joint_layout: ModeLayout | None = None) -> SignedState:
    """``a ∧ b``: ``a``'s operators then ``b``'s, re-sorted into the joint canonical order."""
    if set(a.layout.canonical_order) & set(b.layout.canonical_order):
        raise ValueError("wedge factors must live on disjoint mode sets")
    if joint_layout is None:
        joint_layout = wedge_layout(a.layout, b.layout)
    naive = a.layout.canonical_order + b.layout.canonical_order
    _check_same_modes(naive, joint_layout.canonical_order)
    lookup = dict(zip(naive, a.occupations + b.occupations))
    target = {m: i for i, m in enumerate(joint_layout.canonical_order)}
    sign = _inversion_sign([target[m] for m in naive if lookup[m]])
    joint = OccupationState(tuple(lookup[m] for m in joint_layout.canonical_order), joint_layout)
    return SignedState(joint, sign)


# -- text form ---------------------------------------------------------------
# Orbitals are consecutive mode pairs of a party.  Slot k lists every party's
# k-th orbital separated by commas; slots are separated by semicolons, so the
# joint system/catalyst state reads "sysA,sysB;catA,catB".

def _orbital_slots(layout: ModeLayout) -> list[list[tuple[str, ...]]]:
    counts = {len(g) for g in layout.modes_per_party}
    if len(counts) != 1:
        raise ValueError("text form needs the same number of modes for every party")
    (n,) = counts
    size = 2 if n % 2 == 0 else 1
    return [
        [group[k:k + size] for group in layout.modes_per_party]
        for k in range(0, n, size)
    ]


def format_occupation(state: OccupationState) -> str:
    lookup = dict(zip(state.layout.canonical_order, state.occupations))
    return ";".join(
        ",".join("".join(str(lookup[m]) for m in orbital) for orbital in slot)
        for slot in _orbital_slots(state.layout)
    )


def parse_occupation(text: str, layout: ModeLayout) -> OccupationState:
    """Inverse of :func:`format_occupation`, e.g. ``parse_occupation("00,11", system_layout())``."""
    slots = _orbital_slots(layout)
    parts = [s.split(",") for s in text.strip().split(";")]
    if len(parts) != len(slots) or any(len(p) != len(s) for p, s in zip(parts, slots)):
        raise ValueError(f"occupation {text!r} does not match the layout's orbital structure")
    lookup = {}
    for slot_text, slot in zip(parts, slots):
        for bits, orbital in zip(slot_text, slot):
            bits = bits.strip()
            if len(bits) != len(orbital) or set(bits) - {"0", "1"}:
                raise ValueError(f"bad orbital occupation {bits!r} in {text!r}")
            lookup.update(zip(orbital, map(int, bits)))
    return OccupationState(tuple(lookup[m] for m in layout.canonical_order), layout)
