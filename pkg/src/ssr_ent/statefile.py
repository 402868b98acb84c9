"""JSON state files.

A file holds an optional ``layout`` (party -> ordered mode labels) and exactly
one of three state forms::

    {"pure":   [{"amplitude": [0.4, 0.0], "occupation": "00,11"}, ...]}
    {"mixed":  [{"weight": 0.5, "pure": [...]}, ...]}
    {"matrix": {"basis": ["00,11", ...], "entries": [[[re, im], ...], ...]}}

Amplitudes and matrix entries are ``[re, im]`` pairs (bare reals are accepted).
Without a layout, ``"00,11"`` style strings select the two-orbital system and
``"00,11;01,10"`` strings the system-plus-catalyst joint layout.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .fock import ModeLayout, catalyst_layout, format_occupation, parse_occupation, system_layout, wedge_layout
from .operators import DensityOperator, check_density, mixture, pure_state

EPS_NORM = 1e-9


class StateFileError(ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path, self.line = path, line
        where = f"{path}:{line}: " if path and line else (f"{path}: " if path else "")
        super().__init__(where + message)


def _line_of(text: str, needle: str) -> int | None:
    pos = text.find(needle)
    return None if pos < 0 else text.count("\n", 0, pos) + 1


def _complex(value: Any) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ValueError(f"expected a number or [re, im] pair, got {value!r}")


def _layout(doc: dict, sample: str | None) -> ModeLayout:
    if "layout" in doc:
        raw = doc["layout"]
        if not isinstance(raw, dict) or not all(isinstance(v, list) for v in raw.values()):
            raise ValueError('"layout" must map party labels to lists of mode labels')
        return ModeLayout.from_parties(raw)
    if sample is not None and ";" in sample:
        return wedge_layout(system_layout(), catalyst_layout())
    return system_layout()


def _first_occupation(doc: dict) -> str | None:
    if "pure" in doc and doc["pure"]:
        return doc["pure"][0].get("occupation")
    if "mixed" in doc and doc["mixed"] and doc["mixed"][0].get("pure"):
        return doc["mixed"][0]["pure"][0].get("occupation")
    if "matrix" in doc and doc["matrix"].get("basis"):
        return doc["matrix"]["basis"][0]
    return None


def _pure(terms: list, layout: ModeLayout) -> DensityOperator:
    if not isinstance(terms, list) or not terms:
        raise ValueError('"pure" must be a non-empty list of {amplitude, occupation} terms')
    amps: dict = {}
    for term in terms:
        occ = parse_occupation(term["occupation"], layout)
        amps[occ] = amps.get(occ, 0) + _complex(term["amplitude"])
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    if abs(norm - 1) > EPS_NORM:
        raise ValueError(f"amplitudes have norm {norm:.12g}, expected 1")
    return pure_state(amps, layout)


def state_from_dict(doc: dict) -> DensityOperator:
    forms = [k for k in ("pure", "mixed", "matrix") if k in doc]
    if len(forms) != 1:
        raise ValueError('state file needs exactly one of "pure", "mixed", "matrix"')
    layout = _layout(doc, _first_occupation(doc))
    (form,) = forms
    if form == "pure":
        return _pure(doc["pure"], layout)
    if form == "mixed":
        terms = doc["mixed"]
        if not isinstance(terms, list) or not terms:
            raise ValueError('"mixed" must be a non-empty list of {weight, pure} terms')
        weights = [float(t["weight"]) for t in terms]
        if any(w < 0 for w in weights):
            raise ValueError("mixture weights must be nonnegative")
        if abs(sum(weights) - 1) > EPS_NORM:
            raise ValueError(f"mixture weights sum to {sum(weights):.12g}, expected 1")
        return mixture((w, _pure(t["pure"], layout)) for w, t in zip(weights, terms))
    spec = doc["matrix"]
    basis = [parse_occupation(s, layout) for s in spec["basis"]]
    entries = np.array([[_complex(v) for v in row] for row in spec["entries"]], dtype=complex)
    rho = DensityOperator(tuple(basis), entries, layout)
    check_density(rho)
    return rho


def load_state(path: str | Path) -> DensityOperator:
    """Parse and validate a state file; failures raise :class:`StateFileError`."""
    path = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read file: {exc.strerror}", path) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(exc.msg, path, exc.lineno) from None
    if not isinstance(doc, dict):
        raise StateFileError("top level must be a JSON object", path, 1)
    try:
        return state_from_dict(doc)
    except (ValueError, KeyError, TypeError) as exc:
        message = str(exc) if not isinstance(exc, KeyError) else f"missing key {exc}"
        line = None
        for token in _error_tokens(message):
            line = _line_of(text, token)
            if line:
                break
        raise StateFileError(message, path, line or 1) from None


def _error_tokens(message: str) -> list[str]:
    # Quoted fragments of the message (occupation strings, keys) are located in the source.
    tokens = []
    for quote in ("'", '"'):
        parts = message.split(quote)
        tokens.extend(parts[1::2])
    return [t for t in tokens if t]


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def layout_to_dict(layout: ModeLayout) -> dict:
    return {p: list(layout.modes_of(p)) for p in layout.parties}


def state_to_dict(rho: DensityOperator) -> dict:
    return {
        "layout": layout_to_dict(rho.layout),
        "matrix": {
            "basis": [format_occupation(s) for s in rho.basis],
            "entries": [[_pair(v) for v in row] for row in rho.matrix],
        },
    }


def mixed_to_dict(terms: list[tuple[float, dict]], layout: ModeLayout) -> dict:
    """``terms`` are ``(weight, {occupation: amplitude})`` pairs."""
    return {
        "layout": layout_to_dict(layout),
        "mixed": [
            {
                "weight": float(w),
                "pure": [{"amplitude": _pair(complex(a)), "occupation": occ} for occ, a in amps.items()],
            }
            for w, amps in terms
        ],
    }


def save_state(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
