"""Exact BV-quantization engine: Moyal products, cyclic traces, wheels,
free-field OPEs and quasi-modular forms."""

from __future__ import annotations

import json
from fractions import Fraction

from . import _bvtrace
from ._bvtrace import DomainError, ParseError, bracket, ope, qme, recognize, star, trace

__all__ = [
    "DomainError",
    "ParseError",
    "a_hat",
    "bracket",
    "command",
    "eisenstein",
    "fock_character",
    "ope",
    "qme",
    "recognize",
    "run",
    "star",
    "trace",
    "wheel",
]


def _fraction(pair: tuple[str, str]) -> Fraction:
    return Fraction(int(pair[0]), int(pair[1]))


def wheel(k: int) -> Fraction:
    return _fraction(_bvtrace.wheel(k))


def a_hat(order: int) -> list[Fraction]:
    """Coefficients of (x/2)/sinh(x/2) through x^order."""
    return [_fraction(p) for p in _bvtrace.a_hat(order)]


def eisenstein(k: int, n: int) -> list[Fraction]:
    return [_fraction(p) for p in _bvtrace.eisenstein(k, n)]


def fock_character(system: str, level: int) -> list[Fraction]:
    return [_fraction(p) for p in _bvtrace.fock_character(system, level)]


def run(*args: str) -> tuple[int, str, str]:
    """Runs a command line exactly as the bvtrace executable would."""
    return _bvtrace.run(list(args))


def command(*args: str) -> dict:
    """Runs a command and returns its JSON document; raises on failure."""
    code, out, err = run(*args)
    doc = json.loads(out) if out else {}
    if code != 0:
        message = doc.get("error", {}).get("message", err.strip())
        raise RuntimeError(f"bvtrace exited with {code}: {message}")
    return doc
