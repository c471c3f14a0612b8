"""Bohr sums, the area term and the refined Bohr functionals.

Every evaluation returns a :class:`BoundedValue`: the computed partial value
plus a non-negative truncation slack.  Inequalities of the form
``functional <= 1`` are always tested on ``value + tail``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, PrecisionError
from .series import BoundedFunc, SchwarzFn, TailRule, TruncatedSeries, schwarz_monomial


class Kind(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"
    I = "I"  # noqa: E741
    ThmB1 = "ThmB1"
    ThmB2 = "ThmB2"
    ThmC1 = "ThmC1"
    ThmC2 = "ThmC2"
    ThmD1 = "ThmD1"
    ThmD2 = "ThmD2"
    ThmE1 = "ThmE1"
    ThmE2 = "ThmE2"
    ThmF = "ThmF"


LETTER_KINDS = tuple(Kind(c) for c in "ABCDEFGHI")

# baseline tags are the letter functionals at m = 1, omega(z) = z
BASELINE = {
    Kind.ThmC1: Kind.A,
    Kind.ThmC2: Kind.B,
    Kind.ThmD1: Kind.C,
    Kind.ThmD2: Kind.D,
    Kind.ThmE1: Kind.E,
    Kind.ThmE2: Kind.F,
    Kind.ThmF: Kind.I,
}

_DERIV_KINDS = frozenset({Kind.E, Kind.F, Kind.G, Kind.H})
# kinds whose |f(omega(z)) - a_0| term peaks where omega(z) points away from a_0
_ANTIPODAL_KINDS = frozenset({Kind.C, Kind.D, Kind.I})
_MAX_DERIV_RADIUS = 0.99


def as_kind(kind) -> Kind:
    try:
        return Kind(kind)
    except ValueError:
        raise DomainError(f"unknown functional kind {kind!r}") from None


@dataclass(frozen=True)
class BoundedValue:
    value: float
    tail: float = 0.0

    @property
    def upper(self):
        return self.value + self.tail

    def __add__(self, other: "BoundedValue") -> "BoundedValue":
        return BoundedValue(self.value + other.value, self.tail + other.tail)


def _series(f) -> TruncatedSeries:
    return f.series if isinstance(f, BoundedFunc) else f


def _check_r(r) -> None:
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr >= 1):
        raise DomainError(f"radius must lie in [0, 1), got {r!r}")


def bohr_sum(f, k: int, r) -> BoundedValue:
    """``B_k(f, r) = sum_{n >= k} |a_n| r^n`` with the geometric tail bound."""
    _check_r(r)
    if k < 0:
        raise DomainError("bohr_sum index must be non-negative")
    s = _series(f)
    mags = np.abs(s.coeffs)
    n = np.arange(k, s.coeffs.size)
    powers = np.power.outer(np.asarray(r, dtype=float), n)
    value = powers @ mags[k:]
    tail = s.tail(np.asarray(r, dtype=float))
    return BoundedValue(value if np.ndim(value) else float(value), tail if np.ndim(tail) else float(tail))


def area_norm(f, r) -> BoundedValue:
    """``||f_0||_r^2 = sum_{n >= 1} |a_n|^2 r^(2n)``."""
    _check_r(r)
    s = _series(f)
    r = np.asarray(r, dtype=float)
    sq = np.abs(s.coeffs[1:]) ** 2
    n = np.arange(1, s.coeffs.size)
    value = np.power.outer(r * r, n) @ sq
    if s.tail_rule is TailRule.ZERO:
        tail = 0.0 * r
    else:
        N = s.trunc_order
        tail = r ** (2 * N + 2) / (1 - r * r)
    return BoundedValue(value if np.ndim(value) else float(value), tail if np.ndim(tail) else float(tail))


def area_weight(a: float, r):
    return (1 + a * r) / ((1 + a) * (1 - r))


def area_term(f, r) -> BoundedValue:
    """``(1 + a r)/((1 + a)(1 - r)) ||f_0||_r^2`` with ``a = |a_0|``."""
    _check_r(r)
    a = abs(_series(f).coeffs[0])
    w = area_weight(a, np.asarray(r, dtype=float))
    norm = area_norm(f, r)
    return BoundedValue(w * norm.value, w * norm.tail)


def eval_functional(kind, f: BoundedFunc, omega: SchwarzFn | None, z) -> BoundedValue:
    """Upper-bounded value of a refined Bohr functional at the point z.

    ``omega`` is ignored for the ``Thm*`` baseline tags, which use ``omega(z) = z``.
    ``z`` may be a scalar or an array; the returned fields broadcast accordingly.
    """
    kind = as_kind(kind)
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(r >= 1):
        raise DomainError("functional evaluation needs |z| < 1")
    if kind in BASELINE:
        return eval_functional(BASELINE[kind], f, schwarz_monomial(1, f.order), z)
    a0 = f.a0
    a = abs(a0)
    area = area_term(f, r)

    if kind is Kind.ThmB1:
        out = bohr_sum(f, 0, r) + area
        return _scalarize(out, z)
    if kind is Kind.ThmB2:
        out = BoundedValue(a * a + 0 * r) + bohr_sum(f, 1, r) + area
        return _scalarize(out, z)

    if omega is None:
        raise DomainError(f"kind {kind.value} needs a Schwarz function")
    w = omega(z)
    fw = f(w)

    if kind in _DERIV_KINDS:
        if np.any(r > _MAX_DERIV_RADIUS):
            raise PrecisionError(f"|z| > {_MAX_DERIV_RADIUS} is too close to the circle for derivative kinds")
        dfw = np.abs(f.deriv(w))
        weight = np.abs(w) if kind in (Kind.E, Kind.F) else r
        lead = np.abs(fw) if kind in (Kind.E, Kind.G) else np.abs(fw) ** 2
        out = BoundedValue(lead + weight * dfw) + bohr_sum(f, 2, r) + area
    elif kind is Kind.A:
        out = BoundedValue(np.abs(fw)) + bohr_sum(f, 1, r) + area
    elif kind is Kind.B:
        out = BoundedValue(np.abs(fw) ** 2) + bohr_sum(f, 1, r) + area
    elif kind is Kind.C:
        out = BoundedValue(np.abs(fw - a0)) + bohr_sum(f, 0, r) + area
    elif kind is Kind.D:
        out = BoundedValue(a * a + np.abs(fw - a0)) + bohr_sum(f, 1, r) + area
    elif kind is Kind.I:
        out = BoundedValue(np.abs(fw - a0) ** 2) + bohr_sum(f, 0, r) + area
    else:  # pragma: no cover - enum is exhaustive
        raise DomainError(kind)
    return _scalarize(out, z)


def _scalarize(v: BoundedValue, z) -> BoundedValue:
    if np.ndim(z) == 0:
        return BoundedValue(float(v.value), float(v.tail))
    value = np.broadcast_to(v.value, np.shape(z)).astype(float)
    tail = np.broadcast_to(v.tail, np.shape(z)).astype(float)
    return BoundedValue(value, tail)


def _check_params(m: int, a: float, r: float) -> None:
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if not 0.0 <= a < 1.0:
        raise DomainError(f"a must lie in [0, 1), got {a!r}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r!r}")


def extremal_value(kind, m: int, a: float, r: float) -> float:
    """Closed-form value of the functional for ``f = phi_a``, ``omega(z) = z^m``.

    The value is attained at :func:`extremal_point`.  Baseline tags use m = 1.
    """
    kind = as_kind(kind)
    if kind in BASELINE:
        return extremal_value(BASELINE[kind], 1, a, r)
    _check_params(m, a, r)
    b = 1.0 - a * a
    rm = r**m
    s = (rm + a) / (1 + a * rm)
    T = r * b / (1 - r)
    if kind is Kind.ThmB1:
        return a + T
    if kind is Kind.ThmB2:
        return a * a + T
    if kind is Kind.A:
        return s + T
    if kind is Kind.B:
        return s * s + T
    if kind is Kind.C:
        return a + T + rm * b / (1 - a * rm)
    if kind is Kind.D:
        return a * a + T + rm * b / (1 - a * rm)
    if kind is Kind.I:
        return a + T + (rm * b / (1 - a * rm)) ** 2
    tail2 = r * r * b / (1 - r)
    deriv_weight = rm if kind in (Kind.E, Kind.F) else r
    lead = s if kind in (Kind.E, Kind.G) else s * s
    return lead + deriv_weight * b / (1 + a * rm) ** 2 + tail2


def extremal_point(kind, m: int, r: float) -> complex:
    """The point z with |z| = r where ``extremal_value`` is attained.

    For C, D and I the term ``|phi_a(z^m) - a|`` is largest when ``z^m = -r^m``;
    the other kinds are evaluated on the positive axis.  For E..H this is a
    point of attainment, not the maximum over the circle, which is all the
    sharpness arguments need.
    """
    kind = as_kind(kind)
    if kind in BASELINE:
        kind, m = BASELINE[kind], 1
    if kind in _ANTIPODAL_KINDS:
        return r * complex(math.cos(math.pi / m), math.sin(math.pi / m))
    return complex(r)


def coefficient_bound(a: float, r: float) -> float:
    """Sharp bound on ``B_1(f, r)`` for f in the unit ball with ``|a_0| = a``."""
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"a must lie in [0, 1], got {a!r}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r!r}")
    if a >= r:
        return r * (1 - a * a) / (1 - r * a)
    return r * math.sqrt(1 - a * a) / math.sqrt(1 - r * r)
