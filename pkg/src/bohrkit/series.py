"""Truncated power series and certified members of the unit ball of H-infinity.

A :class:`BoundedFunc` keeps two views of one analytic self-map of the closed
disk: an exact rational form (used for pointwise values) and a truncated
Taylor series (used for majorant sums).  Both views are cross-checked when the
object is built, so a truncation or algebra bug surfaces at construction time
rather than as a silently wrong Bohr sum.

Every series attached to a member of the unit ball has ``|a_n| <= 1`` for all
n, which is what makes the geometric tail bounds below rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import CertificationError, DomainError

DEFAULT_ORDER = 128

_EPS = float(np.finfo(float).eps)
_UNIT_SLACK = 1e-12

# sampled membership check
_GRID_RADIUS = 0.999
_GRID = _GRID_RADIUS * np.exp(2j * np.pi * np.arange(256) / 256)

# Cauchy-integral coefficient spot check (trapezoid rule == FFT on a circle)
_CAUCHY_RADIUS = 0.5
_CAUCHY_POINTS = 64
_CAUCHY_NODES = _CAUCHY_RADIUS * np.exp(2j * np.pi * np.arange(_CAUCHY_POINTS) / _CAUCHY_POINTS)
_CAUCHY_MAX_N = 8
_CAUCHY_TOL = 1e-10


class TailRule(str, Enum):
    """How the coefficients beyond the truncation order are bounded."""

    UNIT_BALL = "unit_ball"  # |a_n| <= 1 for every n > N
    ZERO = "zero"  # exact polynomial


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients ``a_0 .. a_N`` plus a rule bounding the discarded tail."""

    coeffs: np.ndarray
    tail_rule: TailRule = TailRule.UNIT_BALL

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise DomainError("a truncated series needs at least the constant term")
        if not np.all(np.isfinite(c)):
            raise DomainError("series coefficients must be finite")
        rule = TailRule(self.tail_rule)
        if rule is TailRule.UNIT_BALL:
            worst = float(np.max(np.abs(c)))
            if worst > 1.0 + _UNIT_SLACK:
                raise DomainError(f"coefficient of modulus {worst!r} > 1 cannot belong to the unit ball")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "tail_rule", rule)

    @property
    def trunc_order(self) -> int:
        return self.coeffs.size - 1

    def coeff(self, n: int) -> complex:
        if n < 0:
            raise IndexError("negative coefficient index")
        if n <= self.trunc_order:
            return complex(self.coeffs[n])
        if self.tail_rule is TailRule.ZERO:
            return 0j
        raise IndexError(f"coefficient {n} lies beyond truncation order {self.trunc_order}")

    def tail(self, r: float) -> float:
        """Upper bound for ``sum_{n>N} |a_n| r^n``."""
        if self.tail_rule is TailRule.ZERO:
            return 0.0
        N = self.trunc_order
        return r ** (N + 1) / (1.0 - r)

    def deriv_tail(self, r: float) -> float:
        """Upper bound for ``sum_{n>N} n |a_n| r^(n-1)``."""
        if self.tail_rule is TailRule.ZERO:
            return 0.0
        N = self.trunc_order
        return r**N * (N + 1 - N * r) / (1.0 - r) ** 2

    def __call__(self, z):
        return P.polyval(z, self.coeffs)

    def derivative_coeffs(self) -> np.ndarray:
        return self.coeffs[1:] * np.arange(1, self.coeffs.size)

    def padded(self, N: int) -> np.ndarray:
        """Coefficients ``a_0 .. a_N``; raises if they are not known."""
        if N <= self.trunc_order:
            return np.array(self.coeffs[: N + 1])
        if self.tail_rule is TailRule.ZERO:
            out = np.zeros(N + 1, dtype=complex)
            out[: self.coeffs.size] = self.coeffs
            return out
        raise DomainError(f"coefficients beyond order {self.trunc_order} are unknown")


# --------------------------------------------------------------------------
# exact rational forms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    c: complex

    def __call__(self, z):
        return self.c + 0 * z

    def deriv(self, z):
        return 0j * z


@dataclass(frozen=True)
class Mobius:
    """``(z + a) / (1 + a z)`` for real ``0 <= a < 1``."""

    a: float

    def __call__(self, z):
        return (z + self.a) / (1 + self.a * z)

    def deriv(self, z):
        return (1 - self.a**2) / (1 + self.a * z) ** 2


@dataclass(frozen=True)
class Blaschke:
    zeros: tuple
    rotation: complex = 1.0

    def _factors(self, z):
        return [(z - zk) / (1 - np.conj(zk) * z) for zk in self.zeros]

    def __call__(self, z):
        out = self.rotation + 0j * z
        for fk in self._factors(z):
            out = out * fk
        return out

    def deriv(self, z):
        factors = self._factors(z)
        total = 0j * z
        for k, zk in enumerate(self.zeros):
            term = (1 - abs(zk) ** 2) / (1 - np.conj(zk) * z) ** 2
            for j, fj in enumerate(factors):
                if j != k:
                    term = term * fj
            total = total + term
        return self.rotation * total


@dataclass(frozen=True)
class ConvexCombo:
    children: tuple
    weights: tuple

    def __call__(self, z):
        return sum(w * ch(z) for ch, w in zip(self.children, self.weights))

    def deriv(self, z):
        return sum(w * ch.deriv(z) for ch, w in zip(self.children, self.weights))


@dataclass(frozen=True)
class Scaled:
    """``rho * f(z)``."""

    child: object
    rho: float

    def __call__(self, z):
        return self.rho * self.child(z)

    def deriv(self, z):
        return self.rho * self.child.deriv(z)


@dataclass(frozen=True)
class Rotated:
    """``f(lam * z)`` with ``|lam| = 1``."""

    child: object
    lam: complex

    def __call__(self, z):
        return self.child(self.lam * z)

    def deriv(self, z):
        return self.lam * self.child.deriv(self.lam * z)


Form = Union[Constant, Mobius, Blaschke, ConvexCombo, Scaled, Rotated]


# --------------------------------------------------------------------------
# certified functions
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundedFunc:
    """A member of the unit ball with both an exact form and a truncated series."""

    series: TruncatedSeries
    exact_eval: Form
    provenance: str

    def __call__(self, z):
        return self.exact_eval(z)

    def deriv(self, z):
        return self.exact_eval.deriv(z)

    @property
    def a0(self) -> complex:
        return complex(self.series.coeffs[0])

    @property
    def order(self) -> int:
        return self.series.trunc_order


def _certify(series: TruncatedSeries, form: Form, provenance: str) -> BoundedFunc:
    sup = float(np.max(np.abs(form(_GRID))))
    if sup > 1.0 + _UNIT_SLACK:
        raise CertificationError(f"{provenance}: sup on |z|={_GRID_RADIUS} is {sup!r} > 1")
    n_max = min(_CAUCHY_MAX_N, series.trunc_order)
    est = np.fft.fft(form(_CAUCHY_NODES))[: n_max + 1] / _CAUCHY_POINTS
    est /= _CAUCHY_RADIUS ** np.arange(n_max + 1)
    err = float(np.max(np.abs(est - series.coeffs[: n_max + 1])))
    if err > _CAUCHY_TOL:
        raise CertificationError(f"{provenance}: series disagrees with exact form by {err:.3e}")
    return BoundedFunc(series, form, provenance)


def _check_order(N: int) -> int:
    if int(N) != N or N < 1:
        raise DomainError(f"truncation order must be a positive integer, got {N!r}")
    return int(N)


def make_mobius(a: float, N: int = DEFAULT_ORDER) -> BoundedFunc:
    """The disk automorphism ``(z + a)/(1 + a z)``, extremal for every radius here.

    Its Taylor coefficients are ``a_0 = a`` and ``a_n = (1 - a^2)(-a)^(n-1)``.
    """
    N = _check_order(N)
    a = float(a)
    if not 0.0 <= a < 1.0:
        raise DomainError(f"Mobius parameter must lie in [0, 1), got {a!r}")
    coeffs = np.empty(N + 1, dtype=complex)
    coeffs[0] = a
    coeffs[1:] = (1 - a * a) * np.power(-a, np.arange(N))
    rule = TailRule.ZERO if a == 0.0 else TailRule.UNIT_BALL
    name = "identity" if a == 0.0 else f"mobius(a={a!r})"
    return _certify(TruncatedSeries(coeffs, rule), Mobius(a), name)


def identity(N: int = DEFAULT_ORDER) -> BoundedFunc:
    return make_mobius(0.0, N)


def constant(c: complex, N: int = DEFAULT_ORDER) -> BoundedFunc:
    N = _check_order(N)
    if abs(c) > 1.0:
        raise DomainError(f"constant {c!r} lies outside the closed unit disk")
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[0] = c
    return _certify(TruncatedSeries(coeffs, TailRule.ZERO), Constant(complex(c)), f"constant({c!r})")


def _blaschke_factor(zk: complex, N: int) -> np.ndarray:
    # (z - zk)/(1 - conj(zk) z): b_0 = -zk, b_n = conj(zk)^(n-1) (1 - |zk|^2)
    c = np.conj(zk)
    out = np.empty(N + 1, dtype=complex)
    out[0] = -zk
    out[1:] = (1 - abs(zk) ** 2) * np.power(c, np.arange(N))
    return out


def make_blaschke(zeros: Sequence[complex], rotation: complex = 1.0, N: int = DEFAULT_ORDER) -> BoundedFunc:
    """Finite Blaschke product ``rotation * prod (z - z_k)/(1 - conj(z_k) z)``."""
    N = _check_order(N)
    zeros = tuple(complex(z) for z in zeros)
    for zk in zeros:
        if abs(zk) >= 1.0:
            raise DomainError(f"Blaschke zero {zk!r} is not inside the unit disk")
    if abs(abs(rotation) - 1.0) > 1e-12:
        raise DomainError(f"rotation {rotation!r} is not unimodular")
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[0] = rotation
    for zk in zeros:
        coeffs = np.convolve(coeffs, _blaschke_factor(zk, N))[: N + 1]
    exact_poly = all(zk == 0 for zk in zeros) and len(zeros) <= N
    rule = TailRule.ZERO if exact_poly else TailRule.UNIT_BALL
    form = Blaschke(zeros, complex(rotation))
    return _certify(TruncatedSeries(coeffs, rule), form, f"blaschke(deg={len(zeros)})")


def _joint_rule(*fs: BoundedFunc) -> TailRule:
    if all(f.series.tail_rule is TailRule.ZERO for f in fs):
        return TailRule.ZERO
    return TailRule.UNIT_BALL


def convex(f: BoundedFunc, g: BoundedFunc, t: float) -> BoundedFunc:
    """``t f + (1 - t) g``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"convex weight must lie in [0, 1], got {t!r}")
    N = min(f.order, g.order)
    coeffs = t * f.series.coeffs[: N + 1] + (1 - t) * g.series.coeffs[: N + 1]
    form = ConvexCombo((f.exact_eval, g.exact_eval), (t, 1 - t))
    prov = f"convex(t={t!r})[{f.provenance}, {g.provenance}]"
    return _certify(TruncatedSeries(coeffs, _joint_rule(f, g)), form, prov)


def scale(f: BoundedFunc, rho: float) -> BoundedFunc:
    """``rho f`` for ``0 <= rho <= 1``."""
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"scale factor must lie in [0, 1], got {rho!r}")
    series = TruncatedSeries(rho * f.series.coeffs, f.series.tail_rule)
    return _certify(series, Scaled(f.exact_eval, rho), f"scale(rho={rho!r})[{f.provenance}]")


def rotate(f: BoundedFunc, lam: complex) -> BoundedFunc:
    """``f(lam z)`` for unimodular ``lam``."""
    if abs(abs(lam) - 1.0) > 1e-12:
        raise DomainError(f"rotation {lam!r} is not unimodular")
    coeffs = f.series.coeffs * np.power(complex(lam), np.arange(f.order + 1))
    series = TruncatedSeries(coeffs, f.series.tail_rule)
    return _certify(series, Rotated(f.exact_eval, complex(lam)), f"rotate(lam={lam!r})[{f.provenance}]")


def combine(kind: str, operands: Sequence[BoundedFunc], **params) -> BoundedFunc:
    """Dispatch to :func:`convex`, :func:`scale` or :func:`rotate` by name."""
    ops = list(operands)
    if kind == "convex":
        f, g = ops
        return convex(f, g, params["t"])
    if kind == "scale":
        (f,) = ops
        return scale(f, params["rho"])
    if kind == "rotate":
        (f,) = ops
        return rotate(f, params["lam"])
    raise DomainError(f"unknown combination {kind!r}")


# --------------------------------------------------------------------------
# Schwarz functions
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SchwarzFn:
    """``omega(z) = z^m u(z)`` with ``u`` in the unit ball and ``u(0) != 0``."""

    m: int
    inner: BoundedFunc

    def __call__(self, z):
        return z**self.m * self.inner(z)

    def deriv(self, z):
        m = self.m
        return m * z ** (m - 1) * self.inner(z) + z**m * self.inner.deriv(z)

    def series(self, N: int | None = None) -> TruncatedSeries:
        u = self.inner.series
        if N is None:
            N = u.trunc_order + self.m
        coeffs = np.zeros(N + 1, dtype=complex)
        if N >= self.m:
            coeffs[self.m :] = u.padded(N - self.m)
        exact = u.tail_rule is TailRule.ZERO and u.trunc_order + self.m <= N
        return TruncatedSeries(coeffs, TailRule.ZERO if exact else TailRule.UNIT_BALL)


def make_schwarz(m: int, u: BoundedFunc) -> SchwarzFn:
    if int(m) != m or m < 1:
        raise DomainError(f"vanishing order must be a positive integer, got {m!r}")
    if abs(u.a0) <= 1e-15:
        raise DomainError("u(0) = 0 would raise the vanishing order above m")
    return SchwarzFn(int(m), u)


def schwarz_monomial(m: int, N: int = DEFAULT_ORDER) -> SchwarzFn:
    """``omega(z) = z^m``, the Schwarz function used by every sharpness argument."""
    return make_schwarz(m, constant(1.0, N))


def compose_inner(f: TruncatedSeries | BoundedFunc, omega: SchwarzFn, N: int | None = None) -> TruncatedSeries:
    """Taylor coefficients of ``f(omega(z))`` up to degree N.

    Exact up to rounding: ``omega(0) = 0`` so degree n only sees ``a_0 .. a_{n//m}``.
    """
    if isinstance(f, BoundedFunc):
        f = f.series
    if N is None:
        N = f.trunc_order
    m = omega.m
    K = N // m
    fc = f.padded(K)
    w = omega.series(N).padded(N)
    out = np.zeros(N + 1, dtype=complex)
    out[0] = fc[K]
    for k in range(K - 1, -1, -1):
        out = np.convolve(out, w)[: N + 1]
        out[0] += fc[k]
    f_poly = f.tail_rule is TailRule.ZERO
    w_series = omega.series()
    w_poly = w_series.tail_rule is TailRule.ZERO
    if f_poly and w_poly:
        deg_f = int(np.max(np.nonzero(f.coeffs)[0], initial=0))
        deg_w = int(np.max(np.nonzero(w_series.coeffs)[0], initial=0))
        rule = TailRule.ZERO if deg_f * deg_w <= N else TailRule.UNIT_BALL
    else:
        rule = TailRule.UNIT_BALL
    return TruncatedSeries(out, rule)


# --------------------------------------------------------------------------
# pointwise evaluation with error radii
# --------------------------------------------------------------------------


class PointValue(NamedTuple):
    value: complex
    radius: float


def _require_disk(z) -> float:
    r = float(np.max(np.abs(z)))
    if not r < 1.0:
        raise DomainError(f"evaluation point of modulus {r!r} is not inside the unit disk")
    return r


def _horner_rounding(coeffs: np.ndarray, r) -> float:
    # crude but safe forward error bound for complex Horner evaluation
    return 8.0 * coeffs.size * _EPS * P.polyval(r, np.abs(coeffs))


def eval_point(f: BoundedFunc, z, mode: str = "exact") -> PointValue:
    """Value of f at z.  ``mode="series"`` uses the partial sum plus a rigorous radius."""
    _require_disk(z)
    if mode == "exact":
        return PointValue(f(z), 0.0 * np.abs(z))
    if mode != "series":
        raise DomainError(f"unknown evaluation mode {mode!r}")
    r = np.abs(z)
    s = f.series
    radius = s.tail(r) + _horner_rounding(s.coeffs, r)
    return PointValue(s(z), radius)


def eval_deriv(f: BoundedFunc, z, mode: str = "exact") -> PointValue:
    """Value of f' at z, exact or from the differentiated partial sum."""
    _require_disk(z)
    if mode == "exact":
        return PointValue(f.deriv(z), 0.0 * np.abs(z))
    if mode != "series":
        raise DomainError(f"unknown evaluation mode {mode!r}")
    r = np.abs(z)
    s = f.series
    dc = s.derivative_coeffs()
    if dc.size == 0:
        return PointValue(0j * z, 0.0 * r)
    radius = s.deriv_tail(r) + _horner_rounding(dc, r)
    return PointValue(P.polyval(z, dc), radius)
