"""Radius-defining polynomial families and a certified root solver.

Each family is stored in expanded sparse form (coefficient, exponent) so that
evaluation can use exactly rounded summation (:func:`math.fsum`) over the
monomials.  Roots are found by bisection on the family's uniqueness bracket,
polished with safeguarded Newton steps and returned with a sign-change
certificate of width at most ``tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, Iterable, Sequence

from .errors import ConvergenceError, DomainError, UsageError
from .functionals import BASELINE, Kind, as_kind

Terms = list  # list of (coefficient, exponent)

DEFAULT_TOL = 1e-12
_BISECT_WIDTH = 1e-6


def _alpha(m, a):
    return [(1, 0), (-3, 1), (-1, m), (-1, m + 1)]


def _beta(m, a):
    return [(1, 0), (-2, 1), (-1, m)]


def _zeta(m, a):
    return [(3, m), (-5, m + 1), (3, 1), (-1, 0)]


def _eta(m, a):
    return [(2, m), (-3, m + 1), (2, 1), (-1, 0)]


def _gamma(m, a):
    return [(2, 2 * m + 2), (-1, 2 * m + 1), (1, 2 * m), (4, m + 2), (-2, m + 1), (2, m), (2, 2), (1, 1), (-1, 0)]


def _delta(m, a):
    # (r^2m + r^m - 1)(1 - r) + r^2 (1 + r^m)^2
    return [(1, 2 * m + 2), (-1, 2 * m + 1), (1, 2 * m), (2, m + 2), (-1, m + 1), (1, m), (1, 2), (1, 1), (-1, 0)]


def _delta_display(m, a):
    # r^m (r^m + 1)(r^m - r + 2) + r - 1, as printed next to the statement
    return [(1, 3 * m), (-1, 2 * m + 1), (3, 2 * m), (-1, m + 1), (2, m), (1, 1), (-1, 0)]


def _theta(m, a):
    return [(2, 2 * m + 2), (-1, 2 * m + 1), (1, 2 * m), (4, m + 2), (3, 1), (-1, 0)]


def _vartheta(m, a):
    return [(1, 2 * m + 2), (-1, 2 * m + 1), (1, 2 * m), (2, m + 2), (2, 1), (-1, 0)]


def _vartheta_display(m, a):
    # (1 - r)(r^m + r - 1) + r^2 (1 + r^m)^2, the printed H_m(1, r)
    return [(1, 2 * m + 2), (2, m + 2), (-1, m + 1), (1, m), (2, 1), (-1, 0)]


def _alpha_a(m, a):
    # (1 - r)(1 - r^m) - (1 + a) r (1 + a r^m)
    return [(1, 0), (-(2 + a), 1), (-1, m), (1 - a - a * a, m + 1)]


def _beta_a(m, a):
    # (1 - r)(1 - r^2m) - r (1 + a r^m)^2
    return [(1, 0), (-2, 1), (-1, 2 * m), (-2 * a, m + 1), (1 - a * a, 2 * m + 1)]


def _mu(m, a):
    return [(1, 2 * m), (2, m), (-1, 0)]


def _nu(m, a):
    return [(5, m), (-2, m - 1), (-1, 0)]


def _tau(m, a):
    return [(1, 2 * m), (1, m), (-1, 0)]


def _xi(m, a):
    return [(1, 2 * m), (2, 1), (-1, 0)]


def _chi(m, a):
    return [(1, 2 * m), (1, 1), (-1, 0)]


def _xi5(m, a):
    return [(11, 2 * m), (-6, 2 * m - 1), (-8, m), (2, m - 1), (1, 0)]


# one ulp past 1/3: for large m the root sits within 1e-29 of 1/3 and the
# polynomial cannot be signed reliably at fl(1/3)
_THIRD = math.nextafter(1.0 / 3.0, 1.0)
# xi5 vanishes at r = 1 for every m; stop just short of it
_XI5_HI = 1.0 - 2.0**-20


@dataclass(frozen=True)
class _Spec:
    terms: Callable[[int, float | None], Terms]
    bracket: tuple
    needs_a: bool = False


FAMILIES: dict[str, _Spec] = {
    "alpha": _Spec(_alpha, (0.0, _THIRD)),
    "beta": _Spec(_beta, (0.0, 1.0)),
    "zeta": _Spec(_zeta, (0.0, _THIRD)),
    "eta": _Spec(_eta, (0.0, 0.5)),
    "gamma": _Spec(_gamma, (0.0, 1.0)),
    "delta": _Spec(_delta, (0.0, 1.0)),
    "theta": _Spec(_theta, (0.0, 1.0)),
    "vartheta": _Spec(_vartheta, (0.0, 1.0)),
    "alpha_a": _Spec(_alpha_a, (0.0, 1.0), needs_a=True),
    "beta_a": _Spec(_beta_a, (0.0, 1.0), needs_a=True),
    "mu": _Spec(_mu, (0.0, 1.0)),
    "nu": _Spec(_nu, (0.0, 1.0)),
    "tau": _Spec(_tau, (0.0, 1.0)),
    "xi": _Spec(_xi, (0.0, 1.0)),
    "chi": _Spec(_chi, (0.0, 1.0)),
    "xi5": _Spec(_xi5, (0.0, _XI5_HI)),
    # diagnostic: the printed forms that disagree with the proofs
    "delta_display": _Spec(_delta_display, (0.0, 1.0)),
    "vartheta_display": _Spec(_vartheta_display, (0.0, 1.0)),
}

TABLE_FAMILIES = {
    1: ("alpha", "beta", "zeta", "eta"),
    2: ("gamma", "delta", "theta", "vartheta"),
}

KIND_FAMILY = {
    Kind.A: "alpha",
    Kind.B: "beta",
    Kind.C: "zeta",
    Kind.D: "eta",
    Kind.E: "gamma",
    Kind.F: "delta",
    Kind.G: "theta",
    Kind.H: "vartheta",
}

_LIMITS = {
    "alpha": 1.0 / 3.0,
    "beta": 0.5,
    "zeta": 1.0 / 3.0,
    "eta": 0.5,
    "gamma": 0.5,
    "delta": (math.sqrt(5.0) - 1.0) / 2.0,
    "theta": 1.0 / 3.0,
    "vartheta": 0.5,
}


@dataclass(frozen=True)
class EquationFamily:
    tag: str
    m: int = 1
    a: float | None = None

    def __post_init__(self) -> None:
        if self.tag not in FAMILIES:
            raise UsageError(f"unknown equation family {self.tag!r}")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        spec = FAMILIES[self.tag]
        if spec.needs_a:
            if self.a is None:
                raise UsageError(f"family {self.tag!r} needs the parameter a")
            if not 0.0 <= self.a <= 1.0:
                raise DomainError(f"a must lie in [0, 1], got {self.a!r}")
        elif self.a is not None:
            raise UsageError(f"family {self.tag!r} does not take a parameter a")

    def terms(self) -> Terms:
        return FAMILIES[self.tag].terms(int(self.m), self.a)

    @property
    def bracket(self) -> tuple:
        return FAMILIES[self.tag].bracket

    def __call__(self, r: float) -> float:
        return _eval_terms(self.terms(), r)


@dataclass(frozen=True)
class RootResult:
    root: float
    bracket: tuple
    residual: float
    iterations: int
    sign_certificate: tuple

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "bracket": list(self.bracket),
            "residual": self.residual,
            "iterations": self.iterations,
            "sign_certificate": list(self.sign_certificate),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RootResult":
        return cls(d["root"], tuple(d["bracket"]), d["residual"], d["iterations"], tuple(d["sign_certificate"]))


def _eval_terms(terms: Iterable, r: float) -> float:
    return math.fsum(c * r**e for c, e in terms)


def _deriv_terms(terms: Iterable, r: float) -> float:
    return math.fsum(c * e * r ** (e - 1) for c, e in terms if e > 0)


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def eval_family(fam: EquationFamily, r: float) -> float:
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r!r}")
    return fam(r)


def solve_terms(terms: Sequence, lo: float, hi: float, tol: float = DEFAULT_TOL) -> RootResult:
    """Certified simple root of a sparse polynomial on ``[lo, hi]``."""
    if tol < 1e-14:
        raise DomainError(f"tolerance {tol!r} is below the supported 1e-14")
    f = lambda x: _eval_terms(terms, x)  # noqa: E731
    s_lo, s_hi = _sign(f(lo)), _sign(f(hi))
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise ConvergenceError(f"no sign change on [{lo!r}, {hi!r}]")
    iterations = 0

    def narrow(x: float) -> None:
        nonlocal lo, hi
        sx = _sign(f(x))
        if sx == s_lo:
            lo = x
        elif sx == s_hi:
            hi = x
        else:  # exact zero
            lo = hi = x

    while hi - lo > _BISECT_WIDTH:
        narrow(0.5 * (lo + hi))
        iterations += 1

    # Newton polish; lo/hi keep shrinking as a safeguard, the certificate is
    # taken independently around the final iterate
    x = 0.5 * (lo + hi)
    for _ in range(100):
        fx = f(x)
        iterations += 1
        if fx == 0.0:
            break
        narrow(x)
        d = _deriv_terms(terms, x)
        x_new = x - fx / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        step = abs(x_new - x)
        x = x_new
        if step < tol:
            break

    half = 0.45 * tol
    c_lo, c_hi = x - half, x + half
    if not (_sign(f(c_lo)) == s_lo and _sign(f(c_hi)) == s_hi):
        # iterate not certifiable (flat residual noise); finish by bisection
        while hi - lo > tol:
            narrow(0.5 * (lo + hi))
            iterations += 1
        c_lo, c_hi = lo, hi
        if not c_lo < x < c_hi:
            x = 0.5 * (c_lo + c_hi)
    return RootResult(x, (c_lo, c_hi), abs(f(x)), iterations, (s_lo, s_hi))


def solve_radius(fam: EquationFamily, tol: float = DEFAULT_TOL) -> RootResult:
    """Unique root of the family's polynomial on its uniqueness bracket."""
    lo, hi = fam.bracket
    try:
        return solve_terms(fam.terms(), lo, hi, tol)
    except ConvergenceError as exc:
        raise ConvergenceError(f"{fam}: {exc}") from None


def radius(tag: str, m: int = 1, a: float | None = None, tol: float = DEFAULT_TOL) -> float:
    return solve_radius(EquationFamily(tag, m, a), tol).root


def theorem_radius(kind, m: int, tol: float = DEFAULT_TOL) -> float:
    """Sharp radius of the letter functional ``kind`` for Schwarz order m."""
    kind = as_kind(kind)
    if kind in BASELINE:
        kind, m = BASELINE[kind], 1
    if kind is Kind.I:
        return 1.0 / 3.0
    if kind not in KIND_FAMILY:
        raise UsageError(f"kind {kind.value} has an a-dependent radius; use classical_radius")
    return radius(KIND_FAMILY[kind], m, tol=tol)


CLASSICAL_NAMES = ("thmB1", "thmB2", "thmC1", "thmC2", "thmD1", "thmD2", "thmE1", "thmE2", "thmF")


def classical_radius(name: str, a: float | None = None, tol: float = DEFAULT_TOL) -> float:
    """Radii of the m = 1 baseline results, closed form or certified root."""

    def need_a() -> float:
        if a is None:
            raise UsageError(f"{name} depends on a")
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"a must lie in [0, 1], got {a!r}")
        return float(a)

    if name == "thmB1":
        return 1.0 / (2.0 + need_a())
    if name == "thmB2":
        return 0.5
    if name == "thmC1":
        x = need_a()
        return 2.0 / (3.0 + x + math.sqrt(5.0) * (1.0 + x))
    if name == "thmC2":
        x = need_a()
        cubic = [(1 - x**3, 3), (-(1 + 2 * x), 2), (-2, 1), (1, 0)]
        return solve_terms(cubic, 0.0, 0.5, tol).root
    if name == "thmD1":
        return 0.2
    if name in ("thmD2", "thmF"):
        return 1.0 / 3.0
    if name == "thmE1":
        return (math.sqrt(17.0) - 3.0) / 4.0
    if name == "thmE2":
        quartic = [(1, 0), (-2, 1), (-1, 2), (-1, 3), (-1, 4)]
        return solve_terms(quartic, 0.0, 1.0, tol).root
    raise UsageError(f"unknown classical radius {name!r}")


def limit_radius(tag: str) -> float:
    """Limit of the family's radius as m grows (terms with r^m dropped)."""
    try:
        return _LIMITS[tag]
    except KeyError:
        raise UsageError(f"no m -> infinity limit registered for {tag!r}") from None


def round6(x: float) -> float:
    return float(Decimal(repr(x)).quantize(Decimal("0.000001"), rounding=ROUND_HALF_UP))


def table_results(which: int, m_list: Sequence[int], tol: float = DEFAULT_TOL) -> list:
    """``[(family, m, RootResult), ...]`` for every cell of radius table 1 or 2."""
    if which not in TABLE_FAMILIES:
        raise UsageError(f"table must be 1 or 2, got {which!r}")
    if not m_list:
        raise UsageError("empty m list")
    out = []
    for m in m_list:
        for tag in TABLE_FAMILIES[which]:
            out.append((tag, m, solve_radius(EquationFamily(tag, m), tol)))
    return out


def make_table(which: int, m_list: Sequence[int], tol: float = DEFAULT_TOL) -> list[dict]:
    """Rows ``{"m": m, family: radius, ...}`` rounded to 6 decimals."""
    rows: dict[int, dict] = {}
    for tag, m, res in table_results(which, m_list, tol):
        rows.setdefault(m, {"m": m})[tag] = round6(res.root)
    return [rows[m] for m in dict.fromkeys(m_list)]


def radius_record(fam: EquationFamily, res: RootResult) -> dict:
    """Flat record with the stable column order used by the CLI."""
    return {
        "family": fam.tag,
        "m": fam.m,
        "a": fam.a,
        "root": res.root,
        "residual": res.residual,
        "iterations": res.iterations,
    }
