"""Randomized and grid verification of the refined Bohr inequalities.

Every check returns a :class:`CheckReport`.  Randomness flows from a single
master seed; trial ``t`` draws from its own ``SeedSequence`` child so that a
violation can be replayed from the seed stored with it, and so that the same
trial produces the same functions whichever subject is being checked.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from . import radii
from .errors import DomainError
from .functionals import (
    LETTER_KINDS,
    Kind,
    area_term,
    as_kind,
    bohr_sum,
    coefficient_bound,
    eval_functional,
    extremal_value,
)
from .series import (
    DEFAULT_ORDER,
    BoundedFunc,
    SchwarzFn,
    constant,
    convex,
    make_blaschke,
    make_mobius,
    make_schwarz,
    rotate,
    scale,
)

VIOLATION_TOL = 1e-9
A_STAR = 4.0 * math.sqrt(2.0) - 5.0


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    blaschke_degree_max: int = 4
    mix_depth_max: int = 2
    z_per_function: int = 16
    order: int = DEFAULT_ORDER

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.blaschke_degree_max < 1 or self.z_per_function < 1 or self.order < 1:
            raise DomainError("sampler sizes must be positive")
        if self.mix_depth_max < 0:
            raise DomainError("mix depth cannot be negative")


@dataclass(frozen=True)
class Violation:
    seed: int
    params: dict
    value: float


@dataclass
class CheckReport:
    subject: str
    trials: int
    worst_margin: float = -math.inf
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, margin: float, seed: int, params: dict, value: float, tol: float = VIOLATION_TOL) -> None:
        self.worst_margin = max(self.worst_margin, float(margin))
        if margin > tol:
            self.violations.append(Violation(int(seed), params, float(value)))

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(
            self.subject,
            self.trials + other.trials,
            max(self.worst_margin, other.worst_margin),
            self.violations + other.violations,
            {**self.notes, **other.notes},
        )

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "trials": self.trials,
            "worst_margin": self.worst_margin,
            "passed": self.passed,
            "violations": [asdict(v) for v in self.violations],
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(
            d["subject"],
            d["trials"],
            d["worst_margin"],
            [Violation(**v) for v in d["violations"]],
            d.get("notes", {}),
        )


def derive_seed(seed: int, *keys: int) -> int:
    """Child seed for trial-level reproducibility."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def _unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def _draw(rng: np.random.Generator, cfg: SamplerConfig, depth: int) -> BoundedFunc:
    N = cfg.order
    if depth < cfg.mix_depth_max and rng.random() < 0.4:
        op = int(rng.integers(3))
        if op == 0:
            f = _draw(rng, cfg, depth + 1)
            g = _draw(rng, cfg, depth + 1)
            return convex(f, g, float(rng.random()))
        if op == 1:
            return scale(_draw(rng, cfg, depth + 1), float(rng.random()))
        return rotate(_draw(rng, cfg, depth + 1), _unimodular(rng))
    if rng.random() < 0.15:
        # the extremal family itself, biased towards a near 1
        return make_mobius(min(float(np.sqrt(rng.random())), 0.999), N)
    degree = int(rng.integers(0, cfg.blaschke_degree_max + 1))
    if degree == 0:
        return constant(float(rng.random()) * _unimodular(rng), N)
    moduli = 0.99 * np.sqrt(rng.random(degree))
    zeros = [mod * _unimodular(rng) for mod in moduli]
    return make_blaschke(zeros, _unimodular(rng), N)


def sample_bounded(config: SamplerConfig, rng: np.random.Generator | None = None) -> BoundedFunc:
    """Random member of the unit ball built from Blaschke products and closure operations."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    return _draw(rng, config, 0)


def sample_schwarz(m: int, config: SamplerConfig, rng: np.random.Generator | None = None) -> SchwarzFn:
    """``z^m u(z)`` with u drawn by :func:`sample_bounded`, rejecting ``u(0) = 0``."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    while True:
        u = _draw(rng, config, 0)
        if abs(u.a0) > 1e-12:
            return make_schwarz(m, u)


@lru_cache(maxsize=8192)
def _trial_draw(sub_seed: int, cfg: SamplerConfig, a_max: float | None):
    rng = np.random.default_rng(sub_seed)
    f = _draw(rng, cfg, 0)
    while a_max is not None and abs(f.a0) > a_max:
        f = _draw(rng, cfg, 0)
    omega = sample_schwarz(1, cfg, rng)
    angles = rng.random(cfg.z_per_function)
    return f, omega.inner, np.exp(2j * np.pi * angles)


def _theorem_hypothesis(kind: Kind, m: int) -> float | None:
    # for m = 1 the I-inequality at r = 1/3 only holds when |a_0| <= a*
    return A_STAR if kind is Kind.I and m == 1 else None


def check_theorem(kind, m: int, config: SamplerConfig, r_fraction: float = 0.999, trials: int = 1000) -> CheckReport:
    """Random (f, omega, z) scan on ``|z| = r_fraction * radius(kind, m)``."""
    kind = as_kind(kind)
    if kind not in LETTER_KINDS:
        raise DomainError(f"check_theorem takes kinds A..I, got {kind.value}")
    if not 0.0 < r_fraction <= 1.0:
        raise DomainError(f"r_fraction must lie in (0, 1], got {r_fraction!r}")
    R = radii.theorem_radius(kind, m)
    r = r_fraction * R
    a_max = _theorem_hypothesis(kind, m)
    cfg = replace(config, seed=0)
    report = CheckReport(f"theorem:{kind.value}:m={m}:r_fraction={r_fraction}", trials)
    report.notes["r"] = r
    if a_max is not None:
        report.notes["a_max"] = a_max
    for t in range(trials):
        sub = derive_seed(config.seed, t)
        f, u, unit = _trial_draw(sub, cfg, a_max)
        omega = make_schwarz(m, u)
        zs = r * unit
        upper = np.asarray(eval_functional(kind, f, omega, zs).upper)
        i = int(np.argmax(upper))
        params = {"trial": t, "z": [zs[i].real, zs[i].imag], "f": f.provenance, "u": u.provenance}
        report.record(upper[i] - 1.0, sub, params, upper[i])
    return report


def sharpness_witness(kind, m: int, a: float, eps: float, a_dependent: bool = False) -> float:
    """Extremal value just past the sharp radius; exceeds 1 when the radius is sharp.

    With ``a_dependent`` the a-specific radius (alpha_{m,a} or beta_{m,a}) is used.
    A negative ``eps`` probes just below the radius instead.
    """
    kind = as_kind(kind)
    if a_dependent:
        tag = {Kind.A: "alpha_a", Kind.B: "beta_a"}.get(kind)
        if tag is None:
            raise DomainError(f"no a-dependent radius for kind {kind.value}")
        R = radii.radius(tag, m, a)
    else:
        R = radii.theorem_radius(kind, m)
    r_star = R + eps
    if not 0.0 <= r_star < 1.0:
        raise DomainError(f"probe radius {r_star!r} leaves [0, 1)")
    return extremal_value(kind, m, a, r_star)


def _a_star_excess(a: float) -> float:
    return extremal_value(Kind.I, 1, a, 1.0 / 3.0) - 1.0


def threshold_a_star(tol: float = 1e-15) -> float:
    """Largest a for which the m = 1 extremal I-value at r = 1/3 stays <= 1."""
    lo, hi = 0.0, 0.99
    if not (_a_star_excess(lo) < 0 < _a_star_excess(hi)):
        raise ArithmeticError("no sign change for the a* threshold")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _a_star_excess(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_a_star_dichotomy(m: int = 1, n_grid: int = 1000) -> CheckReport:
    """At r = 1/3: for m = 1 the extremal value is <= 1 exactly when a <= a*; for m >= 2 always."""
    report = CheckReport(f"a_star_dichotomy:m={m}", n_grid)
    for a in np.linspace(0.0, 0.999, n_grid):
        a = float(a)
        excess = extremal_value(Kind.I, m, a, 1.0 / 3.0) - 1.0
        expect_ok = m >= 2 or a <= A_STAR
        if expect_ok:
            report.record(excess, 0, {"a": a}, excess + 1.0, tol=0.0)
        elif excess <= 0.0:
            report.violations.append(Violation(0, {"a": a, "expected": "above 1"}, excess + 1.0))
    return report


# --------------------------------------------------------------------------
# lemmas
# --------------------------------------------------------------------------


def _order_for(r_max: float, tail: float = 1e-12, floor: int = DEFAULT_ORDER) -> int:
    # smallest N with r^(N+1)/(1-r) <= tail
    if r_max <= 0:
        return floor
    n = math.ceil(math.log(tail * (1 - r_max)) / math.log(r_max)) - 1
    return max(floor, n)


def _lemma_setup(config: SamplerConfig, r_grid) -> tuple:
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0 or np.any(r < 0) or np.any(r > 0.9):
        raise DomainError("lemma grids must lie in [0, 0.9]")
    cfg = replace(config, seed=0, order=_order_for(float(r.max()), floor=config.order))
    return r, cfg


def check_lemma1(config: SamplerConfig, r_grid, trials: int = 500) -> CheckReport:
    """``B_1(f, r) <= coefficient_bound(|a_0|, r)`` over sampled f and the grid."""
    r, cfg = _lemma_setup(config, r_grid)
    report = CheckReport("lemma1", trials)
    for t in range(trials):
        sub = derive_seed(config.seed, t)
        f = _trial_draw(sub, cfg, None)[0]
        a = min(abs(f.a0), 1.0)
        lhs = np.atleast_1d(bohr_sum(f, 1, r).upper)
        rhs = np.array([coefficient_bound(a, float(x)) for x in r])
        i = int(np.argmax(lhs - rhs))
        report.record(lhs[i] - rhs[i], sub, {"trial": t, "r": float(r[i]), "f": f.provenance}, lhs[i])
    return report


def check_lemma2(config: SamplerConfig, r_grid, trials: int = 500) -> CheckReport:
    """``B_k(f, r) + area term <= (1 - a^2) r^k / (1 - r)`` for k = 1 and k = 2."""
    r, cfg = _lemma_setup(config, r_grid)
    report = CheckReport("lemma2", trials)
    for t in range(trials):
        sub = derive_seed(config.seed, t)
        f = _trial_draw(sub, cfg, None)[0]
        a = abs(f.a0)
        area = area_term(f, r)
        for k in (1, 2):
            lhs = np.atleast_1d((bohr_sum(f, k, r) + area).upper)
            rhs = (1 - a * a) * r**k / (1 - r)
            i = int(np.argmax(lhs - rhs))
            report.record(lhs[i] - rhs[i], sub, {"trial": t, "k": k, "r": float(r[i]), "f": f.provenance}, lhs[i])
    return report


def _disk_points(rng: np.random.Generator, n: int, r_max: float = 0.95) -> np.ndarray:
    return r_max * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def pseudo_hyperbolic(w1, w2):
    return np.abs(w1 - w2) / np.abs(1 - np.conj(w1) * w2)


def check_schwarz_pick(config: SamplerConfig, pairs: int = 16, trials: int = 500) -> CheckReport:
    """Two-point contraction and the derivative bound for sampled self-maps."""
    cfg = replace(config, seed=0)
    report = CheckReport("schwarz_pick", trials)
    for t in range(trials):
        sub = derive_seed(config.seed, t)
        f = _trial_draw(sub, cfg, None)[0]
        rng = np.random.default_rng(derive_seed(sub, 1))
        z1, z2, z = (_disk_points(rng, pairs) for _ in range(3))
        two_point = pseudo_hyperbolic(f(z1), f(z2)) - pseudo_hyperbolic(z1, z2)
        fz = f(z)
        deriv = np.abs(f.deriv(z)) - (1 - np.abs(fz) ** 2) / (1 - np.abs(z) ** 2)
        for label, margins, pts in (("two_point", two_point, (z1, z2)), ("derivative", deriv, (z,))):
            i = int(np.argmax(margins))
            params = {"trial": t, "check": label, "points": [[p[i].real, p[i].imag] for p in pts], "f": f.provenance}
            report.record(margins[i], sub, params, margins[i])
    return report


class QSqrt2(NamedTuple):
    """Exact number ``p + q sqrt(2)`` with rational p, q."""

    p: Fraction
    q: Fraction

    def __add__(self, o):
        return QSqrt2(self.p + o.p, self.q + o.q)

    def __sub__(self, o):
        return QSqrt2(self.p - o.p, self.q - o.q)

    def __mul__(self, o):
        return QSqrt2(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)

    def sign(self) -> int:
        sp, sq = (self.p > 0) - (self.p < 0), (self.q > 0) - (self.q < 0)
        if sp == sq or sq == 0:
            return sp
        if sp == 0:
            return sq
        # opposite signs: compare p^2 with 2 q^2
        d = self.p * self.p - 2 * self.q * self.q
        return sp * ((d > 0) - (d < 0))


def _q(p, q=0) -> QSqrt2:
    return QSqrt2(Fraction(p), Fraction(q))


# G(x) = (28 - 9 sqrt2) x^2 + (12 sqrt2 - 28) x + 8 - 3 sqrt2
_G2, _G1, _G0 = _q(28, -9), _q(-28, 12), _q(8, -3)


def lemma3_G(x: Fraction) -> QSqrt2:
    x = _q(x)
    return _G2 * x * x + _G1 * x + _G0


def lemma3_discriminant() -> QSqrt2:
    return _G1 * _G1 - _q(4) * _G2 * _G0


@lru_cache(maxsize=None)
def _lemma3_exact_facts(n_grid: int = 1000) -> dict:
    grid_ok = all(lemma3_G(Fraction(k, 3 * (n_grid - 1))).sign() > 0 for k in range(n_grid))
    disc = lemma3_discriminant()
    return {
        "discriminant": [str(disc.p), str(disc.q)],
        "discriminant_negative": disc.sign() < 0,
        "G0_positive": _G0.sign() > 0,
        "G_positive_on_grid": grid_ok,
    }


@lru_cache(maxsize=None)
def _lemma4_exact_facts(n_grid: int = 1000) -> dict:
    # y in [0, 1/2) on n_grid rational points
    ys = (Fraction(k, 2 * n_grid) for k in range(n_grid))
    ok = all(y * y * (y**3 - y * y + y + 1) >= 0 for y in ys)
    return {"poly_nonnegative_on_grid": ok}


def lemma3_lhs(x: float, m: int) -> float:
    xm = x**m
    return xm + x / (1 - x) + xm / math.sqrt(1 - xm * xm)


def lemma4_lhs(x: float, m: int) -> float:
    xm = x**m
    return xm * xm + x / (1 - x) + xm / math.sqrt(1 - xm * xm)


def check_lemma3(m: int) -> CheckReport:
    zeta = radii.radius("zeta", m)
    lhs = lemma3_lhs(zeta, m)
    report = CheckReport(f"lemma3:m={m}", 1, notes={"zeta": zeta, "lhs": lhs, **_lemma3_exact_facts()})
    report.record(lhs - 1.0, 0, {"m": m}, lhs)
    if not 0.0 < zeta < 1.0 / 3.0 + 1e-15:
        report.violations.append(Violation(0, {"m": m, "fact": "zeta in (0, 1/3)"}, zeta))
    for fact in ("discriminant_negative", "G0_positive", "G_positive_on_grid"):
        if not report.notes[fact]:
            report.violations.append(Violation(0, {"m": m, "fact": fact}, 0.0))
    return report


def check_lemma4(m: int) -> CheckReport:
    eta = radii.radius("eta", m)
    lhs = lemma4_lhs(eta, m)
    y = eta**m
    report = CheckReport(f"lemma4:m={m}", 1, notes={"eta": eta, "lhs": lhs, **_lemma4_exact_facts()})
    report.record(lhs - 1.0, 0, {"m": m}, lhs)
    # the substitution eta = (1 - 2y)/(2 - 3y) with y = eta^m
    report.record(abs(eta - (1 - 2 * y) / (2 - 3 * y)), 0, {"m": m, "fact": "substitution"}, eta)
    if not 0.0 < eta < 0.5:
        report.violations.append(Violation(0, {"m": m, "fact": "eta in (0, 1/2)"}, eta))
    if not report.notes["poly_nonnegative_on_grid"]:
        report.violations.append(Violation(0, {"m": m, "fact": "poly_nonnegative_on_grid"}, 0.0))
    return report


def check_monotone_bounds(n_grid: int = 201) -> CheckReport:
    """``x + A(1 - x^2)`` (A <= 1/2) and ``x^2 + A(1 - x^2)`` (A <= 1) are nondecreasing on [0, 1]."""
    x = np.linspace(0.0, 1.0, 1001)
    report = CheckReport("monotone_bounds", 2 * n_grid)
    for label, As, fn in (
        ("Phi", np.linspace(0.0, 0.5, n_grid), lambda x, A: x + A * (1 - x * x)),
        ("Psi", np.linspace(0.0, 1.0, n_grid), lambda x, A: x * x + A * (1 - x * x)),
    ):
        for A in As:
            drop = float(np.max(-np.diff(fn(x, A))))
            report.record(drop, 0, {"function": label, "A": float(A)}, drop, tol=1e-15)
    return report


def check_I_monotone(m_values: Sequence[int] = range(1, 6), n_a: int = 50, n_r: int = 200) -> CheckReport:
    """The extremal I-value ``I_m(a, r)`` is nondecreasing in r on [0, 1/3]."""
    r = np.linspace(0.0, 1.0 / 3.0, n_r)
    report = CheckReport("I_increasing_in_r", 0)
    for m in m_values:
        for a in np.linspace(0.0, 0.99, n_a):
            vals = np.array([extremal_value(Kind.I, m, float(a), float(x)) for x in r])
            drop = float(np.max(-np.diff(vals)))
            report.trials += 1
            report.record(drop, 0, {"m": m, "a": float(a)}, drop, tol=1e-15)
    return report


def check_radius_orderings(m_max: int = 30) -> CheckReport:
    """Ordering facts used in the proofs plus monotonicity of the radii in m."""
    report = CheckReport(f"radius_orderings:m<={m_max}", m_max)
    pairs = (("gamma", "mu"), ("delta", "tau"), ("theta", "xi"), ("vartheta", "chi"))
    prev = {}
    for m in range(1, m_max + 1):
        roots = {tag: radii.radius(tag, m) for tag in (*radii.KIND_FAMILY.values(), "mu", "tau", "xi", "chi", "nu")}
        for small, big in pairs:
            report.record(roots[small] - roots[big], 0, {"m": m, "pair": [small, big]}, roots[small], tol=0.0)
        report.record(0.6 - roots["nu"], 0, {"m": m, "fact": "nu >= 3/5"}, roots["nu"], tol=1e-12)
        for tag in radii.KIND_FAMILY.values():
            if tag in prev:
                report.record(prev[tag] - roots[tag], 0, {"m": m, "monotone": tag}, roots[tag], tol=0.0)
            prev[tag] = roots[tag]
    return report


# --------------------------------------------------------------------------
# printed-equation discrepancies
# --------------------------------------------------------------------------

_R = Polynomial([0.0, 1.0])


def _rm(m: int) -> Polynomial:
    return _R**m


def delta_proof_poly(m: int) -> Polynomial:
    return (_rm(2 * m) + _rm(m) - 1) * (1 - _R) + _R**2 * (1 + _rm(m)) ** 2


def delta_display_poly(m: int) -> Polynomial:
    return _rm(m) * (_rm(m) + 1) * (_rm(m) - _R + 2) + _R - 1


def vartheta_rederived_poly(m: int) -> Polynomial:
    return (1 - _R) * (_rm(2 * m) + _R - 1) + _R**2 * (1 + _rm(m)) ** 2


def vartheta_display_poly(m: int) -> Polynomial:
    return (1 - _R) * (_rm(m) + _R - 1) + _R**2 * (1 + _rm(m)) ** 2


def vartheta_poly(m: int) -> Polynomial:
    return 2 * _R - 1 + _rm(2 * m + 2) - _rm(2 * m + 1) + _rm(2 * m) + 2 * _rm(m + 2)


def _same_poly(p: Polynomial, q: Polynomial) -> bool:
    n = max(p.coef.size, q.coef.size)
    return bool(np.array_equal(np.pad(p.coef, (0, n - p.coef.size)), np.pad(q.coef, (0, n - q.coef.size))))


def check_discrepancies(m_values: Sequence[int] = range(1, 11)) -> CheckReport:
    """Demonstrate the two printed equations that disagree with the proofs."""
    display_m1 = radii.radius("delta_display", 1)
    proof_m1 = radii.radius("delta", 1)
    quartic_m1 = radii.classical_radius("thmE2")
    agree_poly = [m for m in m_values if _same_poly(delta_proof_poly(m), delta_display_poly(m))]
    agree_root = [m for m in m_values if abs(radii.radius("delta", m) - radii.radius("delta_display", m)) < 1e-9]
    vartheta_ok = [m for m in m_values if _same_poly(vartheta_poly(m), vartheta_rederived_poly(m))]
    display_h_ok = [m for m in m_values if _same_poly(vartheta_poly(m), vartheta_display_poly(m))]
    notes = {
        "delta_display_root_m1": display_m1,
        "delta_proof_root_m1": proof_m1,
        "classical_quartic_root": quartic_m1,
        "delta_forms_identical_for_m": agree_poly,
        "delta_roots_agree_for_m": agree_root,
        "delta_display_at_table_m3": float(delta_display_poly(3)(0.535687)),
        "vartheta_matches_rederived_H_for_m": vartheta_ok,
        "vartheta_matches_printed_H_for_m": display_h_ok,
    }
    report = CheckReport("discrepancies", len(list(m_values)), notes=notes)
    ms = list(m_values)
    expectations = {
        "display root at m=1 is (sqrt17-3)/4": abs(display_m1 - (math.sqrt(17) - 3) / 4) < 1e-9,
        "proof root at m=1 matches the classical quartic": abs(proof_m1 - quartic_m1) < 1e-12,
        "display and proof roots differ at m=1": abs(display_m1 - proof_m1) > 0.1,
        "forms agree only at m=2": agree_poly == [m for m in ms if m == 2] and agree_root == agree_poly,
        "vartheta equation matches re-derived H for all m": vartheta_ok == ms,
        "printed H matches the vartheta equation for no m": display_h_ok == [],
    }
    report.notes["expectations"] = expectations
    for label, ok in expectations.items():
        report.record(0.0 if ok else 1.0, 0, {"expectation": label}, float(ok))
    return report
