from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrkit.errors import CertificationError, DomainError
from bohrkit.series import (
    Mobius,
    TailRule,
    TruncatedSeries,
    combine,
    compose_inner,
    constant,
    convex,
    eval_deriv,
    eval_point,
    identity,
    make_blaschke,
    make_mobius,
    make_schwarz,
    rotate,
    scale,
    schwarz_monomial,
)

GRID = 0.999 * np.exp(2j * np.pi * np.arange(256) / 256)


def test_mobius_small_orders():
    np.testing.assert_allclose(make_mobius(0, 4).series.coeffs, [0, 1, 0, 0, 0])
    np.testing.assert_allclose(make_mobius(0.5, 3).series.coeffs, [0.5, 0.75, -0.375, 0.1875])


@given(st.floats(0.0, 0.99))
def test_mobius_coefficient_law(a):
    f = make_mobius(a, 40)
    n = np.arange(1, 41)
    np.testing.assert_allclose(np.abs(f.series.coeffs[1:]), (1 - a * a) * a ** (n - 1), rtol=1e-12, atol=1e-300)
    assert abs(abs(f.series.coeff(3)) - (1 - a * a) * a * a) < 1e-15


def test_mobius_domain():
    for a in (-0.1, 1.0, 1.5):
        with pytest.raises(DomainError):
            make_mobius(a)


def test_mobius_values():
    f = make_mobius(0.5)
    assert abs(eval_point(f, 0.2).value - 0.7 / 1.1) < 1e-15
    assert abs(eval_point(make_mobius(0.3), 0).value - 0.3) < 1e-15
    assert abs(eval_point(identity(), 0.3).value - 0.3) < 1e-15
    assert abs(eval_deriv(f, 0).value - 0.75) < 1e-15
    assert abs(eval_deriv(identity(), 0.4 + 0.2j).value - 1) < 1e-15
    r, m, a = 0.4, 3, 0.5
    assert abs(eval_deriv(f, r**m).value - (1 - a * a) / (1 + a * r**m) ** 2) < 1e-15


def test_blaschke_examples():
    np.testing.assert_allclose(make_blaschke([0], 1, 4).series.coeffs, [0, 1, 0, 0, 0])
    np.testing.assert_allclose(make_blaschke([0.5], 1, 3).series.coeffs, [-0.5, 0.75, 0.375, 0.1875])
    c = make_blaschke([], -1, 3)
    np.testing.assert_allclose(c.series.coeffs, [-1, 0, 0, 0])
    assert c(0.3) == -1
    with pytest.raises(DomainError):
        make_blaschke([1.0])
    with pytest.raises(DomainError):
        make_blaschke([0.2], rotation=0.5)


def test_blaschke_series_matches_product():
    zeros = [0.3 + 0.4j, -0.6, 0.1j, 0.85 * cmath.exp(2j)]
    lam = cmath.exp(0.7j)
    f = make_blaschke(zeros, lam, 256)
    z = 0.6 * np.exp(2j * np.pi * np.arange(32) / 32)
    direct = lam * np.prod([(z - zk) / (1 - np.conj(zk) * z) for zk in zeros], axis=0)
    np.testing.assert_allclose(f.series(z), direct, atol=1e-12)
    np.testing.assert_allclose(f(z), direct, atol=1e-14)
    # unimodular on the circle
    np.testing.assert_allclose(np.abs(f(np.exp(1j * np.linspace(0, 6, 50)))), 1.0, atol=1e-12)


def test_blaschke_derivative_matches_difference_quotient():
    f = make_blaschke([0.3 + 0.4j, -0.6], cmath.exp(0.3j))
    z, h = 0.2 - 0.3j, 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.deriv(z) - fd) < 1e-8


def test_combinations():
    f = make_mobius(0.5)
    np.testing.assert_allclose(convex(f, f, 0.3).series.coeffs, f.series.coeffs, atol=1e-16)
    np.testing.assert_allclose(scale(identity(4), 0.5).series.coeffs, [0, 0.5, 0, 0, 0])
    h = convex(make_mobius(0.5), constant(1.0), 0.5)
    assert abs(h.series.coeffs[0] - 0.75) < 1e-15 and abs(h.series.coeffs[1] - 0.375) < 1e-15
    g = combine("rotate", [f], lam=1j)
    assert abs(g(0.3) - f(0.3j)) < 1e-15
    with pytest.raises(DomainError):
        convex(f, f, 1.2)
    with pytest.raises(DomainError):
        scale(f, -0.1)
    with pytest.raises(DomainError):
        rotate(f, 2.0)
    with pytest.raises(DomainError):
        combine("blend", [f])


@st.composite
def bounded_funcs(draw, depth=2):
    kind = draw(st.sampled_from(["mobius", "blaschke", "constant"] + (["convex", "scale", "rotate"] if depth else [])))
    if kind == "mobius":
        return make_mobius(draw(st.floats(0, 0.99)), 64)
    if kind == "constant":
        return constant(draw(st.floats(0, 1)) * cmath.exp(1j * draw(st.floats(0, 6.3))), 64)
    if kind == "blaschke":
        zs = draw(st.lists(st.complex_numbers(max_magnitude=0.95), max_size=3))
        return make_blaschke(zs, cmath.exp(1j * draw(st.floats(0, 6.3))), 64)
    f = draw(bounded_funcs(depth - 1))
    if kind == "scale":
        return scale(f, draw(st.floats(0, 1)))
    if kind == "rotate":
        return rotate(f, cmath.exp(1j * draw(st.floats(0, 6.3))))
    return convex(f, draw(bounded_funcs(depth - 1)), draw(st.floats(0, 1)))


@settings(max_examples=60, deadline=None)
@given(bounded_funcs(), st.complex_numbers(max_magnitude=0.7))
def test_closure_membership_and_consistency(f, z):
    assert np.max(np.abs(f(GRID))) <= 1 + 1e-12
    assert np.all(np.abs(f.series.coeffs) <= 1 + 1e-12)
    pv = eval_point(f, z, mode="series")
    assert abs(pv.value - f(z)) <= pv.radius + 1e-14
    dv = eval_deriv(f, z, mode="series")
    assert abs(dv.value - f.deriv(z)) <= dv.radius + 1e-12


def test_series_tail_radius_is_rigorous_near_edge():
    f = make_mobius(0.9, 32)
    pv = eval_point(f, 0.8, mode="series")
    assert abs(pv.value - f(0.8)) <= pv.radius
    assert pv.radius > 1e-4  # short truncation, large tail


def test_unit_disk_guard():
    f = make_mobius(0.5)
    for z in (1.0, 1j, 2):
        with pytest.raises(DomainError):
            eval_point(f, z)
        with pytest.raises(DomainError):
            eval_deriv(f, z)


def test_truncated_series_rules():
    with pytest.raises(DomainError):
        TruncatedSeries(np.array([0, 1.5]))
    s = TruncatedSeries(np.array([0, 1.5]), TailRule.ZERO)
    assert s.coeff(7) == 0 and s.tail(0.9) == 0
    u = TruncatedSeries(np.array([0.5, 0.5]))
    with pytest.raises(IndexError):
        u.coeff(2)
    assert abs(u.tail(0.5) - 0.5) < 1e-15  # r^2 / (1 - r)
    assert abs(u.deriv_tail(0.5) - sum(n * 0.5 ** (n - 1) for n in range(2, 200))) < 1e-12
    with pytest.raises(ValueError):
        u.coeffs[0] = 1


def test_certification_rejects_inconsistent_pairs():
    from bohrkit.series import _certify

    with pytest.raises(CertificationError):
        _certify(make_mobius(0.4).series, Mobius(0.5), "bad")


def test_schwarz_functions():
    w = make_schwarz(2, constant(1.0))
    assert abs(w(0.3 + 0.1j) - (0.3 + 0.1j) ** 2) < 1e-16
    w1 = make_schwarz(1, make_mobius(0.5))
    z = 0.25 - 0.1j
    assert abs(w1(z) - z * (z + 0.5) / (1 + 0.5 * z)) < 1e-15
    assert abs(w1.deriv(0) - 0.5) < 1e-15
    with pytest.raises(DomainError):
        make_schwarz(3, constant(0.0))
    with pytest.raises(DomainError):
        make_schwarz(0, constant(1.0))
    zs = 0.9 * GRID
    for m in (1, 2, 4):
        om = make_schwarz(m, make_blaschke([0.3j], cmath.exp(0.4j)))
        assert np.all(np.abs(om(zs)) <= np.abs(zs) ** m + 1e-15)
        c = om.series().coeffs
        assert np.all(c[:m] == 0) and abs(c[m]) > 0


def test_compose_with_monomial():
    f = make_mobius(0.4, 64)
    g = compose_inner(f, schwarz_monomial(2), 64)
    np.testing.assert_allclose(g.coeffs[0::2], f.series.coeffs[:33], atol=1e-15)
    assert np.all(g.coeffs[1::2] == 0)
    a, m = 0.6, 3
    h = compose_inner(make_mobius(a, 60), schwarz_monomial(m), 60).coeffs
    for n in range(1, 21):
        assert abs(h[n * m] - (1 - a * a) * (-a) ** (n - 1)) < 1e-15
    assert np.all(np.delete(h[1:], np.arange(m - 1, 60, m)) == 0)
    k = compose_inner(constant(0.3 - 0.2j, 16), schwarz_monomial(2), 16)
    assert k.coeffs[0] == 0.3 - 0.2j and np.all(k.coeffs[1:] == 0)


def test_compose_matches_pointwise_composition():
    f = make_blaschke([0.2 + 0.1j, -0.5j], 1j, 128)
    om = make_schwarz(2, make_mobius(0.3, 128))
    g = compose_inner(f, om, 128)
    z = 0.4 * np.exp(1j * np.linspace(0, 6, 9))
    np.testing.assert_allclose(g(z), f(om(z)), atol=1e-12)
