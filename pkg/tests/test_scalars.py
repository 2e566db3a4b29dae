import pytest
from hypothesis import given, strategies as st

from tmotif.errors import InsufficientPrecision, TMotifError, ZeroDenominator
from tmotif.fields import finite_field
from tmotif.ratfunc import function_field
from tmotif.series import UThetaSeries, expand_at_infinity, expand_at_theta, residue_at_infinity
from tmotif.tpoly import TPoly, det, smith_diagonal

from conftest import polys, rats

K2, K3, K5 = function_field(2), function_field(3), function_field(5)


def tp(K, *c):
    return TPoly(K, [K(x) if isinstance(x, int) else x for x in c])


def test_finite_field_orders():
    for p, n in [(2, 1), (2, 4), (3, 2), (5, 1)]:
        F = finite_field(p, n)
        els = list(F.elements())
        assert len(els) == p**n
        assert len({str(x) for x in els}) == p**n
        assert all(x ** (p**n) == x for x in els)


def test_unsupported_field():
    with pytest.raises(TMotifError) as ei:
        finite_field(4)
    assert ei.value.code == "unsupported-field"


@given(st.data())
def test_ratfunc_field_axioms(data):
    K = K3
    a, b, c = (data.draw(rats(K)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a - a == K.zero
    if not b.is_zero():
        assert (a / b) * b == a


@given(st.data())
def test_frob_is_ring_map(data):
    K = K2
    a, b = data.draw(rats(K)), data.draw(rats(K))
    assert (a * b).frob() == a.frob() * b.frob()
    assert (a + b).frob() == a.frob() + b.frob()
    assert a.frob() == a**2


def test_division_by_zero():
    with pytest.raises(ZeroDenominator):
        K2.one / K2.zero


def test_tail_of_polynomial_has_no_negative_part():
    f = tp(K5, 3, 0, 1)  # t^2 + 3
    s = expand_at_infinity(f, None, 3)
    assert residue_at_infinity(s) == K5.zero
    assert s.polynomial_part() == f


def test_geometric_series_at_infinity():
    # 1/(theta - t) = -sum theta^i t^{-i-1}
    for K in (K2, K3, K5):
        s = expand_at_infinity(tp(K, 1), tp(K, K.theta, -1), 6)
        for i in range(6):
            assert s[-i - 1] == -(K.theta**i)
        assert residue_at_infinity(s) == -K.one


def test_carlitz_example_tail_over_F2():
    th = K2.theta
    s = expand_at_infinity(tp(K2, 1), tp(K2, th, 1), 3)
    assert [s[-1], s[-2], s[-3]] == [K2.one, th, th**2]


def test_derivative_of_geometric_series_over_F5():
    th = K5.theta
    u2 = tp(K5, -th, 1) * tp(K5, -th, 1)
    s = expand_at_infinity(tp(K5, 1), u2, 3)
    assert s[-2] == K5.one
    assert s[-3] == 2 * th
    with pytest.raises(InsufficientPrecision):
        s[-4]


def test_direct_coefficient_read():
    th = K3.theta
    # theta t^-1 + t^-2 = (theta t + 1)/t^2
    s = expand_at_infinity(tp(K3, 1, th), tp(K3, 0, 0, 1), 4)
    assert residue_at_infinity(s) == th


@given(st.data())
def test_tail_times_denominator_recovers_numerator(data):
    K = K3
    num = TPoly(K, [data.draw(polys(K, 2)) for _ in range(2)])
    den = TPoly(K, [data.draw(polys(K, 2)), data.draw(polys(K, 1)), K.one])
    s = expand_at_infinity(num, den, 8)
    back = s * den
    for e in range(-4, 3):
        assert back[e] == (num.c[e] if 0 <= e < len(num.c) else K.zero)


def test_expansion_at_theta():
    th = K3.theta
    u = tp(K3, -th, 1)
    assert [expand_at_theta(u, 3)[i] for i in range(3)] == [K3.zero, K3.one, K3.zero]
    s = expand_at_theta(u * u * u, 4)
    assert s.valuation() == 3 and s[3] == K3.one
    t2 = expand_at_theta(tp(K3, 0, 0, 1), 3)
    assert [t2[0], t2[1], t2[2]] == [th**2, 2 * th, K3.one]


def test_u_series_inverse_and_residue():
    K = K3
    u = UThetaSeries(K, [K.zero, K.one], 5)
    f = UThetaSeries(K, [K.theta, K.one], 5)
    g = f / u
    assert g.residue() == K.theta
    assert (g * u)[0] == K.theta


def test_smith_and_det():
    th = K2.theta
    u = tp(K2, th, 1)
    A = [[TPoly(K2), u], [tp(K2, 1), tp(K2, 1)]]
    assert det(A) == -u
    diag = smith_diagonal(A)
    assert sorted(f.degree() for f in diag) == [0, 1]
