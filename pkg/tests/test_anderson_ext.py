import pytest
from hypothesis import given, strategies as st

from tmotif.anderson import (
    TModule,
    carlitz,
    carlitz_power,
    direct_sum_tmodule,
    drinfeld,
    lie_check,
    motif_of_tmodule,
    point_act,
    validate_abelian,
)
from tmotif.errors import NotNilpotent
from tmotif.ext1 import (
    ExtClass,
    build_one_t_motif,
    delta_image,
    dual_sequence_check,
    extension_to_point,
    point_to_extension,
    reduce_extension,
)
from tmotif.motif import t_minus_theta, validate_effective
from tmotif.ratfunc import function_field
from tmotif.skew import SkewMatrix, SkewPoly
from tmotif.tpoly import TPoly

from conftest import polys, rats

K2, K3 = function_field(2), function_field(3)


def families(K):
    th, one = K.theta, K.one
    return [
        carlitz(K),
        carlitz_power(K, 2),
        carlitz_power(K, 3),
        drinfeld(K, [th, th + one, th**2]),
        drinfeld(K, [th, one, th, one]),
    ]


def tp(K, *c):
    return TPoly(K, [K(x) if isinstance(x, int) else x for x in c])


# -- t-modules ----------------------------------------------------------------


def test_validate_abelian():
    assert validate_abelian(carlitz(K2))
    assert validate_abelian(carlitz_power(K3, 2))
    bad = TModule(SkewMatrix(K2, [[SkewPoly(K2, [K2.theta**2, K2.one])]]), K2)
    with pytest.raises(NotNilpotent):
        validate_abelian(bad)


def test_carlitz_presentation():
    P = motif_of_tmodule(carlitz(K2))
    assert P.family == "carlitz"
    assert P.M.A == [[t_minus_theta(K2)]]
    assert P.check()


def test_drinfeld_rank_two_presentation():
    K = K3
    th = K.theta
    g, D = th + K.one, th**2
    P = motif_of_tmodule(drinfeld(K, [th, g, D]))
    Di = K.one / D
    assert P.M.A == [[TPoly(K), TPoly(K, [-th * Di, Di])], [tp(K, 1), TPoly(K, [-g * Di])]]
    assert [str(b[0]) for b in P.basis] == ["1", "s"]
    assert P.check()


def test_carlitz_power_presentation():
    for n in (2, 3, 4):
        P = motif_of_tmodule(carlitz_power(K2, n))
        assert P.M.A == [[t_minus_theta(K2) ** n]]
        assert P.check()


def test_direct_sum_presentation():
    E = direct_sum_tmodule(carlitz(K3), drinfeld(K3, [K3.theta, K3.one, K3.one]))
    P = motif_of_tmodule(E)
    assert P.rank == 3 and P.check()
    assert lie_check(P) == 2


def test_point_action_examples():
    E = carlitz(K2)
    th = K2.theta
    assert point_act(E, [0, 1], [th]) == [K2.zero]
    x = [th**3 + K2.one]
    assert point_act(E, [1], x) == x


@given(st.data())
def test_phi_t_squared_is_iterate(data):
    for K in (K2, K3):
        E = drinfeld(K, [K.theta, K.one, K.theta])
        x = [data.draw(rats(K))]
        assert point_act(E, [0, 0, 1], x) == point_act(E, [0, 1], point_act(E, [0, 1], x))


def test_lie_dimensions():
    assert lie_check(motif_of_tmodule(carlitz(K2))) == 1
    for n in (1, 2, 3, 4):
        assert lie_check(motif_of_tmodule(carlitz_power(K3, n))) == n
    assert lie_check(motif_of_tmodule(drinfeld(K2, [K2.theta, K2.one, K2.one]))) == 1


# -- extensions ---------------------------------------------------------------


def test_delta_examples():
    K = K2
    M = motif_of_tmodule(carlitz(K)).M
    assert list(delta_image([tp(K, 1)], M)) == [tp(K, K.theta + K.one, 1)]  # t - theta - 1
    assert list(delta_image([TPoly(K)], M)) == [TPoly(K)]
    K = K3
    M = motif_of_tmodule(carlitz(K)).M
    c = K(2)
    assert list(delta_image([tp(K, c)], M)) == [TPoly(K, [c * (-K.theta) - c, c])]


@given(st.data())
def test_carlitz_class_is_constant(data):
    for K in (K2, K3):
        x = data.draw(rats(K))
        c = point_to_extension(motif_of_tmodule(carlitz(K)), [x])
        assert c.B == (TPoly(K, [x]),)


def test_zero_point_splits():
    for E in families(K3):
        P = motif_of_tmodule(E)
        c = point_to_extension(P, [K3.zero] * E.dim)
        assert all(b.is_zero() for b in c.B)
        assert extension_to_point(c) == [K3.zero] * E.dim


@given(st.data())
def test_drinfeld_class_matches_double_precision(data):
    # phi_t^N multiplies degrees by q^{2N}; keep q = 2 and N = 4
    K = K2
    E = drinfeld(K, [K.theta, K.theta + K.one, K.theta**2])
    P = motif_of_tmodule(E)
    x = [data.draw(rats(K, 1))]
    c1 = point_to_extension(P, x)
    c2 = point_to_extension(P, x, N=4)
    assert c1.B == c2.B
    assert all(b.degree() <= 1 for b in c1.B)


def test_reduce_examples():
    K = K2
    P = motif_of_tmodule(carlitz(K))
    assert reduce_extension(ExtClass(P, (tp(K, K.theta + K.one, 1),))).B == (TPoly(K),)
    x = K.theta**2 + K.one
    red = reduce_extension(ExtClass(P, (TPoly(K, [K.zero, x]),)))
    assert red.B == (TPoly(K, [K.theta * x + x**2]),)


@given(st.data())
def test_delta_image_reduces_to_zero(data):
    K = K3
    P = motif_of_tmodule(drinfeld(K, [K.theta, K.one, K.theta]))
    F = [TPoly(K, [data.draw(polys(K, 2)) for _ in range(data.draw(st.integers(0, 4)))]) for _ in range(2)]
    assert ExtClass(P, tuple(delta_image(F, P.M))).is_split()


@pytest.mark.parametrize("K", [K2, K3], ids=["F2", "F3"])
def test_round_trip_and_module_structure(K, rng):
    for E in families(K):
        P = motif_of_tmodule(E)
        for _ in range(8):
            x = [K.random(rng, 3) for _ in range(E.dim)]
            y = [K.random(rng, 3) for _ in range(E.dim)]
            cx, cy = point_to_extension(P, x), point_to_extension(P, y)
            assert extension_to_point(cx) == x
            assert extension_to_point(cx + cy) == [a + b for a, b in zip(x, y)]
            assert extension_to_point(cx.scale([0, 1])) == point_act(E, [0, 1], x)
            assert (cx + (-cx)).is_split()


def test_carlitz_t_action_reduces_to_phi_t():
    K = K3
    P = motif_of_tmodule(carlitz(K))
    x = K.theta**2 + K(2)
    c = point_to_extension(P, [x]).scale([0, 1])
    assert reduce_extension(c).B == (TPoly(K, [point_act(carlitz(K), [0, 1], [x])[0]]),)


def test_one_t_motifs():
    K = K2
    P = motif_of_tmodule(carlitz(K))
    Mt, rows = build_one_t_motif(P, [[K.zero]])
    assert Mt.rank == 2 and rows[0] == (TPoly(K),)
    x = K.theta + K.one
    Mt, _ = build_one_t_motif(P, [[x]])
    assert Mt.A == [[tp(K, 1), TPoly(K, [x])], [TPoly(K), t_minus_theta(K)]]
    Mt, rows = build_one_t_motif(P, [[x], [K.theta]])
    assert Mt.rank == 3 and validate_effective(Mt)[0] == 1


def test_dual_sequence():
    K = K3
    assert dual_sequence_check(motif_of_tmodule(carlitz(K))) == (0, True)
    for r in (2, 3):
        E = drinfeld(K, [K.theta] + [K.one] * (r - 1) + [K.theta])
        assert dual_sequence_check(motif_of_tmodule(E)) == (r - 1, True)
