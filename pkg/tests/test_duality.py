from hypothesis import given, strategies as st

from tmotif.duality import (
    PS,
    PowerSeriesMap,
    dimension_identity,
    image_functional,
    pairing_matrix,
    residue_pairing_perfectness,
    smith_valuations,
    torsion_basis,
    torsion_dual_surjection,
    _rank,
)


def psmap(rows, p, prec=12):
    return PowerSeriesMap.from_lists(rows, p, prec)


def test_residue_of_one_over_z():
    al = psmap([[[0, 1]]], 2)
    assert torsion_dual_surjection(al, [[1]], [[1]]) == 1


def test_residues_against_z_power():
    n = 4
    al = psmap([[[0] * n + [1]]], 3)
    for j in range(n):
        g = [[0] * j + [1]]
        assert torsion_dual_surjection(al, [[1]], g) == (1 if j == n - 1 else 0)


def test_diag_pairing_is_invertible():
    al = psmap([[[0, 1], []], [[], [0, 0, 1]]], 2)
    assert smith_valuations(al)[0] == [1, 2]
    M, basis = pairing_matrix(al)
    assert len(basis) == 3
    assert _rank(M, 2) == 3
    assert residue_pairing_perfectness(al)


def test_identity_has_no_torsion():
    al = psmap([[[1], []], [[], [1]]], 3)
    assert torsion_basis(al) == []
    assert residue_pairing_perfectness(al)
    assert dimension_identity(al) == (0, 0)


def test_z_squared_over_F3():
    al = psmap([[[0, 0, 1]]], 3)
    M, basis = pairing_matrix(al)
    assert len(basis) == 2 and _rank(M, 3) == 2


entries = st.lists(st.integers(0, 2), max_size=4)


@given(st.lists(st.lists(entries, min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(entries, min_size=2, max_size=2))
def test_image_functionals_vanish(rows, psi):
    # add z^3 on the diagonal of a triangular part so alpha stays injective
    rows = [[list(e) for e in r] for r in rows]
    rows[1][0] = []
    for i in range(2):
        rows[i][i] = (rows[i][i] + [0] * 4)[:3] + [1]
    al = psmap(rows, 3, 16)
    phi = image_functional(al, psi)
    for g in torsion_basis(al):
        assert torsion_dual_surjection(al, phi, g) == 0
    dT, dC = dimension_identity(al)
    assert dT == dC
    assert residue_pairing_perfectness(al)


def test_power_series_inverse():
    a = PS([1, 1, 2], 3, 8)
    b = a.inverse_unit()
    prod = a * b
    assert prod[0] == 1 and all(prod[i] == 0 for i in range(1, 8))


def test_sum_truncates_to_common_precision():
    # a product can carry more precision than the series it is added to
    a = PS([0, 0, 0, 1], 3, 16) * PS([0, 0, 0] + [1] * 13, 3, 16)
    assert a.prec == 19
    s = a + PS([1], 3, 16)
    assert s.prec == 16 and len(s.c) <= 16
    al = psmap([[[0, 0, 0, 1], [1, 1]], [[], [0, 0, 0, 1]]], 3, 16)
    assert smith_valuations(al)[0] == [0, 6]
    assert residue_pairing_perfectness(al)
