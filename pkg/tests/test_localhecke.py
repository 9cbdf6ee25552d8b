import pytest

from ssmod.ff import SSModError, BudgetError
from ssmod import localhecke as lh
from ssmod.quatherm import j_standard
from ssmod.localhecke import _minor_det


def test_gl2_counts_and_types():
    for ell in (2, 3, 5, 7, 11, 13):
        cl = lh.decompose_gl2(ell)
        assert cl.count == ell + 1
        for R in cl.reps:
            assert lh.smith_type(R, ell) == (0, 1)
        # pairwise distinct representatives
        keys = {tuple(map(tuple, R)) for R in cl.reps}
        assert len(keys) == ell + 1


def test_gl2_trivial_and_scalar_types():
    assert lh.decompose_gl2(2, (0, 0)).count == 1
    assert lh.decompose_gl2(3, (1, 1)).reps == [[[3, 0], [0, 3]]]
    with pytest.raises(SSModError):
        lh.decompose_gl2(5, (0, 3))
    with pytest.raises(SSModError):
        lh.decompose_gl2(4)


def test_lagrangian_counts():
    assert lh.lagrangian_count(1, 2) == 3
    for ell in (2, 3, 5, 7):
        assert lh.lagrangian_count(1, ell) == ell + 1
    assert lh.lagrangian_count(2, 2) == 15
    assert lh.lagrangian_count(2, 3) == 40
    with pytest.raises(BudgetError):
        lh.lagrangian_count(3, 3)


def test_gsp_decomposition_matches_lagrangian_count():
    for (g, ell) in ((1, 2), (1, 3), (1, 5), (1, 7), (2, 2), (2, 3), (3, 2)):
        cl = lh.decompose_gsp(g, ell)
        assert cl.count == lh.lagrangian_count(g, ell)
        n = 2 * g
        seen = set()
        for R in cl.reps:
            assert lh.smith_type(R, ell) == (0,) * g + (1,) * g
            assert all(R[r][c] == 0 for r in range(n) for c in range(r))
            assert all(R[r][r] in (1, ell) for r in range(n))
            seen.add(tuple(map(tuple, R)))
        assert len(seen) == cl.count


def test_gsp_reps_are_symplectic_similitudes():
    # R J R^T = ell * (unimodular alternating matrix)
    for (g, ell) in ((1, 3), (2, 2), (2, 3)):
        J = j_standard(g)
        n = 2 * g
        for R in lh.decompose_gsp(g, ell).reps:
            P = [[sum(R[r][a] * J[a][b] * R[c][b]
                      for a in range(n) for b in range(n))
                  for c in range(n)] for r in range(n)]
            assert all(P[r][c] % ell == 0 for r in range(n) for c in range(n))
            Q = [[P[r][c] // ell for c in range(n)] for r in range(n)]
            assert all(Q[r][c] == -Q[c][r]
                       for r in range(n) for c in range(n))
            assert abs(_minor_det(Q, tuple(range(n)), tuple(range(n)))) == 1


def test_precision_stability():
    # the canonical representatives only involve entries below ell^2, so
    # reducing at any precision k >= 2 loses nothing
    for (g, ell) in ((1, 5), (2, 3)):
        for R in lh.decompose_gsp(g, ell).reps:
            assert all(0 <= x < ell * ell for row in R for x in row)


def test_smith_type_oracle():
    assert lh.smith_type([[1, 0], [0, 6]], 2) == (0, 1)
    assert lh.smith_type([[2, 0], [0, 2]], 2) == (1, 1)
    assert lh.smith_type([[0, 0], [0, 4]], 2, cap=3) == (2, 3)
    assert lh.smith_type([[4, 6], [2, 8]], 2) == (1, 1)


def test_hnf_canonical():
    # (2,1) - (2,0) = (0,1), so the lattice is 2Z x Z
    R = lh.hnf([[2, 1], [0, 2], [2, 0], [0, 4]], 2)
    assert R == [[2, 0], [0, 1]]
    # same lattice, different generators -> same HNF
    A = lh.hnf([[1, 2], [3, 4]], 2)
    B = lh.hnf([[4, 6], [3, 4]], 2)
    assert A == B
