import random
from fractions import Fraction

import pytest

from ssmod.ff import SSModError, make_field
from ssmod import quatherm as qh


def random_quat(alg, rng, span=9):
    return alg.elt(*[Fraction(rng.randrange(-span, span + 1), rng.randrange(1, 5))
                     for _ in range(4)])


def test_hilbert_symbol_basics():
    # (-1, -1) ramifies exactly at 2 and infinity
    assert qh.hilbert_symbol(-1, -1, "inf") == -1
    assert qh.hilbert_symbol(-1, -1, 2) == -1
    assert qh.hilbert_symbol(-1, -1, 3) == 1
    # squares are always split
    assert qh.hilbert_symbol(4, -7, 7) == 1
    assert qh.hilbert_symbol(Fraction(1, 4), -3, 3) == 1


def test_hilbert_product_formula():
    rng = random.Random(0)
    for _ in range(100):
        a = Fraction(rng.randrange(-60, 61) or 1, rng.randrange(1, 20))
        b = Fraction(rng.randrange(-60, 61) or 1, rng.randrange(1, 20))
        assert qh.hilbert_product_check(a, b), (a, b)


def test_build_algebra_ramification():
    expect = {2: (-1, -1), 3: (-1, -3), 7: (-1, -7), 11: (-1, -11)}
    for p in (2, 3, 5, 7, 11, 13, 17, 23, 29):
        B = qh.build_algebra(p)
        assert qh.ramified_places(B.a, B.b) == sorted([p, "inf"], key=str)
        if p in expect:
            assert (B.a, B.b) == expect[p]
    with pytest.raises(SSModError):
        qh.build_algebra(4)


def test_norm_multiplicative_and_conjugation():
    B = qh.build_algebra(11)
    rng = random.Random(1)
    for _ in range(200):
        x = random_quat(B, rng)
        y = random_quat(B, rng)
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x * y).conjugate() == y.conjugate() * x.conjugate()
        assert x * x.conjugate() == B.elt(x.norm())
    # associativity spot check
    z = random_quat(B, rng)
    assert (x * y) * z == x * (y * z)


def test_adjoint_antihomomorphism():
    B = qh.build_algebra(11)
    rng = random.Random(2)
    for _ in range(20):
        M = [[random_quat(B, rng) for _ in range(3)] for _ in range(3)]
        N = [[random_quat(B, rng) for _ in range(3)] for _ in range(3)]
        lhs = qh.qmat_star(qh.qmat_mul(M, N))
        rhs = qh.qmat_mul(qh.qmat_star(N), qh.qmat_star(M))
        assert qh.qmat_eq(lhs, rhs)


def test_norm_equation_examples():
    B = qh.build_algebra(11)
    x = qh.norm_equation(B, 11, search_bound=10)
    assert x.norm() == 11
    x = qh.norm_equation(B, Fraction(3, 4))
    assert x.norm() == Fraction(3, 4)
    with pytest.raises(SSModError):
        qh.norm_equation(B, -1)


def test_diagonalize_diag_two_two():
    B = qh.build_algebra(11)
    G = [[B.elt(2), B.elt(0)], [B.elt(0), B.elt(2)]]
    form = qh.HermitianForm(B, G)
    _, alphas = qh.gram_schmidt(form)
    assert [Fraction(a.w) for a in alphas] == [2, 2]
    M = qh.hermitian_diagonalize(form)
    # each column then carries a quaternion of norm 1/2
    for s in range(2):
        col_norm = form.pair([M[t][s] for t in range(2)],
                             [M[t][s] for t in range(2)])
        assert col_norm == B.elt(1)


def test_diagonalize_random_positive_forms():
    B = qh.build_algebra(11)
    rng = random.Random(42)
    for g in (2, 3):
        for _ in range(10):
            form = qh.random_positive_form(B, g, rng)
            assert form.is_positive_definite()
            M = qh.hermitian_diagonalize(form)
            chk = qh.qmat_mul(qh.qmat_star(M), qh.qmat_mul(form.gram, M))
            assert qh.qmat_eq(chk, qh.qmat_identity(B, g))


def test_not_positive_definite_rejected():
    B = qh.build_algebra(11)
    G = [[B.elt(-1), B.elt(0)], [B.elt(0), B.elt(1)]]
    form = qh.HermitianForm(B, G)
    assert not form.is_positive_definite()
    with pytest.raises(SSModError):
        qh.gram_schmidt(form)


def test_abelian_isogeny_transform():
    B = qh.build_algebra(11)
    rng = random.Random(5)
    form = qh.random_positive_form(B, 2, rng)
    Phi, n = qh.abelian_isogeny_transform(form)
    for row in Phi:
        for e in row:
            for c in e.coeffs():
                assert Fraction(c).denominator == 1
    chk = qh.qmat_mul(qh.qmat_star(Phi), qh.qmat_mul(form.gram, Phi))
    scal = [[B.elt(n * n) if r == c else B.elt(0) for c in range(2)]
            for r in range(2)]
    assert qh.qmat_eq(chk, scal)


def test_conjugator_identity():
    for g in range(1, 7):
        P = qh.conjugator(g)
        n = 2 * g
        Jt = qh.j_blocks(g)
        J = qh.j_standard(g)
        T = [[sum(P[t][r] * Jt[t][s] * P[s][c]
                  for t in range(n) for s in range(n))
              for c in range(n)] for r in range(n)]
        assert T == J
    assert qh.conjugator(1) == [[1, 0], [0, 1]]


def test_split_model_is_algebra_map():
    B = qh.build_algebra(11)
    K = make_field(3, 2)
    algK = qh.algebra_over_field(B, K)
    sp = qh.SplitModel(algK, K)
    assert sp.L is K  # -1 is a square in F_9
    rng = random.Random(1)
    for _ in range(50):
        x = algK.elt(*[rng.randrange(0, 9) for _ in range(4)])
        y = algK.elt(*[rng.randrange(0, 9) for _ in range(4)])
        mx, my = sp.elt_matrix(x), sp.elt_matrix(y)
        det = mx[0][0] * mx[1][1] - mx[0][1] * mx[1][0]
        assert det == sp._lift(x.norm())
        prod = [[mx[0][0] * my[0][0] + mx[0][1] * my[1][0],
                 mx[0][0] * my[0][1] + mx[0][1] * my[1][1]],
                [mx[1][0] * my[0][0] + mx[1][1] * my[1][0],
                 mx[1][0] * my[0][1] + mx[1][1] * my[1][1]]]
        assert prod == sp.elt_matrix(x * y)


def test_gu_samples_land_in_gsp():
    B = qh.build_algebra(11)
    for (g, ell, m) in ((2, 3, 2), (2, 5, 2), (3, 3, 2)):
        K = make_field(ell, m)
        algK = qh.algebra_over_field(B, K)
        sp = qh.SplitModel(algK, K)
        rng = random.Random(7)
        for _ in range(25):
            M = qh.sample_gu(algK, g, rng)
            ok, gamma = qh.is_gu(M, algK)
            assert ok
            T = qh.gu_to_gsp(sp, M)
            ok2, gamma2 = qh.is_gsp(T, sp.L, g)
            assert ok2
            assert gamma2 == sp._lift(gamma)
