import random

import pytest

from ssmod import ff
from ssmod.errors import SSModError
from ssmod.qexp import tau_mod
from ssmod.sslocus import (
    build_sigma, descend_eigenvector, eichler_mass, eigensystems,
    eigensystems_bruteforce, galois_closure_check, gl2_action, hecke_matrix,
    permutation_matrix, raise_level, supersingular_classes,
    _gl2_elements, _mat_mul_mod,
)


def test_classes_and_mass():
    cls = supersingular_classes(11)
    assert [(c.j.to_int(), c.aut_order) for c in cls] == [(0, 6), (1, 4)]
    assert eichler_mass(cls) == (5, 12)
    assert len(supersingular_classes(13)) == 1
    for p in (17, 19, 23, 31, 37):
        cls = supersingular_classes(p)
        assert eichler_mass(cls) == ((p - 1) // 24 if (p - 1) % 24 == 0
                                     else eichler_mass(cls))
        num, den = eichler_mass(cls)
        assert num * 24 == (p - 1) * den


def test_sigma_sizes():
    assert len(build_sigma(11, 1).points) == 2
    assert len(build_sigma(13, 1).points) == 1
    sig3 = build_sigma(11, 3)
    # 48 * (1/6 + 1/4) = 20
    assert len(sig3.points) == 20


def test_hecke_level1_known_matrices():
    sig = build_sigma(11, 1)
    T2 = hecke_matrix(sig, 2, 0)
    rows = [[x.to_int() for x in r] for r in T2.matrix]
    # row sums 3; eigenvalues {3, 9}
    assert all(sum(r) % 11 == 3 for r in rows)
    systems = eigensystems([T2])
    assert sorted(s.values[0].to_int() for s in systems) == [3, 9]
    T3 = hecke_matrix(sig, 3, 0)
    systems = eigensystems([T3])
    assert sorted(s.values[0].to_int() for s in systems) == [4, 10]


def test_serre_match_p11():
    sig = build_sigma(11, 1)
    mats = [hecke_matrix(sig, l, 0) for l in (2, 3, 5, 7)]
    got = {tuple(a.to_int() for a in s.values) for s in eigensystems(mats)}
    eis = tuple((1 + l) % 11 for l in (2, 3, 5, 7))
    tau = tuple(tau_mod(l, 11) for l in (2, 3, 5, 7))
    assert got == {eis, tau}


def test_row_sums_level3():
    sig = build_sigma(11, 3)
    for ell in (2, 5):
        T = hecke_matrix(sig, ell, 0)
        K = sig.K
        for row in T.matrix:
            s = K.zero()
            for x in row:
                s = s + x
            assert s == K.elt(ell + 1)


def test_commutativity_and_periodicity():
    sig = build_sigma(11, 3)
    for k in (0, 5, 12):
        T2 = hecke_matrix(sig, 2, k)
        T5 = hecke_matrix(sig, 5, k)
        assert ff.mat_mul(T2.matrix, T5.matrix) == \
            ff.mat_mul(T5.matrix, T2.matrix)
    assert hecke_matrix(sig, 2, 7).matrix == \
        hecke_matrix(sig, 2, 7 + 120).matrix


def test_gl2_action():
    sig = build_sigma(11, 3)
    gl2 = _gl2_elements(3)
    rng = random.Random(0)
    ident = gl2_action(sig, ((1, 0), (0, 1)))
    assert ident == list(range(len(sig.points)))
    for _ in range(20):
        g, h = rng.choice(gl2), rng.choice(gl2)
        pg, ph = gl2_action(sig, g), gl2_action(sig, h)
        pgh = gl2_action(sig, _mat_mul_mod(g, h, 3))
        assert [pg[ph[i]] for i in range(len(pg))] == pgh
    T2 = hecke_matrix(sig, 2, 0)
    for g in rng.sample(gl2, 5):
        P = permutation_matrix(sig, gl2_action(sig, g))
        assert ff.mat_mul(P, T2.matrix) == ff.mat_mul(T2.matrix, P)
    with pytest.raises(SSModError):
        gl2_action(sig, ((1, 1), (1, 1)))


def test_raise_level_square():
    sig3 = build_sigma(11, 3)
    sig1 = build_sigma(11, 1)
    rl = raise_level(sig3, sig1)
    assert set(rl) == {0, 1}
    K = sig3.K
    T2_3 = hecke_matrix(sig3, 2, 0)
    T2_1 = hecke_matrix(sig1, 2, 0)
    n3, n1 = len(sig3.points), len(sig1.points)
    P = [[K.one() if rl[i] == j else K.zero() for j in range(n1)]
         for i in range(n3)]
    assert ff.mat_mul(T2_3.matrix, P) == ff.mat_mul(P, T2_1.matrix)


def test_brandt_variant_same_systems():
    sig = build_sigma(11, 1)
    a = eigensystems([hecke_matrix(sig, 2, 0)])
    b = eigensystems([hecke_matrix(sig, 2, 0, brandt=True)])
    assert [tuple(x.to_int() for x in s.values) for s in a] == \
        [tuple(x.to_int() for x in s.values) for s in b]


def test_weight_convention_tau_twist():
    # the empirical pin of WEIGHT_SIGN: weight 12 at p = 11 contains the
    # discriminant eigensystem in central normalization a_ell = ell tau(ell)
    sig = build_sigma(11, 3)
    mats = [hecke_matrix(sig, l, 12) for l in (2, 5, 7)]
    got = {tuple(a.to_int() for a in s.values) for s in eigensystems(mats)}
    twisted = tuple((l * tau_mod(l, 11)) % 11 for l in (2, 5, 7))
    assert twisted in got


def test_bruteforce_oracle_and_descent_p23():
    sig = build_sigma(23, 1)
    mats = [hecke_matrix(sig, l, 0) for l in (2, 3)]
    systems = eigensystems(mats)
    main = {}
    for s in systems:
        key = (tuple(a.to_int() for a in s.values), s.values[0].params.m)
        main[key] = main.get(key, 0) + s.multiplicity
    assert main == dict(eigensystems_bruteforce(mats))
    closed, orbits = galois_closure_check(systems)
    assert closed
    assert sorted(len(o) for o in orbits) == [1, 2]
    for orb in orbits:
        us, coeffs = descend_eigenvector(systems[orb[0]],
                                         [h.matrix for h in mats])
        assert us and coeffs


def test_eigensystems_reject_non_commuting():
    sig = build_sigma(11, 1)
    T2 = hecke_matrix(sig, 2, 0)
    bad = hecke_matrix(sig, 2, 0)
    bad.matrix = [[sig.K.zero(), sig.K.one()],
                  [sig.K.zero(), sig.K.zero()]]
    with pytest.raises(SSModError):
        eigensystems([T2, bad])
