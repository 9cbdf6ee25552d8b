import pytest

from ssmod import ff
from ssmod.ellcurve import (
    CompositeMap, Curve, ScalarMap, automorphisms, canonical_model,
    count_points, curve_from_j, division_polynomial, ell_subgroups,
    find_isomorphism, frobenius_point, is_supersingular, isogeny_type,
    ker_coker_check, point_sample, torsion_basis, velu, weil_pairing,
)
from ssmod.errors import SSModError


def K11():
    return ff.make_field(11, 2)


def test_group_law():
    K = K11()
    E = canonical_model(K.elt(0))
    pts = point_sample(E, 6)
    for P in pts[:3]:
        for Q in pts[3:]:
            R = E.add(P, Q)
            assert E.contains(R)
            assert E.add(Q, P) == R
            assert E.add(E.add(P, Q), pts[0]) == E.add(P, E.add(Q, pts[0]))
    P = pts[0]
    assert E.add(P, E.neg(P)) is None
    assert E.mul(5, P) == E.add(E.mul(2, P), E.mul(3, P))


def test_supersingular_j_lists():
    K = K11()
    ssj = [i for i in range(K.q)
           if is_supersingular(curve_from_j(K.from_int(i)))]
    assert ssj == [0, 1]  # j = 0 and j = 1728 mod 11
    K13 = ff.make_field(13, 2)
    ssj13 = [i for i in range(K13.q)
             if is_supersingular(curve_from_j(K13.from_int(i)))]
    assert ssj13 == [5]


def test_canonical_model_frobenius():
    K = K11()
    for jv in (0, 1):
        E = canonical_model(K.from_int(jv))
        assert count_points(E) == 144
        big = ff.make_field(11, 4)
        EK = E.base_extend(big)
        for P in point_sample(EK, 10):
            assert frobenius_point(EK, P, 2) == EK.neg(EK.mul(11, P))


def test_canonical_model_rejects_ordinary():
    K = K11()
    with pytest.raises(SSModError):
        canonical_model(K.from_int(2))


def test_automorphism_counts():
    K = K11()
    assert len(automorphisms(canonical_model(K.elt(0)))) == 6
    assert len(automorphisms(canonical_model(K.elt(1)))) == 4
    K13 = ff.make_field(13, 2)
    assert len(automorphisms(canonical_model(K13.from_int(5)))) == 2


def test_torsion_basis():
    K = K11()
    E = canonical_model(K.elt(0))
    for N in (2, 3, 4):
        tb = torsion_basis(E, N)
        assert len(set(tb.all_points())) == N * N
        for P in tb.all_points():
            assert tb.curve.mul(N, P) is None


def test_subgroups_and_division_polynomial():
    K = K11()
    E = canonical_model(K.elt(0))
    for ell in (2, 3, 5):
        subs = ell_subgroups(E, ell)
        assert len(subs) == ell + 1
        psi, eps = division_polynomial(E, ell)
        for s in subs:
            if ell == 2:
                # kernel x-coordinate is a root of the curve cubic
                x0 = -s.kernel_poly.coeffs[0]
                assert E.f(x0).is_zero()
            else:
                assert (psi % s.kernel_poly).is_zero()
        # kernel polynomials pairwise coprime
        for i in range(len(subs)):
            for j in range(i + 1, len(subs)):
                g = subs[i].kernel_poly.gcd(subs[j].kernel_poly)
                assert g.degree() == 0


def test_velu_properties():
    K = K11()
    E = canonical_model(K.elt(0))
    for ell in (2, 3, 7):
        subs = ell_subgroups(E, ell)
        for s in subs:
            phi = velu(E, s.kernel_poly)
            assert phi.degree == ell
            assert is_supersingular(phi.codomain)
            # kernel maps to infinity, and the map is a homomorphism
            assert phi((s.generator[0], s.generator[1])) is None
            EK = s.basis.curve
            Ecod = phi.codomain.base_extend(s.basis.field)
            P, Q = s.basis.P, s.basis.Q
            assert phi(EK.add(P, Q)) == Ecod.add(phi(P), phi(Q))


def test_isomorphism_and_differential():
    K = K11()
    E = canonical_model(K.elt(1))
    # u = generator of the automorphism group: u^4 = 1
    auts = automorphisms(E)
    us = sorted(a.u.to_int() for a in auts)
    assert len(us) == 4
    f = auts[0]
    P = point_sample(E, 1)[0]
    assert E.contains(f(P))


def test_weil_pairing():
    K = K11()
    E = canonical_model(K.elt(0))
    for N in (2, 3, 5):
        tb = torsion_basis(E, N)
        EK = tb.curve
        one = tb.field.one()
        e = weil_pairing(EK, tb.P, tb.Q, N)
        assert e ** N == one and e != one
        assert weil_pairing(EK, tb.Q, tb.P, N) == e.inverse()
        assert weil_pairing(EK, tb.P, EK.add(tb.P, tb.Q), N) == e
        assert weil_pairing(EK, EK.mul(2, tb.P), tb.Q, N) == e * e


def test_isogeny_type_and_ker_coker():
    K = K11()
    E = canonical_model(K.elt(0))
    subs3 = ell_subgroups(E, 3)
    tb = torsion_basis(E, 3)
    phi = velu(E, subs3[0].kernel_poly)
    Ecan2 = canonical_model(phi.codomain.j_invariant())
    chi = CompositeMap([phi, find_isomorphism(phi.codomain, Ecan2)])
    tb2 = torsion_basis(Ecan2, 3)
    assert isogeny_type(chi, tb, tb2, 3, 1) == (0, 1)
    k, c = ker_coker_check(chi, tb, tb2)
    assert k == c == 3
    assert isogeny_type(ScalarMap(E, 3), tb, tb, 3, 1) == (1, 1)


def test_composite_nine_isogeny():
    K = K11()
    E = canonical_model(K.elt(0))
    subs3 = ell_subgroups(E, 3)
    phi1 = velu(E, subs3[0].kernel_poly)
    E1 = canonical_model(phi1.codomain.j_invariant())
    i1 = find_isomorphism(phi1.codomain, E1)
    phi2 = velu(E1, ell_subgroups(E1, 3)[1].kernel_poly)
    E2 = canonical_model(phi2.codomain.j_invariant())
    i2 = find_isomorphism(phi2.codomain, E2)
    chi = CompositeMap([phi1, i1, phi2, i2])
    assert chi.degree == 9
    tb = torsion_basis(E, 9)
    tb2 = torsion_basis(E2, 9)
    k, c = ker_coker_check(chi, tb, tb2)
    assert k == c
    a, b = isogeny_type(chi, tb, tb2, 3, 2)
    assert a + b == 2
