import random

import pytest

from ssmod import ff
from ssmod.errors import BudgetError


def test_prime_field_arithmetic():
    F = ff.make_field(11, 1)
    a = F.from_int(7)
    b = F.from_int(8)
    assert (a * b).to_int() == (7 * 8) % 11
    assert (a + b).to_int() == 4
    assert (a.inverse() * a) == F.one()


def test_lex_first_moduli():
    # lowest-valued monic irreducible quadratics
    assert ff.make_field(3, 2).modulus == (1, 0, 1)      # t^2 + 1
    assert ff.make_field(5, 2).modulus == (2, 0, 1)      # t^2 + 2
    assert ff.make_field(11, 2).modulus == (1, 0, 1)     # t^2 + 1


def test_modulus_irreducible_randomized():
    rng = random.Random(0)
    for (p, m) in [(3, 2), (3, 3), (5, 2), (7, 2), (11, 2), (13, 4), (3, 6)]:
        F = ff.make_field(p, m)
        f = ff.Poly.from_ints(ff.make_field(p, 1), F.modulus)
        # no roots among random samples, and x^(p^m) = x mod f
        assert ff._ppoly_is_irreducible(F.modulus, p)


def test_field_axioms_randomized():
    rng = random.Random(1)
    F = ff.make_field(7, 3)
    els = [F.from_int(rng.randrange(F.q)) for _ in range(30)]
    for a in els[:10]:
        for b in els[10:20]:
            for c in els[20:]:
                assert (a + b) * c == a * c + b * c
                assert a * b == b * a
    for a in els:
        if not a.is_zero():
            assert a * a.inverse() == F.one()


def test_frobenius():
    F = ff.make_field(3, 2)
    for x in F.elements():
        assert ff.frobenius(x) == x ** 3
        assert ff.frobenius(ff.frobenius(x)) == x


def test_embedding_roundtrip():
    src = ff.make_field(5, 2)
    tgt = ff.make_field(5, 4)
    rng = random.Random(2)
    xs = [src.from_int(rng.randrange(src.q)) for _ in range(20)]
    for x in xs:
        y = ff.embed(x, tgt)
        assert ff.embed_preimage(y, src) == x
    a, b = xs[0], xs[1]
    assert ff.embed(a * b, tgt) == ff.embed(a, tgt) * ff.embed(b, tgt)
    assert ff.embed(a + b, tgt) == ff.embed(a, tgt) + ff.embed(b, tgt)


def test_embedding_large_field():
    # degree-2 source into a field past the scan budget
    src = ff.make_field(11, 2)
    tgt = ff.make_field(11, 12)
    x = src.gen()
    y = ff.embed(x, tgt)
    # image of the generator is a root of the source modulus
    acc = tgt.zero()
    for i, c in enumerate(src.modulus):
        acc = acc + tgt.from_int(c % 11) * y ** i
    assert acc.is_zero()
    assert ff.embed_preimage(y, src) == x


def test_sqrt():
    F = ff.make_field(13, 2)
    rng = random.Random(3)
    for _ in range(40):
        x = F.from_int(rng.randrange(F.q))
        s = ff.sqrt(x)
        if s is None:
            # really a non-residue
            assert x ** ((F.q - 1) // 2) == F.from_int(F.p - 1)
        else:
            assert s * s == x
            # deterministic: lex-smaller of the two roots
            assert s.to_int() <= (-s).to_int()


def test_roots_and_budget():
    F = ff.make_field(7, 2)
    x = ff.Poly.x(F)
    a = F.from_int(3)
    f = (x - ff.Poly(F, [a])) * (x - ff.Poly(F, [a])) * (x - ff.Poly(F, [F.one()]))
    rts = ff.roots(f, F)
    assert sorted((r.to_int(), m) for r, m in rts) == sorted(
        [(a.to_int(), 2), (F.one().to_int(), 1)])
    big = ff.make_field(11, 12)
    with pytest.raises(BudgetError):
        ff.roots(ff.Poly.x(big), big)


def test_char_poly_known():
    F = ff.make_field(11, 1)
    M = [[F.from_int(0), F.from_int(3)], [F.from_int(2), F.from_int(1)]]
    cp = ff.char_poly(M)
    assert [c.to_int() for c in cp.coeffs] == [5, 10, 1]
    cp2, eig = ff.char_poly_eigendata(M)
    vals = sorted(e.to_int() for e, mult, mp in eig)
    assert vals == [3, 9]


def test_char_poly_eigendata_extension():
    # companion matrix of an irreducible quadratic: eigenvalues in F_{p^2}
    F = ff.make_field(11, 1)
    mod = ff.make_field(11, 2).modulus
    M = [[F.zero(), F.from_int((-mod[0]) % 11)],
         [F.one(), F.from_int((-mod[1]) % 11)]]
    cp, eig = ff.char_poly_eigendata(M)
    assert len(eig) == 2
    for e, mult, mp in eig:
        assert e.params.m == 2 and mult == 1


def test_nullspace():
    F = ff.make_field(5, 1)
    M = [[F.from_int(1), F.from_int(2), F.from_int(3)],
         [F.from_int(0), F.from_int(1), F.from_int(1)]]
    ns = ff.nullspace(M)
    assert len(ns) == 1
    v = ns[0]
    for row in M:
        acc = F.zero()
        for a, b in zip(row, v):
            acc = acc + a * b
        assert acc.is_zero()
