import random

from ssmod import ff
from ssmod.wittring import make_witt, sigma


def test_lifted_modulus_example():
    W = make_witt(3, 2)
    assert W.lifted_modulus == (1, 0, 1)
    # sigma(omega) = -omega here: omega^3 = -omega since omega^2 = -1
    s = sigma(W.omega())
    assert (s.a, s.b) == (0, W.pn - 1)


def test_sigma_is_root_of_modulus():
    for (p, n) in [(3, 2), (3, 4), (5, 3), (7, 2), (11, 3)]:
        W = make_witt(p, n)
        s = W.sigma_image
        assert (s * s + W.m1 * s + W.m0).is_zero()
        # reduces to the Frobenius image of the residue generator
        g = W.residue_field.gen()
        assert W.reduce_mod_p(sigma(W.omega())) == ff.frobenius(g)


def test_sigma_properties_randomized():
    rng = random.Random(0)
    for (p, n) in [(3, 3), (5, 2), (7, 3), (11, 2)]:
        W = make_witt(p, n)
        for _ in range(40):
            x = W.elt(rng.randrange(W.pn), rng.randrange(W.pn))
            y = W.elt(rng.randrange(W.pn), rng.randrange(W.pn))
            assert sigma(sigma(x)) == x
            assert sigma(x * y) == sigma(x) * sigma(y)
            assert sigma(x + y) == sigma(x) + sigma(y)
            # sigma lifts the p-power Frobenius
            assert W.reduce_mod_p(sigma(x)) == ff.frobenius(W.reduce_mod_p(x))


def test_inverse_and_units():
    rng = random.Random(1)
    W = make_witt(5, 3)
    for _ in range(60):
        x = W.elt(rng.randrange(W.pn), rng.randrange(W.pn))
        if x.is_unit():
            assert x * x.inverse() == W.one()
        else:
            assert W.reduce_mod_p(x).is_zero()


def test_projection_compatibility():
    rng = random.Random(2)
    W3 = make_witt(7, 3)
    W2 = make_witt(7, 2)
    for _ in range(40):
        x = W3.elt(rng.randrange(W3.pn), rng.randrange(W3.pn))
        y = W3.elt(rng.randrange(W3.pn), rng.randrange(W3.pn))
        px, py = W3.project(x, 2), W3.project(y, 2)
        assert W3.project(x * y, 2) == px * py
        assert W3.project(x + y, 2) == px + py
        assert W3.project(sigma(x), 2) == sigma(px)


def test_json_roundtrip():
    W = make_witt(3, 2)
    x = W.elt(4, 7)
    d = x.to_json()
    assert d == {"a": 4, "b": 7, "p": 3, "n": 2}
