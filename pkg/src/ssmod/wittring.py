"""Truncated Witt vectors W_n(F_{p^2}), realized as the unramified quadratic
extension (Z/p^n)[x]/(lifted modulus) with Frobenius lift sigma.

The lifted modulus is the integer lift of the F_{p^2} modulus from module ff;
sigma sends the generator to the Hensel-lifted root whose reduction mod p is
(generator)^p.
"""

from . import ff
from .errors import SSModError

_WITT_CACHE = {}


class WittParams:
    """Parameters of W_n(F_{p^2}) = (Z/p^n)[omega]/(lifted modulus)."""

    def __init__(self, p, n):
        if p < 3:
            raise SSModError("W_n stack requires p >= 3")
        if n < 1:
            raise SSModError("truncation length must be >= 1")
        self.p = p
        self.n = n
        self.pn = p ** n
        self.residue_field = ff.make_field(p, 2)
        # monic quadratic x^2 + m1 x + m0 over Z/p^n
        self.lifted_modulus = tuple(int(c) for c in self.residue_field.modulus)
        self.sigma_image = self._hensel_sigma_image()
        s = self.sigma_image
        assert (s * s + self.m1 * s + self.m0).is_zero()
        assert self.reduce_mod_p(s) == ff.frobenius(self.residue_field.gen())

    @property
    def m0(self):
        return self.elt(self.lifted_modulus[0], 0)

    @property
    def m1(self):
        return self.elt(self.lifted_modulus[1], 0)

    def elt(self, a, b=0):
        return WittElement(self, a % self.pn, b % self.pn)

    def zero(self):
        return self.elt(0, 0)

    def one(self):
        return self.elt(1, 0)

    def omega(self):
        return self.elt(0, 1)

    def from_residue(self, x):
        """Teichmueller-free set-theoretic lift of x in F_{p^2} (coefficient
        lift; a ring map only mod p)."""
        if x.params != self.residue_field:
            raise SSModError("expected an element of F_{p^2}")
        return self.elt(x.coeffs[0], x.coeffs[1])

    def reduce_mod_p(self, x):
        K = self.residue_field
        return K.elt([x.a % self.p, x.b % self.p])

    def project(self, x, n2):
        """Natural projection W_n -> W_{n2}, n2 <= n."""
        if n2 > self.n:
            raise SSModError("projection target longer than source")
        W2 = make_witt(self.p, n2)
        return W2.elt(x.a, x.b)

    def _hensel_sigma_image(self):
        """Root of the lifted modulus congruent to gen^p mod p, by Newton
        iteration in W_n itself (f'(r) is a unit since the reduction is
        separable)."""
        K = self.residue_field
        target = ff.frobenius(K.gen())
        r = self.elt(target.coeffs[0], target.coeffs[1])
        m0, m1 = self.m0, self.m1
        for _ in range(self.n.bit_length() + 2):
            fr = r * r + m1 * r + m0
            if fr.is_zero():
                return r
            dfr = r + r + m1
            r = r - fr * dfr.inverse()
        fr = r * r + m1 * r + m0
        if not fr.is_zero():
            raise SSModError("Hensel lift failed to converge (internal error)")
        return r

    def __eq__(self, other):
        return isinstance(other, WittParams) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self):
        return hash(("witt", self.p, self.n))

    def __repr__(self):
        return "WittParams(p=%d, n=%d)" % (self.p, self.n)


class WittElement:
    """a + b*omega with a, b in Z/p^n."""

    __slots__ = ("params", "a", "b")

    def __init__(self, params, a, b):
        self.params = params
        self.a = a % params.pn
        self.b = b % params.pn

    def _coerce(self, other):
        if isinstance(other, WittElement):
            if other.params == self.params:
                return other
            raise SSModError("mixing Witt elements of different parameters")
        if isinstance(other, int):
            return self.params.elt(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return WittElement(self.params, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return WittElement(self.params, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o - self

    def __neg__(self):
        return WittElement(self.params, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        P = self.params
        pn = P.pn
        m0, m1 = P.lifted_modulus[0], P.lifted_modulus[1]
        # (a1 + b1 w)(a2 + b2 w) with w^2 = -m1 w - m0
        hi = self.b * o.b
        a = (self.a * o.a - hi * m0) % pn
        b = (self.a * o.b + self.b * o.a - hi * m1) % pn
        return WittElement(P, a, b)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = self.params.one()
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        """Inverse via the 2x2 multiplication matrix over Z/p^n."""
        P = self.params
        pn = P.pn
        m0, m1 = P.lifted_modulus[0], P.lifted_modulus[1]
        # multiplication by (a + b w) sends (x + y w) to
        #   (a x - m0 b y) + (b x + (a - m1 b) y) w
        A, B = self.a, self.b
        M = [[A % pn, (-m0 * B) % pn], [B % pn, (A - m1 * B) % pn]]
        det = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % pn
        if det % P.p == 0:
            raise ZeroDivisionError("non-unit Witt element (reduction mod p is zero)")
        det_inv = pow(det, -1, pn)
        x = (M[1][1] * det_inv) % pn
        y = (-M[1][0] * det_inv) % pn
        return WittElement(P, x, y)

    def is_unit(self):
        return not self.params.reduce_mod_p(self).is_zero()

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.params.elt(other, 0)
        return (isinstance(other, WittElement) and self.params == other.params
                and (self.a, self.b) == (other.a, other.b))

    def __hash__(self):
        return hash((self.params.p, self.params.n, self.a, self.b))

    def to_json(self):
        return {"a": self.a, "b": self.b, "p": self.params.p, "n": self.params.n}

    def __repr__(self):
        return "W(%d,%d):%d+%d*w" % (self.params.p, self.params.n, self.a, self.b)


def make_witt(p, n):
    key = (p, n)
    if key not in _WITT_CACHE:
        _WITT_CACHE[key] = WittParams(p, n)
    return _WITT_CACHE[key]


def sigma(x, k=1):
    """The Frobenius lift, an order-2 ring automorphism of W_n(F_{p^2})."""
    if k % 2 == 0:
        return x
    P = x.params
    s = P.sigma_image
    return P.elt(x.a, 0) + s * x.b


def reduce_mod_p(x):
    return x.params.reduce_mod_p(x)
