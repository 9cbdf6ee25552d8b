"""Elliptic curves in short Weierstrass form over finite fields (p >= 5):
point arithmetic, exhaustive point counts, supersingular canonical models
with Frobenius acting as -p, deterministic torsion bases, kernel
polynomials of ell-isogenies, Velu's formulas with normalized invariant
differential, Weil pairing, and composable isogeny objects.
"""

from . import ff
from .errors import SSModError, BudgetError

# ---------------------------------------------------------------------------
# Curves and points


class Curve:
    """y^2 = x^3 + a x + b over a finite field of characteristic >= 5."""

    def __init__(self, a, b):
        self.K = a.params
        if self.K.p < 5:
            raise SSModError("short Weierstrass model needs p >= 5")
        self.a = a
        self.b = b
        disc = self.K.elt(4) * a ** 3 + self.K.elt(27) * b * b
        if disc.is_zero():
            raise SSModError("singular curve")

    def f(self, x):
        return x * x * x + self.a * x + self.b

    def j_invariant(self):
        K = self.K
        num = K.elt(1728) * K.elt(4) * self.a ** 3
        den = K.elt(4) * self.a ** 3 + K.elt(27) * self.b * self.b
        return num * den.inverse()

    def contains(self, P):
        if P is None:
            return True
        x, y = P
        return y * y == self.f(x)

    def point(self, x, y):
        P = (x, y)
        assert self.contains(P)
        return P

    def neg(self, P):
        if P is None:
            return None
        return (P[0], -P[1])

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 == -y2:
                return None
            lam = (self.K.elt(3) * x1 * x1 + self.a) * (y1 + y1).inverse()
        else:
            lam = (y2 - y1) * (x2 - x1).inverse()
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    def mul(self, m, P):
        if m < 0:
            return self.neg(self.mul(-m, P))
        R = None
        Q = P
        while m:
            if m & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            m >>= 1
        return R

    def base_extend(self, K):
        if K is self.K:
            return self
        return Curve(ff.embed(self.a, K), ff.embed(self.b, K))

    def lift_point(self, P, K):
        if P is None:
            return None
        return (ff.embed(P[0], K), ff.embed(P[1], K))

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.K is other.K
                and self.a == other.a and self.b == other.b)

    def __repr__(self):
        return "Curve(a=%r, b=%r)" % (self.a, self.b)


def curve_from_j(j):
    """A fixed short Weierstrass model with the given j-invariant."""
    K = j.params
    if j.is_zero():
        return Curve(K.zero(), K.one())
    if j == K.elt(1728):
        return Curve(K.one(), K.zero())
    c = K.elt(1728) - j
    a = K.elt(3) * j * c
    b = K.elt(2) * j * c * c
    E = Curve(a, b)
    assert E.j_invariant() == j
    return E


def count_points(E):
    """|E(K)| by x-scan with a table of squares."""
    K = E.K
    if K.q > ff.SCAN_BUDGET:
        raise BudgetError("point count over field of size %d" % K.q)
    squares = set()
    for i in range(K.q):
        y = K.from_int(i)
        squares.add((y * y).to_int())
    count = 1
    for i in range(K.q):
        x = K.from_int(i)
        v = E.f(x)
        if v.is_zero():
            count += 1
        elif v.to_int() in squares:
            count += 2
    return count


def is_supersingular(E):
    """Trace of Frobenius over the quadratic extension field divisible by p.
    E must be defined over F_{p^2}."""
    K = E.K
    assert K.m == 2
    t = K.q + 1 - count_points(E)
    return t % K.p == 0


def canonical_model(j):
    """The twist over F_{p^2} with (p+1)^2 points, on which the q-power
    Frobenius acts as multiplication by -p on all of E(F_qbar)."""
    K = j.params
    p = K.p
    assert K.m == 2
    target = (p + 1) ** 2
    E = curve_from_j(j)
    if count_points(E) == target:
        return E
    if j.is_zero():
        # sextic twists y^2 = x^3 + b d
        for i in range(1, K.q):
            d = K.from_int(i)
            Ed = Curve(K.zero(), E.b * d)
            if count_points(Ed) == target:
                return Ed
    elif j == K.elt(1728):
        # quartic twists y^2 = x^3 + a d x
        for i in range(1, K.q):
            d = K.from_int(i)
            Ed = Curve(E.a * d, K.zero())
            if count_points(Ed) == target:
                return Ed
    else:
        # quadratic twist by the first non-residue
        for i in range(1, K.q):
            d = K.from_int(i)
            if ff.sqrt(d) is None:
                Ed = Curve(E.a * d * d, E.b * d * d * d)
                if count_points(Ed) == target:
                    return Ed
                break
    raise SSModError("no twist with (p+1)^2 points; j = %r is not "
                     "supersingular" % j)


def frobenius_point(E, P, k=2):
    """(x, y) -> (x^{p^k}, y^{p^k})."""
    if P is None:
        return None
    return (ff.frobenius(P[0], k), ff.frobenius(P[1], k))


# ---------------------------------------------------------------------------
# Torsion


def _mult_order(a, N):
    a %= N
    assert N > 1
    from math import gcd
    assert gcd(a, N) == 1
    k, x = 1, a
    while x != 1:
        x = (x * a) % N
        k += 1
    return k


def point_sample(E, count, skip=0):
    """Deterministic affine points: x runs through the field in lex order,
    y the lex-smaller square root."""
    K = E.K
    out = []
    i = 0
    seen = 0
    while len(out) < count and i < K.q:
        x = K.from_int(i)
        i += 1
        v = E.f(x)
        y = ff.sqrt(v)
        if y is None:
            continue
        if seen < skip:
            seen += 1
            continue
        out.append((x, y))
    return out


def _prime_factors(N):
    out = []
    d = 2
    while d * d <= N:
        if N % d == 0:
            out.append(d)
            while N % d == 0:
                N //= d
        d += 1
    if N > 1:
        out.append(N)
    return out


class TorsionBasis:
    """Basis (P, Q) of E[N] inside E(F_{p^{2k}})."""

    def __init__(self, curve, field, N, P, Q):
        self.curve = curve   # base extension of the canonical model
        self.field = field
        self.N = N
        self.P = P
        self.Q = Q

    def combo(self, i, j):
        return self.curve.add(self.curve.mul(i, self.P),
                              self.curve.mul(j, self.Q))

    def all_points(self):
        pts = []
        for i in range(self.N):
            for j in range(self.N):
                pts.append(self.combo(i, j))
        return pts

    def dlog(self, R):
        """(i, j) with R = iP + jQ, by enumeration (N is small)."""
        for i in range(self.N):
            for j in range(self.N):
                if self.combo(i, j) == R:
                    return (i, j)
        raise SSModError("point is not N-torsion on this curve")


def torsion_basis(E, N):
    """Deterministic basis of E[N] for a canonical supersingular model E
    over F_{p^2}.  Uses that Frobenius acts as -p: E[N] is rational over
    F_{p^{2k}} with k = ord(-p mod N), where the group of rational points
    is (Z/M)^2 with M = |(-p)^k - 1|."""
    K = E.K
    p = K.p
    assert K.m == 2
    k = _mult_order(-p, N)
    big = ff.make_field(p, 2 * k)
    EK = E.base_extend(big)
    M = abs((-p) ** k - 1)
    assert M % N == 0
    cof = M // N
    primes = _prime_factors(N)

    def full_order(Q):
        if Q is None:
            return False
        return all(EK.mul(N // l, Q) is not None for l in primes)

    P1 = None
    P2 = None
    span = None
    i = 0
    while P2 is None:
        if i >= big.q:
            raise SSModError("torsion basis search exhausted the field")
        x = big.from_int(i)
        i += 1
        v = EK.f(x)
        y = ff.sqrt(v)
        if y is None:
            continue
        Q = EK.mul(cof, (x, y))
        if not full_order(Q):
            continue
        if P1 is None:
            P1 = Q
            span = set()
            R = None
            for t in range(N):
                span.add(R)
                R = EK.add(R, P1)
            continue
        if Q in span:
            continue
        # independence: the span of (P1, Q) must have N^2 elements
        pts = set()
        for s in range(N):
            base = EK.mul(s, P1)
            R = base
            for t in range(N):
                pts.add(R)
                R = EK.add(R, Q)
        if len(pts) == N * N:
            P2 = Q
    return TorsionBasis(EK, big, N, P1, P2)


# ---------------------------------------------------------------------------
# Division polynomials (for verification of kernel polynomials)


def division_polynomial(E, N):
    """psi_N as (g, eps) with psi_N = g(x) * y^eps, eps = N+1 mod 2."""
    K = E.K
    a, b = E.a, E.b
    x = ff.Poly.x(K)
    f = x * x * x + ff.Poly(K, [a]) * x + ff.Poly(K, [b])
    c = lambda n: ff.Poly(K, [K.elt(n)])
    table = {
        0: (ff.Poly(K, []), 0),
        1: (c(1), 0),
        2: (c(2), 1),
        3: (c(3) * x ** 4 + c(6) * ff.Poly(K, [a]) * x * x
            + c(12) * ff.Poly(K, [b]) * x
            - ff.Poly(K, [a * a]), 0),
        4: (c(4) * (x ** 6 + c(5) * ff.Poly(K, [a]) * x ** 4
                    + c(20) * ff.Poly(K, [b]) * x ** 3
                    - c(5) * ff.Poly(K, [a * a]) * x * x
                    - c(4) * ff.Poly(K, [a * b]) * x
                    - c(8) * ff.Poly(K, [b * b]) - ff.Poly(K, [a ** 3])), 1),
    }

    def mul(u, v):
        g, e = u[0] * v[0], u[1] + v[1]
        while e >= 2:
            g = g * f
            e -= 2
        return (g, e)

    def sub(u, v):
        assert u[1] == v[1]
        return (u[0] - v[0], u[1])

    def psi(m):
        if m in table:
            return table[m]
        r = m // 2
        if m % 2:
            val = sub(mul(psi(r + 2), mul(psi(r), mul(psi(r), psi(r)))),
                      mul(psi(r - 1), mul(psi(r + 1), mul(psi(r + 1),
                                                          psi(r + 1)))))
        else:
            t = sub(mul(psi(r + 2), mul(psi(r - 1), psi(r - 1))),
                    mul(psi(r - 2), mul(psi(r + 1), psi(r + 1))))
            num = mul(psi(r), t)
            # divide by 2y
            assert num[1] == 1
            g = num[0].map_coeffs(lambda z: z * K.elt(2).inverse())
            val = (g, 0)
        table[m] = val
        return val

    return psi(N)


# ---------------------------------------------------------------------------
# Subgroups and kernel polynomials


class Subgroup:
    """Cyclic order-ell subgroup of a canonical model: a generator over the
    torsion field and its kernel polynomial over F_{p^2}."""

    def __init__(self, ell, generator, basis, kernel_poly):
        self.ell = ell
        self.generator = generator
        self.basis = basis
        self.kernel_poly = kernel_poly


def _descend_poly(h, K):
    """Map a Poly over an extension field down to K coefficientwise."""
    return ff.Poly(K, [ff.embed_preimage(c, K) for c in h.coeffs])


def kernel_polynomial(E, basis, Q):
    """prod (x - x(mQ)) over m = 1..(ell-1)/2 (or the single root for
    ell = 2), descended to the base field of E."""
    EK = basis.curve
    ell = basis.N
    h = ff.Poly(EK.K, [EK.K.one()])
    x = ff.Poly.x(EK.K)
    R = Q
    for m in range(1, max(2, (ell + 1) // 2)):
        h = h * (x - ff.Poly(EK.K, [R[0]]))
        R = EK.add(R, Q)
    return _descend_poly(h, E.K)


def ell_subgroups(E, ell):
    """The ell + 1 cyclic subgroups of E[ell]."""
    basis = torsion_basis(E, ell)
    EK = basis.curve
    gens = [basis.P]
    for i in range(ell):
        gens.append(EK.add(basis.Q, EK.mul(i, basis.P)))
    out = []
    for Q in gens:
        h = kernel_polynomial(E, basis, Q)
        out.append(Subgroup(ell, Q, basis, h))
    return out


# ---------------------------------------------------------------------------
# Isogenies


class Isogeny:
    """Separable isogeny from a kernel polynomial, in Velu normal form:
    the invariant differential pulls back to dx/y (c = 1), so the y-map is
    y * X'(x)."""

    def __init__(self, domain, kernel_poly, degree, codomain, num_x, num_y):
        self.domain = domain
        self.kernel_poly = kernel_poly
        self.degree = degree
        self.codomain = codomain
        self._num_x = num_x    # X = num_x / h^2
        self._num_y = num_y    # Y = y * num_y / h^3

    def __call__(self, P):
        if P is None:
            return None
        x, y = P
        K = x.params
        h = self.kernel_poly if K is self.domain.K else \
            self.kernel_poly.map_coeffs(lambda c: ff.embed(c, K))
        nx = self._num_x if K is self.domain.K else \
            self._num_x.map_coeffs(lambda c: ff.embed(c, K))
        ny = self._num_y if K is self.domain.K else \
            self._num_y.map_coeffs(lambda c: ff.embed(c, K))
        hv = h.eval(x)
        if hv.is_zero():
            return None
        hi = hv.inverse()
        X = nx.eval(x) * hi * hi
        Y = y * ny.eval(x) * hi * hi * hi
        return (X, Y)


def velu(E, kernel_poly):
    """Isogeny with the given kernel polynomial.  Degree 2 when the kernel
    polynomial is linear with a 2-torsion root, else degree 2*deg + 1."""
    K = E.K
    h = kernel_poly.monic()
    d = h.degree()
    a, b = E.a, E.b
    x = ff.Poly.x(K)
    two_torsion = d == 1 and E.f(-h.coeffs[0]).is_zero()
    # elementary symmetric functions of the kernel x-coordinates
    def esym(i):
        if i > d:
            return K.zero()
        c = h.coeffs[d - i]
        return c if i % 2 == 0 else -c
    s1, s2, s3 = esym(1), esym(2), esym(3)
    if two_torsion:
        x0 = s1
        v = K.elt(3) * x0 * x0 + a
        w = x0 * v
        degree = 2
        vpoly = ff.Poly(K, [v])
        upoly = ff.Poly(K, [])
    else:
        v = (K.elt(6) * (s1 * s1 - K.elt(2) * s2)
             + K.elt(2) * a * K.elt(d))
        p1 = s1
        p3 = s1 ** 3 - K.elt(3) * s1 * s2 + K.elt(3) * s3
        w = (K.elt(10) * p3 + K.elt(6) * a * p1
             + K.elt(4) * b * K.elt(d))
        degree = 2 * d + 1
        vpoly = ff.Poly(K, [K.elt(2) * a, K.zero(), K.elt(6)])
        upoly = (x * x * x + ff.Poly(K, [a]) * x
                 + ff.Poly(K, [b])).map_coeffs(lambda c: c * K.elt(4))
    a2 = a - K.elt(5) * v
    b2 = b - K.elt(7) * w
    codomain = Curve(a2, b2)
    hp = h.derivative()
    sv = (vpoly * hp) % h
    su = (upoly * hp) % h
    # X = x + sv/h + (su*h' - su'*h)/h^2  =>  num_x = x h^2 + sv h + su h' - su' h
    num_x = x * h * h + sv * h + su * hp - su.derivative() * h
    # Y = y * d/dx (num_x / h^2) = y (num_x' h - 2 num_x h') / h^3
    num_y = num_x.derivative() * h - ff.Poly(K, [K.elt(2)]) * num_x * hp
    phi = Isogeny(E, h, degree, codomain, num_x, num_y)
    # sanity: image of a sample point lies on the codomain
    for P in point_sample(E, 3):
        Q = phi(P)
        assert Q is None or codomain.contains(Q)
    return phi


def isogeny_from_subgroup(E, sub):
    return velu(E, sub.kernel_poly)


class Isomorphism:
    """(x, y) -> (u^2 x, u^3 y); pulls dx'/y' back to u^{-1} dx/y."""

    def __init__(self, domain, codomain, u):
        self.domain = domain
        self.codomain = codomain
        self.u = u
        self.degree = 1
        assert codomain.a == u ** 4 * domain.a
        assert codomain.b == u ** 6 * domain.b

    def __call__(self, P):
        if P is None:
            return None
        x, y = P
        u = self.u if x.params is self.u.params else ff.embed(self.u, x.params)
        return (u * u * x, u ** 3 * y)

    def inverse(self):
        return Isomorphism(self.codomain, self.domain, self.u.inverse())


def find_isomorphism(E1, E2):
    """An isomorphism E1 -> E2 over their common base field, if one exists."""
    K = E1.K
    assert E2.K is K
    if E1.j_invariant() != E2.j_invariant():
        raise SSModError("different j-invariants")
    if E1.a.is_zero():
        c = E2.b * E1.b.inverse()
        for i in range(1, K.q):
            u = K.from_int(i)
            if u ** 6 == c:
                return Isomorphism(E1, E2, u)
    elif E1.b.is_zero():
        c = E2.a * E1.a.inverse()
        for i in range(1, K.q):
            u = K.from_int(i)
            if u ** 4 == c:
                return Isomorphism(E1, E2, u)
    else:
        u2 = (E2.b * E1.a) * (E2.a * E1.b).inverse()
        u = ff.sqrt(u2)
        if u is not None and u ** 4 * E1.a == E2.a and u ** 6 * E1.b == E2.b:
            return Isomorphism(E1, E2, u)
    raise SSModError("curves are not isomorphic over the base field")


def automorphisms(E):
    """All automorphisms of E over its base field (2, 4 or 6 of them for a
    supersingular model over F_{p^2} with p > 3)."""
    K = E.K
    out = []
    if E.a.is_zero():
        k = 6
    elif E.b.is_zero():
        k = 4
    else:
        k = 2
    for i in range(1, K.q):
        u = K.from_int(i)
        if u ** k == K.one():
            if u ** 4 * E.a == E.a and u ** 6 * E.b == E.b:
                out.append(Isomorphism(E, E, u))
    return out


class ScalarMap:
    """Multiplication by m."""

    def __init__(self, curve, m):
        self.domain = curve
        self.codomain = curve
        self.m = m
        self.degree = m * m

    def __call__(self, P):
        if P is None:
            return None
        E = self.domain if P[0].params is self.domain.K else \
            self.domain.base_extend(P[0].params)
        return E.mul(self.m, P)


class CompositeMap:
    """Composite of isogenies/isomorphisms, applied left to right."""

    def __init__(self, maps):
        assert maps
        self.maps = list(maps)
        self.domain = maps[0].domain
        self.codomain = maps[-1].codomain
        d = 1
        for f in maps:
            d *= f.degree
        self.degree = d

    def __call__(self, P):
        for f in self.maps:
            P = f(P)
        return P


# ---------------------------------------------------------------------------
# Weil pairing (Miller's algorithm; N small)


def _line(E, P, Q, X):
    """Evaluate at X the line through P and Q (tangent if P == Q)."""
    x, y = X
    if P is None or Q is None:
        S = P if Q is None else Q
        if S is None:
            return x.params.one()
        return x - S[0]
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and y1 == -y2:
        return x - x1
    if P == Q:
        lam = (x.params.elt(3) * x1 * x1 + E.a) * (y1 + y1).inverse()
    else:
        lam = (y2 - y1) * (x2 - x1).inverse()
    return (y - y1) - lam * (x - x1)


def _vertical(P, X):
    if P is None:
        return X[0].params.one()
    return X[0] - P[0]


def _miller(E, P, X, N):
    """f_{N,P}(X) by Miller's loop; raises ZeroDivisionError-like SSModError
    on degenerate evaluation."""
    f = X[0].params.one()
    T = P
    for bit in bin(N)[3:]:
        num = _line(E, T, T, X)
        T2 = E.add(T, T)
        den = _vertical(T2, X)
        if num.is_zero() or den.is_zero():
            raise SSModError("degenerate Miller evaluation")
        f = f * f * num * den.inverse()
        T = T2
        if bit == "1":
            num = _line(E, T, P, X)
            TP = E.add(T, P)
            den = _vertical(TP, X)
            if num.is_zero() or den.is_zero():
                raise SSModError("degenerate Miller evaluation")
            f = f * num * den.inverse()
            T = TP
    return f


def weil_pairing(E, P, Q, N):
    """e_N(P, Q) for N-torsion points P, Q, via Miller functions evaluated
    off the supports with a deterministically scanned offset point."""
    if P is None or Q is None or P == Q:
        return E.K.one()
    for S in point_sample(E, 40):
        if S in (P, Q, E.neg(P), E.neg(Q)):
            continue
        try:
            QS = E.add(Q, S)
            PmS = E.add(P, E.neg(S))
            negS = E.neg(S)
            if QS is None or PmS is None:
                continue
            num = _miller(E, P, QS, N) * _miller(E, Q, negS, N)
            den = _miller(E, P, S, N) * _miller(E, Q, PmS, N)
            return num * den.inverse()
        except SSModError:
            continue
    raise SSModError("Weil pairing: no valid auxiliary point found")


# ---------------------------------------------------------------------------
# Kernel / cokernel bookkeeping on ell^n-torsion


def map_matrix_on_torsion(chi, dom_basis, cod_basis):
    """2x2 matrix over Z/N of chi restricted to E[N], columns = images of
    the domain basis in the codomain basis."""
    N = dom_basis.N
    assert cod_basis.N == N
    iP = cod_basis.dlog(chi((dom_basis.P[0], dom_basis.P[1])))
    iQ = cod_basis.dlog(chi((dom_basis.Q[0], dom_basis.Q[1])))
    return [[iP[0], iQ[0]], [iP[1], iQ[1]]]


def _valuation(x, ell, n):
    x %= ell ** n
    if x == 0:
        return n
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def isogeny_type(chi, dom_basis, cod_basis, ell, n):
    """Smith exponents (a, b), a <= b, of the matrix of chi on ell^n-torsion
    over Z/ell^n."""
    M = map_matrix_on_torsion(chi, dom_basis, cod_basis)
    N = ell ** n
    v1 = min(_valuation(M[i][j], ell, n) for i in range(2) for j in range(2))
    det = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % N
    vd = _valuation(det, ell, 2 * n)
    v2 = min(vd - v1, n)
    return (min(v1, v2), max(v1, v2))


def ker_coker_check(chi, dom_basis, cod_basis):
    """|ker chi| and index of image, both inside the N-torsion."""
    N = dom_basis.N
    EK = dom_basis.curve
    ker = 0
    image = set()
    for i in range(N):
        for j in range(N):
            R = dom_basis.combo(i, j)
            S = chi(R)
            if S is None:
                ker += 1
            image.add(cod_basis.dlog(S) if S is not None else (0, 0))
    # image computed inside codomain N-torsion
    coker = (N * N) // len(image)
    return ker, coker
