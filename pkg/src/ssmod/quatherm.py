"""Definite quaternion algebras over Q, hermitian forms, and split models.

A quaternion algebra (a, b) has basis 1, i, j, k with i^2 = a, j^2 = b,
k = ij = -ji.  The main construction is the definite algebra ramified
exactly at a chosen prime p and infinity, certified by Hilbert symbols.
Coefficients may be rationals (exact Fractions) or finite-field elements;
over a finite field of odd characteristic != ell the algebra splits and
`split_model` realizes it as 2x2 matrices.

Hermitian forms here are g x g quaternion matrices G with G^* = G
(conjugate transpose), pairing f(x, y) = sum_(s,t) conj(x_s) G[s][t] y_t,
which is linear in y under *right* scalar action (f(x, y c) = f(x, y) c).
Positive-definite forms over Q diagonalize exactly to the identity:
rational Gram-Schmidt reduces G to diag(alpha_s), then each column is
rescaled by a quaternion of norm 1/alpha_s found by a bounded search for
integral solutions of the norm equation.

The similitude group of the identity form consists of matrices M with
M^* M = gamma I, gamma a nonzero scalar.  Under the split model, the
canonical involution becomes the symplectic adjugate with respect to the
block-diagonal form diag(J_2, ..., J_2); conjugating by the permutation
`conjugator(g)` moves that to the standard symplectic form
[[0, I], [-I, 0]], so similitude matrices map into GSp_2g over the
finite field with the same factor gamma.
"""

import math
import random
from fractions import Fraction

from .ff import SSModError, BudgetError, make_field, sqrt as ff_sqrt, embed


# ---------------------------------------------------------------------------
# Hilbert symbols over Q
# ---------------------------------------------------------------------------

def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _val(x, v):
    """v-adic valuation of a nonzero rational."""
    x = Fraction(x)
    assert x != 0
    e = 0
    n = x.numerator
    while n % v == 0:
        n //= v
        e += 1
    d = x.denominator
    while d % v == 0:
        d //= v
        e -= 1
    return e


def _unit_mod(x, v, modulus):
    """The v-unit part of a rational, reduced modulo `modulus`."""
    e = _val(x, v)
    n = x.numerator
    d = x.denominator
    if e > 0:
        n //= v ** e
    elif e < 0:
        d //= v ** (-e)
    return (n * pow(d, -1, modulus)) % modulus


def _legendre(u, v):
    """Legendre symbol (u|v) for odd prime v, u a unit mod v: +-1."""
    s = pow(u % v, (v - 1) // 2, v)
    return 1 if s == 1 else -1


def hilbert_symbol(a, b, v):
    """Hilbert symbol (a, b)_v in {+1, -1}.

    v is an odd prime, 2, or the string "inf" for the real place.
    """
    a = Fraction(a)
    b = Fraction(b)
    assert a != 0 and b != 0
    if v == "inf":
        return -1 if (a < 0 and b < 0) else 1
    assert _is_prime(v)
    alpha = _val(a, v)
    beta = _val(b, v)
    if v == 2:
        u = _unit_mod(a, 2, 8)
        w = _unit_mod(b, 2, 8)
        eps = lambda t: ((t - 1) // 2) % 2
        om = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * om(w) + beta * om(u)
        return 1 if e % 2 == 0 else -1
    u = _unit_mod(a, v, v)
    w = _unit_mod(b, v, v)
    eps_v = ((v - 1) // 2) % 2
    s = (-1) ** (alpha * beta * eps_v)
    s *= _legendre(u, v) ** beta
    s *= _legendre(w, v) ** alpha
    return s


def _relevant_places(a, b):
    """Finite places where (a, b)_v can be nontrivial, plus infinity."""
    places = set([2])
    for x in (Fraction(a), Fraction(b)):
        for n in (abs(x.numerator), x.denominator):
            d = 2
            while d * d <= n:
                if n % d == 0:
                    places.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 1:
                places.add(n)
    return sorted(places) + ["inf"]


def hilbert_product_check(a, b):
    """Product formula: prod_v (a, b)_v = 1 over all places."""
    prod = 1
    for v in _relevant_places(a, b):
        prod *= hilbert_symbol(a, b, v)
    return prod == 1


def ramified_places(a, b):
    """Finite primes v with (a, b)_v = -1, plus "inf" if ramified there."""
    out = []
    for v in _relevant_places(a, b):
        if hilbert_symbol(a, b, v) == -1:
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# Quaternion algebras and elements
# ---------------------------------------------------------------------------

class QuatAlgebra:
    """Quaternion algebra (a, b) over a field given by sample elements.

    `one` must be the multiplicative identity of the coefficient field;
    it defaults to Fraction(1) (algebra over Q).
    """

    def __init__(self, a, b, one=None, p=None):
        if one is None:
            one = Fraction(1)
        self.a = a
        self.b = b
        self.one = one
        self.zero = one - one
        self.p = p  # ramified prime, if constructed via build_algebra

    def elt(self, w, x=0, y=0, z=0):
        cs = []
        for c in (w, x, y, z):
            if isinstance(c, int):
                c = self.one * c
            cs.append(c)
        return QuatElement(self, *cs)

    def gens(self):
        o, z = self.one, self.zero
        return (QuatElement(self, z, o, z, z),
                QuatElement(self, z, z, o, z),
                QuatElement(self, z, z, z, o))

    def __repr__(self):
        return "QuatAlgebra(%s, %s)" % (self.a, self.b)


class QuatElement:
    """w + x i + y j + z k with i^2 = a, j^2 = b, ij = -ji = k."""

    __slots__ = ("alg", "w", "x", "y", "z")

    def __init__(self, alg, w, x, y, z):
        self.alg = alg
        self.w = w
        self.x = x
        self.y = y
        self.z = z

    def coeffs(self):
        return (self.w, self.x, self.y, self.z)

    def __eq__(self, other):
        if not isinstance(other, QuatElement):
            return NotImplemented
        return self.coeffs() == other.coeffs()

    def __hash__(self):
        return hash(self.coeffs())

    def __add__(self, other):
        other = self._coerce(other)
        return QuatElement(self.alg, self.w + other.w, self.x + other.x,
                           self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return QuatElement(self.alg, -self.w, -self.x, -self.y, -self.z)

    def _coerce(self, other):
        if isinstance(other, QuatElement):
            return other
        return self.alg.elt(other)

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.alg.a, self.alg.b
        w1, x1, y1, z1 = self.coeffs()
        w2, x2, y2, z2 = other.coeffs()
        return QuatElement(
            self.alg,
            w1 * w2 + a * (x1 * x2) + b * (y1 * y2) - a * b * (z1 * z2),
            w1 * x2 + x1 * w2 - b * (y1 * z2) + b * (z1 * y2),
            w1 * y2 + y1 * w2 + a * (x1 * z2) - a * (z1 * x2),
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        )

    def __rmul__(self, other):
        return self._coerce(other) * self

    def conjugate(self):
        return QuatElement(self.alg, self.w, -self.x, -self.y, -self.z)

    def norm(self):
        """Reduced norm, a coefficient-field scalar."""
        a, b = self.alg.a, self.alg.b
        w, x, y, z = self.coeffs()
        return w * w - a * (x * x) - b * (y * y) + a * b * (z * z)

    def trace(self):
        return self.w + self.w

    def is_zero(self):
        z = self.alg.zero
        return self.coeffs() == (z, z, z, z)

    def is_scalar(self):
        z = self.alg.zero
        return (self.x, self.y, self.z) == (z, z, z)

    def inverse(self):
        n = self.norm()
        if n == self.alg.zero:
            raise SSModError("quaternion is not invertible")
        c = self.conjugate()
        if isinstance(n, Fraction) or isinstance(n, int):
            inv = Fraction(1) / n
        else:
            inv = n ** 0 / n
        return QuatElement(self.alg, c.w * inv, c.x * inv, c.y * inv, c.z * inv)

    def __repr__(self):
        return "Quat(%s, %s, %s, %s)" % self.coeffs()


def build_algebra(p, scan_bound=200):
    """The definite quaternion algebra over Q ramified exactly at {p, inf}.

    Uses (-1, -1) for p = 2 and (-1, -p) for p = 3 mod 4; otherwise scans
    small auxiliary primes q for a pair (-q, -p) with the right ramification.
    The result is always certified by Hilbert symbols at every relevant
    place before being returned.
    """
    if not _is_prime(p):
        raise SSModError("p must be prime: %r" % (p,))
    if p == 2:
        candidates = [(-1, -1)]
    elif p % 4 == 3:
        candidates = [(-1, -p)]
    else:
        candidates = [(-q, -p) for q in range(2, scan_bound) if _is_prime(q)]
    for a, b in candidates:
        want = sorted([v for v in (p, "inf")], key=str)
        got = sorted(ramified_places(a, b), key=str)
        if got == want:
            return QuatAlgebra(Fraction(a), Fraction(b), p=p)
    raise BudgetError("no definite algebra found for p=%d within scan bound" % p)


# ---------------------------------------------------------------------------
# Quaternion matrices
# ---------------------------------------------------------------------------

def qmat_identity(alg, n):
    return [[alg.elt(1) if r == c else alg.elt(0) for c in range(n)]
            for r in range(n)]


def qmat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    assert len(A[0]) == k
    out = []
    for r in range(n):
        row = []
        for c in range(m):
            s = A[r][0] * B[0][c]
            for t in range(1, k):
                s = s + A[r][t] * B[t][c]
            row.append(s)
        out.append(row)
    return out


def qmat_star(A):
    """Conjugate transpose (the adjoint for hermitian pairings)."""
    return [[A[c][r].conjugate() for c in range(len(A))]
            for r in range(len(A[0]))]


adjoint = qmat_star


def qmat_eq(A, B):
    return all(A[r][c] == B[r][c] for r in range(len(A)) for c in range(len(A[0])))


def is_gu(M, alg=None):
    """Whether M^* M = gamma I for a nonzero scalar gamma.

    Returns (flag, gamma) with gamma a coefficient-field scalar (or None).
    """
    if alg is None:
        alg = M[0][0].alg
    P = qmat_mul(qmat_star(M), M)
    g = len(M)
    gamma = P[0][0]
    if not gamma.is_scalar() or gamma.is_zero():
        return False, None
    for r in range(g):
        for c in range(g):
            want = gamma if r == c else alg.elt(0)
            if P[r][c] != want:
                return False, None
    return True, gamma.w


# ---------------------------------------------------------------------------
# Norm equations (definite algebras over Q)
# ---------------------------------------------------------------------------

def norm_equation(alg, alpha, search_bound=50):
    """A quaternion x in the definite algebra with n(x) = alpha > 0.

    Searches x = y / d with y integral, d = denominator(alpha) * t for
    t = 1, 2, ..., search_bound, enumerating lattice points on the sphere
    n(y) = alpha * d^2 exactly.  Raises BudgetError if the bound is hit.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise SSModError("norm equation target must be positive")
    a0 = -int(alg.a)
    b0 = -int(alg.b)
    assert a0 > 0 and b0 > 0, "norm search requires a definite algebra"
    den = alpha.denominator
    for t in range(1, search_bound + 1):
        d = den * t
        m = alpha.numerator * den * t * t
        ab = a0 * b0
        for z in range(math.isqrt(m // ab) + 1):
            r1 = m - ab * z * z
            for y in range(math.isqrt(r1 // b0) + 1):
                r2 = r1 - b0 * y * y
                for x in range(math.isqrt(r2 // a0) + 1):
                    r3 = r2 - a0 * x * x
                    w = math.isqrt(r3)
                    if w * w == r3:
                        return alg.elt(Fraction(w, d), Fraction(x, d),
                                       Fraction(y, d), Fraction(z, d))
    raise BudgetError("norm equation unsolved within search bound %d"
                      % search_bound)


# ---------------------------------------------------------------------------
# Hermitian forms
# ---------------------------------------------------------------------------

class HermitianForm:
    """Quaternion-hermitian pairing f(x, y) = sum conj(x_s) G[s][t] y_t."""

    def __init__(self, alg, gram):
        self.alg = alg
        self.g = len(gram)
        for row in gram:
            assert len(row) == self.g
        assert qmat_eq(qmat_star(gram), gram), "gram matrix must be hermitian"
        self.gram = gram

    def pair(self, xs, ys):
        s = self.alg.elt(0)
        for r in range(self.g):
            for c in range(self.g):
                s = s + xs[r].conjugate() * self.gram[r][c] * ys[c]
        return s

    def trace_gram(self):
        """Rational Gram matrix of v -> f(v, v) on Q^(4g)."""
        basis = []
        o, z = self.alg.one, self.alg.zero
        units = [self.alg.elt(1), self.alg.gens()[0],
                 self.alg.gens()[1], self.alg.gens()[2]]
        for s in range(self.g):
            for u in units:
                v = [self.alg.elt(0)] * self.g
                v[s] = u
                basis.append(v)
        n = 4 * self.g
        T = [[None] * n for _ in range(n)]
        for r in range(n):
            for c in range(r, n):
                val = self.pair(basis[r], basis[c])
                # f(y, x) = conj f(x, y), so the symmetrization is the
                # scalar part of f.
                T[r][c] = Fraction(val.w)
                T[c][r] = Fraction(val.w)
        return T

    def is_positive_definite(self):
        T = self.trace_gram()
        for k in range(1, len(T) + 1):
            if _frac_det([row[:k] for row in T[:k]]) <= 0:
                return False
        return True


def _frac_det(A):
    """Determinant of a square matrix of Fractions by Gaussian elimination."""
    n = len(A)
    A = [list(map(Fraction, row)) for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = Fraction(1) / A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if f != 0:
                for t in range(c, n):
                    A[r][t] -= f * A[c][t]
    return det


def gram_schmidt(form):
    """Orthogonalize the standard basis against a hermitian pairing.

    Returns (columns, alphas) with columns[s] the coordinates of the s-th
    orthogonal vector and alphas[s] = f(v_s, v_s), a positive rational
    scalar.  Raises SSModError if any pivot fails to be positive, which
    for a hermitian form is exactly failure of positive-definiteness.
    """
    alg = form.alg
    g = form.g
    columns = []
    alphas = []
    for s in range(g):
        v = [alg.elt(0)] * g
        v[s] = alg.elt(1)
        for j in range(s):
            c = alphas[j].inverse() * form.pair(columns[j], v)
            for t in range(g):
                v[t] = v[t] - columns[j][t] * c
        alpha = form.pair(v, v)
        if not (alpha.is_scalar() and Fraction(alpha.w) > 0):
            raise SSModError("form is not positive definite")
        columns.append(v)
        alphas.append(alpha)
    return columns, alphas


def hermitian_diagonalize(form, search_bound=50):
    """M with M^* G M = I exactly, for a positive-definite hermitian G.

    Stage one is quaternionic Gram-Schmidt (exact rational arithmetic)
    taking G to diag(alpha_s) with alpha_s rational and positive; stage
    two rescales column s by x_s / alpha_s where n(x_s) = alpha_s comes
    from `norm_equation`, so each diagonal entry becomes exactly 1.
    """
    alg = form.alg
    g = form.g
    columns, alphas = gram_schmidt(form)
    M = [[None] * g for _ in range(g)]
    for s in range(g):
        a_s = Fraction(alphas[s].w)
        x = norm_equation(alg, a_s, search_bound)
        scale = alg.elt(Fraction(1) / a_s) * x  # n(scale) = 1 / alpha_s
        for t in range(g):
            M[t][s] = columns[s][t] * scale
    check = qmat_mul(qmat_star(M), qmat_mul(form.gram, M))
    assert qmat_eq(check, qmat_identity(alg, g))
    return M


def random_positive_form(alg, g, rng, height=5):
    """A seeded random positive-definite hermitian form, entry height <= height.

    Diagonal entries are integers in [2, height]; off-diagonal quaternion
    coefficients are drawn from {-1, 0, 1} with a bias toward 0 so that
    positive-definiteness has a workable acceptance rate, and candidates
    are rejected until Gram-Schmidt certifies definiteness.
    """
    while True:
        G = [[None] * g for _ in range(g)]
        for s in range(g):
            G[s][s] = alg.elt(rng.randrange(2, height + 1))
            for t in range(s + 1, g):
                cs = [rng.choice([0, 0, 0, 0, 1, -1]) for _ in range(4)]
                e = alg.elt(*[Fraction(c) for c in cs])
                G[s][t] = e
                G[t][s] = e.conjugate()
        form = HermitianForm(alg, G)
        try:
            gram_schmidt(form)
        except SSModError:
            continue
        return form


def abelian_isogeny_transform(form, search_bound=50):
    """(Phi, n) with Phi = n * diagonalizer integral and Phi^* G Phi = n^2 I."""
    M = hermitian_diagonalize(form, search_bound)
    n = 1
    for row in M:
        for e in row:
            for c in e.coeffs():
                n = n * Fraction(c).denominator // math.gcd(
                    n, Fraction(c).denominator)
    Phi = [[e * form.alg.elt(n) for e in row] for row in M]
    return Phi, n


# ---------------------------------------------------------------------------
# Symplectic normalization and split models
# ---------------------------------------------------------------------------

def j_standard(g):
    """Standard symplectic form [[0, I], [-I, 0]] as an integer matrix."""
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for t in range(g):
        J[t][g + t] = 1
        J[g + t][t] = -1
    return J


def j_blocks(g):
    """Block-diagonal symplectic form diag(J_2, ..., J_2)."""
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for t in range(g):
        J[2 * t][2 * t + 1] = 1
        J[2 * t + 1][2 * t] = -1
    return J


def conjugator(g):
    """Permutation matrix P with P^T diag(J_2,..,J_2) P = [[0,I],[-I,0]].

    The permutation interleaves the two Lagrangian halves: standard basis
    vector c maps to slot 2c for c < g and to slot 2(c-g)+1 otherwise.
    """
    n = 2 * g
    P = [[0] * n for _ in range(n)]
    for c in range(n):
        r = 2 * c if c < g else 2 * (c - g) + 1
        P[r][c] = 1
    return P


def algebra_over_field(alg, K):
    """The algebra (a, b) with coefficients moved into the finite field K."""
    a = Fraction(alg.a)
    b = Fraction(alg.b)
    assert a.denominator == 1 and b.denominator == 1
    return QuatAlgebra(K.elt(a.numerator), K.elt(b.numerator),
                       one=K.elt(1), p=alg.p)


class SplitModel:
    """An isomorphism of B tensor F_q with 2x2 matrices over L.

    L is F_q itself when a is a square there, and the quadratic extension
    otherwise.  i maps to diag(s, -s) with s^2 = a, j maps to
    [[0, 1], [b, 0]]; determinant realizes the reduced norm.
    """

    def __init__(self, alg, K):
        if isinstance(alg.a, Fraction):
            aK = K.elt(Fraction(alg.a).numerator)
            bK = K.elt(Fraction(alg.b).numerator)
        else:
            aK, bK = alg.a, alg.b
        s = ff_sqrt(aK)
        if s is None:
            L = make_field(K.p, 2 * K.m)
            s = ff_sqrt(embed(aK, L))
            assert s is not None
        else:
            L = K
        self.alg = alg
        self.K = K
        self.L = L
        self.s = s
        self.bL = bK if L is K else embed(bK, L)

    def _lift(self, c):
        """Coefficient from K (or an int/Fraction) into L."""
        if isinstance(c, (int, Fraction)):
            assert Fraction(c).denominator == 1
            return self.L.elt(Fraction(c).numerator)
        if self.L is self.K:
            return c
        return embed(c, self.L)

    def elt_matrix(self, q):
        """2x2 matrix over L for a quaternion with coefficients in K."""
        w = self._lift(q.w)
        x = self._lift(q.x)
        y = self._lift(q.y)
        z = self._lift(q.z)
        s, b = self.s, self.bL
        return [[w + x * s, y + z * s],
                [(y - z * s) * b, w - x * s]]

    def mat_matrix(self, M):
        """2g x 2g matrix over L for a g x g quaternion matrix."""
        g = len(M)
        out = [[self.L.elt(0)] * (2 * g) for _ in range(2 * g)]
        for r in range(g):
            for c in range(g):
                blk = self.elt_matrix(M[r][c])
                for dr in range(2):
                    for dc in range(2):
                        out[2 * r + dr][2 * c + dc] = blk[dr][dc]
        return out


def is_gsp(T, K, g):
    """Whether T^t J T = gamma J for the standard symplectic J over K.

    Returns (flag, gamma).
    """
    n = 2 * g
    J = j_standard(g)
    JK = [[K.elt(J[r][c]) for c in range(n)] for r in range(n)]
    P = [[sum((T[t][r] * JK[t][s] * T[s][c] for t in range(n)
               for s in range(n)), K.elt(0))
          for c in range(n)] for r in range(n)]
    gamma = None
    for r in range(n):
        for c in range(n):
            if J[r][c] == 0:
                if P[r][c] != K.elt(0):
                    return False, None
            else:
                val = P[r][c] * K.elt(J[r][c])  # J entries are +-1
                if gamma is None:
                    gamma = val
                elif val != gamma:
                    return False, None
    if gamma is None or gamma == K.elt(0):
        return False, None
    return True, gamma


def field_norm_solve(algK, gamma, rng):
    """A quaternion over a finite field with reduced norm gamma.

    The norm form is isotropic over a finite field, hence universal; a
    short random search over the i, j, k parts finds a square residual.
    """
    a, b = algK.a, algK.b
    K_sqrt = ff_sqrt
    while True:
        x = algK.elt(0, rng.randrange(0, 50), rng.randrange(0, 50),
                     rng.randrange(0, 50))
        # need w^2 = gamma + a x^2 + b y^2 - a b z^2
        target = gamma + a * (x.x * x.x) + b * (x.y * x.y) - a * b * (x.z * x.z)
        w = K_sqrt(target)
        if w is not None:
            return algK.elt(w, x.x, x.y, x.z)


def sample_gu(algK, g, rng):
    """A random similitude of the identity hermitian form over B tensor F_q.

    Built as a product of generators: scalars, constant quaternion
    diagonals, permutations, and 2x2 rotation blocks with entries in the
    commutative subalgebra spanned by 1 and i.
    """
    K_one = algK.one
    M = qmat_identity(algK, g)
    for _ in range(rng.randrange(2, 6)):
        kind = rng.randrange(4)
        G = qmat_identity(algK, g)
        if kind == 0:
            # nonzero field scalar, gamma = c^2
            while True:
                c = algK.elt(rng.randrange(1, 50))
                if not c.is_zero():
                    break
            G = [[c * e for e in row] for row in G]
        elif kind == 1:
            # diag(u, ..., u) with n(u) != 0, gamma = n(u)
            while True:
                u = algK.elt(rng.randrange(0, 50), rng.randrange(0, 50),
                             rng.randrange(0, 50), rng.randrange(0, 50))
                if u.norm() != algK.zero:
                    break
            G = [[u if r == c else algK.elt(0) for c in range(g)]
                 for r in range(g)]
        elif kind == 2 and g >= 2:
            perm = list(range(g))
            rng.shuffle(perm)
            G = [[algK.elt(1) if perm[c] == r else algK.elt(0)
                  for c in range(g)] for r in range(g)]
        elif g >= 2:
            # 2x2 block [[x, y], [-conj(y), conj(x)]], x, y in span{1, i};
            # remaining diagonal slots get a quaternion of the same norm so
            # the whole matrix has a single similitude factor.
            r0, c0 = rng.sample(range(g), 2)
            while True:
                x = algK.elt(rng.randrange(0, 50), rng.randrange(0, 50))
                y = algK.elt(rng.randrange(0, 50), rng.randrange(0, 50))
                if x.norm() + y.norm() != algK.zero:
                    break
            G[r0][r0] = x
            G[r0][c0] = y
            G[c0][r0] = -y.conjugate()
            G[c0][c0] = x.conjugate()
            gamma = x.norm() + y.norm()
            for t in range(g):
                if t not in (r0, c0):
                    G[t][t] = field_norm_solve(algK, gamma, rng)
        M = qmat_mul(M, G)
    ok, _ = is_gu(M, algK)
    assert ok
    return M


def gu_to_gsp(split, M):
    """Conjugate the split image of a similitude into standard GSp form."""
    g = len(M)
    S = split.mat_matrix(M)
    P = conjugator(g)
    L = split.L
    n = 2 * g
    # T = P^T S P; P is a permutation, so this is an index shuffle with
    # col[c] = the row r having P[r][c] = 1.
    col = [next(r for r in range(n) if P[r][c] == 1) for c in range(n)]
    T = [[S[col[r]][col[c]] for c in range(n)] for r in range(n)]
    return T
