"""Exact arithmetic in F_p and F_{p^m}, univariate polynomials, root finding,
and characteristic-polynomial eigendata at desk scale.

Fields are represented as F_p[t]/(modulus) where the modulus is the
lexicographically-first monic irreducible polynomial of degree m over F_p
(coefficients scanned low-degree-first), so every run picks the same model.
"""

from .errors import BudgetError, SSModError

SCAN_BUDGET = 10 ** 6

_FIELD_CACHE = {}


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Raw polynomial helpers over F_p (coefficient lists of ints, ascending degree)

def _ppoly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _ppoly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ppoly_trim(out)


def _ppoly_mod(f, g, p):
    # g monic
    f = list(f)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        c = f[-1] % p
        if c:
            shift = len(f) - 1 - dg
            for i in range(dg + 1):
                f[shift + i] = (f[shift + i] - c * g[i]) % p
        f.pop()
    return _ppoly_trim(f)


def _ppoly_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        # make g monic for _ppoly_mod
        inv = pow(g[-1], p - 2, p)
        gm = [(c * inv) % p for c in g]
        f, g = gm, _ppoly_mod(f, gm, p)
    return f


def _ppoly_powmod_x(e, modpoly, p):
    """x^e mod modpoly over F_p."""
    result = [1]
    base = _ppoly_mod([0, 1], modpoly, p)
    while e:
        if e & 1:
            result = _ppoly_mod(_ppoly_mul(result, base, p), modpoly, p)
        base = _ppoly_mod(_ppoly_mul(base, base, p), modpoly, p)
        e >>= 1
    return result


def _ppoly_is_irreducible(f, p):
    """Deterministic irreducibility test for monic f over F_p."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    # x^(p^m) == x mod f
    xq = _ppoly_powmod_x(p ** m, f, p)
    if _ppoly_trim(list(xq)) != [0, 1]:
        return False
    # gcd(x^(p^(m/r)) - x, f) == 1 for each prime r | m
    r = 2
    mm = m
    primes = set()
    while r * r <= mm:
        if mm % r == 0:
            primes.add(r)
            while mm % r == 0:
                mm //= r
        r += 1
    if mm > 1:
        primes.add(mm)
    for r in primes:
        h = _ppoly_powmod_x(p ** (m // r), f, p)
        h = list(h)
        # h - x
        while len(h) < 2:
            h.append(0)
        h[1] = (h[1] - 1) % p
        g = _ppoly_gcd(f, _ppoly_trim(h), p)
        if len(g) != 1:
            return False
    return True


def _lex_first_modulus(p, m):
    """Lexicographically-first monic irreducible of degree m over F_p.

    Candidates x^m + c_{m-1}x^{m-1} + ... + c_0 are scanned in increasing
    order of the integer c_0 + c_1 p + ... (low-degree coefficients vary
    fastest).
    """
    if m == 1:
        return (0, 1)
    for v in range(p ** m):
        coeffs = []
        t = v
        for _ in range(m):
            coeffs.append(t % p)
            t //= p
        cand = coeffs + [1]
        if _ppoly_is_irreducible(cand, p):
            return tuple(cand)
    raise SSModError("no irreducible modulus found (internal error)")


class FieldParams:
    """Parameters of F_{p^m} = F_p[t]/(modulus)."""

    def __init__(self, p, m):
        if not _is_prime(p):
            raise SSModError("p must be prime, got %r" % (p,))
        if m < 1:
            raise SSModError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = _lex_first_modulus(p, m)
        # reduction row: t^m = -(c_0 + c_1 t + ...)
        self._red = tuple((-c) % p for c in self.modulus[:m])
        self._embed_cache = {}
        self._nonresidue = None

    # -- raw coefficient-tuple arithmetic ----------------------------------
    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        p, m = self.p, self.m
        if m == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = self._red
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                base = k - m
                for i, r in enumerate(red):
                    if r:
                        prod[base + i] += c * r
        return tuple(c % p for c in prod[:m])

    def _inv(self, a):
        p = self.p
        if self.m == 1:
            if a[0] == 0:
                raise ZeroDivisionError("inversion of zero field element")
            return (pow(a[0], p - 2, p),)
        # extended Euclid over F_p[t]: maintain f = s*a (mod modulus)
        f = _ppoly_trim(list(a))
        if not f:
            raise ZeroDivisionError("inversion of zero field element")
        g = list(self.modulus)
        # invariants: f = s*a mod modulus, g = t*a mod modulus
        s, t = [1], []
        while True:
            if len(f) == 1:
                c = pow(f[0], p - 2, p)
                out = [(x * c) % p for x in s]
                out += [0] * (self.m - len(out))
                return tuple(out[:self.m])
            if len(f) < len(g):
                f, g = g, f
                s, t = t, s
            # reduce f by g
            lg_inv = pow(g[-1], p - 2, p)
            c = (f[-1] * lg_inv) % p
            shift = len(f) - len(g)
            for i in range(len(g)):
                f[shift + i] = (f[shift + i] - c * g[i]) % p
            _ppoly_trim(f)
            # s -= c * x^shift * t
            st = [0] * shift + [(c * x) % p for x in t]
            if len(s) < len(st):
                s = s + [0] * (len(st) - len(s))
            for i in range(len(st)):
                s[i] = (s[i] - st[i]) % p
            _ppoly_trim(s)
            if not f:
                raise ZeroDivisionError("element not invertible (modulus not irreducible?)")

    # -- public interface ---------------------------------------------------
    def elt(self, coeffs):
        """Element from an int (constant) or coefficient iterable (ascending)."""
        if isinstance(coeffs, FieldElement):
            if coeffs.params is self:
                return coeffs
            raise SSModError("element belongs to a different field")
        if isinstance(coeffs, int):
            c = [coeffs % self.p] + [0] * (self.m - 1)
            return FieldElement(self, tuple(c))
        c = [x % self.p for x in coeffs]
        if len(c) > self.m:
            raise SSModError("coefficient vector too long")
        c += [0] * (self.m - len(c))
        return FieldElement(self, tuple(c))

    def zero(self):
        return self.elt(0)

    def one(self):
        return self.elt(1)

    def gen(self):
        if self.m == 1:
            return self.elt(0)
        return self.elt([0, 1])

    def elements(self):
        """All field elements, in the deterministic lex order."""
        p, m = self.p, self.m
        for v in range(self.q):
            coeffs = []
            t = v
            for _ in range(m):
                coeffs.append(t % p)
                t //= p
            yield FieldElement(self, tuple(coeffs))

    def from_int(self, v):
        coeffs = []
        t = v % self.q
        for _ in range(self.m):
            coeffs.append(t % self.p)
            t //= self.p
        return FieldElement(self, tuple(coeffs))

    def __repr__(self):
        return "FieldParams(p=%d, m=%d)" % (self.p, self.m)

    def __eq__(self, other):
        return isinstance(other, FieldParams) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))


class FieldElement:
    """Element of F_{p^m}, stored as m coefficients in [0, p)."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params, coeffs):
        self.params = params
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.params is self.params or other.params == self.params:
                return other
            raise SSModError("mixing elements of different fields")
        if isinstance(other, int):
            return self.params.elt(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.params, self.params._add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.params, self.params._sub(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.params, self.params._sub(o.coeffs, self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.params, self.params._mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.params,
                            self.params._mul(self.coeffs, self.params._inv(o.coeffs)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.params,
                            self.params._mul(o.coeffs, self.params._inv(self.coeffs)))

    def __neg__(self):
        return FieldElement(self.params, self.params._neg(self.coeffs))

    def __pow__(self, e):
        if e < 0:
            return (self.inverse()) ** (-e)
        result = self.params.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        return FieldElement(self.params, self.params._inv(self.coeffs))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.params.elt(other)
        return (isinstance(other, FieldElement) and self.params == other.params
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.params.p, self.params.m, self.coeffs))

    def to_int(self):
        """Deterministic integer encoding (base-p digits, low degree first)."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.params.p + c
        return v

    def __repr__(self):
        return "FF(%d^%d):%s" % (self.params.p, self.params.m, list(self.coeffs))


def make_field(p, m=1):
    """F_{p^m} with the deterministic lex-first modulus; results are cached."""
    key = (p, m)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldParams(p, m)
    return _FIELD_CACHE[key]


def frobenius(x, k=1):
    """x^(p^k); frobenius(x, m) is the identity on F_{p^m}."""
    k %= x.params.m
    return x ** (x.params.p ** k)


def embed(x, target):
    """Embed x in F_{p^a} into F_{p^b}, a | b.

    The source generator maps to the lexicographically smallest root of the
    source modulus in the target (quadratic formula for degree-2 sources in
    large targets, exhaustive scan otherwise).
    """
    src = x.params
    if src == target:
        return x
    if src.p != target.p or target.m % src.m != 0:
        raise SSModError("embedding requires the same p and degree divisibility")
    if src.m == 1:
        return target.elt(x.coeffs[0])
    key = (src.p, src.m)
    img = target._embed_cache.get(key)
    if img is None:
        img = _gen_image(src, target)
        target._embed_cache[key] = img
    acc = target.zero()
    power = target.one()
    for c in x.coeffs:
        acc = acc + power * c
        power = power * img
    return acc


def _gen_image(src, target):
    """Root of the source modulus in the target field, lex-smallest."""
    mod = src.modulus
    if target.q <= SCAN_BUDGET:
        for cand in target.elements():
            acc = target.zero()
            power = target.one()
            for c in mod:
                acc = acc + power * c
                power = power * cand
            if acc.is_zero():
                return cand
        raise SSModError("no root of modulus in target (internal error)")
    if src.m == 2:
        # t^2 + c1 t + c0 = 0 via the quadratic formula (p odd)
        c0 = target.elt(mod[0])
        c1 = target.elt(mod[1])
        disc = c1 * c1 - 4 * c0
        s = sqrt(disc)
        if s is None:
            raise SSModError("modulus has no root in target (internal error)")
        inv2 = target.elt(2).inverse()
        r1 = (-c1 + s) * inv2
        r2 = (-c1 - s) * inv2
        return r1 if r1.to_int() <= r2.to_int() else r2
    raise BudgetError("embedding beyond scan budget for source degree %d" % src.m)


def sqrt(x):
    """A square root of x in its field, or None; Tonelli-Shanks with a
    deterministic lex-first non-residue.  Returns the lex-smaller root."""
    K = x.params
    if x.is_zero():
        return K.zero()
    q = K.q
    if x ** ((q - 1) // 2) != K.one():
        return None
    if q % 4 == 3:
        r = x ** ((q + 1) // 4)
    else:
        # Tonelli-Shanks
        s, e = q - 1, 0
        while s % 2 == 0:
            s //= 2
            e += 1
        nr = K._nonresidue
        if nr is None:
            for cand in K.elements():
                if cand.is_zero():
                    continue
                if cand ** ((q - 1) // 2) != K.one():
                    nr = cand
                    break
            K._nonresidue = nr
        g = nr ** s
        r = x ** ((s + 1) // 2)
        t = x ** s
        while t != K.one():
            # find least i with t^(2^i) = 1
            i, tt = 0, t
            while tt != K.one():
                tt = tt * tt
                i += 1
            b = g
            for _ in range(e - i - 1):
                b = b * b
            r = r * b
            t = t * b * b
            g = b * b
            e = i
    other = -r
    return r if r.to_int() <= other.to_int() else other


# ---------------------------------------------------------------------------
# Polynomials over a field

class Poly:
    """Univariate polynomial with FieldElement coefficients, ascending degree,
    normalized with no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.elt(c) for c in ints])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero(), field.one()])

    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        out = []
        for i in range(n):
            x = self.coeffs[i] if i < len(self.coeffs) else z
            y = other.coeffs[i] if i < len(other.coeffs) else z
            out.append(x - y)
        return Poly(self.field, out)

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return Poly(self.field, [c * other for c in self.coeffs])
        if isinstance(other, int):
            return Poly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        z = self.field.zero()
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        assert e >= 0
        out = Poly(self.field, [self.field.one()])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree()
        lead_inv = other.coeffs[-1].inverse()
        z = self.field.zero()
        q = [z] * max(0, len(r) - d)
        while len(r) - 1 >= d and r:
            c = r[-1] * lead_inv
            shift = len(r) - 1 - d
            if not c.is_zero():
                q[shift] = c
                for i in range(d + 1):
                    r[shift + i] = r[shift + i] - c * other.coeffs[i]
            r.pop()
        return Poly(self.field, q), Poly(self.field, r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        return self * self.coeffs[-1].inverse()

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        return Poly(self.field,
                    [c * i for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Evaluate at x, which may live in an extension of the coefficient
        field (coefficients are embedded as needed)."""
        K = x.params
        lift = (lambda c: c) if K == self.field else (lambda c: embed(c, K))
        acc = K.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + lift(c)
        return acc

    def map_coeffs(self, fn, field=None):
        return Poly(field or self.field, [fn(c) for c in self.coeffs])

    def __repr__(self):
        return "Poly(%r)" % (list(self.coeffs),)


def roots(f, field=None):
    """All roots of f in the given field (default: its own), with
    multiplicities, by exhaustive scan.  |field| must be <= 10^6."""
    if f.is_zero():
        raise SSModError("roots of the zero polynomial")
    K = field or f.field
    if K.q > SCAN_BUDGET:
        raise BudgetError("root scan beyond budget: |field| = %d" % K.q)
    if K != f.field:
        g = Poly(K, [embed(c, K) for c in f.coeffs])
    else:
        g = f
    out = []
    for cand in K.elements():
        if g.eval(cand).is_zero():
            mult = 0
            h = g
            lin = Poly(K, [-cand, K.one()])
            while True:
                q, r = h.divmod(lin)
                if not r.is_zero():
                    break
                mult += 1
                h = q
            out.append((cand, mult))
    return out


# ---------------------------------------------------------------------------
# Matrices over a field (list-of-lists of FieldElement)

def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    z = A[0][0].params.zero()
    out = [[z] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a.is_zero():
                continue
            Bt = B[t]
            row = out[i]
            for j in range(m):
                row[j] = row[j] + a * Bt[j]
    return out


def mat_identity(K, n):
    z, o = K.zero(), K.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scalar_mul(c, A):
    return [[c * a for a in row] for row in A]


def mat_vec(A, v):
    z = A[0][0].params.zero()
    out = []
    for row in A:
        acc = z
        for a, x in zip(row, v):
            acc = acc + a * x
        out.append(acc)
    return out


def mat_embed(A, K):
    return [[embed(a, K) for a in row] for row in A]


def rref(A):
    """Reduced row echelon form; returns (R, pivot column list)."""
    if not A:
        return [], []
    M = [list(row) for row in A]
    rows, cols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if not M[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def nullspace(A):
    """Basis of the right kernel of A (list of column vectors)."""
    if not A:
        return []
    cols = len(A[0])
    K = A[0][0].params
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    z, o = K.zero(), K.one()
    for fc in free:
        v = [z] * cols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def mat_det(A):
    n = len(A)
    M = [list(row) for row in A]
    K = M[0][0].params
    det = K.one()
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not M[i][c].is_zero():
                pr = i
                break
        if pr is None:
            return K.zero()
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            det = -det
        det = det * M[c][c]
        inv = M[c][c].inverse()
        for i in range(c + 1, n):
            if not M[i][c].is_zero():
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


def char_poly(A):
    """Characteristic polynomial det(XI - A), by the division-free
    Berkowitz recursion (exact over any commutative base)."""
    n = len(A)
    K = A[0][0].params
    if n == 0:
        return Poly(K, [K.one()])
    # vectors of charpoly coefficients, highest degree first
    vec = [K.one(), -A[0][0]]
    for k in range(1, n):
        # principal (k+1)x(k+1) block, partitioned around the new row/col 0..k
        a = A[k][k]
        R = [A[k][j] for j in range(k)]
        C = [A[i][k] for i in range(k)]
        B = [[A[i][j] for j in range(k)] for i in range(k)]
        q = [K.one(), -a]
        w = C
        for _ in range(k - 1):
            # q_{i} = -(R . B^{i-2} C)
            acc = K.zero()
            for r, x in zip(R, w):
                acc = acc + r * x
            q.append(-acc)
            w = mat_vec(B, w)
        acc = K.zero()
        for r, x in zip(R, w):
            acc = acc + r * x
        q.append(-acc)
        # multiply: new_vec = T_q * vec  (Toeplitz, lower triangular)
        new = [K.zero()] * (k + 2)
        for i in range(k + 2):
            for j in range(min(i + 1, len(q))):
                if i - j < len(vec):
                    new[i] = new[i] + q[j] * vec[i - j]
        vec = new
    return Poly(K, list(reversed(vec)))


def char_poly_eigendata(A):
    """Exact characteristic polynomial factorization with eigenvalues.

    Returns (char_poly, entries) where entries is a list of
    (eigenvalue, multiplicity, minimal_poly) with the eigenvalue living in
    F_{p^{m*d}} for d the degree of its minimal polynomial over the base
    field.  Deterministic ordering: by (d, eigenvalue lex encoding).
    """
    cp = char_poly(A)
    K = A[0][0].params
    remaining = cp.monic()
    entries = []
    d = 1
    while remaining.degree() > 0:
        Kd = make_field(K.p, K.m * d)
        if Kd.q > SCAN_BUDGET:
            raise BudgetError(
                "eigenvalue extension beyond scan budget at degree %d" % d)
        rts = roots(remaining, Kd)
        found = []
        for r, _mult in rts:
            # keep only roots whose minimal degree over K is exactly d
            conj = r
            deg = 1
            while True:
                conj = frobenius(conj, K.m)
                if conj == r:
                    break
                deg += 1
            if deg != d:
                continue
            found.append(r)
        # group Frobenius orbits into minimal polynomials
        seen = set()
        for r in sorted(found, key=lambda e: e.to_int()):
            if r in seen:
                continue
            orbit = [r]
            conj = frobenius(r, K.m)
            while conj != r:
                orbit.append(conj)
                conj = frobenius(conj, K.m)
            seen.update(orbit)
            minpoly = Poly(Kd, [Kd.one()])
            for o in orbit:
                minpoly = minpoly * Poly(Kd, [-o, Kd.one()])
            # descend coefficients to K
            mp_K = Poly(K, [_descend(c, K) for c in minpoly.coeffs])
            mult = 0
            while True:
                q, rem = remaining.divmod(mp_K)
                if not rem.is_zero():
                    break
                mult += 1
                remaining = q
            for o in orbit:
                entries.append((o, mult, mp_K))
        d += 1
        if d > 24:
            raise BudgetError("eigenvalue degree runaway (internal error)")
    entries.sort(key=lambda e: (e[0].params.m, e[0].to_int()))
    return cp, entries


def _descend(c, K):
    """Interpret an element of an extension known to lie in the subfield K."""
    target = embed_preimage(c, K)
    if target is None:
        raise SSModError("coefficient does not descend (internal error)")
    return target


def embed_preimage(c, K):
    """Preimage of c under embed(., c.params) restricted to K, or None."""
    big = c.params
    if big == K:
        return c
    # solve embed(x, big) == c by linear algebra over F_p
    p = K.p
    Fp = make_field(p, 1)
    # basis of K mapped into big
    imgs = []
    gen_img = embed(K.gen(), big) if K.m > 1 else big.one()
    acc = big.one()
    for _ in range(K.m):
        imgs.append(acc)
        acc = acc * gen_img
    # solve sum x_i imgs[i] = c over F_p coordinates of big
    rows = []
    for coord in range(big.m):
        rows.append([Fp.elt(img.coeffs[coord]) for img in imgs]
                    + [Fp.elt(c.coeffs[coord])])
    R, pivots = rref(rows)
    if K.m in pivots:
        return None
    sol = [Fp.zero()] * K.m
    for r, pc in enumerate(pivots):
        sol[pc] = R[r][K.m]
    x = K.elt([s.coeffs[0] for s in sol])
    if embed(x, big) != c:
        return None
    return x
