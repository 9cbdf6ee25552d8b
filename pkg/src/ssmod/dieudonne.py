"""Semilinear operator algebra over W_n(F_{p^2}): Dieudonne modules of
supersingular p-divisible groups at finite truncation, endomorphism rings,
quasi-polarizations, and the hermitian structure on M/FM.

Conventions (recorded, since pairing normalizations vary):
  * a SemilinearMap (A, e) acts by x -> A . sigma^e(x);
  * the quasi-polarization pairing is evaluated as e(x, y) = y^T . gram . x,
    with gram the block-diagonal matrix of [[0,1],[-1,0]] blocks;
  * the hermitian form on M/FM is <x, y> = frobenius(e(x, Fy) mod p), the
    Frobenius applied after reduction mod p.
With these readings the standard module has unit-diagonal hermitian Gram.
"""

from . import ff
from .wittring import make_witt, sigma
from .errors import SSModError

# ---------------------------------------------------------------------------
# Witt matrix helpers

def wmat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = Ai[0] * B[0][j]
            for t in range(1, k):
                acc = acc + Ai[t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def wmat_sigma(A, e):
    if e % 2 == 0:
        return A
    return [[sigma(x) for x in row] for row in A]


def wmat_identity(W, n):
    return [[W.one() if i == j else W.zero() for j in range(n)] for i in range(n)]


def wmat_scalar(W, n, c):
    c = W.elt(c, 0) if isinstance(c, int) else c
    return [[c if i == j else W.zero() for j in range(n)] for i in range(n)]


def wmat_transpose(A):
    return [list(col) for col in zip(*A)]


def wmat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def wmat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def wmat_eq(A, B):
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def wmat_vec(A, v):
    out = []
    for row in A:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def wmat_det(A):
    """Determinant by cofactor expansion (ranks here are <= 6)."""
    n = len(A)
    if n == 1:
        return A[0][0]
    W = A[0][0].params
    acc = W.zero()
    for j in range(n):
        if A[0][j].is_zero():
            continue
        minor = [[A[i][t] for t in range(n) if t != j] for i in range(1, n)]
        term = A[0][j] * wmat_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


class SemilinearMap:
    """x -> matrix . sigma^twist(x) on a free W_n-module."""

    def __init__(self, matrix, twist):
        self.matrix = matrix
        self.twist = twist
        self.params = matrix[0][0].params
        self.rank = len(matrix)

    def __call__(self, v):
        e = self.twist % 2
        if e:
            v = [sigma(x) for x in v]
        return wmat_vec(self.matrix, v)

    def __eq__(self, other):
        return (isinstance(other, SemilinearMap) and self.twist == other.twist
                and wmat_eq(self.matrix, other.matrix))

    def __repr__(self):
        return "SemilinearMap(twist=%d, rank=%d)" % (self.twist, self.rank)


def compose(s, t):
    """(A sigma^a) o (B sigma^b) = (A . sigma^a(B)) sigma^(a+b)."""
    if s.rank != len(t.matrix[0]):
        raise SSModError("rank mismatch in composition")
    return SemilinearMap(wmat_mul(s.matrix, wmat_sigma(t.matrix, s.twist)),
                         s.twist + t.twist)


def smap_add(s, t):
    if s.twist != t.twist:
        raise SSModError("cannot add maps of different twists")
    return SemilinearMap(wmat_add(s.matrix, t.matrix), s.twist)


class DieudonneModule:
    """Free W_n-module of rank 2g with F (twist +1) and V (twist -1)."""

    def __init__(self, W, g, F, V):
        self.witt = W
        self.g = g
        self.rank = 2 * g
        self.F = F
        self.V = V


class QuasiPolarization:
    """Alternating unimodular pairing e(x, y) = y^T . gram . x."""

    def __init__(self, gram):
        self.gram = gram
        self.params = gram[0][0].params

    def pair(self, x, y):
        acc = self.params.zero()
        for t, yt in enumerate(y):
            if yt.is_zero():
                continue
            for s, xs in enumerate(x):
                acc = acc + yt * self.gram[t][s] * xs
        return acc


def standard_supersingular(p, n, g):
    """The rank-2g standard supersingular module: g blocks with
    F = [[0,1],[-p,0]] sigma, V = [[0,-1],[p,0]] sigma^{-1}, and the
    block-diagonal alternating gram of [[0,1],[-1,0]] blocks."""
    if p < 3:
        raise SSModError("standard module requires p >= 3")
    W = make_witt(p, n)
    z, o = W.zero(), W.one()
    N = 2 * g
    Fm = [[z] * N for _ in range(N)]
    Vm = [[z] * N for _ in range(N)]
    Gm = [[z] * N for _ in range(N)]
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        Fm[a][b] = o
        Fm[b][a] = W.elt(-p, 0)
        Vm[a][b] = W.elt(-1, 0)
        Vm[b][a] = W.elt(p, 0)
        Gm[a][b] = o
        Gm[b][a] = W.elt(-1, 0)
    M = DieudonneModule(W, g, SemilinearMap(Fm, 1), SemilinearMap(Vm, -1))
    return M, QuasiPolarization(Gm)


# ---------------------------------------------------------------------------
# Linear algebra over Z/p^n

def _val(x, p, n):
    if x == 0:
        return n
    v = 0
    while x % p == 0 and v < n:
        x //= p
        v += 1
    return v


def kernel_mod_prime_power(rows, p, n):
    """Kernel of an integer matrix over Z/p^n.

    Returns (generators, exponents): generators[i] is a vector with
    annihilator p^(n - exponents[i]); exponents[i] = n means a free
    generator.  Local Smith reduction (every minimal-valuation entry divides
    the rest, so one pass per pivot suffices).
    """
    pn = p ** n
    A = [[x % pn for x in row] for row in rows]
    r = len(A)
    c = len(A[0]) if r else 0
    V = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    diag_vals = []
    k = 0
    while k < min(r, c):
        # locate min-valuation entry in A[k:, k:]
        best = None
        bv = n
        for i in range(k, r):
            Ai = A[i]
            for j in range(k, c):
                if Ai[j]:
                    v = _val(Ai[j], p, n)
                    if v < bv:
                        bv = v
                        best = (i, j)
                        if v == 0:
                            break
            if best and bv == 0:
                break
        if best is None:
            break
        i0, j0 = best
        if i0 != k:
            A[k], A[i0] = A[i0], A[k]
        if j0 != k:
            for row in A:
                row[k], row[j0] = row[j0], row[k]
            V[k], V[j0] = V[j0], V[k]
        piv = A[k][k]
        u = piv // (p ** bv)
        u_inv = pow(u, -1, pn)
        # clear column k below/above
        for i in range(r):
            if i == k or A[i][k] == 0:
                continue
            q = ((A[i][k] // (p ** bv)) * u_inv) % pn
            Ai, Ak = A[i], A[k]
            for j in range(k, c):
                Ai[j] = (Ai[j] - q * Ak[j]) % pn
        # clear row k to the right (column ops, tracked in V)
        for j in range(k + 1, c):
            if A[k][j] == 0:
                continue
            q = ((A[k][j] // (p ** bv)) * u_inv) % pn
            for i in range(r):
                A[i][j] = (A[i][j] - q * A[i][k]) % pn
            Vk, Vj = V[k], V[j]
            for t in range(c):
                Vj[t] = (Vj[t] - q * Vk[t]) % pn
        diag_vals.append(bv)
        k += 1
    gens = []
    exps = []
    for j, v in enumerate(diag_vals):
        if v > 0:
            gens.append([(x * (p ** (n - v))) % pn for x in V[j]])
            exps.append(v)
    for j in range(len(diag_vals), c):
        gens.append(list(V[j]))
        exps.append(n)
    return gens, exps


# Note: V rows (not columns) carry the column transforms, because column op
# "col_j -= q col_k" on A corresponds to the same op on the coordinate
# expression x = V^T x'; storing V row-major makes V[j] the j-th new column.


class EndomorphismBasis:
    """Basis of End(M) over Z/p^n, as twist-0 SemilinearMaps."""

    def __init__(self, module, basis, free_rank, torsion):
        self.module = module
        self.basis = basis
        self.free_rank = free_rank
        self.torsion = torsion  # list of (generator, annihilator exponent)


def endomorphism_ring(M):
    """Solve g.F = F.g and g.V = V.g over Z/p^n in the 2*(2g)^2 coordinate
    unknowns; returns the kernel basis as twist-0 maps."""
    W = M.witt
    N = M.rank
    p, n = W.p, W.n
    A = M.F.matrix
    B = M.V.matrix
    unknowns = []
    for i in range(N):
        for j in range(N):
            for part in (0, 1):
                unknowns.append((i, j, part))
    rows_count = 2 * N * N * 2
    cols = []
    z = W.zero()
    for (i, j, part) in unknowns:
        G = [[z] * N for _ in range(N)]
        G[i][j] = W.elt(1, 0) if part == 0 else W.elt(0, 1)
        # residuals of the two commutation conditions
        R1 = wmat_sub(wmat_mul(G, A), wmat_mul(A, wmat_sigma(G, 1)))
        R2 = wmat_sub(wmat_mul(G, B), wmat_mul(B, wmat_sigma(G, 1)))
        col = []
        for R in (R1, R2):
            for row in R:
                for x in row:
                    col.append(x.a)
                    col.append(x.b)
        cols.append(col)
    rows = [[cols[u][r] for u in range(len(unknowns))] for r in range(rows_count)]
    gens, exps = kernel_mod_prime_power(rows, p, n)
    basis = []
    torsion = []
    free_rank = 0
    for gen, e in zip(gens, exps):
        G = [[z] * N for _ in range(N)]
        for u, (i, j, part) in enumerate(unknowns):
            c = gen[u]
            if c:
                G[i][j] = G[i][j] + (W.elt(c, 0) if part == 0 else W.elt(0, c))
        smap = SemilinearMap(G, 0)
        if e == n:
            basis.append(smap)
            free_rank += 1
        else:
            torsion.append((smap, e))
    return EndomorphismBasis(M, basis, free_rank, torsion)


def closed_form_endo(W, x, y, g=1):
    """The g=1 closed-form endomorphism [[x, y], [-p sigma(y), sigma(x)]],
    block-diagonal for general g."""
    N = 2 * g
    z = W.zero()
    G = [[z] * N for _ in range(N)]
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        G[a][a] = x
        G[a][b] = y
        G[b][a] = W.elt(-W.p, 0) * sigma(y)
        G[b][b] = sigma(x)
    return SemilinearMap(G, 0)


# ---------------------------------------------------------------------------
# Truncated quaternion order W_n<pi>, pi^2 = -p, pi w = sigma(w) pi

class TruncQuat:
    """x + y*pi over W_n(F_{p^2}) (pi written on the right, matching the
    2x2 block shape [[x, y], [-p sigma(y), sigma(x)]])."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x
        self.y = y

    def __add__(self, other):
        return TruncQuat(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return TruncQuat(self.x - other.x, self.y - other.y)

    def __mul__(self, other):
        p = self.x.params.p
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        return TruncQuat(x1 * x2 - p * y1 * sigma(y2),
                         x1 * y2 + y1 * sigma(x2))

    def conj(self):
        return TruncQuat(sigma(self.x), -self.y)

    def is_zero(self):
        return self.x.is_zero() and self.y.is_zero()

    def __eq__(self, other):
        return isinstance(other, TruncQuat) and self.x == other.x and self.y == other.y

    def __repr__(self):
        return "TQ(%r, %r)" % (self.x, self.y)


def tq_mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def tq_mat_star(A):
    return [[A[j][i].conj() for j in range(len(A))] for i in range(len(A[0]))]


class GUStructure:
    """Membership and quaternionic coordinates for End(M, e0)^x."""

    def __init__(self, module, e0):
        self.module = module
        self.e0 = e0
        self.W = module.witt

    def commutes(self, T):
        return (compose(T, self.module.F) == compose(self.module.F, T)
                and compose(T, self.module.V) == compose(self.module.V, T))

    def similitude_factor(self, T):
        """gamma with T^T gram T = gamma gram, or None."""
        G = self.e0.gram
        S = wmat_mul(wmat_transpose(T.matrix), wmat_mul(G, T.matrix))
        gamma = None
        W = self.W
        for i in range(len(G)):
            for j in range(len(G)):
                if G[i][j].is_zero():
                    if not S[i][j].is_zero():
                        return None
                else:
                    cand = S[i][j] * G[i][j].inverse()
                    if gamma is None:
                        gamma = cand
                    elif gamma != cand:
                        return None
        if gamma is None or gamma.b != 0 or sigma(gamma) != gamma:
            return None
        return gamma

    def is_member(self, T):
        """(verdict, gamma).  Non-invertible T is reported, not fatal."""
        if T.twist != 0:
            return False, None
        if not self.commutes(T):
            return False, None
        if not wmat_det(T.matrix).is_unit():
            return False, None
        gamma = self.similitude_factor(T)
        if gamma is None or not gamma.is_unit():
            return False, None
        return True, gamma

    def phi(self, T):
        """Quaternionic coordinates: block (i,j) of T must have the shape
        [[x, y], [-p sigma(y), sigma(x)]]; returns the g x g TruncQuat
        matrix (x_ij + pi y_ij)."""
        W = self.W
        p = W.p
        g = self.module.g
        A = T.matrix
        out = []
        for i in range(g):
            row = []
            for j in range(g):
                x = A[2 * i][2 * j]
                y = A[2 * i][2 * j + 1]
                if (A[2 * i + 1][2 * j] != W.elt(-p, 0) * sigma(y)
                        or A[2 * i + 1][2 * j + 1] != sigma(x)):
                    raise SSModError("matrix is not in End(M): block (%d,%d) "
                                     "violates the closed form" % (i, j))
                row.append(TruncQuat(x, y))
            out.append(row)
        return out

    def gamma_via_phi(self, T):
        """gamma from phi(T)* phi(T) = gamma I, or None."""
        Q = self.phi(T)
        S = tq_mat_mul(tq_mat_star(Q), Q)
        g = len(Q)
        gamma = None
        for i in range(g):
            for j in range(g):
                if i != j:
                    if not S[i][j].is_zero():
                        return None
                else:
                    if gamma is None:
                        gamma = S[i][i]
                    elif gamma != S[i][i]:
                        return None
        if not gamma.y.is_zero() or gamma.x.b != 0:
            return None
        return gamma.x


def reduction_to_residue(T, module):
    """Induced map of a twist-0 endomorphism on M/FM, in the canonical coset
    basis (the images of the odd-index basis vectors)."""
    W = module.witt
    p = W.p
    g = module.g
    A = T.matrix
    # FM = span{e_{2i}, p e_{2i+1}}: T must carry it into itself
    for j in range(g):
        for i in range(g):
            if A[2 * i + 1][2 * j].a % p or A[2 * i + 1][2 * j].b % p:
                raise SSModError("map does not preserve FM")
    K = W.residue_field
    out = []
    for i in range(g):
        row = []
        for j in range(g):
            row.append(W.reduce_mod_p(A[2 * i + 1][2 * j + 1]))
        out.append(row)
    return out


def hermitian_on_quotient(module, e0):
    """Gram matrix of <x, y> = frobenius(e(x, Fy) mod p) on M/FM over
    F_{p^2}, in the canonical coset basis."""
    W = module.witt
    g = module.g
    N = module.rank
    K = W.residue_field
    out = []
    for i in range(g):
        row = []
        for j in range(g):
            x = [W.zero()] * N
            x[2 * i + 1] = W.one()
            y = [W.zero()] * N
            y[2 * j + 1] = W.one()
            val = e0.pair(x, module.F(y))
            row.append(ff.frobenius(W.reduce_mod_p(val)))
        out.append(row)
    return out


def verify_certificate(p, n, g):
    """Run the structural identities for the standard module; returns a list
    of (name, bool) plus convention notes for the CLI certificate."""
    M, e0 = standard_supersingular(p, n, g)
    W = M.witt
    N = M.rank
    checks = []
    pI0 = SemilinearMap(wmat_scalar(W, N, p), 0)
    checks.append(("FV = p", compose(M.F, M.V) == pI0))
    checks.append(("VF = p", compose(M.V, M.F) == pI0))
    FF2 = compose(M.F, M.F)
    checks.append(("F^2 = -p sigma^2",
                   FF2.twist == 2 and wmat_eq(FF2.matrix, wmat_scalar(W, N, -p))))
    G = e0.gram
    alt = all(G[i][j] == -G[j][i] for i in range(N) for j in range(N))
    checks.append(("gram alternating", alt))
    checks.append(("gram unimodular", wmat_det(G).is_unit()))
    # adjunction e(Fx, y) = sigma(e(x, Vy)) on the spanning set {e_i, w e_i}
    ok = True
    span = []
    for i in range(N):
        v = [W.zero()] * N
        v[i] = W.one()
        span.append(v)
        v2 = [W.zero()] * N
        v2[i] = W.omega()
        span.append(v2)
    for x in span:
        for y in span:
            if e0.pair(M.F(x), y) != sigma(e0.pair(x, M.V(y))):
                ok = False
    checks.append(("adjunction e(Fx,y) = sigma(e(x,Vy))", ok))
    endo = endomorphism_ring(M)
    checks.append(("End rank = 4g^2",
                   endo.free_rank == 4 * g * g and not endo.torsion))
    herm = hermitian_on_quotient(M, e0)
    K = W.residue_field
    ident = all(herm[i][j] == (K.one() if i == j else K.zero())
                for i in range(g) for j in range(g))
    checks.append(("hermitian on M/FM = identity", ident))
    notes = {
        "pairing_reading": "e(x,y) = y^T.gram.x",
        "hermitian_reading": "<x,y> = frobenius(e(x,Fy) mod p), "
                             "Frobenius applied after reduction mod p",
    }
    return checks, notes
