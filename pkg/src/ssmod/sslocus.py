"""The finite supersingular Hecke module: classes over F_{p^2}, level-N
structures, weight-k Hecke operators T_ell, GL_2(Z/N) action, level raising,
simultaneous eigensystems over extensions of F_p, and Galois descent of
eigenvectors.

Conventions (self-consistent set; recorded because several sides are free):
  * a level structure is an isomorphism alpha: E[N] -> (Z/N)^2, stored as
    its matrix M in the fixed torsion basis (alpha(coords v) = M v);
  * Aut(E) acts by alpha -> alpha o f, i.e. M -> M A_f on the right;
    points are stored as the lex-least matrix in the orbit;
  * GL_2(Z/N) acts by alpha -> g o alpha, i.e. M -> g M on the left;
  * an order-ell subgroup C sends M -> M B_C^{-1}, where B_C is the matrix
    of the normalized quotient map chi_C = iota o psi_C on N-torsion;
  * the weight-k factor of T_ell for subgroup C is u_iota^{-k} times the
    stabilizer average of u_f^{k}, with all exponents multiplied by the
    global WEIGHT_SIGN.
WEIGHT_SIGN = +1 is fixed empirically, not derived: with it, the weight-12
module at p = 11 contains the discriminant-form eigensystem in its standard
central normalization a_ell = ell * tau(ell) mod 11, and the weight-k
Eisenstein system appears as ell^{(k-10)/2} (1 + ell); the sign -1 variant
produces the inverse twists.  At k = 0 both conventions coincide and the
eigensystems are the untwisted (1 + ell) and tau(ell) mod p.
"""

from . import ff
from .ellcurve import (
    CompositeMap, automorphisms, canonical_model, curve_from_j,
    ell_subgroups, find_isomorphism, is_supersingular, torsion_basis, velu,
)
from .errors import SSModError, BudgetError

WEIGHT_SIGN = 1

CLASS_SCAN_LIMIT = 60


class SSClass:
    """One supersingular isomorphism class over F_{p^2}."""

    def __init__(self, index, j, model, auts):
        self.index = index
        self.j = j
        self.model = model
        self.auts = auts
        self.aut_order = len(auts)


def supersingular_classes(p):
    """All supersingular classes, sorted by lex order of j."""
    if p > CLASS_SCAN_LIMIT:
        raise BudgetError("class scan limited to p <= %d" % CLASS_SCAN_LIMIT)
    K = ff.make_field(p, 2)
    out = []
    for i in range(K.q):
        j = K.from_int(i)
        E = curve_from_j(j)
        if is_supersingular(E):
            model = canonical_model(j)
            out.append(SSClass(len(out), j, model, automorphisms(model)))
    return out


def eichler_mass(classes):
    """(numerator, denominator) of sum 1/|Aut|, in lowest terms."""
    from fractions import Fraction
    m = sum(Fraction(1, c.aut_order) for c in classes)
    return (m.numerator, m.denominator)


# ---------------------------------------------------------------------------
# Matrices mod N

def _mat_mul_mod(A, B, N):
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(2)) % N
                       for j in range(2)) for i in range(2))


def _mat_inv_mod(A, N):
    det = (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % N
    from math import gcd
    if gcd(det, N) != 1:
        raise SSModError("matrix not invertible mod %d" % N)
    di = pow(det, -1, N)
    return ((A[1][1] * di % N, -A[0][1] * di % N),
            (-A[1][0] * di % N, A[0][0] * di % N))


def _gl2_elements(N):
    from math import gcd
    out = []
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    if gcd(a * d - b * c, N) == 1:
                        out.append(((a, b), (c, d)))
    return out


def _mat_norm(A, N):
    return tuple(tuple(x % N for x in row) for row in A)


# ---------------------------------------------------------------------------
# Sigma sets


class SigmaPoint:
    def __init__(self, class_index, alpha, eta_class):
        self.class_index = class_index
        self.alpha = alpha          # orbit-representative matrix mod N
        self.eta_class = eta_class  # representative differential scalar (1)


class SigmaSet:
    """Orbit representatives of (class, level-N structure) pairs, with the
    per-class automorphism data needed for Hecke matrices."""

    def __init__(self, p, N):
        from math import gcd
        if N < 1 or gcd(N, p) != 1:
            raise SSModError("level must be coprime to p")
        self.p = p
        self.N = N
        self.K = ff.make_field(p, 2)
        self.classes = supersingular_classes(p)
        self.bases = {}      # class index -> TorsionBasis of E[N]
        self.aut_data = {}   # class index -> list of (A_f mod N, u_f)
        if N > 1:
            for c in self.classes:
                tb = torsion_basis(c.model, N)
                self.bases[c.index] = tb
                data = []
                for f in c.auts:
                    iP = tb.dlog(f((tb.P[0], tb.P[1])))
                    iQ = tb.dlog(f((tb.Q[0], tb.Q[1])))
                    A = ((iP[0], iQ[0]), (iP[1], iQ[1]))
                    data.append((A, f.u))
                self.aut_data[c.index] = data
        else:
            I = ((1, 0), (0, 1))
            for c in self.classes:
                self.aut_data[c.index] = [(I, f.u) for f in c.auts]
        self.points = []
        self._lookup = {}
        if N == 1:
            for c in self.classes:
                self._lookup[(c.index, ((0, 0), (0, 0)))] = len(self.points)
                self.points.append(SigmaPoint(c.index, ((0, 0), (0, 0)),
                                              self.K.one()))
        else:
            gl2 = _gl2_elements(N)
            for c in self.classes:
                seen = set()
                reps = []
                for M in gl2:
                    if M in seen:
                        continue
                    orbit = set()
                    for A, _u in self.aut_data[c.index]:
                        orbit.add(_mat_mul_mod(M, A, N))
                    rep = min(orbit)
                    for Mo in orbit:
                        seen.add(Mo)
                    reps.append((rep, orbit))
                reps.sort(key=lambda t: t[0])
                for rep, orbit in reps:
                    idx = len(self.points)
                    for Mo in orbit:
                        self._lookup[(c.index, Mo)] = idx
                    self.points.append(SigmaPoint(c.index, rep, self.K.one()))
        self._isogeny_cache = {}

    def point_index(self, class_index, M):
        if self.N == 1:
            M = ((0, 0), (0, 0))
        return self._lookup[(class_index, _mat_norm(M, self.N))]

    def orbit_rep(self, class_index, M):
        return self.points[self.point_index(class_index, M)].alpha

    # -- Hecke data ---------------------------------------------------------

    def _class_of_j(self, j):
        for c in self.classes:
            if c.j == j:
                return c
        raise SSModError("quotient left the supersingular locus")

    def isogeny_data(self, ell):
        """Per class: list over order-ell subgroups C of
        (target class index, B_C matrix mod N, u_iota in F_{p^2})."""
        if ell in self._isogeny_cache:
            return self._isogeny_cache[ell]
        if self.N % ell == 0 or ell == self.p:
            raise SSModError("ell must be prime to p N")
        data = {}
        for c in self.classes:
            rows = []
            for sub in ell_subgroups(c.model, ell):
                psi = velu(c.model, sub.kernel_poly)
                tgt = self._class_of_j(psi.codomain.j_invariant())
                iota = find_isomorphism(psi.codomain, tgt.model)
                chi = CompositeMap([psi, iota])
                if self.N > 1:
                    tb_s = self.bases[c.index]
                    tb_t = self.bases[tgt.index]
                    iP = tb_t.dlog(chi((tb_s.P[0], tb_s.P[1])))
                    iQ = tb_t.dlog(chi((tb_s.Q[0], tb_s.Q[1])))
                    B = ((iP[0], iQ[0]), (iP[1], iQ[1]))
                else:
                    B = ((1, 0), (0, 1))
                rows.append((tgt.index, B, iota.u))
            data[c.index] = rows
        self._isogeny_cache[ell] = data
        return data


def build_sigma(p, N=1):
    return SigmaSet(p, N)


# ---------------------------------------------------------------------------
# Hecke matrices


class HeckeMatrix:
    def __init__(self, sigma, ell, k, matrix, brandt=False):
        self.sigma = sigma
        self.ell = ell
        self.k = k
        self.matrix = matrix   # rows/cols indexed by sigma.points, over F_{p^2}
        self.brandt = brandt


def hecke_matrix(sigma, ell, k, brandt=False):
    """T_ell in weight k on the level-N module, acting on functions:
    (T f)(x) = sum over order-ell subgroups C of f(x/C).  Entry (x, y)
    accumulates the weight-k differential factor over the subgroups C of x
    with quotient point y, averaged over the automorphisms matching the
    target orbit representative."""
    K = sigma.K
    period = K.q - 1
    k = k % period
    n = len(sigma.points)
    M = [[K.zero() for _ in range(n)] for _ in range(n)]
    data = sigma.isogeny_data(ell)
    inv_cache = {}
    for s_idx, pt in enumerate(sigma.points):
        ci = pt.class_index
        for (ti, B, u_iota) in data[ci]:
            if sigma.N > 1:
                key = (ti, B)
                if key not in inv_cache:
                    inv_cache[key] = _mat_inv_mod(B, sigma.N)
                MC = _mat_mul_mod(pt.alpha, inv_cache[key], sigma.N)
            else:
                MC = pt.alpha
            t_idx = sigma.point_index(ti, MC)
            rep = sigma.points[t_idx].alpha
            # automorphisms of the target carrying M_C to the representative
            total = K.zero()
            count = 0
            for A, u_f in sigma.aut_data[ti]:
                if sigma.N == 1 or _mat_mul_mod(MC, A, sigma.N) == rep:
                    total = total + (u_f * u_iota.inverse()) ** (WEIGHT_SIGN * k)
                    count += 1
            if count == 0:
                raise SSModError("orbit bookkeeping failure")
            contrib = total * K.elt(count).inverse()
            M[s_idx][t_idx] = M[s_idx][t_idx] + contrib
    if brandt:
        # conjugate by the diagonal of automorphism orders (normalization
        # variant; eigensystems are unchanged)
        w = [K.elt(sigma.classes[pt.class_index].aut_order)
             for pt in sigma.points]
        M = [[M[i][j] * w[i] * w[j].inverse() for j in range(n)]
             for i in range(n)]
    return HeckeMatrix(sigma, ell, k, M, brandt)


def gl2_action(sigma, g):
    """The permutation of sigma points induced by g in GL_2(Z/N), as a list
    perm with perm[i] = index of g . point_i."""
    N = sigma.N
    _mat_inv_mod(g, N)  # raises if g not invertible
    perm = []
    for pt in sigma.points:
        Mg = _mat_mul_mod(g, pt.alpha, N) if N > 1 else pt.alpha
        perm.append(sigma.point_index(pt.class_index, Mg))
    return perm


def permutation_matrix(sigma, perm):
    K = sigma.K
    n = len(perm)
    P = [[K.zero() for _ in range(n)] for _ in range(n)]
    for i, t in enumerate(perm):
        P[t][i] = K.one()
    return P


def raise_level(sigma_high, sigma_low):
    """The surjection Sigma(N') -> Sigma(N) for N | N' (same p), induced by
    multiplication by d = N'/N on torsion.  Returns the index map."""
    Np, N = sigma_high.N, sigma_low.N
    if Np % N != 0:
        raise SSModError("levels must be nested")
    d = Np // N
    out = []
    if N == 1:
        for pt in sigma_high.points:
            out.append(sigma_low.point_index(pt.class_index, ((0, 0), (0, 0))))
        return out
    for pt in sigma_high.points:
        ci = pt.class_index
        tbh = sigma_high.bases[ci]
        tbl = sigma_low.bases[ci]
        EK = tbh.curve
        # coordinates of d*P', d*Q' in the level-N basis
        dP = EK.mul(d, tbh.P)
        dQ = EK.mul(d, tbh.Q)
        KL = tbl.field
        toL = lambda R: None if R is None else (ff.embed_preimage(R[0], KL)
                                                if R[0].params is not KL else R[0],)
        # express in the low-level basis after moving to its field
        def in_low(R):
            if R is None:
                return (0, 0)
            x, y = R
            if x.params is not KL:
                x = ff.embed_preimage(x, KL)
                y = ff.embed_preimage(y, KL)
            return tbl.dlog((x, y))
        iP = in_low(dP)
        iQ = in_low(dQ)
        X = ((iP[0], iQ[0]), (iP[1], iQ[1]))
        # alpha_low = alpha_high restricted: M_low = M' X^{-1} ... the level
        # structure matrix transforms by alpha'(v) = M' v, alpha(w) = M' X^{-1}applied
        ML = _mat_mul_mod(pt.alpha, _mat_inv_mod(X, N), N)
        out.append(sigma_low.point_index(ci, ML))
    return out


# ---------------------------------------------------------------------------
# Simultaneous eigensystems


def _try_descend_matrices(mats, K):
    """If every entry lies in the prime subfield, return the matrices over
    F_p (smaller fields make eigenvalue extensions cheaper)."""
    Fp = ff.make_field(K.p, 1)
    out = []
    for M in mats:
        rows = []
        for row in M:
            r = []
            for x in row:
                if any(c != 0 for c in x.coeffs[1:]):
                    return None
                r.append(Fp.elt(x.coeffs[0]))
            rows.append(r)
        out.append(rows)
    return out


def _mat_lift(M, L):
    return [[ff.embed(x, L) for x in row] for row in M]


def _vec_lift(v, L):
    return [ff.embed(x, L) for x in v]


def _restrict(M, basis):
    """Matrix of M on span(basis) in basis coordinates; basis columns must
    span an invariant subspace."""
    K = basis[0][0].params
    n = len(basis[0])
    d = len(basis)
    cols = []
    for b in basis:
        img = [sum((M[i][j] * b[j] for j in range(1, n)), M[i][0] * b[0])
               for i in range(n)]
        cols.append(img)
    # solve basis-matrix . x = img for each image
    A = [[basis[j][i] for j in range(d)] + [c[i] for c in cols]
         for i in range(n)]
    R, pivots = ff.rref(A)
    assert all(pc < d for pc in pivots), "subspace is not invariant"
    sol = [[K.zero()] * d for _ in range(d)]
    for r, pc in enumerate(pivots):
        for t in range(d):
            sol[pc][t] = R[r][d + t]
    # columns of the restriction
    return [[sol[i][t] for t in range(d)] for i in range(d)]


def _generalized_kernel_basis(M, a, power):
    """Basis of ker (M - a I)^power over the field of a."""
    K = a.params
    d = len(M)
    S = [[M[i][j] - (a if i == j else K.zero()) for j in range(d)]
         for i in range(d)]
    P = ff.mat_identity(K, d)
    for _ in range(power):
        P = ff.mat_mul(S, P)
    return ff.nullspace(P)


class Eigensystem:
    def __init__(self, ells, values, multiplicity, vector, k, N):
        self.ells = list(ells)
        self.values = list(values)   # a_ell, in some F_{p^m}
        self.multiplicity = multiplicity
        self.vector = vector         # common eigenvector over the same field
        self.k = k
        self.N = N

    def value_map(self):
        return dict(zip(self.ells, self.values))

    def field(self):
        return self.values[0].params if self.values else None


def _check_commuting(mats):
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            A, B = mats[i], mats[j]
            if ff.mat_mul(A, B) != ff.mat_mul(B, A):
                raise SSModError("Hecke matrices do not commute")


def eigensystems(hecke_mats):
    """Simultaneous generalized eigendecomposition of a commuting family.
    Returns Eigensystem objects with deterministic ordering."""
    assert hecke_mats
    sigma = hecke_mats[0].sigma
    ells = [h.ell for h in hecke_mats]
    k = hecke_mats[0].k
    mats = [h.matrix for h in hecke_mats]
    K = sigma.K
    desc = _try_descend_matrices(mats, K)
    if desc is not None:
        mats = desc
        K = mats[0][0][0].params
    _check_commuting(mats)
    n = len(mats[0])
    base_basis = [[K.one() if i == j else K.zero() for i in range(n)]
                  for j in range(n)]
    out = []

    def recurse(basis, rem_mats, values):
        if not rem_mats:
            out.append((values, basis))
            return
        M = rem_mats[0]
        L = basis[0][0].params
        R = _restrict(M, basis)
        cp, eig = ff.char_poly_eigendata(R)
        for (a, mult, minpoly) in eig:
            L2 = a.params
            if L2 is L:
                R2, basis2 = R, basis
                rem2 = rem_mats
            else:
                R2 = _mat_lift(R, L2)
                basis2 = [_vec_lift(b, L2) for b in basis]
                rem2 = [_mat_lift(X, L2) for X in rem_mats]
            gk = _generalized_kernel_basis(R2, a, len(R2))
            # new ambient basis vectors
            nb = []
            for v in gk:
                vec = [sum((basis2[t][i] * v[t] for t in range(1, len(v))),
                           basis2[0][i] * v[0]) for i in range(len(basis2[0]))]
                nb.append(vec)
            recurse(nb, rem2[1:], values + [a])

    recurse(base_basis, mats, [])

    systems = []
    for values, basis in out:
        L = basis[0][0].params
        # common plain eigenvector: intersect kernels of (T_i - a_i) on the
        # generalized eigenspace
        matsL = [_mat_lift(M, L) if M[0][0].params is not L else M
                 for M in mats]
        d = len(basis)
        stacked = []
        for M, a in zip(matsL, values):
            aL = ff.embed(a, L) if a.params is not L else a
            R = _restrict(M, basis)
            for i in range(d):
                stacked.append([R[i][j] - (aL if i == j else L.zero())
                                for j in range(d)])
        if d == 1:
            coords = [[L.one()]]
        else:
            coords = ff.nullspace(stacked)
        assert coords, "no common eigenvector in a joint eigenspace"
        v = [sum((basis[t][i] * coords[0][t] for t in range(1, d)),
                 basis[0][i] * coords[0][0]) for i in range(len(basis[0]))]
        # normalize: first nonzero coordinate = 1
        for x in v:
            if not x.is_zero():
                v = [y * x.inverse() for y in v]
                break
        valsL = [ff.embed(a, L) if a.params is not L else a for a in values]
        systems.append(Eigensystem(ells, valsL, d, v,
                                   k, sigma.N))
    systems.sort(key=lambda s: tuple((a.params.m, a.to_int())
                                     for a in s.values))
    total = sum(s.multiplicity for s in systems)
    assert total == n, "eigenspace dimensions do not fill the space"
    return systems


def eigensystems_bruteforce(hecke_mats, max_ext=3):
    """Independent oracle: scan field elements for eigenvalues of each
    matrix (via determinants), then intersect kernels for each tuple.
    Only intended for small dimensions."""
    sigma = hecke_mats[0].sigma
    ells = [h.ell for h in hecke_mats]
    mats = [h.matrix for h in hecke_mats]
    K = sigma.K
    desc = _try_descend_matrices(mats, K)
    if desc is not None:
        mats = desc
        K = mats[0][0][0].params
    n = len(mats[0])
    found = []
    for deg in range(1, max_ext + 1):
        L = ff.make_field(K.p, K.m * deg)
        if L.q > ff.SCAN_BUDGET:
            raise BudgetError("eigenvalue scan field too large")
        matsL = [_mat_lift(M, L) for M in mats]
        roots = []
        for M in matsL:
            r = []
            for i in range(L.q):
                a = L.from_int(i)
                S = [[M[x][y] - (a if x == y else L.zero())
                      for y in range(n)] for x in range(n)]
                if ff.mat_det(S).is_zero():
                    r.append(a)
            roots.append(r)
        import itertools
        for tup in itertools.product(*roots):
            stacked = []
            gen_stacked = []
            for M, a in zip(matsL, tup):
                S = [[M[x][y] - (a if x == y else L.zero())
                      for y in range(n)] for x in range(n)]
                stacked.extend(S)
                P = ff.mat_identity(L, n)
                for _ in range(n):
                    P = ff.mat_mul(S, P)
                gen_stacked.append(P)
            if not ff.nullspace(stacked):
                continue
            # joint generalized multiplicity
            inter = ff.mat_identity(L, n)
            basis = [[L.one() if i == j else L.zero() for i in range(n)]
                     for j in range(n)]
            big = []
            for P in gen_stacked:
                big.extend(P)
            mult = len(ff.nullspace(big))
            # minimal field of the tuple
            min_deg = 1
            for a in tup:
                dd = 1
                x = a
                while ff.frobenius(a, K.m * dd) != a:
                    dd += 1
                min_deg = max(min_deg, dd)
            if min_deg == deg:
                found.append((tuple(a.to_int() for a in tup), mult, deg))
    # drop duplicates
    seen = {}
    for key, mult, deg in found:
        seen[(key, deg)] = mult
    return seen


# ---------------------------------------------------------------------------
# Galois closure and descent


def galois_closure_check(systems):
    """Check the multiset of eigensystems is closed under entrywise x -> x^p
    and return the orbit partition (lists of system indices), plus a descent
    certificate for one representative per orbit."""
    keyed = {}
    for idx, s in enumerate(systems):
        key = tuple((a.params.m, a.to_int()) for a in s.values)
        keyed.setdefault(key, []).append(idx)

    def frob_key(s):
        return tuple((a.params.m, ff.frobenius(a).to_int()) for a in s.values)

    used = set()
    orbits = []
    closed = True
    for idx, s in enumerate(systems):
        if idx in used:
            continue
        orbit = [idx]
        used.add(idx)
        cur = s
        while True:
            fk = frob_key(cur)
            nxt = None
            for cand in keyed.get(fk, []):
                if cand == idx:
                    nxt = idx
                    break
                if cand not in used:
                    nxt = cand
                    break
            if nxt is None:
                closed = False
                break
            if nxt == idx:
                break
            used.add(nxt)
            orbit.append(nxt)
            cur = systems[nxt]
        orbits.append(orbit)
    return closed, orbits


def descend_eigenvector(system, matrices):
    """Galois descent: from a common eigenvector v over L = F_{p^m}, build
    the F_p-rational trace vectors u_i = sum_t Frob^t(w^i v), exhibit v as an
    exact L-combination of them, and verify T u = a u directly when the
    eigenvalues already lie in F_p.

    matrices: the Hecke matrices over F_{p^2} (entries must lie in F_p, as
    they do at weight 0).  Returns (us, coeffs) with us a list of F_p
    vectors and coeffs in L such that sum coeffs[i] * us[i] = v."""
    v = system.vector
    L = v[0].params
    p = L.p
    d = L.m
    Fp = ff.make_field(p, 1)
    w = L.gen()
    us = []
    for i in range(d):
        wiv = [w ** i * x for x in v]
        acc = [L.zero()] * len(v)
        for t in range(d):
            acc = [a + ff.frobenius(x, t) for a, x in zip(acc, wiv)]
        # entries are Frobenius-invariant, hence in F_p
        u = []
        for x in acc:
            assert all(c == 0 for c in x.coeffs[1:])
            u.append(Fp.elt(x.coeffs[0]))
        us.append(u)
    # solve sum c_i us[i] = v over L
    n = len(v)
    A = [[ff.embed(us[i][r], L) if d > 1 else L.elt(us[i][r].coeffs[0])
          for i in range(d)] + [v[r]] for r in range(n)]
    R, pivots = ff.rref(A)
    coeffs = [L.zero()] * d
    ok = True
    for r, pc in enumerate(pivots):
        if pc == d:
            ok = False
            break
        coeffs[pc] = R[r][d]
    assert ok, "eigenvector is not in the span of its trace vectors"
    recon = [L.zero()] * n
    for i in range(d):
        ui = [ff.embed(x, L) if d > 1 else L.elt(x.coeffs[0]) for x in us[i]]
        recon = [a + coeffs[i] * x for a, x in zip(recon, ui)]
    assert recon == v
    # descend the matrices to F_p for the direct verification
    matsFp = _try_descend_matrices(matrices, matrices[0][0][0].params)
    assert matsFp is not None, "matrices do not have prime-field entries"
    all_fp = all(all(c == 0 for c in a.coeffs[1:]) for a in system.values)
    if all_fp:
        # an F_p eigensystem: every trace vector is itself an eigenvector
        for M, a in zip(matsFp, system.values):
            aF = Fp.elt(a.coeffs[0])
            for u in us:
                if all(x.is_zero() for x in u):
                    continue
                assert ff.mat_vec(M, u) == [aF * x for x in u], \
                    "descended vector fails the eigen equation"
    else:
        # verify the reconstructed v over L against the lifted matrices
        for M, a in zip(matsFp, system.values):
            ML = [[ff.embed(x, L) for x in row] for row in M]
            aL = a if a.params is L else ff.embed(a, L)
            assert ff.mat_vec(ML, v) == [aL * x for x in v]
    return us, coeffs
