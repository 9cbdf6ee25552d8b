"""Local Hecke double-coset decompositions at a prime ell.

Supports the minuscule coset types only: for GL_2, the type with
elementary divisors (1, ell); for GSp_2g, the type diag(1,..,1,ell,..,ell).
Everything is computed at finite precision: a right coset of the standard
maximal compact is identified with the sublattice of Z^n spanned by the
rows of a representative, and the canonical form is the row-style Hermite
normal form of that lattice.

For the symplectic type, cosets are in bijection with Lagrangian
(maximal isotropic) subspaces of F_ell^(2g) under the standard form
[[0, I], [-I, 0]]: the lattice attached to a Lagrangian L is the preimage
of L under reduction mod ell.  The count is cross-checked against the
brute-force Lagrangian enumeration `lagrangian_count`.
"""

from itertools import combinations, product

from .ff import SSModError, BudgetError
from .quatherm import j_standard, _is_prime


LAGRANGIAN_BUDGET = 10 ** 6


class CosetList:
    """Right-coset representatives for one double-coset type."""

    def __init__(self, group, ell, divisors, reps):
        self.group = group
        self.ell = ell
        self.divisors = tuple(divisors)
        self.reps = reps

    @property
    def count(self):
        return len(self.reps)

    def __repr__(self):
        return "CosetList(%s, ell=%d, divisors=%s, count=%d)" % (
            self.group, self.ell, self.divisors, self.count)


def decompose_gl2(ell, divisors=(0, 1)):
    """Right cosets of the GL_2 double coset with the given divisor type.

    Only exponent types (0, 0), (e, e), and (0, 1) are supported; the
    last gives the classical ell+1 representatives [[1, b], [0, ell]]
    for b in [0, ell) together with [[ell, 0], [0, 1]].
    """
    if not _is_prime(ell):
        raise SSModError("ell must be prime: %r" % (ell,))
    divisors = tuple(sorted(divisors))
    if len(divisors) != 2 or divisors[1] - divisors[0] > 2:
        raise SSModError("unsupported GL_2 coset type %s" % (divisors,))
    if divisors[0] == divisors[1]:
        e = divisors[0]
        return CosetList("gl2", ell, divisors, [[[ell ** e, 0], [0, ell ** e]]])
    if divisors != (0, 1):
        raise SSModError("unsupported GL_2 coset type %s" % (divisors,))
    reps = [[[1, b], [0, ell]] for b in range(ell)]
    reps.append([[ell, 0], [0, 1]])
    return CosetList("gl2", ell, divisors, reps)


def _rref_subspaces(n, k, ell):
    """All k-dimensional subspaces of F_ell^n as RREF basis row-matrices."""
    for pivots in combinations(range(n), k):
        free = []
        for r in range(k):
            for c in range(pivots[r] + 1, n):
                if c not in pivots:
                    free.append((r, c))
        for vals in product(range(ell), repeat=len(free)):
            M = [[0] * n for _ in range(k)]
            for r in range(k):
                M[r][pivots[r]] = 1
            for (r, c), v in zip(free, vals):
                M[r][c] = v
            yield M


def _is_isotropic(rows, ell, J):
    n = len(J)
    k = len(rows)
    for r in range(k):
        for s in range(r, k):
            t = sum(rows[r][a] * J[a][b] * rows[s][b]
                    for a in range(n) for b in range(n))
            if t % ell != 0:
                return False
    return True


def lagrangians(g, ell):
    """All Lagrangian subspaces of F_ell^(2g), as RREF basis matrices."""
    if not _is_prime(ell):
        raise SSModError("ell must be prime: %r" % (ell,))
    if ell ** (2 * g * g) > LAGRANGIAN_BUDGET:
        raise BudgetError("Lagrangian enumeration too large: g=%d ell=%d"
                          % (g, ell))
    J = j_standard(g)
    return [M for M in _rref_subspaces(2 * g, g, ell)
            if _is_isotropic(M, ell, J)]


def lagrangian_count(g, ell):
    """Number of Lagrangian subspaces, by exhaustive enumeration."""
    return len(lagrangians(g, ell))


def hnf(rows, n):
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns an n x n upper-triangular integer matrix with positive
    diagonal and off-diagonal entries reduced modulo the diagonal below
    them; this is the canonical basis of the (full-rank) row lattice.
    """
    rows = [list(r) for r in rows]
    out = []
    for c in range(n):
        # clear column c below the pivot by gcd steps
        while True:
            cands = [r for r in rows if r[c] != 0]
            if not cands:
                raise SSModError("row lattice is not full rank")
            piv = min(cands, key=lambda r: abs(r[c]))
            done = True
            for r in rows:
                if r is not piv and r[c] != 0:
                    q = r[c] // piv[c]
                    for t in range(n):
                        r[t] -= q * piv[t]
                    done = False
            if done:
                break
        rows = [r for r in rows if r is not piv and any(r)]
        if piv[c] < 0:
            piv = [-x for x in piv]
        out.append(piv)
    # reduce above-diagonal entries
    for c in range(n):
        for r in range(c):
            q = out[r][c] // out[c][c]
            if q:
                for t in range(n):
                    out[r][t] -= q * out[c][t]
    return out


def decompose_gsp(g, ell, divisors=None):
    """Right cosets for the GSp type diag(1,..,1,ell,..,ell).

    Representatives are the Hermite normal forms of the preimage lattices
    of Lagrangian subspaces of F_ell^(2g); these are pairwise distinct by
    canonicity and their number equals the Lagrangian count.
    """
    if divisors is None:
        divisors = (0,) * g + (1,) * g
    divisors = tuple(sorted(divisors))
    if g > 3 or ell > 7:
        raise SSModError("decompose_gsp supports g <= 3, ell <= 7")
    if divisors == (0,) * (2 * g):
        n = 2 * g
        return CosetList("gsp", ell, divisors,
                         [[[1 if r == c else 0 for c in range(n)]
                           for r in range(n)]])
    if divisors != (0,) * g + (1,) * g:
        raise SSModError("unsupported GSp coset type %s" % (divisors,))
    n = 2 * g
    reps = []
    seen = set()
    for L in lagrangians(g, ell):
        stack = [row[:] for row in L]
        for t in range(n):
            stack.append([ell if c == t else 0 for c in range(n)])
        R = hnf(stack, n)
        key = tuple(tuple(row) for row in R)
        assert key not in seen
        seen.add(key)
        reps.append(R)
    return CosetList("gsp", ell, divisors, reps)


def _minor_det(M, rows, cols):
    k = len(rows)
    if k == 1:
        return M[rows[0]][cols[0]]
    det = 0
    sign = 1
    for t in range(k):
        det += sign * M[rows[0]][cols[t]] * _minor_det(
            M, rows[1:], cols[:t] + cols[t + 1:])
        sign = -sign
    return det


def smith_type(M, ell, cap=8):
    """Elementary-divisor exponents of an integer matrix at ell, ascending.

    Uses the determinantal-divisor definition: the k-th exponent is the
    ell-valuation of gcd(k x k minors) minus that of the (k-1)-st; values
    are capped at `cap` (treating a vanishing gcd as infinite valuation).
    """
    n = len(M)
    prev = 0
    exps = []
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                d = _minor_det(M, rows, cols)
                g = _gcd(g, d)
        if g == 0:
            v = cap + prev
        else:
            v = 0
            while g % ell == 0 and v < cap + prev:
                g //= ell
                v += 1
        exps.append(min(v - prev, cap))
        prev = min(v, prev + cap)
    return tuple(exps)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a
