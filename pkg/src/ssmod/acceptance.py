"""End-to-end verification suite tying all modules together.

Each check function returns (ok, detail).  `run_all` executes every check
(or a named subset) and reports a table; the CLI `selftest` subcommand and
the test suite both drive these functions, so there is a single source of
truth for what the package promises.
"""

import random
import time
from fractions import Fraction

from . import ff
from .ff import BudgetError
from .qexp import tau_mod
from .sslocus import (
    build_sigma, hecke_matrix, eigensystems, eigensystems_bruteforce,
    galois_closure_check, descend_eigenvector, gl2_action,
    permutation_matrix, raise_level, supersingular_classes, eichler_mass,
    _gl2_elements,
)
from .dieudonne import (
    standard_supersingular, GUStructure, closed_form_endo, compose,
    tq_mat_mul, verify_certificate, SemilinearMap, reduction_to_residue,
)
from .wittring import sigma as w_sigma
from .ellcurve import (
    canonical_model, count_points, point_sample, frobenius_point,
    torsion_basis, ell_subgroups, velu, find_isomorphism, CompositeMap,
    isogeny_type, ker_coker_check,
)
from . import quatherm as qh
from . import localhecke as lh

ELLS = (2, 3, 5, 7)


def _system_keys(systems):
    out = {}
    for s in systems:
        key = (tuple(a.to_int() for a in s.values), s.values[0].params.m)
        out[key] = out.get(key, 0) + s.multiplicity
    return out


def check_eigensystem_serre():
    """Level-1 weight-0 eigensystems match Eisenstein plus tau mod p."""
    t0 = time.time()
    sig = build_sigma(11, 1)
    mats = [hecke_matrix(sig, l, 0) for l in ELLS]
    got = _system_keys(eigensystems(mats))
    eis = tuple((1 + l) % 11 for l in ELLS)
    tau = tuple(tau_mod(l, 11) for l in ELLS)
    if got != {(eis, 1): 1, (tau, 1): 1}:
        return False, "p=11 eigensystems %r" % (got,)
    if time.time() - t0 >= 10:
        return False, "p=11 run exceeded 10 s"
    sig = build_sigma(13, 1)
    mats = [hecke_matrix(sig, l, 0) for l in ELLS]
    got = _system_keys(eigensystems(mats))
    one = tuple((1 + l) % 13 for l in ELLS)
    if got != {(one, 1): 1}:
        return False, "p=13 expected the single Eisenstein system, got %r" % (got,)
    for p in (17, 19, 23):
        sig = build_sigma(p, 1)
        mats = [hecke_matrix(sig, l, 0) for l in ELLS]
        got = _system_keys(eigensystems(mats))
        oracle = dict(eigensystems_bruteforce(mats))
        if got != oracle:
            return False, "p=%d mismatch vs brute force: %r vs %r" % (
                p, got, oracle)
    return True, "p in {11,13,17,19,23}, ells %s" % (ELLS,)


def check_dieudonne_certificates():
    """Structural identities of the standard modules over W_n(F_p2)."""
    t0 = time.time()
    for p in (3, 5, 7, 11):
        for n in (1, 2, 3, 4):
            for g in (1, 2, 3):
                checks, _ = verify_certificate(p, n, g)
                bad = [name for name, ok in checks if not ok]
                if bad:
                    return False, "(p,n,g)=(%d,%d,%d): %s" % (p, n, g, bad)
    # phi multiplicativity on 200 accepted similitude samples
    M, e0 = standard_supersingular(5, 3, 1)
    W = M.witt
    gu = GUStructure(M, e0)
    rng = random.Random(11)
    done = 0
    while done < 200:
        S = closed_form_endo(W, W.elt(rng.randrange(W.pn), rng.randrange(W.pn)),
                             W.elt(rng.randrange(W.pn), rng.randrange(W.pn)))
        T = closed_form_endo(W, W.elt(rng.randrange(W.pn), rng.randrange(W.pn)),
                             W.elt(rng.randrange(W.pn), rng.randrange(W.pn)))
        okS, gS = gu.is_member(S)
        okT, gT = gu.is_member(T)
        if not (okS and okT):
            continue
        ST = compose(S, T)
        okST, gST = gu.is_member(ST)
        if not (okST and gST == gS * gT):
            return False, "similitude factor not multiplicative"
        P = tq_mat_mul(gu.phi(S), gu.phi(T))
        if P[0][0] != gu.phi(ST)[0][0]:
            return False, "phi not multiplicative"
        done += 1
    # residue surjectivity, exhaustive at p = 3, g = 1: every unit of F_9
    # is the image of the similitude diag(sigma(w), w), w = [lambda]
    M, e0 = standard_supersingular(3, 2, 1)
    W = M.witt
    gu = GUStructure(M, e0)
    K = W.residue_field
    hit = set()
    for lam_i in range(9):
        lam = K.from_int(lam_i)
        if lam == K.zero():
            continue
        w = W.from_residue(lam)
        T = SemilinearMap([[w_sigma(w), W.zero()], [W.zero(), w]], 0)
        ok, _gamma = gu.is_member(T)
        if not ok:
            return False, "residue witness not a similitude for %r" % (lam,)
        R = reduction_to_residue(T, M)
        hit.add(R[0][0].to_int())
    want = {K.from_int(i).to_int() for i in range(9)} - {0}
    if hit != want:
        return False, "residue map not surjective: hit %r" % (sorted(hit),)
    dt = time.time() - t0
    if dt >= 60:
        return False, "certificates exceeded 60 s (%.1f s)" % dt
    return True, "48 certificates, 200 phi samples, exhaustive residue (%.1f s)" % dt


def check_mass_counts():
    """Eichler mass (p-1)/24 and the level-3 orbit count at p = 11."""
    for p in (11, 13, 17, 19, 23, 31, 37):
        classes = supersingular_classes(p)
        mass = Fraction(*eichler_mass(classes))
        if mass != Fraction(p - 1, 24):
            return False, "p=%d mass %s" % (p, mass)
    sig = build_sigma(11, 3)
    if len(sig.points) != 20:
        return False, "|Sigma(3)| = %d at p=11" % len(sig.points)
    return True, "p in {11,...,37}; |Sigma(3)|=20 at p=11"


def check_hecke_module():
    """Commutativity, row sums, weight periodicity, equivariance, squares."""
    cases = [(11, 1, (2, 3, 5, 7), (0, 12)), (11, 3, (2, 5), (0, 2)),
             (13, 1, (2, 3), (0, 4))]
    for p, N, ells, ks in cases:
        sig = build_sigma(p, N)
        for k in ks:
            mats = [hecke_matrix(sig, l, k).matrix for l in ells]
            for i in range(len(mats)):
                for j in range(i + 1, len(mats)):
                    if ff.mat_mul(mats[i], mats[j]) != \
                            ff.mat_mul(mats[j], mats[i]):
                        return False, "T_%d, T_%d do not commute (p=%d,N=%d,k=%d)" \
                            % (ells[i], ells[j], p, N, k)
    sig3 = build_sigma(11, 3)
    K = sig3.K
    for ell in (2, 5):
        T = hecke_matrix(sig3, ell, 0)
        for row in T.matrix:
            s = K.zero()
            for x in row:
                s = s + x
            if s != K.elt(ell + 1):
                return False, "row sum != %d at N=3" % (ell + 1)
    if hecke_matrix(sig3, 2, 7).matrix != hecke_matrix(sig3, 2, 7 + 120).matrix:
        return False, "weight periodicity failed"
    rng = random.Random(3)
    T2 = hecke_matrix(sig3, 2, 0)
    for g in rng.sample(_gl2_elements(3), 5):
        P = permutation_matrix(sig3, gl2_action(sig3, g))
        if ff.mat_mul(P, T2.matrix) != ff.mat_mul(T2.matrix, P):
            return False, "GL_2(Z/3) equivariance failed for %r" % (g,)
    sig1 = build_sigma(11, 1)
    rl = raise_level(sig3, sig1)
    P = [[K.one() if rl[i] == j else K.zero() for j in range(len(sig1.points))]
         for i in range(len(sig3.points))]
    T2_1 = hecke_matrix(sig1, 2, 0)
    if ff.mat_mul(T2.matrix, P) != ff.mat_mul(P, T2_1.matrix):
        return False, "raise-level square failed"
    return True, "commuting pairs, row sums, periodicity, equivariance, square"


def check_galois_descent():
    """Eigensystem batches are Frobenius-closed and descend exactly."""
    for p in (19, 23):
        sig = build_sigma(p, 1)
        mats = [hecke_matrix(sig, l, 0) for l in (2, 3)]
        systems = eigensystems(mats)
        closed, orbits = galois_closure_check(systems)
        if not closed:
            return False, "p=%d batch not Frobenius-closed" % p
        for orb in orbits:
            us, coeffs = descend_eigenvector(systems[orb[0]],
                                             [h.matrix for h in mats])
            if not us or not coeffs:
                return False, "p=%d descent produced no vector" % p
    return True, "p in {19,23}: closure and exact descended eigenvectors"


def check_hermitian_diagonalization():
    """50 seeded positive forms per g in {2,3} reach the identity exactly."""
    B = qh.build_algebra(11)
    rng = random.Random(42)
    failures = 0
    for g in (2, 3):
        for _ in range(50):
            form = qh.random_positive_form(B, g, rng)
            try:
                M = qh.hermitian_diagonalize(form)
            except BudgetError:
                failures += 1
                continue
            chk = qh.qmat_mul(qh.qmat_star(M), qh.qmat_mul(form.gram, M))
            if not qh.qmat_eq(chk, qh.qmat_identity(B, g)):
                return False, "diagonalization inexact at g=%d" % g
    if failures:
        return False, "%d norm-equation bound exhaustions" % failures
    return True, "100 forms diagonalized exactly, 0 bound exhaustions"


def check_similitude_conjugacy():
    """Permutation conjugation takes split similitudes into GSp_2g."""
    for g in range(1, 7):
        P = qh.conjugator(g)
        n = 2 * g
        Jt = qh.j_blocks(g)
        J = qh.j_standard(g)
        T = [[sum(P[t][r] * Jt[t][s] * P[s][c]
                  for t in range(n) for s in range(n))
              for c in range(n)] for r in range(n)]
        if T != J:
            return False, "conjugator identity failed at g=%d" % g
    B = qh.build_algebra(11)
    for (g, ell, m) in ((2, 3, 2), (2, 5, 2), (3, 3, 2)):
        K = ff.make_field(ell, m)
        algK = qh.algebra_over_field(B, K)
        sp = qh.SplitModel(algK, K)
        rng = random.Random(7)
        for _ in range(100):
            M = qh.sample_gu(algK, g, rng)
            ok, gamma = qh.is_gu(M, algK)
            if not ok:
                return False, "sample not a similitude (g=%d,q=%d^%d)" % (g, ell, m)
            T = qh.gu_to_gsp(sp, M)
            ok2, gamma2 = qh.is_gsp(T, sp.L, g)
            if not (ok2 and gamma2 == sp._lift(gamma)):
                return False, "GSp membership/factor failed (g=%d,q=%d^%d)" % (
                    g, ell, m)
    return True, "g<=6 identity; 100 samples each for (2,9),(2,25),(3,9)"


def check_local_degrees():
    """Coset counts match enumeration oracles and isogeny kernel types."""
    for ell in (2, 3, 5, 7, 11, 13):
        if lh.decompose_gl2(ell).count != ell + 1:
            return False, "gl2 count wrong at ell=%d" % ell
    for (g, ell) in ((1, 2), (1, 3), (1, 5), (1, 7), (2, 2), (2, 3),
                     (2, 5), (3, 2)):
        if lh.decompose_gsp(g, ell).count != lh.lagrangian_count(g, ell):
            return False, "gsp count mismatch at (g,ell)=(%d,%d)" % (g, ell)
    # GL_2 cosets <-> ell-subgroup kernels at p = 11 by Smith-type matching
    K = ff.make_field(11, 2)
    E = canonical_model(K.elt(0))
    for ell in (2, 3):
        cosets = lh.decompose_gl2(ell)
        coset_types = sorted(lh.smith_type(R, ell) for R in cosets.reps)
        subs = ell_subgroups(E, ell)
        if len(subs) != cosets.count:
            return False, "kernel count != coset count at ell=%d" % ell
        tb = torsion_basis(E, ell)
        kernel_types = []
        for sub in subs:
            phi = velu(E, sub.kernel_poly)
            E2 = canonical_model(phi.codomain.j_invariant())
            chi = CompositeMap([phi, find_isomorphism(phi.codomain, E2)])
            tb2 = torsion_basis(E2, ell)
            kernel_types.append(isogeny_type(chi, tb, tb2, ell, 1))
        if sorted(kernel_types) != coset_types:
            return False, "Smith types differ at ell=%d: %r vs %r" % (
                ell, sorted(kernel_types), coset_types)
    return True, "gl2 ell<=13; gsp oracle pairs; kernel matching p=11"


def check_kernel_cokernel():
    """|ker| = |coker| on ell^n torsion for seeded isogenies."""
    rng = random.Random(9)
    done = 0
    for p in (11, 13):
        K = ff.make_field(p, 2)
        classes = supersingular_classes(p)
        for ell in (2, 3):
            for n in (1, 2):
                if done >= 20:
                    break
                cls = rng.choice(classes)
                E = canonical_model(K.from_int(cls.j.to_int()))
                subs = ell_subgroups(E, ell)
                phi1 = velu(E, rng.choice(subs).kernel_poly)
                E1 = canonical_model(phi1.codomain.j_invariant())
                maps = [phi1, find_isomorphism(phi1.codomain, E1)]
                if n == 2:
                    subs1 = ell_subgroups(E1, ell)
                    phi2 = velu(E1, rng.choice(subs1).kernel_poly)
                    E2 = canonical_model(phi2.codomain.j_invariant())
                    maps += [phi2, find_isomorphism(phi2.codomain, E2)]
                    cod = E2
                else:
                    cod = E1
                chi = CompositeMap(maps)
                tb = torsion_basis(E, ell ** n)
                tb2 = torsion_basis(cod, ell ** n)
                kk, cc = ker_coker_check(chi, tb, tb2)
                if kk != cc:
                    return False, "|ker|=%d != |coker|=%d (p=%d,ell=%d,n=%d)" \
                        % (kk, cc, p, ell, n)
                done += 1
    # top up to 20 with fresh seeds at p = 11, ell = 2
    K = ff.make_field(11, 2)
    classes = supersingular_classes(11)
    while done < 20:
        cls = rng.choice(classes)
        E = canonical_model(K.from_int(cls.j.to_int()))
        subs = ell_subgroups(E, 2)
        phi1 = velu(E, rng.choice(subs).kernel_poly)
        E1 = canonical_model(phi1.codomain.j_invariant())
        chi = CompositeMap([phi1, find_isomorphism(phi1.codomain, E1)])
        tb = torsion_basis(E, 2)
        tb2 = torsion_basis(E1, 2)
        kk, cc = ker_coker_check(chi, tb, tb2)
        if kk != cc:
            return False, "|ker| != |coker| in top-up sample"
        done += 1
    return True, "20 seeded isogenies, p in {11,13}, ell in {2,3}, n <= 2"


def check_canonical_models():
    """(p+1)^2 points and Frobenius acting as -p on every class, p <= 23."""
    for p in (5, 7, 11, 13, 17, 19, 23):
        K = ff.make_field(p, 2)
        big = ff.make_field(p, 4)
        for cls in supersingular_classes(p):
            E = canonical_model(K.from_int(cls.j.to_int()))
            if count_points(E) != (p + 1) ** 2:
                return False, "point count wrong at p=%d, j=%r" % (p, cls.j)
            EK = E.base_extend(big)
            for P in point_sample(EK, 20):
                if frobenius_point(EK, P, 2) != EK.neg(EK.mul(p, P)):
                    return False, "Frobenius != [-p] at p=%d, j=%r" % (p, cls.j)
    return True, "all classes for p <= 23, 20 sampled points each"


CHECKS = [
    ("eigensystem-serre", check_eigensystem_serre),
    ("dieudonne-certificates", check_dieudonne_certificates),
    ("mass-counts", check_mass_counts),
    ("hecke-module", check_hecke_module),
    ("galois-descent", check_galois_descent),
    ("hermitian-diagonalization", check_hermitian_diagonalization),
    ("similitude-conjugacy", check_similitude_conjugacy),
    ("local-degrees", check_local_degrees),
    ("kernel-cokernel", check_kernel_cokernel),
    ("canonical-models", check_canonical_models),
]


def run_all(names=None):
    results = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        t0 = time.time()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure with context
            ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
        results.append({"name": name, "ok": ok, "detail": detail,
                        "seconds": round(time.time() - t0, 2)})
    return results
