"""Integer q-expansion of the discriminant cusp form: tau coefficients from
q * prod_{n>=1} (1 - q^n)^24, used as an independent test oracle."""

from math import comb


def delta_coefficients(bound):
    """[tau(1), ..., tau(bound)] as exact integers (coefficients of
    q^1..q^bound in q * prod_{n>=1} (1 - q^n)^24)."""
    prec = bound  # work with coefficients of q^0..q^{bound-1} before the q shift
    poly = [0] * prec
    poly[0] = 1
    for n in range(1, prec):
        factor = {}
        k = 0
        while n * k < prec and k <= 24:
            factor[n * k] = (-1) ** k * comb(24, k)
            k += 1
        new = [0] * prec
        for e, c in factor.items():
            for i in range(prec - e):
                if poly[i]:
                    new[i + e] += c * poly[i]
        poly = new
    return poly


def tau(n):
    return delta_coefficients(n)[n - 1]


def tau_mod(n, p):
    return tau(n) % p
