"""Exact arithmetic for supersingular Hecke modules.

Submodules: ff (finite fields), wittring (truncated Witt vectors),
dieudonne (Dieudonne modules), ellcurve (elliptic curves and isogenies),
qexp (discriminant q-expansion oracle), sslocus (the supersingular Hecke
module and eigensystems), quatherm (quaternion hermitian forms),
localhecke (local double cosets), cli (command line), acceptance
(verification suite).
"""

__version__ = "0.1.0"
