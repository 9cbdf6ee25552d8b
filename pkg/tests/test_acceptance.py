"""End-to-end verification: one test per promised behavior.

These call the shared check functions in ssmod.acceptance, which the CLI
`selftest` subcommand also runs; each check returns (ok, detail) and any
failure message is surfaced in the assertion.
"""

from ssmod import acceptance


def _run(name):
    fn = dict(acceptance.CHECKS)[name]
    ok, detail = fn()
    assert ok, detail


def test_eigensystems_match_eisenstein_and_tau():
    _run("eigensystem-serre")


def test_dieudonne_structure_certificates():
    _run("dieudonne-certificates")


def test_mass_and_orbit_counts():
    _run("mass-counts")


def test_hecke_module_identities():
    _run("hecke-module")


def test_galois_descent_of_eigensystems():
    _run("galois-descent")


def test_hermitian_diagonalization_exact():
    _run("hermitian-diagonalization")


def test_similitude_conjugation_into_gsp():
    _run("similitude-conjugacy")


def test_local_coset_degrees_and_kernel_matching():
    _run("local-degrees")


def test_kernel_equals_cokernel():
    _run("kernel-cokernel")


def test_canonical_models_frobenius_minus_p():
    _run("canonical-models")
