import pytest
from weilforge.algebra.element import WeilElement
from weilforge.algebra.generators import Generator, GeneratorKind, degree_one_generators
from weilforge.services.brute_force import brute_force_polarization, brute_force_solve
from weilforge.services.connection_solver import solve
from weilforge.services.examples import builtin_example
from weilforge.services.kahler import levi_civita
from weilforge.services.polarization_solver import solve_polarization

BRUTE_FORCE_ORDER = 3
ANTIHOLOMORPHIC_KINDS = (GeneratorKind.V2A, GeneratorKind.V3A, GeneratorKind.V1A)


def gamma_of(name: str):
    return levi_civita(builtin_example(name, 1, BRUTE_FORCE_ORDER + 1))


def flip_antiholomorphic(x: WeilElement) -> WeilElement:
    terms = {}
    for m, c in x.items():
        count = sum(e for g, e in m.factors() if g.kind in ANTIHOLOMORPHIC_KINDS)
        terms[m] = -c if count % 2 else c
    return WeilElement(terms, x.field)


@pytest.fixture(scope="module")
def recursive_solution(fs_gamma):
    return solve(fs_gamma, BRUTE_FORCE_ORDER)


@pytest.mark.parametrize("name", ["flat", "fubini-study", "poincare"])
def test_brute_force_connection_matches_recursion(name):
    gamma = gamma_of(name)
    brute = brute_force_solve(gamma, BRUTE_FORCE_ORDER)
    recursive = solve(gamma, BRUTE_FORCE_ORDER)
    assert brute.diagnostics["brute_force"] is True
    for k in range(2, BRUTE_FORCE_ORDER + 1):
        for g in degree_one_generators(1):
            assert brute.image(k, g) == recursive.image(k, g)


def test_poincare_is_fubini_study_with_zb_negated():
    fs = solve(gamma_of("fubini-study"), BRUTE_FORCE_ORDER)
    poincare = solve(gamma_of("poincare"), BRUTE_FORCE_ORDER)
    s, sb = Generator.parse("s1"), Generator.parse("sb1")
    assert not fs.image(2, s).is_zero()
    for k in range(1, BRUTE_FORCE_ORDER + 1):
        assert poincare.image(k, s) == flip_antiholomorphic(fs.image(k, s))
        assert poincare.image(k, sb) == -flip_antiholomorphic(fs.image(k, sb))


def test_brute_force_polarization_matches_recursion(recursive_solution, fs_metric):
    brute = brute_force_polarization(recursive_solution, fs_metric)
    recursive = solve_polarization(recursive_solution, fs_metric)
    assert brute.diagnostics == {"brute_force": True}
    for k in range(BRUTE_FORCE_ORDER + 1):
        assert brute.omega[k] == recursive.omega[k]


def test_brute_force_is_limited_to_one_dimension(flat_gamma_2d):
    with pytest.raises(ValueError):
        brute_force_solve(flat_gamma_2d, 2)


def test_brute_force_is_limited_in_order(fs_gamma):
    with pytest.raises(ValueError):
        brute_force_solve(fs_gamma, BRUTE_FORCE_ORDER + 1)
