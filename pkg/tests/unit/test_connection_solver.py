import pytest
from weilforge.algebra.element import gen
from weilforge.algebra.generators import Generator, degree_one_generators
from weilforge.algebra.scalars import float_field
from weilforge.core.errors import InsufficientOrderError, NotKahlerianError
from weilforge.services.connection_solver import (
    d2_identity_residual,
    flatness_residual,
    hodge_connection_series,
    iota_parity_check,
    linearity_residual,
    perturb,
    reality_residual,
    recovered_christoffel,
    reduction_identity,
    solve,
    totalized_norm_equality,
    weakly_hodge_audit,
)
from weilforge.services.examples import builtin_example
from weilforge.services.kahler import inject_torsion, levi_civita

PRODUCT_ORDER = 3


@pytest.fixture(params=["flat", "fubini-study", "poincare"])
def solution(request, flat_solution, fs_solution, poincare_solution):
    return {
        "flat": flat_solution,
        "fubini-study": fs_solution,
        "poincare": poincare_solution,
    }[request.param]


def test_solution_is_flat(solution):
    residual = flatness_residual(solution)
    assert residual["max_certified"] == 0.0
    assert residual["certified_total_degree"] == solution.order + 1
    assert solution.diagnostics["flatness"] == 0.0


def test_solution_is_linear(solution):
    assert linearity_residual(solution) == 0.0


def test_solution_is_real(solution):
    assert all(value == 0.0 for value in reality_residual(solution).values())


def test_solution_passes_structural_checks(solution):
    assert weakly_hodge_audit(solution).ok is True
    assert iota_parity_check(solution).ok is True
    assert reduction_identity(solution).ok is True


def test_second_order_matches_curvature(solution):
    assert d2_identity_residual(solution) == 0.0


def test_flat_metric_has_no_higher_terms(flat_solution):
    for k in range(2, flat_solution.order + 1):
        assert all(image.is_zero() for image in flat_solution.components[k].values())


def test_fubini_study_second_order(fs_solution):
    image = fs_solution.image(2, degree_one_generators(1)[0])
    expected = (
        gen("s1") * gen("s1") * gen("dzb1") + gen("s1") * gen("sb1") * gen("dz1")
    ).scale(2) / 3
    assert image.filter(lambda m: m.base_degree == 0) == expected


def test_components_shift_total_degree(fs_solution):
    table = fs_solution.table()
    assert (0, 0) in table
    assert (1, 0) in table
    assert (1, 2) in table
    assert (1, 1) not in table


def test_recovered_christoffel_matches_input(fs_solution, fs_gamma):
    recovered = recovered_christoffel(fs_solution)
    assert set(recovered) == {(0, 0, 0)}


def test_solve_refuses_low_order(fs_gamma):
    with pytest.raises(ValueError):
        solve(fs_gamma, 1)


def test_solve_refuses_orders_beyond_the_jet(fs_gamma):
    with pytest.raises(InsufficientOrderError):
        solve(fs_gamma, fs_gamma.order + 2)


def test_solve_refuses_non_kahlerian(flat_gamma_2d):
    with pytest.raises(NotKahlerianError) as excinfo:
        solve(inject_torsion(flat_gamma_2d), 2)
    assert str(excinfo.value) == "torsion nonzero"
    assert excinfo.value.exit_code == 3


def test_float_mode_agrees_with_exact(fs_gamma, fs_solution):
    approximate = solve(fs_gamma, 3, float_field(1e-12))
    for k in (2, 3):
        for g in degree_one_generators(1):
            difference = approximate.image(k, g) - fs_solution.image(k, g).truncate(4)
            assert difference.norm() < 1e-9


def test_perturbation_breaks_flatness(fs_solution):
    broken = perturb(fs_solution, 2, gen("s1") * gen("s1") * gen("dzb1"))
    assert flatness_residual(broken)["max_certified"] > 0


def test_perturbation_breaks_weak_hodge_property(fs_solution):
    broken = perturb(fs_solution, 2, gen("sb1") * gen("dz1"))
    result = weakly_hodge_audit(broken)
    assert result.ok is False
    assert result.reason == "not_weakly_hodge"
    assert result.details["order"] == 2


def test_perturbation_breaks_iota_parity(fs_solution):
    broken = perturb(fs_solution, 2, gen("z1") * gen("s1") * gen("dz1"))
    result = iota_parity_check(broken)
    assert result.ok is False
    assert result.reason == "iota_parity_violated"
    assert result.details["order"] == 2


def test_connection_series_norms(flat_solution, fs_solution):
    flat_norms = hodge_connection_series(flat_solution).norms()
    assert flat_norms[0] == pytest.approx(1.0)
    assert all(value == 0.0 for n, value in flat_norms.items() if n >= 1)
    fs_norms = hodge_connection_series(fs_solution).norms()
    assert fs_norms[1] == 0.0
    assert fs_norms[2] > 0


def test_totalized_norms_equal_plain_norms(fs_solution):
    result = totalized_norm_equality(fs_solution)
    assert result["norms"]
    assert result["max_difference"] == pytest.approx(0.0, abs=1e-9)


def test_product_example_keeps_the_flat_factor_flat():
    metric = builtin_example("product", 2, PRODUCT_ORDER + 1)
    solution = solve(levi_civita(metric), PRODUCT_ORDER)
    for name in ("s2", "sb2"):
        for k in range(2, PRODUCT_ORDER + 1):
            assert solution.image(k, Generator.parse(name)).is_zero()
    assert not solution.image(2, Generator.parse("s1")).is_zero()
    assert d2_identity_residual(solution) == 0.0
