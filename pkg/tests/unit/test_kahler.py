import pytest
from sympy import QQ_I
from weilforge.algebra.derivation import canonical_C
from weilforge.algebra.element import WeilElement, gen
from weilforge.algebra.generators import Generator
from weilforge.core.errors import InsufficientOrderError, JetFileError, NotKahlerianError
from weilforge.services import jets
from weilforge.services.examples import builtin_example
from weilforge.services.kahler import (
    connection_derivation,
    covariant_derivative_of_metric,
    curvature_split,
    inject_curvature_20,
    inject_mixed,
    inject_torsion,
    kahler_form_from_metric,
    levi_civita,
    metric_conjugate,
    reduced_square,
    verify_kahlerian,
    with_theta,
)

DETECTOR_ORDER = 3


@pytest.mark.parametrize(
    ("name", "dim"),
    [
        ("flat", 1),
        ("fubini-study", 1),
        ("fubini-study", 2),
        ("poincare", 2),
        ("product", 2),
    ],
)
def test_builtin_examples_are_kahlerian(name, dim):
    metric = builtin_example(name, dim, 3)
    result = verify_kahlerian(levi_civita(metric))
    assert result.ok is True
    assert metric_conjugate(metric).g == metric.g


def test_builtin_example_rejects_unknown_names():
    with pytest.raises(JetFileError):
        builtin_example("sphere", 1, 3)


def test_product_example_needs_two_dimensions():
    with pytest.raises(JetFileError):
        builtin_example("product", 1, 3)


def test_flat_christoffel_symbols_vanish(flat_gamma_2d):
    for block in flat_gamma_2d.gamma:
        for row in block:
            assert all(not entry for entry in row)


def test_fubini_study_christoffel_lowest_term(fs_gamma):
    lowest = jets.homogeneous_part(fs_gamma.gamma[0][0][0], 1)
    assert lowest == jets.constant(1, -2) * jets.zb(1, 1)
    assert jets.homogeneous_part(fs_gamma.gamma[0][0][0], 0) == jets.jet_ring(1).zero


def test_levi_civita_needs_a_first_jet():
    with pytest.raises(InsufficientOrderError):
        levi_civita(builtin_example("flat", 1, 0))


def test_fubini_study_curvature_at_origin(fs_gamma):
    curvature = curvature_split(fs_gamma)
    assert not curvature.r20
    assert jets.homogeneous_part(curvature.r11[(0, 0, 0, 0)], 0) == jets.constant(1, -2)


@pytest.mark.parametrize(
    ("inject", "reason"),
    [
        (inject_torsion, "torsion_nonzero"),
        (inject_mixed, "holomorphy_violated"),
        (inject_curvature_20, "curvature_20_nonzero"),
    ],
)
def test_verify_kahlerian_detects_defects(flat_gamma_2d, inject, reason):
    result = verify_kahlerian(inject(flat_gamma_2d))
    assert result.ok is False
    assert result.reason == reason
    assert result.details["order"] == 0


def test_holomorphy_defect_reports_its_order(fs_gamma):
    broken = inject_mixed(fs_gamma, value=5, exponents=(1, 1))
    result = verify_kahlerian(broken)
    assert result.reason == "holomorphy_violated"
    assert result.details["message"] == "holomorphy violated at order 2"
    assert result.details["coefficient"] == "5"


def test_connection_derivation_refuses_non_kahlerian(flat_gamma_2d):
    with pytest.raises(NotKahlerianError):
        connection_derivation(inject_torsion(flat_gamma_2d))


def test_reduced_square_vanishes_exactly_for_kahlerian(fs_gamma, flat_gamma_2d):
    assert reduced_square(fs_gamma) == {}
    residuals = reduced_square(inject_torsion(flat_gamma_2d))
    assert "s1" in residuals
    assert residuals["s1"] == -(gen("dz1") * gen("dz2"))


def test_connection_derivation_first_order(fs_gamma):
    derivation = connection_derivation(fs_gamma)
    assert derivation(gen("z1")) == gen("dz1")
    image = derivation(gen("s1")).filter(lambda m: m.total_degree == 3)
    assert image == (gen("zb1") * gen("s1") * gen("dz1")).scale(2)


def test_kahler_form_of_flat_metric():
    form = kahler_form_from_metric(builtin_example("flat", 1, 2))
    expected = WeilElement.monomial(
        Generator.parse("th1"), Generator.parse("thb1"), coefficient=QQ_I(0, 1)
    )
    assert form == expected


def test_metric_is_parallel(fs_metric, fs_gamma):
    assert covariant_derivative_of_metric(fs_metric, fs_gamma).is_zero()


def test_with_theta_extends_by_minus_d_r():
    derivation = with_theta(canonical_C(1), 1)
    assert derivation(gen("th1")).is_zero()
    assert derivation(gen("s1") * gen("th1")) == gen("dz1") * gen("th1")


def kahler_gamma(name: str, dim: int):
    return levi_civita(builtin_example(name, dim, DETECTOR_ORDER))


DETECTOR_CORPUS = [
    pytest.param(lambda: kahler_gamma("flat", 1), True, id="flat-1"),
    pytest.param(lambda: kahler_gamma("flat", 2), True, id="flat-2"),
    pytest.param(lambda: kahler_gamma("fubini-study", 1), True, id="fs-1"),
    pytest.param(lambda: kahler_gamma("fubini-study", 2), True, id="fs-2"),
    pytest.param(lambda: kahler_gamma("fubini-study", 3), True, id="fs-3"),
    pytest.param(lambda: kahler_gamma("poincare", 1), True, id="poincare-1"),
    pytest.param(lambda: kahler_gamma("poincare", 2), True, id="poincare-2"),
    pytest.param(lambda: kahler_gamma("product", 2), True, id="product-2"),
    pytest.param(lambda: kahler_gamma("product", 3), True, id="product-3"),
    pytest.param(lambda: inject_torsion(kahler_gamma("flat", 2)), False, id="torsion-flat"),
    pytest.param(
        lambda: inject_torsion(kahler_gamma("fubini-study", 2), k=1, value=2),
        False,
        id="torsion-fs",
    ),
    pytest.param(
        lambda: inject_torsion(kahler_gamma("poincare", 2), i=1, j=0),
        False,
        id="torsion-poincare",
    ),
    pytest.param(
        lambda: inject_torsion(kahler_gamma("product", 2), k=1, value=3),
        False,
        id="torsion-product",
    ),
    pytest.param(lambda: inject_mixed(kahler_gamma("flat", 1)), False, id="mixed-flat"),
    pytest.param(
        lambda: inject_mixed(kahler_gamma("fubini-study", 1), exponents=(1, 0)),
        False,
        id="mixed-fs-order-1",
    ),
    pytest.param(
        lambda: inject_mixed(kahler_gamma("fubini-study", 1), value=5, exponents=(1, 1)),
        False,
        id="mixed-fs-order-2",
    ),
    pytest.param(
        lambda: inject_mixed(kahler_gamma("poincare", 1), exponents=(0, 1)),
        False,
        id="mixed-poincare",
    ),
    pytest.param(
        lambda: inject_mixed(kahler_gamma("product", 2), k=1, i=1, j=0),
        False,
        id="mixed-product",
    ),
    pytest.param(
        lambda: inject_curvature_20(kahler_gamma("flat", 2)), False, id="curvature-flat"
    ),
    pytest.param(
        lambda: inject_curvature_20(kahler_gamma("fubini-study", 2), k=1, i=1, direction=0),
        False,
        id="curvature-fs",
    ),
]


@pytest.mark.parametrize(("build", "kahlerian"), DETECTOR_CORPUS)
def test_reduced_square_detects_exactly_the_kahlerian_inputs(build, kahlerian):
    gamma = build()
    assert verify_kahlerian(gamma).ok is kahlerian
    assert (reduced_square(gamma) == {}) is kahlerian
