import pytest
from sympy import QQ_I, Rational
from weilforge.algebra import linalg
from weilforge.algebra.derivation import (
    Derivation,
    Parity,
    anticommutator,
    canonical_C,
    canonical_sigma,
    d_r,
    iota_conjugate,
)
from weilforge.algebra.element import Monomial, WeilElement, gen
from weilforge.algebra.generators import Generator, GeneratorKind, all_generators
from weilforge.algebra.scalars import EXACT, float_field
from weilforge.core.errors import MissingGeneratorImageError


@pytest.mark.parametrize(
    ("name", "kind", "index"),
    [
        ("z1", GeneratorKind.V2H, 1),
        ("zb2", GeneratorKind.V2A, 2),
        ("s3", GeneratorKind.V3H, 3),
        ("dzb1", GeneratorKind.V1A, 1),
        ("thb2", GeneratorKind.V4A, 2),
    ],
)
def test_generator_parse_reads_kind_and_index(name, kind, index):
    g = Generator.parse(name)
    assert g.kind is kind
    assert g.index == index
    assert g.name == name


@pytest.mark.parametrize("name", ["q1", "s", "dz0x", ""])
def test_generator_parse_rejects_unknown_names(name):
    with pytest.raises(ValueError):
        Generator.parse(name)


def test_generator_index_starts_at_one():
    with pytest.raises(ValueError):
        Generator(GeneratorKind.V2H, 0)


@pytest.mark.parametrize(
    ("name", "hodge", "augmentation", "total"),
    [
        ("z1", (0, 0), (0, 0), 1),
        ("s1", (1, -1), (1, 0), 1),
        ("sb1", (-1, 1), (0, 1), 1),
        ("dz1", (1, 0), (1, 0), 1),
        ("dzb1", (0, 1), (0, 1), 1),
        ("th1", (1, 0), (0, 0), 0),
    ],
)
def test_generator_gradings(name, hodge, augmentation, total):
    g = Generator.parse(name)
    assert g.hodge == hodge
    assert g.augmentation == augmentation
    assert g.total_degree == total


def test_odd_generators_anticommute():
    assert gen("dz1") * gen("dzb1") == -(gen("dzb1") * gen("dz1"))
    assert (gen("dz1") * gen("dz1")).is_zero()
    assert (gen("th1") * gen("th1")).is_zero()


def test_even_generators_commute():
    assert gen("s1") * gen("z1") == gen("z1") * gen("s1")
    assert gen("s1") * gen("dz1") == gen("dz1") * gen("s1")


def test_monomial_degrees():
    m = Monomial.of(*(Generator.parse(n) for n in ("z1", "zb1", "s1", "dz1", "th1")))
    assert m.total_degree == 4
    assert m.base_degree == 2
    assert m.conormal_degree == 1
    assert m.form_degree == 1
    assert m.theta_degree == 1
    assert m.augmentation == (2, 0)
    assert m.hodge == (3, -1)


def test_real_structure_is_antilinear_involution():
    x = gen("z1").scale(QQ_I(0, 1)) + gen("s1") * gen("dzb1")
    assert x.real_structure() == gen("zb1").scale(QQ_I(0, -1)) + gen("sb1") * gen("dz1")
    assert x.real_structure().real_structure() == x


def test_twisted_real_structure_on_conormals():
    assert gen("s1").twisted_real_structure() == -gen("sb1")
    assert gen("z1").twisted_real_structure() == gen("zb1")


def test_iota_counts_conormal_factors():
    assert (gen("s1") * gen("s1")).iota() == gen("s1") * gen("s1")
    assert (gen("s1") * gen("z1")).iota() == -(gen("s1") * gen("z1"))


def test_filters_by_degree():
    x = gen("s1") + gen("z1") * gen("s1") * gen("dz1")
    assert x.truncate(1) == gen("s1")
    assert x.augmentation_part(2) == gen("z1") * gen("s1") * gen("dz1")
    assert x.total_part(3) == gen("z1") * gen("s1") * gen("dz1")


def test_dressed_product_adds_indices():
    left = WeilElement.monomial(Generator.parse("dz1"), dressing=0)
    right = WeilElement.monomial(Generator.parse("dzb1"), dressing=1)
    (m,) = (left * right).support()
    assert m.dressing == 1
    assert m.level == 2
    assert (left * right).project() == gen("dz1") * gen("dzb1")


def test_dressed_times_undressed_form_is_rejected():
    left = WeilElement.monomial(Generator.parse("dz1"), dressing=0)
    with pytest.raises(ValueError):
        left * gen("dzb1")


def test_elements_are_unhashable():
    with pytest.raises(TypeError):
        hash(gen("z1"))


def test_exact_mode_rejects_floats():
    with pytest.raises(TypeError):
        WeilElement.scalar(0.5)


def test_float_mode_drops_values_below_tolerance():
    field = float_field(1e-10)
    m = gen("z1").support()[0]
    assert WeilElement({m: 1e-12}, field).is_zero()
    assert not WeilElement({m: 1e-8}, field).is_zero()


def test_canonical_c_and_sigma_square_to_zero():
    c = canonical_C(1)
    sigma = canonical_sigma(1)
    for g in all_generators(1):
        x = WeilElement.generator(g)
        assert c(c(x)).is_zero()
        assert sigma(sigma(x)).is_zero()


def test_anticommutator_of_c_and_sigma_counts_conormals_and_forms():
    bracket = anticommutator(canonical_C(1), canonical_sigma(1), all_generators(1))
    for name in ("s1", "sb1", "dz1", "dzb1"):
        assert bracket.image(Generator.parse(name)) == gen(name)
    assert bracket.image(Generator.parse("z1")).is_zero()
    assert bracket.parity is Parity.EVEN


def test_leibniz_rule_on_even_powers():
    c = canonical_C(1)
    assert c(gen("s1") * gen("s1")) == (gen("s1") * gen("dz1")).scale(2)


def test_d_r_sends_conormals_to_theta():
    dr = d_r(1)
    assert dr(gen("s1")) == gen("th1")
    assert dr(gen("sb1")) == gen("thb1")
    assert dr(gen("dz1")).is_zero()


def test_missing_image_raises():
    derivation = Derivation(Parity.ODD, {}, frozenset(), "X")
    with pytest.raises(MissingGeneratorImageError):
        derivation(gen("z1"))


def test_iota_conjugate_of_c_is_minus_c():
    c = canonical_C(1)
    conjugated = iota_conjugate(c, 1)
    assert conjugated(gen("s1")) == -c(gen("s1"))
    assert conjugated(gen("sb1")) == -c(gen("sb1"))


def test_solve_system_exact():
    solution = linalg.solve_system([[1, 1], [1, -1]], [2, 0], EXACT, 2)
    assert solution.consistent is True
    assert solution.free_parameters == 0
    assert solution.values == [QQ_I(1, 0), QQ_I(1, 0)]


def test_solve_system_reports_inconsistency_and_freedom():
    assert linalg.solve_system([[1], [1]], [1, 2], EXACT, 1).consistent is False
    assert linalg.solve_system([[1, 1]], [1], EXACT, 2).free_parameters == 1


def test_nullspace_and_rank():
    assert linalg.rank([[1, 1], [2, 2]], EXACT, 2) == 1
    assert linalg.nullspace([[1, 1]], EXACT, 2) == [[QQ_I(-1, 0), QQ_I(1, 0)]]


def test_operator_norm_is_largest_singular_value():
    assert linalg.operator_norm([[3, 0], [0, 1]], 2) == pytest.approx(3.0)


@pytest.mark.parametrize(
    ("rows", "expected"),
    [
        ([[2, 5], [0, 3]], [Rational(2), Rational(3)]),
        ([[0, 1], [1, 0]], [Rational(-1), Rational(1)]),
        ([[QQ_I(1, 0), QQ_I(0, 1)], [QQ_I(0, -1), QQ_I(1, 0)]], [Rational(0), Rational(2)]),
    ],
)
def test_exact_eigenvalues(rows, expected):
    assert sorted(linalg.exact_eigenvalues(rows)) == expected
