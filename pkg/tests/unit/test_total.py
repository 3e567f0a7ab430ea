import logging

import pytest
from sympy import Rational
from weilforge.algebra.element import WeilElement
from weilforge.algebra.generators import Generator
from weilforge.algebra.pieces import (
    enumerate_monomials,
    enumerate_piece,
    h_spectrum,
    operator_matrix,
    parity_vanishing,
    standard_norm,
    verify_acyclicity,
)
from weilforge.algebra.total import (
    Region,
    c_tot,
    check_sigma_well_defined,
    classify_llorr,
    h_apply,
    h_invert,
    sigma_tot,
)


def dressed(name: str, index: int, coefficient=1) -> WeilElement:
    return WeilElement.monomial(Generator.parse(name), dressing=index, coefficient=coefficient)


@pytest.mark.parametrize(
    ("name", "index", "region"),
    [
        ("dz1", 0, Region.O),
        ("dzb1", 1, Region.O),
        ("dz1", 1, Region.LL),
        ("dzb1", 0, Region.RR),
    ],
)
def test_classify_llorr(name, index, region):
    (m,) = dressed(name, index).support()
    assert classify_llorr(m) is region


def test_classify_llorr_needs_a_dressing():
    (m,) = WeilElement.monomial(Generator.parse("dz1")).support()
    with pytest.raises(ValueError):
        classify_llorr(m)


def test_sigma_tot_by_region():
    assert sigma_tot(dressed("dz1", 0)) == dressed("s1", 0)
    assert sigma_tot(dressed("dz1", 1)).is_zero()
    assert sigma_tot(dressed("dzb1", 0)).is_zero()
    assert sigma_tot(dressed("dzb1", 1)) == -dressed("sb1", 0)


def test_sigma_tot_is_undefined_in_degree_zero():
    with pytest.raises(ValueError):
        sigma_tot(dressed("s1", 0))


def test_c_tot_on_dressed_conormals():
    assert c_tot(dressed("s1", 0), dim=1) == dressed("dz1", 0)
    assert c_tot(dressed("sb1", 0), dim=1) == -dressed("dzb1", 1)


def test_homotopy_acts_as_one_on_o_forms():
    x = dressed("dz1", 0)
    assert h_apply(x, dim=1) == x
    assert h_invert(x.scale(3), dim=1) == x.scale(3)


def test_homotopy_inverse_is_an_inverse():
    s = WeilElement.monomial(Generator.parse("s1"), Generator.parse("s1"), dressing=0)
    y = c_tot(s, dim=1)
    x = h_invert(y, dim=1)
    assert h_apply(x, dim=1) == y


def test_homotopy_inverse_logs_the_condition_number(caplog):
    caplog.set_level(logging.INFO, logger="weilforge.algebra.total")
    s = WeilElement.monomial(Generator.parse("s1"), Generator.parse("s1"), dressing=0)
    h_invert(c_tot(s, dim=1), dim=1)
    assert "h-solve on" in caplog.text
    assert "condition" in caplog.text


@pytest.mark.parametrize("dim", [1, 2])
def test_sigma_tot_is_well_defined(dim):
    result = check_sigma_well_defined(dim)
    assert result.ok is True
    assert result.details["checked"] > 0


def test_enumerate_monomials_counts():
    assert len(enumerate_monomials(1, total_degree=1, form_degree=1)) == 2
    assert len(enumerate_monomials(1, total_degree=2, form_degree=0)) == 10
    assert len(enumerate_monomials(1, total_degree=2, form_degree=0, base_degree=2)) == 3
    assert enumerate_monomials(1, total_degree=1, form_degree=3) == []


def test_enumerate_piece_filters_hodge_type():
    piece = enumerate_piece(1, form_degree=1, total_degree=1, hodge_type=1)
    assert [str(m) for m in piece] == ["dz1 (x) u0^(1)"]


def test_operator_matrix_rejects_a_small_target():
    source = enumerate_piece(1, form_degree=0, total_degree=1, hodge_type=1, base_degree=0)
    with pytest.raises(ValueError):
        operator_matrix(lambda x: c_tot(x, dim=1), source, [])


def test_standard_norm_of_c_on_conormals():
    source = [m for m in enumerate_monomials(1, total_degree=1, form_degree=0, base_degree=0)]
    assert standard_norm(lambda x: c_tot(x, dim=1), source) == pytest.approx(1.0)


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("n", [1, -1])
@pytest.mark.parametrize("k", [1, 3, 5])
def test_h_spectrum_on_odd_augmentation_is_k(dim, n, k):
    spectrum = h_spectrum(dim, k, n)
    assert spectrum
    assert all(isinstance(value, Rational) for value in spectrum)
    assert all(value == k for value in spectrum)


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("n", [1, -1])
@pytest.mark.parametrize("k", [2, 4, 6])
def test_h_spectrum_on_even_augmentation(dim, n, k):
    half = k // 2
    spectrum = h_spectrum(dim, k, n)
    assert spectrum
    assert set(spectrum) <= {Rational(half), Rational(half - 1)}


def test_h_spectrum_of_piece_four_contains_both_values():
    assert set(h_spectrum(1, 4, 1)) == {Rational(1), Rational(2)}


@pytest.mark.parametrize(("dim", "k_max"), [(1, 6), (2, 6)])
def test_parity_vanishing(dim, k_max):
    assert parity_vanishing(dim, k_max).ok is True


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_acyclicity_of_augmentation_pieces(p, q):
    result = verify_acyclicity(p, q, 4)
    assert result.ok is True
    if p + q <= 4:
        assert result.details["checked"] > 0


def test_acyclicity_needs_positive_augmentation():
    with pytest.raises(ValueError):
        verify_acyclicity(0, 1, 3)
