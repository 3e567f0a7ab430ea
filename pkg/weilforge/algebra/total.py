"""The total Weil algebra: ll/o/rr regions, σ_tot and the homotopy h = {C, σ_tot}."""

import logging
from enum import Enum
from functools import lru_cache

from weilforge.algebra import linalg
from weilforge.algebra.derivation import (
    Derivation,
    canonical_C,
    canonical_sigma,
    sigma_antiholomorphic,
    sigma_holomorphic,
)
from weilforge.algebra.element import Monomial, WeilElement
from weilforge.algebra.generators import GeneratorKind, generators
from weilforge.core.errors import HomotopyDegenerateError
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)


class Region(str, Enum):
    LL = "ll"
    O = "o"  # noqa: E741
    RR = "rr"


def classify_llorr(m: Monomial) -> Region:
    if m.dressing is None:
        raise ValueError(f"{m} is not dressed")
    if not 0 <= m.dressing <= m.level:
        raise ValueError(f"dressing u_{m.dressing} out of range for level {m.level}")
    b = m.antiholomorphic_forms
    if m.dressing == b:
        return Region.O
    return Region.LL if m.dressing > b else Region.RR


def _dimension(x: WeilElement) -> int:
    return max(
        (g.index for m, _ in x.items() for g, _ in m.factors()),
        default=1,
    )


@lru_cache(maxsize=16)
def _region_sigmas(dim: int) -> dict[Region, Derivation]:
    return {
        Region.O: canonical_sigma(dim),
        Region.LL: sigma_antiholomorphic(dim),
        Region.RR: sigma_holomorphic(dim),
    }


@lru_cache(maxsize=16)
def _c(dim: int) -> Derivation:
    return canonical_C(dim)


def _sigma_tot_terms(x: WeilElement, dim: int) -> WeilElement:
    sigmas = _region_sigmas(dim)
    result = WeilElement.zero(x.field)
    for m, c in x.items():
        if m.dressing is None:
            raise ValueError("sigma_tot acts on dressed elements only")
        if m.level == 0:
            continue
        piece = WeilElement({m: c}, x.field)
        result = result + sigmas[classify_llorr(m)](piece)
    return result


def sigma_tot(x: WeilElement, *, dim: int | None = None) -> WeilElement:
    """σ_l on ll, σ on o, σ_r on rr; lowers the B-degree by one."""
    if any(m.level == 0 for m, _ in x.items()):
        raise ValueError("σ_tot undefined on degree 0")
    return _sigma_tot_terms(x, dim or _dimension(x))


def c_tot(x: WeilElement, *, dim: int | None = None) -> WeilElement:
    return _c(dim or _dimension(x))(x)


def h_apply(x: WeilElement, *, dim: int | None = None) -> WeilElement:
    dim = dim or _dimension(x)
    return c_tot(_sigma_tot_terms(x, dim), dim=dim) + _sigma_tot_terms(
        c_tot(x, dim=dim), dim
    )


def _h_closure(support: list[Monomial], dim: int) -> list[Monomial]:
    basis = list(support)
    seen = set(basis)
    position = 0
    while position < len(basis):
        image = h_apply(WeilElement({basis[position]: 1}), dim=dim)
        for m in image.support():
            if m not in seen:
                seen.add(m)
                basis.append(m)
        position += 1
    return sorted(basis, key=lambda m: m.sort_key)


def h_matrix(basis: list[Monomial], dim: int) -> list[list]:
    index = {m: i for i, m in enumerate(basis)}
    rows = [[0] * len(basis) for _ in basis]
    for column, m in enumerate(basis):
        for target, c in h_apply(WeilElement({m: 1}), dim=dim).items():
            if target not in index:
                raise ValueError(f"h leaves the piece: {m} -> {target}")
            rows[index[target]][column] = c
    return rows


def h_invert(y: WeilElement, *, dim: int | None = None) -> WeilElement:
    """Solve h x = y on the graded piece spanned by the h-closure of y."""
    if not y:
        return y
    dim = dim or _dimension(y)
    basis = _h_closure(y.support(), dim)
    rows = h_matrix(basis, dim)
    rhs = [y.coefficient(m) for m in basis]
    solution = linalg.solve_system(rows, rhs, y.field, len(basis))
    if not solution.consistent or solution.free_parameters:
        raise HomotopyDegenerateError(
            "homotopy degenerate on this graded piece",
            details={"piece": [str(m) for m in basis]},
        )
    if logger.isEnabledFor(logging.INFO):
        logger.info(
            "h-solve on %d-dimensional piece, condition %.3g",
            len(basis),
            linalg.condition_number(rows),
        )
    return WeilElement(dict(zip(basis, solution.values, strict=True)), y.field)


def check_sigma_well_defined(dim: int) -> ValidationResult:
    """σ_tot on a dressed 2-form must not depend on how it is factored.

    Each dressed product of two 1-forms is split in every admissible way into
    dressed factors; odd Leibniz with the derivation of the product's region
    has to reproduce σ_tot of the product.
    """
    forms = [
        g for kind in (GeneratorKind.V1H, GeneratorKind.V1A) for g in generators(kind, dim)
    ]
    sigmas = _region_sigmas(dim)
    checked = 0
    for a_pos, a in enumerate(forms):
        for b in forms[a_pos + 1 :]:
            for total_index in range(3):
                product = WeilElement.monomial(a, b, dressing=total_index)
                expected = sigma_tot(product, dim=dim)
                sigma = sigmas[classify_llorr(product.support()[0])]
                for i in range(2):
                    j = total_index - i
                    if not 0 <= j <= 1:
                        continue
                    left = WeilElement.monomial(a, dressing=i)
                    right = WeilElement.monomial(b, dressing=j)
                    leibniz = sigma(left) * right - left * sigma(right)
                    checked += 1
                    if leibniz != expected:
                        return failed(
                            "sigma_not_well_defined",
                            product=str(product.support()[0]),
                            factoring=[str(left.support()[0]), str(right.support()[0])],
                        )
    return passed(checked=checked)
