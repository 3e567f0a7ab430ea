"""Finite graded pieces of the total Weil algebra and operators on them."""

import logging
from collections.abc import Callable
from itertools import combinations, combinations_with_replacement

from sympy import Rational

from weilforge.algebra import linalg
from weilforge.algebra.element import Monomial, WeilElement
from weilforge.algebra.generators import GeneratorKind, generators
from weilforge.algebra.scalars import EXACT
from weilforge.algebra.total import Region, c_tot, classify_llorr, h_matrix
from weilforge.core.errors import HomotopyDegenerateError
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)

_EVEN_KINDS = (GeneratorKind.V2H, GeneratorKind.V2A, GeneratorKind.V3H, GeneratorKind.V3A)
_CONORMAL_ONLY = (GeneratorKind.V3H, GeneratorKind.V3A)


def enumerate_monomials(
    dim: int,
    *,
    total_degree: int,
    form_degree: int,
    theta_degree: int = 0,
    base_degree: int | None = None,
) -> list[Monomial]:
    """Undressed monomials with the given degrees, in canonical order."""
    even_degree = total_degree - form_degree
    if even_degree < 0 or form_degree > 2 * dim or theta_degree > 2 * dim:
        return []
    forms = generators(GeneratorKind.V1H, dim) + generators(GeneratorKind.V1A, dim)
    thetas = generators(GeneratorKind.V4H, dim) + generators(GeneratorKind.V4A, dim)
    if base_degree is None:
        even_parts = list(
            combinations_with_replacement(
                [g for kind in _EVEN_KINDS for g in generators(kind, dim)], even_degree
            )
        )
    else:
        conormal_degree = even_degree - base_degree
        if conormal_degree < 0:
            return []
        bases = generators(GeneratorKind.V2H, dim) + generators(GeneratorKind.V2A, dim)
        conormals = [g for kind in _CONORMAL_ONLY for g in generators(kind, dim)]
        even_parts = [
            left + right
            for left in combinations_with_replacement(bases, base_degree)
            for right in combinations_with_replacement(conormals, conormal_degree)
        ]
    result = []
    for even in even_parts:
        for odd in combinations(forms, form_degree):
            for theta in combinations(thetas, theta_degree):
                result.append(Monomial.of(*even, *odd, *theta))
    return sorted(result, key=lambda m: m.sort_key)


def enumerate_piece(  # noqa: PLR0913
    dim: int,
    *,
    form_degree: int,
    total_degree: int,
    hodge_type: int | None = None,
    augmentation: int | tuple[int, int] | None = None,
    theta_degree: int = 0,
    base_degree: int | None = None,
) -> list[Monomial]:
    """Dressed monomials of one graded piece of B•_tot (or L•⊗B•_tot)."""
    pieces = []
    for m in enumerate_monomials(
        dim,
        total_degree=total_degree,
        form_degree=form_degree,
        theta_degree=theta_degree,
        base_degree=base_degree,
    ):
        if isinstance(augmentation, tuple) and m.augmentation != augmentation:
            continue
        if isinstance(augmentation, int) and m.augmentation_degree != augmentation:
            continue
        for i in range(m.level + 1):
            dressed_m = m.with_dressing(i)
            if hodge_type is None or dressed_m.hodge_type == hodge_type:
                pieces.append(dressed_m)
    return sorted(pieces, key=lambda m: m.sort_key)


def operator_matrix(
    action: Callable[[WeilElement], WeilElement],
    source: list[Monomial],
    target: list[Monomial] | None = None,
) -> tuple[list[list], list[Monomial]]:
    """Matrix of ``action`` from ``source`` into ``target`` (default: image span)."""
    images = [action(WeilElement({m: 1})) for m in source]
    if target is None:
        seen = {y for image in images for y in image.support()}
        target = sorted(seen, key=lambda m: m.sort_key)
    index = {m: i for i, m in enumerate(target)}
    rows = [[0] * len(source) for _ in target]
    for column, image in enumerate(images):
        for y, c in image.items():
            if y not in index:
                raise ValueError(f"image term {y} outside the target piece")
            rows[index[y]][column] = c
    return rows, target


def standard_norm(
    action: Callable[[WeilElement], WeilElement], source: list[Monomial]
) -> float:
    """Operator norm for the standard metric: monomials and u_p orthonormal."""
    if not source:
        return 0.0
    rows, target = operator_matrix(action, source)
    return linalg.operator_norm(rows, len(source)) if target else 0.0


def h_spectrum(dim: int, k: int, n: int) -> list[Rational]:
    """Exact eigenvalues of h on (B¹_tot)^{n,-n} of augmentation degree ``k``."""
    basis = enumerate_piece(
        dim, form_degree=1, total_degree=k, hodge_type=n, augmentation=k, base_degree=0
    )
    values = linalg.exact_eigenvalues(h_matrix(basis, dim))
    if any(not value.is_rational for value in values):
        raise HomotopyDegenerateError(
            "h has a non-rational eigenvalue", details={"k": k, "n": n, "dim": dim}
        )
    return sorted(values)


def parity_vanishing(dim: int, k_max: int) -> ValidationResult:
    for k in range(1, k_max + 1):
        for n in range(-k - 1, k + 2):
            zero_piece = enumerate_piece(
                dim, form_degree=0, total_degree=k, hodge_type=n, base_degree=0
            )
            one_piece = enumerate_piece(
                dim, form_degree=1, total_degree=k, hodge_type=n, base_degree=0
            )
            regions = {classify_llorr(m) for m in one_piece}
            if (n + k) % 2:
                if zero_piece:
                    return failed("b0_nonzero", k=k, n=n, size=len(zero_piece))
                if Region.O in regions:
                    return failed("b1_o_nonzero", k=k, n=n)
            elif regions & {Region.LL, Region.RR}:
                return failed("b1_ll_rr_nonzero", k=k, n=n)
    return passed(k_max=k_max, dim=dim)


def verify_acyclicity(p: int, q: int, n_max: int, dim: int = 1) -> ValidationResult:
    """im C = ker C on (B•_tot)_{p,q} in total degrees up to ``n_max``.

    h = Cσ_tot + σ_totC must also be nonsingular on every piece, which is the
    contracting-homotopy certificate.
    """
    if p < 1 or q < 1:
        raise ValueError("acyclicity needs p >= 1 and q >= 1")
    checked = 0
    for total in range(p + q, n_max + 1):
        levels = range(0, p + q + 1)
        hodge_types = range(-(p + q) - total, p + q + total + 1)
        for n in hodge_types:
            pieces = {
                k: enumerate_piece(
                    dim,
                    form_degree=k,
                    total_degree=total,
                    hodge_type=n,
                    augmentation=(p, q),
                )
                for k in levels
            }
            if not any(pieces.values()):
                continue
            ranks = {}
            for k in levels:
                if not pieces[k]:
                    ranks[k] = 0
                    continue
                target = pieces.get(k + 1, [])
                rows, _ = operator_matrix(
                    lambda x: c_tot(x, dim=dim), pieces[k], target
                )
                ranks[k] = linalg.rank(rows, EXACT, len(pieces[k])) if target else 0
            for k in levels:
                kernel = len(pieces[k]) - ranks[k]
                image = ranks.get(k - 1, 0)
                if kernel != image:
                    return failed(
                        "not_exact", total=total, hodge_type=n, level=k,
                        kernel=kernel, image=image,
                    )
                if pieces[k]:
                    h_rank = linalg.rank(h_matrix(pieces[k], dim), EXACT, len(pieces[k]))
                    if h_rank != len(pieces[k]):
                        return failed(
                            "homotopy_singular", total=total, hodge_type=n, level=k
                        )
                checked += 1
    logger.debug("acyclicity (%d,%d) checked %d pieces", p, q, checked)
    return passed(checked=checked)
