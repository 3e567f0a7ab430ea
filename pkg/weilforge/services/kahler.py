"""Kähler input: Levi-Civita data, curvature split and the Kählerian detector."""

import logging
from dataclasses import replace

from sympy import QQ_I

from weilforge.algebra.derivation import Derivation, Parity, canonical_C, d_r
from weilforge.algebra.element import Monomial, WeilElement
from weilforge.algebra.generators import (
    FORM_KINDS,
    Generator,
    GeneratorKind,
    generators,
)
from weilforge.algebra.scalars import EXACT, ScalarField
from weilforge.core.errors import InsufficientOrderError, NotKahlerianError
from weilforge.services import jets
from weilforge.services.jets import ChristoffelJet, CurvatureJet, Jet, MetricJet
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)


def _lowest_term(f: Jet) -> tuple[int, str, str]:
    exponents, c = min(f.items(), key=lambda item: (sum(item[0]), item[0]))
    dim = f.ring.ngens // 2
    names = [f"z{i}" for i in range(1, dim + 1)] + [f"zb{i}" for i in range(1, dim + 1)]
    monomial = " ".join(
        name if e == 1 else f"{name}^{e}" for name, e in zip(names, exponents, strict=True) if e
    )
    return sum(exponents), monomial or "1", str(c)


def levi_civita(g: MetricJet) -> ChristoffelJet:
    """Γ^k_ij = Σ_l ∂_i g_{jl̄} g^{l̄k}, a jet of order N - 1."""
    if g.order < 1:
        raise InsufficientOrderError(
            "insufficient jet order", details={"metric_order": g.order}
        )
    order = g.order - 1
    inverse = jets.matrix_inverse(g.g, order)
    gamma = []
    for k in range(g.dim):
        block = []
        for i in range(g.dim):
            zi = jets.z(g.dim, i + 1)
            row = []
            for j in range(g.dim):
                entry = sum(
                    (g.g[j][l].diff(zi) * inverse[l][k] for l in range(g.dim)),
                    jets.jet_ring(g.dim).zero,
                )
                row.append(jets.truncate(entry, order))
            block.append(tuple(row))
        gamma.append(tuple(block))
    logger.debug("levi-civita jet of order %d for dim %d", order, g.dim)
    return ChristoffelJet(g.dim, order, tuple(gamma))


def metric_conjugate(g: MetricJet) -> MetricJet:
    rows = [
        [jets.conjugate(g.g[j][i]) for j in range(g.dim)] for i in range(g.dim)
    ]
    return MetricJet.from_rows(g.dim, g.order, rows)


def first_order_images(
    gamma: ChristoffelJet, field: ScalarField = EXACT
) -> dict[Generator, WeilElement]:
    """Images of D₁ on z, z̄, s and s̄ (no Kählerian check)."""
    dim = gamma.dim
    images: dict[Generator, WeilElement] = {}
    for zi, dzi in zip(
        generators(GeneratorKind.V2H, dim), generators(GeneratorKind.V1H, dim), strict=True
    ):
        images[zi] = WeilElement.generator(dzi, field)
    for zbi, dzbi in zip(
        generators(GeneratorKind.V2A, dim), generators(GeneratorKind.V1A, dim), strict=True
    ):
        images[zbi] = WeilElement.generator(dzbi, field)
    s = generators(GeneratorKind.V3H, dim)
    dz = generators(GeneratorKind.V1H, dim)
    dzb = generators(GeneratorKind.V1A, dim)
    for k in range(dim):
        image = WeilElement.zero(field)
        for i in range(dim):
            for j in range(dim):
                holomorphic = gamma.gamma[k][i][j]
                if holomorphic:
                    image = image - jets.to_element(holomorphic, field) * WeilElement.monomial(
                        s[i], dz[j], field=field
                    )
                mixed = gamma.mixed(k, i, j)
                if mixed:
                    image = image - jets.to_element(mixed, field) * WeilElement.monomial(
                        s[i], dzb[j], field=field
                    )
        images[s[k]] = image
        # D₁ commutes with ν' = ν∘ι* and ν'(s_k) = -s̄_k
        images[s[k].conjugate()] = -image.twisted_real_structure()
    return images


def first_order_derivation(gamma: ChristoffelJet, field: ScalarField = EXACT) -> Derivation:
    return Derivation(
        Parity.ODD, first_order_images(gamma, field), FORM_KINDS, "D1"
    )


def _curvature_tables(gamma: ChristoffelJet, order: int) -> CurvatureJet:
    dim = gamma.dim
    derivation = first_order_derivation(gamma)
    r20: dict = {}
    r11: dict = {}
    r02: dict = {}
    for k, sk in enumerate(generators(GeneratorKind.V3H, dim)):
        square = derivation(derivation(WeilElement.generator(sk)))
        for m, c in square.items():
            if m.base_degree > order:
                continue
            conormal = [g for g, _ in m.even if g.kind is GeneratorKind.V3H]
            if len(conormal) != 1 or len(m.odd) != 2:
                raise ValueError(f"unexpected curvature term {m}")
            a = conormal[0].index - 1
            first, second = m.odd
            base = WeilElement(
                {Monomial(tuple(item for item in m.even if item[0] is not conormal[0])): c}
            )
            key = (k, a, first.index - 1, second.index - 1)
            if first.kind is GeneratorKind.V1H and second.kind is GeneratorKind.V1H:
                table = r20
            elif first.kind is GeneratorKind.V1H:
                table = r11
            else:
                table = r02
            table[key] = table.get(key, jets.jet_ring(dim).zero) + jets.from_element(base, dim)
    return CurvatureJet(dim, order, r20, r11, r02)


def curvature_split(gamma: ChristoffelJet) -> CurvatureJet:
    """R = D₁∘D₁ on s_k, split by form type; certified to Taylor order N - 1."""
    if gamma.order < 1:
        raise InsufficientOrderError(
            "insufficient jet order", details={"christoffel_order": gamma.order}
        )
    return _curvature_tables(gamma, gamma.order - 1)


def verify_kahlerian(gamma: ChristoffelJet) -> ValidationResult:
    dim = gamma.dim
    for k in range(dim):
        for i in range(dim):
            for j in range(i + 1, dim):
                torsion = gamma.gamma[k][i][j] - gamma.gamma[k][j][i]
                if torsion:
                    order, monomial, coefficient = _lowest_term(torsion)
                    return failed(
                        "torsion_nonzero",
                        message="torsion nonzero",
                        component=[k + 1, i + 1, j + 1],
                        order=order,
                        monomial=monomial,
                        coefficient=coefficient,
                    )
    for k in range(dim):
        for i in range(dim):
            for j in range(dim):
                mixed = gamma.mixed(k, i, j)
                if mixed:
                    order, monomial, coefficient = _lowest_term(mixed)
                    return failed(
                        "holomorphy_violated",
                        message=f"holomorphy violated at order {order}",
                        component=[k + 1, i + 1, j + 1],
                        order=order,
                        monomial=monomial,
                        coefficient=coefficient,
                    )
    if gamma.order >= 1:
        curvature = _curvature_tables(gamma, gamma.order - 1)
        for key in sorted(curvature.r20):
            value = curvature.r20[key]
            if value:
                order, monomial, coefficient = _lowest_term(value)
                return failed(
                    "curvature_20_nonzero",
                    message=f"(2,0) curvature nonzero at order {order}",
                    component=[index + 1 for index in key],
                    order=order,
                    monomial=monomial,
                    coefficient=coefficient,
                )
    return passed(order=gamma.order, dim=dim)


def connection_derivation(gamma: ChristoffelJet, field: ScalarField = EXACT) -> Derivation:
    report = verify_kahlerian(gamma)
    if not report.ok:
        raise NotKahlerianError(report.details["message"], details=report.as_dict())
    return first_order_derivation(gamma, field)


def reduced_square(gamma: ChristoffelJet) -> dict[str, WeilElement]:
    """D̃∘D̃ on conormal generators for D̃ = C + ∇, modulo the ideal I.

    I is spanned by monomials of augmentation bidegree (≥2,≥1) or (≥1,≥2). The
    torsion and holomorphy block (no conormal factor) is certified to Taylor
    order N, the curvature block to N - 1. Empty when Γ is Kählerian.
    """
    dim = gamma.dim
    c = canonical_C(dim)
    reduced = Derivation(
        Parity.ODD,
        {
            g: image + c.image(g)
            for g, image in first_order_images(gamma).items()
        },
        FORM_KINDS,
        "C+D1",
    )
    residuals = {}
    for g in generators(GeneratorKind.V3H, dim) + generators(GeneratorKind.V3A, dim):
        square = reduced(reduced(WeilElement.generator(g)))

        def keep(m) -> bool:
            p, q = m.augmentation
            if (p >= 2 and q >= 1) or (p >= 1 and q >= 2):
                return False
            limit = gamma.order if m.conormal_degree == 0 else gamma.order - 1
            return m.base_degree <= limit

        residual = square.filter(keep)
        if residual:
            residuals[g.name] = residual
    return residuals


def kahler_form_from_metric(g: MetricJet, field: ScalarField = EXACT) -> WeilElement:
    """Ω₀ = i Σ g_{jk̄}(z) θ_j θ̄_k in Λ²(V₄)⊗B⁰."""
    theta = generators(GeneratorKind.V4H, g.dim)
    theta_bar = generators(GeneratorKind.V4A, g.dim)
    form = WeilElement.zero(field)
    for j in range(g.dim):
        for k in range(g.dim):
            if g.g[j][k]:
                form = form + jets.to_element(g.g[j][k], field) * WeilElement.monomial(
                    theta[j], theta_bar[k], field=field
                )
    return form.scale(QQ_I(0, 1) if field.exact else 1j)


def theta_images(derivation: Derivation, dim: int) -> dict[Generator, WeilElement]:
    """D(θ) = -dʳ(D(s)) and D(θ̄) = -dʳ(D(s̄)), forced by {D, dʳ} = 0."""
    dr = d_r(dim)
    images = {}
    for s, theta in zip(
        generators(GeneratorKind.V3H, dim) + generators(GeneratorKind.V3A, dim),
        generators(GeneratorKind.V4H, dim) + generators(GeneratorKind.V4A, dim),
        strict=True,
    ):
        images[theta] = -dr(derivation.image(s))
    return images


def with_theta(derivation: Derivation, dim: int) -> Derivation:
    images = dict(derivation.images)
    images.update(theta_images(derivation, dim))
    return Derivation(
        derivation.parity, images, derivation.zero_kinds, derivation.name, derivation.max_total
    )


def covariant_derivative_of_metric(g: MetricJet, gamma: ChristoffelJet) -> WeilElement:
    """∇ω computed as D₁(Ω₀), certified to Taylor order min(N_g - 1, N_Γ)."""
    limit = min(g.order - 1, gamma.order)
    derivation = with_theta(first_order_derivation(gamma), g.dim)
    image = derivation(kahler_form_from_metric(g))
    return image.filter(lambda m: m.base_degree <= limit)


def _with_entry(blocks, k: int, i: int, j: int, delta: Jet):
    return tuple(
        tuple(
            tuple(
                entry + delta if (kk, ii, jj) == (k, i, j) else entry
                for jj, entry in enumerate(row)
            )
            for ii, row in enumerate(block)
        )
        for kk, block in enumerate(blocks)
    )


def inject_torsion(
    gamma: ChristoffelJet, *, k: int = 0, i: int = 0, j: int = 1, value=1
) -> ChristoffelJet:
    """Add ``value`` to Γ^k_ij only, breaking the symmetry in (i, j)."""
    if gamma.dim < 2 or i == j:
        raise ValueError("torsion needs two distinct lower indices")
    delta = jets.constant(gamma.dim, value)
    return replace(gamma, gamma=_with_entry(gamma.gamma, k, i, j, delta))


def inject_curvature_20(
    gamma: ChristoffelJet, *, k: int = 0, i: int = 0, direction: int = 1, value=1
) -> ChristoffelJet:
    """Add ``value`` z_direction to Γ^k_ii, a symmetric holomorphic change with ∂Γ ≠ 0."""
    if gamma.dim < 2 or i == direction:
        raise ValueError("(2,0) curvature needs dim >= 2 and direction != i")
    delta = jets.z(gamma.dim, direction + 1) * QQ_I.convert(value)
    return replace(gamma, gamma=_with_entry(gamma.gamma, k, i, i, delta))


def inject_mixed(
    gamma: ChristoffelJet,
    *,
    k: int = 0,
    i: int = 0,
    j: int = 0,
    value=1,
    exponents: tuple[int, ...] | None = None,
) -> ChristoffelJet:
    """Add a dz̄_j component ``value``·z^exponents to the connection."""
    dim = gamma.dim
    jring = jets.jet_ring(dim)
    delta = jring.from_dict({exponents or (0,) * (2 * dim): QQ_I.convert(value)})
    zero_block = tuple(tuple(jring.zero for _ in range(dim)) for _ in range(dim))
    mixed = gamma.gamma_mixed or tuple(zero_block for _ in range(dim))
    return replace(gamma, gamma_mixed=_with_entry(mixed, k, i, j, delta))
