"""Order-by-order solver for the flat linear extended connection.

D₀ = C and D₁ = ∇ are given; for k >= 2 the recursion

    R_k = Σ_{1 <= p <= k-1} D_p D_{k-p},   D_k = -h⁻¹ σ_tot R_k

runs in the total Weil algebra (dressed elements). Images are stored undressed;
the dressing of an image of s_i (resp. s̄_i) is recovered from Hodge type +1
(resp. -1).
"""

import logging
from dataclasses import dataclass, field
from typing import Any

from weilforge.algebra.derivation import (
    Derivation,
    Parity,
    canonical_C,
    canonical_sigma,
    iota_conjugate,
)
from weilforge.algebra.element import WeilElement
from weilforge.algebra.generators import (
    BASE_KINDS,
    FORM_KINDS,
    Generator,
    GeneratorKind,
    degree_one_generators,
    generators,
)
from weilforge.algebra.hodge import check_weakly_hodge, dress
from weilforge.algebra.pieces import standard_norm
from weilforge.algebra.scalars import EXACT, ScalarField, to_complex
from weilforge.algebra.total import c_tot, h_invert, sigma_tot
from weilforge.core.errors import (
    FlatnessObstructionError,
    InsufficientOrderError,
    NotKahlerianError,
)
from weilforge.services import jets
from weilforge.services.jets import ChristoffelJet
from weilforge.services.kahler import first_order_images, verify_kahlerian
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)

Images = dict[Generator, WeilElement]


def hodge_type_of(g: Generator) -> int:
    return g.hodge[0]


@dataclass
class ConnectionSolution:
    dim: int
    order: int
    gamma: ChristoffelJet
    field: ScalarField
    components: dict[int, Images]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def max_total(self) -> int:
        return self.order + 1

    def image(self, k: int, g: Generator) -> WeilElement:
        return self.components.get(k, {}).get(g, WeilElement.zero(self.field))

    def dressed_image(self, k: int, g: Generator) -> WeilElement:
        return dress(self.image(k, g), hodge_type_of(g))

    def derivation(self, k: int) -> Derivation:
        zero_kinds = FORM_KINDS if k == 1 else FORM_KINDS | BASE_KINDS
        return Derivation(
            Parity.ODD, self.components.get(k, {}), zero_kinds, f"D{k}", self.max_total
        )

    def total_derivation(self, max_k: int | None = None) -> Derivation:
        top = self.order if max_k is None else max_k
        images: Images = {}
        for k in range(top + 1):
            for g, image in self.components.get(k, {}).items():
                images[g] = images[g] + image if g in images else image
        return Derivation(Parity.ODD, images, FORM_KINDS, "D", self.max_total)

    def component(self, k: int, n: int) -> Images:
        """D_{k,n}: the part of D_k raising total degree by ``n``."""
        return {
            g: image.total_part(g.total_degree + n)
            for g, image in self.components.get(k, {}).items()
        }

    def table(self) -> dict[tuple[int, int], Images]:
        result = {}
        for k in self.components:
            for n in range(self.max_total):
                piece = self.component(k, n)
                if any(piece.values()):
                    result[(k, n)] = piece
        return result


@dataclass(frozen=True)
class HodgeConnectionSeries:
    """Θ_n(s) = Σ_{k<=n} D_{k,n}(s) on the conormal generators."""

    dim: int
    order: int
    theta: dict[int, Images]

    def norm(self, n: int) -> float:
        images = self.theta.get(n, {})
        sources = [WeilElement.generator(g).support()[0] for g in images]

        def action(x: WeilElement) -> WeilElement:
            result = WeilElement.zero()
            for m, c in x.items():
                result = result + images[_generator_of(m)].scale(c)
            return result

        return standard_norm(action, sources)

    def norms(self) -> dict[int, float]:
        return {n: self.norm(n) for n in sorted(self.theta)}


def _generator_of(m) -> Generator:
    [(g, _)] = list(m.factors())
    return g


def initial_components(gamma: ChristoffelJet, field: ScalarField, max_total: int) -> dict[int, Images]:
    dim = gamma.dim
    c = canonical_C(dim)
    zero_images = {
        g: c.image(g).with_field(field) for g in degree_one_generators(dim)
    }
    first = {
        g: image.truncate(max_total) for g, image in first_order_images(gamma, field).items()
    }
    return {0: zero_images, 1: first}


def _stage_source(g: Generator, field: ScalarField) -> WeilElement:
    return WeilElement.monomial(g, dressing=0, field=field)


def solve(
    gamma: ChristoffelJet, order: int, field: ScalarField = EXACT
) -> ConnectionSolution:
    report = verify_kahlerian(gamma)
    if not report.ok:
        raise NotKahlerianError(report.details["message"], details=report.as_dict())
    if order < 2:
        raise ValueError("solve needs order >= 2")
    if order > gamma.order + 1:
        raise InsufficientOrderError(
            "insufficient jet order",
            details={"requested": order, "christoffel_order": gamma.order},
        )
    dim = gamma.dim
    solution = ConnectionSolution(
        dim, order, gamma, field, initial_components(gamma, field, order + 1)
    )
    for k in range(2, order + 1):
        stage: Images = {}
        known = {p: solution.derivation(p) for p in range(1, k)}
        for g in degree_one_generators(dim):
            source = _stage_source(g, field)
            curvature = WeilElement.zero(field)
            for p in range(1, k):
                curvature = curvature + known[p](known[k - p](source))
            if c_tot(curvature, dim=dim):
                raise FlatnessObstructionError(
                    "flatness obstruction",
                    details={"order": k, "generator": g.name},
                )
            correction = curvature
            if curvature:
                correction = -h_invert(sigma_tot(curvature, dim=dim), dim=dim)
            if c_tot(correction, dim=dim) + curvature:
                raise FlatnessObstructionError(
                    "flatness obstruction",
                    details={"order": k, "generator": g.name, "check": "C D_k = -R_k"},
                )
            if correction and sigma_tot(correction, dim=dim):
                raise FlatnessObstructionError(
                    "flatness obstruction",
                    details={"order": k, "generator": g.name, "check": "sigma_tot D_k = 0"},
                )
            stage[g] = correction.project()
        solution.components[k] = stage
        logger.info(
            "order %d accepted: %d terms",
            k,
            sum(len(image) for image in stage.values()),
        )
    solution.diagnostics["flatness"] = flatness_residual(solution)["max_certified"]
    solution.diagnostics["linearity"] = linearity_residual(solution)
    return solution


def flatness_residual(solution: ConnectionSolution) -> dict[str, Any]:
    """Norms of (D∘D)(g) by (augmentation, total degree).

    Terms of total degree N + 2 are listed as beyond the certified order.
    """
    top = solution.max_total
    derivation = solution.total_derivation().truncated(top + 1)
    certified: dict[str, float] = {}
    beyond: dict[str, float] = {}
    for g in degree_one_generators(solution.dim):
        square = derivation(derivation(WeilElement.generator(g, solution.field)))
        for m, c in square.items():
            key = f"{g.name}:aug={m.augmentation_degree},total={m.total_degree}"
            table = certified if m.total_degree <= top else beyond
            table[key] = table.get(key, 0.0) + abs(to_complex(c)) ** 2
    certified = {key: value**0.5 for key, value in sorted(certified.items())}
    beyond = {key: value**0.5 for key, value in sorted(beyond.items())}
    return {
        "certified_total_degree": top,
        "certified": certified,
        "beyond_certified_order": beyond,
        "max_certified": max(certified.values(), default=0.0),
    }


def linearity_residual(solution: ConnectionSolution) -> float:
    """Σ_g ‖g - ½σ((D - D^ι) g)‖ over s_i and s̄_i."""
    dim = solution.dim
    derivation = solution.total_derivation()
    conjugated = iota_conjugate(derivation, dim)
    sigma = canonical_sigma(dim)
    total = 0.0
    for g in degree_one_generators(dim):
        x = WeilElement.generator(g, solution.field)
        difference = derivation(x) - conjugated(x)
        residual = x - sigma(difference) / 2
        total += residual.norm()
    return total


def hodge_connection_series(solution: ConnectionSolution) -> HodgeConnectionSeries:
    theta: dict[int, Images] = {}
    for n in range(solution.max_total):
        images: Images = {}
        for g in degree_one_generators(solution.dim):
            image = WeilElement.zero(solution.field)
            for k in range(min(n, solution.order) + 1):
                image = image + solution.image(k, g).total_part(g.total_degree + n)
            images[g] = image
        theta[n] = images
    series = HodgeConnectionSeries(solution.dim, solution.order, theta)
    logger.debug("connection series norms %s", series.norms())
    return series


def weakly_hodge_audit(solution: ConnectionSolution) -> ValidationResult:
    dim = solution.dim
    sources = [
        WeilElement.generator(g).support()[0]
        for g in degree_one_generators(dim)
        + generators(GeneratorKind.V2H, dim)
        + generators(GeneratorKind.V2A, dim)
    ]
    for k in sorted(solution.components):
        result = check_weakly_hodge(solution.derivation(k).as_weakly_hodge(1), sources)
        if not result.ok:
            return failed(result.reason, order=k, **(result.details or {}))
    return passed(orders=sorted(solution.components))


def reality_residual(solution: ConnectionSolution) -> dict[int, float]:
    dim = solution.dim
    residuals = {}
    for k in sorted(solution.components):
        derivation = solution.derivation(k)
        total = 0.0
        for g in degree_one_generators(dim) + generators(GeneratorKind.V2H, dim):
            x = WeilElement.generator(g, solution.field)
            total += (
                derivation(x.twisted_real_structure())
                - derivation(x).twisted_real_structure()
            ).norm()
        residuals[k] = total
    return residuals


def iota_parity_check(solution: ConnectionSolution) -> ValidationResult:
    """D_k^ι = (-1)^{k+1} D_k on generators."""
    dim = solution.dim
    for k in sorted(solution.components):
        derivation = solution.derivation(k)
        conjugated = iota_conjugate(derivation, dim)
        sign = 1 if k % 2 else -1
        for g in degree_one_generators(dim) + generators(GeneratorKind.V2H, dim):
            x = WeilElement.generator(g, solution.field)
            if conjugated(x) != derivation(x).scale(sign):
                return failed("iota_parity_violated", order=k, generator=g.name)
    return passed(orders=sorted(solution.components))


def d2_identity_residual(solution: ConnectionSolution) -> float:
    """‖D₂ + (1/3)σ(D₁∘D₁)‖ on s_i, s̄_i through the certified total degree."""
    dim = solution.dim
    first = solution.derivation(1)
    sigma = canonical_sigma(dim)
    total = 0.0
    for g in degree_one_generators(dim):
        x = WeilElement.generator(g, solution.field)
        curvature = first(first(x)).truncate(solution.max_total)
        expected = -sigma(curvature) / 3
        total += (solution.image(2, g) - expected).truncate(solution.max_total).norm()
    return total


def recovered_christoffel(solution: ConnectionSolution) -> dict[tuple[int, int, int], WeilElement]:
    table: dict[tuple[int, int, int], WeilElement] = {}
    for k, sk in enumerate(generators(GeneratorKind.V3H, solution.dim)):
        for m, c in solution.image(1, sk).items():
            if len(m.odd) != 1 or m.odd[0].kind is not GeneratorKind.V1H:
                continue
            (conormal,) = [g for g, _ in m.even if g.kind is GeneratorKind.V3H]
            key = (k, conormal.index - 1, m.odd[0].index - 1)
            term = WeilElement({m.without_even(conormal): -c}, solution.field)
            table[key] = table[key] + term if key in table else term
    return table


def reduction_identity(solution: ConnectionSolution) -> ValidationResult:
    recovered = recovered_christoffel(solution)
    dim = solution.dim
    for k in range(dim):
        for i in range(dim):
            for j in range(dim):
                expected = jets.to_element(
                    jets.truncate(solution.gamma.gamma[k][i][j], solution.order - 1),
                    solution.field,
                )
                found = recovered.get((k, i, j), WeilElement.zero(solution.field))
                if found - expected:
                    return failed(
                        "reduction_mismatch", component=[k + 1, i + 1, j + 1]
                    )
    return passed(dim=dim)


def totalized_norm_equality(solution: ConnectionSolution) -> dict[str, Any]:
    """‖D_{k,n}‖_{p,1} against the norm of its totalization, p in {0, 1}."""
    dim = solution.dim
    sources = {
        0: generators(GeneratorKind.V2H, dim) + generators(GeneratorKind.V2A, dim),
        1: degree_one_generators(dim),
    }
    table: dict[str, Any] = {}
    worst = 0.0
    for (k, n), images in sorted(solution.table().items()):
        for p, gens in sources.items():
            if not any(images.get(g) for g in gens):
                continue

            def plain(x: WeilElement, images=images) -> WeilElement:
                result = WeilElement.zero(solution.field)
                for m, c in x.items():
                    result = result + images.get(_generator_of(m), WeilElement.zero()).scale(c)
                return result

            def totalized(x: WeilElement, images=images) -> WeilElement:
                result = WeilElement.zero(solution.field)
                for m, c in x.items():
                    g = _generator_of(m)
                    image = images.get(g, WeilElement.zero())
                    result = result + dress(image, hodge_type_of(g)).scale(c)
                return result

            plain_sources = [WeilElement.generator(g).support()[0] for g in gens]
            dressed_sources = [m.with_dressing(0) for m in plain_sources]
            plain_norm = standard_norm(plain, plain_sources)
            total_norm = standard_norm(totalized, dressed_sources)
            worst = max(worst, abs(plain_norm - total_norm))
            table[f"k={k},n={n},p={p}"] = {"plain": plain_norm, "total": total_norm}
    return {"norms": table, "max_difference": worst}


def perturb(solution: ConnectionSolution, k: int, element: WeilElement, generator: Generator | None = None) -> ConnectionSolution:
    target = generator or generators(GeneratorKind.V3H, solution.dim)[0]
    components = {order: dict(images) for order, images in solution.components.items()}
    stage = components.setdefault(k, {})
    stage[target] = stage.get(target, WeilElement.zero(solution.field)) + element
    return ConnectionSolution(
        solution.dim, solution.order, solution.gamma, solution.field, components
    )
