"""Polarization recursion: a parallel Kähler form extended to a holomorphic Ω.

Ω lives in Λ²(V₄)⊗B⁰. With γ_k the augmentation-k part of D(Σ_{p<k} Ω_p),

    Ω_k = -(1/k) σ_tot(γ_k)

since h acts as k on the type-(1,1) piece of augmentation k.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from weilforge.algebra import linalg
from weilforge.algebra.derivation import Derivation, anticommutator, canonical_sigma, d_r
from weilforge.algebra.element import WeilElement
from weilforge.algebra.generators import GeneratorKind, all_generators, generators
from weilforge.algebra.hodge import WeaklyHodgeMap, dress, h_type_components
from weilforge.algebra.pieces import enumerate_piece, operator_matrix
from weilforge.algebra.scalars import EXACT, to_complex
from weilforge.algebra.total import c_tot, h_apply, sigma_tot
from weilforge.core.errors import FlatnessObstructionError, FormNotParallelError
from weilforge.services import jets
from weilforge.services.connection_solver import ConnectionSolution
from weilforge.services.jets import MetricJet
from weilforge.services.kahler import kahler_form_from_metric, with_theta
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)

__all__ = [
    "PolarizationSolution",
    "dr_anticommutator_residual",
    "extend_derivation_to_LL",
    "first_orders_on_theta",
    "holomorphy_residual",
    "kahler_form_from_metric",
    "kahler_form_reconstruct",
    "positivity_check",
    "solve_polarization",
    "uniqueness_witness",
]

# Ω is a form of Hodge bidegree (1,1); dressed at level 0 that is Hodge type 1
POLARIZATION_TYPE = 1


@dataclass
class PolarizationSolution:
    dim: int
    order: int
    connection: ConnectionSolution
    omega: dict[int, WeilElement]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def total(self) -> WeilElement:
        result = WeilElement.zero(self.connection.field)
        for part in self.omega.values():
            result = result + part
        return result


def extend_derivation_to_LL(  # noqa: N802
    solution: ConnectionSolution, k: int | None = None
) -> Derivation:
    """D (or D_k) on the V₄-extended algebra with D(θ) = -dʳ(D s)."""
    base = solution.total_derivation() if k is None else solution.derivation(k)
    return with_theta(base, solution.dim)


def dr_anticommutator_residual(solution: ConnectionSolution) -> float:
    dim = solution.dim
    support = all_generators(dim, with_theta=True)
    bracket = anticommutator(extend_derivation_to_LL(solution), d_r(dim), support)
    return sum(bracket.image(g).norm() for g in support)


def first_orders_on_theta(solution: ConnectionSolution) -> ValidationResult:
    """D₁ = ∇ on L¹ and D₂(θ) = -dʳ(D₂ s) = (1/3)dʳσR(s)."""
    dim = solution.dim
    gamma = solution.gamma
    first = extend_derivation_to_LL(solution, 1)
    second = extend_derivation_to_LL(solution, 2)
    theta = generators(GeneratorKind.V4H, dim)
    dz = generators(GeneratorKind.V1H, dim)
    dzb = generators(GeneratorKind.V1A, dim)
    order = solution.order - 1
    for k in range(dim):
        expected = WeilElement.zero(solution.field)
        for i in range(dim):
            for j in range(dim):
                for coefficient, form in (
                    (gamma.gamma[k][i][j], dz[j]),
                    (gamma.mixed(k, i, j), dzb[j]),
                ):
                    if coefficient:
                        expected = expected + jets.to_element(
                            jets.truncate(coefficient, order), solution.field
                        ) * WeilElement.monomial(theta[i], form, field=solution.field)
        if first(WeilElement.generator(theta[k], solution.field)) != expected:
            return failed("d1_theta_mismatch", index=k + 1)
    connection = solution.derivation(1)
    sigma = canonical_sigma(dim)
    dr = d_r(dim)
    for s, th in zip(
        generators(GeneratorKind.V3H, dim) + generators(GeneratorKind.V3A, dim),
        generators(GeneratorKind.V4H, dim) + generators(GeneratorKind.V4A, dim),
        strict=True,
    ):
        curvature = connection(connection(WeilElement.generator(s, solution.field)))
        expected = dr(sigma(curvature.truncate(solution.max_total))) / 3
        found = second(WeilElement.generator(th, solution.field))
        if (found - expected).truncate(solution.max_total):
            return failed("d2_theta_mismatch", generator=th.name)
    return passed(dim=dim)


def _as_form(omega: WeilElement | MetricJet, solution: ConnectionSolution) -> WeilElement:
    if isinstance(omega, MetricJet):
        if omega.dim != solution.dim:
            raise ValueError("metric and connection dimensions differ")
        return kahler_form_from_metric(omega, solution.field)
    for m, _ in omega.items():
        if m.hodge != (1, 1) or m.theta_degree != 2 or m.form_degree:
            raise ValueError(f"polarization input is not of type (1,1): {m}")
    return omega.with_field(solution.field)


def solve_polarization(
    solution: ConnectionSolution,
    omega: WeilElement | MetricJet,
    order: int | None = None,
) -> PolarizationSolution:
    top = solution.order if order is None else order
    if top > solution.order:
        raise ValueError("polarization order exceeds the connection order")
    dim = solution.dim
    form = _as_form(omega, solution).truncate(top)
    derivation = extend_derivation_to_LL(solution).truncated(top)
    parallel_defect = derivation(form).filter(lambda m: m.augmentation_degree == 1)
    if parallel_defect:
        raise FormNotParallelError(
            "form not parallel",
            details={"defect_terms": [str(m) for m in parallel_defect.support()[:5]]},
        )
    omega_parts = {0: form}
    for k in range(1, top + 1):
        partial = WeilElement.zero(solution.field)
        for part in omega_parts.values():
            partial = partial + part
        gamma_k = derivation(partial).filter(lambda m, k=k: m.augmentation_degree == k)
        dressed_gamma = dress(gamma_k, POLARIZATION_TYPE)
        if c_tot(dressed_gamma, dim=dim):
            raise FlatnessObstructionError(
                "flatness obstruction", details={"order": k, "check": "C gamma_k = 0"}
            )
        dressed_omega = sigma_tot(dressed_gamma, dim=dim) / -k
        if h_apply(dressed_omega, dim=dim) != dressed_omega.scale(k):
            raise FlatnessObstructionError(
                "flatness obstruction", details={"order": k, "check": "h = k"}
            )
        if c_tot(dressed_omega, dim=dim) + dressed_gamma:
            raise FlatnessObstructionError(
                "flatness obstruction", details={"order": k, "check": "(D Omega)_k = 0"}
            )
        omega_parts[k] = dressed_omega.project()
        logger.info("polarization order %d accepted: %d terms", k, len(omega_parts[k]))
    result = PolarizationSolution(dim, top, solution, omega_parts)
    result.diagnostics["holomorphy"] = holomorphy_residual(result)["max_certified"]
    result.diagnostics["positivity"] = positivity_check(result).as_dict()
    return result


def holomorphy_residual(polarization: PolarizationSolution) -> dict[str, Any]:
    """Norms of (DΩ) by (augmentation, total degree); certified through N."""
    top = polarization.order
    derivation = extend_derivation_to_LL(polarization.connection).truncated(top + 1)
    image = derivation(polarization.total())
    certified: dict[str, float] = {}
    beyond: dict[str, float] = {}
    for m, c in image.items():
        key = f"aug={m.augmentation_degree},total={m.total_degree}"
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


def kahler_form_reconstruct(polarization: PolarizationSolution) -> dict[str, Any]:
    """ω_I = ½(Ω + ν(Ω)) with its closedness and reality residuals."""
    top = polarization.order
    omega = polarization.total()
    omega_i = (omega + omega.real_structure()) / 2
    derivation = extend_derivation_to_LL(polarization.connection).truncated(top)
    components = h_type_components(WeaklyHodgeMap(1, derivation))

    def conjugated(x: WeilElement) -> WeilElement:
        return derivation(x.real_structure()).real_structure()

    restriction = omega_i.filter(lambda m: m.augmentation_degree == 0) - polarization.omega[0]
    residuals = {
        "d10_omega": components[(1, 0)].action(omega).norm(),
        "d01_omega": components[(0, 1)].action(omega).norm(),
        "conjugate_d_nu_omega": conjugated(omega.real_structure()).truncate(top).norm(),
        "reality": (omega.twisted_real_structure() - omega).norm(),
        "restriction": restriction.norm(),
    }
    return {
        "omega_I": omega_i,
        "residuals": residuals,
        "max_residual": max(residuals.values()),
    }


def _origin_matrix(omega0: WeilElement, dim: int) -> list[list[complex]]:
    theta = generators(GeneratorKind.V4H, dim)
    theta_bar = generators(GeneratorKind.V4A, dim)
    matrix = [[0j] * dim for _ in range(dim)]
    for j in range(dim):
        for k in range(dim):
            key = WeilElement.monomial(theta[j], theta_bar[k]).support()[0]
            matrix[j][k] = to_complex(omega0.coefficient(key)) / 1j
    return matrix


def positivity_check(polarization: PolarizationSolution) -> ValidationResult:
    matrix = np.array(_origin_matrix(polarization.omega[0], polarization.dim), dtype=complex)
    hermitian = (matrix + matrix.conj().T) / 2
    eigenvalues = np.linalg.eigvalsh(hermitian)
    floor = float(eigenvalues.min()) if len(eigenvalues) else 0.0
    details = {"eigenvalues": [float(v) for v in eigenvalues], "min_eigenvalue": floor}
    if floor <= 0:
        return failed("non_positive", **details)
    return passed(**details)


def uniqueness_witness(polarization: PolarizationSolution, k: int = 2) -> dict[str, Any]:
    """Perturb Ω_k inside its piece and report where DΩ = 0 first breaks.

    Alongside, the dimension of ker C on the type-(1,1) augmentation-k piece is
    reported: it is 0, so no perturbation survives.
    """
    dim = polarization.dim
    s = generators(GeneratorKind.V3H, dim)[0]
    sb = generators(GeneratorKind.V3A, dim)[0]
    theta = generators(GeneratorKind.V4H, dim)[0]
    theta_bar = generators(GeneratorKind.V4A, dim)[0]
    bump = WeilElement.monomial(
        *([s] * (k // 2) + [sb] * (k // 2)), theta, theta_bar,
        coefficient=EXACT.imaginary_unit,
    ).with_field(polarization.connection.field)
    perturbed = dict(polarization.omega)
    perturbed[k] = perturbed.get(k, WeilElement.zero()) + bump
    candidate = PolarizationSolution(dim, polarization.order, polarization.connection, perturbed)
    residual = holomorphy_residual(candidate)["certified"]
    broken = sorted(
        int(key.split(",")[0].split("=")[1]) for key, value in residual.items() if value
    )
    piece = enumerate_piece(
        dim,
        form_degree=0,
        total_degree=k,
        hodge_type=POLARIZATION_TYPE,
        augmentation=k,
        theta_degree=2,
        base_degree=0,
    )
    rows, _ = operator_matrix(lambda x: c_tot(x, dim=dim), piece)
    kernel_dimension = len(piece) - (linalg.rank(rows, EXACT, len(piece)) if rows else 0)
    return {
        "perturbed_order": k,
        "broken_order": broken[0] if broken else None,
        "kernel_dimension": kernel_dimension,
    }
