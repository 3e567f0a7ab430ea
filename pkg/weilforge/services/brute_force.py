"""Independent cross-check: solve the defining equations as one linear system.

Instead of the σ_tot/h⁻¹ recursion, every coefficient of D_k (resp. Ω_k) is an
unknown. Flatness, the gauge condition σ_tot D_k = 0 and the reality condition
are imposed directly and the system is row-reduced exactly. Only dimension 1 and
small orders are supported: the systems grow fast.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from sympy import QQ_I

from weilforge.algebra import linalg
from weilforge.algebra.element import Monomial, WeilElement
from weilforge.algebra.generators import Generator, degree_one_generators
from weilforge.algebra.hodge import dress
from weilforge.algebra.pieces import enumerate_monomials
from weilforge.algebra.scalars import EXACT
from weilforge.algebra.total import c_tot, sigma_tot
from weilforge.core.config import settings
from weilforge.core.errors import (
    FormNotParallelError,
    NonUniqueSolutionError,
    NotKahlerianError,
)
from weilforge.services.connection_solver import (
    ConnectionSolution,
    Images,
    hodge_type_of,
    initial_components,
)
from weilforge.services.jets import ChristoffelJet, MetricJet
from weilforge.services.kahler import kahler_form_from_metric, verify_kahlerian, with_theta
from weilforge.services.polarization_solver import PolarizationSolution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Unknown:
    generator: Generator | None
    monomial: Monomial
    imaginary: bool

    def unit(self) -> WeilElement:
        value = EXACT.imaginary_unit if self.imaginary else EXACT.one
        return WeilElement({self.monomial: value})


@dataclass(frozen=True)
class Equation:
    name: str
    contribution: Callable[[Unknown], WeilElement]
    constant: WeilElement


def _eliminate(unknowns: Sequence[Unknown], equations: Sequence[Equation]) -> list:
    rows: dict[tuple[str, Monomial, int], list] = {}
    rhs: dict[tuple[str, Monomial, int], object] = {}

    def row(key: tuple[str, Monomial, int]) -> list:
        if key not in rows:
            rows[key] = [QQ_I.zero] * len(unknowns)
            rhs[key] = QQ_I.zero
        return rows[key]

    for equation in equations:
        for column, unknown in enumerate(unknowns):
            for m, c in equation.contribution(unknown).items():
                row((equation.name, m, 0))[column] = QQ_I(c.x, 0)
                row((equation.name, m, 1))[column] = QQ_I(c.y, 0)
        for m, c in equation.constant.items():
            row((equation.name, m, 0))
            row((equation.name, m, 1))
            rhs[(equation.name, m, 0)] = QQ_I(-c.x, 0)
            rhs[(equation.name, m, 1)] = QQ_I(-c.y, 0)
    keys = sorted(rows, key=lambda key: (key[0], key[1].sort_key, key[2]))
    solution = linalg.solve_system(
        [rows[key] for key in keys], [rhs[key] for key in keys], EXACT, len(unknowns)
    )
    logger.debug(
        "brute force system: %d equations, %d unknowns", len(keys), len(unknowns)
    )
    if not solution.consistent:
        raise NonUniqueSolutionError(
            "brute force system is inconsistent", details={"unknowns": len(unknowns)}
        )
    if solution.free_parameters:
        raise NonUniqueSolutionError(
            "brute force solution is not unique",
            details={"free_parameters": solution.free_parameters},
        )
    return solution.values


def _assemble(unknowns: Sequence[Unknown], values: Sequence) -> dict:
    parts: dict = {}
    for unknown, value in zip(unknowns, values, strict=True):
        if not value:
            continue
        term = unknown.unit().scale(value)
        parts[unknown.generator] = parts.get(unknown.generator, WeilElement.zero()) + term
    return parts


def _connection_candidates(g: Generator, k: int, max_total: int) -> list[Monomial]:
    candidates = []
    for total in range(2, max_total + 1):
        for m in enumerate_monomials(1, total_degree=total, form_degree=1):
            if m.augmentation_degree != k + 1:
                continue
            a = m.hodge[0] - g.hodge[0]
            b = m.hodge[1] - g.hodge[1]
            if a >= 0 and b >= 0 and a + b == 1:
                candidates.append(m)
    return candidates


def _check_scope(dim: int, order: int) -> None:
    if dim != 1:
        raise ValueError("brute force runs in dimension 1 only")
    if order > settings.brute_force_max_order:
        raise ValueError(
            f"brute force is limited to order {settings.brute_force_max_order}"
        )


def brute_force_solve(gamma: ChristoffelJet, order: int) -> ConnectionSolution:
    _check_scope(gamma.dim, order)
    report = verify_kahlerian(gamma)
    if not report.ok:
        raise NotKahlerianError(report.details["message"], details=report.as_dict())
    if order < 2:
        raise ValueError("solve needs order >= 2")
    max_total = order + 1
    solution = ConnectionSolution(
        1, order, gamma, EXACT, initial_components(gamma, EXACT, max_total)
    )
    sources = degree_one_generators(1)
    sb = sources[1]
    for k in range(2, order + 1):
        known = {p: solution.derivation(p) for p in range(1, k)}
        unknowns = [
            Unknown(g, m, imaginary)
            for g in sources
            for m in _connection_candidates(g, k, max_total)
            for imaginary in (False, True)
        ]
        equations = []
        for g in sources:
            x = WeilElement.generator(g)
            curvature = WeilElement.zero()
            for p in range(1, k):
                curvature = curvature + known[p](known[k - p](x))
            equations.append(
                Equation(
                    f"flat:{g.name}",
                    lambda u, g=g: (
                        c_tot(u.unit(), dim=1) if u.generator == g else WeilElement.zero()
                    ),
                    curvature.truncate(max_total),
                )
            )
            equations.append(
                Equation(
                    f"gauge:{g.name}",
                    lambda u, g=g: (
                        sigma_tot(dress(u.unit(), hodge_type_of(g)), dim=1).project()
                        if u.generator == g
                        else WeilElement.zero()
                    ),
                    WeilElement.zero(),
                )
            )
        equations.append(
            Equation(
                "reality",
                lambda u: u.unit() if u.generator == sb else u.unit().twisted_real_structure(),
                WeilElement.zero(),
            )
        )
        values = _eliminate(unknowns, equations)
        stage: Images = {g: WeilElement.zero() for g in sources}
        stage.update(_assemble(unknowns, values))
        solution.components[k] = stage
        logger.info("brute force order %d solved: %d unknowns", k, len(unknowns))
    solution.diagnostics["brute_force"] = True
    return solution


def brute_force_polarization(
    solution: ConnectionSolution, g: MetricJet, order: int | None = None
) -> PolarizationSolution:
    top = solution.order if order is None else order
    _check_scope(solution.dim, top)
    derivation = with_theta(solution.total_derivation(), 1).truncated(top)
    form = kahler_form_from_metric(g).truncate(top)
    if derivation(form).filter(lambda m: m.augmentation_degree == 1):
        raise FormNotParallelError("form not parallel")
    unknowns = [
        Unknown(None, m, imaginary)
        for total in range(1, top + 1)
        for m in enumerate_monomials(1, total_degree=total, form_degree=0, theta_degree=2)
        if 1 <= m.augmentation_degree <= top and m.hodge == (1, 1)
        for imaginary in (False, True)
    ]
    equations = [
        Equation("holomorphic", lambda u: derivation(u.unit()), derivation(form)),
        Equation(
            "reality",
            lambda u: u.unit().twisted_real_structure() - u.unit(),
            form.twisted_real_structure() - form,
        ),
    ]
    values = _eliminate(unknowns, equations)
    parts: dict[int, WeilElement] = {0: form}
    for k in range(1, top + 1):
        parts[k] = WeilElement.zero()
    for unknown, value in zip(unknowns, values, strict=True):
        if value:
            k = unknown.monomial.augmentation_degree
            parts[k] = parts[k] + unknown.unit().scale(value)
    logger.info("brute force polarization solved: %d unknowns", len(unknowns))
    return PolarizationSolution(1, top, solution, parts, {"brute_force": True})
