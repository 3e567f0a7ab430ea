"""Combinatorial majorants and norm estimates for the solved structures.

The sequences are exact rationals. Norms use the standard metric in which
monomials and the u_p are orthonormal; all fitted constants are per run.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any

from sympy import QQ, Rational, binomial
from sympy.polys.rings import ring
from sympy.polys.ring_series import rs_mul, rs_series_inversion

from weilforge.algebra.derivation import Derivation, Parity
from weilforge.algebra.element import WeilElement
from weilforge.algebra.generators import GeneratorKind, generators
from weilforge.algebra.pieces import enumerate_monomials, enumerate_piece, standard_norm
from weilforge.algebra.total import sigma_tot
from weilforge.core.config import settings
from weilforge.core.errors import InsufficientOrderError
from weilforge.services.connection_solver import (
    ConnectionSolution,
    HodgeConnectionSeries,
    hodge_connection_series,
    totalized_norm_equality,
)
from weilforge.services.kahler import with_theta
from weilforge.services.polarization_solver import PolarizationSolution
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)

# any C₂ with (3 - √8)C₂ > 1 works
BOUNDS_BASE = 6
RADIUS_FACTOR = 108


# sequences -----------------------------------------------------------------


@lru_cache(maxsize=None)
def catalan(n: int) -> Rational:
    """a_n = Σ a_k a_{n-k}, a₁ = 1, a_n = 0 for n <= 0."""
    if n <= 0:
        return Rational(0)
    if n == 1:
        return Rational(1)
    return sum((catalan(k) * catalan(n - k) for k in range(1, n)), Rational(0))


@lru_cache(maxsize=None)
def b(k: int, n: int) -> Rational:
    if k <= 0 or n < 0:
        return Rational(0)
    if k == 1:
        return Rational(1)
    total = Rational(0)
    for p in range(1, k):
        for q in range(n + 1):
            total += Rational(q + 1, k) * b(p, q) * b(k - p, n - q)
    return total


@lru_cache(maxsize=None)
def c(k: int, n: int) -> Rational:
    if k <= 1:
        return b(k, n)
    if n < 0:
        return Rational(0)
    total = Rational(0)
    for p in range(1, k):
        for q in range(n + 1):
            total += c(p, q) * b(k - p, n - q)
    return total


@lru_cache(maxsize=None)
def bm(m: int, k: int, n: int) -> Rational:
    if k <= 0 or n < 0 or m <= 0:
        return Rational(0)
    if k == 1:
        return Rational(1)
    total = Rational(0)
    for p in range(1, k):
        for q in range(n + 1):
            total += Rational(q + m * (k - p), k) * bm(m, p, q) * b(k - p, n - q)
    return total


def _check_range(*values: int) -> None:
    limit = settings.generating_bounds_limit
    if any(v > limit for v in values):
        raise ValueError(f"combinatorial tables are limited to indices <= {limit}")
    if any(v < 0 for v in values):
        raise ValueError("indices must be non-negative")


def check_generating_bounds(k_max: int, n_max: int, m_max: int = 2) -> ValidationResult:
    """Termwise majorants for b and bᵐ, plus the smallest C with b < C·6^{n+k}."""
    _check_range(k_max, n_max, m_max)
    checked = 0
    prefactor = Rational(0)
    for k in range(1, k_max + 1):
        for n in range(n_max + 1):
            value = b(k, n)
            majorant = catalan(k) * binomial(n + 2 * k - 2, 2 * k - 2)
            if value > majorant:
                return failed(
                    "majorant_violated", k=k, n=n, value=str(value), bound=str(majorant)
                )
            for m in range(1, m_max + 1):
                bound = (2 * m) ** (k - 1) * c(k, n) * value
                if bm(m, k, n) > bound:
                    return failed(
                        "bm_bound_violated",
                        m=m,
                        k=k,
                        n=n,
                        value=str(bm(m, k, n)),
                        bound=str(bound),
                    )
            prefactor = max(prefactor, value / Rational(BOUNDS_BASE) ** (n + k))
            checked += 1
    return passed(checked=checked, C=str(prefactor), C2=BOUNDS_BASE)


def g_recurrence_check(k_max: int = 6, order: int = 12) -> ValidationResult:
    """g_k = (1/2k) Σ (2 + z d/dz)(g_p g_{k-p}) against the b_{k,n} tables."""
    _check_range(k_max, order)
    series_ring, z = ring("z", QQ)
    g = {1: rs_series_inversion(series_ring.one - z, z, order + 1)}
    for k in range(2, k_max + 1):
        total = series_ring.zero
        for p in range(1, k):
            product = rs_mul(g[p], g[k - p], z, order + 1)
            total += 2 * product + z * product.diff(z)
        g[k] = total * QQ(1, 2 * k)
    for k, series in g.items():
        for n in range(order + 1):
            coefficient = series.coeff(z**n) if n else series.coeff(1)
            if QQ.to_sympy(coefficient) != b(k, n):
                return failed("g_recurrence_mismatch", k=k, n=n)
    return passed(k_max=k_max, order=order)


# norms ---------------------------------------------------------------------


def component_derivation(solution: ConnectionSolution, k: int, n: int) -> Derivation:
    return Derivation(
        Parity.ODD, solution.component(k, n), frozenset(GeneratorKind), f"D{k},{n}"
    )


def _key(**labels: int) -> str:
    return ",".join(f"{name}={value}" for name, value in labels.items())


def _parse_key(key: str) -> dict[str, int]:
    return {name: int(value) for name, value in (part.split("=") for part in key.split(","))}


def measure_norms(
    solution: ConnectionSolution, polarization: PolarizationSolution | None = None
) -> dict[str, dict[str, float]]:
    """Operator norms of the pieces D_{k,n}, their totalizations, and Ω_{k,n}.

    ``D`` is keyed by (k, n, p, q): source monomials of B⁰ with augmentation
    degree p and total degree q. ``D_L`` uses the V₄ generators as sources.
    """
    dim = solution.dim
    thetas = [
        WeilElement.generator(g).support()[0]
        for kind in (GeneratorKind.V4H, GeneratorKind.V4A)
        for g in generators(kind, dim)
    ]
    tables: dict[str, dict[str, float]] = {"D": {}, "D_L": {}}
    for (k, n) in sorted(solution.table()):
        if k == 0:
            continue
        derivation = component_derivation(solution, k, n)
        for p in (0, 1):
            for q in (1, 2):
                source = enumerate_monomials(
                    dim, total_degree=q, form_degree=0, base_degree=q - p
                )
                tables["D"][_key(k=k, n=n, p=p, q=q)] = standard_norm(derivation, source)
        tables["D_L"][_key(k=k, n=n, p=1, q=0)] = standard_norm(
            with_theta(derivation, dim), thetas
        )
    tables["D_tot"] = {
        f"{key},q=1": value["total"]
        for key, value in totalized_norm_equality(solution)["norms"].items()
        if not key.startswith("k=0,")
    }
    if polarization is not None:
        tables["Omega"] = {}
        tables["omega"] = {}
        for k, part in sorted(polarization.omega.items()):
            for n in sorted({m.total_degree for m in part.support()}):
                norm = part.total_part(n).norm()
                if k == 0:
                    tables["omega"][_key(n=n)] = norm
                else:
                    tables["Omega"][_key(k=k, n=n)] = norm
    return tables


def _root_fit(values: dict[int, float]) -> float:
    fitted = 1.0
    for n, value in values.items():
        if n >= 1 and value > 0:
            fitted = max(fitted, value ** (1.0 / n))
    return fitted


def _sigma_norm(dim: int, *, form_degree: int, total_degree: int, theta_degree: int) -> float:
    source = enumerate_piece(
        dim, form_degree=form_degree, total_degree=total_degree, theta_degree=theta_degree
    )
    return standard_norm(lambda x: sigma_tot(x, dim=dim), source)


@dataclass(frozen=True)
class Constants:
    C0: float
    K: float
    K1: float
    C2: float = 1.0
    C1: float = 1.0
    C3: float = 1.0

    @property
    def C(self) -> float:  # noqa: N802
        return max(self.C0, self.C2)


def fit_constants(
    solution: ConnectionSolution,
    polarization: PolarizationSolution | None = None,
    tables: dict[str, dict[str, float]] | None = None,
) -> Constants:
    tables = tables or measure_norms(solution, polarization)
    dim = solution.dim
    first: dict[int, float] = {}
    every: dict[int, float] = {}
    for key, value in tables["D"].items():
        labels = _parse_key(key)
        if (labels["p"], labels["q"]) != (1, 1):
            continue
        every[labels["n"]] = max(every.get(labels["n"], 0.0), value)
        if labels["k"] == 1:
            first[labels["n"]] = max(first.get(labels["n"], 0.0), value)
    k_sigma = max(1.0, _sigma_norm(dim, form_degree=2, total_degree=2, theta_degree=0))
    k1_sigma = _sigma_norm(dim, form_degree=1, total_degree=1, theta_degree=2)
    omega: dict[int, float] = {}
    big_omega: dict[int, float] = {}
    for key, value in tables.get("omega", {}).items():
        omega[_parse_key(key)["n"]] = value
    for key, value in tables.get("Omega", {}).items():
        n = _parse_key(key)["n"]
        big_omega[n] = max(big_omega.get(n, 0.0), value)
    constants = Constants(
        C0=_root_fit(first),
        K=k_sigma,
        K1=max(k1_sigma, 3 * k_sigma),
        C2=_root_fit(omega),
        C1=_root_fit(every),
        C3=_root_fit(big_omega),
    )
    logger.info("fitted constants %s", asdict(constants))
    return constants


def _within(value: float, bound: float) -> bool:
    return value <= bound * (1 + settings.tolerance) + settings.tolerance


def verify_bounds(
    tables: dict[str, dict[str, float]], constants: Constants
) -> ValidationResult:
    """Every measured norm against its inductive bound; the margin is the worst ratio."""
    checked = 0
    worst = 0.0

    def check(table: str, key: str, value: float, bound: float) -> ValidationResult | None:
        nonlocal checked, worst
        checked += 1
        if bound > 0:
            worst = max(worst, value / bound)
        if not _within(value, bound):
            return failed("bound_violated", table=table, key=key, value=value, bound=bound)
        return None

    three_k = 3 * constants.K
    for table in ("D", "D_tot", "D_L"):
        for key, value in tables.get(table, {}).items():
            labels = _parse_key(key)
            k, n, p, q = labels["k"], labels["n"], labels["p"], labels["q"]
            common = three_k ** (k - 1) * constants.C0**n * float(b(k, n))
            bound = 2 * (q + p * k) * common if table == "D_L" else q * common
            failure = check(table, key, value, bound)
            if failure is not None:
                return failure
    for key, value in tables.get("Omega", {}).items():
        labels = _parse_key(key)
        k, n = labels["k"], labels["n"]
        bound = (2 * constants.K1) ** (k - 1) * constants.C**n * float(bm(2, k, n))
        failure = check("Omega", key, value, bound)
        if failure is not None:
            return failure
    return passed(checked=checked, worst_ratio=worst)


def envelope_check(
    tables: dict[str, dict[str, float]], constants: Constants
) -> ValidationResult:
    """A single geometric envelope: ‖D_{k,n}‖_{1,1} <= C₁ⁿ and ‖Ω_{k,n}‖ <= C₃ⁿ."""
    for key, value in tables.get("D", {}).items():
        labels = _parse_key(key)
        if (labels["p"], labels["q"]) == (1, 1) and labels["n"] >= 1:
            if not _within(value, constants.C1 ** labels["n"]):
                return failed("envelope_violated", table="D", key=key, value=value)
    for key, value in tables.get("Omega", {}).items():
        n = _parse_key(key)["n"]
        if n >= 1 and not _within(value, constants.C3**n):
            return failed("envelope_violated", table="Omega", key=key, value=value)
    return passed(C1=constants.C1, C3=constants.C3)


# radius --------------------------------------------------------------------


def _radius(norms: dict[int, float]) -> float:
    growth = 0.0
    for n, value in norms.items():
        if n >= 1 and value > 0:
            growth = max(growth, value ** (1.0 / n))
    return math.inf if growth == 0 else 1.0 / growth


def estimate_radius(series: HodgeConnectionSeries) -> float:
    """1/max_n ‖Θ_n‖^{1/n}: the finite-order proxy of 1/limsup."""
    if series.order < 3:
        raise InsufficientOrderError(
            "insufficient jet order", details={"order": series.order, "required": 3}
        )
    return _radius(series.norms())


def radius_profile(series: HodgeConnectionSeries) -> dict[int, float]:
    norms = series.norms()
    return {m: _radius({n: v for n, v in norms.items() if n <= m}) for m in sorted(norms) if m}


def theoretical_radius(c0: float, k: float) -> float:
    return 1.0 / (RADIUS_FACTOR * k * c0)


@dataclass
class EstimateReport:
    constants: Constants
    norms: dict[str, dict[str, float]]
    radius: float
    theoretical_radius: float
    profile: dict[int, float]
    bounds: ValidationResult
    envelope: ValidationResult
    extras: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "constants": {**asdict(self.constants), "C": self.constants.C},
            "norms": self.norms,
            "radius": "infinite" if math.isinf(self.radius) else self.radius,
            "theoretical_radius": self.theoretical_radius,
            "profile": {
                str(m): "infinite" if math.isinf(r) else r for m, r in self.profile.items()
            },
            "bounds": self.bounds.as_dict(),
            "envelope": self.envelope.as_dict(),
            **self.extras,
        }


def estimate(
    solution: ConnectionSolution, polarization: PolarizationSolution | None = None
) -> EstimateReport:
    tables = measure_norms(solution, polarization)
    constants = fit_constants(solution, polarization, tables)
    series = hodge_connection_series(solution)
    radius = estimate_radius(series)
    report = EstimateReport(
        constants=constants,
        norms=tables,
        radius=radius,
        theoretical_radius=theoretical_radius(constants.C0, constants.K),
        profile=radius_profile(series),
        bounds=verify_bounds(tables, constants),
        envelope=envelope_check(tables, constants),
        extras={"total_norm_difference": totalized_norm_equality(solution)["max_difference"]},
    )
    logger.info("estimated radius %s (lower bound %.3g)", radius, report.theoretical_radius)
    return report
