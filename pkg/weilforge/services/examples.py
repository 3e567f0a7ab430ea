"""Built-in metric jets on a single chart centered at the expansion point."""

import logging
from enum import Enum

from weilforge.core.errors import JetFileError
from weilforge.services import jets
from weilforge.services.jets import Jet, MetricJet

logger = logging.getLogger(__name__)


class ExampleName(str, Enum):
    FLAT = "flat"
    FUBINI_STUDY = "fubini-study"
    POINCARE = "poincare"
    PRODUCT = "product"


def _radius_squared(dim: int, indices: range) -> Jet:
    return sum(
        (jets.z(dim, i) * jets.zb(dim, i) for i in indices), jets.jet_ring(dim).zero
    )


def _potential_metric(dim: int, order: int, indices: range, sign: int) -> list[list[Jet]]:
    """∂∂̄ of ±log(1 ± |z|²) on the coordinates ``indices``.

    g_{ij̄} = δ_ij/(1 + sign r) - sign z̄_i z_j/(1 + sign r)² with r = Σ z_k z̄_k.
    """
    jring = jets.jet_ring(dim)
    base = jring.one + _radius_squared(dim, indices) * sign
    first = jets.inverse(base, order)
    second = jets.multiply(first, first, order)
    rows = [[jring.zero for _ in range(dim)] for _ in range(dim)]
    for i in indices:
        for j in indices:
            entry = -sign * jets.multiply(jets.zb(dim, i) * jets.z(dim, j), second, order)
            if i == j:
                entry = entry + first
            rows[i - 1][j - 1] = jets.truncate(entry, order)
    return rows


def builtin_example(name: str, dim: int, order: int) -> MetricJet:
    try:
        example = ExampleName(name)
    except ValueError as err:
        raise JetFileError(
            f"unknown example {name!r}",
            details={"known": [e.value for e in ExampleName]},
        ) from err
    if dim < 1 or order < 0:
        raise ValueError("dim must be >= 1 and order >= 0")
    jring = jets.jet_ring(dim)
    everything = range(1, dim + 1)
    if example is ExampleName.FLAT:
        rows = [[jring.one if i == j else jring.zero for j in everything] for i in everything]
    elif example is ExampleName.FUBINI_STUDY:
        rows = _potential_metric(dim, order, everything, 1)
    elif example is ExampleName.POINCARE:
        rows = _potential_metric(dim, order, everything, -1)
    else:
        if dim < 2:
            raise JetFileError("the product example needs dim >= 2", details={"dim": dim})
        rows = _potential_metric(dim, order, range(1, 2), 1)
        for i in range(2, dim + 1):
            rows[i - 1][i - 1] = jring.one
    logger.debug("built-in example %s, dim %d, order %d", example.value, dim, order)
    return MetricJet.from_rows(dim, order, rows)
