"""JSON jet files: schema, monomial-key grammar and codecs.

A monomial key has three ``|``-separated sections, each ``1`` when empty:

    <base> | <conormal> | <odd>

``base`` holds ``z<i>^<e>``/``zb<i>^<e>`` factors, ``conormal`` holds
``s<i>^<e>``/``sb<i>^<e>`` factors and ``odd`` holds ``dz<i>``, ``dzb<i>``,
``th<i>``, ``thb<i>`` in exterior order. Canonical keys list factors in
generator order and always write the exponent, e.g. ``z1^2 zb1^1 | s1^1 | dz1``.
Coefficients are strings: ``p/q`` rationals (decimals are read exactly) or float
reprs in float mode.
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from weilforge.algebra.element import Monomial, WeilElement, monomial_with_sign
from weilforge.algebra.generators import (
    BASE_KINDS,
    CONORMAL_KINDS,
    Generator,
    degree_one_generators,
)
from weilforge.algebra.scalars import EXACT, ScalarField, float_field
from weilforge.core.config import settings
from weilforge.core.errors import JetFileError
from weilforge.services import jets
from weilforge.services.connection_solver import ConnectionSolution, initial_components
from weilforge.services.jets import ChristoffelJet, Jet, MetricJet
from weilforge.services.polarization_solver import PolarizationSolution

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class PayloadKind(str, Enum):
    METRIC = "metric"
    CHRISTOFFEL = "christoffel"
    SOLUTION = "solution"
    POLARIZATION = "polarization"
    REPORT = "report"


class Coefficient(BaseModel):
    key: str
    re: str = "0"
    im: str = "0"


class Entry(BaseModel):
    name: str
    indices: list[int] = Field(default_factory=list)
    generator: str | None = None
    terms: list[Coefficient] = Field(default_factory=list)


class JetFile(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: PayloadKind
    dim: int = Field(ge=1)
    order: int = Field(ge=0)
    exact: bool = True
    entries: list[Entry] = Field(default_factory=list)
    report: dict[str, Any] = Field(default_factory=dict)


# keys ----------------------------------------------------------------------


def encode_monomial(m: Monomial) -> str:
    if m.dressing is not None:
        raise ValueError("jet files store undressed monomials only")
    base = [f"{g.name}^{e}" for g, e in m.even if g.kind in BASE_KINDS]
    conormal = [f"{g.name}^{e}" for g, e in m.even if g.kind in CONORMAL_KINDS]
    odd = [g.name for g in m.odd]
    return " | ".join(" ".join(section) or "1" for section in (base, conormal, odd))


def decode_monomial(key: str) -> tuple[int, Monomial]:
    sections = [section.strip() for section in key.split("|")]
    if len(sections) != 3:
        raise JetFileError(f"bad monomial key {key!r}", details={"key": key})
    factors: list[Generator] = []
    try:
        for position, section in enumerate(sections):
            if section == "1":
                continue
            for token in section.split():
                name, _, exponent = token.partition("^")
                g = Generator.parse(name)
                kinds = (BASE_KINDS, CONORMAL_KINDS)[position] if position < 2 else None
                if kinds is not None and g.kind not in kinds:
                    raise ValueError(f"{g} in the wrong section")
                if kinds is None and not g.is_odd:
                    raise ValueError(f"{g} in the odd section")
                power = int(exponent) if exponent else 1
                if power < 1 or (g.is_odd and power != 1):
                    raise ValueError(f"bad exponent in {token!r}")
                factors.extend([g] * power)
    except ValueError as err:
        raise JetFileError(f"bad monomial key {key!r}: {err}", details={"key": key}) from err
    sign, monomial = monomial_with_sign(factors)
    if sign == 0:
        raise JetFileError(f"repeated odd factor in {key!r}", details={"key": key})
    return sign, monomial


def encode_element(x: WeilElement) -> list[Coefficient]:
    terms = []
    for m in x.support():
        re, im = x.field.to_strings(x.coefficient(m))
        terms.append(Coefficient(key=encode_monomial(m), re=re, im=im))
    return terms


def decode_element(terms: list[Coefficient], field: ScalarField = EXACT) -> WeilElement:
    result = WeilElement.zero(field)
    for term in terms:
        sign, m = decode_monomial(term.key)
        try:
            value = field.from_strings(term.re, term.im)
        except (TypeError, ValueError, SyntaxError) as err:
            raise JetFileError(
                f"bad coefficient for {term.key!r}", details={"key": term.key}
            ) from err
        result = result + WeilElement({m: value}, field).scale(sign)
    return result


def _decode_jet(terms: list[Coefficient], dim: int) -> Jet:
    try:
        return jets.from_element(decode_element(terms), dim)
    except ValueError as err:
        raise JetFileError(str(err)) from err


# documents -----------------------------------------------------------------


def _field_of(doc: JetFile) -> ScalarField:
    if doc.exact:
        return EXACT
    return float_field(settings.tolerance)


def _expect(doc: JetFile, *kinds: PayloadKind) -> None:
    if doc.kind not in kinds:
        raise JetFileError(
            f"expected a {' or '.join(k.value for k in kinds)} file, got {doc.kind.value}",
            details={"kind": doc.kind.value},
        )


def metric_file(g: MetricJet, report: dict[str, Any] | None = None) -> JetFile:
    entries = [
        Entry(name="g", indices=[i + 1, j + 1], terms=encode_element(jets.to_element(entry)))
        for i, row in enumerate(g.g)
        for j, entry in enumerate(row)
        if entry
    ]
    return JetFile(
        kind=PayloadKind.METRIC, dim=g.dim, order=g.order, entries=entries, report=report or {}
    )


def _christoffel_entries(gamma: ChristoffelJet) -> list[Entry]:
    entries = []
    blocks = [("gamma", gamma.gamma)]
    if gamma.gamma_mixed is not None:
        blocks.append(("gamma_mixed", gamma.gamma_mixed))
    for name, block in blocks:
        for k, matrix in enumerate(block):
            for i, row in enumerate(matrix):
                for j, entry in enumerate(row):
                    if entry:
                        entries.append(
                            Entry(
                                name=name,
                                indices=[k + 1, i + 1, j + 1],
                                terms=encode_element(jets.to_element(entry)),
                            )
                        )
    return entries


def christoffel_file(gamma: ChristoffelJet) -> JetFile:
    return JetFile(
        kind=PayloadKind.CHRISTOFFEL,
        dim=gamma.dim,
        order=gamma.order,
        entries=_christoffel_entries(gamma),
    )


def solution_file(solution: ConnectionSolution, report: dict[str, Any] | None = None) -> JetFile:
    entries = _christoffel_entries(solution.gamma)
    entries.append(Entry(name="christoffel_order", indices=[solution.gamma.order]))
    for k in sorted(solution.components):
        for g in degree_one_generators(solution.dim):
            image = solution.image(k, g)
            if image:
                entries.append(
                    Entry(name="D", indices=[k], generator=g.name, terms=encode_element(image))
                )
    return JetFile(
        kind=PayloadKind.SOLUTION,
        dim=solution.dim,
        order=solution.order,
        exact=solution.field.exact,
        entries=entries,
        report=report or {},
    )


def polarization_file(
    polarization: PolarizationSolution, report: dict[str, Any] | None = None
) -> JetFile:
    entries = [
        Entry(name="Omega", indices=[k], terms=encode_element(part))
        for k, part in sorted(polarization.omega.items())
    ]
    return JetFile(
        kind=PayloadKind.POLARIZATION,
        dim=polarization.dim,
        order=polarization.order,
        exact=polarization.connection.field.exact,
        entries=entries,
        report=report or {},
    )


def report_file(dim: int, order: int, report: dict[str, Any]) -> JetFile:
    return JetFile(kind=PayloadKind.REPORT, dim=dim, order=order, report=report)


def _index(entry: Entry, size: int, dim: int) -> list[int]:
    if len(entry.indices) != size or any(not 1 <= i <= dim for i in entry.indices):
        raise JetFileError(
            f"bad indices {entry.indices} for {entry.name}", details={"entry": entry.name}
        )
    return [i - 1 for i in entry.indices]


def load_metric(doc: JetFile) -> MetricJet:
    _expect(doc, PayloadKind.METRIC)
    zero = jets.jet_ring(doc.dim).zero
    rows = [[zero] * doc.dim for _ in range(doc.dim)]
    for entry in doc.entries:
        if entry.name != "g":
            raise JetFileError(f"unexpected entry {entry.name!r} in a metric file")
        i, j = _index(entry, 2, doc.dim)
        rows[i][j] = _decode_jet(entry.terms, doc.dim)
    return MetricJet.from_rows(doc.dim, doc.order, rows)


def _load_christoffel_entries(doc: JetFile, order: int) -> ChristoffelJet:
    dim = doc.dim
    zero = jets.jet_ring(dim).zero
    blocks: dict[str, list] = {}
    for entry in doc.entries:
        if entry.name not in ("gamma", "gamma_mixed"):
            continue
        table = blocks.setdefault(
            entry.name, [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        )
        k, i, j = _index(entry, 3, dim)
        table[k][i][j] = _decode_jet(entry.terms, dim)

    def frozen(table):
        return tuple(tuple(tuple(row) for row in matrix) for matrix in table)

    base = blocks.get("gamma") or [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
    mixed = blocks.get("gamma_mixed")
    return ChristoffelJet(dim, order, frozen(base), frozen(mixed) if mixed else None)


def load_christoffel(doc: JetFile) -> ChristoffelJet:
    _expect(doc, PayloadKind.CHRISTOFFEL)
    return _load_christoffel_entries(doc, doc.order)


def load_solution(doc: JetFile) -> ConnectionSolution:
    _expect(doc, PayloadKind.SOLUTION)
    field = _field_of(doc)
    christoffel_order = next(
        (e.indices[0] for e in doc.entries if e.name == "christoffel_order" and e.indices),
        max(doc.order - 1, 0),
    )
    gamma = _load_christoffel_entries(doc, christoffel_order)
    components: dict[int, dict[Generator, WeilElement]] = {}
    for entry in doc.entries:
        if entry.name != "D":
            continue
        if len(entry.indices) != 1 or entry.generator is None:
            raise JetFileError("connection entries need one index and a generator")
        try:
            g = Generator.parse(entry.generator)
        except ValueError as err:
            raise JetFileError(str(err)) from err
        components.setdefault(entry.indices[0], {})[g] = decode_element(entry.terms, field)
    if 0 not in components or 1 not in components:
        raise JetFileError("solution file lacks the D0 and D1 components")
    # z -> dz is implied by D1 and not written to files
    for g, image in initial_components(gamma, field, doc.order + 1)[1].items():
        components[1].setdefault(g, image)
    for k in range(doc.order + 1):
        components.setdefault(k, {})
    return ConnectionSolution(doc.dim, doc.order, gamma, field, components)


def load_polarization(doc: JetFile, solution: ConnectionSolution) -> PolarizationSolution:
    _expect(doc, PayloadKind.POLARIZATION)
    if doc.dim != solution.dim:
        raise JetFileError("polarization and solution dimensions differ")
    field = _field_of(doc)
    omega: dict[int, WeilElement] = {}
    for entry in doc.entries:
        if entry.name != "Omega" or len(entry.indices) != 1:
            raise JetFileError(f"unexpected entry {entry.name!r} in a polarization file")
        omega[entry.indices[0]] = decode_element(entry.terms, field)
    if 0 not in omega:
        raise JetFileError("polarization file lacks Omega[0]")
    return PolarizationSolution(doc.dim, doc.order, solution, omega)


# io ------------------------------------------------------------------------


def dumps(doc: JetFile) -> str:
    return json.dumps(doc.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def read_jet_file(path: str | Path) -> JetFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise JetFileError(f"cannot read {path}", details={"path": str(path)}) from err
    try:
        doc = JetFile.model_validate_json(text)
    except ValidationError as err:
        raise JetFileError(
            f"invalid jet file {path}", details={"errors": str(err)}
        ) from err
    if doc.schema_version != SCHEMA_VERSION:
        raise JetFileError(
            f"unsupported schema version {doc.schema_version}",
            details={"supported": SCHEMA_VERSION},
        )
    logger.debug("read %s file %s (dim %d, order %d)", doc.kind.value, path, doc.dim, doc.order)
    return doc


def write_jet_file(doc: JetFile, path: str | Path | None) -> str:
    text = dumps(doc)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("wrote %s file %s", doc.kind.value, path)
    return text
