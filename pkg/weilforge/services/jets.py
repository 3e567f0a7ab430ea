"""Truncated Taylor jets at the expansion point.

Jets are polynomials in z_1..z_n, z̄_1..z̄_n over the Gaussian rationals, held in
sympy sparse rings. Everything here is exact.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing, ring

from weilforge.algebra.element import Monomial, WeilElement
from weilforge.algebra.generators import Generator, GeneratorKind
from weilforge.algebra.scalars import EXACT, ScalarField
from weilforge.core.errors import DegenerateMetricError

Jet = PolyElement
JetMatrix = tuple[tuple[Jet, ...], ...]


@lru_cache(maxsize=8)
def jet_ring(dim: int) -> PolyRing:
    names = [f"z{i}" for i in range(1, dim + 1)] + [f"zb{i}" for i in range(1, dim + 1)]
    jring, *_ = ring(",".join(names), QQ_I)
    return jring


def z(dim: int, index: int) -> Jet:
    return jet_ring(dim).gens[index - 1]


def zb(dim: int, index: int) -> Jet:
    return jet_ring(dim).gens[dim + index - 1]


def constant(dim: int, value) -> Jet:
    return jet_ring(dim).ground_new(QQ_I.convert(value))


def truncate(f: Jet, order: int) -> Jet:
    return f.ring.from_dict({m: c for m, c in f.items() if sum(m) <= order})


def homogeneous_part(f: Jet, degree: int) -> Jet:
    return f.ring.from_dict({m: c for m, c in f.items() if sum(m) == degree})


def jet_order(f: Jet) -> int:
    return max((sum(m) for m in f.keys()), default=-1)


def conjugate(f: Jet) -> Jet:
    dim = f.ring.ngens // 2
    terms = {}
    for m, c in f.items():
        swapped = tuple(m[dim:]) + tuple(m[:dim])
        terms[swapped] = QQ_I(c.x, -c.y)
    return f.ring.from_dict(terms)


def multiply(f: Jet, g: Jet, order: int) -> Jet:
    return truncate(f * g, order)


def inverse(f: Jet, order: int) -> Jet:
    c0 = f.const()
    if not c0:
        raise DegenerateMetricError("degenerate metric", details={"constant": "0"})
    jring = f.ring
    scale = QQ_I.one / c0
    nilpotent = f * scale - jring.one
    result = jring.one
    power = jring.one
    for _ in range(order):
        power = multiply(power, -nilpotent, order)
        if not power:
            break
        result = result + power
    return truncate(result * scale, order)


def matrix_multiply(a: JetMatrix, b: JetMatrix, order: int) -> JetMatrix:
    n = len(a)
    m = len(b[0])
    return tuple(
        tuple(
            truncate(sum((a[i][k] * b[k][j] for k in range(len(b))), a[i][0].ring.zero), order)
            for j in range(m)
        )
        for i in range(n)
    )


def values_at_origin(matrix: JetMatrix) -> list[list]:
    return [[entry.const() for entry in row] for row in matrix]


def matrix_inverse(matrix: JetMatrix, order: int) -> JetMatrix:
    """Series inverse G⁻¹ = Σ (-G₀⁻¹G')ᵏ G₀⁻¹ truncated at ``order``."""
    n = len(matrix)
    jring = matrix[0][0].ring
    origin = DomainMatrix(values_at_origin(matrix), (n, n), QQ_I)
    if origin.rank() < n:
        raise DegenerateMetricError(
            "degenerate metric", details={"g0": [[str(v) for v in row] for row in origin.to_list()]}
        )
    origin_inverse = tuple(
        tuple(jring.ground_new(v) for v in row) for row in origin.inv().to_list()
    )
    remainder = tuple(
        tuple(matrix[i][j] - jring.ground_new(matrix[i][j].const()) for j in range(n))
        for i in range(n)
    )
    step = tuple(
        tuple(-entry for entry in row)
        for row in matrix_multiply(origin_inverse, remainder, order)
    )
    result = origin_inverse
    power = origin_inverse
    for _ in range(order):
        power = matrix_multiply(step, power, order)
        if all(not entry for row in power for entry in row):
            break
        result = tuple(
            tuple(result[i][j] + power[i][j] for j in range(n)) for i in range(n)
        )
    return result


def to_element(f: Jet, field: ScalarField = EXACT) -> WeilElement:
    dim = f.ring.ngens // 2
    terms = {}
    for exponents, c in f.items():
        even = []
        for position, e in enumerate(exponents[:dim]):
            if e:
                even.append((Generator(GeneratorKind.V2H, position + 1), e))
        for position, e in enumerate(exponents[dim:]):
            if e:
                even.append((Generator(GeneratorKind.V2A, position + 1), e))
        terms[Monomial(tuple(sorted(even, key=lambda item: item[0].sort_key)))] = c
    return WeilElement(terms, EXACT).with_field(field)


def from_element(x: WeilElement, dim: int) -> Jet:
    jring = jet_ring(dim)
    terms: dict[tuple[int, ...], object] = {}
    for m, c in x.items():
        if m.odd or m.conormal_degree:
            raise ValueError(f"{m} is not a function of the base coordinates")
        exponents = [0] * (2 * dim)
        for g, e in m.even:
            offset = 0 if g.kind is GeneratorKind.V2H else dim
            exponents[offset + g.index - 1] = e
        terms[tuple(exponents)] = QQ_I.convert(c)
    return jring.from_dict(terms)


@dataclass(frozen=True)
class MetricJet:
    dim: int
    order: int
    g: JetMatrix

    def __post_init__(self) -> None:
        if len(self.g) != self.dim or any(len(row) != self.dim for row in self.g):
            raise ValueError(f"metric jet must be {self.dim}x{self.dim}")

    @classmethod
    def from_rows(cls, dim: int, order: int, rows: Sequence[Sequence[Jet]]) -> "MetricJet":
        return cls(dim, order, tuple(tuple(truncate(e, order) for e in row) for row in rows))

    def at_origin(self) -> list[list]:
        return values_at_origin(self.g)

    def hermitian_defect(self) -> tuple[int, int, Jet] | None:
        for i in range(self.dim):
            for j in range(self.dim):
                defect = self.g[i][j] - conjugate(self.g[j][i])
                if defect:
                    return i, j, defect
        return None


@dataclass(frozen=True)
class ChristoffelJet:
    """D₁(s_k) = -Σ gamma[k][i][j] s_i dz_j - Σ gamma_mixed[k][i][j] s_i dz̄_j."""

    dim: int
    order: int
    gamma: tuple[JetMatrix, ...]
    gamma_mixed: tuple[JetMatrix, ...] | None = None

    def mixed(self, k: int, i: int, j: int) -> Jet:
        if self.gamma_mixed is None:
            return jet_ring(self.dim).zero
        return self.gamma_mixed[k][i][j]

    @classmethod
    def zero(cls, dim: int, order: int) -> "ChristoffelJet":
        zero = jet_ring(dim).zero
        block = tuple(tuple(zero for _ in range(dim)) for _ in range(dim))
        return cls(dim, order, tuple(block for _ in range(dim)))


@dataclass(frozen=True)
class CurvatureJet:
    """Coefficients of s_a dz_l dz_j (l<j), s_a dz_l dz̄_j and s_a dz̄_l dz̄_j in R(s_k).

    Indexed as ``r11[k][a][l][j]``; ``r20`` and ``r02`` only fill l < j.
    """

    dim: int
    order: int
    r20: dict[tuple[int, int, int, int], Jet]
    r11: dict[tuple[int, int, int, int], Jet]
    r02: dict[tuple[int, int, int, int], Jet]

    def is_flat(self) -> bool:
        return not any(
            f for table in (self.r20, self.r11, self.r02) for f in table.values()
        )
