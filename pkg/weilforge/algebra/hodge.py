"""Weight-graded Hodge linear algebra.

Hodge bidegrees, the dual universal structures W_k* with their basis u_p, the
embeddings gamma_l / gamma_r and the totalization of weakly Hodge maps.
"""

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from enum import Enum

from sympy import QQ

from weilforge.algebra import linalg
from weilforge.algebra.element import Monomial, WeilElement
from weilforge.algebra.scalars import EXACT
from weilforge.core.errors import NotWeaklyHodgeError
from weilforge.utils.checks import ValidationResult, failed, passed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HodgeBidegree:
    p: int
    q: int

    @property
    def weight(self) -> int:
        return self.p + self.q

    def __add__(self, other: "HodgeBidegree") -> "HodgeBidegree":
        return HodgeBidegree(self.p + other.p, self.q + other.q)

    def conjugate(self) -> "HodgeBidegree":
        return HodgeBidegree(self.q, self.p)


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class DualBasisElement:
    level: int
    index: int

    def __post_init__(self) -> None:
        if self.level < 0 or not 0 <= self.index <= self.level:
            raise IndexError(f"u_{self.index} is not a basis element of W_{self.level}*")

    @property
    def bidegree(self) -> HodgeBidegree:
        return HodgeBidegree(-self.index, self.index - self.level)

    def conjugate(self) -> "DualBasisElement":
        return DualBasisElement(self.level, self.level - self.index)

    def __mul__(self, other: "DualBasisElement") -> "DualBasisElement":
        """The product can: W_a* ⊗ W_b* → W_{a+b}*."""
        return DualBasisElement(self.level + other.level, self.index + other.index)

    def __str__(self) -> str:
        return f"u_{self.index}^({self.level})"


def dual_basis(level: int) -> list[DualBasisElement]:
    if level < 0:
        raise ValueError("W_k* needs k >= 0")
    return [DualBasisElement(level, p) for p in range(level + 1)]


def gamma_embed(side: Side | str, element: DualBasisElement) -> DualBasisElement:
    side = Side(side)
    if side is Side.LEFT:
        return DualBasisElement(element.level + 1, element.index + 1)
    return DualBasisElement(element.level + 1, element.index)


def _iterate_gamma(side: Side, element: DualBasisElement, times: int):
    for _ in range(times):
        element = gamma_embed(side, element)
    return element


def _embedding_matrix(side: Side, source_level: int, times: int) -> list[list[int]]:
    target_level = source_level + times
    columns = [
        _iterate_gamma(side, u, times).index for u in dual_basis(source_level)
    ]
    return [
        [1 if column == row else 0 for column in columns]
        for row in range(target_level + 1)
    ]


def verify_cap_cup(p: int, q: int) -> ValidationResult:
    """Exactness of 0 → C → W_p* ⊕ W_q* → W_{p+q}* → 0."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    left = _embedding_matrix(Side.LEFT, p, q)
    right = _embedding_matrix(Side.RIGHT, q, p)
    stacked = [
        [QQ(v) for v in left_row] + [QQ(-v) for v in right_row]
        for left_row, right_row in zip(left, right, strict=True)
    ]
    n_cols = (p + 1) + (q + 1)
    sum_dim = linalg.rank(stacked, EXACT, n_cols)
    kernel = linalg.nullspace(stacked, EXACT, n_cols)
    images = []
    for vector in kernel:
        image = [
            sum(int(left[row][c]) * vector[c] for c in range(p + 1))
            for row in range(p + q + 1)
        ]
        images.append(image)
    intersection = [
        str(DualBasisElement(p + q, row))
        for image in images
        for row, value in enumerate(image)
        if value
    ]
    details = {
        "sum_dim": sum_dim,
        "intersection_dim": len(kernel),
        "intersection": intersection,
    }
    if sum_dim != p + q + 1:
        return failed("not_surjective", **details)
    if len(kernel) != 1:
        return failed("intersection_not_one_dimensional", **details)
    return passed(**details)


def dressing_shift(source: Monomial, image: Monomial) -> int:
    return image.hodge[0] - source.hodge[0]


def dress_images(source: Monomial, image: WeilElement) -> WeilElement:
    """Dress the image of a dressed source term so that Hodge type is kept.

    This is Σ f^{a,b}(x) ⊗ γ_l^a γ_r^b(u_i): the term of H-type (a, b) lands on
    u_{i+a}.
    """
    if source.dressing is None:
        return image

    def _dress(target: Monomial) -> tuple[int, Monomial]:
        index = source.dressing + dressing_shift(source, target)
        if not 0 <= index <= target.level:
            raise NotWeaklyHodgeError(
                f"map is not weakly Hodge: {source} -> {target}",
                details={"source": str(source), "target": str(target)},
            )
        return 1, target.with_dressing(index)

    return image.map_monomials(_dress)


def dress(element: WeilElement, hodge_type: int) -> WeilElement:
    """Inverse of the projection P on the piece of Hodge type ``hodge_type``."""

    def _dress(m: Monomial) -> tuple[int, Monomial]:
        index = m.hodge[0] - hodge_type
        if not 0 <= index <= m.level:
            raise NotWeaklyHodgeError(
                f"{m} has no dressing of Hodge type {hodge_type}",
                details={"monomial": str(m), "hodge_type": hodge_type},
            )
        return 1, m.with_dressing(index)

    return element.map_monomials(_dress)


@dataclass(frozen=True)
class WeaklyHodgeMap:
    """A linear map acting on undressed elements, with its weight.

    ``source_weight`` is None for graded maps (derivations) defined on every
    weight at once.
    """

    weight: int
    action: Callable[[WeilElement], WeilElement]
    source_weight: int | None = None
    name: str = "f"

    @classmethod
    def between(
        cls,
        source_weight: int,
        target_weight: int,
        action: Callable[[WeilElement], WeilElement],
        name: str = "f",
    ) -> "WeaklyHodgeMap":
        return cls(target_weight - source_weight, action, source_weight, name)

    @classmethod
    def from_images(
        cls,
        source_weight: int,
        target_weight: int,
        images: Mapping[Monomial, WeilElement],
        name: str = "f",
    ) -> "WeaklyHodgeMap":
        def action(x: WeilElement) -> WeilElement:
            result = WeilElement.zero(x.field)
            for m, c in x.items():
                if m not in images:
                    raise KeyError(f"{name} is not defined on {m}")
                result = result + images[m].scale(c)
            return result

        return cls.between(source_weight, target_weight, action, name)

    @classmethod
    def identity(cls, weight: int | None = None) -> "WeaklyHodgeMap":
        return cls(0, lambda x: x, weight, "id")

    @property
    def target_weight(self) -> int | None:
        if self.source_weight is None:
            return None
        return self.source_weight + self.weight

    def __call__(self, x: WeilElement) -> WeilElement:
        if x.is_dressed:
            return totalize(self, x)
        return self.action(x)

    def compose(self, inner: "WeaklyHodgeMap") -> "WeaklyHodgeMap":
        return WeaklyHodgeMap(
            inner.weight + self.weight,
            lambda x: self.action(inner.action(x)),
            inner.source_weight,
            f"{self.name}∘{inner.name}",
        )


def _term_weight(m: Monomial) -> int:
    return sum(m.hodge)


def h_type_components(
    f: WeaklyHodgeMap,
) -> dict[tuple[int, int], WeaklyHodgeMap]:
    """The H-type decomposition f = Σ_{a+b=w} f^{a,b}."""
    if f.weight < 0:
        raise ValueError("no weakly Hodge maps of negative weight")

    def component(a: int, b: int) -> WeaklyHodgeMap:
        def action(x: WeilElement) -> WeilElement:
            result = WeilElement.zero(x.field)
            for m, c in x.items():
                image = f.action(WeilElement({m.undressed(): c}, x.field))
                result = result + image.filter(
                    lambda y, m=m: (
                        y.hodge[0] - m.hodge[0],
                        y.hodge[1] - m.hodge[1],
                    )
                    == (a, b)
                )
            return result

        return WeaklyHodgeMap(f.weight, action, f.source_weight, f"{f.name}^{a},{b}")

    return {(a, f.weight - a): component(a, f.weight - a) for a in range(f.weight + 1)}


def check_weakly_hodge(
    f: WeaklyHodgeMap, basis: list[Monomial]
) -> ValidationResult:
    """Every image term must shift the bidegree by (a, b) with a, b >= 0."""
    for m in basis:
        image = f.action(WeilElement({m.undressed(): 1}))
        for y, _ in image.items():
            a = y.hodge[0] - m.hodge[0]
            b = y.hodge[1] - m.hodge[1]
            if a < 0 or b < 0 or a + b != f.weight:
                return failed(
                    "not_weakly_hodge", source=str(m), target=str(y), shift=[a, b]
                )
    return passed(checked=len(basis))


def totalize(f: WeaklyHodgeMap, dressed_source: WeilElement) -> WeilElement:
    if f.weight < 0:
        raise ValueError("no weakly Hodge maps of negative weight")
    result = WeilElement.zero(dressed_source.field)
    for m, c in dressed_source.items():
        if m.dressing is None:
            raise ValueError(f"totalize needs a dressed source, got {m}")
        if f.source_weight is not None and _term_weight(m) != f.source_weight:
            raise ValueError(
                f"weight mismatch: {f.name} expects weight {f.source_weight}, "
                f"got {m}"
            )
        image = f.action(WeilElement({m.undressed(): c}, dressed_source.field))
        result = result + dress_images(m, image)
    return result
