"""Graded derivations of the Weil algebra.

A derivation is fixed by its images on generators and its parity; application
follows the graded Leibniz rule. Applied to dressed elements the result is
dressed by the totalization rule of :mod:`weilforge.algebra.hodge`.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from weilforge.algebra.element import Monomial, WeilElement, multiply
from weilforge.algebra.generators import (
    BASE_KINDS,
    CONORMAL_KINDS,
    FORM_KINDS,
    THETA_KINDS,
    Generator,
    GeneratorKind,
    all_generators,
    generators,
)
from weilforge.algebra.hodge import WeaklyHodgeMap, dress_images
from weilforge.core.errors import MissingGeneratorImageError


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    def __mul__(self, other: "Parity") -> "Parity":
        return Parity.EVEN if self is other else Parity.ODD


@dataclass(frozen=True)
class Derivation:
    parity: Parity
    images: Mapping[Generator, WeilElement]
    zero_kinds: frozenset[GeneratorKind] = frozenset()
    name: str = "D"
    max_total: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def image(self, generator: Generator) -> WeilElement:
        if generator in self.images:
            return self.images[generator]
        if generator.kind in self.zero_kinds:
            return WeilElement.zero()
        raise MissingGeneratorImageError(
            f"{self.name} has no image for generator {generator}",
            details={"generator": generator.name},
        )

    def __call__(self, x: WeilElement) -> WeilElement:
        result = WeilElement.zero(x.field)
        for m, c in x.items():
            image = self._apply_monomial(m.undressed())
            if m.dressing is not None:
                image = dress_images(m, image)
            result = result + image.scale(c)
        return result

    def _apply_monomial(self, m: Monomial) -> WeilElement:
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        result = WeilElement.zero()
        odd_tail = WeilElement({Monomial(odd=m.odd): 1})
        for g, e in m.even:
            image = self.image(g)
            if not image:
                continue
            rest = WeilElement({m.without_even(g): e})
            term = multiply(
                multiply(rest, image, max_total=self.max_total),
                odd_tail,
                max_total=self.max_total,
            )
            result = result + term
        even_head = Monomial(even=m.even)
        for position, g in enumerate(m.odd):
            image = self.image(g)
            if not image:
                continue
            sign = -1 if self.parity is Parity.ODD and position % 2 else 1
            left = WeilElement({Monomial(even_head.even, m.odd[:position]): sign})
            right = WeilElement({Monomial(odd=m.odd[position + 1 :]): 1})
            term = multiply(
                multiply(left, image, max_total=self.max_total),
                right,
                max_total=self.max_total,
            )
            result = result + term
        result = result.truncate(self.max_total)
        self._cache[m] = result
        return result

    def truncated(self, max_total: int | None) -> "Derivation":
        return Derivation(self.parity, self.images, self.zero_kinds, self.name, max_total)

    def as_weakly_hodge(self, weight: int) -> WeaklyHodgeMap:
        return WeaklyHodgeMap(weight, self.__call__, None, self.name)


def compose(outer: Derivation, inner: Derivation, x: WeilElement) -> WeilElement:
    return outer(inner(x))


def anticommutator(
    first: Derivation, second: Derivation, support: Iterable[Generator]
) -> Derivation:
    """{P, Q} = PQ + (-1)^{|P||Q|} QP as a derivation on ``support``."""
    parity = first.parity * second.parity
    sign = -1 if first.parity is Parity.EVEN or second.parity is Parity.EVEN else 1
    images = {}
    for g in support:
        x = WeilElement.generator(g)
        images[g] = first(second(x)) + second(first(x)).scale(sign)
    return Derivation(parity, images, frozenset(), f"{{{first.name},{second.name}}}")


def canonical_C(dim: int) -> Derivation:
    """C(s_i) = dz_i, C(s̄_i) = -dz̄_i; zero on V1, V2, V4."""
    images = {}
    for s, dz in zip(
        generators(GeneratorKind.V3H, dim), generators(GeneratorKind.V1H, dim), strict=True
    ):
        images[s] = WeilElement.generator(dz)
    for sb, dzb in zip(
        generators(GeneratorKind.V3A, dim), generators(GeneratorKind.V1A, dim), strict=True
    ):
        images[sb] = -WeilElement.generator(dzb)
    return Derivation(
        Parity.ODD, images, BASE_KINDS | FORM_KINDS | THETA_KINDS, "C"
    )


def _sigma(dim: int, *, holomorphic: bool, antiholomorphic: bool, name: str) -> Derivation:
    images = {}
    if holomorphic:
        for dz, s in zip(
            generators(GeneratorKind.V1H, dim), generators(GeneratorKind.V3H, dim), strict=True
        ):
            images[dz] = WeilElement.generator(s)
    if antiholomorphic:
        for dzb, sb in zip(
            generators(GeneratorKind.V1A, dim), generators(GeneratorKind.V3A, dim), strict=True
        ):
            images[dzb] = -WeilElement.generator(sb)
    return Derivation(
        Parity.ODD, images, BASE_KINDS | CONORMAL_KINDS | THETA_KINDS | FORM_KINDS, name
    )


def canonical_sigma(dim: int) -> Derivation:
    """σ(dz_i) = s_i, σ(dz̄_i) = -s̄_i; zero on S¹, V2, V4."""
    return _sigma(dim, holomorphic=True, antiholomorphic=True, name="sigma")


def sigma_holomorphic(dim: int) -> Derivation:
    return _sigma(dim, holomorphic=True, antiholomorphic=False, name="sigma_hol")


def sigma_antiholomorphic(dim: int) -> Derivation:
    return _sigma(dim, holomorphic=False, antiholomorphic=True, name="sigma_anti")


def d_r(dim: int) -> Derivation:
    """dʳ(s_i) = θ_i, dʳ(s̄_i) = θ̄_i; zero on V1, V2, V4."""
    images = {}
    for s, th in zip(
        generators(GeneratorKind.V3H, dim), generators(GeneratorKind.V4H, dim), strict=True
    ):
        images[s] = WeilElement.generator(th)
    for sb, thb in zip(
        generators(GeneratorKind.V3A, dim), generators(GeneratorKind.V4A, dim), strict=True
    ):
        images[sb] = WeilElement.generator(thb)
    return Derivation(Parity.ODD, images, BASE_KINDS | FORM_KINDS | THETA_KINDS, "d_r")


def iota_conjugate(op: Derivation, dim: int, *, with_theta: bool = False) -> Derivation:
    images = {}
    for g in all_generators(dim, with_theta=with_theta):
        x = WeilElement.generator(g)
        images[g] = op(x.iota()).iota()
    return Derivation(op.parity, images, frozenset(), f"{op.name}^iota", op.max_total)


def zero_derivation(parity: Parity = Parity.ODD) -> Derivation:
    return Derivation(parity, {}, frozenset(GeneratorKind), "0")
