"""Sparse elements of the (totalized) Weil algebra at a point.

A monomial is a commutative part (exponents of the even generators), an
ordered exterior part (odd generators, strictly increasing) and an optional
dressing index ``i`` of the dual universal Hodge structure ``W_k*`` where
``k`` is the number of 1-form factors.
"""

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

from weilforge.algebra.generators import (
    BASE_KINDS,
    CONJUGATE_KIND,
    CONORMAL_KINDS,
    FORM_KINDS,
    IOTA_SIGN,
    THETA_KINDS,
    Generator,
    GeneratorKind,
)
from weilforge.algebra.scalars import (
    EXACT,
    Scalar,
    ScalarField,
    common_field,
    to_complex,
)

EvenPart = tuple[tuple[Generator, int], ...]
OddPart = tuple[Generator, ...]


@dataclass(frozen=True)
class Monomial:
    even: EvenPart = ()
    odd: OddPart = ()
    dressing: int | None = None

    @classmethod
    def of(cls, *factors: Generator, dressing: int | None = None) -> "Monomial":
        """Build a monomial from factors in the given order, dropping the sign.

        Use :func:`monomial_with_sign` when the order of odd factors matters.
        """
        sign, monomial = monomial_with_sign(factors, dressing=dressing)
        if sign == 0:
            raise ValueError("repeated odd factor")
        return monomial

    @cached_property
    def sort_key(self) -> tuple:
        return (
            tuple((g.sort_key, e) for g, e in self.even),
            tuple(g.sort_key for g in self.odd),
            -1 if self.dressing is None else self.dressing,
        )

    def factors(self) -> Iterator[tuple[Generator, int]]:
        yield from self.even
        for g in self.odd:
            yield g, 1

    @cached_property
    def form_degree(self) -> int:
        return sum(1 for g in self.odd if g.kind in FORM_KINDS)

    @cached_property
    def theta_degree(self) -> int:
        return sum(1 for g in self.odd if g.kind in THETA_KINDS)

    @cached_property
    def antiholomorphic_forms(self) -> int:
        return sum(1 for g in self.odd if g.kind is GeneratorKind.V1A)

    @cached_property
    def hodge(self) -> tuple[int, int]:
        p = q = 0
        for g, e in self.factors():
            p += e * g.hodge[0]
            q += e * g.hodge[1]
        return p, q

    @cached_property
    def augmentation(self) -> tuple[int, int]:
        p = q = 0
        for g, e in self.factors():
            p += e * g.augmentation[0]
            q += e * g.augmentation[1]
        return p, q

    @property
    def augmentation_degree(self) -> int:
        return sum(self.augmentation)

    @cached_property
    def total_degree(self) -> int:
        return sum(e * g.total_degree for g, e in self.factors())

    @cached_property
    def base_degree(self) -> int:
        return sum(e for g, e in self.even if g.kind in BASE_KINDS)

    @cached_property
    def conormal_degree(self) -> int:
        return sum(e for g, e in self.even if g.kind in CONORMAL_KINDS)

    @property
    def parity(self) -> int:
        return len(self.odd) % 2

    @property
    def level(self) -> int:
        return self.form_degree

    @property
    def dressed_hodge(self) -> tuple[int, int]:
        p, q = self.hodge
        if self.dressing is None:
            return p, q
        return p - self.dressing, q + self.dressing - self.level

    @property
    def hodge_type(self) -> int:
        return self.dressed_hodge[0]

    def undressed(self) -> "Monomial":
        if self.dressing is None:
            return self
        return Monomial(self.even, self.odd)

    def with_dressing(self, dressing: int | None) -> "Monomial":
        return Monomial(self.even, self.odd, dressing)

    def exponent(self, generator: Generator) -> int:
        for g, e in self.even:
            if g == generator:
                return e
        return 1 if generator in self.odd else 0

    def without_even(self, generator: Generator) -> "Monomial":
        even = []
        for g, e in self.even:
            if g == generator:
                if e > 1:
                    even.append((g, e - 1))
            else:
                even.append((g, e))
        return Monomial(tuple(even), ())

    def __str__(self) -> str:
        parts = [g.name if e == 1 else f"{g.name}^{e}" for g, e in self.even]
        parts.extend(g.name for g in self.odd)
        text = " ".join(parts) or "1"
        if self.dressing is not None:
            text += f" (x) u{self.dressing}^({self.level})"
        return text


def _merge_odd(left: OddPart, right: OddPart) -> tuple[int, OddPart]:
    if not left:
        return 1, right
    if not right:
        return 1, left
    if set(left) & set(right):
        return 0, ()
    sign = 1
    merged: list[Generator] = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i].sort_key < right[j].sort_key:
            merged.append(left[i])
            i += 1
        else:
            # moving right[j] past the remaining len(left) - i factors
            if (len(left) - i) % 2:
                sign = -sign
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return sign, tuple(merged)


def _merge_even(left: EvenPart, right: EvenPart) -> EvenPart:
    if not left:
        return right
    if not right:
        return left
    exponents: dict[Generator, int] = dict(left)
    for g, e in right:
        exponents[g] = exponents.get(g, 0) + e
    return tuple(sorted(exponents.items(), key=lambda item: item[0].sort_key))


def _combine_dressing(a: Monomial, b: Monomial) -> int | None:
    if a.dressing is None and b.dressing is None:
        return None
    if a.dressing is not None and b.dressing is not None:
        return a.dressing + b.dressing
    undressed = a if a.dressing is None else b
    if undressed.form_degree:
        raise ValueError("incompatible dressing: undressed factor of positive degree")
    return a.dressing if a.dressing is not None else b.dressing


def multiply_monomials(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    sign, odd = _merge_odd(a.odd, b.odd)
    if sign == 0:
        return 0, Monomial()
    return sign, Monomial(
        _merge_even(a.even, b.even), odd, _combine_dressing(a, b)
    )


def monomial_with_sign(
    factors: Iterable[Generator], *, dressing: int | None = None
) -> tuple[int, Monomial]:
    sign, result = 1, Monomial()
    for g in factors:
        factor = Monomial(odd=(g,)) if g.is_odd else Monomial(even=((g, 1),))
        step, result = multiply_monomials(result, factor)
        sign *= step
        if sign == 0:
            return 0, Monomial()
    return sign, result.with_dressing(dressing)


class WeilElement:
    __slots__ = ("_terms", "field")

    def __init__(
        self,
        terms: Mapping[Monomial, Scalar] | None = None,
        field: ScalarField = EXACT,
    ):
        self.field = field
        cleaned: dict[Monomial, Scalar] = {}
        for monomial, value in (terms or {}).items():
            coefficient = field.coerce(value)
            if not field.is_zero(coefficient):
                cleaned[monomial] = coefficient
        self._terms = cleaned

    @classmethod
    def _trusted(cls, terms: dict[Monomial, Scalar], field: ScalarField):
        element = cls.__new__(cls)
        element.field = field
        element._terms = {m: c for m, c in terms.items() if not field.is_zero(c)}
        return element

    @classmethod
    def zero(cls, field: ScalarField = EXACT) -> "WeilElement":
        return cls._trusted({}, field)

    @classmethod
    def scalar(cls, value: Scalar = 1, field: ScalarField = EXACT) -> "WeilElement":
        return cls({Monomial(): value}, field)

    @classmethod
    def generator(
        cls, generator: Generator, field: ScalarField = EXACT
    ) -> "WeilElement":
        if generator.is_odd:
            return cls({Monomial(odd=(generator,)): 1}, field)
        return cls({Monomial(even=((generator, 1),)): 1}, field)

    @classmethod
    def monomial(
        cls, *factors: Generator, coefficient: Scalar = 1, dressing: int | None = None,
        field: ScalarField = EXACT,
    ) -> "WeilElement":
        sign, monomial = monomial_with_sign(factors, dressing=dressing)
        if sign == 0:
            return cls.zero(field)
        return cls({monomial: field.coerce(coefficient) * sign}, field)

    # mapping protocol ---------------------------------------------------

    def items(self) -> Iterable[tuple[Monomial, Scalar]]:
        return self._terms.items()

    def support(self) -> list[Monomial]:
        return sorted(self._terms, key=lambda m: m.sort_key)

    def coefficient(self, monomial: Monomial) -> Scalar:
        return self._terms.get(monomial, self.field.zero)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic ---------------------------------------------------------

    def _aligned(self, other: "WeilElement") -> tuple[ScalarField, dict, dict]:
        field = common_field(self.field, other.field)
        left = self._terms if self.field == field else self._convert(field)
        right = other._terms if other.field == field else other._convert(field)
        return field, left, right

    def _convert(self, field: ScalarField) -> dict[Monomial, Scalar]:
        return {m: field.coerce(c) for m, c in self._terms.items()}

    def with_field(self, field: ScalarField) -> "WeilElement":
        if field == self.field:
            return self
        return WeilElement._trusted(self._convert(field), field)

    def __add__(self, other: "WeilElement") -> "WeilElement":
        field, left, right = self._aligned(other)
        terms = dict(left)
        for m, c in right.items():
            terms[m] = terms[m] + c if m in terms else c
        return WeilElement._trusted(terms, field)

    def __sub__(self, other: "WeilElement") -> "WeilElement":
        return self + (-other)

    def __neg__(self) -> "WeilElement":
        return WeilElement._trusted({m: -c for m, c in self._terms.items()}, self.field)

    def scale(self, value: Scalar) -> "WeilElement":
        factor = self.field.coerce(value)
        return WeilElement._trusted(
            {m: c * factor for m, c in self._terms.items()}, self.field
        )

    def __mul__(self, other):
        if isinstance(other, WeilElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, value: Scalar) -> "WeilElement":
        divisor = self.field.coerce(value)
        return WeilElement._trusted(
            {m: c / divisor for m, c in self._terms.items()}, self.field
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeilElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:  # elements are values but not dictionary keys
        raise TypeError("WeilElement is unhashable")

    # term filters -------------------------------------------------------

    def filter(self, predicate: Callable[[Monomial], bool]) -> "WeilElement":
        return WeilElement._trusted(
            {m: c for m, c in self._terms.items() if predicate(m)}, self.field
        )

    def map_monomials(
        self, transform: Callable[[Monomial], tuple[Scalar, Monomial]]
    ) -> "WeilElement":
        terms: dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            factor, image = transform(m)
            value = c * self.field.coerce(factor)
            terms[image] = terms[image] + value if image in terms else value
        return WeilElement._trusted(terms, self.field)

    def truncate(self, max_total: int | None) -> "WeilElement":
        if max_total is None:
            return self
        return self.filter(lambda m: m.total_degree <= max_total)

    def total_part(self, degree: int) -> "WeilElement":
        return self.filter(lambda m: m.total_degree == degree)

    def augmentation_part(self, degree: int) -> "WeilElement":
        return self.filter(lambda m: m.augmentation_degree == degree)

    def project(self) -> "WeilElement":
        return self.map_monomials(lambda m: (1, m.undressed()))

    @property
    def is_dressed(self) -> bool:
        return any(m.dressing is not None for m in self._terms)

    # real structures ----------------------------------------------------

    def iota(self) -> "WeilElement":
        return self.map_monomials(_iota_monomial)

    def real_structure(self) -> "WeilElement":
        """ν: antilinear, swaps holomorphic and antiholomorphic generators."""
        terms: dict[Monomial, Scalar] = {}
        for m, c in self._terms.items():
            sign, image = _conjugate_monomial(m)
            value = self.field.conj(c) * sign
            terms[image] = terms[image] + value if image in terms else value
        return WeilElement._trusted(terms, self.field)

    def twisted_real_structure(self) -> "WeilElement":
        """ν' = ν∘ι*, the real structure commuting with the solved connection."""
        return self.iota().real_structure()

    # numerics -----------------------------------------------------------

    def norm(self) -> float:
        return sum(abs(to_complex(c)) ** 2 for c in self._terms.values()) ** 0.5

    def max_abs(self) -> float:
        return max((abs(to_complex(c)) for c in self._terms.values()), default=0.0)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in sorted(
            self._terms.items(), key=lambda item: item[0].sort_key
        ))


def _iota_monomial(m: Monomial) -> tuple[int, Monomial]:
    sign = 1
    for g, e in m.factors():
        if IOTA_SIGN[g.kind] < 0 and e % 2:
            sign = -sign
    return sign, m


def _conjugate_monomial(m: Monomial) -> tuple[int, Monomial]:
    even = tuple(
        sorted(
            ((Generator(CONJUGATE_KIND[g.kind], g.index), e) for g, e in m.even),
            key=lambda item: item[0].sort_key,
        )
    )
    sign, image = monomial_with_sign(
        Generator(CONJUGATE_KIND[g.kind], g.index) for g in m.odd
    )
    dressing = None if m.dressing is None else m.level - m.dressing
    return sign, Monomial(even, image.odd, dressing)


def multiply(
    a: WeilElement, b: WeilElement, *, max_total: int | None = None
) -> WeilElement:
    field, left, right = a._aligned(b)
    terms: dict[Monomial, Scalar] = {}
    for ma, ca in left.items():
        for mb, cb in right.items():
            if (
                max_total is not None
                and ma.total_degree + mb.total_degree > max_total
            ):
                continue
            sign, m = multiply_monomials(ma, mb)
            if sign == 0:
                continue
            value = ca * cb if sign > 0 else -(ca * cb)
            terms[m] = terms[m] + value if m in terms else value
    return WeilElement._trusted(terms, field)


def gen(name: str, field: ScalarField = EXACT) -> WeilElement:
    return WeilElement.generator(Generator.parse(name), field)


def dressed(element: WeilElement, dressing: int) -> WeilElement:
    return element.map_monomials(lambda m: (1, m.with_dressing(dressing)))
