import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property


class GeneratorKind(str, Enum):
    V2H = "z"
    V2A = "zb"
    V3H = "s"
    V3A = "sb"
    V1H = "dz"
    V1A = "dzb"
    V4H = "th"
    V4A = "thb"


KIND_ORDER: dict[GeneratorKind, int] = {
    kind: position for position, kind in enumerate(GeneratorKind)
}

ODD_KINDS = frozenset(
    {GeneratorKind.V1H, GeneratorKind.V1A, GeneratorKind.V4H, GeneratorKind.V4A}
)
FORM_KINDS = frozenset({GeneratorKind.V1H, GeneratorKind.V1A})
THETA_KINDS = frozenset({GeneratorKind.V4H, GeneratorKind.V4A})
BASE_KINDS = frozenset({GeneratorKind.V2H, GeneratorKind.V2A})
CONORMAL_KINDS = frozenset({GeneratorKind.V3H, GeneratorKind.V3A})

HODGE_BIDEGREE: dict[GeneratorKind, tuple[int, int]] = {
    GeneratorKind.V2H: (0, 0),
    GeneratorKind.V2A: (0, 0),
    GeneratorKind.V3H: (1, -1),
    GeneratorKind.V3A: (-1, 1),
    GeneratorKind.V1H: (1, 0),
    GeneratorKind.V1A: (0, 1),
    GeneratorKind.V4H: (1, 0),
    GeneratorKind.V4A: (0, 1),
}

AUGMENTATION_BIDEGREE: dict[GeneratorKind, tuple[int, int]] = {
    GeneratorKind.V2H: (0, 0),
    GeneratorKind.V2A: (0, 0),
    GeneratorKind.V3H: (1, 0),
    GeneratorKind.V3A: (0, 1),
    GeneratorKind.V1H: (1, 0),
    GeneratorKind.V1A: (0, 1),
    GeneratorKind.V4H: (0, 0),
    GeneratorKind.V4A: (0, 0),
}

TOTAL_DEGREE: dict[GeneratorKind, int] = {
    kind: 0 if kind in THETA_KINDS else 1 for kind in GeneratorKind
}

# (L-degree, B-degree) in the L•⊗B• model
FORM_BIDEGREE: dict[GeneratorKind, tuple[int, int]] = {
    kind: (1, 0) if kind in THETA_KINDS else (0, 1) if kind in FORM_KINDS else (0, 0)
    for kind in GeneratorKind
}

IOTA_SIGN: dict[GeneratorKind, int] = {
    kind: -1 if kind in CONORMAL_KINDS else 1 for kind in GeneratorKind
}

CONJUGATE_KIND: dict[GeneratorKind, GeneratorKind] = {
    GeneratorKind.V2H: GeneratorKind.V2A,
    GeneratorKind.V2A: GeneratorKind.V2H,
    GeneratorKind.V3H: GeneratorKind.V3A,
    GeneratorKind.V3A: GeneratorKind.V3H,
    GeneratorKind.V1H: GeneratorKind.V1A,
    GeneratorKind.V1A: GeneratorKind.V1H,
    GeneratorKind.V4H: GeneratorKind.V4A,
    GeneratorKind.V4A: GeneratorKind.V4H,
}

_NAME_PATTERN = re.compile(r"^(dzb|dz|zb|z|sb|s|thb|th)(\d+)$")


@dataclass(frozen=True)
class Generator:
    kind: GeneratorKind
    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")

    @classmethod
    def parse(cls, name: str) -> "Generator":
        match = _NAME_PATTERN.match(name.strip())
        if not match:
            raise ValueError(f"unknown generator {name!r}")
        return cls(GeneratorKind(match.group(1)), int(match.group(2)))

    @cached_property
    def sort_key(self) -> tuple[int, int]:
        return KIND_ORDER[self.kind], self.index

    @property
    def name(self) -> str:
        return f"{self.kind.value}{self.index}"

    @property
    def is_odd(self) -> bool:
        return self.kind in ODD_KINDS

    @property
    def hodge(self) -> tuple[int, int]:
        return HODGE_BIDEGREE[self.kind]

    @property
    def augmentation(self) -> tuple[int, int]:
        return AUGMENTATION_BIDEGREE[self.kind]

    @property
    def total_degree(self) -> int:
        return TOTAL_DEGREE[self.kind]

    def conjugate(self) -> "Generator":
        return Generator(CONJUGATE_KIND[self.kind], self.index)

    def __lt__(self, other: "Generator") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.name


def generators(kind: GeneratorKind, dim: int) -> list[Generator]:
    return [Generator(kind, index) for index in range(1, dim + 1)]


def all_generators(dim: int, *, with_theta: bool = False) -> list[Generator]:
    kinds = [
        kind for kind in GeneratorKind if with_theta or kind not in THETA_KINDS
    ]
    return [g for kind in kinds for g in generators(kind, dim)]


def degree_one_generators(dim: int) -> list[Generator]:
    return generators(GeneratorKind.V3H, dim) + generators(GeneratorKind.V3A, dim)
