"""
Spin labels, weights and the su2 generator names
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Tuple, Union

from src.middleware.errors import InvalidSpin


class Generator(Enum):
    """Generators of su2 (and of its hbar-adic deformation)"""

    E = "E"
    F = "F"
    H = "H"

    @classmethod
    def parse(cls, text: str) -> "Generator":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise InvalidSpin(f"unknown generator '{text}', expected E, F or H")


Word = Tuple[Generator, ...]


def parse_word(text: str) -> Word:
    """'EFH' or 'E,F,H' -> (E, F, H); the empty word is the unit"""
    letters = [c for c in text.replace(",", "").replace(" ", "")]
    return tuple(Generator.parse(c) for c in letters)


def parse_half_integer(text: Union[str, int, float, Fraction]) -> Fraction:
    """'1/2', '3/2', '1', 0.5 -> Fraction; rejects anything not in Z/2"""
    try:
        value = Fraction(str(text).strip()) if not isinstance(text, Fraction) else text
    except (ValueError, ZeroDivisionError):
        raise InvalidSpin(f"'{text}' is not a half-integer")
    if (2 * value).denominator != 1:
        raise InvalidSpin(f"'{text}' is not a half-integer")
    return value


@dataclass(frozen=True, order=True)
class SpinLabel:
    """Spin j stored as the integer 2j"""

    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, int) or self.two_j < 0:
            raise InvalidSpin(f"2j must be a nonnegative integer, got {self.two_j!r}")

    @classmethod
    def parse(cls, text: Union[str, int, float, Fraction]) -> "SpinLabel":
        value = parse_half_integer(text)
        if value < 0:
            raise InvalidSpin(f"spin must be nonnegative, got {text}")
        return cls(int(2 * value))

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def weights(self) -> Tuple[int, ...]:
        """All 2m in ascending order"""
        return tuple(range(-self.two_j, self.two_j + 1, 2))

    def index(self, two_m: int) -> int:
        """Position of weight 2m in the ascending weight basis"""
        if not self.has_weight(two_m):
            raise InvalidSpin(f"2m={two_m} is not a weight of spin {self}")
        return (two_m + self.two_j) // 2

    def has_weight(self, two_m: int) -> bool:
        return abs(two_m) <= self.two_j and (two_m - self.two_j) % 2 == 0

    def __str__(self):
        return str(self.j)


def coupled_spins(j1: SpinLabel, j2: SpinLabel) -> Tuple[SpinLabel, ...]:
    """Spins in the decomposition of V^{j1} (x) V^{j2}, ascending"""
    return tuple(
        SpinLabel(two_j) for two_j in range(abs(j1.two_j - j2.two_j), j1.two_j + j2.two_j + 1, 2)
    )


def spins_up_to(bound: SpinLabel) -> Iterator[SpinLabel]:
    for two_j in range(bound.two_j + 1):
        yield SpinLabel(two_j)


def tensor_weights(*spins: SpinLabel) -> Tuple[Tuple[int, ...], ...]:
    """Ordered tensor basis: lexicographic, first factor major, each ascending in 2m"""
    basis: Tuple[Tuple[int, ...], ...] = ((),)
    for spin in spins:
        basis = tuple(labels + (two_m,) for labels in basis for two_m in spin.weights)
    return basis


def format_weight(two_m: int) -> str:
    return str(Fraction(two_m, 2))
