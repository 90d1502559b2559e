"""
Polynomials on the quantum plane and on quantum 2x2 matrices

Coefficients are HSeries; keys are tuples of twice-integers (and powers).
"""

from typing import Dict, Iterable, Mapping, Optional, Tuple, TypeVar

import numpy as np

from src.middleware.errors import InvalidSpin
from src.models.series import DEFAULT_ORDER, HSeries

Key = Tuple[int, ...]
P = TypeVar("P", bound="SeriesPolynomial")


class SeriesPolynomial:
    """Sparse map key -> HSeries with a fixed working order"""

    key_names: Tuple[str, ...] = ()

    def __init__(self, terms: Optional[Mapping[Key, HSeries]] = None, order: int = DEFAULT_ORDER):
        self.order = order
        self.terms: Dict[Key, HSeries] = {}
        for key, value in (terms or {}).items():
            key = tuple(int(k) for k in key)
            self._validate_key(key)
            if not isinstance(value, HSeries):
                value = HSeries.constant(float(value), order)
            self.order = min(self.order, value.order)
            self.terms[key] = value
        self.terms = {key: value.truncate(self.order) for key, value in self.terms.items()}

    def _validate_key(self, key: Key):
        if len(key) != len(self.key_names):
            raise InvalidSpin(f"{type(self).__name__} keys need {len(self.key_names)} entries, got {key}")

    def _new(self: P, terms: Mapping[Key, HSeries], order: int) -> P:
        return type(self)(terms, order)

    @classmethod
    def basis_element(cls: type, *key: int, order: int = DEFAULT_ORDER):
        return cls({tuple(key): HSeries.one(order)}, order)

    def coefficient(self, *key: int) -> HSeries:
        return self.terms.get(tuple(key), HSeries.zero(self.order))

    def sorted_items(self) -> Iterable[Tuple[Key, HSeries]]:
        return sorted(self.terms.items())

    def __add__(self: P, other: P) -> P:
        order = min(self.order, other.order)
        terms = {key: value.truncate(order) for key, value in self.terms.items()}
        for key, value in other.terms.items():
            terms[key] = terms[key] + value if key in terms else value.truncate(order)
        return self._new(terms, order)

    def __sub__(self: P, other: P) -> P:
        return self + other.scale(-1.0)

    def __neg__(self: P) -> P:
        return self.scale(-1.0)

    def scale(self: P, factor) -> P:
        if isinstance(factor, HSeries):
            order = min(self.order, factor.order)
            return self._new({k: v * factor for k, v in self.terms.items()}, order)
        return self._new({k: v.scale(factor) for k, v in self.terms.items()}, self.order)

    def truncate(self: P, order: int) -> P:
        return self._new({k: v.truncate(order) for k, v in self.terms.items()}, min(order, self.order))

    def classical_limit(self: P) -> P:
        return self._new({k: v.classical_limit() for k, v in self.terms.items()}, self.order)

    def pruned(self: P, tol: float = 0.0) -> P:
        """Drop terms whose coefficients all vanish within tol"""
        return self._new({k: v for k, v in self.terms.items() if not v.is_zero(tol)}, self.order)

    def max_deviation(self, other: "SeriesPolynomial") -> float:
        keys = set(self.terms) | set(other.terms)
        if not keys:
            return 0.0
        return max(self.coefficient(*key).max_deviation(other.coefficient(*key)) for key in keys)

    def allclose(self, other: "SeriesPolynomial", tol: float = 1e-9) -> bool:
        return self.max_deviation(other) <= tol

    def exactly_equal(self, other: "SeriesPolynomial") -> bool:
        """Coefficientwise equality after dropping exact zeros"""
        mine = self.pruned().terms
        theirs = other.pruned().terms
        if set(mine) != set(theirs):
            return False
        order = min(self.order, other.order)
        return all(np.array_equal(mine[k].coeffs[:order], theirs[k].coeffs[:order]) for k in mine)

    def __repr__(self):
        return f"{type(self).__name__}({len(self.terms)} terms, order={self.order})"


class PlanePoly(SeriesPolynomial):
    """Quantum-plane element in the irreducible basis T^j_m, keys (2j, 2m)"""

    key_names = ("two_j", "two_m")

    def _validate_key(self, key: Key):
        super()._validate_key(key)
        two_j, two_m = key
        if two_j < 0 or abs(two_m) > two_j or (two_j - two_m) % 2:
            raise InvalidSpin(f"(2j, 2m) = {key} is not a valid plane basis label")

    @property
    def degree(self) -> int:
        return max((key[0] for key in self.terms), default=0)

    def blocks(self) -> Dict[int, np.ndarray]:
        """2j -> series coefficient vector of shape (order, 2j+1), ascending 2m"""
        out: Dict[int, np.ndarray] = {}
        for (two_j, two_m), value in self.terms.items():
            block = out.setdefault(two_j, np.zeros((self.order, two_j + 1)))
            block[:, (two_m + two_j) // 2] += value.coeffs[: self.order]
        return out

    @classmethod
    def from_blocks(cls, blocks: Mapping[int, np.ndarray], order: int) -> "PlanePoly":
        terms = {}
        for two_j, block in sorted(blocks.items()):
            for index in range(two_j + 1):
                column = block[:order, index]
                if np.any(column != 0.0):
                    terms[(two_j, 2 * index - two_j)] = HSeries(column)
        return cls(terms, order)


class MonomialPoly(SeriesPolynomial):
    """Quantum-plane element in ordered monomials x^k y^l, keys (k, l)"""

    key_names = ("k", "l")

    def _validate_key(self, key: Key):
        super()._validate_key(key)
        if key[0] < 0 or key[1] < 0:
            raise InvalidSpin(f"monomial exponents must be nonnegative, got {key}")


class Mq2Poly(SeriesPolynomial):
    """Element of quantum 2x2 matrices in the basis det_q^k T^{(j,j)}_{mm'}

    Keys are (2j, 2m, 2m', k).
    """

    key_names = ("two_j", "two_m", "two_mp", "det_pow")

    def _validate_key(self, key: Key):
        super()._validate_key(key)
        two_j, two_m, two_mp, det_pow = key
        valid = (
            two_j >= 0
            and det_pow >= 0
            and abs(two_m) <= two_j
            and abs(two_mp) <= two_j
            and (two_j - two_m) % 2 == 0
            and (two_j - two_mp) % 2 == 0
        )
        if not valid:
            raise InvalidSpin(f"(2j, 2m, 2m', k) = {key} is not a valid basis label")

    @property
    def degree(self) -> int:
        return max((key[0] + 2 * key[3] for key in self.terms), default=0)

    def blocks(self) -> Dict[Tuple[int, int], np.ndarray]:
        """(2j, k) -> series coefficient matrix of shape (order, 2j+1, 2j+1) indexed [m, m']"""
        out: Dict[Tuple[int, int], np.ndarray] = {}
        for (two_j, two_m, two_mp, det_pow), value in self.terms.items():
            block = out.setdefault((two_j, det_pow), np.zeros((self.order, two_j + 1, two_j + 1)))
            block[:, (two_m + two_j) // 2, (two_mp + two_j) // 2] += value.coeffs[: self.order]
        return out

    @classmethod
    def from_blocks(cls, blocks: Mapping[Tuple[int, int], np.ndarray], order: int) -> "Mq2Poly":
        terms = {}
        for (two_j, det_pow), block in sorted(blocks.items()):
            for row in range(two_j + 1):
                for col in range(two_j + 1):
                    column = block[:order, row, col]
                    if np.any(column != 0.0):
                        terms[(two_j, 2 * row - two_j, 2 * col - two_j, det_pow)] = HSeries(column)
        return cls(terms, order)


class MonomialExpansion(SeriesPolynomial):
    """Ordered monomials a^p b^q c^r d^s of the generators, keys (p, q, r, s)"""

    key_names = ("a", "b", "c", "d")

    def _validate_key(self, key: Key):
        super()._validate_key(key)
        if min(key) < 0:
            raise InvalidSpin(f"monomial exponents must be nonnegative, got {key}")
