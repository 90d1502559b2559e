"""
Truncated formal power series in the deformation parameter hbar
"""

import math
from numbers import Real
from typing import Iterable, List, Sequence, Union

import numpy as np

from src.middleware.errors import NoRealSqrt, NotInvertible

DEFAULT_ORDER = 8

Scalar = Union[int, float, np.floating]


class HSeries:
    """Power series c_0 + c_1 h + ... + c_{N-1} h^{N-1}, truncated at order N

    Values are immutable; arithmetic between series of different orders
    truncates to the smaller order.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Union[Sequence[float], np.ndarray]):
        array = np.array(coeffs, dtype=float)
        if array.ndim != 1 or array.size < 1:
            raise ValueError("HSeries needs a non-empty one-dimensional coefficient sequence")
        array.setflags(write=False)
        self._coeffs = array

    # Construction

    @classmethod
    def constant(cls, value: Scalar, order: int = DEFAULT_ORDER) -> "HSeries":
        coeffs = np.zeros(order)
        coeffs[0] = value
        return cls(coeffs)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "HSeries":
        return cls(np.zeros(order))

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "HSeries":
        return cls.constant(1.0, order)

    @classmethod
    def monomial(cls, power: int, coefficient: Scalar = 1.0, order: int = DEFAULT_ORDER) -> "HSeries":
        """coefficient * h**power (zero if the power is truncated away)"""
        coeffs = np.zeros(order)
        if power < order:
            coeffs[power] = coefficient
        return cls(coeffs)

    # Basic properties

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def order(self) -> int:
        return self._coeffs.size

    @property
    def leading(self) -> float:
        """Coefficient of h^0, i.e. the classical limit"""
        return float(self._coeffs[0])

    def truncate(self, order: int) -> "HSeries":
        if order >= self.order:
            return self
        return HSeries(self._coeffs[:order])

    def classical_limit(self) -> "HSeries":
        return HSeries.constant(self._coeffs[0], self.order)

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self._coeffs) <= tol))

    def max_deviation(self, other: Union["HSeries", Scalar]) -> float:
        other = self._coerce(other)
        n = min(self.order, other.order)
        return float(np.max(np.abs(self._coeffs[:n] - other.coeffs[:n])))

    def allclose(self, other: Union["HSeries", Scalar], tol: float = 1e-9) -> bool:
        return self.max_deviation(other) <= tol

    def evaluate(self, h: float) -> float:
        """Evaluate the truncated polynomial at a numeric h (diagnostics only)"""
        return float(np.polynomial.polynomial.polyval(h, self._coeffs))

    # Arithmetic

    def _coerce(self, other) -> "HSeries":
        if isinstance(other, HSeries):
            return other
        if isinstance(other, Real):
            return HSeries.constant(float(other), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return HSeries(self._coeffs[:n] + other.coeffs[:n])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return HSeries(self._coeffs[:n] - other.coeffs[:n])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return HSeries(-self._coeffs)

    def scale(self, factor: Scalar) -> "HSeries":
        return HSeries(self._coeffs * float(factor))

    def __mul__(self, other):
        if isinstance(other, Real) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, HSeries):
            return NotImplemented
        n = min(self.order, other.order)
        # Cauchy product truncated at the common order
        return HSeries(np.convolve(self._coeffs[:n], other.coeffs[:n])[:n])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return self.scale(1.0 / float(other))
        if not isinstance(other, HSeries):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, exponent: int) -> "HSeries":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = HSeries.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inv(self) -> "HSeries":
        """Multiplicative inverse; requires a nonzero constant term"""
        a = self._coeffs
        if a[0] == 0:
            raise NotInvertible("series with zero constant term has no inverse")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for k in range(1, a.size):
            b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1][:k]) * b[0]
        return HSeries(b)

    def sqrt(self) -> "HSeries":
        """Square root with positive constant term"""
        a = self._coeffs
        if not a[0] > 0:
            raise NoRealSqrt(f"series with constant term {a[0]} has no real square root")
        b = np.zeros_like(a)
        b[0] = math.sqrt(a[0])
        for k in range(1, a.size):
            cross = np.dot(b[1:k], b[k - 1 : 0 : -1]) if k > 1 else 0.0
            b[k] = (a[k] - cross) / (2.0 * b[0])
        return HSeries(b)

    # Comparison and display

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self._coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.order, self._coeffs.tobytes()))

    def __repr__(self):
        return f"HSeries({self.to_list()!r})"

    def __str__(self):
        terms = []
        for power, c in enumerate(self._coeffs):
            if c == 0:
                continue
            if power == 0:
                terms.append(f"{c:.12g}")
            elif power == 1:
                terms.append(f"{c:.12g}*h")
            else:
                terms.append(f"{c:.12g}*h^{power}")
        return " + ".join(terms) if terms else "0"

    def to_list(self) -> List[float]:
        return [float(c) for c in self._coeffs]


def exp_h(a: Scalar, order: int = DEFAULT_ORDER) -> HSeries:
    """Taylor series of e^{a h}"""
    coeffs = np.empty(order)
    term = 1.0
    for k in range(order):
        coeffs[k] = term
        term = term * a / (k + 1)
    return HSeries(coeffs)


def series_sum(values: Iterable[HSeries], order: int = DEFAULT_ORDER) -> HSeries:
    total = HSeries.zero(order)
    for value in values:
        total = total + value
    return total
