"""
Matrices with power-series entries

A series matrix is stored as one numpy array of shape (order, rows, cols):
slice k holds the coefficient matrix of h^k. Products are Cauchy products
truncated at the common order.
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from src.middleware.errors import DimensionMismatch, NotInvertible
from src.models.series import HSeries

Label = Tuple[int, ...]
Basis = Tuple[Label, ...]

# Relative threshold below which a leading coefficient matrix is treated as singular
SINGULAR_RCOND = 1e-12


def cauchy_einsum(subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated Cauchy product of two series arrays under an einsum contraction

    Both operands carry the series order on axis 0; the subscripts describe the
    remaining axes, e.g. 'ij,jk->ik' for a matrix product.
    """
    n = min(a.shape[0], b.shape[0])
    first = np.einsum(subscripts, a[0], b[0])
    out = np.zeros((n,) + np.shape(first))
    out[0] = first
    for k in range(1, n):
        acc = np.einsum(subscripts, a[0], b[k])
        for i in range(1, k + 1):
            acc = acc + np.einsum(subscripts, a[i], b[k - i])
        out[k] = acc
    return out


def cauchy_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = min(a.shape[0], b.shape[0])
    out = np.empty((n, a.shape[1], b.shape[2]))
    for k in range(n):
        acc = a[0] @ b[k]
        for i in range(1, k + 1):
            acc = acc + a[i] @ b[k - i]
        out[k] = acc
    return out


def cauchy_matvec(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(order, rows, cols) times (order, cols) -> (order, rows)"""
    n = min(a.shape[0], v.shape[0])
    out = np.empty((n, a.shape[1]))
    for k in range(n):
        acc = a[0] @ v[k]
        for i in range(1, k + 1):
            acc = acc + a[i] @ v[k - i]
        out[k] = acc
    return out


def cauchy_dot(u: np.ndarray, v: np.ndarray) -> HSeries:
    """Series inner product sum_i u_i v_i of two series vectors"""
    n = min(u.shape[0], v.shape[0])
    coeffs = np.empty(n)
    for k in range(n):
        acc = np.dot(u[0], v[k])
        for i in range(1, k + 1):
            acc += np.dot(u[i], v[k - i])
        coeffs[k] = acc
    return HSeries(coeffs)


def scale_series(v: np.ndarray, s: HSeries) -> np.ndarray:
    """Multiply a series array (any trailing shape) by a scalar series"""
    n = min(v.shape[0], s.order)
    c = s.coeffs
    out = np.empty((n,) + v.shape[1:])
    for k in range(n):
        acc = c[0] * v[k]
        for i in range(1, k + 1):
            acc = acc + c[i] * v[k - i]
        out[k] = acc
    return out


def series_matrix_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square series matrix, order by order

    X_0 = A_0^{-1}, X_k = -X_0 sum_{i=1..k} A_i X_{k-i}
    """
    n, rows, cols = a.shape
    if rows != cols:
        raise DimensionMismatch(f"cannot invert a {rows}x{cols} matrix")
    if rows == 0:
        return np.zeros_like(a)
    if np.linalg.cond(a[0]) > 1.0 / SINGULAR_RCOND:
        raise NotInvertible("leading coefficient matrix is singular")
    x0 = np.linalg.inv(a[0])
    out = np.empty_like(a)
    out[0] = x0
    for k in range(1, n):
        acc = a[1] @ out[k - 1]
        for i in range(2, k + 1):
            acc = acc + a[i] @ out[k - i]
        out[k] = -x0 @ acc
    return out


def series_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for a square series matrix A and series vector b"""
    return cauchy_matvec(series_matrix_inverse(a), b)


def constant_series(array: np.ndarray, order: int) -> np.ndarray:
    """Embed a numeric array as a constant series array"""
    array = np.asarray(array, dtype=float)
    out = np.zeros((order,) + array.shape)
    out[0] = array
    return out


def identity_series(dim: int, order: int) -> np.ndarray:
    return constant_series(np.eye(dim), order)


def block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Series block-diagonal matrix from (order, r_i, c_i) blocks"""
    order = min(block.shape[0] for block in blocks)
    rows = sum(block.shape[1] for block in blocks)
    cols = sum(block.shape[2] for block in blocks)
    out = np.zeros((order, rows, cols))
    r = c = 0
    for block in blocks:
        out[:, r : r + block.shape[1], c : c + block.shape[2]] = block[:order]
        r += block.shape[1]
        c += block.shape[2]
    return out


def permute_axes_matrix(coeffs: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Re-order tensor slots of a square series matrix

    New slot s is old slot perm[s]; rows and columns are permuted alike.
    """
    n = coeffs.shape[0]
    k = len(dims)
    tensor = coeffs.reshape((n,) + tuple(dims) + tuple(dims))
    axes = [0] + [1 + p for p in perm] + [1 + k + p for p in perm]
    total = int(np.prod(dims)) if dims else 1
    return tensor.transpose(axes).reshape(n, total, total)


class RepMatrix:
    """Series matrix with labelled row and column bases

    Row and column labels are tuples of twice-integers: (2m,) for a single
    spin, (2m1, 2m2, ...) for tensor bases, (2j, 2m) for coupled bases.
    """

    __slots__ = ("_coeffs", "row_basis", "col_basis")

    def __init__(self, coeffs: np.ndarray, row_basis: Basis, col_basis: Optional[Basis] = None):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim != 3:
            raise DimensionMismatch("series matrix needs shape (order, rows, cols)")
        col_basis = row_basis if col_basis is None else col_basis
        if coeffs.shape[1] != len(row_basis) or coeffs.shape[2] != len(col_basis):
            raise DimensionMismatch(
                f"matrix of shape {coeffs.shape[1:]} does not fit bases of size "
                f"{len(row_basis)}x{len(col_basis)}"
            )
        coeffs.setflags(write=False)
        self._coeffs = coeffs
        self.row_basis = tuple(tuple(label) for label in row_basis)
        self.col_basis = tuple(tuple(label) for label in col_basis)

    @classmethod
    def identity(cls, basis: Basis, order: int) -> "RepMatrix":
        return cls(identity_series(len(basis), order), basis)

    @classmethod
    def from_constant(cls, array: np.ndarray, row_basis: Basis, col_basis: Optional[Basis] = None, order: int = 8) -> "RepMatrix":
        return cls(constant_series(array, order), row_basis, col_basis)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def order(self) -> int:
        return self._coeffs.shape[0]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._coeffs.shape[1], self._coeffs.shape[2]

    @property
    def dim(self) -> int:
        rows, cols = self.shape
        if rows != cols:
            raise DimensionMismatch(f"matrix is {rows}x{cols}, not square")
        return rows

    def entry(self, row: int, col: int) -> HSeries:
        return HSeries(self._coeffs[:, row, col])

    def entry_by_label(self, row_label: Label, col_label: Label) -> HSeries:
        return self.entry(self.row_basis.index(tuple(row_label)), self.col_basis.index(tuple(col_label)))

    def _check_compatible(self, other: "RepMatrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "RepMatrix") -> "RepMatrix":
        self._check_compatible(other)
        n = min(self.order, other.order)
        return RepMatrix(self._coeffs[:n] + other.coeffs[:n], self.row_basis, self.col_basis)

    def __sub__(self, other: "RepMatrix") -> "RepMatrix":
        self._check_compatible(other)
        n = min(self.order, other.order)
        return RepMatrix(self._coeffs[:n] - other.coeffs[:n], self.row_basis, self.col_basis)

    def __neg__(self) -> "RepMatrix":
        return RepMatrix(-self._coeffs, self.row_basis, self.col_basis)

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return RepMatrix(cauchy_matmul(self._coeffs, other.coeffs), self.row_basis, other.col_basis)

    def scale(self, factor) -> "RepMatrix":
        if isinstance(factor, HSeries):
            return RepMatrix(scale_series(self._coeffs, factor), self.row_basis, self.col_basis)
        return RepMatrix(self._coeffs * float(factor), self.row_basis, self.col_basis)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """Act on a series vector of shape (order, cols)"""
        if vector.shape[1] != self.shape[1]:
            raise DimensionMismatch(f"vector of length {vector.shape[1]} for {self.shape} matrix")
        return cauchy_matvec(self._coeffs, vector)

    @property
    def T(self) -> "RepMatrix":
        return RepMatrix(self._coeffs.transpose(0, 2, 1), self.col_basis, self.row_basis)

    def inverse(self) -> "RepMatrix":
        return RepMatrix(series_matrix_inverse(self._coeffs), self.col_basis, self.row_basis)

    def kron(self, other: "RepMatrix") -> "RepMatrix":
        """Tensor product; bases concatenate labels, first factor major"""
        n = min(self.order, other.order)
        coeffs = cauchy_einsum("ij,kl->ikjl", self._coeffs[:n], other.coeffs[:n])
        rows = coeffs.shape[1] * coeffs.shape[2]
        cols = coeffs.shape[3] * coeffs.shape[4]
        return RepMatrix(
            coeffs.reshape(n, rows, cols),
            tuple(a + b for a in self.row_basis for b in other.row_basis),
            tuple(a + b for a in self.col_basis for b in other.col_basis),
        )

    def permute_slots(self, dims: Sequence[int], perm: Sequence[int]) -> "RepMatrix":
        """Re-order tensor slots (square matrices on a tensor basis only)"""
        coeffs = permute_axes_matrix(self._coeffs, dims, perm)
        basis = tuple(tuple(label[p] for p in perm) for label in self.row_basis)
        basis = tuple(sorted(basis))
        return RepMatrix(coeffs, basis)

    def truncate(self, order: int) -> "RepMatrix":
        return RepMatrix(self._coeffs[:order], self.row_basis, self.col_basis)

    def classical_limit(self) -> "RepMatrix":
        coeffs = np.zeros_like(self._coeffs)
        coeffs[0] = self._coeffs[0]
        return RepMatrix(coeffs, self.row_basis, self.col_basis)

    def max_deviation(self, other: "RepMatrix") -> float:
        self._check_compatible(other)
        n = min(self.order, other.order)
        if self._coeffs.size == 0:
            return 0.0
        return float(np.max(np.abs(self._coeffs[:n] - other.coeffs[:n])))

    def allclose(self, other: "RepMatrix", tol: float = 1e-9) -> bool:
        return self.max_deviation(other) <= tol

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off = self._coeffs.copy()
        for k in range(off.shape[0]):
            np.fill_diagonal(off[k], 0.0)
        return bool(np.all(np.abs(off) <= tol))

    def __repr__(self):
        return f"RepMatrix(order={self.order}, shape={self.shape})"
