"""
Clebsch-Gordan Service
Builds deformed and classical Clebsch-Gordan tables from the representation
matrices: highest-weight kernel of the tensor raising operator, then lowering.
"""

import logging
from typing import List, Sequence

import numpy as np

from src.middleware.errors import DegenerateKernel, DimensionMismatch
from src.models.matrices import RepMatrix, cauchy_dot, cauchy_matvec, scale_series
from src.models.series import DEFAULT_ORDER
from src.models.spins import Generator, SpinLabel, coupled_spins, tensor_weights
from src.models.tables import CGTable
from src.services.qnumbers import ladder_factor
from src.services.representations import rep_tensor_coproduct
from src.services.table_cache import get_cache

logger = logging.getLogger(__name__)

_tables = get_cache("clebsch_gordan")

# Singular values below this (relative) are treated as zero in the kernel step
KERNEL_RCOND = 1e-10

REDUCE = "reduce"
EMBED = "embed"


def _kernel_basis(m0: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ker(m0) as columns"""
    cols = m0.shape[1]
    if m0.shape[0] == 0:
        return np.eye(cols)
    _, singular, vh = np.linalg.svd(m0)
    cutoff = KERNEL_RCOND * max(1.0, float(singular.max(initial=0.0)))
    rank = int(np.sum(singular > cutoff))
    return vh[rank:].T


def _series_kernel_vector(block: np.ndarray, label: str) -> np.ndarray:
    """Series vector v with M(h) v(h) = 0, from an (order, rows, cols) block

    v_0 spans ker M_0; higher orders solve M_0 v_k = -sum_{i>=1} M_i v_{k-i}
    with the pseudo-inverse, which is exact because M_0 is surjective here.
    """
    order, _, cols = block.shape
    kernel = _kernel_basis(block[0])
    if kernel.shape[1] != 1:
        raise DegenerateKernel(
            f"highest-weight kernel for {label} has dimension {kernel.shape[1]}",
            {"block": label, "dimension": int(kernel.shape[1])},
        )
    pinv = np.linalg.pinv(block[0]) if block.shape[1] else np.zeros((cols, 0))
    vector = np.zeros((order, cols))
    vector[0] = kernel[:, 0]
    for k in range(1, order):
        rhs = np.zeros(block.shape[1])
        for i in range(1, k + 1):
            rhs = rhs - block[i] @ vector[k - i]
        vector[k] = pinv @ rhs
    return vector


def _normalize(vector: np.ndarray) -> np.ndarray:
    norm = cauchy_dot(vector, vector).sqrt()
    return scale_series(vector, norm.inv())


def _build_table(j1: SpinLabel, j2: SpinLabel, deformed: bool, order: int) -> CGTable:
    basis = tensor_weights(j1, j2)
    n = len(basis)
    total_weight = np.array([m1 + m2 for m1, m2 in basis])
    raising = rep_tensor_coproduct(Generator.E, j1, j2, deformed, order).coeffs
    lowering = rep_tensor_coproduct(Generator.F, j1, j2, deformed, order)

    found: List[np.ndarray] = []
    columns = {}
    for spin in reversed(coupled_spins(j1, j2)):
        two_j = spin.two_j
        cols = np.flatnonzero(total_weight == two_j)
        rows = np.flatnonzero(total_weight == two_j + 2)
        block = raising[:, rows][:, :, cols]
        top = np.zeros((order, n))
        top[:, cols] = _series_kernel_vector(block, f"({j1}, {j2}) -> {spin}")

        # Orthogonal to the weight-j states of larger blocks in exact arithmetic
        for previous in found:
            if np.any(previous[0] * (total_weight == two_j)):
                overlap = cauchy_dot(previous, top)
                top = top - scale_series(previous, overlap)
        top = _normalize(top)

        anchor = basis.index((j1.two_j, two_j - j1.two_j))
        if top[0, anchor] < 0:
            top = -top

        vectors = {two_j: top}
        current = top
        for two_m in range(two_j, -two_j, -2):
            factor = ladder_factor(two_j, two_m, deformed, order)
            current = scale_series(lowering.apply(current), factor.inv())
            vectors[two_m - 2] = current
        for two_m, vector in vectors.items():
            columns[(two_j, two_m)] = vector
            found.append(vector)

    col_basis = tuple(sorted(columns))
    coeffs = np.stack([columns[label] for label in col_basis], axis=2)
    logger.debug(f"Clebsch-Gordan table ({j1}, {j2}) deformed={deformed} built at order {order}")
    return CGTable(j1, j2, deformed, RepMatrix(coeffs, basis, col_basis))


def cg_table(j1: SpinLabel, j2: SpinLabel, deformed: bool = True, order: int = DEFAULT_ORDER) -> CGTable:
    """
    Clebsch-Gordan table for V^{j1} (x) V^{j2}

    Args:
        j1: First spin
        j2: Second spin
        deformed: Use the deformed coproduct (q-Clebsch-Gordan coefficients)
        order: Working order in h

    Returns:
        CGTable: orthogonal basis change, tensor rows and coupled columns
    """
    return _tables.get_or_build(
        ("table", j1, j2, deformed, order), lambda: _build_table(j1, j2, deformed, order)
    )


def coupled_block(j1: SpinLabel, j2: SpinLabel, j: SpinLabel, deformed: bool, order: int = DEFAULT_ORDER) -> np.ndarray:
    """Series array (order, dim1*dim2, 2j+1) embedding V^j into V^{j1} (x) V^{j2}"""
    return cg_table(j1, j2, deformed, order).block(j)


def cg_apply(table: CGTable, direction: str, vector: np.ndarray) -> np.ndarray:
    """
    Apply the basis change of a table to a series vector

    Args:
        table: Clebsch-Gordan table
        direction: 'reduce' (tensor basis -> coupled basis) or 'embed' (inverse)
        vector: Series vector of shape (order, n) or a plain length-n vector

    Returns:
        np.ndarray: Series vector of shape (order, n)
    """
    vector = np.asarray(vector, dtype=float)
    if vector.ndim == 1:
        padded = np.zeros((table.order, vector.size))
        padded[0] = vector
        vector = padded
    n = table.matrix.shape[0]
    if vector.ndim != 2 or vector.shape[1] != n:
        raise DimensionMismatch(
            f"vector of shape {vector.shape} does not fit a table of dimension {n}",
            {"expected": n},
        )
    if direction == REDUCE:
        return cauchy_matvec(table.matrix.T.coeffs, vector)
    if direction == EMBED:
        return cauchy_matvec(table.matrix.coeffs, vector)
    raise DimensionMismatch(f"unknown direction '{direction}', expected reduce or embed")


def coupled_vector(table: CGTable, components: Sequence[tuple]) -> np.ndarray:
    """Constant coupled-basis vector from ((2j, 2m), value) pairs"""
    vector = np.zeros((table.order, table.matrix.shape[1]))
    for label, value in components:
        vector[0, table.matrix.col_basis.index(tuple(label))] = value
    return vector


def tensor_vector(table: CGTable, components: Sequence[tuple]) -> np.ndarray:
    """Constant tensor-basis vector from ((2m1, 2m2), value) pairs"""
    vector = np.zeros((table.order, table.matrix.shape[0]))
    for label, value in components:
        vector[0, table.matrix.row_basis.index(tuple(label))] = value
    return vector
