"""
Relations report: out-of-order generator products expressed in the ordered
quadratic basis {g_k * g_l : k <= l}, by solving a series linear system.
"""

import logging
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from src.middleware.errors import UsageError
from src.models.matrices import cauchy_matvec, series_solve
from src.models.polynomials import SeriesPolynomial
from src.models.series import DEFAULT_ORDER
from src.services import quantum_matrices, quantum_plane

logger = logging.getLogger(__name__)

RELATION_SPACES = ("plane", "mq2", "minkowski")


def _space_setup(space: str, order: int) -> Tuple[List[str], Dict[str, SeriesPolynomial], Callable]:
    if space == "plane":
        gens = quantum_plane.plane_generators(order)
        return ["x", "y"], gens, quantum_plane.star_plane
    if space == "mq2":
        return ["a", "b", "c", "d"], quantum_matrices.generators(order), quantum_matrices.star_euclid
    if space == "minkowski":
        return ["a", "b", "c", "d"], quantum_matrices.generators(order), quantum_matrices.star_minkowski
    raise UsageError(f"unknown space '{space}', expected one of {', '.join(RELATION_SPACES)}")


def _as_columns(polys: Sequence[SeriesPolynomial], order: int) -> Tuple[List[tuple], np.ndarray]:
    keys = sorted({key for poly in polys for key in poly.terms})
    columns = np.zeros((order, len(keys), len(polys)))
    for col, poly in enumerate(polys):
        for row, key in enumerate(keys):
            columns[:, row, col] = poly.coefficient(*key).coeffs[:order]
    return keys, columns


def relations_report(space: str, order: int = DEFAULT_ORDER, tol: float = 1e-9) -> Dict[str, Any]:
    """
    Commutation relations of the generators under the space's star product

    Args:
        space: 'plane', 'mq2' or 'minkowski'
        order: Working order in h
        tol: Coefficients whose series vanish within tol are dropped

    Returns:
        Dict with the ordered basis, the relations and the solve residual
    """
    names, gens, product = _space_setup(space, order)
    ordered = [(names[k], names[l]) for k in range(len(names)) for l in range(k, len(names))]
    basis = [product(gens[k], gens[l]) for k, l in ordered]
    keys, matrix = _as_columns(basis, order)
    if matrix.shape[1] != matrix.shape[2]:
        raise UsageError(f"quadratic basis for {space} is not square: {matrix.shape[1:]}")

    relations = []
    residual = 0.0
    for i in range(len(names)):
        for j in range(i):
            lhs = product(gens[names[i]], gens[names[j]])
            target = np.zeros((order, len(keys)))
            for row, key in enumerate(keys):
                target[:, row] = lhs.coefficient(*key).coeffs[:order]
            solution = series_solve(matrix, target)
            recomposed = cauchy_matvec(matrix, solution)
            residual = max(residual, float(np.max(np.abs(recomposed - target))))
            terms = {}
            for col, (k, l) in enumerate(ordered):
                coefficients = solution[:, col]
                if np.max(np.abs(coefficients)) > tol:
                    terms[f"{k}*{l}"] = [float(c) for c in coefficients]
            relations.append({"lhs": f"{names[i]}*{names[j]}", "rhs": terms})

    logger.info(f"Relations report for {space}: {len(relations)} relations")
    return {
        "space": space,
        "order": order,
        "basis": [f"{k}*{l}" for k, l in ordered],
        "relations": relations,
        "residual": residual,
    }
