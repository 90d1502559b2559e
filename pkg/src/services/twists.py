"""
Twist Service
Representation matrices of the standard twist and its gauge variants, the
deformed coproduct, coproducted legs, the coassociator and the composite
so4 / sl2(C) twists.
"""

import logging
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

import numpy as np

from src.middleware.errors import MissingBlockFactor, QStarError
from src.models.matrices import RepMatrix, block_diagonal, cauchy_matmul, constant_series
from src.models.series import DEFAULT_ORDER, HSeries, exp_h
from src.models.spins import Generator, SpinLabel, coupled_spins, tensor_weights
from src.models.tables import TwistRep
from src.services.clebsch_gordan import cg_table
from src.services.representations import (
    casimir_rep,
    rep_generator,
    rmatrix_rep,
)
from src.services.table_cache import get_cache

logger = logging.getLogger(__name__)

_twists = get_cache("twists")

LEFT = "left"
RIGHT = "right"

SpinPair = Tuple[SpinLabel, SpinLabel]
TwistFamily = Callable[[SpinLabel, SpinLabel], RepMatrix]


def _eta_diagonal(j1: SpinLabel, j2: SpinLabel, block_factors: Optional[Mapping[int, HSeries]], order: int) -> np.ndarray:
    """Series vector of block factors along the coupled basis"""
    values = []
    for spin in coupled_spins(j1, j2):
        if block_factors is None:
            factor = HSeries.one(order)
        elif spin.two_j in block_factors:
            factor = block_factors[spin.two_j].truncate(order)
        else:
            raise MissingBlockFactor(
                f"no block factor for spin {spin} in ({j1}, {j2})",
                {"two_j": spin.two_j, "given": sorted(block_factors)},
            )
        if factor.order < order:
            raise MissingBlockFactor(f"block factor for spin {spin} has order {factor.order} < {order}")
        values.extend([factor.coeffs] * spin.dim)
    return np.stack(values, axis=1) if values else np.zeros((order, 0))


def _diag_scale_columns(matrix: np.ndarray, diagonal: np.ndarray) -> np.ndarray:
    """matrix @ diag(diagonal) for series arrays"""
    out = np.empty_like(matrix)
    for k in range(matrix.shape[0]):
        acc = matrix[0] * diagonal[k]
        for i in range(1, k + 1):
            acc = acc + matrix[i] * diagonal[k - i]
        out[k] = acc
    return out


def _series_reciprocals(diagonal: np.ndarray) -> np.ndarray:
    return np.stack([HSeries(diagonal[:, i]).inv().coeffs for i in range(diagonal.shape[1])], axis=1)


def standard_twist_rep(
    j1: SpinLabel,
    j2: SpinLabel,
    block_factors: Optional[Mapping[int, HSeries]] = None,
    inverse: bool = False,
    order: int = DEFAULT_ORDER,
) -> TwistRep:
    """
    Twist matrix on V^{j1} (x) V^{j2}

    F = sum_j eta(j) C_q(j) C(j)^T, assembled as 1 + (U_q eta - U) U^T so that
    the h^0 coefficient is exactly the identity when eta = 1 + O(h).

    Args:
        j1: First spin
        j2: Second spin
        block_factors: Optional map 2j -> eta(j); defaults to the standard twist
        inverse: Return F^{-1} instead of F
        order: Working order in h

    Returns:
        TwistRep
    """
    key_factors = None if block_factors is None else tuple(sorted((k, v) for k, v in block_factors.items()))

    def build():
        classical = cg_table(j1, j2, False, order).matrix.coeffs
        deformed = cg_table(j1, j2, True, order).matrix.coeffs
        eta = _eta_diagonal(j1, j2, block_factors, order)
        identity = constant_series(np.eye(classical.shape[1]), order)
        if inverse:
            shifted = _diag_scale_columns(classical, _series_reciprocals(eta)) - deformed
            coeffs = identity + cauchy_matmul(shifted, deformed.transpose(0, 2, 1))
        else:
            shifted = _diag_scale_columns(deformed, eta) - classical
            coeffs = identity + cauchy_matmul(shifted, classical.transpose(0, 2, 1))
        basis = tensor_weights(j1, j2)
        return TwistRep(j1, j2, RepMatrix(coeffs, basis), inverse, dict(block_factors or {}))

    return _twists.get_or_build(("standard", j1, j2, key_factors, inverse, order), build)


def gauge_block_factors(beta: Mapping[int, HSeries], j1: SpinLabel, j2: SpinLabel) -> Dict[int, HSeries]:
    """eta(j1, j2, j) = beta(j) beta(j1)^-1 beta(j2)^-1 for a per-spin map beta (keys 2j)"""
    missing = [s.two_j for s in (j1, j2, *coupled_spins(j1, j2)) if s.two_j not in beta]
    if missing:
        raise MissingBlockFactor(f"beta is undefined for 2j in {sorted(set(missing))}")
    outer = (beta[j1.two_j] * beta[j2.two_j]).inv()
    return {spin.two_j: beta[spin.two_j] * outer for spin in coupled_spins(j1, j2)}


def flip_rep(matrix: RepMatrix, j1: SpinLabel, j2: SpinLabel) -> RepMatrix:
    """P X P^T: a matrix on V^{j1} (x) V^{j2} moved to V^{j2} (x) V^{j1}"""
    return matrix.permute_slots((j1.dim, j2.dim), (1, 0))


def _classical_block_action(g: Generator, j1: SpinLabel, j2: SpinLabel, order: int) -> np.ndarray:
    return block_diagonal([rep_generator(spin, g, False, order).coeffs for spin in coupled_spins(j1, j2)])


def deformed_coproduct_rep(g: Generator, j1: SpinLabel, j2: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Delta_h(g) on V^{j1} (x) V^{j2}: classical block action conjugated by the deformed table"""

    def build():
        table = cg_table(j1, j2, True, order).matrix
        blocks = RepMatrix(_classical_block_action(g, j1, j2, order), table.col_basis)
        return table @ blocks @ table.T

    return _twists.get_or_build(("deformed_coproduct", g, j1, j2, order), build)


def classical_coproduct_rep(g: Generator, j1: SpinLabel, j2: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    return diagonal_action(g, (j1, j2), order)


def twist_family(inverse: bool = False, block_factors: Optional[Mapping[int, HSeries]] = None, order: int = DEFAULT_ORDER) -> TwistFamily:
    """Spin pair -> standard (or gauged) twist matrix"""

    def family(ja: SpinLabel, jb: SpinLabel) -> RepMatrix:
        factors = None
        if block_factors is not None:
            factors = gauge_block_factors(block_factors, ja, jb)
        return standard_twist_rep(ja, jb, factors, inverse, order).matrix

    return family


def identity_family(order: int = DEFAULT_ORDER) -> TwistFamily:
    def family(ja: SpinLabel, jb: SpinLabel) -> RepMatrix:
        return RepMatrix.identity(tensor_weights(ja, jb), order)

    return family


def generator_family(g: Generator, deformed: bool = True, order: int = DEFAULT_ORDER) -> TwistFamily:
    """Spin pair -> coproduct of a generator (deformed: Delta_h, classical: primitive)"""

    def family(ja: SpinLabel, jb: SpinLabel) -> RepMatrix:
        if deformed:
            return deformed_coproduct_rep(g, ja, jb, order)
        return classical_coproduct_rep(g, ja, jb, order)

    return family


def _left_embedding(j1: SpinLabel, j2: SpinLabel, j3: SpinLabel, order: int) -> np.ndarray:
    """kron(U12, 1): columns (J, M, m3)"""
    u12 = cg_table(j1, j2, False, order).matrix
    return u12.kron(RepMatrix.identity(tensor_weights(j3), order)).coeffs


def _right_embedding(j1: SpinLabel, j2: SpinLabel, j3: SpinLabel, order: int) -> np.ndarray:
    """kron(1, U23) with columns regrouped as (J, m1, M)"""
    u23 = cg_table(j2, j3, False, order).matrix
    embedded = RepMatrix.identity(tensor_weights(j1), order).kron(u23)
    labels = embedded.col_basis  # (2m1, 2J, 2M)
    regrouped = sorted(range(len(labels)), key=lambda i: (labels[i][1], labels[i][0], labels[i][2]))
    return embedded.coeffs[:, :, regrouped]


def coproduct_leg_rep(
    family: Union[TwistFamily, str],
    leg: str,
    j1: SpinLabel,
    j2: SpinLabel,
    j3: SpinLabel,
    order: int = DEFAULT_ORDER,
) -> RepMatrix:
    """
    (Delta (x) id)(X) or (id (x) Delta)(X) on V^{j1} (x) V^{j2} (x) V^{j3}

    The coproducted pair of slots is decomposed classically into irreducibles,
    X acts blockwise through its representation on (j, j3) (or (j1, j)), and the
    result is transformed back.

    Args:
        family: Callable spin pair -> matrix, or one of 'twist', 'inverse', 'identity'
        leg: 'left' for (Delta (x) id), 'right' for (id (x) Delta)
        j1, j2, j3: Spins of the three tensor factors
        order: Working order in h

    Returns:
        RepMatrix on the ordered triple tensor basis
    """
    if isinstance(family, str):
        named = {
            "twist": twist_family(False, order=order),
            "inverse": twist_family(True, order=order),
            "identity": identity_family(order),
        }
        if family not in named:
            raise QStarError(f"unknown twist family '{family}'")
        family = named[family]

    if leg == LEFT:
        embedding = _left_embedding(j1, j2, j3, order)
        blocks = [family(spin, j3).coeffs for spin in coupled_spins(j1, j2)]
    elif leg == RIGHT:
        embedding = _right_embedding(j1, j2, j3, order)
        blocks = [family(j1, spin).coeffs for spin in coupled_spins(j2, j3)]
    else:
        raise QStarError(f"unknown leg '{leg}', expected left or right")

    middle = block_diagonal(blocks)
    coeffs = cauchy_matmul(cauchy_matmul(embedding, middle), embedding.transpose(0, 2, 1))
    return RepMatrix(coeffs, tensor_weights(j1, j2, j3))


def _outer_leg(matrix: RepMatrix, first: bool, spin: SpinLabel, order: int) -> RepMatrix:
    """X (x) 1 (first=True) or 1 (x) X on a triple tensor product"""
    one = RepMatrix.identity(tensor_weights(spin), order)
    return matrix.kron(one) if first else one.kron(matrix)


def coassociator_rep(j1: SpinLabel, j2: SpinLabel, j3: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Phi = (Delta (x) id)(F^-1) (F^-1 (x) 1) (1 (x) F) (id (x) Delta)(F)"""

    def build():
        left_leg = coproduct_leg_rep("inverse", LEFT, j1, j2, j3, order)
        f12_inverse = _outer_leg(standard_twist_rep(j1, j2, inverse=True, order=order).matrix, True, j3, order)
        f23 = _outer_leg(standard_twist_rep(j2, j3, order=order).matrix, False, j1, order)
        right_leg = coproduct_leg_rep("twist", RIGHT, j1, j2, j3, order)
        return left_leg @ f12_inverse @ f23 @ right_leg

    return _twists.get_or_build(("coassociator", j1, j2, j3, order), build)


def diagonal_action(g: Generator, spins: Tuple[SpinLabel, ...], order: int = DEFAULT_ORDER) -> RepMatrix:
    """Classical iterated coproduct of g on V^{j1} (x) ... (x) V^{jn}"""
    total = None
    for position in range(len(spins)):
        term = None
        for index, other in enumerate(spins):
            if index == position:
                factor = rep_generator(other, g, False, order)
            else:
                factor = RepMatrix.identity(tensor_weights(other), order)
            term = factor if term is None else term.kron(factor)
        total = term if total is None else total + term
    return total


def twist_rep_so4(pair1: SpinPair, pair2: SpinPair, inverse: bool = False, order: int = DEFAULT_ORDER) -> RepMatrix:
    """
    F_s on slots (1, 3) times F_s on slots (2, 4)

    Slots are (left, right) of the first factor followed by (left, right) of
    the second, i.e. labels (2m1, 2m1', 2m2, 2m2').
    """
    (j1, j1p), (j2, j2p) = pair1, pair2

    def build():
        left = standard_twist_rep(j1, j2, inverse=inverse, order=order).matrix
        right = standard_twist_rep(j1p, j2p, inverse=inverse, order=order).matrix
        # kron order is (1, 3, 2, 4)
        return left.kron(right).permute_slots((j1.dim, j2.dim, j1p.dim, j2p.dim), (0, 2, 1, 3))

    return _twists.get_or_build(("so4", pair1, pair2, inverse, order), build)


def r23_rep(pair1: SpinPair, pair2: SpinPair, order: int = DEFAULT_ORDER) -> RepMatrix:
    """R-matrix acting on the right leg of the first factor and the left leg of the second"""
    (j1, j1p), (j2, j2p) = pair1, pair2

    def build():
        inner = rmatrix_rep(j1p, j2, order).kron(RepMatrix.identity(tensor_weights(j2p), order))
        return RepMatrix.identity(tensor_weights(j1), order).kron(inner)

    return _twists.get_or_build(("r23", pair1, pair2, order), build)


def twist_rep_sl2c(pair1: SpinPair, pair2: SpinPair, inverse: bool = False, order: int = DEFAULT_ORDER) -> RepMatrix:
    """R_23^-1 F_s13 F_s24 (or its inverse F_s13^-1 F_s24^-1 R_23)"""

    def build():
        so4 = twist_rep_so4(pair1, pair2, inverse, order)
        r23 = r23_rep(pair1, pair2, order)
        if inverse:
            return so4 @ r23
        return r23.inverse() @ so4

    return _twists.get_or_build(("sl2c", pair1, pair2, inverse, order), build)


def classical_antipode_matrix(j: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """J with rho(S x) = J rho(x)^T J^-1; J_{m,-m} = (-1)^{j-m}"""
    matrix = np.zeros((j.dim, j.dim))
    for two_m in j.weights:
        matrix[j.index(two_m), j.index(-two_m)] = (-1) ** ((j.two_j - two_m) // 2)
    return RepMatrix(constant_series(matrix, order), tensor_weights(j))


def antipode_legwise(matrix: RepMatrix, j1: SpinLabel, j2: SpinLabel) -> RepMatrix:
    """(S (x) S)(X) for X in U(su2) (x) U(su2) given by its representation matrix"""
    order = matrix.order
    conj = classical_antipode_matrix(j1, order).kron(classical_antipode_matrix(j2, order))
    return conj @ matrix.T @ conj.inverse()


def rf_relation_diagnostic(j1: SpinLabel, j2: SpinLabel, order: int = DEFAULT_ORDER) -> Dict[str, object]:
    """
    Compare R with F_21 (block scalars) F^-1 for the standard twist

    X = F_21^-1 R F commutes with the classical diagonal action, so U^T X U is
    block-scalar; the block scalars lambda(j) are reported next to the
    Casimir-based guess exp(h/2 (c(j) - c(j1) - c(j2))).

    Returns:
        Dict with the block-scalar deviation and per-block values
    """
    twist = standard_twist_rep(j1, j2, order=order).matrix
    flipped_inverse = flip_rep(standard_twist_rep(j2, j1, inverse=True, order=order).matrix, j2, j1)
    x = flipped_inverse @ rmatrix_rep(j1, j2, order) @ twist
    u = cg_table(j1, j2, False, order).matrix
    reduced = u.T @ x @ u

    blocks = {}
    scalar_parts = []
    start = 0
    c1 = casimir_rep(j1, order)
    c2 = casimir_rep(j2, order)
    for spin in coupled_spins(j1, j2):
        value = reduced.entry(start, start)
        scalar_parts.append(np.stack([np.eye(spin.dim) * c for c in value.coeffs]))
        predicted = exp_h((casimir_rep(spin, order) - c1 - c2).leading / 2.0, order)
        ratio = value.coeffs[1] / predicted.coeffs[1] if order > 1 and predicted.coeffs[1] != 0 else None
        blocks[str(spin)] = {
            "lambda": value.to_list(),
            "casimir_prediction": predicted.to_list(),
            "first_order_ratio": ratio,
        }
        start += spin.dim

    scalar = RepMatrix(block_diagonal(scalar_parts), reduced.row_basis, reduced.col_basis)
    deviation = reduced.max_deviation(scalar)
    logger.info(f"R/F relation diagnostic ({j1}, {j2}): block-scalar deviation {deviation:.3e}")
    return {"j1": str(j1), "j2": str(j2), "block_scalar_deviation": deviation, "blocks": blocks}
