"""
Weight-basis representations of U(su2) and its hbar-adic deformation

Conventions (q = e^h, K = e^{hH}):
    deformed coproduct  E -> E(x)K + 1(x)E,  F -> F(x)1 + K^-1(x)F,  H primitive
    deformed antipode   E -> -E K^-1,        F -> -K F,              H -> -H
    spin-j action       E|m> = e^{h(m+1)} sqrt([j+m+1][j-m]) |m+1>
                        F|m> = e^{-hm} sqrt([j+m][j-m+1]) |m-1>
                        H|m> = 2m |m>
The classical representation is the h = 0 limit of the deformed one.
"""

import logging
from typing import Iterable, Sequence

import numpy as np

from src.models.matrices import RepMatrix, constant_series
from src.models.series import DEFAULT_ORDER, HSeries, exp_h
from src.models.spins import Generator, SpinLabel, Word, tensor_weights
from src.services.qnumbers import qfact, qnum
from src.services.table_cache import get_cache

logger = logging.getLogger(__name__)

_reps = get_cache("representations")

GENERATORS = (Generator.E, Generator.F, Generator.H)


def _basis(*spins: SpinLabel):
    return tensor_weights(*spins)


def _build_generator(j: SpinLabel, g: Generator, order: int) -> RepMatrix:
    dim = j.dim
    coeffs = np.zeros((order, dim, dim))
    for col, two_m in enumerate(j.weights):
        if g is Generator.H:
            coeffs[0, col, col] = float(two_m)
        elif g is Generator.E and two_m < j.two_j:
            j_plus_m = (j.two_j + two_m) // 2
            j_minus_m = (j.two_j - two_m) // 2
            value = exp_h((two_m + 2) / 2, order) * (qnum(j_plus_m + 1, order) * qnum(j_minus_m, order)).sqrt()
            coeffs[:, col + 1, col] = value.coeffs
        elif g is Generator.F and two_m > -j.two_j:
            j_plus_m = (j.two_j + two_m) // 2
            j_minus_m = (j.two_j - two_m) // 2
            value = exp_h(-two_m / 2, order) * (qnum(j_plus_m, order) * qnum(j_minus_m + 1, order)).sqrt()
            coeffs[:, col - 1, col] = value.coeffs
    return RepMatrix(coeffs, _basis(j))


def rep_generator(j: SpinLabel, g: Generator, deformed: bool = True, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Matrix of a generator in the spin-j representation (deformed or classical)"""

    def build():
        deformed_rep = _build_generator(j, g, order)
        return deformed_rep if deformed else deformed_rep.classical_limit()

    return _reps.get_or_build(("generator", j, g, deformed, order), build)


def rep_word(word: Word, j: SpinLabel, deformed: bool = True, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Representation of the product g_1 g_2 ... g_n"""
    result = RepMatrix.identity(_basis(j), order)
    for letter in word:
        result = result @ rep_generator(j, letter, deformed, order)
    return result


def cartan_exp(j: SpinLabel, t: float, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Representation of e^{t h H}: diagonal e^{2 t h m}"""

    def build():
        coeffs = np.zeros((order, j.dim, j.dim))
        for index, two_m in enumerate(j.weights):
            coeffs[:, index, index] = exp_h(t * two_m, order).coeffs
        return RepMatrix(coeffs, _basis(j))

    return _reps.get_or_build(("cartan_exp", j, float(t), order), build)


def exp_h_matrix(a: RepMatrix, t: float = 1.0) -> RepMatrix:
    """e^{t h A} for a matrix A without h-dependence"""
    base = a.coeffs[0] * t
    coeffs = np.zeros_like(a.coeffs)
    power = np.eye(base.shape[0])
    for k in range(a.order):
        coeffs[k] = power
        power = power @ base / (k + 1)
    return RepMatrix(coeffs, a.row_basis, a.col_basis)


def sigma_rep(j: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """sigma = e^{hH/2}: diagonal e^{hm}"""
    return cartan_exp(j, 0.5, order)


def rep_tensor_coproduct(g: Generator, j1: SpinLabel, j2: SpinLabel, deformed: bool = True, order: int = DEFAULT_ORDER) -> RepMatrix:
    """(rho^{j1} (x) rho^{j2})(Delta g) on the ordered tensor basis"""

    def build():
        x1 = rep_generator(j1, g, deformed, order)
        x2 = rep_generator(j2, g, deformed, order)
        one1 = RepMatrix.identity(_basis(j1), order)
        one2 = RepMatrix.identity(_basis(j2), order)
        if not deformed or g is Generator.H:
            return x1.kron(one2) + one1.kron(x2)
        if g is Generator.E:
            return x1.kron(cartan_exp(j2, 1.0, order)) + one1.kron(x2)
        return x1.kron(one2) + cartan_exp(j1, -1.0, order).kron(x2)

    return _reps.get_or_build(("coproduct", g, j1, j2, deformed, order), build)


def rep_tensor_coproduct_op(g: Generator, j1: SpinLabel, j2: SpinLabel, deformed: bool = True, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Opposite coproduct on V^{j1} (x) V^{j2}"""
    flipped = rep_tensor_coproduct(g, j2, j1, deformed, order)
    return flipped.permute_slots((j2.dim, j1.dim), (1, 0))


def _antipode_letter(j: SpinLabel, g: Generator, deformed: bool, order: int) -> RepMatrix:
    x = rep_generator(j, g, deformed, order)
    if not deformed or g is Generator.H:
        return -x
    if g is Generator.E:
        return -(x @ cartan_exp(j, -1.0, order))
    return -(cartan_exp(j, 1.0, order) @ x)


def rep_antipode(word: Sequence[Generator], j: SpinLabel, deformed: bool = True, order: int = DEFAULT_ORDER) -> RepMatrix:
    """rho(S(g_1 ... g_n)) = rho(S g_n) ... rho(S g_1)"""
    result = RepMatrix.identity(_basis(j), order)
    for letter in reversed(tuple(word)):
        result = result @ _antipode_letter(j, letter, deformed, order)
    return result


def deformed_star_generator(j: SpinLabel, g: Generator, order: int = DEFAULT_ORDER) -> RepMatrix:
    """rho_h(g*) for the deformed involution E* = F K, F* = K^-1 E, H* = H"""
    x_f = rep_generator(j, Generator.F, True, order)
    x_e = rep_generator(j, Generator.E, True, order)
    if g is Generator.E:
        return x_f @ cartan_exp(j, 1.0, order)
    if g is Generator.F:
        return cartan_exp(j, -1.0, order) @ x_e
    return rep_generator(j, Generator.H, True, order)


def _rmatrix_coefficient(n: int, order: int) -> HSeries:
    """q^{n(n-1)/2} (q - q^-1)^n / [n]!"""
    q_minus_qinv = exp_h(1, order) - exp_h(-1, order)
    return exp_h(n * (n - 1) / 2, order) * q_minus_qinv ** n * qfact(n, order).inv()


def _cartan_prefactor(j1: SpinLabel, j2: SpinLabel, order: int) -> RepMatrix:
    """e^{h H(x)H / 2}: diagonal e^{2 h m1 m2}"""
    h1 = rep_generator(j1, Generator.H, False, order)
    h2 = rep_generator(j2, Generator.H, False, order)
    return exp_h_matrix(h1.kron(h2), 0.5)


def rmatrix_rep(j1: SpinLabel, j2: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Universal R-matrix in V^{j1} (x) V^{j2}"""

    def build():
        prefactor = _cartan_prefactor(j1, j2, order)
        total = RepMatrix.identity(prefactor.row_basis, order)
        e_power = RepMatrix.identity(_basis(j1), order)
        f_power = RepMatrix.identity(_basis(j2), order)
        x_e = rep_generator(j1, Generator.E, True, order)
        x_f = rep_generator(j2, Generator.F, True, order)
        # E and F are nilpotent in finite dimensions
        for n in range(1, min(j1.two_j, j2.two_j) + 1):
            e_power = e_power @ x_e
            f_power = f_power @ x_f
            total = total + e_power.kron(f_power).scale(_rmatrix_coefficient(n, order))
        return prefactor @ total

    return _reps.get_or_build(("rmatrix", j1, j2, order), build)


def rmatrix_rep_flipped(j1: SpinLabel, j2: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """R_21 on V^{j1} (x) V^{j2}"""
    return rmatrix_rep(j2, j1, order).permute_slots((j2.dim, j1.dim), (1, 0))


def rmatrix_via_antipode(j1: SpinLabel, j2: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """(S' (x) S')(R) evaluated term by term with the antipode applied to each leg"""
    prefactor = _cartan_prefactor(j1, j2, order)
    total = RepMatrix.identity(prefactor.row_basis, order)
    for n in range(1, min(j1.two_j, j2.two_j) + 1):
        left = rep_antipode((Generator.E,) * n, j1, True, order)
        right = rep_antipode((Generator.F,) * n, j2, True, order)
        total = total + left.kron(right).scale(_rmatrix_coefficient(n, order))
    # S (x) S reverses products and leaves e^{hH(x)H/2} invariant
    return total @ prefactor


def killing_form() -> np.ndarray:
    """Killing form of su2 in the basis (E, F, H)"""
    structure = {
        (0, 2): (0, -2.0),  # [E, H] = -2E
        (1, 2): (1, 2.0),  # [F, H] = 2F
        (0, 1): (2, 1.0),  # [E, F] = H
    }
    ad = np.zeros((3, 3, 3))
    for (a, b), (c, value) in structure.items():
        ad[a][c, b] = value
        ad[b][c, a] = -value
    return np.einsum("aij,bji->ab", ad, ad)


def casimir_matrix(j: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """C = K^{ab} g_a g_b in the classical spin-j representation"""
    inverse_metric = np.linalg.inv(killing_form())
    gens = [rep_generator(j, g, False, order).coeffs[0] for g in GENERATORS]
    total = np.zeros((j.dim, j.dim))
    for a in range(3):
        for b in range(3):
            total += inverse_metric[a, b] * gens[a] @ gens[b]
    return RepMatrix(constant_series(total, order), _basis(j))


def casimir_rep(j: SpinLabel, order: int = DEFAULT_ORDER) -> HSeries:
    """Scalar by which the Casimir acts on V^j"""
    matrix = casimir_matrix(j, order).coeffs[0]
    value = float(matrix[0, 0])
    if not np.allclose(matrix, value * np.eye(j.dim), atol=1e-12):
        logger.warning(f"Casimir on spin {j} is not scalar")
    return HSeries.constant(value, order)


def commutator(a: RepMatrix, b: RepMatrix) -> RepMatrix:
    return a @ b - b @ a


def quantum_bracket_rhs(j: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """(K - K^-1)/(q - q^-1) on V^j, i.e. diagonal [2m]"""
    coeffs = np.zeros((order, j.dim, j.dim))
    for index, two_m in enumerate(j.weights):
        coeffs[:, index, index] = qnum(two_m, order).coeffs
    return RepMatrix(coeffs, _basis(j))


def generator_pairs(words: Iterable[Generator] = GENERATORS):
    return [(a, b) for a in words for b in words]
