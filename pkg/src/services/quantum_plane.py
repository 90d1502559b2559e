"""
Quantum Plane Service
Classical, deformed and twist-induced products on the quantum plane, stored
in the irreducible basis T^j_m (keys (2j, 2m)); x = T^{1/2}_{-1/2}, y = T^{1/2}_{1/2}.
"""

import logging
from typing import Callable, Dict, Mapping, Optional, Sequence, Union

import numpy as np

from src.middleware.errors import DegreeLimitExceeded, DimensionMismatch, UsageError
from src.models.matrices import RepMatrix, cauchy_einsum, cauchy_matmul, cauchy_matvec, constant_series
from src.models.polynomials import MonomialPoly, PlanePoly
from src.models.series import DEFAULT_ORDER, HSeries, exp_h
from src.models.spins import Generator, SpinLabel
from src.services.clebsch_gordan import cg_table
from src.services.qnumbers import binomial
from src.services.representations import rep_word
from src.services.table_cache import get_cache
from src.services.twists import gauge_block_factors, standard_twist_rep

logger = logging.getLogger(__name__)

_maps = get_cache("product_maps")

DEFAULT_MAX_DEGREE = 12

CLASSICAL = "classical"
DEFORMED = "deformed"
STAR = "star"
PRODUCT_KINDS = (CLASSICAL, DEFORMED, STAR)

IRREDUCIBLE = "irreducible"
MONOMIAL = "monomial"

BetaMap = Mapping[int, HSeries]


def _beta_key(beta: Optional[BetaMap]):
    return None if beta is None else tuple(sorted(beta.items()))


def plane_product_map(two_j1: int, two_j2: int, kind: str, beta: Optional[BetaMap] = None, order: int = DEFAULT_ORDER) -> np.ndarray:
    """
    Series matrix (order, 2J+1, (2j1+1)(2j2+1)) of T^{j1} (x) T^{j2} -> T^{j1+j2}

    Args:
        two_j1, two_j2: Degrees of the two factors
        kind: 'classical', 'deformed' or 'star' (classical product after F^-1)
        beta: Per-spin gauge map for the star product (keys 2j)
        order: Working order in h
    """
    if kind not in PRODUCT_KINDS:
        raise UsageError(f"unknown product kind '{kind}'")

    def build():
        j1, j2 = SpinLabel(two_j1), SpinLabel(two_j2)
        top = SpinLabel(two_j1 + two_j2)
        deformed = kind == DEFORMED
        block = cg_table(j1, j2, deformed, order).block(top).transpose(0, 2, 1)
        if kind != STAR:
            return np.ascontiguousarray(block)
        factors = None if beta is None else gauge_block_factors(beta, j1, j2)
        inverse_twist = standard_twist_rep(j1, j2, factors, inverse=True, order=order).matrix
        return cauchy_matmul(block, inverse_twist.coeffs)

    return _maps.get_or_build(("plane", two_j1, two_j2, kind, _beta_key(beta), order), build)


def _check_degree(two_j: int, max_degree: int):
    if two_j > max_degree:
        raise DegreeLimitExceeded(
            f"product has degree 2j = {two_j} beyond the cap {max_degree}",
            {"degree": two_j, "max_degree": max_degree},
        )


def graded_product(
    p: PlanePoly,
    r: PlanePoly,
    map_for: Callable[[int, int, int], np.ndarray],
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> PlanePoly:
    """Bilinear extension of a per-degree product map over the graded blocks"""
    order = min(p.order, r.order)
    left, right = p.blocks(), r.blocks()
    out: Dict[int, np.ndarray] = {}
    for a in sorted(left):
        for b in sorted(right):
            _check_degree(a + b, max_degree)
            outer = cauchy_einsum("i,k->ik", left[a][:order], right[b][:order]).reshape(order, -1)
            image = cauchy_matvec(map_for(a, b, order), outer)
            if a + b in out:
                out[a + b] = out[a + b] + image
            else:
                out[a + b] = image
    return PlanePoly.from_blocks(out, order)


def mul_plane(p: PlanePoly, r: PlanePoly, deformed: bool = True, max_degree: int = DEFAULT_MAX_DEGREE) -> PlanePoly:
    """Deformed (or commutative) product: T^{j1}_{m1} T^{j2}_{m2} = C(j1 j2 j1+j2; m1 m2) T^{j1+j2}"""
    kind = DEFORMED if deformed else CLASSICAL
    return graded_product(p, r, lambda a, b, n: plane_product_map(a, b, kind, order=n), max_degree)


def star_plane(p: PlanePoly, r: PlanePoly, beta: Optional[BetaMap] = None, max_degree: int = DEFAULT_MAX_DEGREE) -> PlanePoly:
    """Twist-induced product: apply F^-1 to the coefficient tensor, then multiply classically"""
    return graded_product(p, r, lambda a, b, n: plane_product_map(a, b, STAR, beta, n), max_degree)


def _conversion_factor(two_j: int, two_m: int, deformed: bool, order: int) -> HSeries:
    """binom(2j, j+m)^{1/2}: T^j_m = factor * x^{j-m} y^{j+m}"""
    return binomial(two_j, (two_j + two_m) // 2, deformed, order).sqrt()


def basis_convert(p: Union[PlanePoly, MonomialPoly], target: str, deformed: bool = True) -> Union[PlanePoly, MonomialPoly]:
    """
    Change between the monomial basis x^k y^l and the irreducible basis T^j_m

    Args:
        p: Polynomial in either basis
        target: 'irreducible' or 'monomial'
        deformed: Use q-binomials (deformed plane) or binomials (commutative plane)
    """
    if target == IRREDUCIBLE:
        if isinstance(p, PlanePoly):
            return p
        terms = {}
        for (k, l), value in p.terms.items():
            two_j, two_m = k + l, l - k
            terms[(two_j, two_m)] = value * _conversion_factor(two_j, two_m, deformed, p.order).inv()
        return PlanePoly(terms, p.order)
    if target == MONOMIAL:
        if isinstance(p, MonomialPoly):
            return p
        terms = {}
        for (two_j, two_m), value in p.terms.items():
            key = ((two_j - two_m) // 2, (two_j + two_m) // 2)
            terms[key] = value * _conversion_factor(two_j, two_m, deformed, p.order)
        return MonomialPoly(terms, p.order)
    raise UsageError(f"unknown basis '{target}', expected irreducible or monomial")


def act_plane(word: Sequence[Generator], p: PlanePoly, deformed: bool = True) -> PlanePoly:
    """g |> T^j_m = sum_m' T^j_m' rho(g)^m'_m, blockwise"""
    blocks = {}
    for two_j, vector in p.blocks().items():
        matrix = rep_word(tuple(word), SpinLabel(two_j), deformed, p.order)
        blocks[two_j] = matrix.apply(vector)
    return PlanePoly.from_blocks(blocks, p.order)


def star_involution(p: PlanePoly, classical_star: Mapping[int, np.ndarray]) -> PlanePoly:
    """
    sigma^-1 |> p^*: apply a classical star given per degree, then e^{-hm} on T^j_m

    Args:
        p: Plane polynomial with real coefficients
        classical_star: 2j -> real (2j+1)x(2j+1) matrix of the classical star on that degree
    """
    blocks = {}
    for two_j, vector in p.blocks().items():
        if two_j not in classical_star:
            raise DimensionMismatch(f"no classical star given for degree 2j = {two_j}")
        matrix = np.asarray(classical_star[two_j], dtype=float)
        if matrix.shape != (two_j + 1, two_j + 1):
            raise DimensionMismatch(f"classical star on 2j = {two_j} must be {two_j + 1}x{two_j + 1}")
        image = cauchy_matvec(constant_series(matrix, p.order), vector)
        sigma_inverse = np.stack([exp_h(-two_m / 2, p.order).coeffs for two_m in range(-two_j, two_j + 1, 2)], axis=1)
        blocks[two_j] = cauchy_einsum("i,i->i", sigma_inverse, image)
    return PlanePoly.from_blocks(blocks, p.order)


def plane_generators(order: int = DEFAULT_ORDER) -> Dict[str, PlanePoly]:
    return {
        "1": PlanePoly.basis_element(0, 0, order=order),
        "x": PlanePoly.basis_element(1, -1, order=order),
        "y": PlanePoly.basis_element(1, 1, order=order),
    }


def rescale_plane(p: PlanePoly, beta: BetaMap, inverse: bool = False) -> PlanePoly:
    """T^j_m -> beta(j) T^j_m (or beta(j)^-1)"""
    terms = {}
    for (two_j, two_m), value in p.terms.items():
        if two_j not in beta:
            raise DimensionMismatch(f"beta is undefined for 2j = {two_j}")
        factor = beta[two_j].inv() if inverse else beta[two_j]
        terms[(two_j, two_m)] = value * factor
    return PlanePoly(terms, p.order)


def triple_product_matrix(j1: SpinLabel, j2: SpinLabel, j3: SpinLabel, order: int = DEFAULT_ORDER) -> RepMatrix:
    """Commutative mu o (mu (x) id) from V^{j1} (x) V^{j2} (x) V^{j3} to the top degree"""
    first = plane_product_map(j1.two_j, j2.two_j, CLASSICAL, order=order)
    second = plane_product_map(j1.two_j + j2.two_j, j3.two_j, CLASSICAL, order=order)
    lifted = cauchy_einsum("ij,kl->ikjl", first, constant_series(np.eye(j3.dim), order))
    lifted = lifted.reshape(order, first.shape[1] * j3.dim, first.shape[2] * j3.dim)
    top = SpinLabel(j1.two_j + j2.two_j + j3.two_j)
    rows = tuple((two_m,) for two_m in top.weights)
    cols = tuple(
        (m1, m2, m3) for m1 in j1.weights for m2 in j2.weights for m3 in j3.weights
    )
    return RepMatrix(cauchy_matmul(second, lifted), rows, cols)


def random_plane_poly(rng: np.random.Generator, max_two_j: int = 4, order: int = DEFAULT_ORDER, density: float = 0.6) -> PlanePoly:
    """Random polynomial of degree at most max_two_j with series coefficients in [-1, 1]"""
    terms = {}
    for two_j in range(max_two_j + 1):
        for two_m in range(-two_j, two_j + 1, 2):
            if rng.random() < density:
                terms[(two_j, two_m)] = HSeries(rng.uniform(-1.0, 1.0, size=order))
    if not terms:
        terms[(0, 0)] = HSeries.one(order)
    return PlanePoly(terms, order)
