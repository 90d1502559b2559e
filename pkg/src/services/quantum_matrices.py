"""
Quantum Matrices Service
Quantum Euclidean 4-space M_h(2) and quantum Minkowski space in the basis
det_q^k T^{(j,j)}_{mm'}. Generators: a = T_{--}, b = T_{-+}, c = T_{+-}, d = T_{++}
(weights of the half spin, left index m, right index m').
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from src.middleware.errors import DegreeLimitExceeded, UsageError
from src.models.matrices import cauchy_einsum, cauchy_matmul
from src.models.polynomials import MonomialExpansion, Mq2Poly
from src.models.series import DEFAULT_ORDER, HSeries, exp_h
from src.models.spins import Generator, SpinLabel, coupled_spins
from src.services.clebsch_gordan import cg_table
from src.services.qnumbers import binomial, ladder_factor
from src.services.representations import rep_word
from src.services.table_cache import get_cache
from src.services.twists import r23_rep, twist_rep_sl2c, twist_rep_so4

logger = logging.getLogger(__name__)

_maps = get_cache("product_maps")

DEFAULT_MAX_DEGREE = 12

CLASSICAL = "classical"
DEFORMED = "deformed"
STAR_EUCLID = "star_euclid"
MUL_MINKOWSKI = "mul_minkowski"
STAR_MINKOWSKI = "star_minkowski"
MQ2_KINDS = (CLASSICAL, DEFORMED, STAR_EUCLID, MUL_MINKOWSKI, STAR_MINKOWSKI)

GENERATOR_KEYS = {
    "a": (1, -1, -1, 0),
    "b": (1, -1, 1, 0),
    "c": (1, 1, -1, 0),
    "d": (1, 1, 1, 0),
    "det": (0, 0, 0, 1),
    "1": (0, 0, 0, 0),
}


def _coupled_product_block(two_j1: int, two_j2: int, two_j: int, deformed: bool, order: int) -> np.ndarray:
    """(order, (2J+1)^2, (2j1+1)^2 (2j2+1)^2): entry C(m1 m2; M) C(m1' m2'; M')

    Columns are ordered (m1, m1', m2, m2'), rows (M, M').
    """
    j1, j2 = SpinLabel(two_j1), SpinLabel(two_j2)
    block = cg_table(j1, j2, deformed, order).block(SpinLabel(two_j))
    u = block.reshape(order, j1.dim, j2.dim, two_j + 1)
    product = cauchy_einsum("acM,bdN->MNabcd", u, u)
    return product.reshape(order, (two_j + 1) ** 2, (j1.dim * j2.dim) ** 2)


def mq2_product_map(two_j1: int, two_j2: int, kind: str, order: int = DEFAULT_ORDER) -> Dict[int, np.ndarray]:
    """
    Per-block maps T^{(j1)} (x) T^{(j2)} -> det_q^{j1+j2-J} T^{(J)}

    Args:
        two_j1, two_j2: Spins of the two factors (as 2j)
        kind: One of 'classical', 'deformed', 'star_euclid', 'mul_minkowski', 'star_minkowski'
        order: Working order in h

    Returns:
        Dict 2J -> series matrix
    """
    if kind not in MQ2_KINDS:
        raise UsageError(f"unknown product kind '{kind}'")

    def build():
        j1, j2 = SpinLabel(two_j1), SpinLabel(two_j2)
        pair1, pair2 = (j1, j1), (j2, j2)
        deformed = kind in (DEFORMED, MUL_MINKOWSKI)
        right = None
        if kind == STAR_EUCLID:
            right = twist_rep_so4(pair1, pair2, inverse=True, order=order).coeffs
        elif kind == MUL_MINKOWSKI:
            right = r23_rep(pair1, pair2, order).coeffs
        elif kind == STAR_MINKOWSKI:
            right = twist_rep_sl2c(pair1, pair2, inverse=True, order=order).coeffs
        maps = {}
        for spin in coupled_spins(j1, j2):
            block = _coupled_product_block(two_j1, two_j2, spin.two_j, deformed, order)
            maps[spin.two_j] = block if right is None else cauchy_matmul(block, right)
        return maps

    return _maps.get_or_build(("mq2", two_j1, two_j2, kind, order), build)


def graded_product(p: Mq2Poly, r: Mq2Poly, kind: str, max_degree: int = DEFAULT_MAX_DEGREE) -> Mq2Poly:
    """Bilinear extension of a product kind over the (2j, det power) blocks"""
    order = min(p.order, r.order)
    left, right = p.blocks(), r.blocks()
    out: Dict[tuple, np.ndarray] = {}
    for (a, k1) in sorted(left):
        for (b, k2) in sorted(right):
            if a + b > max_degree:
                raise DegreeLimitExceeded(
                    f"product has spin degree 2j = {a + b} beyond the cap {max_degree}",
                    {"degree": a + b, "max_degree": max_degree},
                )
            outer = cauchy_einsum("ab,cd->abcd", left[(a, k1)][:order], right[(b, k2)][:order])
            outer = outer.reshape(order, -1)
            for two_j, matrix in mq2_product_map(a, b, kind, order).items():
                image = cauchy_einsum("ij,j->i", matrix, outer).reshape(order, two_j + 1, two_j + 1)
                key = (two_j, k1 + k2 + (a + b - two_j) // 2)
                out[key] = out[key] + image if key in out else image
    return Mq2Poly.from_blocks(out, order)


def mul_euclid(p: Mq2Poly, r: Mq2Poly, deformed: bool = True, max_degree: int = DEFAULT_MAX_DEGREE) -> Mq2Poly:
    return graded_product(p, r, DEFORMED if deformed else CLASSICAL, max_degree)


def star_euclid(p: Mq2Poly, r: Mq2Poly, max_degree: int = DEFAULT_MAX_DEGREE) -> Mq2Poly:
    """Classical product after the inverse so4 twist"""
    return graded_product(p, r, STAR_EUCLID, max_degree)


def mul_minkowski(p: Mq2Poly, r: Mq2Poly, max_degree: int = DEFAULT_MAX_DEGREE) -> Mq2Poly:
    """Deformed Euclidean product after R acting on the inner legs"""
    return graded_product(p, r, MUL_MINKOWSKI, max_degree)


def star_minkowski(p: Mq2Poly, r: Mq2Poly, max_degree: int = DEFAULT_MAX_DEGREE) -> Mq2Poly:
    """Classical product after the inverse sl2(C) twist"""
    return graded_product(p, r, STAR_MINKOWSKI, max_degree)


PRODUCTS: Dict[str, Callable[[Mq2Poly, Mq2Poly], Mq2Poly]] = {
    "classical": lambda p, r, max_degree=DEFAULT_MAX_DEGREE: mul_euclid(p, r, False, max_degree),
    "euclid": mul_euclid,
    "star_euclid": star_euclid,
    "minkowski": mul_minkowski,
    "star_minkowski": star_minkowski,
}


def generators(order: int = DEFAULT_ORDER) -> Dict[str, Mq2Poly]:
    """a, b, c, d, det_q and 1"""
    return {name: Mq2Poly.basis_element(*key, order=order) for name, key in GENERATOR_KEYS.items()}


def counit_mq2(p: Mq2Poly) -> HSeries:
    """epsilon(det_q^k T_{mm'}) = delta_{mm'}"""
    total = HSeries.zero(p.order)
    for (_, two_m, two_mp, _), value in p.sorted_items():
        if two_m == two_mp:
            total = total + value
    return total


def act_mq2(left_word: Sequence[Generator], right_word: Sequence[Generator], p: Mq2Poly, deformed: bool = True) -> Mq2Poly:
    """(g (x) g') |> p: rho(g) on the left index and rho(g') on the right index"""
    blocks = {}
    for (two_j, det_pow), block in p.blocks().items():
        spin = SpinLabel(two_j)
        left = rep_word(tuple(left_word), spin, deformed, p.order).coeffs
        right = rep_word(tuple(right_word), spin, deformed, p.order).coeffs
        blocks[(two_j, det_pow)] = cauchy_matmul(cauchy_matmul(left, block), right.transpose(0, 2, 1))
    return Mq2Poly.from_blocks(blocks, p.order)


def t_basis_element(two_j: int, two_m: int, two_mp: int, deformed: bool = True, order: int = DEFAULT_ORDER) -> MonomialExpansion:
    """
    Ordered a,b,c,d-monomial expansion of T^{(j,j)}_{mm'}

    T_{mm'} = sum_k q^{k(m'-m-k)} [j-m, k] [j+m, j+m'-k] [2j, j+m]^{1/2} [2j, j+m']^{-1/2}
              a^{j-m-k} b^k c^{m-m'+k} d^{j+m'-k}
    with q^-2 binomials [n, k] (ordinary binomials when deformed is False).
    """
    spin = SpinLabel(two_j)
    if not (spin.has_weight(two_m) and spin.has_weight(two_mp)):
        raise UsageError(f"(2j, 2m, 2m') = ({two_j}, {two_m}, {two_mp}) is not a valid label")
    j_minus_m = (two_j - two_m) // 2
    j_plus_m = (two_j + two_m) // 2
    j_plus_mp = (two_j + two_mp) // 2
    m_minus_mp = (two_m - two_mp) // 2
    prefactor = binomial(two_j, j_plus_m, deformed, order).sqrt() * binomial(two_j, j_plus_mp, deformed, order).sqrt().inv()
    terms = {}
    for k in range(j_minus_m + 1):
        powers = (j_minus_m - k, k, m_minus_mp + k, j_plus_mp - k)
        if min(powers) < 0:
            continue
        coefficient = binomial(j_minus_m, k, deformed, order) * binomial(j_plus_m, j_plus_mp - k, deformed, order)
        if coefficient.is_zero():
            continue
        if deformed:
            coefficient = coefficient * exp_h(k * (-m_minus_mp - k), order)
        terms[powers] = coefficient * prefactor
    return MonomialExpansion(terms, order)


def expansion_to_mq2(expansion: MonomialExpansion, product: Optional[Callable[[Mq2Poly, Mq2Poly], Mq2Poly]] = None) -> Mq2Poly:
    """Multiply out ordered monomials a^p b^q c^r d^s with the given product (deformed by default)"""
    product = product or mul_euclid
    gens = generators(expansion.order)
    total = Mq2Poly({}, expansion.order)
    for powers, coefficient in expansion.sorted_items():
        monomial = gens["1"]
        for name, power in zip("abcd", powers):
            for _ in range(power):
                monomial = product(monomial, gens[name])
        total = total + monomial.scale(coefficient)
    return total.pruned()


def lowered_basis_element(two_j: int, two_m: int, two_mp: int, order: int = DEFAULT_ORDER) -> Mq2Poly:
    """T_{mm'} from d^{2j}: deformed powers of d, then normalized lowering on each index"""
    gens = generators(order)
    element = gens["1"]
    for _ in range(two_j):
        element = mul_euclid(element, gens["d"])
    for current in range(two_j, two_m, -2):
        element = act_mq2((Generator.F,), (), element).scale(ladder_factor(two_j, current, True, order).inv())
    for current in range(two_j, two_mp, -2):
        element = act_mq2((), (Generator.F,), element).scale(ladder_factor(two_j, current, True, order).inv())
    return element


@lru_cache(maxsize=None)
def classical_star_sign(two_j: int, two_m: int, two_mp: int) -> float:
    """s with (T_{mm'})^* = s T_{-m',-m} under a <-> d, b -> -b, c -> -c, read off the classical expansions"""
    source = t_basis_element(two_j, two_m, two_mp, deformed=False, order=1)
    target = t_basis_element(two_j, -two_mp, -two_m, deformed=False, order=1)
    (p, q, r, s), value = max(source.terms.items(), key=lambda item: abs(item[1].leading))
    image_key = (s, q, r, p)
    image_value = value.leading * (-1) ** (q + r)
    return float(np.sign(image_value / target.coefficient(*image_key).leading))


def classical_star_mq2(p: Mq2Poly) -> Mq2Poly:
    """
    Classical Minkowski star on the T basis (real coefficients)

    This is hermitian conjugation of i X eps with eps = (0 1; -1 0), not of the
    matrix X itself: a <-> d, b -> -b, c -> -c, so det_q stays fixed. Plain
    conjugation (a -> a, b <-> c) stops being an involution once twisted by
    sigma. On the T basis T_{mm'} -> (-1)^{m-m'} T_{-m',-m}.
    """
    terms = {}
    for (two_j, two_m, two_mp, det_pow), value in p.terms.items():
        sign = classical_star_sign(two_j, two_m, two_mp)
        terms[(two_j, -two_mp, -two_m, det_pow)] = value.scale(sign)
    return Mq2Poly(terms, p.order)


def involution_minkowski(p: Mq2Poly) -> Mq2Poly:
    """(sigma^-1 (x) sigma^-1) |> p^*"""
    starred = classical_star_mq2(p)
    terms = {}
    for (two_j, two_m, two_mp, det_pow), value in starred.terms.items():
        terms[(two_j, two_m, two_mp, det_pow)] = value * exp_h(-(two_m + two_mp) / 2, p.order)
    return Mq2Poly(terms, p.order)


def quadratic_ideal(two_m: int, spin_one_index: str = "left", order: int = DEFAULT_ORDER) -> Mq2Poly:
    """
    Quadratic relation sums under the deformed product

    left:  sum C(1/2 1/2 1; m1 m2 m) C(1/2 1/2 0; m1' m2' 0) X_{m1 m1'} X_{m2 m2'}
    right: sum C(1/2 1/2 0; m1 m2 0) C(1/2 1/2 1; m1' m2' m) X_{m1 m1'} X_{m2 m2'}
    Both vanish in M_h(2).
    """
    half = SpinLabel(1)
    table = cg_table(half, half, True, order)
    total = Mq2Poly({}, order)
    for m1 in half.weights:
        for m2 in half.weights:
            for m1p in half.weights:
                for m2p in half.weights:
                    if spin_one_index == "left":
                        weight = table.coefficient(2, two_m, m1, m2) * table.coefficient(0, 0, m1p, m2p)
                    elif spin_one_index == "right":
                        weight = table.coefficient(0, 0, m1, m2) * table.coefficient(2, two_m, m1p, m2p)
                    else:
                        raise UsageError(f"unknown index '{spin_one_index}', expected left or right")
                    if weight.is_zero():
                        continue
                    product = mul_euclid(
                        Mq2Poly.basis_element(1, m1, m1p, 0, order=order),
                        Mq2Poly.basis_element(1, m2, m2p, 0, order=order),
                    )
                    total = total + product.scale(weight)
    return total


def basis_labels(degree: int):
    """(2j, 2m, 2m', k) of polynomial degree exactly `degree` (2j + 2k)"""
    for det_pow in range(degree // 2 + 1):
        two_j = degree - 2 * det_pow
        for two_m in range(-two_j, two_j + 1, 2):
            for two_mp in range(-two_j, two_j + 1, 2):
                yield (two_j, two_m, two_mp, det_pow)


def basis_dimension(degree: int) -> Dict[str, int]:
    """Peter-Weyl count against the dimension of degree-n polynomials in four variables"""
    return {
        "degree": degree,
        "t_basis": sum(1 for _ in basis_labels(degree)),
        "monomials": math.comb(degree + 3, 3),
    }


def random_mq2_poly(rng: np.random.Generator, max_degree: int = 4, order: int = DEFAULT_ORDER, density: float = 0.3) -> Mq2Poly:
    """Random element of degree at most max_degree with series coefficients in [-1, 1]"""
    terms = {}
    for degree in range(max_degree + 1):
        for key in basis_labels(degree):
            if rng.random() < density:
                terms[key] = HSeries(rng.uniform(-1.0, 1.0, size=order))
    if not terms:
        terms[GENERATOR_KEYS["1"]] = HSeries.one(order)
    return Mq2Poly(terms, order)
