"""
Symmetric quantum integers, factorials and q-binomials as power series in hbar (q = e^h)
"""

import math
from functools import lru_cache

from src.middleware.errors import NegativeFactorial
from src.models.series import DEFAULT_ORDER, HSeries, exp_h


@lru_cache(maxsize=None)
def qnum(n: int, order: int = DEFAULT_ORDER) -> HSeries:
    """[n] = (q^n - q^-n)/(q - q^-1), via e^{h(n-1)} + e^{h(n-3)} + ... + e^{-h(n-1)}"""
    if n == 0:
        return HSeries.zero(order)
    if n < 0:
        return -qnum(-n, order)
    total = HSeries.zero(order)
    for i in range(n):
        total = total + exp_h(n - 1 - 2 * i, order)
    return total


@lru_cache(maxsize=None)
def qfact(n: int, order: int = DEFAULT_ORDER) -> HSeries:
    """[n]! = [1][2]...[n]"""
    if n < 0:
        raise NegativeFactorial(f"[n]! is undefined for n = {n}")
    result = HSeries.one(order)
    for k in range(2, n + 1):
        result = result * qnum(k, order)
    return result


@lru_cache(maxsize=None)
def qbinom_qm2(n: int, k: int, order: int = DEFAULT_ORDER) -> HSeries:
    """q-binomial in q^-2: q^{k(k-n)} [n]! / ([n-k]! [k]!), zero for k outside 0..n"""
    if k < 0 or k > n:
        return HSeries.zero(order)
    return exp_h(k * (k - n), order) * qfact(n, order) * (qfact(n - k, order) * qfact(k, order)).inv()


def binom_series(n: int, k: int, order: int = DEFAULT_ORDER) -> HSeries:
    """Ordinary binomial coefficient as a constant series (classical counterpart)"""
    if k < 0 or k > n:
        return HSeries.zero(order)
    return HSeries.constant(float(math.comb(n, k)), order)


def binomial(n: int, k: int, deformed: bool, order: int = DEFAULT_ORDER) -> HSeries:
    return qbinom_qm2(n, k, order) if deformed else binom_series(n, k, order)


def ladder_factor(two_j: int, two_m: int, deformed: bool = True, order: int = DEFAULT_ORDER) -> HSeries:
    """Coefficient of F|j,m> = c |j,m-1>: e^{-hm} sqrt([j+m][j-m+1])"""
    j_plus_m = (two_j + two_m) // 2
    j_minus_m = (two_j - two_m) // 2
    value = exp_h(-two_m / 2, order) * (qnum(j_plus_m, order) * qnum(j_minus_m + 1, order)).sqrt()
    return value if deformed else value.classical_limit()
