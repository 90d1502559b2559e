"""
Verification Service
Property checks for the series kernels, representations, Clebsch-Gordan
tables, twists and the three quantum spaces. Checks register themselves per
suite; the runner fans them out over a thread pool and reports in a fixed order.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.config.config import SessionConfig
from src.middleware.monitoring import RunMonitor
from src.models.matrices import RepMatrix, block_diagonal
from src.models.polynomials import Mq2Poly, PlanePoly
from src.models.series import HSeries, exp_h
from src.models.spins import Generator, SpinLabel, coupled_spins, spins_up_to
from src.services import quantum_matrices as mq2
from src.services import quantum_plane as plane
from src.services.clebsch_gordan import cg_table
from src.services.qnumbers import qbinom_qm2, qnum
from src.services.relations import relations_report
from src.services.representations import (
    GENERATORS,
    cartan_exp,
    casimir_matrix,
    commutator,
    deformed_star_generator,
    exp_h_matrix,
    quantum_bracket_rhs,
    rep_antipode,
    rep_generator,
    rep_tensor_coproduct,
    rep_tensor_coproduct_op,
    rmatrix_rep,
    rmatrix_via_antipode,
    sigma_rep,
)
from src.services.twists import (
    antipode_legwise,
    classical_antipode_matrix,
    coassociator_rep,
    deformed_coproduct_rep,
    diagonal_action,
    flip_rep,
    rf_relation_diagnostic,
    standard_twist_rep,
)
from src.utils.logging import log_check_result

logger = logging.getLogger(__name__)

SUITES = ("core", "plane", "mq2", "minkowski")

SPACE_SUITES = {
    "plane": ("core", "plane"),
    "mq2": ("core", "mq2"),
    "minkowski": ("core", "minkowski"),
    "all": SUITES,
}

# Twist, R-matrix and covariance checks stop at this spin
TWIST_SPIN = SpinLabel(4)
HALF = SpinLabel(1)


@dataclass
class Measurement:
    """Outcome of one check body"""

    deviation: float
    details: str = ""
    payload: Optional[Dict[str, Any]] = None


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    run: Callable[[SessionConfig], Measurement]
    gating: bool = True
    exact: bool = False


@dataclass
class CheckResult:
    name: str
    suite: str
    passed: bool
    max_deviation: float
    details: str = ""
    seconds: float = 0.0
    gating: bool = True
    payload: Optional[Dict[str, Any]] = field(default=None, repr=False)

    @property
    def status(self) -> str:
        if not self.gating:
            return "info"
        return "pass" if self.passed else "FAIL"

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["status"] = self.status
        if data["payload"] is None:
            del data["payload"]
        return data


_REGISTRY: Dict[str, List[Check]] = {suite: [] for suite in SUITES}


def check(suite: str, name: str, gating: bool = True, exact: bool = False):
    """Register a check body under a suite"""

    def decorator(fn: Callable[[SessionConfig], Measurement]):
        _REGISTRY[suite].append(Check(name, suite, fn, gating, exact))
        return fn

    return decorator


def registered_checks(suite: str) -> List[Check]:
    return list(_REGISTRY[suite])


# Helpers


def _spins(bound: SpinLabel) -> List[SpinLabel]:
    return list(spins_up_to(bound))


def _pairs(bound: SpinLabel) -> List[Tuple[SpinLabel, SpinLabel]]:
    spins = _spins(bound)
    return [(j1, j2) for j1 in spins for j2 in spins]


def _worst(values: Iterable[float]) -> float:
    return max(values, default=0.0)


def _rng(cfg: SessionConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _q(order: int) -> HSeries:
    return exp_h(1, order)


def _map_deviation(left: Dict[int, np.ndarray], right: Dict[int, np.ndarray]) -> float:
    return _worst(float(np.max(np.abs(left[k] - right[k]), initial=0.0)) for k in left)


def _twist_bound(cfg: SessionConfig) -> SpinLabel:
    return min(cfg.max_spin, TWIST_SPIN)


def _sample_degree(cfg: SessionConfig, factors: int) -> int:
    """Largest random degree (at most 4) whose products stay under the cap"""
    return max(1, min(4, cfg.max_degree // factors))


# Series and q-numbers


@check("core", "series_ring_axioms")
def check_series_ring(cfg: SessionConfig) -> Measurement:
    rng = _rng(cfg, 1)
    deviations = []
    for _ in range(cfg.random_samples):
        a, b, c = (HSeries(rng.uniform(-1.0, 1.0, cfg.order)) for _ in range(3))
        deviations.append(((a * b) * c).max_deviation(a * (b * c)))
        deviations.append((a * b).max_deviation(b * a))
        deviations.append((a * (b + c)).max_deviation(a * b + a * c))
        coeffs = rng.uniform(-1.0, 1.0, cfg.order)
        coeffs[0] = rng.uniform(0.5, 2.0)
        u = HSeries(coeffs)
        deviations.append((u * u.inv()).max_deviation(1.0))
        deviations.append((u.sqrt() * u.sqrt()).max_deviation(u))
    return Measurement(_worst(deviations), f"{cfg.random_samples} random samples")


@check("core", "qnumber_symmetries")
def check_qnumbers(cfg: SessionConfig) -> Measurement:
    deviations = []
    for n in range(13):
        value = qnum(n, cfg.order)
        deviations.append(float(np.max(np.abs(value.coeffs[1::2]), initial=0.0)))
        deviations.append(qnum(-n, cfg.order).max_deviation(-value))
        deviations.append(abs(value.leading - n))
        for k in range(n + 1):
            deviations.append(abs(qbinom_qm2(n, k, cfg.order).leading - math.comb(n, k)))
    return Measurement(_worst(deviations), "n <= 12")


# Representations


@check("core", "commutation_relations")
def check_commutation(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j in _spins(cfg.max_spin):
        e = rep_generator(j, Generator.E, True, cfg.order)
        f = rep_generator(j, Generator.F, True, cfg.order)
        h = rep_generator(j, Generator.H, True, cfg.order)
        deviations.append(commutator(h, e).max_deviation(e.scale(2.0)))
        deviations.append(commutator(h, f).max_deviation(f.scale(-2.0)))
        deviations.append(commutator(e, f).max_deviation(quantum_bracket_rhs(j, cfg.order)))
    return Measurement(_worst(deviations), f"j <= {cfg.max_spin}")


@check("core", "star_representation")
def check_star_rep(cfg: SessionConfig) -> Measurement:
    deviations = [
        deformed_star_generator(j, g, cfg.order).max_deviation(rep_generator(j, g, True, cfg.order).T)
        for j in _spins(cfg.max_spin)
        for g in GENERATORS
    ]
    return Measurement(_worst(deviations), f"j <= {cfg.max_spin}")


@check("core", "classical_antipode_formula")
def check_classical_antipode(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j in _spins(cfg.max_spin):
        conj = classical_antipode_matrix(j, cfg.order)
        for g in GENERATORS:
            expected = conj @ rep_generator(j, g, False, cfg.order).T @ conj.inverse()
            deviations.append(rep_antipode((g,), j, False, cfg.order).max_deviation(expected))
    return Measurement(_worst(deviations), f"j <= {cfg.max_spin}")


@check("core", "quasitriangularity")
def check_quasitriangular(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(_twist_bound(cfg)):
        r = rmatrix_rep(j1, j2, cfg.order)
        for g in GENERATORS:
            delta = rep_tensor_coproduct(g, j1, j2, True, cfg.order)
            delta_op = rep_tensor_coproduct_op(g, j1, j2, True, cfg.order)
            deviations.append((r @ delta).max_deviation(delta_op @ r))
    return Measurement(_worst(deviations), f"j1, j2 <= {_twist_bound(cfg)}")


@check("core", "rmatrix_antipode_invariance")
def check_rmatrix_antipode(cfg: SessionConfig) -> Measurement:
    deviations = [
        rmatrix_via_antipode(j1, j2, cfg.order).max_deviation(rmatrix_rep(j1, j2, cfg.order))
        for j1, j2 in _pairs(_twist_bound(cfg))
    ]
    return Measurement(_worst(deviations), f"j1, j2 <= {_twist_bound(cfg)}")


@check("core", "sigma_grouplike")
def check_sigma(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j in _spins(cfg.max_spin):
        sigma = sigma_rep(j, cfg.order)
        deviations.append((sigma @ sigma).max_deviation(cartan_exp(j, 1.0, cfg.order)))
    for j1, j2 in _pairs(_twist_bound(cfg)):
        delta_h = rep_tensor_coproduct(Generator.H, j1, j2, True, cfg.order)
        expected = sigma_rep(j1, cfg.order).kron(sigma_rep(j2, cfg.order))
        deviations.append(exp_h_matrix(delta_h, 0.5).max_deviation(expected))
    return Measurement(_worst(deviations), "sigma^2 = K and Delta(sigma) = sigma (x) sigma")


@check("core", "casimir_scalar")
def check_casimir(cfg: SessionConfig) -> Measurement:
    deviations = []
    values = {}
    for j in _spins(cfg.max_spin):
        matrix = casimir_matrix(j, cfg.order).coeffs[0]
        scalar = float(matrix[0, 0])
        values[str(j)] = scalar
        deviations.append(float(np.max(np.abs(matrix - scalar * np.eye(j.dim)))))
        deviations.append(abs(scalar - float(j.j * (j.j + 1)) / 2.0))
    return Measurement(_worst(deviations), "C acts as j(j+1)/2", {"values": values})


# Clebsch-Gordan tables


@check("core", "cg_orthogonality")
def check_cg_orthogonality(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(cfg.max_spin):
        for deformed in (True, False):
            u = cg_table(j1, j2, deformed, cfg.order).matrix
            deviations.append((u.T @ u).max_deviation(RepMatrix.identity(u.col_basis, cfg.order)))
            deviations.append((u @ u.T).max_deviation(RepMatrix.identity(u.row_basis, cfg.order)))
    return Measurement(_worst(deviations), f"j1, j2 <= {cfg.max_spin}")


@check("core", "cg_intertwiner")
def check_cg_intertwiner(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(cfg.max_spin):
        for deformed in (True, False):
            u = cg_table(j1, j2, deformed, cfg.order).matrix
            for g in GENERATORS:
                blocks = block_diagonal(
                    [rep_generator(spin, g, deformed, cfg.order).coeffs for spin in coupled_spins(j1, j2)]
                )
                reduced = u.T @ rep_tensor_coproduct(g, j1, j2, deformed, cfg.order) @ u
                deviations.append(reduced.max_deviation(RepMatrix(blocks, u.col_basis)))
    return Measurement(_worst(deviations), f"j1, j2 <= {cfg.max_spin}")


@check("core", "cg_symmetry")
def check_cg_symmetry(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(min(cfg.max_spin, SpinLabel(3))):
        table = cg_table(j1, j2, True, cfg.order)
        swapped = cg_table(j2, j1, True, cfg.order)
        for (two_j, two_m, two_m1, two_m2), value in table.entries.items():
            deviations.append(value.max_deviation(swapped.coefficient(two_j, -two_m, -two_m2, -two_m1)))
    return Measurement(_worst(deviations), "C(j1 j2 j; m1 m2 m) = C(j2 j1 j; -m2 -m1 -m)")


@check("core", "cg_classical_limit", exact=True)
def check_cg_classical(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(cfg.max_spin):
        deformed = cg_table(j1, j2, True, cfg.order).matrix.coeffs
        classical = cg_table(j1, j2, False, cfg.order).matrix.coeffs
        deviations.append(float(np.max(np.abs(deformed[0] - classical[0]))))
        deviations.append(float(np.max(np.abs(classical[1:]), initial=0.0)))
    return Measurement(_worst(deviations), "h^0 coefficients")


# Twists


@check("core", "twist_unitarity")
def check_twist_unitarity(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(_twist_bound(cfg)):
        twist = standard_twist_rep(j1, j2, order=cfg.order).matrix
        inverse = standard_twist_rep(j1, j2, inverse=True, order=cfg.order).matrix
        deviations.append(twist.T.max_deviation(inverse))
        deviations.append((twist @ inverse).max_deviation(RepMatrix.identity(twist.row_basis, cfg.order)))
        deviations.append(float(np.max(np.abs(twist.coeffs[0] - np.eye(twist.shape[0])))))
    return Measurement(_worst(deviations), f"j1, j2 <= {_twist_bound(cfg)}")


@check("core", "twist_reality")
def check_twist_reality(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(_twist_bound(cfg)):
        twist = standard_twist_rep(j1, j2, order=cfg.order).matrix
        flipped_inverse = flip_rep(standard_twist_rep(j2, j1, inverse=True, order=cfg.order).matrix, j2, j1)
        deviations.append(antipode_legwise(twist, j1, j2).max_deviation(flipped_inverse))
    return Measurement(_worst(deviations), "(S (x) S)(F) = F_21^-1")


@check("core", "twist_intertwining")
def check_twist_intertwining(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(_twist_bound(cfg)):
        twist = standard_twist_rep(j1, j2, order=cfg.order).matrix
        for g in GENERATORS:
            classical = rep_tensor_coproduct(g, j1, j2, False, cfg.order)
            deformed = deformed_coproduct_rep(g, j1, j2, cfg.order)
            deviations.append((twist @ classical).max_deviation(deformed @ twist))
        deviations.append(
            deformed_coproduct_rep(Generator.H, j1, j2, cfg.order).max_deviation(
                rep_tensor_coproduct(Generator.H, j1, j2, False, cfg.order)
            )
        )
    return Measurement(_worst(deviations), "F Delta(g) = Delta_h(g) F")


@check("core", "coassociator_invariance")
def check_coassociator(cfg: SessionConfig) -> Measurement:
    spins = (HALF, HALF, HALF)
    phi = coassociator_rep(*spins, cfg.order)
    deviations = [float(np.max(np.abs(phi.coeffs[0] - np.eye(phi.shape[0]))))]
    for g in GENERATORS:
        action = diagonal_action(g, spins, cfg.order)
        deviations.append((phi @ action).max_deviation(action @ phi))
    return Measurement(_worst(deviations), "Phi commutes with the diagonal action on (1/2)^3")


@check("core", "rf_relation", gating=False)
def check_rf_relation(cfg: SessionConfig) -> Measurement:
    reports = [rf_relation_diagnostic(j1, j2, cfg.order) for j1, j2 in _pairs(min(cfg.max_spin, SpinLabel(2)))]
    deviation = _worst(report["block_scalar_deviation"] for report in reports)
    return Measurement(deviation, "F_21^-1 R F block scalars (report only)", {"pairs": reports})


# Quantum plane


@check("plane", "plane_commutation")
def check_plane_commutation(cfg: SessionConfig) -> Measurement:
    gens = plane.plane_generators(cfg.order)
    xy = plane.star_plane(gens["x"], gens["y"])
    yx = plane.star_plane(gens["y"], gens["x"])
    deformed = plane.mul_plane(gens["x"], gens["y"]) - plane.mul_plane(gens["y"], gens["x"]).scale(_q(cfg.order))
    deviation = max(xy.max_deviation(yx.scale(_q(cfg.order))), deformed.max_deviation(PlanePoly({}, cfg.order)))
    return Measurement(deviation, "x*y = q y*x")


@check("plane", "plane_twist_equivalence")
def check_plane_twist(cfg: SessionConfig) -> Measurement:
    deviations = []
    bound = cfg.max_spin.two_j
    for a in range(bound + 1):
        for b in range(bound + 1):
            star = plane.plane_product_map(a, b, plane.STAR, order=cfg.order)
            deformed = plane.plane_product_map(a, b, plane.DEFORMED, order=cfg.order)
            deviations.append(float(np.max(np.abs(star - deformed))))
    return Measurement(_worst(deviations), f"all basis pairs, j1, j2 <= {cfg.max_spin}")


@check("plane", "plane_associativity")
def check_plane_associativity(cfg: SessionConfig) -> Measurement:
    gens = list(plane.plane_generators(cfg.order).values())
    triples = [(p, r, s) for p in gens for r in gens for s in gens]
    rng = _rng(cfg, 2)
    for _ in range(cfg.random_samples):
        triples.append(tuple(plane.random_plane_poly(rng, _sample_degree(cfg, 3), cfg.order) for _ in range(3)))
    deviations = []
    for p, r, s in triples:
        left = plane.star_plane(plane.star_plane(p, r), s, max_degree=cfg.max_degree)
        right = plane.star_plane(p, plane.star_plane(r, s), max_degree=cfg.max_degree)
        deviations.append(left.max_deviation(right))
    return Measurement(_worst(deviations), f"{len(triples)} triples")


@check("plane", "plane_grading")
def check_plane_grading(cfg: SessionConfig) -> Measurement:
    rng = _rng(cfg, 3)
    deviations = []
    for _ in range(cfg.random_samples):
        a, b = (int(v) for v in rng.integers(0, _sample_degree(cfg, 2) + 1, size=2))
        p = PlanePoly({(a, m): HSeries(rng.uniform(-1, 1, cfg.order)) for m in range(-a, a + 1, 2)}, cfg.order)
        r = PlanePoly({(b, m): HSeries(rng.uniform(-1, 1, cfg.order)) for m in range(-b, b + 1, 2)}, cfg.order)
        product = plane.star_plane(p, r)
        stray = [value for (two_j, _), value in product.terms.items() if two_j != a + b]
        deviations.append(_worst(float(np.max(np.abs(v.coeffs))) for v in stray))
    return Measurement(_worst(deviations), "deg(p*r) = deg p + deg r")


@check("plane", "plane_classical_limit", exact=True)
def check_plane_classical(cfg: SessionConfig) -> Measurement:
    deviations = []
    bound = cfg.max_spin.two_j
    for a in range(bound + 1):
        for b in range(bound + 1):
            classical = plane.plane_product_map(a, b, plane.CLASSICAL, order=cfg.order)
            for kind in (plane.DEFORMED, plane.STAR):
                other = plane.plane_product_map(a, b, kind, order=cfg.order)
                deviations.append(float(np.max(np.abs(other[0] - classical[0]))))
    rng = _rng(cfg, 4)
    for _ in range(cfg.random_samples):
        degree = _sample_degree(cfg, 2)
        p, r = plane.random_plane_poly(rng, degree, cfg.order), plane.random_plane_poly(rng, degree, cfg.order)
        classical = plane.mul_plane(p, r, deformed=False)
        for product in (plane.star_plane(p, r), plane.mul_plane(p, r)):
            keys = set(product.terms) | set(classical.terms)
            deviations.extend(
                abs(product.coefficient(*key).leading - classical.coefficient(*key).leading) for key in keys
            )
    return Measurement(_worst(deviations), "h^0 coefficients of deformed and star products")


@check("plane", "plane_covariance")
def check_plane_covariance(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j1, j2 in _pairs(min(cfg.max_spin, SpinLabel(4))):
        top = SpinLabel(j1.two_j + j2.two_j)
        rows = tuple((two_m,) for two_m in top.weights)
        cols = cg_table(j1, j2, True, cfg.order).matrix.row_basis
        star, deformed = (
            RepMatrix(plane.plane_product_map(j1.two_j, j2.two_j, kind, order=cfg.order), rows, cols)
            for kind in (plane.STAR, plane.DEFORMED)
        )
        for g in GENERATORS:
            classical_top = rep_generator(top, g, False, cfg.order)
            deformed_top = rep_generator(top, g, True, cfg.order)
            deviations.append(
                (star @ deformed_coproduct_rep(g, j1, j2, cfg.order)).max_deviation(classical_top @ star)
            )
            deviations.append(
                (deformed @ rep_tensor_coproduct(g, j1, j2, True, cfg.order)).max_deviation(deformed_top @ deformed)
            )
    return Measurement(_worst(deviations), "g |> (p * r) through the coproduct legs")


@check("plane", "coassociator_triple_product")
def check_coassociator_plane(cfg: SessionConfig) -> Measurement:
    triple = plane.triple_product_matrix(HALF, HALF, HALF, cfg.order)
    phi = coassociator_rep(HALF, HALF, HALF, cfg.order)
    return Measurement((triple @ phi).max_deviation(triple), "mu3 Phi = mu3 on plane generators")


@check("plane", "gauge_covariance")
def check_gauge(cfg: SessionConfig) -> Measurement:
    rng = _rng(cfg, 5)
    beta = {}
    for two_j in range(cfg.max_degree + 1):
        coeffs = rng.uniform(-1.0, 1.0, cfg.order)
        coeffs[0] = 1.0
        beta[two_j] = HSeries(coeffs)
    samples = list(plane.plane_generators(cfg.order).values())
    samples += [plane.random_plane_poly(rng, _sample_degree(cfg, 2), cfg.order) for _ in range(max(1, cfg.random_samples // 5))]
    deviations = []
    for p in samples:
        for r in samples[:4]:
            gauged = plane.rescale_plane(plane.star_plane(p, r, beta), beta)
            standard = plane.star_plane(plane.rescale_plane(p, beta), plane.rescale_plane(r, beta))
            deviations.append(gauged.max_deviation(standard))
    return Measurement(_worst(deviations), "coboundary-gauged twist vs rescaled basis")


@check("plane", "plane_relations", gating=False)
def check_plane_relations(cfg: SessionConfig) -> Measurement:
    report = relations_report("plane", cfg.order, cfg.tol)
    return Measurement(report["residual"], "y*x in the ordered basis (report only)", report)


# M_h(2)


def _mq2_bound(cfg: SessionConfig) -> SpinLabel:
    return cfg.effective_mq2_spin


@check("mq2", "mq2_relations")
def check_mq2_relations(cfg: SessionConfig) -> Measurement:
    g = mq2.generators(cfg.order)
    q = _q(cfg.order)
    star = mq2.star_euclid
    zero = Mq2Poly({}, cfg.order)
    relations = [
        star(g["a"], g["b"]) - star(g["b"], g["a"]).scale(q),
        star(g["a"], g["c"]) - star(g["c"], g["a"]).scale(q),
        star(g["b"], g["d"]) - star(g["d"], g["b"]).scale(q),
        star(g["c"], g["d"]) - star(g["d"], g["c"]).scale(q),
        star(g["b"], g["c"]) - star(g["c"], g["b"]),
        star(g["a"], g["d"]) - star(g["d"], g["a"]) - star(g["b"], g["c"]).scale(q - q.inv()),
    ]
    for name in "abcd":
        relations.append(star(g["det"], g[name]) - star(g[name], g["det"]))
    det_q = star(g["a"], g["d"]) - star(g["b"], g["c"]).scale(q)
    relations.append(det_q - g["det"])
    return Measurement(_worst(rel.max_deviation(zero) for rel in relations), "six relations, det_q central")


@check("mq2", "euclid_twist_equivalence")
def check_euclid_twist(cfg: SessionConfig) -> Measurement:
    bound = _mq2_bound(cfg).two_j
    deviations = [
        _map_deviation(
            mq2.mq2_product_map(a, b, mq2.STAR_EUCLID, cfg.order),
            mq2.mq2_product_map(a, b, mq2.DEFORMED, cfg.order),
        )
        for a in range(bound + 1)
        for b in range(bound + 1)
    ]
    return Measurement(_worst(deviations), f"all basis pairs, j1, j2 <= {_mq2_bound(cfg)}")


@check("mq2", "quadratic_ideal")
def check_quadratic_ideal(cfg: SessionConfig) -> Measurement:
    zero = Mq2Poly({}, cfg.order)
    deviations = [
        mq2.quadratic_ideal(two_m, index, cfg.order).max_deviation(zero)
        for two_m in (-2, 0, 2)
        for index in ("left", "right")
    ]
    return Measurement(_worst(deviations), "both quadratic sums, m in {-1, 0, 1}")


@check("mq2", "counit_multiplicative")
def check_counit(cfg: SessionConfig) -> Measurement:
    rng = _rng(cfg, 6)
    deviations = []
    for _ in range(max(1, cfg.random_samples // 5)):
        degree = _sample_degree(cfg, 2)
        p, r = mq2.random_mq2_poly(rng, degree, cfg.order), mq2.random_mq2_poly(rng, degree, cfg.order)
        product = mq2.mul_euclid(p, r)
        deviations.append(mq2.counit_mq2(product).max_deviation(mq2.counit_mq2(p) * mq2.counit_mq2(r)))
    return Measurement(_worst(deviations), "eps(p*r) = eps(p) eps(r)")


@check("mq2", "det_invariance")
def check_det_invariance(cfg: SessionConfig) -> Measurement:
    det = mq2.generators(cfg.order)["det"]
    zero = Mq2Poly({}, cfg.order)
    deviations = [mq2.act_mq2((), (), det).max_deviation(det)]
    for g in GENERATORS:
        deviations.append(mq2.act_mq2((g,), (), det).max_deviation(zero))
        deviations.append(mq2.act_mq2((), (g,), det).max_deviation(zero))
    return Measurement(_worst(deviations), "(g (x) g') |> det_q = eps(g (x) g') det_q")


@check("mq2", "peter_weyl_dimension", exact=True)
def check_dimension(cfg: SessionConfig) -> Measurement:
    counts = [mq2.basis_dimension(degree) for degree in range(cfg.max_degree + 1)]
    deviation = _worst(float(abs(c["t_basis"] - c["monomials"])) for c in counts)
    return Measurement(deviation, f"degrees 0..{cfg.max_degree}")


@check("mq2", "basis_expansion")
def check_basis_expansion(cfg: SessionConfig) -> Measurement:
    deviations = []
    for j in _spins(_mq2_bound(cfg)):
        for two_m in j.weights:
            for two_mp in j.weights:
                element = Mq2Poly.basis_element(j.two_j, two_m, two_mp, 0, order=cfg.order)
                expansion = mq2.t_basis_element(j.two_j, two_m, two_mp, order=cfg.order)
                deviations.append(mq2.expansion_to_mq2(expansion).max_deviation(element))
                deviations.append(mq2.lowered_basis_element(j.two_j, two_m, two_mp, cfg.order).max_deviation(element))
    return Measurement(_worst(deviations), "explicit expansion and lowering from d^{2j}")


@check("mq2", "mq2_classical_limit", exact=True)
def check_mq2_classical(cfg: SessionConfig) -> Measurement:
    bound = _mq2_bound(cfg).two_j
    deviations = []
    for a in range(bound + 1):
        for b in range(bound + 1):
            classical = mq2.mq2_product_map(a, b, mq2.CLASSICAL, cfg.order)
            for kind in (mq2.DEFORMED, mq2.STAR_EUCLID, mq2.MUL_MINKOWSKI, mq2.STAR_MINKOWSKI):
                other = mq2.mq2_product_map(a, b, kind, cfg.order)
                deviations.extend(float(np.max(np.abs(other[k][0] - classical[k][0]))) for k in classical)
    return Measurement(_worst(deviations), "h^0 coefficients of every product map")


@check("mq2", "mq2_relations_report", gating=False)
def check_mq2_report(cfg: SessionConfig) -> Measurement:
    report = relations_report("mq2", cfg.order, cfg.tol)
    return Measurement(report["residual"], "generator relations (report only)", report)


# Minkowski space


@check("minkowski", "minkowski_twist_equivalence")
def check_minkowski_twist(cfg: SessionConfig) -> Measurement:
    bound = _mq2_bound(cfg).two_j
    deviations = [
        _map_deviation(
            mq2.mq2_product_map(a, b, mq2.STAR_MINKOWSKI, cfg.order),
            mq2.mq2_product_map(a, b, mq2.MUL_MINKOWSKI, cfg.order),
        )
        for a in range(bound + 1)
        for b in range(bound + 1)
    ]
    return Measurement(_worst(deviations), f"all basis pairs, j1, j2 <= {_mq2_bound(cfg)}")


@check("minkowski", "minkowski_associativity")
def check_minkowski_associativity(cfg: SessionConfig) -> Measurement:
    g = mq2.generators(cfg.order)
    names = ("a", "b", "c", "d")
    star = mq2.star_minkowski
    deviations = [
        star(star(g[x], g[y]), g[z]).max_deviation(star(g[x], star(g[y], g[z])))
        for x in names
        for y in names
        for z in names
    ]
    return Measurement(_worst(deviations), "generator triples")


def _involution_samples(cfg: SessionConfig, salt: int) -> List[Mq2Poly]:
    rng = _rng(cfg, salt)
    samples = list(mq2.generators(cfg.order).values())
    samples += [mq2.random_mq2_poly(rng, _sample_degree(cfg, 2), cfg.order) for _ in range(max(2, cfg.random_samples // 10))]
    return samples


@check("minkowski", "minkowski_involution")
def check_involution(cfg: SessionConfig) -> Measurement:
    deviations = [
        mq2.involution_minkowski(mq2.involution_minkowski(p)).max_deviation(p) for p in _involution_samples(cfg, 7)
    ]
    return Measurement(_worst(deviations), "involutive on degree <= 4")


@check("minkowski", "minkowski_antimultiplicative")
def check_antimultiplicative(cfg: SessionConfig) -> Measurement:
    samples = _involution_samples(cfg, 8)
    star, inv = mq2.star_minkowski, mq2.involution_minkowski
    deviations = []
    for index, p in enumerate(samples):
        r = samples[(index * 7 + 3) % len(samples)]
        deviations.append(inv(star(p, r)).max_deviation(star(inv(r), inv(p))))
    return Measurement(_worst(deviations), "(p*r)^* = r^* * p^* on degree <= 4")


@check("minkowski", "classical_star")
def check_classical_star(cfg: SessionConfig) -> Measurement:
    deviations = []
    for two_j in range(5):
        for two_m in range(-two_j, two_j + 1, 2):
            for two_mp in range(-two_j, two_j + 1, 2):
                expected = (-1) ** ((two_m - two_mp) // 2)
                deviations.append(abs(mq2.classical_star_sign(two_j, two_m, two_mp) - expected))
    rng = _rng(cfg, 9)
    for _ in range(max(2, cfg.random_samples // 10)):
        p, r = mq2.random_mq2_poly(rng, 2, cfg.order), mq2.random_mq2_poly(rng, 2, cfg.order)
        product = mq2.mul_euclid(p, r, deformed=False)
        swapped = mq2.mul_euclid(mq2.classical_star_mq2(r), mq2.classical_star_mq2(p), deformed=False)
        deviations.append(mq2.classical_star_mq2(product).max_deviation(swapped))
    return Measurement(_worst(deviations), "T_mm' -> (-1)^(m-m') T_-m'-m, antimultiplicative at h = 0")


@check("minkowski", "minkowski_relations_report", gating=False)
def check_minkowski_report(cfg: SessionConfig) -> Measurement:
    report = relations_report("minkowski", cfg.order, cfg.tol)
    return Measurement(report["residual"], "generator relations (report only)", report)


class VerificationRunner:
    """Runs the suites selected by a session configuration"""

    def __init__(self, session: SessionConfig):
        self.session = session

    def selected_checks(self) -> List[Check]:
        checks = []
        for suite in SPACE_SUITES[self.session.space]:
            checks.extend(registered_checks(suite))
        return checks

    def _run_check(self, item: Check) -> CheckResult:
        start = time.perf_counter()
        try:
            measurement = item.run(self.session)
            if item.exact:
                passed = measurement.deviation == 0.0
            else:
                passed = measurement.deviation <= self.session.tol
            result = CheckResult(
                item.name,
                item.suite,
                passed,
                float(measurement.deviation),
                measurement.details,
                gating=item.gating,
                payload=measurement.payload,
            )
        except Exception as e:
            logger.exception(f"Check {item.name} raised: {e}")
            result = CheckResult(item.name, item.suite, False, float("inf"), f"error: {e}", gating=item.gating)
        result.seconds = round(time.perf_counter() - start, 3)
        log_check_result(item.name, result.passed or not item.gating, {"deviation": result.max_deviation})
        return result

    def run(self) -> Tuple[List[CheckResult], Dict[str, Any]]:
        """
        Run every selected check

        Returns:
            Tuple of (results in registration order, full report dict)
        """
        session = self.session
        if session.space in ("mq2", "minkowski", "all") and session.max_spin > session.mq2_max_spin:
            logger.warning(f"mq2 checks clamp max spin {session.max_spin} to {session.mq2_max_spin}")

        checks = self.selected_checks()
        monitor = RunMonitor(f"verify:{session.space}")
        logger.info(f"Running {len(checks)} checks for space '{session.space}' at order {session.order}")

        with ThreadPoolExecutor(max_workers=session.workers) as pool:
            futures = [pool.submit(self._run_check, item) for item in checks]
            results = [future.result() for future in futures]

        for result in results:
            monitor.record_check(result.name, result.to_dict())
        report = monitor.get_report()
        report["config"] = {
            "order": session.order,
            "tol": session.tol,
            "space": session.space,
            "max_spin": str(session.max_spin),
            "mq2_max_spin": str(session.effective_mq2_spin),
            "seed": session.seed,
            "random_samples": session.random_samples,
        }
        logger.info(f"Verification finished: {report['status']}")
        return results, report
