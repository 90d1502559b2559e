import numpy as np
import pytest

from src.middleware.errors import MissingBlockFactor, QStarError
from src.models.matrices import RepMatrix
from src.models.series import HSeries
from src.models.spins import Generator, SpinLabel, spins_up_to, tensor_weights
from src.services.clebsch_gordan import cg_table
from src.services.representations import GENERATORS, rep_tensor_coproduct
from src.services.twists import (
    LEFT,
    RIGHT,
    antipode_legwise,
    coassociator_rep,
    coproduct_leg_rep,
    deformed_coproduct_rep,
    diagonal_action,
    flip_rep,
    gauge_block_factors,
    generator_family,
    rf_relation_diagnostic,
    standard_twist_rep,
    twist_rep_sl2c,
    twist_rep_so4,
)

ORDER = 5
ATOL = 1e-9
HALF = SpinLabel(1)
ONE = SpinLabel(2)
PAIRS = [(a, b) for a in spins_up_to(ONE) for b in spins_up_to(ONE)]
TRIPLES = [(a, b, c) for a in spins_up_to(ONE) for b in spins_up_to(ONE) for c in spins_up_to(ONE)]
ZERO = SpinLabel(0)


def identity(*spins):
    return RepMatrix.identity(tensor_weights(*spins), ORDER)


def pair_id(value):
    return str(value)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_twist_is_identity_at_order_zero(j1, j2):
    twist = standard_twist_rep(j1, j2, order=ORDER)
    assert np.array_equal(twist.matrix.coeffs[0], np.eye(j1.dim * j2.dim))
    assert not twist.inverse
    assert standard_twist_rep(j1, j2, inverse=True, order=ORDER).inverse


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_twist_is_orthogonal(j1, j2):
    twist = standard_twist_rep(j1, j2, order=ORDER).matrix
    inverse = standard_twist_rep(j1, j2, inverse=True, order=ORDER).matrix
    assert twist.T.allclose(inverse, ATOL)
    assert (twist @ inverse).allclose(identity(j1, j2), ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_twist_reality(j1, j2):
    twist = standard_twist_rep(j1, j2, order=ORDER).matrix
    flipped_inverse = flip_rep(standard_twist_rep(j2, j1, inverse=True, order=ORDER).matrix, j2, j1)
    assert antipode_legwise(twist, j1, j2).allclose(flipped_inverse, ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_twist_intertwines_the_coproducts(j1, j2):
    twist = standard_twist_rep(j1, j2, order=ORDER).matrix
    for g in GENERATORS:
        classical = rep_tensor_coproduct(g, j1, j2, False, ORDER)
        assert (twist @ classical).allclose(deformed_coproduct_rep(g, j1, j2, ORDER) @ twist, ATOL)


def test_deformed_coproduct_of_h_stays_primitive():
    assert deformed_coproduct_rep(Generator.H, ONE, HALF, ORDER).allclose(
        rep_tensor_coproduct(Generator.H, ONE, HALF, False, ORDER), ATOL
    )


def test_gauged_twist_scales_each_block():
    beta = {0: HSeries([1.0, 0.5, 0.0, 0.0, 0.0]), 1: HSeries([1.0, -0.25, 0.1, 0.0, 0.0]), 2: HSeries([1.0, 0.3, 0.0, 0.0, 0.0])}
    factors = gauge_block_factors(beta, HALF, HALF)
    assert sorted(factors) == [0, 2]
    assert factors[2].allclose(beta[2] * (beta[1] * beta[1]).inv(), 1e-12)
    gauged = standard_twist_rep(HALF, HALF, factors, order=ORDER)
    inverse = standard_twist_rep(HALF, HALF, factors, inverse=True, order=ORDER)
    assert (gauged.matrix @ inverse.matrix).allclose(identity(HALF, HALF), ATOL)
    assert np.array_equal(gauged.matrix.coeffs[0], np.eye(4))
    assert gauged.block_factors == factors


def test_missing_block_factor():
    with pytest.raises(MissingBlockFactor):
        gauge_block_factors({1: HSeries.one(ORDER)}, HALF, HALF)
    with pytest.raises(MissingBlockFactor):
        standard_twist_rep(HALF, HALF, {2: HSeries.one(ORDER)}, order=ORDER)


def test_coproduct_legs_of_the_identity_family():
    for leg in (LEFT, RIGHT):
        assert coproduct_leg_rep("identity", leg, HALF, HALF, ONE, ORDER).allclose(identity(HALF, HALF, ONE), ATOL)
    with pytest.raises(QStarError):
        coproduct_leg_rep("identity", "middle", HALF, HALF, HALF, ORDER)
    with pytest.raises(QStarError):
        coproduct_leg_rep("unknown", LEFT, HALF, HALF, HALF, ORDER)


def test_coproduct_legs_of_twist_and_inverse_are_inverse():
    for leg in (LEFT, RIGHT):
        twist = coproduct_leg_rep("twist", leg, HALF, HALF, HALF, ORDER)
        inverse = coproduct_leg_rep("inverse", leg, HALF, HALF, HALF, ORDER)
        assert (twist @ inverse).allclose(identity(HALF, HALF, HALF), ATOL)


@pytest.mark.parametrize("spins", [(HALF, HALF, HALF), (HALF, ONE, HALF)], ids=["halves", "mixed"])
def test_coassociator_is_invariant(spins):
    phi = coassociator_rep(*spins, ORDER)
    assert np.allclose(phi.coeffs[0], np.eye(phi.shape[0]), atol=1e-12)
    for g in GENERATORS:
        action = diagonal_action(g, spins, ORDER)
        assert (phi @ action).allclose(action @ phi, ATOL)


def test_coassociator_is_not_trivial():
    phi = coassociator_rep(HALF, HALF, HALF, ORDER)
    assert not phi.allclose(identity(HALF, HALF, HALF), 1e-6)


def test_composite_twists_have_inverses():
    pair = (HALF, HALF)
    so4 = twist_rep_so4(pair, pair, order=ORDER)
    so4_inverse = twist_rep_so4(pair, pair, inverse=True, order=ORDER)
    assert (so4 @ so4_inverse).allclose(identity(HALF, HALF, HALF, HALF), ATOL)
    sl2c = twist_rep_sl2c(pair, pair, order=ORDER)
    sl2c_inverse = twist_rep_sl2c(pair, pair, inverse=True, order=ORDER)
    assert (sl2c_inverse @ sl2c).allclose(identity(HALF, HALF, HALF, HALF), ATOL)
    assert np.array_equal(so4.coeffs[0], np.eye(16))


def test_rf_relation_report():
    report = rf_relation_diagnostic(HALF, HALF, ORDER)
    assert report["j1"] == "1/2"
    assert report["block_scalar_deviation"] >= 0.0
    assert set(report["blocks"]) == {"0", "1"}
    for block in report["blocks"].values():
        assert set(block) == {"lambda", "casimir_prediction", "first_order_ratio"}
        assert len(block["lambda"]) == ORDER


def entrywise_leg(family, leg, j1, j2, j3):
    """(Delta (x) id)(X) or (id (x) Delta)(X) summed entry by entry over classical CG coefficients"""
    basis = tensor_weights(j1, j2, j3)
    index = {label: i for i, label in enumerate(basis)}
    table, outer = (cg_table(j1, j2, False, ORDER), j3) if leg == LEFT else (cg_table(j2, j3, False, ORDER), j1)
    by_spin = {}
    for (two_j, two_m, two_a, two_b), value in table.entries.items():
        by_spin.setdefault(two_j, []).append((two_m, two_a, two_b, value.coeffs[0]))

    result = np.zeros((ORDER, len(basis), len(basis)))
    for two_j, rows in by_spin.items():
        spin = SpinLabel(two_j)
        x = family(spin, outer) if leg == LEFT else family(outer, spin)
        pos = {label: i for i, label in enumerate(x.row_basis)}
        for two_m, two_a, two_b, c in rows:
            for two_mp, two_ap, two_bp, cp in rows:
                for two_k in outer.weights:
                    for two_kp in outer.weights:
                        if leg == LEFT:
                            r, s = index[(two_a, two_b, two_k)], index[(two_ap, two_bp, two_kp)]
                            entry = x.coeffs[:, pos[(two_m, two_k)], pos[(two_mp, two_kp)]]
                        else:
                            r, s = index[(two_k, two_a, two_b)], index[(two_kp, two_ap, two_bp)]
                            entry = x.coeffs[:, pos[(two_k, two_m)], pos[(two_kp, two_mp)]]
                        result[:, r, s] += c * cp * entry
    return result


def twist_matrix(ja, jb):
    return standard_twist_rep(ja, jb, order=ORDER).matrix


@pytest.mark.parametrize("leg", [LEFT, RIGHT])
@pytest.mark.parametrize("j1,j2,j3", TRIPLES, ids=pair_id)
def test_coproduct_leg_matches_entrywise_assembly(j1, j2, j3, leg):
    decomposed = coproduct_leg_rep("twist", leg, j1, j2, j3, ORDER)
    np.testing.assert_allclose(decomposed.coeffs, entrywise_leg(twist_matrix, leg, j1, j2, j3), atol=ATOL)


@pytest.mark.parametrize("leg", [LEFT, RIGHT])
def test_coproduct_leg_of_a_coproduct_is_the_diagonal_action(leg):
    spins = (HALF, ONE, HALF)
    for g in GENERATORS:
        leg_rep = coproduct_leg_rep(generator_family(g, deformed=False, order=ORDER), leg, *spins, ORDER)
        assert leg_rep.allclose(diagonal_action(g, spins, ORDER), ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_coproduct_leg_with_a_trivial_third_factor(j1, j2):
    # a twist on (j, 0) is the identity, so the left leg is too
    assert coproduct_leg_rep("twist", LEFT, j1, j2, ZERO, ORDER).allclose(identity(j1, j2, ZERO), ATOL)

    # a blockwise scalar X acts as lambda(j) on each coupled block of V^j1 (x) V^j2
    scalars = {two_j: HSeries([1.0, 0.1 * (two_j + 1), -0.05 * two_j, 0.0, 0.01]) for two_j in range(5)}

    def scalar_family(ja, jb):
        return identity(ja, jb).scale(scalars[ja.two_j])

    leg_rep = coproduct_leg_rep(scalar_family, LEFT, j1, j2, ZERO, ORDER)
    np.testing.assert_allclose(leg_rep.coeffs, entrywise_leg(scalar_family, LEFT, j1, j2, ZERO), atol=ATOL)
    table = cg_table(j1, j2, False, ORDER).matrix
    diagonal = np.zeros((ORDER, len(table.col_basis), len(table.col_basis)))
    for i, (two_j, _) in enumerate(table.col_basis):
        diagonal[:, i, i] = scalars[two_j].coeffs
    expected = table @ RepMatrix(diagonal, table.col_basis) @ table.T
    np.testing.assert_allclose(leg_rep.coeffs, expected.coeffs, atol=ATOL)
