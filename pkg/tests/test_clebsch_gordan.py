import numpy as np
import pytest

from src.middleware.errors import DimensionMismatch
from src.models.matrices import RepMatrix, block_diagonal
from src.models.series import exp_h
from src.models.spins import SpinLabel, coupled_spins, spins_up_to
from src.services.clebsch_gordan import EMBED, REDUCE, cg_apply, cg_table, coupled_block, coupled_vector, tensor_vector
from src.services.qnumbers import qnum
from src.services.representations import GENERATORS, rep_generator, rep_tensor_coproduct

ORDER = 6
ATOL = 1e-9
HALF = SpinLabel(1)
PAIRS = [(a, b) for a in spins_up_to(SpinLabel(2)) for b in spins_up_to(SpinLabel(2))]


def pair_id(value):
    return str(value)


def test_spin_half_coefficients():
    table = cg_table(HALF, HALF, True, ORDER)
    q = exp_h(1, ORDER)
    root_two = qnum(2, ORDER).sqrt()
    assert table.coefficient(2, 2, 1, 1).allclose(1.0, ATOL)
    assert table.coefficient(2, 0, 1, -1).allclose(exp_h(-0.5, ORDER) * root_two.inv(), ATOL)
    assert table.coefficient(2, 0, -1, 1).allclose(exp_h(0.5, ORDER) * root_two.inv(), ATOL)
    singlet_norm = (1.0 + q * q).sqrt().inv()
    assert table.coefficient(0, 0, 1, -1).allclose(q * singlet_norm, ATOL)
    assert table.coefficient(0, 0, -1, 1).allclose(-singlet_norm, ATOL)
    # outside the selection rule
    assert table.coefficient(2, 2, 1, -1).is_zero()
    assert table.coefficient(4, 0, 1, -1).is_zero()


def test_classical_spin_half_coefficients():
    table = cg_table(HALF, HALF, False, ORDER)
    assert table.coefficient(2, 0, 1, -1).allclose(1 / np.sqrt(2.0), 1e-12)
    assert table.coefficient(0, 0, -1, 1).allclose(-1 / np.sqrt(2.0), 1e-12)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
@pytest.mark.parametrize("deformed", [True, False], ids=["deformed", "classical"])
def test_orthogonality(j1, j2, deformed):
    u = cg_table(j1, j2, deformed, ORDER).matrix
    assert (u.T @ u).allclose(RepMatrix.identity(u.col_basis, ORDER), ATOL)
    assert (u @ u.T).allclose(RepMatrix.identity(u.row_basis, ORDER), ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_intertwiner(j1, j2):
    u = cg_table(j1, j2, True, ORDER).matrix
    for g in GENERATORS:
        blocks = block_diagonal([rep_generator(spin, g, True, ORDER).coeffs for spin in coupled_spins(j1, j2)])
        reduced = u.T @ rep_tensor_coproduct(g, j1, j2, True, ORDER) @ u
        assert reduced.allclose(RepMatrix(blocks, u.col_basis), ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_exchange_symmetry(j1, j2):
    table = cg_table(j1, j2, True, ORDER)
    swapped = cg_table(j2, j1, True, ORDER)
    for (two_j, two_m, two_m1, two_m2), value in table.entries.items():
        assert value.allclose(swapped.coefficient(two_j, -two_m, -two_m2, -two_m1), ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=pair_id)
def test_classical_limit_is_exact(j1, j2):
    deformed = cg_table(j1, j2, True, ORDER).matrix.coeffs
    classical = cg_table(j1, j2, False, ORDER).matrix.coeffs
    assert np.array_equal(deformed[0], classical[0])
    assert not np.any(classical[1:])


def test_highest_weight_sign_is_positive():
    table = cg_table(SpinLabel(2), HALF, True, ORDER)
    for spin in table.spins:
        assert table.coefficient(spin.two_j, spin.two_j, 2, spin.two_j - 2).leading > 0


def test_blocks_are_ascending_in_spin():
    table = cg_table(SpinLabel(2), SpinLabel(2), True, ORDER)
    assert [s.two_j for s in table.spins] == [0, 2, 4]
    assert table.block_columns(SpinLabel(2)) == slice(1, 4)
    assert coupled_block(SpinLabel(2), SpinLabel(2), SpinLabel(4), True, ORDER).shape == (ORDER, 9, 5)
    with pytest.raises(KeyError):
        table.block_columns(SpinLabel(6))


def test_csv_rows_follow_the_selection_rule():
    rows = cg_table(HALF, HALF, True, ORDER).csv_rows()
    assert len(rows) == 6
    for two_j, two_m, two_m1, two_m2, *coeffs in rows:
        assert two_m == two_m1 + two_m2
        assert len(coeffs) == ORDER


def test_apply_reduces_and_embeds():
    table = cg_table(HALF, HALF, True, ORDER)
    singlet = coupled_vector(table, [((0, 0), 1.0)])
    embedded = cg_apply(table, EMBED, singlet)
    reduced = cg_apply(table, REDUCE, embedded)
    np.testing.assert_allclose(reduced, singlet, atol=ATOL)
    top = cg_apply(table, REDUCE, tensor_vector(table, [((1, 1), 1.0)])[0])
    expected = coupled_vector(table, [((2, 2), 1.0)])
    np.testing.assert_allclose(top, expected, atol=ATOL)


def test_apply_rejects_bad_input():
    table = cg_table(HALF, HALF, True, ORDER)
    with pytest.raises(DimensionMismatch):
        cg_apply(table, REDUCE, np.zeros(3))
    with pytest.raises(DimensionMismatch):
        cg_apply(table, "sideways", np.zeros(4))
