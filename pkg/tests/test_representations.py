import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.models.matrices import RepMatrix
from src.models.series import exp_h
from src.models.spins import Generator, SpinLabel, parse_word, spins_up_to, tensor_weights
from src.services.representations import (
    GENERATORS,
    cartan_exp,
    casimir_rep,
    commutator,
    deformed_star_generator,
    exp_h_matrix,
    killing_form,
    quantum_bracket_rhs,
    rep_antipode,
    rep_generator,
    rep_tensor_coproduct,
    rep_tensor_coproduct_op,
    rep_word,
    rmatrix_rep,
    rmatrix_rep_flipped,
    rmatrix_via_antipode,
    sigma_rep,
)

ORDER = 6
ATOL = 1e-9
HALF = SpinLabel(1)
SPINS = list(spins_up_to(SpinLabel(3)))
PAIRS = [(a, b) for a in spins_up_to(SpinLabel(2)) for b in spins_up_to(SpinLabel(2))]


def identity(*spins):
    return RepMatrix.identity(tensor_weights(*spins), ORDER)


def test_spin_half_matrices():
    e = rep_generator(HALF, Generator.E, True, ORDER)
    f = rep_generator(HALF, Generator.F, True, ORDER)
    assert e.entry_by_label((1,), (-1,)).allclose(exp_h(0.5, ORDER), 1e-12)
    assert f.entry_by_label((-1,), (1,)).allclose(exp_h(-0.5, ORDER), 1e-12)
    assert e.entry_by_label((-1,), (1,)).is_zero()
    h = rep_generator(HALF, Generator.H, True, ORDER)
    assert_allclose(h.coeffs[0], np.diag([-1.0, 1.0]))


@pytest.mark.parametrize("j", SPINS, ids=str)
def test_deformed_commutation_relations(j):
    e, f, h = (rep_generator(j, g, True, ORDER) for g in GENERATORS)
    assert commutator(h, e).allclose(e.scale(2.0), ATOL)
    assert commutator(h, f).allclose(f.scale(-2.0), ATOL)
    assert commutator(e, f).allclose(quantum_bracket_rhs(j, ORDER), ATOL)


@pytest.mark.parametrize("j", SPINS, ids=str)
def test_classical_generators_are_the_limit_of_the_deformed_ones(j):
    for g in GENERATORS:
        classical = rep_generator(j, g, False, ORDER)
        deformed = rep_generator(j, g, True, ORDER)
        assert np.array_equal(classical.coeffs[0], deformed.coeffs[0])
        assert not np.any(classical.coeffs[1:])
    e, f, h = (rep_generator(j, g, False, ORDER) for g in GENERATORS)
    assert commutator(e, f).allclose(h, 1e-12)


@pytest.mark.parametrize("j", SPINS, ids=str)
def test_star_representation(j):
    for g in GENERATORS:
        assert deformed_star_generator(j, g, ORDER).allclose(rep_generator(j, g, True, ORDER).T, ATOL)


def test_rep_word_multiplies_in_order():
    j = SpinLabel(2)
    word = parse_word("EF")
    expected = rep_generator(j, Generator.E, True, ORDER) @ rep_generator(j, Generator.F, True, ORDER)
    assert rep_word(word, j, True, ORDER).allclose(expected, 1e-12)
    assert rep_word((), j, True, ORDER).allclose(identity(j), 0.0)


@pytest.mark.parametrize("j", SPINS, ids=str)
def test_antipode_axiom(j):
    # m (S (x) id) Delta(g) = eps(g) = 0
    k = cartan_exp(j, 1.0, ORDER)
    s_e = rep_antipode((Generator.E,), j, True, ORDER)
    s_f = rep_antipode((Generator.F,), j, True, ORDER)
    assert (s_e @ k + rep_generator(j, Generator.E, True, ORDER)).allclose(identity(j).scale(0.0), ATOL)
    assert (s_f + k @ rep_generator(j, Generator.F, True, ORDER)).allclose(identity(j).scale(0.0), ATOL)
    for g in GENERATORS:
        assert rep_antipode((g,), j, False, ORDER).allclose(-rep_generator(j, g, False, ORDER), 1e-12)


def test_antipode_reverses_words():
    j = SpinLabel(2)
    lhs = rep_antipode((Generator.E, Generator.F), j, True, ORDER)
    rhs = rep_antipode((Generator.F,), j, True, ORDER) @ rep_antipode((Generator.E,), j, True, ORDER)
    assert lhs.allclose(rhs, ATOL)


def test_sigma_is_square_root_of_k():
    for j in SPINS:
        sigma = sigma_rep(j, ORDER)
        assert (sigma @ sigma).allclose(cartan_exp(j, 1.0, ORDER), ATOL)
        delta_h = rep_tensor_coproduct(Generator.H, j, HALF, True, ORDER)
        assert exp_h_matrix(delta_h, 0.5).allclose(sigma.kron(sigma_rep(HALF, ORDER)), ATOL)


def test_rmatrix_spin_half_entries():
    r = rmatrix_rep(HALF, HALF, ORDER)
    q_minus_qinv = exp_h(1, ORDER) - exp_h(-1, ORDER)
    assert r.entry_by_label((1, 1), (1, 1)).allclose(exp_h(0.5, ORDER), ATOL)
    assert r.entry_by_label((-1, 1), (-1, 1)).allclose(exp_h(-0.5, ORDER), ATOL)
    assert r.entry_by_label((1, -1), (-1, 1)).allclose(exp_h(-0.5, ORDER) * q_minus_qinv, ATOL)
    assert r.entry_by_label((-1, 1), (1, -1)).is_zero()
    assert np.array_equal(r.coeffs[0], np.eye(4))


@pytest.mark.parametrize("j1,j2", PAIRS, ids=lambda s: str(s))
def test_quasitriangularity(j1, j2):
    r = rmatrix_rep(j1, j2, ORDER)
    for g in GENERATORS:
        delta = rep_tensor_coproduct(g, j1, j2, True, ORDER)
        delta_op = rep_tensor_coproduct_op(g, j1, j2, True, ORDER)
        assert (r @ delta).allclose(delta_op @ r, ATOL)


@pytest.mark.parametrize("j1,j2", PAIRS, ids=lambda s: str(s))
def test_rmatrix_is_invariant_under_the_antipode(j1, j2):
    assert rmatrix_via_antipode(j1, j2, ORDER).allclose(rmatrix_rep(j1, j2, ORDER), ATOL)


def test_yang_baxter_on_spin_halves():
    r = rmatrix_rep(HALF, HALF, ORDER)
    one = identity(HALF)
    r12 = r.kron(one)
    r23 = one.kron(r)
    r13 = r12.permute_slots((2, 2, 2), (0, 2, 1))
    assert (r12 @ r13 @ r23).allclose(r23 @ r13 @ r12, ATOL)


def test_flipped_rmatrix_on_equal_spins():
    r = rmatrix_rep(HALF, HALF, ORDER)
    flipped = rmatrix_rep_flipped(HALF, HALF, ORDER)
    assert flipped.allclose(r.permute_slots((2, 2), (1, 0)), 0.0)
    # R_21 R is not the identity beyond order 0
    assert not (flipped @ r).allclose(identity(HALF, HALF), 1e-6)


def test_killing_form_and_casimir():
    assert_allclose(killing_form(), [[0.0, 4.0, 0.0], [4.0, 0.0, 0.0], [0.0, 0.0, 8.0]])
    for j in SPINS:
        value = float(j.j * (j.j + 1)) / 2.0
        assert casimir_rep(j, ORDER).allclose(value, 1e-12)
