import random
from fractions import Fraction

import pytest

from whitforge.errors import NoSolutionError, NotNilpotent, WrongPartition
from whitforge.exactq import QMatrix
from whitforge.orbits import (J_eta, J_eta_a, SlOrbitClass, h_eta, is_dth_power,
                              is_neutral_pair, jordan_conjugator,
                              jordan_partition, neutral_for, power_class,
                              sl2_complete, sl_class, standard_rep)

from conftest import E, random_invertible, random_nilpotent, random_unimodular


# -- standard representatives --------------------------------------------------

def test_standard_rep_bracket():
    for eta in [(3, 1), (2, 2), (4,), (1, 3, 2)]:
        rep = standard_rep(eta)
        assert rep.h.bracket(rep.J) == rep.J.scale(-2)


# -- jordan_partition ----------------------------------------------------------

def test_jordan_partition_standard():
    assert jordan_partition(J_eta((3, 1))) == (3, 1)


def test_jordan_partition_derived():
    N = E(4, 2, 1) + E(4, 4, 3) + E(4, 4, 2)
    assert jordan_partition(N) == (3, 1)


def test_jordan_partition_zero():
    assert jordan_partition(QMatrix.zeros(5)) == (1, 1, 1, 1, 1)


def test_jordan_partition_rejects_non_nilpotent():
    with pytest.raises(NotNilpotent):
        jordan_partition(QMatrix.identity(2))


# -- jordan_conjugator ----------------------------------------------------------

def test_conjugator_identity_on_standard():
    N = J_eta((3, 1))
    g = jordan_conjugator(N, (3, 1))
    assert g == QMatrix.identity(4)


def test_conjugator_swaps_upper_block():
    N = E(2, 1, 2)
    g = jordan_conjugator(N, (2,))
    assert g * N * g.inverse() == E(2, 2, 1)


def test_conjugator_chain_case():
    N = E(4, 2, 1) + E(4, 4, 3) + E(4, 4, 2)
    g = jordan_conjugator(N, (3, 1))
    assert g * N * g.inverse() == J_eta((3, 1))


def test_conjugator_wrong_partition():
    with pytest.raises(WrongPartition):
        jordan_conjugator(J_eta((2, 2)), (3, 1))


def test_conjugator_unsorted_composition():
    N = J_eta((3, 1))
    g = jordan_conjugator(N, (1, 3))
    assert g * N * g.inverse() == J_eta((1, 3))


# -- sl2 completion ------------------------------------------------------------

def test_sl2_complete_j2():
    e = sl2_complete(J_eta((2,)), QMatrix.diag([1, -1]))
    assert e == E(2, 1, 2)


def test_sl2_complete_paper_witness():
    e = sl2_complete(E(4, 2, 1) + E(4, 4, 3), QMatrix.diag([1, -1, 1, -1]))
    assert e == E(4, 1, 2) + E(4, 3, 4)


def test_sl2_complete_zero_triple():
    assert sl2_complete(QMatrix.zeros(2), QMatrix.zeros(2)) == QMatrix.zeros(2)


def test_sl2_complete_rejects_non_neutral():
    with pytest.raises(NoSolutionError):
        sl2_complete(E(2, 2, 1), QMatrix.diag([2, 0]))


def test_sl2_triple_relations_random(rng):
    for _ in range(20):
        n = rng.randint(2, 5)
        f = random_nilpotent(n, rng)
        h = neutral_for(f)
        e = sl2_complete(f, h)
        assert h.bracket(e) == e.scale(2)
        assert h.bracket(f) == f.scale(-2)
        assert e.bracket(f) == h


# -- neutral elements ----------------------------------------------------------

def test_neutral_for_standard():
    for eta in [(2,), (3, 1), (2, 2, 1)]:
        assert neutral_for(J_eta(eta)) == h_eta(eta)


def test_neutral_for_regular_with_paper_witness():
    f = E(4, 2, 1) + E(4, 4, 3) + E(4, 3, 2)
    h = neutral_for(f)
    assert is_neutral_pair(h, f)
    assert is_neutral_pair(QMatrix.diag([3, 1, -1, -3]), f)


def test_neutral_for_zero():
    assert neutral_for(QMatrix.zeros(3)) == QMatrix.zeros(3)


def test_neutral_for_two_chain_orders_both_pass(rng):
    for _ in range(10):
        n = rng.randint(2, 5)
        f = random_nilpotent(n, rng)
        h1 = neutral_for(f, order="forward")
        h2 = neutral_for(f, order="reverse")
        assert is_neutral_pair(h1, f)
        assert is_neutral_pair(h2, f)


def test_is_neutral_pair_rejects():
    assert is_neutral_pair(QMatrix.diag([2, 0]), E(2, 2, 1)) is False
    assert is_neutral_pair(QMatrix.zeros(2), QMatrix.zeros(2)) is True


# -- d-th powers and SL classes --------------------------------------------------

def test_is_dth_power_examples():
    assert is_dth_power(Fraction(8), 3) is True
    assert is_dth_power(Fraction(-4), 2) is False
    for d in (1, 2, 3, 5):
        assert is_dth_power(Fraction(1), d) is True
    assert is_dth_power(Fraction(-8), 3) is True
    assert is_dth_power(Fraction(4, 9), 2) is True
    assert is_dth_power(Fraction(2, 9), 2) is False


def test_power_class_is_class_invariant(rng):
    for _ in range(200):
        d = rng.randint(1, 4)
        r = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        if rng.random() < 0.3 and d % 2 == 1:
            r = -r
        s = Fraction(rng.randint(1, 6), rng.randint(1, 6))
        assert power_class(r, d) == power_class(r * s ** d, d)


def test_sl_class_standard_is_trivial():
    for lam in [(2,), (2, 2), (3, 1), (4,)]:
        cls = sl_class(J_eta(lam))
        assert cls.a_class == 1


def test_sl_class_scaled_blocks():
    four = sl_class(E(2, 2, 1, 4))
    assert four.lam == (2,) and four.d == 2 and four.a_class == 1
    two = sl_class(E(2, 2, 1, 2))
    assert two.a_class == 2
    assert two != sl_class(E(2, 2, 1))


def test_sl_class_of_twisted_representative():
    for eta, a in [((2,), 2), ((4,), 3), ((2, 2), 5), ((3, 3), 2)]:
        cls = sl_class(J_eta_a(eta, a))
        assert is_dth_power(cls.a_class / a, cls.d)


def test_jordan_partition_conjugation_invariant(rng):
    for _ in range(30):
        n = rng.randint(2, 6)
        N = random_nilpotent(n, rng)
        g = random_invertible(n, rng)
        assert jordan_partition(g * N * g.inverse()) == jordan_partition(N)


def test_sl_class_det1_invariant(rng):
    for _ in range(30):
        n = rng.randint(2, 6)
        N = random_nilpotent(n, rng)
        g = random_unimodular(n, rng)
        if g.det() == -1:
            g = g * QMatrix.diag([-1] + [1] * (n - 1))
        assert sl_class(g * N * g.inverse()) == sl_class(N)
