import random
from fractions import Fraction

import pytest

from whitforge.errors import NotCommuting, ShapeViolation, VerificationError
from whitforge.exactq import QMatrix, Subspace, rat_str, rref_solve
from whitforge.orbits import is_neutral_pair, neutral_for, sl2_complete
from whitforge.whitpair import (WhittakerPair, WhittakerTriple, ad_matrix,
                                bigrading, chain, critical_numbers, find_Z,
                                graded_space, model_data, quasi_criticals,
                                quasi_model_data, snapshot, weight_components)

from conftest import E, random_nilpotent, random_whittaker_pair


def glsame_pair():
    return WhittakerPair(4, QMatrix.diag([3, 1, -1, -3]),
                         E(4, 2, 1) + E(4, 4, 3))


def flat(M):
    return list(M.flat())


# -- weight components ----------------------------------------------------------

def test_weight_components_glsame():
    S = QMatrix.diag([3, 1, -1, -3])
    comps = weight_components(S, E(4, 2, 1) + E(4, 4, 3))
    assert set(comps) == {-2}


def test_weight_components_of_s_itself():
    S = QMatrix.diag([3, 1, -1, -3])
    assert set(weight_components(S, S)) == {0}


def test_weight_components_gl6_45():
    S = QMatrix.diag([1, -1, 5, 3, Fraction(13, 3), Fraction(7, 3)])
    comps = weight_components(S, E(6, 4, 5))
    assert set(comps) == {Fraction(-4, 3)}


def test_weight_components_sum_reconstructs(rng):
    for _ in range(10):
        n = rng.randint(2, 5)
        vals = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        S = QMatrix.diag(vals)
        M = QMatrix.from_rows([[Fraction(rng.randint(-2, 2)) for _ in range(n)]
                               for _ in range(n)])
        comps = weight_components(S, M)
        total = QMatrix.zeros(n)
        for r, C in comps.items():
            assert S.bracket(C) == C.scale(r)
            total = total + C
        assert total == M


# -- find_Z ----------------------------------------------------------------------

def test_find_z_glsame_witness():
    h, Z = find_Z(glsame_pair())
    assert h == QMatrix.diag([1, -1, 1, -1])
    assert Z == QMatrix.diag([2, 2, -2, -2])


def test_find_z_neutral_input():
    pair = WhittakerPair(2, QMatrix.diag([1, -1]), E(2, 2, 1))
    h, Z = find_Z(pair)
    assert is_neutral_pair(h, pair.f)
    assert Z.bracket(pair.f).is_zero() and Z.bracket(h).is_zero()
    assert h + Z == pair.S


def test_find_z_gl6_second_example():
    S = QMatrix.diag([1, -1, 5, 3, Fraction(13, 3), Fraction(7, 3)])
    f = E(6, 2, 1) + E(6, 4, 3) + E(6, 6, 5) + E(6, 1, 4)
    pair = WhittakerPair(6, S, f)
    h, Z = find_Z(pair)
    assert is_neutral_pair(h, f)
    assert Z.bracket(f).is_zero() and Z.bracket(h).is_zero()
    # the printed witness is neutral too
    assert is_neutral_pair(QMatrix.diag([-1, -3, 3, 1, 1, -1]), f)


# -- is_neutral_pair ------------------------------------------------------------

def test_neutral_pair_paper_examples():
    assert is_neutral_pair(QMatrix.diag([3, 1, -1, -3]),
                           E(4, 2, 1) + E(4, 4, 3) + E(4, 3, 2))
    assert is_neutral_pair(QMatrix.diag([2, 0, 0, -2]),
                           E(4, 2, 1) + E(4, 4, 3) + E(4, 3, 1) + E(4, 4, 2))
    assert is_neutral_pair(QMatrix.zeros(2), QMatrix.zeros(2))


def test_neutral_characterizations_agree_on_500_randoms():
    rng = random.Random(99)
    for _ in range(500):
        n = rng.randint(2, 6)
        f = random_nilpotent(n, rng)
        if rng.random() < 0.5:
            h = neutral_for(f)
            if rng.random() < 0.5:
                # spoil it: scale, shift, or replace
                h = rng.choice([h.scale(2),
                                h + QMatrix.identity(n),
                                QMatrix.diag([rng.randint(-2, 2)
                                              for _ in range(n)])])
        else:
            h = QMatrix.diag([rng.randint(-3, 3) for _ in range(n)])
        # the call itself asserts that both characterizations agree
        is_neutral_pair(h, f)


# -- bigrading -------------------------------------------------------------------

def test_bigrading_glsame_entries():
    bg = bigrading(QMatrix.diag([1, -1, 1, -1]), QMatrix.diag([2, 2, -2, -2]))
    def key_of(M):
        return next(k for k, sp in bg.components.items() if sp.member(flat(M)))
    assert key_of(E(4, 1, 3)) == (0, 4)
    assert key_of(E(4, 1, 4)) == (2, 4)


def test_bigrading_z_zero():
    bg = bigrading(QMatrix.diag([1, -1]), QMatrix.zeros(2))
    assert all(b == 0 for (_, b) in bg.components)


def test_bigrading_h_zero():
    bg = bigrading(QMatrix.zeros(2), QMatrix.diag([1, -1]))
    key = next(k for k, sp in bg.components.items() if sp.member(flat(E(2, 1, 2))))
    assert key == (0, 2)


def test_bigrading_requires_commuting():
    with pytest.raises(NotCommuting):
        bigrading(QMatrix.diag([1, -1]), E(2, 1, 2) + E(2, 2, 1))


# -- critical numbers -------------------------------------------------------------

def test_criticals_glsame():
    h, Z = QMatrix.diag([1, -1, 1, -1]), QMatrix.diag([2, 2, -2, -2])
    f = E(4, 2, 1) + E(4, 4, 3)
    assert critical_numbers(h, Z, f) == [0, Fraction(1, 4), Fraction(3, 4)]


def test_criticals_z_zero():
    assert critical_numbers(QMatrix.diag([1, -1]), QMatrix.zeros(2),
                            E(2, 2, 1)) == [0]


def test_criticals_negative_candidates_dropped():
    h = QMatrix.diag([1, -1])
    assert critical_numbers(h, h, E(2, 2, 1)) == [0]


# -- quasi-criticals ---------------------------------------------------------------

def test_quasi_criticals_first_gl6():
    h = QMatrix.diag([1, -1, 1, -1, 1, -1])
    Z = QMatrix.diag([0, 0, 3, 3, Fraction(5, 2), Fraction(5, 2)])
    f = E(6, 2, 1) + E(6, 4, 3) + E(6, 6, 5)
    vals, count = quasi_criticals(h + Z, f, h)
    assert min(vals) == Fraction(4, 3)
    assert count == len(vals)


def test_quasi_criticals_second_gl6():
    S = QMatrix.diag([1, -1, 5, 3, Fraction(13, 3), Fraction(7, 3)])
    f = E(6, 2, 1) + E(6, 4, 3) + E(6, 6, 5) + E(6, 1, 4)
    h = QMatrix.diag([-1, -3, 3, 1, 1, -1])
    vals, _ = quasi_criticals(S, f, h)
    assert min(vals) == Fraction(3, 2)


def test_quasi_criticals_z_zero():
    f = E(2, 2, 1)
    h = QMatrix.diag([1, -1])
    vals, count = quasi_criticals(h, f, h)
    assert vals == [] and count == 0


def test_quasi_criticals_independent_of_h(rng):
    # all solutions of the Z-decomposition system give the same invariant
    for _ in range(6):
        pair = random_whittaker_pair(rng.randint(2, 5), rng)
        S, f, n = pair.S, pair.f, pair.n
        Af = ad_matrix(f)
        AS = ad_matrix(S)
        rows = (AS * Af).row_lists() + (Af * Af).row_lists()
        rhs = [Fraction(0)] * (n * n) + [2 * x for x in f.flat()]
        res = rref_solve(QMatrix.from_rows(rows), rhs)
        base = list(res.solution)
        seen = set()
        kernel = list(res.kernel)[:3]
        for pick in range(min(3, len(kernel)) + 1):
            y = base[:]
            if pick:
                y = [a + b for a, b in zip(y, kernel[pick - 1])]
            h = f.bracket(QMatrix(n, n, y))
            vals, count = quasi_criticals(S, f, h)
            seen.add((tuple(vals), count))
        assert len(seen) == 1


# -- snapshots ---------------------------------------------------------------------

def test_snapshot_dims_glsame():
    h, Z = QMatrix.diag([1, -1, 1, -1]), QMatrix.diag([2, 2, -2, -2])
    f = E(4, 2, 1) + E(4, 4, 3)
    s0 = snapshot(h, Z, f, 0)
    assert (s0.u.dim, s0.l.dim, s0.r.dim) == (4, 4, 4)
    s1 = snapshot(h, Z, f, Fraction(1, 4))
    assert (s1.l.dim, s1.r.dim) == (5, 5)
    expected_l = Subspace(16, [flat(E(4, 1, 2)), flat(E(4, 1, 4)),
                               flat(E(4, 3, 4)), flat(E(4, 3, 2)),
                               flat(E(4, 1, 3) + E(4, 2, 4))])
    assert s1.l == expected_l
    s2 = snapshot(h, Z, f, Fraction(3, 4))
    assert s2.l == s2.r and s2.l.dim == 6


# -- chains ------------------------------------------------------------------------

def test_chain_glsame_obstructions():
    cert = chain(glsame_pair())
    assert [rat_str(t) for t in cert.criticals] == ["0", "1/4", "3/4"]
    obs = cert.obstructions
    assert obs[0]["space"] == Subspace(16, [flat(E(4, 1, 3) + E(4, 2, 4))])
    assert obs[0]["dual"] == Subspace(16, [flat(E(4, 3, 1) + E(4, 4, 2))])
    assert obs[1]["space"] == Subspace(16, [flat(E(4, 2, 3))])
    assert obs[1]["dual"] == Subspace(16, [flat(E(4, 3, 2))])


def test_chain_neutral_pair_trivial():
    pair = WhittakerPair(2, QMatrix.diag([1, -1]), E(2, 2, 1))
    cert = chain(pair)
    assert cert.criticals == (0,)
    assert all(o["space"].dim == 0 for o in cert.obstructions)
    last = cert.snapshots[-1]
    assert last.l == last.r == Subspace(4, [flat(E(2, 1, 2))])


def test_chain_principal_gl2():
    cert = chain(WhittakerPair(2, QMatrix.diag([1, -1]), E(2, 2, 1)))
    assert len(cert.snapshots) == 2
    assert cert.snapshots[0].l == cert.snapshots[1].l


def test_chain_lemma_43_checks(rng):
    # literal Lemma 4.3 spot checks on a few random pairs
    for _ in range(5):
        pair = random_whittaker_pair(rng.randint(2, 5), rng)
        cert = chain(pair)
        n, f, Z = pair.n, pair.f, cert.Z
        # (i) omega is ad(Z)-invariant on random basis pairs
        for _ in range(40):
            X = QMatrix.from_rows(
                [[Fraction(rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)])
            Y = QMatrix.from_rows(
                [[Fraction(rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)])
            lhs = (f * Z.bracket(X).bracket(Y)).trace()
            rhs = (f * X.bracket(Z.bracket(Y))).trace()
            assert lhs + rhs == 0
        # (ii) radical of omega on gl_n equals the centralizer of f
        from whitforge.exactq import skew_tools, _kernel_rows
        gl = Subspace(n * n, [flat(E(n, i, j))
                              for i in range(1, n + 1) for j in range(1, n + 1)])
        rad = skew_tools(f, gl, "radical")
        cent = Subspace(n * n, _kernel_rows(ad_matrix(f).row_lists(), n * n))
        assert rad == cent
        # (iii)+(iv) already hold per snapshot by construction checks; re-verify
        for s in cert.snapshots:
            assert s.rad == s.v.sum(s.w.intersect(cent))
        # (v) w_t cap g_f <= u_T for random t < T
        ts = sorted(rng.sample([Fraction(k, 7) for k in range(8)], 2))
        bg = bigrading(cert.h, cert.Z)
        w_t = bg.space(lambda a, b: a + ts[0] * b == 1)
        u_T = bg.space(lambda a, b: a + ts[1] * b >= 1)
        assert u_T.contains(w_t.intersect(cent))


def test_chain_lemma_44_direct_sum(rng):
    for _ in range(4):
        pair = random_whittaker_pair(rng.randint(2, 5), rng)
        cert = chain(pair)
        for prev, cur, obs in zip(cert.snapshots, cert.snapshots[1:],
                                  cert.obstructions):
            assert cur.l.contains(prev.r)
            assert prev.r.sum(obs["space"]) == cur.l
            assert prev.r.intersect(obs["space"]).dim == 0
            assert cur.l.dim == prev.r.dim + obs["space"].dim


# -- model data ---------------------------------------------------------------------

def test_model_data_principal():
    S = QMatrix.diag([3, 1, -1, -3])
    f = E(4, 2, 1) + E(4, 4, 3) + E(4, 3, 2)
    md = model_data(WhittakerPair(4, S, f))
    assert md["u"].dim == 6 and md["n_rad"] == md["u"]


def test_model_data_phi_zero():
    S = QMatrix.diag([3, 1, -1, -3])
    md = model_data(WhittakerPair(4, S, QMatrix.zeros(4)))
    assert md["n_rad"] == md["u"] == md["n_prime"]


def test_model_data_glsame_endpoint():
    md = model_data(glsame_pair())
    assert (md["u"].dim, md["n_rad"].dim, md["n_prime"].dim) == (6, 6, 5)


# -- quasi model data -----------------------------------------------------------------

def test_quasi_model_f_prime_zero_consistent():
    pair = glsame_pair()
    triple = WhittakerTriple(pair, QMatrix.zeros(4))
    qm = quasi_model_data(triple)
    md = model_data(pair)
    assert qm["z"] == md["n_rad"]
    assert qm["k"] == md["n_prime"]


def test_quasi_model_gl4_example():
    S3 = QMatrix.diag([1, -1, 4, 2])
    f = E(4, 2, 1) + E(4, 4, 3)
    fp = E(4, 1, 4)
    comps = weight_components(S3, fp)
    assert set(comps) == {-1}
    triple = WhittakerTriple(WhittakerPair(4, S3, f), fp)
    qm = quasi_model_data(triple)
    assert qm["u"].dim == 6 and qm["z"].dim == 6


def test_quasi_model_remark_smallest_eigenvalue():
    S3 = QMatrix.diag([1, -1, 4, 2])
    f = E(4, 2, 1) + E(4, 4, 3)
    qm = quasi_model_data(WhittakerTriple(WhittakerPair(4, S3, f), E(4, 1, 4)))
    from whitforge.exactq import rational_eigenvalues
    diffs = sorted({a - b for a, _ in rational_eigenvalues(S3)
                    for b, _ in rational_eigenvalues(S3)})
    a = min(d for d in diffs if d > 1)
    scaled = graded_space(S3.scale(Fraction(1, a)), lambda r: r >= 1)
    assert scaled == qm["v"]


def test_triple_rejects_low_weights():
    pair = glsame_pair()
    with pytest.raises(VerificationError):
        WhittakerTriple(pair, E(4, 2, 1))
