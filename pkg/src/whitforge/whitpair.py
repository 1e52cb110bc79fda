"""Whittaker pairs, triples and the deformation machinery: bi-gradings,
critical and quasi-critical numbers, filtration snapshots u_t/v_t/w_t with
radicals and the two canonical maximal isotropic subalgebras l_t/r_t, chain
certificates with obstruction spaces, and the degenerate / quasi model
subgroup data.

Convention used throughout (stated once): a functional phi is realized as the
matrix f with phi(X) = trace(f X); then ad*-weights of phi equal ad-weights of
f, so every weight condition is a bracket condition on matrices.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionMismatch, NotCommuting, NotRationalSemisimple,
                     ShapeViolation, VerificationError)
from .exactq import (QMatrix, Subspace, _kernel_rows, _rref_rows, rat_str,
                     rational_eigenvalues, rref_solve, skew_tools)
from .orbits import is_neutral_pair, jordan_partition, sl2_complete

__all__ = [
    "WhittakerPair", "WhittakerTriple", "BiGrading", "DeformationSnapshot",
    "ChainCertificate", "weight_components", "find_Z", "is_neutral_pair",
    "bigrading", "critical_numbers", "quasi_criticals", "snapshot", "chain",
    "model_data", "quasi_model_data",
]


# ---------------------------------------------------------------------------
# ad matrices and sparse brackets


def ad_matrix(M):
    """Matrix of X -> [M, X] on row-major flattened gl_n."""
    n = M.rows
    out = [[Fraction(0)] * (n * n) for _ in range(n * n)]
    Ml = M.row_lists()
    for a in range(n):
        for b in range(n):
            col = a * n + b
            # [M, E_ab] = sum_i M_ia E_ib - sum_j M_bj E_aj
            for i in range(n):
                if Ml[i][a]:
                    out[i * n + b][col] += Ml[i][a]
            for j in range(n):
                if Ml[b][j]:
                    out[a * n + j][col] -= Ml[b][j]
    return QMatrix.from_rows(out)


def _sparse(vec, n):
    return [(i // n, i % n, c) for i, c in enumerate(vec) if c]


def _sparse_bracket(X, Y, n):
    """[X, Y] for sparse term lists; returns a flattened dense vector."""
    out = [Fraction(0)] * (n * n)
    for (i, j, c) in X:
        for (k, l, d) in Y:
            if j == k:
                out[i * n + l] += c * d
            if l == i:
                out[k * n + j] -= c * d
    return out


def _member_reducer(space):
    """Fast repeated membership tests against a fixed echelon basis."""
    basis = space.basis
    pivots = []
    for row in basis:
        pivots.append(next(i for i, x in enumerate(row) if x))

    def member(vec):
        v = list(vec)
        for row, p in zip(basis, pivots):
            if v[p]:
                c = v[p]
                for i, x in enumerate(row):
                    if x:
                        v[i] -= c * x
        return not any(v)
    return member


# ---------------------------------------------------------------------------
# weight decompositions


def _eigen_data(S):
    try:
        return rational_eigenvalues(S)
    except Exception as exc:
        raise NotRationalSemisimple(str(exc)) from None


def weight_components(S, M):
    """Decompose M = sum M_r with [S, M_r] = r M_r; returns {r: QMatrix}."""
    n = S.rows
    if M.rows != n or M.cols != n or S.cols != n:
        raise DimensionMismatch("S, M must be square of equal size")
    eig = _eigen_data(S)
    P = QMatrix.from_rows([list(v) for _, sp in eig for v in sp.basis]).transpose()
    Pinv = P.inverse()
    labels = [lam for lam, sp in eig for _ in sp.basis]
    Mt = Pinv * M * P
    comps = {}
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if Mt[i, j]:
                comps.setdefault(a - b, []).append((i, j, Mt[i, j]))
    out = {}
    for r, terms in sorted(comps.items()):
        ent = [Fraction(0)] * (n * n)
        for (i, j, c) in terms:
            ent[i * n + j] = c
        out[r] = P * QMatrix(n, n, ent) * Pinv
    return out


def weight_filtration_space(S, lower):
    """Subspace of flattened gl_n of all ad(S)-weights >= lower (or any
    comparison via a predicate)."""
    return graded_space(S, lambda r: r >= lower)


def graded_space(S, predicate):
    n = S.rows
    eig = _eigen_data(S)
    P = QMatrix.from_rows([list(v) for _, sp in eig for v in sp.basis]).transpose()
    Pinv = P.inverse()
    labels = [lam for lam, sp in eig for _ in sp.basis]
    Pl = P.row_lists()
    Pil = Pinv.row_lists()
    vecs = []
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if predicate(a - b):
                vecs.append([Pl[r][i] * Pil[j][c] for r in range(n) for c in range(n)])
    return Subspace(n * n, vecs)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class WhittakerPair:
    """(S, phi) with S rational semisimple and [S, f] = -2f, f the trace-form
    matrix of phi."""
    n: int
    S: QMatrix
    f: QMatrix

    def __post_init__(self):
        if (self.S.rows, self.S.cols) != (self.n, self.n) or \
           (self.f.rows, self.f.cols) != (self.n, self.n):
            raise DimensionMismatch("S, f must be n x n")
        _eigen_data(self.S)
        if self.S.bracket(self.f) != self.f.scale(-2):
            raise VerificationError("[S, f] != -2 f; not a Whittaker pair")
        jordan_partition(self.f)   # raises NotNilpotent if f is not

    def to_json(self):
        return {"n": self.n, "S": self.S.to_json(), "f": self.f.to_json()}


@dataclass(frozen=True)
class WhittakerTriple:
    pair: WhittakerPair
    f_prime: QMatrix

    def __post_init__(self):
        n = self.pair.n
        if (self.f_prime.rows, self.f_prime.cols) != (n, n):
            raise DimensionMismatch("f_prime must be n x n")
        for r in weight_components(self.pair.S, self.f_prime):
            if r <= -2:
                raise VerificationError(
                    f"f_prime has an ad(S)-weight component at {rat_str(r)} <= -2")

    def to_json(self):
        return {"pair": self.pair.to_json(), "f_prime": self.f_prime.to_json()}


@dataclass(frozen=True)
class BiGrading:
    """Joint eigenspace decomposition of gl_n under two commuting rational
    semisimple matrices; components keyed by the weight pair (alpha, beta)."""
    h: QMatrix
    Z: QMatrix
    components: dict    # (alpha, beta) -> Subspace of flattened gl_n

    def space(self, predicate):
        """Echelonized sum of all components whose (alpha, beta) satisfies
        the predicate."""
        n2 = self.h.rows ** 2
        vecs = []
        for (a, b), sp in self.components.items():
            if predicate(a, b):
                vecs.extend(sp.basis)
        return Subspace(n2, vecs)


@dataclass(frozen=True)
class DeformationSnapshot:
    t: Fraction
    u: Subspace
    v: Subspace
    w: Subspace
    rad: Subspace
    l: Subspace
    r: Subspace

    def to_json(self):
        return {"t": rat_str(self.t),
                "dims": {"u": self.u.dim, "v": self.v.dim, "w": self.w.dim,
                         "rad": self.rad.dim, "l": self.l.dim, "r": self.r.dim},
                "u": self.u.to_json(), "v": self.v.to_json(), "w": self.w.to_json(),
                "rad": self.rad.to_json(), "l": self.l.to_json(), "r": self.r.to_json()}


@dataclass(frozen=True)
class ChainCertificate:
    pair: WhittakerPair
    h: QMatrix
    Z: QMatrix
    e: QMatrix
    criticals: tuple          # critical values in [0,1], 0 first
    nodes: tuple              # criticals plus the endpoint 1
    snapshots: tuple          # one DeformationSnapshot per node
    inclusions: tuple         # dicts per consecutive node pair
    obstructions: tuple       # dicts per consecutive node pair

    def to_json(self):
        return {
            "pair": self.pair.to_json(),
            "h": self.h.to_json(),
            "Z": self.Z.to_json(),
            "criticals": [rat_str(t) for t in self.criticals],
            "snapshots": [s.to_json() for s in self.snapshots],
            "inclusions": list(self.inclusions),
            "obstructions": [
                {"t": rat_str(o["t"]),
                 "space": o["space"].to_json(),
                 "dual": o["dual"].to_json()} for o in self.obstructions],
        }


# ---------------------------------------------------------------------------
# operations


def find_Z(pair):
    """Solve for a neutral h with S - h =: Z commuting with h and f:
    h in image(ad f), [S, h] = 0, [h, f] = -2f, as one exact linear system
    in the ad(f)-preimage; echelon-first particular solution."""
    S, f, n = pair.S, pair.f, pair.n
    Af = ad_matrix(f)
    AS = ad_matrix(S)
    top = AS * Af                  # [S, [f, y]] = 0
    bot = Af * Af                  # [[f, y], f] = -2f  <=>  [f,[f,y]] = 2f
    rows = top.row_lists() + bot.row_lists()
    rhs = [Fraction(0)] * (n * n) + [2 * x for x in f.flat()]
    res = rref_solve(QMatrix.from_rows(rows), rhs)
    if not isinstance(res.solution, tuple):
        raise VerificationError("Z-decomposition system inconsistent; invalid pair")
    y = QMatrix(n, n, res.solution)
    h = f.bracket(y)
    Z = S - h
    if Z.bracket(f) != QMatrix.zeros(n) or Z.bracket(h) != QMatrix.zeros(n):
        raise VerificationError("Z-decomposition commutation check failed")
    if not is_neutral_pair(h, f):
        raise VerificationError("Z-decomposition produced a non-neutral h")
    return h, Z


def _joint_eigenbasis(h, Z):
    """Columns P of a joint eigenbasis of Q^n for commuting rational
    semisimple h, Z, with per-column labels (a_i, b_i)."""
    n = h.rows
    if h.bracket(Z) != QMatrix.zeros(n):
        raise NotCommuting("[h, Z] != 0")
    cols = []
    labels = []
    for a, sp in _eigen_data(h):
        basis = [list(v) for v in sp.basis]
        k = len(basis)
        # restrict Z to this eigenspace
        Bt = QMatrix.from_rows(basis).transpose()     # n x k
        small_cols = []
        for v in basis:
            target = Z.matvec(v)
            res = rref_solve(Bt, target)
            assert isinstance(res.solution, tuple), "Z does not preserve eigenspace"
            small_cols.append(list(res.solution))
        Zsmall = QMatrix.from_rows([[small_cols[j][i] for j in range(k)]
                                    for i in range(k)])
        for b, spz in _eigen_data(Zsmall):
            for coeff in spz.basis:
                vec = [Fraction(0)] * n
                for ci, c in enumerate(coeff):
                    if c:
                        for t in range(n):
                            vec[t] += c * basis[ci][t]
                cols.append(vec)
                labels.append((a, b))
    P = QMatrix.from_rows([[cols[j][i] for j in range(len(cols))]
                           for i in range(n)])
    return P, P.inverse(), labels


def bigrading(h, Z):
    """Joint (ad h, ad Z)-eigenspace decomposition of gl_n."""
    n = h.rows
    P, Pinv, labels = _joint_eigenbasis(h, Z)
    Pl, Pil = P.row_lists(), Pinv.row_lists()
    comps = {}
    for i, (ai, bi) in enumerate(labels):
        for j, (aj, bj) in enumerate(labels):
            key = (ai - aj, bi - bj)
            vec = [Pl[r][i] * Pil[j][c] for r in range(n) for c in range(n)]
            comps.setdefault(key, []).append(vec)
    components = {key: Subspace(n * n, vecs) for key, vecs in comps.items()}
    return BiGrading(h, Z, components)


def _check_pair_data(h, Z, f):
    n = h.rows
    if Z.bracket(f) != QMatrix.zeros(n):
        raise NotCommuting("[Z, f] != 0")
    if h.bracket(f) != f.scale(-2):
        raise VerificationError("[h, f] != -2 f")


def critical_numbers(h, Z, f):
    """{0} plus every t > 0 at which the filtration g^{S_t}_{>=1} jumps:
    a nonzero joint component (alpha, beta), beta != 0, has alpha + t beta = 1.
    The set depends on (h, Z) only; f enters through the caller's contract."""
    if h.bracket(f) != f.scale(-2):
        raise VerificationError("[h, f] != -2 f")
    bg = bigrading(h, Z)
    crits = {Fraction(0)}
    for (a, b) in bg.components:
        if b != 0:
            t = (1 - a) / b
            if t > 0:
                crits.add(t)
    return sorted(crits)


def quasi_criticals(S, f, h):
    """Quasi-critical t > 1 for the pair (S, phi) with neutral part h: values
    where a component of nonzero ad(Z)-weight reaches ad(S_t)-weight 2 (the
    crossings that create new weight-(-2) functional increments; the printed
    first values 4/3 and 3/2 of the worked six-dimensional examples pin this
    normalization).  Returns (sorted list, count in(S, phi))."""
    n = S.rows
    Z = S - h
    _check_pair_data(h, Z, f)
    if Z.bracket(h) != QMatrix.zeros(n):
        raise NotCommuting("[Z, h] != 0")
    if not is_neutral_pair(h, f):
        raise VerificationError("h is not neutral for f")
    bg = bigrading(h, Z)
    vals = set()
    for (a, b) in bg.components:
        if b != 0:
            t = (2 - a) / b
            if t > 1:
                vals.add(t)
    out = sorted(vals)
    return out, len(out)


def _centralizer(f):
    n = f.rows
    return Subspace(n * n, _kernel_rows(ad_matrix(f).row_lists(), n * n))


def _lagrangian_m(bg, f):
    """The Lagrangian m inside g^Z_0 \\cap g^S_1 (components beta = 0,
    alpha = 1), computed once; constant in t."""
    n2 = bg.h.rows ** 2
    space = bg.space(lambda a, b: b == 0 and a + b == 1)
    if space.dim == 0:
        return space
    return skew_tools(f, space, "lagrangian")


def _snapshot(bg, f, g_f, m, t, check=True):
    n2 = bg.h.rows ** 2
    u = bg.space(lambda a, b: a + t * b >= 1)
    v = bg.space(lambda a, b: a + t * b > 1)
    w = bg.space(lambda a, b: a + t * b == 1)
    rad = v.sum(w.intersect(g_f))
    if check:
        rad_direct = skew_tools(f, u, "radical")
        if rad_direct != rad:
            raise VerificationError(
                f"Lemma 4.3(iv) radical decomposition violated at t={rat_str(t)}")
    zneg = bg.space(lambda a, b: a + t * b >= 1 and b < 0)
    zpos = bg.space(lambda a, b: a + t * b >= 1 and b > 0)
    l = m.sum(zneg).sum(rad)
    r = m.sum(zpos).sum(rad)
    if check:
        for name, iso in (("l", l), ("r", r)):
            if 2 * iso.dim != u.dim + rad.dim:
                raise VerificationError(
                    f"{name}_t is not maximal isotropic at t={rat_str(t)}")
            gram = skew_tools(f, iso, "gram")
            if not gram.is_zero():
                raise VerificationError(
                    f"{name}_t is not isotropic at t={rat_str(t)}")
    return DeformationSnapshot(t, u, v, w, rad, l, r)


def snapshot(h, Z, f, t):
    """Filtration snapshot at deformation time t >= 0."""
    t = Fraction(t)
    if t < 0:
        raise VerificationError("t must be >= 0")
    _check_pair_data(h, Z, f)
    bg = bigrading(h, Z)
    return _snapshot(bg, f, _centralizer(f), _lagrangian_m(bg, f), t)


def _bracket_contained(A, B, n, clause):
    """Verify [A, A] subseteq B for subspaces of flattened gl_n."""
    if A.dim == 0:
        return
    member = _member_reducer(B) if B.dim else (lambda v: not any(v))
    sparse = [_sparse(list(vec), n) for vec in A.basis]
    for i in range(len(sparse)):
        for j in range(i + 1, len(sparse)):
            br = _sparse_bracket(sparse[i], sparse[j], n)
            if any(br) and not member(br):
                raise VerificationError(clause)


def chain(pair):
    """Full deformation-chain certificate for a Whittaker pair: critical
    numbers in [0,1], snapshots, verified inclusions r_{t_i} <= l_{t_{i+1}},
    the direct-sum and ideal/commutativity clauses, and obstruction spaces
    with dual spanning sets among the highest-weight vectors."""
    S, f, n = pair.S, pair.f, pair.n
    h, Z = find_Z(pair)
    e = sl2_complete(f, h)
    bg = bigrading(h, Z)
    g_f = _centralizer(f)
    ker_ad_e = Subspace(n * n, _kernel_rows(ad_matrix(e).row_lists(), n * n))
    crits = [t for t in critical_numbers(h, Z, f) if t <= 1]
    nodes = list(crits)
    if nodes[-1] != 1:
        nodes.append(Fraction(1))
    m = _lagrangian_m(bg, f)
    snaps = [_snapshot(bg, f, g_f, m, t) for t in nodes]
    inclusions = []
    obstructions = []
    for prev, cur in zip(snaps, snaps[1:]):
        t, T = prev.t, cur.t
        if not cur.l.contains(prev.r):
            raise VerificationError(
                f"Lemma 4.4 inclusion r_{rat_str(t)} <= l_{rat_str(T)} violated")
        obstruction = cur.w.intersect(g_f)
        if prev.r.sum(obstruction) != cur.l or prev.r.intersect(obstruction).dim:
            raise VerificationError(
                f"Lemma 4.4 direct sum l_{rat_str(T)} = r_{rat_str(t)} (+) "
                f"(w_{rat_str(T)} cap g_f) violated")
        _bracket_contained(
            cur.l, prev.r, n,
            f"Lemma 4.4 commutative quotient [l_{rat_str(T)}, l_{rat_str(T)}] "
            f"<= r_{rat_str(t)} violated")
        _bracket_contained(
            prev.r, cur.v, n,
            f"Lemma 4.4 commutative quotient [r_{rat_str(t)}, r_{rat_str(t)}] "
            f"<= v_{rat_str(T)} violated")
        dual = bg.space(lambda a, b: a + T * b == -1).intersect(ker_ad_e)
        if dual.dim != obstruction.dim:
            raise VerificationError(
                f"obstruction dual dimension mismatch at t={rat_str(T)}")
        if obstruction.dim:
            gram = [[(QMatrix(n, n, d) * QMatrix(n, n, o)).trace()
                     for o in obstruction.basis] for d in dual.basis]
            if len(_rref_rows(gram)[1]) != obstruction.dim:
                raise VerificationError(
                    f"obstruction pairing degenerate at t={rat_str(T)}")
        inclusions.append({"from_t": rat_str(t), "to_t": rat_str(T),
                           "obstruction_dim": obstruction.dim})
        obstructions.append({"t": T, "space": obstruction, "dual": dual})
    return ChainCertificate(pair, h, Z, e, tuple(crits), tuple(nodes),
                            tuple(snaps), tuple(inclusions), tuple(obstructions))


def _functional_kernel(space, f, n):
    """{X in space : trace(f X) = 0}."""
    if space.dim == 0:
        return space
    vals = [(f * QMatrix(n, n, v)).trace() for v in space.basis]
    coeffs = _kernel_rows([vals], len(vals))
    vecs = []
    for cv in coeffs:
        vec = [Fraction(0)] * (n * n)
        for i, c in enumerate(cv):
            if c:
                for t in range(n * n):
                    vec[t] += c * space.basis[i][t]
        vecs.append(vec)
    return Subspace(n * n, vecs)


def model_data(pair):
    """Degenerate-model nilpotent data at S itself: u = g^S_{>=1}, the radical
    n of omega_phi on u, and n' = n cap Ker(phi)."""
    S, f, n = pair.S, pair.f, pair.n
    u = graded_space(S, lambda r: r >= 1)
    n_rad = skew_tools(f, u, "radical")
    n_prime = _functional_kernel(n_rad, f, n)
    return {"u": u, "n_rad": n_rad, "n_prime": n_prime}


def quasi_model_data(triple):
    """Quasi-model data for a Whittaker triple, with the Heisenberg-shape
    checks: z = v (+) (w cap g_phi), k = Ker(phi + phi') on z, [u,u] <= z,
    [u,z] <= k, omega_{phi+phi'} nondegenerate on u/z, and phi' vanishing
    on [u,u]."""
    pair, fp = triple.pair, triple.f_prime
    S, f, n = pair.S, pair.f, pair.n
    u = graded_space(S, lambda r: r >= 1)
    v = graded_space(S, lambda r: r > 1)
    w = graded_space(S, lambda r: r == 1)
    z = v.sum(w.intersect(_centralizer(f)))
    k = _functional_kernel(z, f + fp, n)
    sparse_u = [_sparse(list(vec), n) for vec in u.basis]
    member_z = _member_reducer(z) if z.dim else (lambda vv: not any(vv))
    member_k = _member_reducer(k) if k.dim else (lambda vv: not any(vv))
    sparse_z = [_sparse(list(vec), n) for vec in z.basis]
    for i in range(len(sparse_u)):
        for j in range(i + 1, len(sparse_u)):
            br = _sparse_bracket(sparse_u[i], sparse_u[j], n)
            if any(br):
                if not member_z(br):
                    raise ShapeViolation("[u, u] <= z violated")
                if (fp * QMatrix(n, n, br)).trace() != 0:
                    raise ShapeViolation("phi' does not vanish on [u, u]")
    for su in sparse_u:
        for sz in sparse_z:
            br = _sparse_bracket(su, sz, n)
            if any(br) and not member_k(br):
                raise ShapeViolation("[u, z] <= k violated")
    if skew_tools(f + fp, u, "radical") != z:
        raise ShapeViolation("omega_{phi+phi'} degenerate on u/z")
    return {"u": u, "v": v, "z": z, "k": k}
