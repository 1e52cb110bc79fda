"""Matrix-level nilpotent orbit algorithms in gl_n / sl_n: Jordan
classification, conjugators to the standard lower-triangular representatives,
sl2-triple completion, neutral elements, and the scalar power-class invariant
that separates SL_n-orbits inside a GL_n-orbit.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionMismatch, NoSolutionError, NotNilpotent,
                     WrongPartition)
from .exactq import (NO_SOLUTION, QMatrix, Subspace, _kernel_rows, _rref_rows,
                     rat_str, rref_solve)
from .partitions import as_partition


# ---------------------------------------------------------------------------
# standard representatives


def jordan_block(k):
    """Lower-triangular Jordan block of size k."""
    ent = [Fraction(0)] * (k * k)
    for i in range(k - 1):
        ent[(i + 1) * k + i] = Fraction(1)
    return QMatrix(k, k, ent)


def h_block(k):
    return QMatrix.diag([k - 1 - 2 * i for i in range(k)])


def block_diag(blocks):
    n = sum(b.rows for b in blocks)
    ent = [Fraction(0)] * (n * n)
    off = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                ent[(off + i) * n + (off + j)] = b[i, j]
        off += b.rows
    return QMatrix(n, n, ent)


def J_eta(eta):
    return block_diag([jordan_block(k) for k in eta])


def h_eta(eta):
    return block_diag([h_block(k) for k in eta])


@dataclass(frozen=True)
class StandardRep:
    eta: tuple
    J: QMatrix
    h: QMatrix

    def to_json(self):
        return {"eta": list(self.eta), "J": self.J.to_json(), "h": self.h.to_json()}


def standard_rep(eta):
    eta = tuple(int(k) for k in eta)
    rep = StandardRep(eta, J_eta(eta), h_eta(eta))
    assert rep.h.bracket(rep.J) == rep.J.scale(-2)
    return rep


def J_eta_a(eta, a):
    """Twisted representative diag(a,1,...,1) J_eta diag(a,1,...,1)^{-1}."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    n = sum(eta)
    D = QMatrix.diag([a] + [Fraction(1)] * (n - 1))
    return D * J_eta(eta) * D.inverse()


# ---------------------------------------------------------------------------
# jordan classification


def _nilpotency_check(N):
    n = N.rows
    if n != N.cols:
        raise DimensionMismatch("matrix not square")
    P = N
    for _ in range(n.bit_length()):
        P = P * P
    if not P.is_zero():
        raise NotNilpotent("matrix is not nilpotent")


def _rank(M):
    _, piv = _rref_rows(M.row_lists())
    return len(piv)


def jordan_partition(N):
    """Partition of the nilpotent orbit of N, via ranks of powers:
    lambda^t_k = rank(N^{k-1}) - rank(N^k)."""
    _nilpotency_check(N)
    n = N.rows
    ranks = [n]
    P = N
    while ranks[-1] > 0:
        ranks.append(_rank(P))
        P = P * N
    lam_t = [ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1)]
    lam_t = [c for c in lam_t if c > 0]
    lam = tuple(sum(1 for c in lam_t if c >= j)
                for j in range(1, max(lam_t) + 1)) if lam_t else ()
    return tuple(sorted(lam, reverse=True))


def jordan_chain_basis(N, order="forward"):
    """Deterministic Jordan chain basis: chains longest first, chain tops
    found by extending echelon bases of the kernel filtration in fixed
    coordinate order.  order="reverse" works in the reversed coordinate frame
    (a genuinely different deterministic chain-top choice), used to exercise
    uniqueness-up-to-conjugacy properties."""
    _nilpotency_check(N)
    n = N.rows
    if order == "reverse":
        R = QMatrix.from_rows([[Fraction(int(j == n - 1 - i)) for j in range(n)]
                               for i in range(n)])
        chains = jordan_chain_basis(R * N * R, order="forward")
        return [[R.matvec(v) for v in ch] for ch in chains]
    powers = [QMatrix.identity(n)]
    while not powers[-1].is_zero():
        powers.append(powers[-1] * N)
    L = len(powers) - 1
    kernels = [Subspace(n, _kernel_rows(powers[k].row_lists(), n))
               for k in range(L + 1)]
    chains = []
    built = []
    for ell in range(L, 0, -1):
        avoid = list(kernels[ell - 1].basis)
        avoid += [tuple(N.matvec(list(v))) for v in built]
        span = Subspace(n, avoid)
        for v in kernels[ell].basis:
            if not span.member(v):
                chain = [list(v)]
                for _ in range(ell - 1):
                    chain.append(N.matvec(chain[-1]))
                chains.append(chain)
                built.extend(tuple(c) for c in chain)
                span = Subspace(n, list(span.basis) + [tuple(c) for c in chain])
    assert sum(len(c) for c in chains) == n
    return chains


def jordan_conjugator(N, eta, order="forward"):
    """Invertible g over Q with g N g^{-1} = J_eta exactly.  eta must be a
    composition whose sorted form is the Jordan type of N."""
    eta = tuple(int(k) for k in eta)
    lam = jordan_partition(N)
    if tuple(sorted(eta, reverse=True)) != lam:
        raise WrongPartition(f"jordan type is {lam}, not {tuple(sorted(eta, reverse=True))}")
    chains = jordan_chain_basis(N, order=order)
    pool = {}
    for ch in chains:
        pool.setdefault(len(ch), []).append(ch)
    cols = []
    for k in eta:
        cols.extend(pool[k].pop(0))
    n = N.rows
    B = QMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])
    g = B.inverse()
    assert g * N * B == J_eta(eta), "conjugator self-check failed"
    return g


# ---------------------------------------------------------------------------
# sl2 completion and neutral elements


def sl2_complete(f, h):
    """Solve for e with [h,e] = 2e and [e,f] = h (exact linear system; any
    solution).  NoSolutionError signals that (h, f) was not a neutral pair."""
    n = f.rows
    if (n, n) != (h.rows, h.cols) or f.cols != n:
        raise DimensionMismatch("f, h must be square of equal size")
    # unknown e as n^2 vector; equations: [h,e] - 2e = 0 and [e,f] - h = 0
    rows = []
    rhs = []
    hl = h.row_lists()
    fl = f.row_lists()
    for a in range(n):
        for b in range(n):
            # ([h,e] - 2e)_{ab} = sum_k h_ak e_kb - e_ak h_kb - 2 e_ab
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                row[k * n + b] += hl[a][k]
                row[a * n + k] -= hl[k][b]
            row[a * n + b] -= 2
            rows.append(row)
            rhs.append(Fraction(0))
    for a in range(n):
        for b in range(n):
            # ([e,f])_{ab} = sum_k e_ak f_kb - f_ak e_kb
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                row[a * n + k] += fl[k][b]
                row[k * n + b] -= fl[a][k]
            rows.append(row)
            rhs.append(h[a, b])
    res = rref_solve(QMatrix.from_rows(rows), rhs)
    if res.solution is NO_SOLUTION:
        raise NoSolutionError("no sl2 completion; (h, f) is not a neutral pair")
    e = QMatrix(n, n, res.solution)
    assert h.bracket(e) == e.scale(2) and e.bracket(f) == h
    return e


def neutral_for(f, order="forward"):
    """A neutral element h for the nilpotent f, built by transporting the
    standard h_eta through a Jordan conjugator."""
    eta = jordan_partition(f)
    if not eta:
        raise DimensionMismatch("empty matrix")
    g = jordan_conjugator(f, eta, order=order)
    h = g.inverse() * h_eta(eta) * g
    return h


def image_ad_contains(f, h):
    """Decide h in image(ad f) by an exact rank test."""
    n = f.rows
    cols = []
    for a in range(n):
        for b in range(n):
            E = QMatrix.elementary(n, a + 1, b + 1)
            cols.append(list(f.bracket(E).flat()))
    r1 = len(_rref_rows(cols)[1])
    r2 = len(_rref_rows(cols + [list(h.flat())])[1])
    return r1 == r2


def _h_has_nilpositive(h):
    """h is the semisimple member of some sl2-triple in gl_n iff its action on
    Q^n is diagonalizable with integer eigenvalues whose multiset splits into
    symmetric chains {m, m-2, ..., -m}."""
    from .exactq import rational_eigenvalues
    from .errors import NotRationalSplit
    try:
        eig = rational_eigenvalues(h)
    except NotRationalSplit:
        return False
    vals = []
    for lam, space in eig:
        if lam.denominator != 1:
            return False
        vals.extend([int(lam)] * space.dim)
    from collections import Counter
    count = Counter(vals)
    while count:
        m = max(count)
        if m < 0:
            return False
        k = m
        while k >= -m:
            if count[k] <= 0:
                return False
            count[k] -= 1
            if count[k] == 0:
                del count[k]
            k -= 2
    return True


def _weight_space_dim(h, r):
    """dim of the ad(h)-weight-r space of gl_n, for h with rational spectrum."""
    from .exactq import rational_eigenvalues
    eig = rational_eigenvalues(h)
    dim = 0
    for a, va in eig:
        for b, vb in eig:
            if a - b == r:
                dim += va.dim * vb.dim
    return dim


def is_neutral_pair(h, f):
    """Two equivalent characterizations, both evaluated (and asserted equal):
    (a) [h,f] = -2f and h in image(ad f);
    (b) [h,f] = -2f, h has a nil-positive element, and ad(.)f maps the
        h-weight-0 space onto the full weight-(-2) space.
    """
    n = f.rows
    if (h.rows, h.cols, f.cols) != (n, n, n):
        raise DimensionMismatch("h, f must be square of equal size")
    if h.bracket(f) != f.scale(-2):
        return False
    via_image = image_ad_contains(f, h)
    via_surjectivity = False
    if _h_has_nilpositive(h):
        from .exactq import rational_eigenvalues
        eig = rational_eigenvalues(h)
        # basis of the weight-0 space from joint eigenvectors v_i w_j^T
        P = QMatrix.from_rows(
            [list(v) for _, sp in eig for v in sp.basis]).transpose()
        Pinv = P.inverse()
        labels = [lam for lam, sp in eig for _ in sp.basis]
        zero_wt = []
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                if a == b:
                    E = QMatrix.elementary(n, i + 1, j + 1)
                    zero_wt.append(P * E * Pinv)
        image = [list(X.bracket(f).flat()) for X in zero_wt]
        rank = len(_rref_rows(image)[1])
        via_surjectivity = rank == _weight_space_dim(h, -2)
    assert via_image == via_surjectivity, \
        "the two neutrality characterizations disagree"
    return via_image


# ---------------------------------------------------------------------------
# rational d-th powers and SL classes


def integer_nth_root(m, d):
    """Exact floor of the d-th root of m >= 0."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m in (0, 1):
        return m
    x = int(round(m ** (1.0 / d))) + 1
    while x ** d > m:
        x -= 1
    return x


def is_dth_power(r, d):
    """True iff the nonzero rational r is a d-th power in Q."""
    r = Fraction(r)
    if r == 0:
        raise ValueError("r must be nonzero")
    d = int(d)
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return True
    if r < 0 and d % 2 == 0:
        return False
    num, den = abs(r.numerator), r.denominator
    rn = integer_nth_root(num, d)
    rd = integer_nth_root(den, d)
    return rn ** d == num and rd ** d == den


def rational_dth_root(r, d):
    """The rational d-th root of r when it exists (sign goes to the root for
    odd d); None otherwise."""
    r = Fraction(r)
    if not is_dth_power(r, d):
        return None
    num, den = abs(r.numerator), r.denominator
    root = Fraction(integer_nth_root(num, d), integer_nth_root(den, d))
    if r < 0:
        root = -root
    return root


def _strip_dth_powers(m, d):
    """Remove all d-th power factors from the positive integer m (trial
    division; certificate numbers stay small)."""
    out = 1
    mm = m
    p = 2
    while p * p <= mm:
        if mm % p == 0:
            e = 0
            while mm % p == 0:
                mm //= p
                e += 1
            out *= p ** (e % d)
        p += 1
    if mm > 1:
        out *= mm
    return out


def power_class(r, d):
    """Canonical representative of r modulo rational d-th powers: the
    d-th-power-free part of the integer num * den^(d-1) (which lies in the
    same class as r), signed only when d is even."""
    r = Fraction(r)
    if r == 0:
        raise ValueError("r must be nonzero")
    d = int(d)
    if d == 1:
        return Fraction(1)
    m = _strip_dth_powers(abs(r.numerator) * r.denominator ** (d - 1), d)
    sign = -1 if (r < 0 and d % 2 == 0) else 1
    return Fraction(sign * m)


@dataclass(frozen=True)
class SlOrbitClass:
    lam: tuple
    d: int
    a_class: Fraction

    def to_json(self):
        return {"lambda": list(self.lam), "d": self.d, "a_class": rat_str(self.a_class)}

    def __eq__(self, other):
        return (isinstance(other, SlOrbitClass) and self.lam == other.lam
                and self.d == other.d
                and is_dth_power(self.a_class / other.a_class, self.d))

    def __hash__(self):
        return hash((self.lam, self.d))


def sl_class(N):
    """SL_n orbit invariant of a nilpotent N: the partition plus the class of
    det(g)^{-1} modulo d-th powers, where g N g^{-1} = J_lambda."""
    lam = jordan_partition(N)
    if not lam:
        raise DimensionMismatch("empty matrix")
    g = jordan_conjugator(N, lam)
    d = math.gcd(*lam)
    return SlOrbitClass(lam, d, power_class(1 / g.det(), d))
