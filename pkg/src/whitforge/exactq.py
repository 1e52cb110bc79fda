"""Exact rational linear algebra: matrices, echelonized subspaces, rational
eigenvalue extraction and the skew-form utilities built on trace forms.

Everything is a pure function on immutable values; Fraction is the only
scalar type.  No floating point anywhere.
"""

from fractions import Fraction
from dataclasses import dataclass

from .errors import DimensionMismatch, NotRationalSplit, ParseError

Rational = Fraction


class NoSolutionType:
    """Sentinel returned (not raised) when a linear system is inconsistent."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NoSolution"

    def __bool__(self):
        return False


NO_SOLUTION = NoSolutionType()


# ---------------------------------------------------------------------------
# rationals as strings ("p/q", or "p" when q = 1) -- the shared wire format


def rat_str(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_parse(s):
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}: {exc}") from None


# ---------------------------------------------------------------------------
# matrices


class QMatrix:
    """Dense immutable matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows, cols, entries):
        entries = tuple(Fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("QMatrix is immutable")

    # -- constructors

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(n, m, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, n, m=None):
        m = n if m is None else m
        return cls(n, m, [Fraction(0)] * (n * m))

    @classmethod
    def identity(cls, n):
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values):
        values = [Fraction(v) for v in values]
        n = len(values)
        return cls(n, n, [values[i] if i == j else Fraction(0)
                          for i in range(n) for j in range(n)])

    @classmethod
    def elementary(cls, n, i, j, coeff=1):
        """E_ij (1-based), optionally scaled."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise DimensionMismatch(f"E_{i}{j} out of range for n={n}")
        ent = [Fraction(0)] * (n * n)
        ent[(i - 1) * n + (j - 1)] = Fraction(coeff)
        return cls(n, n, ent)

    # -- access

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_lists(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def flat(self):
        return self.entries

    # -- algebra

    def _check_same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")

    def __add__(self, other):
        self._check_same_shape(other)
        return QMatrix(self.rows, self.cols,
                       [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check_same_shape(other)
        return QMatrix(self.rows, self.cols,
                       [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return QMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c):
        c = Fraction(c)
        return QMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch("matmul shape mismatch")
            n, k, m = self.rows, self.cols, other.cols
            A, B = self.entries, other.entries
            out = [Fraction(0)] * (n * m)
            for i in range(n):
                base = i * k
                for t in range(k):
                    a = A[base + t]
                    if a:
                        brow = t * m
                        orow = i * m
                        for j in range(m):
                            b = B[brow + j]
                            if b:
                                out[orow + j] += a * b
            return QMatrix(n, m, out)
        return self.scale(other)

    __rmul__ = scale

    def bracket(self, other):
        return self * other - other * self

    def transpose(self):
        return QMatrix(self.cols, self.rows,
                       [self.entries[j * self.cols + i]
                        for i in range(self.cols) for j in range(self.rows)])

    def trace(self):
        if self.rows != self.cols:
            raise DimensionMismatch("trace of non-square")
        return sum((self.entries[i * self.cols + i] for i in range(self.rows)),
                   Fraction(0))

    def matvec(self, v):
        if len(v) != self.cols:
            raise DimensionMismatch("matvec shape mismatch")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum((self.entries[base + j] * v[j]
                            for j in range(self.cols) if self.entries[base + j] and v[j]),
                           Fraction(0)))
        return out

    def power(self, k):
        if self.rows != self.cols:
            raise DimensionMismatch("power of non-square")
        out = QMatrix.identity(self.rows)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self):
        return not any(self.entries)

    def is_diagonal(self):
        n = self.cols
        return all(not e for idx, e in enumerate(self.entries)
                   if idx // n != idx % n)

    def det(self):
        if self.rows != self.cols:
            raise DimensionMismatch("det of non-square")
        A = self.row_lists()
        n = self.rows
        d = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if A[i][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = -d
            d *= A[c][c]
            inv = 1 / A[c][c]
            A[c] = [x * inv for x in A[c]]
            for i in range(c + 1, n):
                if A[i][c]:
                    f = A[i][c]
                    A[i] = [x - f * y for x, y in zip(A[i], A[c])]
        return d

    def inverse(self):
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of non-square")
        n = self.rows
        aug = [row + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self.row_lists())]
        red, piv = _rref_rows(aug)
        if piv != list(range(n)):
            raise DimensionMismatch("matrix not invertible")
        return QMatrix.from_rows([row[n:] for row in red])

    # -- dunder plumbing

    def __eq__(self, other):
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.rows, self.cols, self.entries)))
        return self._hash

    def __repr__(self):
        rows = [" ".join(rat_str(x) for x in r) for r in self.row_lists()]
        return "QMatrix[" + "; ".join(rows) + "]"

    def to_json(self):
        return [[rat_str(x) for x in row] for row in self.row_lists()]

    @classmethod
    def from_json(cls, obj):
        return cls.from_rows([[rat_parse(x) for x in row] for row in obj])


# ---------------------------------------------------------------------------
# row reduction


def _rref_rows(rows):
    """In-place-style reduced row echelon form of a list of row lists.
    Returns (reduced rows, pivot column list); zero rows are kept at the end."""
    A = [list(r) for r in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                Ar = A[r]
                A[i] = [x - f * y for x, y in zip(A[i], Ar)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def _kernel_rows(rows, n_cols):
    """Basis of the right kernel of the matrix given by `rows` (echelonized)."""
    red, piv = _rref_rows(rows)
    pivset = set(piv)
    free = [c for c in range(n_cols) if c not in pivset]
    out = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -red[r][fc]
        out.append(v)
    return out


@dataclass(frozen=True)
class RrefResult:
    echelon: QMatrix
    pivots: tuple
    rank: int
    solution: object      # tuple of Fractions | NO_SOLUTION | None (no b given)
    kernel: tuple         # tuple of coordinate tuples, echelonized


def rref_solve(A, b=None):
    """Exact reduced row echelon form of A; when b is given, also a particular
    solution of A x = b (free variables set to 0) or NO_SOLUTION."""
    rows = A.row_lists()
    m, n = A.rows, A.cols
    if b is not None:
        b = [Fraction(x) for x in b]
        if len(b) != m:
            raise DimensionMismatch("b length != rows(A)")
        aug = [row + [bx] for row, bx in zip(rows, b)]
        red, piv = _rref_rows(aug)
        if n in piv:
            solution = NO_SOLUTION
            piv_a = [c for c in piv if c < n]
        else:
            piv_a = piv
            sol = [Fraction(0)] * n
            for r, pc in enumerate(piv_a):
                sol[pc] = red[r][n]
            solution = tuple(sol)
        ech_rows, ech_piv = _rref_rows([row[:n] for row in red])
        ech = QMatrix.from_rows(ech_rows) if ech_rows else QMatrix.zeros(m, n)
        kernel = tuple(tuple(v) for v in _kernel_rows([row[:n] for row in red], n))
        return RrefResult(ech, tuple(ech_piv), len(ech_piv), solution, kernel)
    red, piv = _rref_rows(rows)
    ech = QMatrix.from_rows(red) if red else QMatrix.zeros(m, n)
    kernel = tuple(tuple(v) for v in _kernel_rows(red, n))
    return RrefResult(ech, tuple(piv), len(piv), None, kernel)


# ---------------------------------------------------------------------------
# subspaces (canonical reduced-echelon bases; equality is syntactic)


class Subspace:
    """Subspace of Q^ambient_dim with canonical RREF basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, vectors=()):
        red, piv = _rref_rows([list(v) for v in vectors])
        basis = tuple(tuple(row) for row in red[:len(piv)])
        for v in basis:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length != ambient_dim")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self):
        return len(self.basis)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient_dim mismatch")

    def sum(self, other):
        self._check(other)
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other):
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace(self.ambient_dim)
        # solve sum a_i u_i = sum b_j v_j: kernel of columns [u | -v]
        k, m = len(self.basis), len(other.basis)
        rows = []
        for c in range(self.ambient_dim):
            rows.append([self.basis[i][c] for i in range(k)]
                        + [-other.basis[j][c] for j in range(m)])
        vecs = []
        for kv in _kernel_rows(rows, k + m):
            v = [Fraction(0)] * self.ambient_dim
            for i in range(k):
                if kv[i]:
                    for c in range(self.ambient_dim):
                        v[c] += kv[i] * self.basis[i][c]
            vecs.append(v)
        return Subspace(self.ambient_dim, vecs)

    def member(self, vector):
        vector = [Fraction(x) for x in vector]
        if len(vector) != self.ambient_dim:
            raise DimensionMismatch("vector length != ambient_dim")
        if not any(vector):
            return True
        red, piv = _rref_rows([list(b) for b in self.basis] + [vector])
        return len(piv) == self.dim

    def contains(self, other):
        self._check(other)
        return all(self.member(v) for v in other.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"

    def to_json(self):
        return [[rat_str(x) for x in v] for v in self.basis]

    @classmethod
    def from_json(cls, ambient_dim, obj):
        return cls(ambient_dim, [[rat_parse(x) for x in v] for v in obj])


def subspace_algebra(U, V, op, vector=None):
    """Dispatcher form: op in {intersect, sum, contains, equals, member}."""
    if op == "member":
        return U.member(vector)
    if op == "equals":
        return U == V
    if op == "contains":
        return U.contains(V)
    if op == "sum":
        return U.sum(V)
    if op == "intersect":
        return U.intersect(V)
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# rational eigenvalues


def char_poly(M):
    """Characteristic polynomial coefficients [a_0, ..., a_n] of det(xI - M),
    via Faddeev-LeVerrier."""
    n = M.rows
    if n != M.cols:
        raise DimensionMismatch("char_poly of non-square")
    coeffs = [Fraction(1)]          # leading first, x^n
    Mk = QMatrix.identity(n)
    for k in range(1, n + 1):
        Mk = M * Mk
        ck = -Mk.trace() / k
        coeffs.append(ck)
        if k < n:
            Mk = Mk + QMatrix.identity(n).scale(ck)
    return list(reversed(coeffs))   # [a_0, ..., a_n], a_n = 1


def _divisors(m):
    m = abs(m)
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            if d != m // d:
                out.append(m // d)
        d += 1
    return sorted(out)


def _rational_roots(coeffs):
    """All rational roots of the polynomial with Fraction coefficients
    a_0 + a_1 x + ... (not necessarily monic), by rational-root enumeration."""
    # strip zero roots
    roots = []
    cs = list(coeffs)
    while cs and cs[0] == 0:
        roots.append(Fraction(0))
        cs = cs[1:]
    if not cs or len(cs) == 1:
        return sorted(set(roots), reverse=True)
    from math import lcm
    den = lcm(*[c.denominator for c in cs])
    ints = [int(c * den) for c in cs]
    a0, an = ints[0], ints[-1]
    cands = set()
    for p in _divisors(a0):
        for q in _divisors(an):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    def val(x):
        acc = Fraction(0)
        for c in reversed(ints):
            acc = acc * x + c
        return acc
    roots.extend(x for x in cands if val(x) == 0)
    return sorted(set(roots), reverse=True)


def rational_eigenvalues(M):
    """Eigenvalues (rational roots of the characteristic polynomial) with their
    eigenspaces, sorted by eigenvalue descending.  Raises NotRationalSplit
    unless the eigenspace dimensions sum to n (i.e. M is rational semisimple)."""
    n = M.rows
    if n != M.cols:
        raise DimensionMismatch("eigenvalues of non-square")
    out = []
    total = 0
    for lam in _rational_roots(char_poly(M)):
        shifted = M - QMatrix.identity(n).scale(lam)
        kern = _kernel_rows(shifted.row_lists(), n)
        if kern:
            space = Subspace(n, kern)
            out.append((lam, space))
            total += space.dim
    if total != n:
        raise NotRationalSplit(
            f"eigenspace dimensions sum to {total} < {n}; not rational semisimple")
    return out


# ---------------------------------------------------------------------------
# the anti-symmetric trace form omega_f(X, Y) = trace(f [X, Y]) and friends


def _unflatten(vec, n):
    return QMatrix(n, n, vec)


def omega_eval(f, X, Y):
    return (f * X.bracket(Y)).trace()


def _omega_gram_vectors(f, vectors):
    """Gram matrix of omega_f on flattened gl_n vectors (precomputes [f, X_i])."""
    n = f.rows
    mats = [_unflatten(list(v), n) for v in vectors]
    brackets = [f.bracket(X) for X in mats]     # omega(X,Y) = trace([f,X] Y)
    k = len(mats)
    gram = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        Bi = brackets[i]
        for j in range(i + 1, k):
            val = (Bi * mats[j]).trace()
            gram[i][j] = val
            gram[j][i] = -val
    return gram


def skew_tools(f, W, task):
    """Gram / radical / lagrangian of omega_f(X,Y) = trace(f [X,Y]) on the
    subspace W of flattened gl_n.

    gram       -> exact Gram matrix on W's echelon basis
    radical    -> {X in W : omega(X, W) = 0}
    lagrangian -> maximal isotropic subspace of W containing the radical,
                  grown deterministically over W's echelon basis in order
    """
    n = f.rows
    if W.ambient_dim != n * n:
        raise DimensionMismatch("W must live in flattened gl_n")
    gram = _omega_gram_vectors(f, W.basis)
    if task == "gram":
        return QMatrix.from_rows(gram) if gram else QMatrix.zeros(0, 0)
    kern = _kernel_rows(gram, len(gram)) if gram else []
    rad_vecs = []
    for kv in kern:
        v = [Fraction(0)] * W.ambient_dim
        for i, c in enumerate(kv):
            if c:
                for t in range(W.ambient_dim):
                    v[t] += c * W.basis[i][t]
        rad_vecs.append(v)
    radical = Subspace(W.ambient_dim, rad_vecs)
    if task == "radical":
        return radical
    if task != "lagrangian":
        raise ValueError(f"unknown task {task!r}")
    return _lagrangian(f, W, radical)


def _lagrangian(f, W, radical):
    n = f.rows
    target = W.dim + radical.dim
    assert target % 2 == 0, "dim W + dim radical must be even"
    target //= 2
    cur = list(radical.basis)
    cur_mats = [_unflatten(list(v), n) for v in cur]
    cur_brackets = [f.bracket(X) for X in cur_mats]

    def pairs_zero(vec):
        X = _unflatten(list(vec), n)
        return all((B * X).trace() == 0 for B in cur_brackets)

    def add(vec):
        cur.append(tuple(vec))
        X = _unflatten(list(vec), n)
        cur_mats.append(X)
        cur_brackets.append(f.bracket(X))

    span = Subspace(W.ambient_dim, cur)
    # greedy pass over W's echelon basis in order
    for v in W.basis:
        if span.dim >= target:
            break
        if not span.member(v) and pairs_zero(v):
            add(v)
            span = Subspace(W.ambient_dim, cur)
    # completion: repeatedly adjoin the first echelon vector of the
    # omega-perp of the current span inside W (always isotropic)
    while span.dim < target:
        gram_rows = []
        for w in W.basis:
            Xw = _unflatten(list(w), n)
            gram_rows.append([(B * Xw).trace() for B in cur_brackets])
        # coefficients c (over W basis) with omega(sum c w, cur) = 0
        perp_coeffs = _kernel_rows([list(r) for r in zip(*gram_rows)], len(W.basis)) \
            if cur_brackets else [[Fraction(int(i == j)) for j in range(len(W.basis))]
                                  for i in range(len(W.basis))]
        added = False
        for cv in perp_coeffs:
            v = [Fraction(0)] * W.ambient_dim
            for i, c in enumerate(cv):
                if c:
                    for t in range(W.ambient_dim):
                        v[t] += c * W.basis[i][t]
            if any(v) and not span.member(v):
                add(v)
                span = Subspace(W.ambient_dim, cur)
                added = True
                break
        assert added, "lagrangian completion stalled"
    assert 2 * span.dim == W.dim + radical.dim
    return span
