"""Constructive orbit raising in gl_n / sl_n: the two-block step, the
recursive certificate builder for any dominated pair mu <= lambda, the SL
variant with its gcd power-class gate, and the orbit-comparison hypothesis
certificates.

The builder keeps h and Z diagonal at every level (no inter-level
conjugation); instead it tracks one designated chain-top vector per Jordan
block of f + psi.  Every produced certificate re-verifies its own invariants;
violations raise InternalCheckFailure and are never expected.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (InternalCheckFailure, NotDominated, PreconditionViolation,
                     VerificationError)
from .exactq import QMatrix, _rref_rows, rat_str
from .orbits import (J_eta, h_eta, is_dth_power, jordan_partition, power_class,
                     rational_dth_root, sl_class)
from .partitions import as_partition, dominance_leq, lemma_part_index
from .whitpair import weight_components


# ---------------------------------------------------------------------------
# two-block step


def two_blocks(p, q, r):
    """The elementary raising move on two Jordan blocks:
    Z = diag((p+q-r) Id_p, 0_{q+r}), Y = E_{p+r+1, p}, X = J_{(p, q+r)} + Y,
    S = h_{(p, q+r)} + Z; X lands in the orbit of (p+q, r)."""
    p, q, r = int(p), int(q), int(r)
    if not (p > r >= 0 and q > 0):
        raise PreconditionViolation(f"need p > r >= 0 and q > 0, got {(p, q, r)}")
    n = p + q + r
    Z = QMatrix.diag([p + q - r] * p + [0] * (q + r))
    Y = QMatrix.elementary(n, p + r + 1, p)
    X = J_eta((p, q + r)) + Y
    S = h_eta((p, q + r)) + Z
    # re-verify the four claims
    if S.bracket(X) != X.scale(-2) or S.bracket(Y) != Y.scale(-2):
        raise InternalCheckFailure("two-block S-weights are not -2")
    zw = Z[p + r, p + r] - Z[p - 1, p - 1]
    if zw >= 0:
        raise InternalCheckFailure("two-block Y has nonnegative Z-weight")
    target = (p + q, r) if r else (p + q,)
    if jordan_partition(X) != tuple(sorted(target, reverse=True)):
        raise InternalCheckFailure("two-block X lands in the wrong orbit")
    return Z, Y, X, S


# ---------------------------------------------------------------------------
# internal recursive builder (diagonal h, Z; chain-top bookkeeping)


def _zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]

def _h_std(k):
    return [Fraction(k - 1 - 2 * i) for i in range(k)]

def _put_block(M, B, off):
    for i, row in enumerate(B):
        for j, x in enumerate(row):
            M[off + i][off + j] = x

def _jrows(k):
    B = _zeros(k)
    for i in range(k - 1):
        B[i + 1][i] = Fraction(1)
    return B

def _matvec(M, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), Fraction(0))
            for row in M]


def _common_parts(mu, lam):
    common, mu_rest, lam_rest = [], list(mu), list(lam)
    for v in list(mu):
        if v in mu_rest and v in lam_rest:
            mu_rest.remove(v)
            lam_rest.remove(v)
            common.append(v)
    return common, tuple(mu_rest), tuple(lam_rest)


def _build(mu, lam):
    """Core recursion.  Returns (n, h, Z, f, psi, tops): h, Z diagonal lists,
    f, psi dense row lists, tops a list of (part, vector) with one designated
    chain top per Jordan block of f + psi, each supported on a single
    (h + Z)-eigenvalue."""
    n = sum(mu)
    common, mu_s, lam_s = _common_parts(mu, lam)
    if mu_s and not dominance_leq(mu_s, lam_s):
        raise InternalCheckFailure(
            f"stripping common parts broke dominance: {mu_s} vs {lam_s}")
    h, Z, f, psi, tops = [], [], _zeros(n), _zeros(n), []
    off = 0
    for k in common:
        h += _h_std(k)
        Z += [Fraction(0)] * k
        _put_block(f, _jrows(k), off)
        top = [Fraction(0)] * n
        top[off] = Fraction(1)
        tops.append((k, top))
        off += k
    if mu_s:
        h_s, Z_s, f_s, psi_s, tops_s = _build_stripped(mu_s, lam_s)
        h += h_s
        Z += Z_s
        _put_block(f, f_s, off)
        _put_block(psi, psi_s, off)
        for k, v in tops_s:
            tops.append((k, [Fraction(0)] * off + v))
    return n, h, Z, f, psi, tops


def _build_stripped(mu, lam, preferred=None):
    """mu strictly dominated by lam, no common parts."""
    n = sum(mu)
    if len(mu) == 2:
        p1, p2 = mu
        l1 = lam[0]
        l2 = lam[1] if len(lam) > 1 else 0
        Zb, Yb, Xb, Sb = two_blocks(p1, l1 - p1, l2)
        h = _h_std(p1) + _h_std(p2)
        Z = [Fraction(l1 - l2)] * p1 + [Fraction(0)] * p2
        f = _zeros(n)
        _put_block(f, _jrows(p1), 0)
        _put_block(f, _jrows(p2), p1)
        psi = _zeros(n)
        psi[p1 + l2][p1 - 1] = Fraction(1)
        tops = []
        tlong = [Fraction(0)] * n
        tlong[0] = Fraction(1)
        tops.append((l1, tlong))
        if l2:
            tshort = [Fraction(0)] * n
            tshort[p1] = Fraction(1)
            tshort[p1 - l2] -= Fraction(1)
            tops.append((l2, tshort))
        return h, Z, f, psi, tops

    indices = _strict_indices(lam, mu)
    if preferred in indices:
        indices = [preferred] + [i for i in indices if i != preferred]
    last = None
    for i in indices:
        try:
            return _merge(mu, lam, i)
        except InternalCheckFailure as exc:
            last = exc
    raise InternalCheckFailure(f"no merge index works for {mu} -> {lam}: {last}")


def _strict_indices(lam, mu):
    out = []
    for i in range(1, len(lam) + 1):
        li = lam[i - 1]
        mi = mu[i - 1] if i <= len(mu) else 0
        ln = lam[i] if i < len(lam) else 0
        if li > mi > ln:
            out.append(i)
    # the smallest valid index first, per the tie-breaking rule
    smallest = lemma_part_index(lam, mu)
    if smallest in out and out[0] != smallest:
        out.remove(smallest)
        out = [smallest] + out
    return out


def _merge(mu, lam, i):
    n = sum(mu)
    li = lam[i - 1]
    ln = lam[i] if i < len(lam) else 0
    mi = mu[i - 1]
    p = li + ln - mi
    z1 = Fraction(li - ln)
    mu_c = tuple(sorted((x for j, x in enumerate(mu) if j != i - 1), reverse=True))
    lam_c = tuple(sorted([x for j, x in enumerate(lam)
                          if j not in (i - 1, i)] + [p], reverse=True))
    if not dominance_leq(mu_c, lam_c):
        raise InternalCheckFailure("reduced pair lost dominance")
    n_c = n - mi
    _, h_c, Z_c, f_c, psi_c, tops_c = _build(mu_c, lam_c)
    X_c = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(f_c, psi_c)]
    S_c = [a + b for a, b in zip(h_c, Z_c)]
    last = None
    for _, u in [tv for tv in tops_c if tv[0] == p]:
        try:
            return _attach(mu, lam, i, p, z1, mi,
                           h_c, Z_c, f_c, psi_c, tops_c, X_c, S_c, u, n, n_c)
        except InternalCheckFailure as exc:
            last = exc
    raise InternalCheckFailure(f"no usable chain top of size {p}: {last}")


def _attach(mu, lam, i, p, z1, mi, h_c, Z_c, f_c, psi_c, tops_c, X_c, S_c,
            u, n, n_c):
    li = lam[i - 1]
    ln = lam[i] if i < len(lam) else 0
    w = u[:]
    for _ in range(ln):
        w = _matvec(X_c, w)
    supp = [k for k, x in enumerate(w) if x]
    if not supp:
        raise InternalCheckFailure("connector vector vanished")
    svals = {S_c[k] for k in supp}
    if len(svals) != 1:
        raise InternalCheckFailure("connector vector not S-homogeneous")
    c = (1 - mi) + z1 - 2 - svals.pop()
    for k in supp:
        if Z_c[k] + c - z1 >= 0:
            raise InternalCheckFailure("connector has nonnegative Z-weight")
    h = _h_std(mi) + h_c
    Z = [z1] * mi + [zc + c for zc in Z_c]
    f = _zeros(n)
    _put_block(f, _jrows(mi), 0)
    _put_block(f, f_c, mi)
    psi = _zeros(n)
    _put_block(psi, psi_c, mi)
    for k in supp:
        psi[mi + k][mi - 1] = w[k]
    tops = []
    tlong = [Fraction(0)] * n
    tlong[0] = Fraction(1)
    tops.append((li, tlong))
    if ln:
        tshort = [Fraction(0)] * n
        for k, x in enumerate(u):
            if x:
                tshort[mi + k] = x
        tshort[mi - ln] -= Fraction(1)
        tops.append((ln, tshort))
    used = False
    for k, v in tops_c:
        if not used and k == p and v is u:
            used = True
            continue
        tops.append((k, [Fraction(0)] * mi + v))
    return h, Z, f, psi, tops


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class DeformationCertificate:
    n: int
    h: QMatrix
    f: QMatrix
    Z: QMatrix
    psi: QMatrix
    mu: tuple
    lam: tuple
    checks: dict

    def to_json(self):
        return {"n": self.n, "mu": list(self.mu), "lambda": list(self.lam),
                "h": self.h.to_json(), "f": self.f.to_json(),
                "Z": self.Z.to_json(), "psi": self.psi.to_json(),
                "checks": dict(self.checks)}


@dataclass(frozen=True)
class ConditionNotMet:
    """SL raising is impossible: a/b is not a d-th power.  A result value,
    not an error."""
    d: int
    a_class: Fraction

    def to_json(self):
        return {"condition_not_met": True, "d": self.d,
                "class": rat_str(self.a_class)}


def _neutral_check_diagonal(hdiag, f):
    """Definition-style neutrality check for diagonal h: integer eigenvalues
    splitting into symmetric chains, and [., f] mapping the h-weight-0 space
    onto the full weight-(-2) space."""
    from collections import Counter
    if any(x.denominator != 1 for x in hdiag):
        return False
    count = Counter(int(x) for x in hdiag)
    while count:
        m = max(count)
        if m < 0:
            return False
        for k in range(m, -m - 1, -2):
            if count[k] <= 0:
                return False
            count[k] -= 1
            if count[k] == 0:
                del count[k]
    n = len(hdiag)
    fl = f.row_lists()
    images = []
    for a in range(n):
        for b in range(n):
            if hdiag[a] == hdiag[b]:
                # [E_ab, f] = sum_j f_bj E_aj - sum_i f_ia E_ib
                vec = [Fraction(0)] * (n * n)
                for j in range(n):
                    if fl[b][j]:
                        vec[a * n + j] += fl[b][j]
                for i_ in range(n):
                    if fl[i_][a]:
                        vec[i_ * n + b] -= fl[i_][a]
                images.append(vec)
    rank = len(_rref_rows(images)[1]) if images else 0
    target = sum(1 for a in range(n) for b in range(n)
                 if hdiag[a] - hdiag[b] == -2)
    return rank == target


def _verify_certificate(n, hdiag, Zdiag, f, psi, mu, lam):
    """The five certificate invariants plus the commutations; returns the
    checks record.  jordan_partition is the independent oracle for the
    source and target orbits."""
    checks = {}
    fm = QMatrix.from_rows(f)
    pm = QMatrix.from_rows(psi)
    for a in range(n):
        for b in range(n):
            if f[a][b]:
                if hdiag[a] - hdiag[b] != -2:
                    raise InternalCheckFailure("f is not of h-weight -2")
                if Zdiag[a] != Zdiag[b]:
                    raise InternalCheckFailure("[Z, f] != 0")
            if psi[a][b]:
                if Zdiag[a] - Zdiag[b] >= 0:
                    raise InternalCheckFailure("psi has a nonnegative Z-weight")
                if (hdiag[a] + Zdiag[a]) - (hdiag[b] + Zdiag[b]) != -2:
                    raise InternalCheckFailure("psi not of (h+Z)-weight -2")
    checks["f_h_weight_minus_two"] = True
    checks["Z_commutes_f"] = True
    checks["Z_commutes_h"] = True      # both diagonal
    checks["psi_Z_negative"] = True
    checks["psi_S_weight_minus_two"] = True
    if not _neutral_check_diagonal(hdiag, fm):
        raise InternalCheckFailure("(h, f) is not a neutral pair")
    checks["neutral_pair"] = True
    if jordan_partition(fm) != mu:
        raise InternalCheckFailure("jordan_partition(f) != mu")
    checks["jordan_source"] = list(mu)
    if jordan_partition(fm + pm) != lam:
        raise InternalCheckFailure("jordan_partition(f + psi) != lambda")
    checks["jordan_target"] = list(lam)
    return checks


def deform_gl(mu, lam):
    """Raising certificate (h, f, Z, psi) with f in the mu-orbit, f + psi in
    the lambda-orbit, psi of negative ad(Z)-weights and ad(h+Z)-weight -2."""
    mu, lam = as_partition(mu), as_partition(lam)
    if not dominance_leq(mu, lam):
        raise NotDominated(f"{mu} is not dominated by {lam}")
    n, h, Z, f, psi, _ = _build(mu, lam)
    checks = _verify_certificate(n, h, Z, f, psi, mu, lam)
    return DeformationCertificate(
        n, QMatrix.diag(h), QMatrix.from_rows(f), QMatrix.diag(Z),
        QMatrix.from_rows(psi), mu, lam, checks)


def d_of(lam):
    return math.gcd(*lam)


def _conjugate_cert(cert, T):
    Ti = T.inverse()
    return (T * cert.h * Ti, T * cert.f * Ti, T * cert.Z * Ti, T * cert.psi * Ti)


def deform_sl(mu, lam, a, b):
    """SL_n variant: raise the class-b mu-orbit into the class-a lambda-orbit.
    Returns ConditionNotMet(d, class) when a/b is not a d-th power,
    d = gcd(d(lambda), d(mu)); otherwise a verified certificate whose source
    and target SL classes are b and a."""
    mu, lam = as_partition(mu), as_partition(lam)
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise PreconditionViolation("a, b must be nonzero")
    if not dominance_leq(mu, lam):
        raise NotDominated(f"{mu} is not dominated by {lam}")
    dl, dm = d_of(lam), d_of(mu)
    d = math.gcd(dl, dm)
    if not is_dth_power(a / b, d):
        return ConditionNotMet(d, power_class(a / b, d))
    base = deform_gl(mu, lam)
    # normalize a, b to a common c (Bezout exponents on d = x dl + y dm)
    u = rational_dth_root(a / b, d)
    g, x, y = _ext_gcd(dl, dm)
    assert g == d
    c = a * u ** (-x * dl)
    assert is_dth_power(c / a, dl) and is_dth_power(c / b, dm)
    s_lam = sl_class(base.f + base.psi)
    s_mu = sl_class(base.f)
    ratio = power_class((s_mu.a_class / s_lam.a_class), d)
    rho = rational_dth_root(s_mu.a_class / s_lam.a_class, d)
    if rho is None:
        raise InternalCheckFailure(
            "source/target classes of the gl certificate differ by a non-d-th power")
    # delta multiplies both classes; land them on c modulo the proper powers
    delta = (c / s_lam.a_class) * rho ** (-x * dl)
    T = QMatrix.diag([delta] + [Fraction(1)] * (base.n - 1))
    h2, f2, Z2, psi2 = _conjugate_cert(base, T)
    out_lam = sl_class(f2 + psi2)
    out_mu = sl_class(f2)
    if not is_dth_power(out_lam.a_class / a, dl):
        raise InternalCheckFailure("target SL class mismatch")
    if not is_dth_power(out_mu.a_class / b, dm):
        raise InternalCheckFailure("source SL class mismatch")
    checks = dict(base.checks)
    checks["sl_class_source"] = rat_str(power_class(b, dm))
    checks["sl_class_target"] = rat_str(power_class(a, dl))
    # conjugation keeps every invariant; re-verify the weight facts abstractly
    cert = DeformationCertificate(base.n, h2, f2, Z2, psi2, mu, lam, checks)
    _verify_conjugated(cert)
    return cert


def _verify_conjugated(cert):
    for r in weight_components(cert.Z, cert.psi):
        if r >= 0:
            raise InternalCheckFailure("conjugated psi has nonnegative Z-weight")
    S = cert.h + cert.Z
    for r in weight_components(S, cert.psi):
        if r != -2:
            raise InternalCheckFailure("conjugated psi not of S-weight -2")
    if jordan_partition(cert.f) != cert.mu or \
       jordan_partition(cert.f + cert.psi) != cert.lam:
        raise InternalCheckFailure("conjugated certificate orbit mismatch")


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


@dataclass(frozen=True)
class ComparCertificate:
    """The four orbit-comparison hypothesis conditions, certified: S = h + Z,
    F = f + psi with F in the lambda-orbit, f of S-weight -2, [h, S] = 0 and
    F - f of negative (S - h)-weights."""
    h: QMatrix
    f: QMatrix
    S: QMatrix
    F: QMatrix
    mu: tuple
    lam: tuple
    conditions: dict

    def to_json(self):
        return {"mu": list(self.mu), "lambda": list(self.lam),
                "h": self.h.to_json(), "f": self.f.to_json(),
                "S": self.S.to_json(), "F": self.F.to_json(),
                "conditions": dict(self.conditions)}


def compar_certificate(mu, lam):
    """Assemble S := h + Z and F := f + psi from deform_gl and independently
    re-verify the four hypothesis conditions by weight decomposition."""
    cert = deform_gl(mu, lam)
    S = cert.h + cert.Z
    F = cert.f + cert.psi
    conditions = {}
    if jordan_partition(F) != cert.lam:
        raise VerificationError("F does not lie in the lambda-orbit")
    conditions["F_in_target_orbit"] = True
    bad = [r for r in weight_components(S, cert.f) if r != -2]
    if bad:
        raise VerificationError("f is not of S-weight -2")
    conditions["f_S_weight_minus_two"] = True
    if cert.h.bracket(S) != QMatrix.zeros(cert.n):
        raise VerificationError("[h, S] != 0")
    conditions["h_commutes_S"] = True
    diff = F - cert.f
    bad = [r for r in weight_components(S - cert.h, diff) if r >= 0] \
        if not diff.is_zero() else []
    if bad:
        raise VerificationError("F - f has a nonnegative (S-h)-weight")
    conditions["difference_Z_negative"] = True
    return ComparCertificate(cert.h, cert.f, S, F, cert.mu, cert.lam, conditions)
