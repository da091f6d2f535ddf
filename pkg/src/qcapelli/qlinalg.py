"""Exact dense linear algebra on tensor powers of an N-dimensional space.

A QMatrix acts on p tensor legs; its composite indices flatten the leg
tuple (i_1, ..., i_p) big-endian: r = sum (i_t - 1) N^(p-t).  Entries are
exact scalars (Fraction or RatQ; ints 0/1 allowed as neutral constants).
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalar import inv as scalar_inv


class QLinError(Exception):
    pass


class SkewInverseError(QLinError):
    pass


class CalibrationError(QLinError):
    pass


class RankError(QLinError):
    pass


class FactorError(QLinError):
    pass


class QMatrix:
    __slots__ = ("N", "p", "rows")

    def __init__(self, N, p, rows):
        dim = N ** p
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise QLinError("expected a %d x %d matrix" % (dim, dim))
        self.N = N
        self.p = p
        self.rows = rows

    @property
    def dim(self):
        return self.N ** self.p

    @classmethod
    def zeros(cls, N, p):
        dim = N ** p
        return cls(N, p, [[0] * dim for _ in range(dim)])

    @classmethod
    def identity(cls, N, p):
        out = cls.zeros(N, p)
        for i in range(N ** p):
            out.rows[i][i] = 1
        return out

    def copy(self):
        return QMatrix(self.N, self.p, [list(r) for r in self.rows])

    def __add__(self, other):
        self._compat(other)
        return QMatrix(self.N, self.p,
                       [[a + b for a, b in zip(ra, rb)]
                        for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._compat(other)
        return QMatrix(self.N, self.p,
                       [[a - b for a, b in zip(ra, rb)]
                        for ra, rb in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            self._compat(other)
            dim = self.dim
            out = [[0] * dim for _ in range(dim)]
            orows = other.rows
            for i in range(dim):
                arow = self.rows[i]
                orow = out[i]
                for s in range(dim):
                    a = arow[s]
                    if not a:
                        continue
                    brow = orows[s]
                    for j in range(dim):
                        b = brow[j]
                        if b:
                            orow[j] = orow[j] + a * b
            return QMatrix(self.N, self.p, out)
        return self.scale(other)

    def scale(self, c):
        if not c:
            return QMatrix.zeros(self.N, self.p)
        return QMatrix(self.N, self.p,
                       [[c * v if v else 0 for v in row] for row in self.rows])

    def __neg__(self):
        return QMatrix(self.N, self.p,
                       [[-v if v else 0 for v in row] for row in self.rows])

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.N != other.N or self.p != other.p:
            return False
        dim = self.dim
        for i in range(dim):
            ra, rb = self.rows[i], other.rows[i]
            for j in range(dim):
                if ra[j] != rb[j]:
                    return False
        return True

    def is_zero(self):
        return all(not v for row in self.rows for v in row)

    def trace(self):
        acc = 0
        for i in range(self.dim):
            acc = acc + self.rows[i][i]
        return acc

    def _compat(self, other):
        if self.N != other.N or self.p != other.p:
            raise QLinError("mismatched shapes: (%d legs, N=%d) vs (%d legs, N=%d)"
                            % (self.p, self.N, other.p, other.N))

    def __repr__(self):
        return "QMatrix(N=%d, p=%d)" % (self.N, self.p)


def embed(R, i, p):
    """Place a 2-leg operator on legs (i, i+1) of a p-leg space."""
    if R.p != 2:
        raise QLinError("embed expects a 2-leg operator")
    if not (1 <= i <= p - 1):
        raise QLinError("leg %d out of range for %d legs" % (i, p))
    N = R.N
    pre = N ** (i - 1)
    post = N ** (p - i - 1)
    out = QMatrix.zeros(N, p)
    nn = N * N
    for x in range(nn):
        rrow = R.rows[x]
        for y in range(nn):
            v = rrow[y]
            if not v:
                continue
            for a in range(pre):
                base_r = (a * nn + x) * post
                base_c = (a * nn + y) * post
                for b in range(post):
                    out.rows[base_r + b][base_c + b] = v
    return out


def embed_tail(X, p):
    """Pad a k-leg operator with identity legs up to p legs."""
    if X.p > p:
        raise QLinError("cannot shrink the leg count")
    if X.p == p:
        return X
    N = X.N
    post = N ** (p - X.p)
    out = QMatrix.zeros(N, p)
    for a in range(X.dim):
        xrow = X.rows[a]
        for c in range(X.dim):
            v = xrow[c]
            if not v:
                continue
            for t in range(post):
                out.rows[a * post + t][c * post + t] = v
    return out


def partial_trace(X, leg, weight=None):
    """Weighted partial trace over one leg; the weight is a 1-leg operator
    applied before tracing (plain trace when weight is None)."""
    N, p = X.N, X.p
    if not (1 <= leg <= p):
        raise QLinError("leg %d out of range for %d legs" % (leg, p))
    if p == 1:
        acc = 0
        for s in range(N):
            for k in range(N):
                v = X.rows[s][k]
                if not v:
                    continue
                w = 1 if weight is None else weight.rows[k][s]
                if w:
                    acc = acc + w * v
        return acc
    div = N ** (p - leg)
    out = QMatrix.zeros(N, p - 1)
    dim = X.dim
    for r in range(dim):
        xrow = X.rows[r]
        s = (r // div) % N
        r2 = (r // (div * N)) * div + r % div
        for c in range(dim):
            v = xrow[c]
            if not v:
                continue
            k = (c // div) % N
            if weight is None:
                w = 1 if k == s else 0
            else:
                w = weight.rows[k][s]
            if not w:
                continue
            c2 = (c // (div * N)) * div + c % div
            out.rows[r2][c2] = out.rows[r2][c2] + w * v
    return out


def r_trace(X, legs, c_matrix):
    """Trace the listed legs (1-based) against the trace weight, highest
    leg first so remaining leg numbers stay stable.  Returns a QMatrix on
    the surviving legs, or a scalar when every leg is traced."""
    out = X
    for leg in sorted(set(legs), reverse=True):
        out = partial_trace(out, leg, c_matrix)
    return out


def matrix_inverse(M):
    dim = M.dim
    work = [list(r) for r in M.rows]
    aug = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for col in range(dim):
        piv = None
        for r in range(col, dim):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            raise QLinError("matrix is singular")
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            aug[col], aug[piv] = aug[piv], aug[col]
        pv = scalar_inv(work[col][col])
        work[col] = [v * pv if v else 0 for v in work[col]]
        aug[col] = [v * pv if v else 0 for v in aug[col]]
        for r in range(dim):
            if r == col:
                continue
            f = work[r][col]
            if not f:
                continue
            work[r] = [a - f * b if b else a for a, b in zip(work[r], work[col])]
            aug[r] = [a - f * b if b else a for a, b in zip(aug[r], aug[col])]
    return QMatrix(M.N, M.p, aug)


def matrix_rank(M):
    work = [list(r) for r in M.rows if any(r)]
    dim = M.dim
    rank = 0
    col = 0
    while col < dim and rank < len(work):
        piv = None
        for r in range(rank, len(work)):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pv = scalar_inv(work[rank][col])
        prow = [v * pv if v else 0 for v in work[rank]]
        work[rank] = prow
        for r in range(len(work)):
            if r == rank:
                continue
            f = work[r][col]
            if f:
                work[r] = [a - f * b if b else a for a, b in zip(work[r], prow)]
        rank += 1
        col += 1
    return rank


def check_braid(R):
    """R12 R23 R12 == R23 R12 R23 on three legs."""
    r12 = embed(R, 1, 3)
    r23 = embed(R, 2, 3)
    return (r12 * r23 * r12) == (r23 * r12 * r23)


def check_hecke(R, cfg):
    """(qI - R)(q^(-1) I + R) == 0."""
    ident = QMatrix.identity(R.N, 2)
    lhs = (ident.scale(cfg.qpow(1)) - R) * (ident.scale(cfg.qpow(-1)) + R)
    return lhs.is_zero()


@dataclass
class SkewInverseData:
    psi: QMatrix
    b_matrix: QMatrix
    c_matrix: QMatrix


@dataclass
class RankReport:
    rank: int
    dims: list


@dataclass
class UVPair:
    u: list
    v: list


def _flip_matrix(N):
    out = QMatrix.zeros(N, 2)
    for a in range(N):
        for b in range(N):
            out.rows[a * N + b][b * N + a] = 1
    return out


def skew_inverse(R, cfg):
    """Solve Tr_2(R_12 Psi_23) = P_13 for Psi and calibrate the partial
    traces of Psi into the B and C matrices, C being the one whose trace
    normalization <A^(m)> = q^(-m^2) holds."""
    N = R.N
    nn = N * N
    # reshuffle legs so the defining contraction becomes matrix inversion
    t = QMatrix.zeros(N, 2)
    for a in range(N):
        for b in range(N):
            for d in range(N):
                for y in range(N):
                    v = R.rows[a * N + b][d * N + y]
                    if v:
                        t.rows[a * N + d][y * N + b] = v
    try:
        tinv = matrix_inverse(t)
    except QLinError:
        raise SkewInverseError("braiding is not skew-invertible")
    perm = _flip_matrix(N)
    sol = tinv * perm
    psi = QMatrix.zeros(N, 2)
    for y in range(N):
        for b in range(N):
            for c in range(N):
                for f in range(N):
                    v = sol.rows[y * N + b][c * N + f]
                    if v:
                        psi.rows[y * N + c][b * N + f] = v
    # defining identity, checked directly on the result
    check = QMatrix.zeros(N, 2)
    for a in range(N):
        for c in range(N):
            for d in range(N):
                for f in range(N):
                    acc = 0
                    for b in range(N):
                        for y in range(N):
                            rv = R.rows[a * N + b][d * N + y]
                            if not rv:
                                continue
                            pv = psi.rows[y * N + c][b * N + f]
                            if pv:
                                acc = acc + rv * pv
                    check.rows[a * N + c][d * N + f] = acc
    if check != _flip_matrix(N):
        raise SkewInverseError("skew inverse failed its defining contraction")

    cand_leg2 = QMatrix.zeros(N, 1)
    cand_leg1 = QMatrix.zeros(N, 1)
    for i in range(N):
        for j in range(N):
            acc2 = 0
            acc1 = 0
            for k in range(N):
                acc2 = acc2 + psi.rows[i * N + k][j * N + k]
                acc1 = acc1 + psi.rows[k * N + i][k * N + j]
            cand_leg2.rows[i][j] = acc2
            cand_leg1.rows[i][j] = acc1

    # Structurally the trace weight is the leg-1 trace; the normalization
    # <A^(m)> = q^(-m^2) corrects the assignment if that choice fails it.
    rank = rank_of(R, cfg).rank
    a_top = antisymmetrizer(R, rank, cfg)
    target = cfg.qpow(-rank * rank)
    if r_trace(a_top, range(1, rank + 1), cand_leg1) == target:
        return SkewInverseData(psi=psi, b_matrix=cand_leg2, c_matrix=cand_leg1)
    if r_trace(a_top, range(1, rank + 1), cand_leg2) == target:
        return SkewInverseData(psi=psi, b_matrix=cand_leg1, c_matrix=cand_leg2)
    raise CalibrationError("neither partial trace satisfies the normalization")


def antisymmetrizer(R, k, cfg):
    if k < 1:
        raise QLinError("tower index must be >= 1")
    N = R.N
    a_prev = QMatrix.identity(N, 1)
    for j in range(2, k + 1):
        pad = embed_tail(a_prev, j)
        rj = embed(R, j - 1, j)
        mid = QMatrix.identity(N, j).scale(cfg.qpow(j - 1)) - rj.scale(cfg.qnum(j - 1))
        a_prev = (pad * mid * pad).scale(scalar_inv(cfg.qnum(j)))
    return a_prev


def symmetrizer(R, k, cfg):
    if k < 1:
        raise QLinError("tower index must be >= 1")
    N = R.N
    s_prev = QMatrix.identity(N, 1)
    for j in range(2, k + 1):
        pad = embed_tail(s_prev, j)
        rj = embed(R, j - 1, j)
        mid = QMatrix.identity(N, j).scale(cfg.qpow(1 - j)) + rj.scale(cfg.qnum(j - 1))
        s_prev = (pad * mid * pad).scale(scalar_inv(cfg.qnum(j)))
    return s_prev


def rank_of(R, cfg, cap=6):
    """Smallest m with a rank-one top antisymmetrizer and a vanishing
    (m+1)-st one; dims records dim Im A^(k) for k = 1 .. m+1."""
    dims = [R.N]
    prev = R.N
    for k in range(2, cap + 2):
        d = matrix_rank(antisymmetrizer(R, k, cfg))
        dims.append(d)
        if d == 0:
            if prev != 1:
                raise RankError(
                    "antisymmetrizer tower collapses without passing rank one")
            return RankReport(rank=k - 1, dims=dims)
        prev = d
    raise RankError("rank exceeds the probe cap %d" % (cap,))


def uv_factorize(A, cfg):
    """Write a rank-one idempotent as an outer product |u><v| with the
    first nonzero component of v scaled to 1 and <v|u> = 1."""
    if matrix_rank(A) != 1:
        raise FactorError("operator does not have rank one")
    dim = A.dim
    vrow = None
    for r in range(dim):
        if any(A.rows[r]):
            vrow = list(A.rows[r])
            break
    j0 = next(j for j in range(dim) if vrow[j])
    piv = scalar_inv(vrow[j0])
    v = [x * piv if x else 0 for x in vrow]
    u = [A.rows[i][j0] for i in range(dim)]
    pairing = 0
    for a, b in zip(v, u):
        if a and b:
            pairing = pairing + a * b
    if not pairing:
        raise FactorError("pairing <v|u> vanishes; operator is not idempotent")
    fix = scalar_inv(pairing)
    u = [x * fix if x else 0 for x in u]
    for i in range(dim):
        for j in range(dim):
            expect = u[i] * v[j] if (u[i] and v[j]) else 0
            if A.rows[i][j] != expect:
                raise FactorError("operator is not the outer product of u and v")
    return UVPair(u=u, v=v)
