"""Identity verification drivers.

Every identity is verified the same way: both sides are assembled as
matrices (or scalars) over the double's polynomial ring, exactly as
printed, and the difference is reduced entrywise to canonical form.  A
verification passes when every residual is identically zero.  Negative
controls (wrong shifts, dropped diagonals) must come out nonzero, so a
pass is evidence about the algebra and not about the reducer.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import weyl
from .ncalg import (
    NCMatrix,
    NCPoly,
    copy_up,
    embed_tail_nc,
    gen_matrix,
    mat_mul,
    mat_scalar_mul,
    r_trace_nc,
    scalar_mat_mul,
)
from .qlinalg import QMatrix, embed, uv_factorize
from .rewrite import (
    complete,
    derive_dd_rules,
    derive_exchange,
    derive_re_rules,
    reduce,
)
from .scalar import RatQ, scalar_to_text


class VerifyError(Exception):
    pass


class VerificationReport:
    """Outcome of one identity check, with enough context to reproduce."""

    __slots__ = ("identity", "params", "rmatrix", "q_points", "backend",
                 "outcome", "residual_entries", "residual_sample",
                 "timings_ms", "details")

    def __init__(self, identity, params, rmatrix, q_points, backend,
                 outcome, residual_entries=0, residual_sample=None,
                 timings_ms=None, details=None):
        self.identity = identity
        self.params = params
        self.rmatrix = rmatrix
        self.q_points = q_points
        self.backend = backend
        self.outcome = outcome
        self.residual_entries = residual_entries
        self.residual_sample = residual_sample or []
        self.timings_ms = timings_ms or {}
        self.details = details or {}

    def passed(self):
        return self.outcome == "pass"

    def to_record(self):
        return {
            "identity": self.identity,
            "params": self.params,
            "rmatrix": self.rmatrix,
            "q_points": self.q_points,
            "backend": self.backend,
            "outcome": self.outcome,
            "residual_entries": self.residual_entries,
            "residual_sample": self.residual_sample,
            "timings_ms": self.timings_ms,
            "details": self.details,
        }

    def __repr__(self):
        return "VerificationReport(%s, %s)" % (self.identity, self.outcome)


class RewriteContext:
    """Per-symmetry machinery: the exchange table and the two completed
    systems, built lazily and grown monotonically in degree."""

    def __init__(self, sym, rule_cap=4000, max_degree=12,
                 strategy="leftmost"):
        self.sym = sym
        self.rule_cap = rule_cap
        self.max_degree = max_degree
        self.strategy = strategy
        self._table = None
        self._systems = {}

    @property
    def table(self):
        if self._table is None:
            self._table = derive_exchange(self.sym)
        return self._table

    def system(self, kind, degree):
        degree = max(degree, 2)
        if degree > self.max_degree:
            raise VerifyError(
                "requested completion degree %d exceeds the cap %d"
                % (degree, self.max_degree))
        got = self._systems.get(kind)
        if got is None or got.degree < degree:
            derive = derive_re_rules if kind == "m" else derive_dd_rules
            got = complete(derive(self.sym), degree, rule_cap=self.rule_cap)
            self._systems[kind] = got
        return got

    def reduce_poly(self, x, degree):
        return reduce(x, self.system("m", degree), self.system("d", degree),
                      self.table, strategy=self.strategy)

    def q_points(self):
        cfg = self.sym.q_config
        if cfg.mode == "fixed":
            return [str(cfg.q_value)]
        return ["symbolic"]

    def backend_name(self):
        return self.sym.q_config.describe()


def _sample(entry, poly, cap=3):
    terms = sorted(poly.terms.items())[:cap]
    return {"entry": list(entry),
            "terms": [[w, scalar_to_text(c)] for w, c in terms]}


def _reduce_matrix(ctx, diff, degree, sample_cap=5):
    residuals = 0
    sample = []
    for i, row in enumerate(diff.rows):
        for j, v in enumerate(row):
            if not v:
                continue
            r = ctx.reduce_poly(v, degree)
            if not r.is_zero():
                residuals += 1
                if len(sample) < sample_cap:
                    sample.append(_sample((i, j), r))
    return residuals, sample


def _report(ctx, identity, params, residuals, sample, timings, details=None):
    return VerificationReport(
        identity=identity,
        params=params,
        rmatrix=ctx.sym.name,
        q_points=ctx.q_points(),
        backend=ctx.backend_name(),
        outcome="pass" if residuals == 0 else "fail",
        residual_entries=residuals,
        residual_sample=sample,
        timings_ms=timings,
        details=details or {},
    )


def matrix_copies(sym, kind, k):
    """X_ov1 .. X_ovk on k tensor legs, X_ov(i+1) = R_i X_ovi R_i^(-1)."""
    x = embed_tail_nc(gen_matrix(kind, sym.N), k)
    out = [x]
    for i in range(1, k):
        out.append(copy_up(out[-1], sym.R, sym.R_inv, i))
    return out


def shift_value(cfg, i, variant):
    """Diagonal shift attached to the i-th factor (1-based; i=1 is 0)."""
    if variant == "column":
        return cfg.qpow(i - 1) * cfg.qnum(i - 1)
    if variant == "row":
        return -(cfg.qnum(i - 1) * cfg.qpow(1 - i))
    raise VerifyError("unknown variant %r" % (variant,))


def theorem_sides(sym, k, variant="column", alpha=None):
    """Both sides of the factorization identity, unreduced.

    LHS: P X1 (X2 + s2 I) ... (Xk + sk I) P with X = MD and P the rank-k
    projector; RHS: q^(k(k-1)) (column) or q^(-k(k-1)) (row) times
    P M1 ... Mk Dk ... D1.  alpha, when given, replaces the final shift.
    """
    if k < 1:
        raise VerifyError("k must be positive")
    cfg = sym.q_config
    proj = sym.antisym(k) if variant == "column" else sym.ssym(k)
    mcop = matrix_copies(sym, "m", k)
    dcop = matrix_copies(sym, "d", k)
    lcop = [mat_mul(a, b) for a, b in zip(mcop, dcop)]

    lhs = scalar_mat_mul(proj, lcop[0])
    for i in range(2, k + 1):
        s = shift_value(cfg, i, variant)
        if alpha is not None and i == k:
            s = alpha
        lhs = mat_mul(lhs, lcop[i - 1].shifted(s))
    lhs = mat_scalar_mul(lhs, proj)

    chain = mcop[0]
    for x in mcop[1:]:
        chain = mat_mul(chain, x)
    for x in reversed(dcop):
        chain = mat_mul(chain, x)
    sign = 1 if variant == "column" else -1
    rhs = scalar_mat_mul(proj, chain).scale(cfg.qpow(sign * k * (k - 1)))
    return lhs, rhs


def verify_matrix_identity(ctx, k, variant="column", alpha=None,
                           identity=None):
    """Entrywise reduction of LHS - RHS of the factorization identity."""
    sym = ctx.sym
    t0 = time.perf_counter()
    lhs, rhs = theorem_sides(sym, k, variant, alpha)
    t1 = time.perf_counter()
    residuals, sample = _reduce_matrix(ctx, lhs - rhs, k)
    t2 = time.perf_counter()
    name = identity or ("th" if variant == "column" else "th-s")
    params = {"N": sym.N, "k": k, "variant": variant}
    if alpha is not None:
        params["alpha"] = scalar_to_text(alpha)
    return _report(ctx, name, params, residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def verify_traced(ctx, k, variant="column"):
    """R-trace over all k legs of both sides, then one scalar reduction."""
    sym = ctx.sym
    t0 = time.perf_counter()
    lhs, rhs = theorem_sides(sym, k, variant)
    legs = range(1, k + 1)
    tl = r_trace_nc(lhs, legs, sym.c_matrix)
    tr = r_trace_nc(rhs, legs, sym.c_matrix)
    t1 = time.perf_counter()
    res = ctx.reduce_poly(tl - tr, k)
    t2 = time.perf_counter()
    residuals = 0 if res.is_zero() else 1
    sample = [] if res.is_zero() else [_sample(("trace",), res)]
    name = "cap-as" if variant == "column" else "cap-s"
    return _report(ctx, name, {"N": sym.N, "k": k, "variant": variant},
                   residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def e_k(sym, k):
    """Elementary symmetric polynomial of the position matrix: the
    R-trace over k legs of A^(k) M_ov1 ... M_ovk."""
    if k == 0:
        return NCPoly.from_word("", sym.q_config.one())
    chain = None
    for x in matrix_copies(sym, "m", k):
        chain = x if chain is None else mat_mul(chain, x)
    return r_trace_nc(scalar_mat_mul(sym.antisym(k), chain),
                      range(1, k + 1), sym.c_matrix)


def _bra_ket(v, X, u):
    acc = NCPoly.zero()
    for i, vi in enumerate(v):
        if not vi:
            continue
        row = X.rows[i]
        for j, uj in enumerate(u):
            if uj and row[j]:
                acc = acc + (vi * uj) * row[j]
    return acc


def _det_chain(sym, kind):
    m = sym.rank
    copies = matrix_copies(sym, kind, m)
    if kind == "d":
        copies = list(reversed(copies))
    chain = copies[0]
    for x in copies[1:]:
        chain = mat_mul(chain, x)
    return chain


def _det_poly(ctx, kind):
    """Quantum determinant via the weighted-trace form, cross-checked
    against the bra-ket form; the two must agree modulo the ideal."""
    sym = ctx.sym
    m = sym.rank
    chain = _det_chain(sym, kind)
    proj = sym.antisym(m)
    traced = r_trace_nc(scalar_mat_mul(proj, chain), range(1, m + 1),
                        sym.c_matrix) * sym.q_config.qpow(m * m)
    pair = uv_factorize(proj, sym.q_config)
    usual = _bra_ket(pair.v, chain, pair.u)
    gap = ctx.reduce_poly(traced - usual, m)
    if not gap.is_zero():
        raise VerifyError(
            "determinant forms disagree for the %s side: %d residual words"
            % (kind, len(gap.terms)))
    return traced


def det_r(ctx):
    return _det_poly(ctx, "m")


def det_rinv(ctx):
    return _det_poly(ctx, "d")


def verify_determinants(ctx):
    """Form agreement and gauge invariance of both quantum determinants."""
    sym = ctx.sym
    t0 = time.perf_counter()
    details = {}
    residuals = 0
    sample = []
    try:
        dm = det_r(ctx)
        dd = det_rinv(ctx)
        details["forms_agree"] = "pass"
    except VerifyError as e:
        return _report(ctx, "det-forms", {"N": sym.N, "m": sym.rank}, 1,
                       [{"entry": ["forms"], "terms": [[str(e), "1"]]}],
                       {"build": round(1000 * (time.perf_counter() - t0), 3)})
    m = sym.rank
    pair = uv_factorize(sym.antisym(m), sym.q_config)
    lam = sym.q_config.from_fraction(Fraction(5, 3))
    inv_lam = sym.q_config.one() / lam
    chain_m = _det_chain(sym, "m")
    chain_d = _det_chain(sym, "d")
    scaled_u = [x * lam if x else 0 for x in pair.u]
    scaled_v = [x * inv_lam if x else 0 for x in pair.v]
    if _bra_ket(scaled_v, chain_m, scaled_u) != _bra_ket(pair.v, chain_m,
                                                         pair.u):
        residuals += 1
        sample.append({"entry": ["gauge-m"], "terms": []})
    if _bra_ket(scaled_v, chain_d, scaled_u) != _bra_ket(pair.v, chain_d,
                                                         pair.u):
        residuals += 1
        sample.append({"entry": ["gauge-d"], "terms": []})
    details["det_m_words"] = len(dm.terms)
    details["det_d_words"] = len(dd.terms)
    return _report(ctx, "det-forms", {"N": sym.N, "m": m}, residuals, sample,
                   {"build": round(1000 * (time.perf_counter() - t0), 3)},
                   details)


def verify_matr_id(ctx):
    """Projector times the position chain equals the projector times the
    bra-ket scalar, modulo the position ideal."""
    sym = ctx.sym
    m = sym.rank
    t0 = time.perf_counter()
    chain = _det_chain(sym, "m")
    proj = sym.antisym(m)
    pair = uv_factorize(proj, sym.q_config)
    scalar = _bra_ket(pair.v, chain, pair.u)
    lhs = scalar_mat_mul(proj, chain)
    dim = lhs.dim
    rhs = NCMatrix(sym.N, m,
                   [[scalar * proj.rows[i][j] if proj.rows[i][j]
                     else NCPoly.zero() for j in range(dim)]
                    for i in range(dim)])
    t1 = time.perf_counter()
    residuals, sample = _reduce_matrix(ctx, lhs - rhs, m)
    t2 = time.perf_counter()
    return _report(ctx, "matr-id", {"N": sym.N, "m": m}, residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def verify_cap1(ctx):
    """Traced factorization against the product of the two determinants,
    in the printed order; the reversed order is recorded, not asserted."""
    sym = ctx.sym
    m = sym.rank
    cfg = sym.q_config
    t0 = time.perf_counter()
    mcop = matrix_copies(sym, "m", m)
    dcop = matrix_copies(sym, "d", m)
    lcop = [mat_mul(a, b) for a, b in zip(mcop, dcop)]
    lhs_mat = scalar_mat_mul(sym.antisym(m), lcop[0])
    for i in range(2, m + 1):
        lhs_mat = mat_mul(lhs_mat, lcop[i - 1].shifted(
            shift_value(cfg, i, "column")))
    lhs = r_trace_nc(lhs_mat, range(1, m + 1), sym.c_matrix)
    dm = det_r(ctx)
    dd = det_rinv(ctx)
    rhs = (dm * dd) * cfg.qpow(-m)
    t1 = time.perf_counter()
    res = ctx.reduce_poly(lhs - rhs, m)
    reversed_res = ctx.reduce_poly(lhs - (dd * dm) * cfg.qpow(-m), m)
    t2 = time.perf_counter()
    residuals = 0 if res.is_zero() else 1
    sample = [] if res.is_zero() else [_sample(("trace",), res)]
    details = {"reversed_order": "pass" if reversed_res.is_zero() else "fail"}
    return _report(ctx, "cap1", {"N": sym.N, "m": m}, residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)}, details)


def verify_mre(ctx):
    """Quadratic-minus-linear relation satisfied by the composite matrix:
    R X1 R X1 - X1 R X1 R = R X1 - X1 R for X = MD."""
    sym = ctx.sym
    N = sym.N
    t0 = time.perf_counter()
    m1 = embed_tail_nc(gen_matrix("m", N), 2)
    d1 = embed_tail_nc(gen_matrix("d", N), 2)
    l1 = mat_mul(m1, d1)
    R = sym.R
    rl = scalar_mat_mul(R, l1)
    lr = mat_scalar_mul(l1, R)
    lhs = mat_mul(mat_scalar_mul(rl, R), l1) - mat_scalar_mul(
        mat_mul(lr, l1), R)
    t1 = time.perf_counter()
    residuals, sample = _reduce_matrix(ctx, lhs - (rl - lr), 2)
    t2 = time.perf_counter()
    return _report(ctx, "mre", {"N": N}, residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def verify_re_ideal(ctx):
    """The derivative generators preserve the position ideal: moving D1
    across a quadratic relation multiplies it by a braiding chain."""
    sym = ctx.sym
    N = sym.N
    t0 = time.perf_counter()
    mcop = matrix_copies(sym, "m", 3)
    d1 = embed_tail_nc(gen_matrix("d", N), 3)
    r2 = embed(sym.R, 2, 3)
    pair = mat_mul(mcop[1], mcop[2])
    y = scalar_mat_mul(r2, pair) - mat_scalar_mul(pair, r2)
    r1i = embed(sym.R_inv, 1, 3)
    r2i = embed(sym.R_inv, 2, 3)
    tail = r1i * r2i * r2i * r1i
    lhs = mat_mul(d1, y)
    rhs = mat_scalar_mul(mat_mul(y, d1), tail)
    t1 = time.perf_counter()
    residuals, sample = _reduce_matrix(ctx, lhs - rhs, 3)
    t2 = time.perf_counter()
    return _report(ctx, "re-ideal", {"N": N}, residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def verify_h_copy(ctx, p):
    """Higher-copy form of the position relations on p+1 legs."""
    sym = ctx.sym
    t0 = time.perf_counter()
    legs = p + 1
    mcop = matrix_copies(sym, "m", legs)
    rp = embed(sym.R, p, legs)
    pair = mat_mul(mcop[p - 1], mcop[p])
    diff = scalar_mat_mul(rp, pair) - mat_scalar_mul(pair, rp)
    t1 = time.perf_counter()
    residuals, sample = _reduce_matrix(ctx, diff, 2)
    t2 = time.perf_counter()
    return _report(ctx, "h-copy", {"N": sym.N, "p": p}, residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def verify_consum(ctx, k):
    """Eigenvalue absorption of the braiding by both projectors."""
    sym = ctx.sym
    cfg = sym.q_config
    t0 = time.perf_counter()
    a = sym.antisym(k)
    s = sym.ssym(k)
    bad = []
    for i in range(1, k):
        r = embed(sym.R, i, k)
        ri = embed(sym.R_inv, i, k)
        checks = [
            ("A*R", a * r, a.scale(-(cfg.qpow(-1)))),
            ("R*A", r * a, a.scale(-(cfg.qpow(-1)))),
            ("A*Rinv", a * ri, a.scale(-(cfg.q()))),
            ("S*R", s * r, s.scale(cfg.q())),
            ("S*Rinv", s * ri, s.scale(cfg.qpow(-1))),
        ]
        for label, got, want in checks:
            if got != want:
                bad.append({"entry": [label, i], "terms": []})
    t1 = time.perf_counter()
    return _report(ctx, "consum", {"N": sym.N, "k": k}, len(bad), bad,
                   {"build": round(1000 * (t1 - t0), 3)})


def _r_chain(sym, legs, seq, inverse):
    out = QMatrix.identity(sym.N, legs)
    base = sym.R_inv if inverse else sym.R
    for i in seq:
        out = out * embed(base, i, legs)
    return out


def verify_exchange_general(ctx, p, k):
    """Commutation of a derivative copy across a higher composite copy:
    D_ovp L_ovk = L_ovk D_ovp C2 + D_ovp C1 with braiding chains C1, C2."""
    sym = ctx.sym
    if not 1 <= p < k:
        raise VerifyError("need 1 <= p < k")
    t0 = time.perf_counter()
    legs = k
    dcop = matrix_copies(sym, "d", legs)
    m1 = embed_tail_nc(gen_matrix("m", sym.N), legs)
    l1 = mat_mul(m1, embed_tail_nc(gen_matrix("d", sym.N), legs))
    lk = l1
    for i in range(1, k):
        lk = copy_up(lk, sym.R, sym.R_inv, i)
    dp = dcop[p - 1]
    down = _r_chain(sym, legs, range(k - 1, p, -1), inverse=False)
    up = _r_chain(sym, legs, range(p + 1, k), inverse=True)
    rp_inv = embed(sym.R_inv, p, legs)
    c2 = down * rp_inv * rp_inv * up
    c1 = down * rp_inv * up
    lhs = mat_mul(dp, lk)
    rhs = mat_scalar_mul(mat_mul(lk, dp), c2) + mat_scalar_mul(dp, c1)
    t1 = time.perf_counter()
    residuals, sample = _reduce_matrix(ctx, lhs - rhs, 2)
    t2 = time.perf_counter()
    return _report(ctx, "exchange-general", {"N": sym.N, "p": p, "k": k},
                   residuals, sample,
                   {"build": round(1000 * (t1 - t0), 3),
                    "reduction": round(1000 * (t2 - t1), 3)})


def verify_shift_scan(ctx, k, alphas=None):
    """Negative control: every wrong final shift must leave a residual,
    and the correct one must not."""
    cfg = ctx.sym.q_config
    if alphas is None:
        alphas = [cfg.zero(), cfg.one(), cfg.qpow(2)]
    correct = shift_value(cfg, k, "column")
    t0 = time.perf_counter()
    outcomes = []
    ok = True
    for alpha in alphas:
        rep = verify_matrix_identity(ctx, k, "column", alpha=alpha,
                                     identity="shift-scan")
        wrong_killed = rep.passed() and alpha != correct
        outcomes.append({"alpha": scalar_to_text(alpha),
                         "residuals": rep.residual_entries})
        if wrong_killed:
            ok = False
    base = verify_matrix_identity(ctx, k, "column")
    if not base.passed():
        ok = False
    t1 = time.perf_counter()
    residuals = 0 if ok else 1
    return _report(ctx, "shift-scan", {"N": ctx.sym.N, "k": k}, residuals,
                   [], {"total": round(1000 * (t1 - t0), 3)},
                   {"alphas": outcomes,
                    "correct_alpha": scalar_to_text(correct)})


def verify_classical(N):
    """Independent commutative oracle; tries the alternate determinant
    convention before giving up, and reports which one validates."""
    t0 = time.perf_counter()
    staircase = [N - j for j in range(1, N + 1)]
    report = weyl.capelli_check(N)
    convention = "column"
    if not report["holds"]:
        M = weyl.m_matrix(N)
        D = weyl.d_matrix(N)
        rows = weyl.add_diagonal(weyl.mat_product(M, D), staircase)
        transposed = [[rows[j][i] for j in range(N)] for i in range(N)]
        alt = (weyl.column_determinant(transposed)
               - weyl.column_determinant(M) * weyl.column_determinant(D))
        if alt.is_zero():
            convention = "row"
            report["holds"] = True
    t1 = time.perf_counter()
    residuals = 0 if (report["holds"] and report["control_fails"]) else 1
    return VerificationReport(
        identity="classical",
        params={"N": N, "shifts": staircase},
        rmatrix="weyl-oracle",
        q_points=["1"],
        backend="fraction",
        outcome="pass" if residuals == 0 else "fail",
        residual_entries=residuals,
        residual_sample=[],
        timings_ms={"total": round(1000 * (t1 - t0), 3)},
        details={"convention": convention,
                 "control_fails": report["control_fails"]},
    )


def _specialize_to_weyl(poly, N):
    """Commutative image of a normal-ordered polynomial: letter counts
    become exponent vectors.  Defined only at the classical point."""
    out = weyl.WeylElement.zero(N)
    nn = N * N
    for w, c in poly.terms.items():
        v = [0] * nn
        u = [0] * nn
        for ch in w:
            code = ord(ch)
            if ch >= "a":
                u[code - 97] += 1
            else:
                v[code - 65] += 1
        mono = weyl.WeylElement(N, {(tuple(v), tuple(u)): Fraction(1)})
        out = out + mono * Fraction(c)
    return out


def verify_classical_consistency(ctx):
    """At the classical point the engine's traced identity must agree
    with the oracle side by side after commutative specialization."""
    sym = ctx.sym
    N = sym.N
    if sym.q_config.mode != "fixed" or sym.q_config.q_value != 1:
        raise VerifyError("classical consistency requires the q = 1 point")
    t0 = time.perf_counter()
    m = sym.rank
    cfg = sym.q_config
    mcop = matrix_copies(sym, "m", m)
    dcop = matrix_copies(sym, "d", m)
    lcop = [mat_mul(a, b) for a, b in zip(mcop, dcop)]
    lhs_mat = scalar_mat_mul(sym.antisym(m), lcop[0])
    for i in range(2, m + 1):
        lhs_mat = mat_mul(lhs_mat, lcop[i - 1].shifted(
            shift_value(cfg, i, "column")))
    lhs = ctx.reduce_poly(r_trace_nc(lhs_mat, range(1, m + 1), sym.c_matrix),
                          m)
    rhs = ctx.reduce_poly((det_r(ctx) * det_rinv(ctx)) * cfg.qpow(-m), m)

    staircase = [N - j for j in range(1, N + 1)]
    M = weyl.m_matrix(N)
    D = weyl.d_matrix(N)
    oracle_lhs = weyl.column_determinant(
        weyl.add_diagonal(weyl.mat_product(M, D), staircase))
    oracle_rhs = weyl.column_determinant(M) * weyl.column_determinant(D)
    t1 = time.perf_counter()

    gap_l = _specialize_to_weyl(lhs, N) - oracle_lhs
    gap_r = _specialize_to_weyl(rhs, N) - oracle_rhs
    residuals = (0 if gap_l.is_zero() else 1) + (0 if gap_r.is_zero() else 1)
    sample = []
    if not gap_l.is_zero():
        sample.append({"entry": ["lhs-vs-oracle"],
                       "terms": [["monomials", str(len(gap_l.terms))]]})
    if not gap_r.is_zero():
        sample.append({"entry": ["rhs-vs-oracle"],
                       "terms": [["monomials", str(len(gap_r.terms))]]})
    return _report(ctx, "classical-consistency", {"N": N, "m": m},
                   residuals, sample,
                   {"total": round(1000 * (t1 - t0), 3)})


def _height_points(count):
    """Positive rationals other than 1 in increasing numerator+denominator
    order; denominators and numerators stay coprime."""
    from math import gcd
    out = []
    h = 3
    while len(out) < count:
        for num in range(1, h):
            den = h - num
            if num != den and gcd(num, den) == 1:
                out.append(Fraction(num, den))
                if len(out) == count:
                    break
        h += 1
    return out


def _ratq_exponent_interval(value):
    if isinstance(value, int):
        return (0, 0, 0, 0)
    if not isinstance(value, RatQ):
        raise VerifyError("rigor mode needs the symbolic backend")
    if value.num.is_zero():
        return (0, 0, 0, 0)
    return (value.num.min_exp, value.num.max_exp,
            value.den.min_exp, value.den.max_exp)


def rigor_bound(sym, k, variant="column"):
    """Conservative q-degree bound for every residual coefficient of the
    factorization identity.

    Both sides are reduced symbolically and every normal-form coefficient
    is inspected as a ratio of Laurent polynomials.  The difference of
    two ratios a/b - c/d has numerator a*d - c*b, so the bound for a word
    is the exponent span of the union interval of both cross products.
    The residual therefore has at most bound+1 nonzero coefficients, and
    vanishing at bound+1 distinct positive points forces it to vanish
    identically.
    """
    if sym.q_config.mode != "symbolic":
        raise VerifyError("rigor bound requires the symbolic backend")
    ctx = RewriteContext(sym)
    lhs, rhs = theorem_sides(sym, k, variant)
    bound = 0
    for i in range(lhs.dim):
        for j in range(lhs.dim):
            nf_l = ctx.reduce_poly(lhs.rows[i][j], k)
            nf_r = ctx.reduce_poly(rhs.rows[i][j], k)
            words = set(nf_l.terms) | set(nf_r.terms)
            for w in words:
                ln, lx, ld_n, ld_x = _ratq_exponent_interval(
                    nf_l.terms.get(w, 0))
                rn, rx, rd_n, rd_x = _ratq_exponent_interval(
                    nf_r.terms.get(w, 0))
                lo = min(ln + rd_n, rn + ld_n)
                hi = max(lx + rd_x, rx + ld_x)
                bound = max(bound, hi - lo)
    return bound


_POINT_JOB = {}


def _point_worker(args):
    pt, k, variant = args
    sym = _POINT_JOB["builder"](pt)
    rep = verify_matrix_identity(RewriteContext(sym), k, variant)
    return (str(pt), rep.passed())


def verify_rigor(sym_builder, k, variant="column", extra_points=0, jobs=1):
    """Point-evaluation proof of the factorization identity.

    sym_builder(cfg_or_q) must return the symmetry at a symbolic or fixed
    q.  The residual's coefficient span is bounded symbolically, then the
    identity is checked at bound+1 distinct positive rational points; a
    Laurent polynomial with that span vanishing at that many nonzero
    points is identically zero.  jobs > 1 fans the points out over forked
    workers; results are merged in point order either way.
    """
    t0 = time.perf_counter()
    symbolic = sym_builder(None)
    bound = rigor_bound(symbolic, k, variant)
    points = _height_points(bound + 1 + extra_points)
    t1 = time.perf_counter()
    work = [(pt, k, variant) for pt in points]
    if jobs > 1:
        import multiprocessing

        _POINT_JOB["builder"] = sym_builder
        try:
            with multiprocessing.get_context("fork").Pool(jobs) as pool:
                outcomes = pool.map(_point_worker, work)
        finally:
            _POINT_JOB.clear()
    else:
        _POINT_JOB["builder"] = sym_builder
        try:
            outcomes = [_point_worker(w) for w in work]
        finally:
            _POINT_JOB.clear()
    failures = [pt for pt, good in outcomes if not good]
    t2 = time.perf_counter()
    residuals = len(failures)
    return VerificationReport(
        identity="rigor",
        params={"N": symbolic.N, "k": k, "variant": variant},
        rmatrix=symbolic.name,
        q_points=[str(p) for p in points],
        backend="multi-point",
        outcome="pass" if residuals == 0 else "fail",
        residual_entries=residuals,
        residual_sample=[{"entry": ["q", p], "terms": []} for p in failures],
        timings_ms={"bound": round(1000 * (t1 - t0), 3),
                    "points": round(1000 * (t2 - t1), 3)},
        details={"degree_bound": bound, "points_checked": len(points)},
    )
