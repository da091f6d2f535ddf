import random
from fractions import Fraction

import pytest

from qcapelli.qlinalg import (
    FactorError,
    QMatrix,
    RankError,
    antisymmetrizer,
    check_braid,
    check_hecke,
    embed,
    embed_tail,
    matrix_inverse,
    matrix_rank,
    partial_trace,
    r_trace,
    rank_of,
    skew_inverse,
    symmetrizer,
    uv_factorize,
)
from qcapelli.rcatalog import dj, flip
from qcapelli.scalar import QConfig, parse_scalar, scalar_to_text


def rand_qmatrix(rng, N, p, density=0.6):
    out = QMatrix.zeros(N, p)
    dim = N ** p
    for i in range(dim):
        for j in range(dim):
            if rng.random() < density:
                out.rows[i][j] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return out


def test_embed_is_multiplicative():
    rng = random.Random(11)
    for _ in range(10):
        A = rand_qmatrix(rng, 2, 2)
        B = rand_qmatrix(rng, 2, 2)
        for i in (1, 2):
            assert embed(A * B, i, 3) == embed(A, i, 3) * embed(B, i, 3)
        assert embed_tail(A * B, 3) == embed_tail(A, 3) * embed_tail(B, 3)
    assert embed(QMatrix.identity(2, 2), 1, 3) == QMatrix.identity(2, 3)


def test_embed_disjoint_legs_commute():
    rng = random.Random(12)
    A = rand_qmatrix(rng, 2, 2)
    B = rand_qmatrix(rng, 2, 2)
    assert embed(A, 1, 4) * embed(B, 3, 4) == embed(B, 3, 4) * embed(A, 1, 4)


def test_partial_trace_factorizes_disjoint_products():
    rng = random.Random(13)
    A = rand_qmatrix(rng, 2, 1)
    B = rand_qmatrix(rng, 2, 1)
    W = rand_qmatrix(rng, 2, 1)
    # X = A on leg 1 times B on leg 2
    X = QMatrix.zeros(2, 2)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    X.rows[a * 2 + b][c * 2 + d] = A.rows[a][c] * B.rows[b][d]
    t2 = partial_trace(X, 2, W)
    scale = partial_trace(B, 1, W)
    assert t2 == A.scale(scale)
    full = partial_trace(t2, 1, W)
    assert full == partial_trace(A, 1, W) * scale


def test_braid_and_hecke_checks():
    cfg = QConfig.symbolic()
    assert check_braid(dj(2, cfg).R)
    f = flip(3)
    assert check_braid(f.R)
    assert check_hecke(f.R, f.q_config)
    one = QMatrix(1, 2, [[QConfig.fixed(Fraction(3, 5)).qpow(1)]])
    assert check_braid(one)
    assert check_hecke(one, QConfig.fixed(Fraction(3, 5)))
    rng = random.Random(14)
    bad = rand_qmatrix(rng, 2, 2)
    assert not check_braid(bad)


def test_skew_inverse_values_and_round_trip():
    s1 = dj(1)
    assert scalar_to_text(s1.skew.psi.rows[0][0]) == "q^(-1)"
    assert scalar_to_text(s1.c_matrix.rows[0][0]) == "q^(-1)"
    s2 = dj(2)
    cfg = s2.q_config
    expect = [[cfg.qpow(-1), 0], [0, cfg.qpow(-3)]]
    assert s2.c_matrix.rows == expect
    # round trip: Tr_2(R_12 psi_23) = P_13
    N = 2
    r12 = embed(s2.R, 1, 3)
    psi23 = embed(s2.skew.psi, 2, 3)
    traced = partial_trace(r12 * psi23, 2)
    p13 = QMatrix.zeros(N, 2)
    for a in range(N):
        for b in range(N):
            p13.rows[a * N + b][b * N + a] = 1
    assert traced == p13
    f = flip(2)
    assert f.c_matrix == QMatrix.identity(2, 1)
    assert f.c_matrix.trace() == 2


def test_symmetrizer_tower_properties():
    for sym in (dj(2), flip(2), dj(3, QConfig.fixed(Fraction(3, 5)))):
        R, cfg = sym.R, sym.q_config
        for k in range(1, sym.rank + 2):
            A = antisymmetrizer(R, k, cfg)
            S = symmetrizer(R, k, cfg)
            assert A * A == A
            assert S * S == S
            if k > 1:
                a_prev = embed_tail(antisymmetrizer(R, k - 1, cfg), k)
                assert A == A * a_prev
                assert A == a_prev * A
                rinv = matrix_inverse(R)
                for i in range(1, k):
                    ri = embed(R, i, k)
                    rii = embed(rinv, i, k)
                    assert A * ri == A.scale(-cfg.qpow(-1))
                    assert ri * A == A.scale(-cfg.qpow(-1))
                    assert A * rii == A.scale(-cfg.qpow(1))
                    s_emb = symmetrizer(R, k, cfg)
                    assert s_emb * ri == s_emb.scale(cfg.qpow(1))
                    assert ri * s_emb == s_emb.scale(cfg.qpow(1))
                    assert s_emb * rii == s_emb.scale(cfg.qpow(-1))


def test_antisymmetrizer_explicit_dj2():
    sym = dj(2)
    cfg = sym.q_config
    q = cfg.qpow(1)
    inv2 = 1 / cfg.qnum(2)
    expect = QMatrix.zeros(2, 2)
    expect.rows[1][1] = cfg.qpow(-1) * inv2
    expect.rows[1][2] = -inv2
    expect.rows[2][1] = -inv2
    expect.rows[2][2] = q * inv2
    assert sym.antisym(2) == expect


def test_trace_normalization():
    for sym in (dj(2), dj(3, QConfig.fixed(Fraction(3, 5))), flip(2), flip(3)):
        m = sym.rank
        top = sym.antisym(m)
        assert sym.r_trace(top, range(1, m + 1)) == sym.q_config.qpow(-m * m)


def test_r_trace_of_identity_is_trace_of_weight():
    sym = dj(2)
    val = sym.r_trace(QMatrix.identity(2, 1), [1])
    assert val == sym.c_matrix.trace()


def test_rank_detection():
    cfg = QConfig.fixed(Fraction(3, 5))
    for N in (1, 2, 3):
        rep = rank_of(dj(N, cfg).R, cfg)
        assert rep.rank == N
        assert rep.dims[-1] == 0
        assert rep.dims[-2] == 1
    with pytest.raises(RankError):
        rank_of(dj(3, cfg).R, cfg, cap=2)


def test_matrix_inverse_and_rank():
    rng = random.Random(15)
    for _ in range(5):
        M = rand_qmatrix(rng, 2, 2, density=0.9)
        if matrix_rank(M) < M.dim:
            continue
        assert M * matrix_inverse(M) == QMatrix.identity(2, 2)
    assert matrix_rank(QMatrix.zeros(2, 2)) == 0
    assert matrix_rank(QMatrix.identity(2, 2)) == 4


def test_uv_factorize_gauge_and_errors():
    sym = dj(2)
    pair = uv_factorize(sym.antisym(2), sym.q_config)
    nz = [x for x in pair.v if x]
    assert nz[0] == 1
    pairing = sum((a * b for a, b in zip(pair.v, pair.u)), sym.q_config.zero())
    assert pairing == 1
    A = sym.antisym(2)
    for i in range(4):
        for j in range(4):
            expect = pair.u[i] * pair.v[j] if (pair.u[i] and pair.v[j]) else 0
            assert A.rows[i][j] == expect
    with pytest.raises(FactorError):
        uv_factorize(QMatrix.identity(2, 1), sym.q_config)


def test_uv_pair_matches_hand_value():
    sym = dj(2)
    cfg = sym.q_config
    pair = uv_factorize(sym.antisym(2), cfg)
    q = cfg.qpow(1)
    assert pair.v == [0, cfg.one(), -q, 0]
    inv2 = 1 / cfg.qnum(2)
    assert pair.u == [0, cfg.qpow(-1) * inv2, -inv2, 0]
