import random
from fractions import Fraction

import pytest

from qcapelli.ncalg import (
    NCError,
    NCPoly,
    d_char,
    embed_tail_nc,
    gen_matrix,
    m_char,
    mat_mul,
    mat_scalar_mul,
    scalar_mat_mul,
    copy_up,
)
from qcapelli.qlinalg import QMatrix
from qcapelli.rcatalog import dj, flip
from qcapelli.rewrite import (
    BadSpecializationError,
    CapacityError,
    DegreeCapError,
    RewriteError,
    apply_derivative,
    complete,
    derive_dd_rules,
    derive_exchange,
    derive_re_rules,
    exchange_round_trip_ok,
    normal_order,
    reduce,
)
from qcapelli.scalar import QConfig


def m_alphabet(N):
    return [m_char(i, j, N) for i in range(1, N + 1) for j in range(1, N + 1)]


def d_alphabet(N):
    return [d_char(i, j, N) for i in range(1, N + 1) for j in range(1, N + 1)]


def relation_entries(braiding, x1):
    # entries of R X1 R X1 - X1 R X1 R, assembled through the matrix ops
    a = mat_mul(scalar_mat_mul(braiding, mat_scalar_mul(x1, braiding)), x1)
    b = mat_scalar_mul(mat_mul(mat_scalar_mul(x1, braiding), x1), braiding)
    diff = a - b
    return [v for row in diff.rows for v in row if v]


def test_exchange_single_generator_rule():
    sym = dj(1)
    table = derive_exchange(sym)
    q = sym.q_config
    assert set(table.rules) == {"aA"}
    pairs, const = table.rules["aA"]
    assert pairs == (("Aa", q.qpow(-2)),)
    assert const == q.qpow(-1)


def test_exchange_classical_limit_is_leibniz():
    sym = flip(2)
    table = derive_exchange(sym)
    one = Fraction(1)
    for i in range(1, 3):
        for j in range(1, 3):
            for u in range(1, 3):
                for v in range(1, 3):
                    key = d_char(i, j, 2) + m_char(u, v, 2)
                    pairs, const = table.rules[key]
                    assert pairs == ((m_char(u, v, 2) + d_char(i, j, 2), one),)
                    assert const == (one if (i, j) == (v, u) else 0)


def test_exchange_round_trip():
    for sym in (dj(2), dj(3), flip(2)):
        table = derive_exchange(sym)
        assert len(table.rules) == sym.N ** 4
        assert exchange_round_trip_ok(sym, table)


def test_position_rules_frozen_dj2():
    sym = dj(2)
    q = sym.q_config
    rules = derive_re_rules(sym).rules
    gap = q.one() - q.qpow(-2)
    expected = {
        "BA": {"AB": q.qpow(2)},
        "CA": {"AC": q.qpow(-2)},
        "CB": {"BC": q.one(), "AA": gap, "AD": -gap},
        "DA": {"AD": q.one()},
        "DB": {"BD": q.one(), "AB": gap},
        "DC": {"CD": q.one(), "AC": -(q.qpow(-2) - q.qpow(-4))},
    }
    assert set(rules) == set(expected)
    for lhs, rhs in expected.items():
        assert rules[lhs] == rhs


def test_rule_counts_match_relation_module_rank():
    for sym in (dj(2), dj(3), flip(2)):
        n2 = sym.N ** 2
        want = n2 * (n2 - 1) // 2
        assert len(derive_re_rules(sym).rules) == want
        assert len(derive_dd_rules(sym).rules) == want


def test_completion_yields_flat_dimension_counts():
    sym = dj(2)
    cm = complete(derive_re_rules(sym), 4)
    cd = complete(derive_dd_rules(sym), 4)
    flat = [1, 4, 10, 20, 35]
    assert cm.count_irreducible(4, m_alphabet(2)) == flat
    assert cd.count_irreducible(4, d_alphabet(2)) == flat
    assert len(cm.rules) == 6
    assert cm.stats["input_rules"] == 6


def test_completion_flat_counts_dj3_fixed_q():
    sym = dj(3, QConfig.fixed("3/5"))
    cm = complete(derive_re_rules(sym), 3)
    cd = complete(derive_dd_rules(sym), 3)
    flat = [1, 9, 45, 165]
    assert cm.count_irreducible(3, m_alphabet(3)) == flat
    assert cd.count_irreducible(3, d_alphabet(3)) == flat


def test_completed_systems_kill_their_defining_relations():
    # regression: interreduction once flipped a sign and silently enlarged
    # the derivative-side ideal
    for sym in (dj(2), dj(3, QConfig.fixed("3/5"))):
        m1 = embed_tail_nc(gen_matrix("m", sym.N), 2)
        d1 = embed_tail_nc(gen_matrix("d", sym.N), 2)
        cm = complete(derive_re_rules(sym), 4)
        cd = complete(derive_dd_rules(sym), 4)
        for p in relation_entries(sym.R, m1):
            assert not cm.nf_terms(p.terms)
        for p in relation_entries(sym.R_inv, d1):
            assert not cd.nf_terms(p.terms)


def test_completion_is_deterministic():
    sym = dj(2)
    first = complete(derive_dd_rules(sym), 4)
    second = complete(derive_dd_rules(sym), 4)
    assert first.rules == second.rules
    assert first.stats == second.stats


def test_completion_rule_cap():
    sym = dj(2)
    with pytest.raises(CapacityError):
        complete(derive_dd_rules(sym), 4, rule_cap=3)


def rand_mixed_poly(rng, cfg, N, m_deg, d_deg, terms=4):
    ms = m_alphabet(N)
    ds = d_alphabet(N)
    out = NCPoly.zero()
    for _ in range(terms):
        word = [rng.choice(ms) for _ in range(rng.randint(0, m_deg))]
        word += [rng.choice(ds) for _ in range(rng.randint(0, d_deg))]
        rng.shuffle(word)
        coeff = cfg.from_fraction(Fraction(rng.randint(-3, 3)))
        out = out + NCPoly.from_word("".join(word), coeff)
    return out


def test_normal_order_strategy_independence():
    sym = dj(2)
    table = derive_exchange(sym)
    rng = random.Random(77)
    cfg = sym.q_config
    for _ in range(20):
        x = rand_mixed_poly(rng, cfg, 2, 2, 2)
        x = x * cfg.q() + NCPoly.from_word("", cfg.qpow(-1))
        left = normal_order(x, table, strategy="leftmost")
        right = normal_order(x, table, strategy="rightmost")
        shuffled = normal_order(x, table, strategy="random",
                                rng=random.Random(rng.randint(0, 9999)))
        assert left == right == shuffled
        for w in left.terms:
            assert all(not (w[i] >= "a" > w[i + 1]) for i in range(len(w) - 1))


def test_normal_order_unknown_strategy():
    sym = dj(1)
    table = derive_exchange(sym)
    with pytest.raises(RewriteError):
        normal_order(NCPoly.from_word("aA"), table, strategy="sideways")


def test_reduce_is_a_projection():
    sym = dj(2)
    table = derive_exchange(sym)
    cm = complete(derive_re_rules(sym), 4)
    cd = complete(derive_dd_rules(sym), 4)
    cfg = sym.q_config
    rng = random.Random(101)
    for _ in range(15):
        x = rand_mixed_poly(rng, cfg, 2, 2, 2)
        once = reduce(x, cm, cd, table)
        twice = reduce(once, cm, cd, table)
        assert once == twice
        assert reduce(x - once, cm, cd, table).is_zero()


def test_reduce_constant_on_ideal_translates():
    sym = dj(2)
    table = derive_exchange(sym)
    cm = complete(derive_re_rules(sym), 4)
    cd = complete(derive_dd_rules(sym), 4)
    m1 = embed_tail_nc(gen_matrix("m", 2), 2)
    d1 = embed_tail_nc(gen_matrix("d", 2), 2)
    cfg = sym.q_config
    rng = random.Random(55)
    rel_m = relation_entries(sym.R, m1)
    rel_d = relation_entries(sym.R_inv, d1)
    for _ in range(10):
        x = rand_mixed_poly(rng, cfg, 2, 1, 1, terms=3)
        g = rng.choice(rel_m) * cfg.from_fraction(Fraction(rng.randint(1, 3)))
        h = rng.choice(rel_d)
        shifted = x + g * NCPoly.from_word(rng.choice(d_alphabet(2))) \
            + NCPoly.from_word(rng.choice(m_alphabet(2))) * h
        assert reduce(shifted, cm, cd, table) == reduce(x, cm, cd, table)


def test_reduce_respects_products():
    sym = dj(2)
    table = derive_exchange(sym)
    cm = complete(derive_re_rules(sym), 4)
    cd = complete(derive_dd_rules(sym), 4)
    cfg = sym.q_config
    rng = random.Random(31)
    for _ in range(10):
        a = rand_mixed_poly(rng, cfg, 2, 1, 1, terms=3)
        b = rand_mixed_poly(rng, cfg, 2, 1, 1, terms=3)
        direct = reduce(a * b, cm, cd, table)
        staged = reduce(reduce(a, cm, cd, table) * reduce(b, cm, cd, table),
                        cm, cd, table)
        assert direct == staged


def test_reduce_degree_cap():
    sym = dj(2)
    table = derive_exchange(sym)
    cm = complete(derive_re_rules(sym), 4)
    cd = complete(derive_dd_rules(sym), 4)
    with pytest.raises(DegreeCapError):
        reduce(NCPoly.from_word("AAAAA"), cm, cd, table)


class _CollapsedSymmetry:
    """Scalar multiple of the identity: a Hecke symmetry whose position
    relations all vanish, the degenerate picture a bad q value produces."""

    def __init__(self, q0):
        self.N = 2
        self.q_config = QConfig.fixed(q0)
        qv = self.q_config.from_fraction(Fraction(q0))
        self.R = QMatrix.identity(2, 2).scale(qv)
        self.R_inv = QMatrix.identity(2, 2).scale(self.q_config.one() / qv)

    def rebuild_at(self, probe):
        return dj(2, QConfig.fixed(probe))


def test_bad_specialization_guard():
    with pytest.raises(BadSpecializationError) as err:
        derive_re_rules(_CollapsedSymmetry(Fraction(3, 5)))
    assert "resample q" in str(err.value)


def test_derivative_action_on_second_copy_is_inverse_braiding():
    for sym in (dj(2), flip(2), dj(3, QConfig.fixed("3/5"))):
        N = sym.N
        table = derive_exchange(sym)
        d1 = embed_tail_nc(gen_matrix("d", N), 2)
        m2 = copy_up(embed_tail_nc(gen_matrix("m", N), 2),
                     sym.R, sym.R_inv, 1)
        dim = N * N
        for r in range(dim):
            for c in range(dim):
                acted = NCPoly.zero()
                for k in range(dim):
                    acted = acted + apply_derivative(
                        d1.rows[r][k], m2.rows[k][c], table)
                assert set(acted.terms) <= {""}
                assert acted.constant() == sym.R_inv.rows[r][c]


def test_derivative_action_classical_product_rule():
    sym = flip(2)
    table = derive_exchange(sym)
    a = NCPoly.from_word("a")
    aa = NCPoly.from_word("AA")
    acted = apply_derivative(a, aa, table)
    assert acted == NCPoly.from_word("A", Fraction(2))


def test_derivative_action_domain_checks():
    sym = dj(2)
    table = derive_exchange(sym)
    with pytest.raises(NCError):
        apply_derivative(NCPoly.from_word("A"), NCPoly.from_word("A"), table)
    with pytest.raises(NCError):
        apply_derivative(NCPoly.from_word("a"), NCPoly.from_word("b"), table)
