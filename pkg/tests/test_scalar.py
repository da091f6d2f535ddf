import random
from fractions import Fraction

import pytest

from qcapelli.scalar import (
    BackendMismatch,
    LaurentPoly,
    PoleError,
    QConfig,
    RatQ,
    ScalarParseError,
    ConfigError,
    add,
    backend_of,
    eval_at,
    inv,
    is_zero,
    mul,
    parse_scalar,
    qnum,
    scalar_to_text,
)


def rand_fraction(rng, height=20):
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def rand_ratq(rng):
    num = LaurentPoly(rng.randint(-3, 3),
                      [rand_fraction(rng, 4) for _ in range(rng.randint(1, 4))])
    den = LaurentPoly(0, [Fraction(rng.randint(1, 3))] +
                      [rand_fraction(rng, 3) for _ in range(rng.randint(0, 3))])
    if den.is_zero():
        den = LaurentPoly.const(1)
    return RatQ(num, den)


def test_field_axioms_fixed():
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rand_fraction(rng) for _ in range(3))
        assert add(a, b) == add(b, a)
        assert mul(a, mul(b, c)) == mul(mul(a, b), c)
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        if not is_zero(a):
            assert mul(a, inv(a)) == 1


def test_field_axioms_symbolic():
    rng = random.Random(2)
    for _ in range(60):
        a, b, c = (rand_ratq(rng) for _ in range(3))
        assert add(a, b) == add(b, a)
        assert mul(a, mul(b, c)) == mul(mul(a, b), c)
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        if not is_zero(a):
            assert mul(a, inv(a)) == RatQ(1)


def test_canonical_form_is_unique():
    rng = random.Random(3)
    for _ in range(60):
        a = rand_ratq(rng)
        g = rand_ratq(rng)
        if is_zero(g):
            continue
        b = RatQ(a.num * g.num, a.den * g.num)  # multiply num and den by same poly
        assert a == b
        assert hash(a) == hash(b)
    # denominator is monic with nonzero constant term, lowest exponent 0
    s = RatQ(LaurentPoly.q_power(3), LaurentPoly(1, [Fraction(2), Fraction(2)]))
    assert s.den.min_exp == 0
    assert s.den.coeffs[-1] == 1
    assert s.den.coeffs[0] != 0
    z = RatQ(0)
    assert z.num.is_zero() and z.den == LaurentPoly.const(1)


def test_symbolic_ops_commute_with_evaluation():
    rng = random.Random(4)
    points = [Fraction(2), Fraction(3, 5), Fraction(7, 2)]
    for _ in range(40):
        a, b = rand_ratq(rng), rand_ratq(rng)
        for q0 in points:
            try:
                va, vb = a.eval_at(q0), b.eval_at(q0)
                assert (a + b).eval_at(q0) == va + vb
                assert (a * b).eval_at(q0) == va * vb
            except PoleError:
                continue


def test_qnum_basics():
    sym = QConfig.symbolic()
    fx = QConfig.fixed(Fraction(3, 5))
    assert is_zero(qnum(0, sym))
    assert qnum(1, sym) == RatQ(1)
    assert qnum(2, sym) == parse_scalar("q + q^(-1)", sym)
    assert qnum(3, sym) == parse_scalar("q^2 + 1 + q^(-2)", sym)
    for k in range(7):
        assert eval_at(qnum(k, sym), Fraction(3, 5)) == qnum(k, fx)
    # palindromic under q -> 1/q
    for k in range(1, 11):
        n = qnum(k, sym)
        assert n.num.reciprocal_q() == n.num
    # at q = 1 the q-integer is the ordinary integer
    one = QConfig.fixed(1, allow_unit=True)
    for k in range(9):
        assert qnum(k, one) == k


def test_qnum_product_identity():
    # (k)_q * (q - q^(-1)) telescopes to q^k - q^(-k)
    sym = QConfig.symbolic()
    q = sym.q()
    for k in range(1, 9):
        lhs = qnum(k, sym) * (q - q ** (-1))
        assert lhs == q ** k - q ** (-k)


def test_parser_round_trip_and_cases():
    sym = QConfig.symbolic()
    q = sym.q()
    assert parse_scalar("q - q^(-1)", sym) == q - q ** (-1)
    assert is_zero(parse_scalar("0", sym))
    assert parse_scalar("(q^2 - 1)/(q - 1)", sym) == q + 1
    assert parse_scalar("2*q^3 - 7/3", sym) == 2 * q ** 3 - RatQ(Fraction(7, 3))
    fx = QConfig.fixed(Fraction(3, 5))
    assert parse_scalar("q - q^(-1)", fx) == Fraction(3, 5) - Fraction(5, 3)
    assert parse_scalar("-q^2", fx) == -Fraction(9, 25)
    rng = random.Random(5)
    for _ in range(60):
        s = rand_ratq(rng)
        assert parse_scalar(scalar_to_text(s), sym) == s
    for _ in range(40):
        f = rand_fraction(rng)
        assert parse_scalar(scalar_to_text(f), fx) == f


def test_parser_errors_carry_position():
    sym = QConfig.symbolic()
    with pytest.raises(ScalarParseError):
        parse_scalar("q +", sym)
    with pytest.raises(ScalarParseError):
        parse_scalar("q^-1", sym)  # negative exponent must be parenthesized
    with pytest.raises(ScalarParseError):
        parse_scalar("(q", sym)
    with pytest.raises(ScalarParseError):
        parse_scalar("q q", sym)
    try:
        parse_scalar("1 + %", sym)
    except ScalarParseError as e:
        assert e.position == 4


def test_pole_and_zero_division():
    sym = QConfig.symbolic()
    s = parse_scalar("1/(q - 1)", sym)
    with pytest.raises(PoleError):
        eval_at(s, 1)
    assert eval_at(s, 2) == 1
    with pytest.raises(ZeroDivisionError):
        inv(RatQ(0))
    with pytest.raises(ZeroDivisionError):
        parse_scalar("1/0", sym)
    with pytest.raises(ZeroDivisionError):
        parse_scalar("1/(q - q)", sym)


def test_backend_mismatch_raises():
    sym = QConfig.symbolic()
    with pytest.raises(BackendMismatch):
        add(Fraction(1, 2), sym.q())
    with pytest.raises(BackendMismatch):
        mul(sym.q(), Fraction(2))
    # plain ints are backend-neutral constants
    assert add(1, sym.q()) == sym.q() + 1
    assert add(1, Fraction(1, 2)) == Fraction(3, 2)
    assert backend_of(1) == "fixed"
    assert backend_of(sym.q()) == "symbolic"


def test_qconfig_guards():
    with pytest.raises(ConfigError):
        QConfig.fixed(0)
    with pytest.raises(ConfigError):
        QConfig.fixed(1)
    with pytest.raises(ConfigError):
        QConfig.fixed(-1)
    QConfig.fixed(1, allow_unit=True)
    with pytest.raises(ConfigError):
        QConfig("symbolic", q_value=2)


def test_scalar_text_examples():
    sym = QConfig.symbolic()
    assert scalar_to_text(sym.qnum(2)) == "q + q^(-1)"
    assert scalar_to_text(RatQ(0)) == "0"
    assert scalar_to_text(Fraction(-3, 7)) == "-3/7"
    s = RatQ(1) / (sym.q() - 1)
    assert scalar_to_text(s) == "(1)/(q - 1)"
