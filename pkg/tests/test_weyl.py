import random
from fractions import Fraction

import pytest

from qcapelli.weyl import (
    WeylElement,
    WeylError,
    add_diagonal,
    capelli_check,
    capelli_residual,
    column_determinant,
    d_matrix,
    m_matrix,
    mat_product,
)


def test_generator_commutators():
    N = 2
    for i in range(1, 3):
        for j in range(1, 3):
            for k in range(1, 3):
                for s in range(1, 3):
                    d = WeylElement.d_gen(i, j, N)
                    m = WeylElement.m_gen(k, s, N)
                    comm = d * m - m * d
                    want = Fraction(1 if (i == s and k == j) else 0)
                    assert comm == want


def test_same_kind_generators_commute():
    rng = random.Random(9)
    N = 3
    for _ in range(20):
        i, j, k, s = (rng.randint(1, N) for _ in range(4))
        a = WeylElement.m_gen(i, j, N)
        b = WeylElement.m_gen(k, s, N)
        assert a * b == b * a
        x = WeylElement.d_gen(i, j, N)
        y = WeylElement.d_gen(k, s, N)
        assert x * y == y * x


def rand_element(rng, N, size=3):
    out = WeylElement.zero(N)
    for _ in range(size):
        factor = WeylElement.constant(N, Fraction(rng.randint(-3, 3)))
        for _ in range(rng.randint(0, 3)):
            i, j = rng.randint(1, N), rng.randint(1, N)
            gen = (WeylElement.m_gen if rng.random() < 0.5
                   else WeylElement.d_gen)
            factor = factor * gen(i, j, N)
        out = out + factor
    return out


def test_ring_axioms():
    rng = random.Random(42)
    N = 2
    for _ in range(12):
        a = rand_element(rng, N)
        b = rand_element(rng, N)
        c = rand_element(rng, N)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a + b == b + a


def test_power_rule():
    N = 2
    m = WeylElement.m_gen(1, 1, N)
    d = WeylElement.d_gen(1, 1, N)
    cube = m * m * m
    assert d * cube == cube * d + 3 * (m * m)


def test_second_derivative_explicit():
    N = 2
    m = WeylElement.m_gen(1, 1, N)
    d = WeylElement.d_gen(1, 1, N)
    cube = m * m * m
    want = cube * d * d + 6 * (m * m) * d + 6 * m
    assert (d * d) * cube == want


def test_column_determinant_on_constants():
    N = 2
    rows = [[WeylElement.constant(2, Fraction(a)) for a in row]
            for row in ((3, 5), (7, 11))]
    assert column_determinant(rows) == Fraction(3 * 11 - 5 * 7)


def test_column_determinant_order_sensitivity():
    # entries that fail to commute make the column order observable
    N = 2
    m = WeylElement.m_gen(1, 1, N)
    d = WeylElement.d_gen(1, 1, N)
    one = WeylElement.constant(N, 1)
    zero = WeylElement.zero(N)
    a = [[d, one], [zero, m]]
    b = [[m, one], [zero, d]]
    assert column_determinant(a) == d * m
    assert column_determinant(b) == m * d
    assert column_determinant(a) != column_determinant(b)


def test_polarization_operators_satisfy_gl_relations():
    N = 2
    E = mat_product(m_matrix(N), d_matrix(N))
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for e in range(N):
                    comm = E[a][b] * E[c][e] - E[c][e] * E[a][b]
                    want = WeylElement.zero(N)
                    if b == c:
                        want = want + E[a][e]
                    if e == a:
                        want = want - E[c][b]
                    assert comm == want


def test_capelli_factorization():
    for N in (1, 2, 3):
        report = capelli_check(N)
        assert report["holds"]
        assert report["control_fails"]
        assert report["shifts"] == list(range(N - 1, -1, -1))


def test_capelli_needs_the_exact_staircase():
    assert capelli_residual(2, [1, 0]).is_zero()
    assert not capelli_residual(2, [0, 1]).is_zero()
    assert not capelli_residual(2, [2, 0]).is_zero()
    assert not capelli_residual(3, [2, 1, 1]).is_zero()


def test_error_paths():
    with pytest.raises(WeylError):
        WeylElement.m_gen(0, 1, 2)
    with pytest.raises(WeylError):
        WeylElement.m_gen(1, 1, 2) + WeylElement.m_gen(1, 1, 3)
    with pytest.raises(WeylError):
        add_diagonal(m_matrix(2), [1])
