"""Exact coefficient arithmetic over the deformation parameter q.

Two interchangeable backends:

* fixed: q is a concrete rational; scalars are ``fractions.Fraction``.
* symbolic: scalars are rational functions of q with Laurent-polynomial
  numerators (class ``RatQ``), kept in a canonical form so equality is
  structural.

Plain ints 0 and 1 are accepted anywhere as backend-neutral constants.
Mixing a Fraction with a RatQ raises ``BackendMismatch``.
"""

from __future__ import annotations

from fractions import Fraction


class ScalarError(Exception):
    pass


class BackendMismatch(ScalarError):
    """A fixed-backend scalar met a symbolic-backend scalar."""


class PoleError(ScalarError, ZeroDivisionError):
    """Evaluation point is a root of a denominator."""


class ScalarParseError(ScalarError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class ConfigError(ScalarError):
    pass


def _trim(offset, coeffs):
    # strip zero coefficients from both ends, adjusting the offset
    lo = 0
    hi = len(coeffs)
    while lo < hi and not coeffs[lo]:
        lo += 1
    while hi > lo and not coeffs[hi - 1]:
        hi -= 1
    if lo == hi:
        return 0, ()
    return offset + lo, tuple(coeffs[lo:hi])


class LaurentPoly:
    """Laurent polynomial in q with Fraction coefficients.

    Stored as an exponent offset plus a dense coefficient tuple whose first
    and last entries are nonzero (the zero polynomial is offset 0, empty
    tuple), so equal polynomials are structurally equal.
    """

    __slots__ = ("offset", "coeffs")

    def __init__(self, offset=0, coeffs=()):
        self.offset, self.coeffs = _trim(offset, [Fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, offset, coeffs):
        p = object.__new__(cls)
        p.offset, p.coeffs = _trim(offset, coeffs)
        return p

    @classmethod
    def const(cls, c):
        return cls(0, (Fraction(c),))

    @classmethod
    def q_power(cls, n):
        return cls(n, (Fraction(1),))

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def min_exp(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no exponent range")
        return self.offset

    @property
    def max_exp(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no exponent range")
        return self.offset + len(self.coeffs) - 1

    def shift(self, k):
        if not self.coeffs:
            return self
        return LaurentPoly._raw(self.offset + k, list(self.coeffs))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self.coeffs), other.offset + len(other.coeffs))
        acc = [Fraction(0)] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            acc[self.offset - lo + i] += c
        for i, c in enumerate(other.coeffs):
            acc[other.offset - lo + i] += c
        return LaurentPoly._raw(lo, acc)

    def __neg__(self):
        return LaurentPoly._raw(self.offset, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                return _LZERO
            return LaurentPoly._raw(self.offset, [c * f for c in self.coeffs])
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return _LZERO
        acc = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    acc[i + j] += a * b
        return LaurentPoly._raw(self.offset + other.offset, acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.offset == other.offset and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.offset, self.coeffs))

    def reciprocal_q(self):
        """The polynomial with q replaced by q^(-1)."""
        if not self.coeffs:
            return self
        return LaurentPoly._raw(-(self.offset + len(self.coeffs) - 1),
                                list(reversed(self.coeffs)))

    def eval(self, q0):
        q0 = Fraction(q0)
        if not q0:
            raise PoleError("cannot evaluate a Laurent polynomial at q = 0")
        acc = Fraction(0)
        for i, c in enumerate(self.coeffs):
            if c:
                acc += c * q0 ** (self.offset + i)
        return acc

    def __repr__(self):
        return "LaurentPoly(%r)" % (_poly_text(self),)


_LZERO = LaurentPoly()
_LONE = LaurentPoly.const(1)


def _poly_divmod(a, b):
    # ordinary polynomial division; both operands must have offset >= 0
    assert b.coeffs and b.offset >= 0 and (not a.coeffs or a.offset >= 0)
    ra = [Fraction(0)] * (a.offset + len(a.coeffs)) if a.coeffs else []
    for i, c in enumerate(a.coeffs):
        ra[a.offset + i] = c
    rb = [Fraction(0)] * (b.offset + len(b.coeffs))
    for i, c in enumerate(b.coeffs):
        rb[b.offset + i] = c
    db = len(rb) - 1
    lead = rb[db]
    quot = [Fraction(0)] * max(len(ra) - db, 0)
    while len(ra) - 1 >= db and ra:
        da = len(ra) - 1
        f = ra[da] / lead
        quot[da - db] = f
        for i in range(db + 1):
            ra[da - db + i] -= f * rb[i]
        while ra and not ra[-1]:
            ra.pop()
    return LaurentPoly._raw(0, quot), LaurentPoly._raw(0, ra)


def _poly_gcd(a, b):
    # monic gcd of two ordinary polynomials (offset >= 0), not both zero
    while b.coeffs:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    lc = a.coeffs[-1]
    if lc != 1:
        a = a * (1 / lc)
    return a


class RatQ:
    """Rational function of q in canonical form.

    The denominator is an ordinary polynomial with nonzero constant term,
    monic, and coprime to the numerator (any overall power of q is carried
    by the numerator), so two equal rational functions are structurally
    equal.  Zero is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = LaurentPoly.const(num)
        if den is None:
            den = _LONE
        elif isinstance(den, (int, Fraction)):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if num.is_zero():
            self.num, self.den = _LZERO, _LONE
            return
        a, b = num.min_exp, den.min_exp
        n0, d0 = num.shift(-a), den.shift(-b)
        g = _poly_gcd(n0, d0)
        if g.coeffs and (len(g.coeffs) > 1 or g.coeffs[0] != 1):
            n0, _ = _poly_divmod(n0, g)
            d0, _ = _poly_divmod(d0, g)
        lc = d0.coeffs[-1]
        if lc != 1:
            inv = 1 / lc
            n0 = n0 * inv
            d0 = d0 * inv
        self.num = n0.shift(a - b)
        self.den = d0

    @classmethod
    def q_power(cls, n):
        return cls(LaurentPoly.q_power(n))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def _coerce(self, other):
        if isinstance(other, RatQ):
            return other
        if isinstance(other, int):
            return RatQ(other)
        if isinstance(other, Fraction):
            raise BackendMismatch(
                "cannot combine a fixed-backend Fraction with a symbolic scalar")
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatQ(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = object.__new__(RatQ)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return RatQ(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (RatQ(1) / self) ** (-n)
        acc = RatQ(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, RatQ):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den == _LONE and self.num == LaurentPoly.const(other)
        if isinstance(other, Fraction):
            raise BackendMismatch(
                "cannot compare a fixed-backend Fraction with a symbolic scalar")
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def eval_at(self, q0):
        q0 = Fraction(q0)
        d = self.den.eval(q0) if not self.num.is_zero() else Fraction(1)
        if not d:
            raise PoleError("denominator vanishes at q = %s" % (q0,))
        if self.num.is_zero():
            return Fraction(0)
        return self.num.eval(q0) / d

    def __repr__(self):
        return "RatQ(%r)" % (scalar_to_text(self),)


class QConfig:
    """Chooses the scalar backend and carries the working value of q.

    Fixed mode pins q to a rational outside {0, 1, -1}; the flip symmetry
    is the one construction allowed to set allow_unit and work at q = 1.
    """

    __slots__ = ("mode", "q_value", "allow_unit")

    def __init__(self, mode, q_value=None, allow_unit=False):
        if mode not in ("fixed", "symbolic"):
            raise ConfigError("unknown scalar mode %r" % (mode,))
        if mode == "fixed":
            if q_value is None:
                raise ConfigError("fixed mode needs a rational q")
            q_value = Fraction(q_value)
            if q_value == 0 or q_value == -1 or (q_value == 1 and not allow_unit):
                raise ConfigError("fixed q must avoid 0 and +/-1 (got %s)" % (q_value,))
        else:
            if q_value is not None:
                raise ConfigError("symbolic mode takes no q value")
        self.mode = mode
        self.q_value = q_value
        self.allow_unit = allow_unit

    @classmethod
    def fixed(cls, q, allow_unit=False):
        return cls("fixed", q, allow_unit)

    @classmethod
    def symbolic(cls):
        return cls("symbolic")

    def describe(self):
        if self.mode == "fixed":
            return "fixed(q=%s)" % (self.q_value,)
        return "symbolic"

    def zero(self):
        return Fraction(0) if self.mode == "fixed" else RatQ(0)

    def one(self):
        return Fraction(1) if self.mode == "fixed" else RatQ(1)

    def q(self):
        return self.q_value if self.mode == "fixed" else RatQ.q_power(1)

    def from_fraction(self, c):
        c = Fraction(c)
        return c if self.mode == "fixed" else RatQ(c)

    def qpow(self, n):
        if self.mode == "fixed":
            return self.q_value ** n
        return RatQ.q_power(n)

    def qnum(self, k):
        """The symmetric q-integer q^(k-1) + q^(k-3) + ... + q^(1-k)."""
        if k < 0:
            raise ValueError("qnum needs k >= 0")
        if self.mode == "fixed":
            acc = Fraction(0)
            for i in range(k):
                acc += self.q_value ** (k - 1 - 2 * i)
            return acc
        if k == 0:
            return RatQ(0)
        coeffs = []
        for e in range(1 - k, k):
            coeffs.append(Fraction(1) if (e - (1 - k)) % 2 == 0 else Fraction(0))
        return RatQ(LaurentPoly(1 - k, coeffs))

    def parse(self, text):
        return parse_scalar(text, self)


def backend_of(s):
    if isinstance(s, RatQ):
        return "symbolic"
    if isinstance(s, (Fraction, int)):
        return "fixed"
    raise ScalarError("not a scalar: %r" % (s,))


def _check_pair(a, b):
    ba, bb = backend_of(a), backend_of(b)
    if isinstance(a, int) or isinstance(b, int):
        return
    if ba != bb:
        raise BackendMismatch("cannot combine %s and %s scalars" % (ba, bb))


def add(a, b):
    _check_pair(a, b)
    return a + b


def mul(a, b):
    _check_pair(a, b)
    return a * b


def neg(a):
    return -a


def inv(a):
    if is_zero(a):
        raise ZeroDivisionError("inverse of zero scalar")
    if isinstance(a, RatQ):
        return RatQ(1) / a
    if isinstance(a, int):
        # keep +/-1 backend-neutral so mixed matrices stay pure
        return a if a in (1, -1) else Fraction(1, a)
    return 1 / a


def is_zero(a):
    return not a


def qnum(k, cfg):
    return cfg.qnum(k)


def qpow(n, cfg):
    return cfg.qpow(n)


def eval_at(s, q0):
    """Evaluate a symbolic scalar at a rational q0."""
    if isinstance(s, RatQ):
        return s.eval_at(q0)
    if isinstance(s, (Fraction, int)):
        return Fraction(s)
    raise ScalarError("not a scalar: %r" % (s,))


# --- parsing -------------------------------------------------------------
#
# expr   := term (('+' | '-') term)*
# term   := factor (('*' | '/') factor)*
# factor := '-' factor | atom ('^' exponent)?
# atom   := integer | 'q' | '(' expr ')'
# exponent := integer | '(' '-'? integer ')'
#
# Negative exponents must be parenthesized: q^(-1).


class _Parser:
    def __init__(self, text, cfg):
        self.text = text
        self.cfg = cfg
        self.pos = 0

    def error(self, message):
        raise ScalarParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        if self.pos < len(self.text):
            return self.text[self.pos]
        return ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def expr(self):
        acc = self.term()
        while True:
            if self.take("+"):
                acc = acc + self.term()
            elif self.take("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            if self.take("*"):
                acc = acc * self.factor()
            elif self.take("/"):
                acc = acc / self.factor()
            else:
                return acc

    def factor(self):
        if self.take("-"):
            return -self.factor()
        base = self.atom()
        if self.take("^"):
            return base ** self.exponent()
        return base

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return inner
        if ch == "q":
            self.pos += 1
            return self.cfg.q()
        if ch.isdigit():
            return self.cfg.from_fraction(self.integer())
        self.error("expected a number, 'q', or '('")

    def exponent(self):
        if self.take("("):
            sign = -1 if self.take("-") else 1
            n = self.integer()
            if not self.take(")"):
                self.error("expected ')'")
            return sign * n
        return self.integer()


def parse_scalar(text, cfg):
    p = _Parser(text, cfg)
    value = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        p.error("unexpected trailing input")
    return value


def _frac_text(c):
    return str(c)


def _poly_text(p):
    if p.is_zero():
        return "0"
    parts = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        e = p.offset + i
        if e == 0:
            body = _frac_text(abs(c))
        else:
            head = "q" if e == 1 else ("q^%d" % e if e > 0 else "q^(%d)" % e)
            body = head if abs(c) == 1 else "%s*%s" % (_frac_text(abs(c)), head)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def scalar_to_text(s):
    """Render a scalar in the grammar accepted by parse_scalar."""
    if isinstance(s, (int, Fraction)):
        return str(Fraction(s))
    if isinstance(s, RatQ):
        if s.den == _LONE:
            return _poly_text(s.num)
        return "(%s)/(%s)" % (_poly_text(s.num), _poly_text(s.den))
    raise ScalarError("not a scalar: %r" % (s,))
