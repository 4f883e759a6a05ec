"""
Exact coefficient fields: Q, cyclotomic fields Q(zeta_n) and rational
function fields K(t) over either of those.

Field objects play the role of a FieldSpec.  Their elements are plain
Python values with arithmetic operators:

    Q          -> fractions.Fraction
    Q(zeta_n)  -> CyclotomicNumber
    K(t)       -> RationalFunction

Calling a field coerces ints, Fractions, literals and elements of a
subfield into it.
"""

import re
from fractions import Fraction
from functools import lru_cache

from cychom.errors import DivisionByZero, FieldMismatch, ParseError


# ----------------------------------------------------------------------
# dense univariate polynomials: tuples of coefficients, low degree first,
# no trailing zeros.  ``zero`` is the coefficient field's zero.

def _trim(p, zero):
    p = list(p)
    while p and p[-1] == zero:
        p.pop()
    return tuple(p)


def poly_add(p, q, zero):
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(n)]
    return _trim(out, zero)


def poly_neg(p):
    return tuple(-c for c in p)


def poly_sub(p, q, zero):
    return poly_add(p, poly_neg(q), zero)


def poly_mul(p, q, zero):
    if not p or not q:
        return ()
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == zero:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _trim(out, zero)


def poly_scale(p, c, zero):
    return _trim([a * c for a in p], zero)


def poly_divmod(p, q, zero):
    if not q:
        raise DivisionByZero("polynomial division by zero")
    r = list(p)
    lead = q[-1]
    dq = len(q) - 1
    quot = [zero] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        c = r[-1] / lead
        k = len(r) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            r[k + i] = r[k + i] - c * b
        r = list(_trim(r, zero))
    return _trim(quot, zero), tuple(r)


def poly_monic(p, zero):
    if not p:
        return p
    return poly_scale(p, 1 / p[-1], zero) if p[-1] != 1 else p


def poly_gcd(p, q, zero):
    while q:
        p, q = q, poly_divmod(p, q, zero)[1]
    return poly_monic(p, zero)


def poly_xgcd(p, q, zero, one):
    """Return (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = p, q
    s0, s1 = (one,), ()
    t0, t1 = (), (one,)
    while r1:
        quot, rem = poly_divmod(r0, r1, zero)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(quot, s1, zero), zero)
        t0, t1 = t1, poly_sub(t0, poly_mul(quot, t1, zero), zero)
    if not r0:
        return r0, s0, t0
    inv = 1 / r0[-1]
    return poly_scale(r0, inv, zero), poly_scale(s0, inv, zero), poly_scale(t0, inv, zero)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, low degree first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d.
    """
    if n < 1:
        raise ValueError("cyclotomic order must be positive, got %r" % (n,))
    zero = Fraction(0)
    p = tuple([Fraction(-1)] + [zero] * (n - 1) + [Fraction(1)])
    for d in range(1, n):
        if n % d == 0:
            p, r = poly_divmod(p, cyclotomic_polynomial(d), zero)
            assert not r
    return tuple(Fraction(c) for c in p)


# ----------------------------------------------------------------------
# fields


class Field(object):
    """Common interface; subclasses are immutable and compare by value."""

    name = "?"
    var = None

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        z = self.__dict__.get("_zero")
        if z is None:
            z = self.__dict__["_zero"] = self(0)
        return z

    @property
    def one(self):
        o = self.__dict__.get("_one")
        if o is None:
            o = self.__dict__["_one"] = self(1)
        return o

    def contains(self, x):
        raise NotImplementedError

    def format(self, x):
        raise NotImplementedError

    def parse(self, text):
        return _Parser(self, text).parse()

    def variables(self):
        return {}

    def spec(self):
        """JSON-able description used in files and reports."""
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __str__(self):
        return self.name


class RationalField(Field):
    name = "Q"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, CyclotomicNumber) and x.is_rational():
            return x.rational_part()
        if isinstance(x, RationalFunction) and x.is_constant():
            return self(x.constant_value())
        raise FieldMismatch("cannot coerce %r into Q" % (x,))

    def contains(self, x):
        return isinstance(x, (Fraction, int))

    def format(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return "%d/%d" % (x.numerator, x.denominator)

    def spec(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


class CyclotomicField(Field):
    """Q[z]/Phi_n(z); z is a primitive n-th root of unity."""

    var = "z"

    def __init__(self, order):
        if not isinstance(order, int) or order < 1:
            raise ValueError("cyclotomic order must be a positive integer")
        self.order = order
        self.modulus = cyclotomic_polynomial(order)
        self.degree = len(self.modulus) - 1
        self.name = "Q(zeta_%d)" % order

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self):
        return hash(("cyc", self.order))

    def __call__(self, x):
        if isinstance(x, CyclotomicNumber):
            if x.field != self:
                raise FieldMismatch("%s element used in %s" % (x.field, self))
            return x
        if isinstance(x, (int, Fraction)):
            return CyclotomicNumber(self, (Fraction(x),))
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, RationalFunction) and x.is_constant():
            return self(x.constant_value())
        raise FieldMismatch("cannot coerce %r into %s" % (x, self))

    def contains(self, x):
        return isinstance(x, (int, Fraction)) or (isinstance(x, CyclotomicNumber) and x.field == self)

    def gen(self):
        """The root of unity z."""
        return self.element((Fraction(0), Fraction(1)))

    def element(self, coeffs):
        return CyclotomicNumber(self, coeffs)

    def root_of_unity(self, k):
        """z**k for any integer k."""
        return self.gen() ** (k % self.order)

    def variables(self):
        return {self.var: self.gen()}

    def format(self, x):
        return _format_poly(self(x).coeffs, self.var, QQ.format)

    def spec(self):
        return {"cyclotomic": self.order}


class CyclotomicNumber(object):
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        zero = Fraction(0)
        coeffs = _trim([Fraction(c) for c in coeffs], zero)
        if len(coeffs) > field.degree:
            coeffs = poly_divmod(coeffs, field.modulus, zero)[1]
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def is_rational(self):
        return len(self.coeffs) <= 1

    def rational_part(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.field != self.field:
                raise FieldMismatch("%s vs %s" % (self.field, other.field))
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.field, (other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.field, poly_add(self.coeffs, o.coeffs, Fraction(0)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, poly_neg(self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.field, poly_sub(self.coeffs, o.coeffs, Fraction(0)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.field, [c * other for c in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.field, poly_mul(self.coeffs, o.coeffs, Fraction(0)))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise DivisionByZero("inverse of zero in %s" % self.field)
        zero, one = Fraction(0), Fraction(1)
        g, s, _ = poly_xgcd(self.coeffs, self.field.modulus, zero, one)
        assert g == (one,), "cyclotomic modulus must be irreducible"
        return CyclotomicNumber(self.field, s)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber(self.field, (1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_part() == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash((self.field.order, self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return "CyclotomicNumber(%d, %s)" % (self.field.order, self.field.format(self))

    def __str__(self):
        return self.field.format(self)


class RationalFunctionField(Field):
    """K(var) for K = Q or a cyclotomic field."""

    def __init__(self, base=QQ, var="t"):
        if isinstance(base, RationalFunctionField) or not isinstance(base, Field):
            raise FieldMismatch("rational function fields cannot be nested")
        if not re.match(r"^[A-Za-z]\w*$", var) or var == getattr(base, "var", None):
            raise ValueError("bad variable name %r" % (var,))
        self.base = base
        self.var = var
        self.name = "%s(%s)" % (base.name, var)

    def __eq__(self, other):
        return (isinstance(other, RationalFunctionField)
                and other.base == self.base and other.var == self.var)

    def __hash__(self):
        return hash(("ratfun", self.base, self.var))

    def __call__(self, x):
        if isinstance(x, RationalFunction):
            if x.field != self:
                raise FieldMismatch("%s element used in %s" % (x.field, self))
            return x
        if isinstance(x, str):
            return self.parse(x)
        c = self.base(x)
        return RationalFunction(self, (c,), (self.base.one,))

    def contains(self, x):
        if isinstance(x, RationalFunction):
            return x.field == self
        return self.base.contains(x)

    def gen(self):
        return RationalFunction(self, (self.base.zero, self.base.one), (self.base.one,))

    def variables(self):
        out = dict(self.base.variables())
        out[self.var] = self.gen()
        return out

    def format(self, x):
        x = self(x)
        fmt = self.base.format
        if isinstance(self.base, CyclotomicField):
            def fmt(c):
                s = self.base.format(c)
                return s if self.base(c).is_rational() else "(%s)" % s
        num = _format_poly(x.num, self.var, fmt)
        if x.den == (self.base.one,):
            return num
        return "(%s)/(%s)" % (num, _format_poly(x.den, self.var, fmt))

    def spec(self):
        out = {"rational_function": self.base.spec()}
        if self.var != "t":
            out["var"] = self.var
        return out


class RationalFunction(object):
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den, reduce=True, canonical=False):
        zero = field.base.zero
        if canonical:
            num = _trim(num, zero)
            den = _trim(den, zero)
        else:
            num = _trim([field.base(c) for c in num], zero)
            den = _trim([field.base(c) for c in den], zero)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if reduce:
            if not num:
                den = (field.base.one,)
            elif len(den) == 1:
                if den[0] != field.base.one:
                    inv = field.base.one / den[0]
                    num = poly_scale(num, inv, zero)
                    den = (field.base.one,)
            elif all(c == zero for c in den[:-1]):
                # den = c t^k: cancel the common power of t
                v = next(i for i, c in enumerate(num) if c != zero)
                m = min(v, len(den) - 1)
                num, den = num[m:], den[m:]
                lead = den[-1]
                if lead != field.base.one:
                    inv = field.base.one / lead
                    num = poly_scale(num, inv, zero)
                    den = poly_scale(den, inv, zero)
            else:
                g = poly_gcd(num, den, zero)
                if len(g) > 1:
                    num = poly_divmod(num, g, zero)[0]
                    den = poly_divmod(den, g, zero)[0]
                lead = den[-1]
                if lead != field.base.one:
                    inv = 1 / lead
                    num = poly_scale(num, inv, zero)
                    den = poly_scale(den, inv, zero)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self):
        return self.num[0] if self.num else self.field.base.zero

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise FieldMismatch("%s vs %s" % (self.field, other.field))
            return other
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        z = self.field.base.zero
        if self.den == o.den:
            return RationalFunction(self.field, poly_add(self.num, o.num, z), self.den,
                                    reduce=len(self.den) > 1, canonical=True)
        num = poly_add(poly_mul(self.num, o.den, z), poly_mul(o.num, self.den, z), z)
        return RationalFunction(self.field, num, poly_mul(self.den, o.den, z), canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, poly_neg(self.num), self.den, reduce=False, canonical=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        z = self.field.base.zero
        if not self.num or not o.num:
            return self.field.zero
        if o.is_constant() or self.is_constant():
            c, x = (o, self) if o.is_constant() else (self, o)
            return RationalFunction(self.field, poly_scale(x.num, c.num[0], z), x.den,
                                    reduce=False, canonical=True)
        return RationalFunction(self.field, poly_mul(self.num, o.num, z), poly_mul(self.den, o.den, z),
                                canonical=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero in %s" % self.field)
        return RationalFunction(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self):
        """d/dvar, by the quotient rule on polynomials."""
        z = self.field.base.zero
        dn = _poly_derivative(self.num, z)
        dd = _poly_derivative(self.den, z)
        num = poly_sub(poly_mul(dn, self.den, z), poly_mul(self.num, dd, z), z)
        return RationalFunction(self.field, num, poly_mul(self.den, self.den, z))

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.field.var, self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return "RationalFunction(%s)" % self.field.format(self)

    def __str__(self):
        return self.field.format(self)


def _poly_derivative(p, zero):
    return _trim([c * k for k, c in enumerate(p)][1:], zero)


def _format_poly(coeffs, var, fmt):
    if not coeffs:
        return "0"
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        s = fmt(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        if k == 0:
            body = s
        else:
            mono = var if k == 1 else "%s^%d" % (var, k)
            body = mono if s == "1" else "%s*%s" % (s, mono)
        terms.append((neg, body))
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


# ----------------------------------------------------------------------
# literal grammar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(.))")


class _Parser(object):
    """Recursive descent over + - * / ^ and parentheses.

    Juxtaposition such as ``2z`` or ``(1+t)(1-t)`` means multiplication.
    """

    def __init__(self, field, text):
        if not isinstance(text, str):
            raise ParseError("scalar literal must be a string, got %r" % (text,))
        self.field = field
        self.text = text
        self.tokens = []
        for m in _TOKEN.finditer(text):
            num, name, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif name is not None:
                self.tokens.append(("name", name))
            elif op is not None and op.strip():
                self.tokens.append(("op", op))
        self.pos = 0
        self.names = field.variables()

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, msg):
        raise ParseError("%s in %r (field %s)" % (msg, self.text, self.field))

    def parse(self):
        if not self.tokens:
            self.fail("empty literal")
        try:
            value = self.expr()
        except ZeroDivisionError:
            self.fail("division by zero")
        if self.pos != len(self.tokens):
            self.fail("trailing input")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def starts_atom(self):
        kind, val = self.peek()
        return kind in ("num", "name") or (kind, val) == ("op", "(")

    def term(self):
        value = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                value = value * self.factor()
            elif (kind, val) == ("op", "/"):
                self.take()
                value = value / self.factor()
            elif self.starts_atom():
                value = value * self.factor()
            else:
                return value

    def factor(self):
        kind, val = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.factor()
        if (kind, val) == ("op", "+"):
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                self.fail("exponent must be an integer")
            base = base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.field(val)
        if kind == "name":
            if val not in self.names:
                self.fail("unknown symbol %r" % val)
            return self.names[val]
        if (kind, val) == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return value
        self.fail("unexpected token %r" % (val,))


# ----------------------------------------------------------------------

def field_from_spec(spec):
    """Inverse of Field.spec()."""
    if isinstance(spec, Field):
        return spec
    if spec == "Q":
        return QQ
    if isinstance(spec, dict):
        if "cyclotomic" in spec:
            n = spec["cyclotomic"]
            if not isinstance(n, int) or n < 1:
                raise ParseError("cyclotomic order must be a positive integer")
            return CyclotomicField(n)
        if "rational_function" in spec:
            base = field_from_spec(spec["rational_function"])
            if isinstance(base, RationalFunctionField):
                raise FieldMismatch("rational function fields cannot be nested")
            return RationalFunctionField(base, spec.get("var", "t"))
    raise ParseError("unknown field spec %r" % (spec,))


def scalar_arith(op, a, b=None):
    """Single entry point for the field operations add/sub/mul/div/neg/inv."""
    for x in (a, b):
        if x is not None and not isinstance(x, (int, Fraction, CyclotomicNumber, RationalFunction)):
            raise FieldMismatch("not a scalar: %r" % (x,))
    try:
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "div":
            if b == 0:
                raise DivisionByZero("division by zero")
            return a / b
        if op == "neg":
            return -a
        if op == "inv":
            if a == 0:
                raise DivisionByZero("inverse of zero")
            return 1 / a if isinstance(a, (CyclotomicNumber, RationalFunction)) else 1 / Fraction(a)
    except DivisionByZero:
        raise
    except ZeroDivisionError as exc:
        raise DivisionByZero(str(exc))
    raise ValueError("unknown operation %r" % (op,))


def field_of(x, default=QQ):
    if isinstance(x, CyclotomicNumber):
        return x.field
    if isinstance(x, RationalFunction):
        return x.field
    return default
