"""Exact scalar arithmetic over Q and real quadratic extensions of Q.

Every invariant value in this package is a ``FieldScalar``: a pair of
rationals (a, b) representing a + b*x, where x is the generator of the
field.  For the rational field b is always 0; for a quadratic field x
satisfies the monic relation x**2 = s*x + t and denotes the *larger* real
root, so sign questions have exact answers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RatLike = Union[int, Fraction]


class NumberField:
    """Q, or Q(x) with x**2 = s*x + t (x the larger real root)."""

    def __init__(self, kind: str, s: Fraction = Fraction(0), t: Fraction = Fraction(0),
                 gen_name: str = "x"):
        if kind not in ("Q", "quadratic"):
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.s = Fraction(s)
        self.t = Fraction(t)
        self.gen_name = gen_name
        if kind == "quadratic":
            disc = self.s * self.s + 4 * self.t
            if disc <= 0:
                raise ValueError("quadratic field must be real (s^2 + 4t > 0)")
            if _is_rational_square(disc):
                raise ValueError("minimal polynomial is reducible over Q")
            self.disc = disc
        else:
            self.disc = Fraction(0)

    @property
    def minpoly(self) -> tuple[Fraction, Fraction, Fraction]:
        # c0 + c1*x + c2*x^2 = 0
        return (-self.t, -self.s, Fraction(1))

    def __eq__(self, other) -> bool:
        return (isinstance(other, NumberField)
                and self.kind == other.kind and self.s == other.s and self.t == other.t)

    def __hash__(self):
        return hash((self.kind, self.s, self.t))

    def __repr__(self):
        if self.kind == "Q":
            return "NumberField(Q)"
        return f"NumberField({self.gen_name}^2 = {self.s}*{self.gen_name} + {self.t})"

    # -- element constructors -------------------------------------------

    def __call__(self, a: RatLike, b: RatLike = 0) -> "FieldScalar":
        return FieldScalar(self, Fraction(a), Fraction(b))

    def zero(self) -> "FieldScalar":
        return self(0)

    def one(self) -> "FieldScalar":
        return self(1)

    def gen(self) -> "FieldScalar":
        if self.kind == "Q":
            raise ValueError("the rational field has no irrational generator")
        return self(0, 1)


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    rn, rd = _isqrt(n), _isqrt(d)
    return rn * rn == n and rd * rd == d


def _isqrt(n: int) -> int:
    import math
    return math.isqrt(n)


QQ = NumberField("Q")

# Q(phi), phi^2 = phi + 1, phi the golden ratio (positive root).
PHI_FIELD = NumberField("quadratic", Fraction(1), Fraction(1), gen_name="phi")


class FieldScalar:
    """An exact element a + b*x of a NumberField."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: NumberField, a: Fraction, b: Fraction = Fraction(0)):
        if field.kind == "Q" and b != 0:
            raise ValueError("rational field element with irrational part")
        self.field = field
        self.a = a
        self.b = b

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "FieldScalar":
        if isinstance(other, FieldScalar):
            if other.field == self.field:
                return other
            if other.field.kind == "Q":
                return FieldScalar(self.field, other.a)
            if self.field.kind == "Q":
                raise TypeError("cannot coerce quadratic element into Q")
            raise TypeError("scalars live in different fields")
        if isinstance(other, (int, Fraction)):
            return FieldScalar(self.field, Fraction(other))
        raise TypeError(f"cannot combine FieldScalar with {type(other).__name__}")

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        f = self.field if self.field.kind != "Q" else o.field
        return FieldScalar(f, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        f = self.field if self.field.kind != "Q" else o.field
        # (a1 + b1 x)(a2 + b2 x) with x^2 = s x + t
        a = self.a * o.a + self.b * o.b * f.t
        b = self.a * o.b + self.b * o.a + self.b * o.b * f.s
        return FieldScalar(f, a, b)

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero field element")
        f = self.field
        if self.b == 0:
            return FieldScalar(f, 1 / self.a)
        # conjugate x -> s - x ; norm (a + b x)(a + b (s - x)) is rational
        n = self.a * self.a + self.a * self.b * f.s - self.b * self.b * f.t
        if n == 0:
            raise ZeroDivisionError("element has zero norm; field data inconsistent")
        return FieldScalar(f, (self.a + self.b * f.s) / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldScalar(self.field, Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.field, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign under the real embedding sending x to its larger root."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        f = self.field
        # 2*(a + b x) = (2a + b s) + b * sqrt(disc)
        u = 2 * self.a + self.b * f.s
        v = self.b
        if u >= 0 and v > 0:
            return 1
        if u <= 0 and v < 0:
            return -1
        # opposite signs: compare u^2 with v^2 * disc
        lhs = u * u
        rhs = v * v * f.disc
        if u > 0:  # v < 0
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1  # u < 0, v > 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __ge__(self, other):
        return not self < other

    def __le__(self, other):
        return not self > other

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return f"FieldScalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def format_scalar(x: FieldScalar) -> str:
    """Canonical text form: reduced fraction, or quadratic a+b*gen.

    Pure rationals print as "p" or "p/q".  Quadratic elements with integer
    parts print like "2+phi" / "1-phi" / "3*phi"; a common denominator d > 1
    wraps the integer form: "(3-1*phi)/5".
    """
    name = x.field.gen_name
    if x.b == 0:
        return str(x.a)
    d = _lcm(x.a.denominator, x.b.denominator)
    n0 = x.a * d
    n1 = x.b * d
    assert n0.denominator == 1 and n1.denominator == 1
    n0, n1 = n0.numerator, n1.numerator
    if d == 1:
        if n0 == 0:
            if n1 == 1:
                return name
            if n1 == -1:
                return f"-{name}"
            return f"{n1}*{name}"
        head = str(n0)
        if n1 == 1:
            return f"{head}+{name}"
        if n1 == -1:
            return f"{head}-{name}"
        op = "+" if n1 > 0 else "-"
        return f"{head}{op}{abs(n1)}*{name}"
    op = "+" if n1 >= 0 else "-"
    return f"({n0}{op}{abs(n1)}*{name})/{d}"


def _lcm(a: int, b: int) -> int:
    import math
    return a * b // math.gcd(a, b)


def parse_scalar(text: str, field: NumberField) -> FieldScalar:
    """Parse the forms produced by format_scalar, plus obvious variants."""
    s = text.strip().replace(" ", "")
    denom = Fraction(1)
    if s.startswith("(") and ")/" in s:
        inner, _, d = s.rpartition(")/")
        s = inner[1:]
        denom = Fraction(int(d))
    a = Fraction(0)
    b = Fraction(0)
    name = field.gen_name
    for term in _split_terms(s):
        if name in term:
            if not term.endswith(name):
                raise ValueError(f"cannot parse term {term!r}")
            coef = term[: -len(name)].rstrip("*")
            if coef in ("", "+"):
                b += 1
            elif coef == "-":
                b -= 1
            else:
                b += Fraction(coef)
        else:
            a += Fraction(term)
    a /= denom
    b /= denom
    if b != 0 and field.kind == "Q":
        raise ValueError(f"{text!r} does not lie in Q")
    return FieldScalar(field, a, b)


def _split_terms(s: str) -> list[str]:
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-/*":
            terms.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    terms.append(cur)
    return [t if not t.startswith("+") else t[1:] for t in terms if t not in ("", "+")]
