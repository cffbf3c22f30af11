"""Exact integer polynomials.

Coefficients are stored in ascending order of exponent (``coeffs[0]`` is the
constant term). Every textual format used by the tables is descending, so the
conversion happens only in :func:`parse_poly` and :meth:`IntPolynomial.format`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        if not coeffs:
            raise PolynomialError("the zero polynomial is not representable")
        if coeffs[-1] == 0:
            raise PolynomialError("leading coefficient is zero")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_descending(cls, coeffs: Iterable[int]) -> IntPolynomial:
        return cls(tuple(reversed(tuple(coeffs))))

    @classmethod
    def from_half(cls, half: Sequence[int]) -> IntPolynomial:
        """Expand a half list ``[a_d, a_{d-1}, ..., a_{d/2}]`` palindromically."""
        half = tuple(int(c) for c in half)
        if not half:
            raise PolynomialError("empty half specification")
        if half[0] != 1:
            raise PolynomialError(f"half encoding must be monic, got leading {half[0]}")
        # descending: half + mirrored head (without the middle coefficient)
        desc = half + tuple(reversed(half[:-1]))
        return cls.from_descending(desc)

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> IntPolynomial:
        return cls((0,) * n + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def descending(self) -> tuple[int, ...]:
        return tuple(reversed(self.coeffs))

    def half(self) -> tuple[int, ...]:
        if not is_reciprocal(self) or self.degree % 2:
            raise PolynomialError("half encoding needs an even-degree palindromic polynomial")
        return self.descending()[: self.degree // 2 + 1]

    def format(self, encoding: str = "full") -> str:
        values = self.half() if encoding == "half" else self.descending()
        return " ".join(str(c) for c in values)

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                base = "x" if k == 1 else f"x^{k}"
                body = base if mag == 1 else f"{mag}*{base}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(_strip(tuple(x + y for x, y in zip(a, b))))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial(tuple(mul_coeffs(self.coeffs, other.coeffs)))

    def mirror(self) -> IntPolynomial:
        """P(-x)."""
        return IntPolynomial(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def reverse(self) -> IntPolynomial:
        """x^d P(1/x); requires a nonzero constant term."""
        return IntPolynomial.from_descending(self.coeffs)

    def derivative(self) -> IntPolynomial:
        if self.degree == 0:
            raise PolynomialError("derivative of a constant")
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _strip(coeffs: Sequence) -> tuple:
    coeffs = tuple(coeffs)
    n = len(coeffs)
    while n > 1 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


def mul_coeffs(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def parse_poly(text: str, encoding: str = "full") -> IntPolynomial:
    """Parse whitespace-separated integers, highest degree first.

    ``encoding="half"`` reads the table layout for reciprocal polynomials: the
    coefficients from ``x^d`` down to the middle coefficient ``x^{d/2}``.

    >>> parse_poly("1 3", "half").format()
    '1 3 1'
    """
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise PolynomialError("empty polynomial text")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise PolynomialError(f"not an integer list: {text!r}") from exc
    if encoding == "half":
        return IntPolynomial.from_half(values)
    if encoding != "full":
        raise PolynomialError(f"unknown encoding {encoding!r}")
    if values[0] == 0:
        raise PolynomialError("leading coefficient is zero")
    return IntPolynomial.from_descending(values)


def is_reciprocal(p: IntPolynomial) -> bool:
    """True iff the coefficients are palindromic, i.e. x^d P(1/x) = P(x)."""
    return p.coeffs == p.coeffs[::-1]


def is_antireciprocal(p: IntPolynomial) -> bool:
    return p.coeffs == tuple(-c for c in p.coeffs[::-1])


def compose_power(p: IntPolynomial, k: int) -> IntPolynomial:
    """Return P(x^k)."""
    if k < 1:
        raise PolynomialError("k must be a positive integer")
    if k == 1:
        return p
    out = [0] * (p.degree * k + 1)
    for i, c in enumerate(p.coeffs):
        out[i * k] = c
    return IntPolynomial(tuple(out))


def primitivity_decompose(p: IntPolynomial) -> tuple[IntPolynomial, int]:
    """Largest k with P(x) = Q(x^k); returns ``(Q, k)``."""
    if p.degree < 1:
        raise PolynomialError("primitivity is undefined for constants")
    k = reduce(gcd, (i for i, c in enumerate(p.coeffs) if c and i), 0)
    return IntPolynomial(p.coeffs[::k]), k


def is_primitive(p: IntPolynomial) -> bool:
    return primitivity_decompose(p)[1] == 1


def evaluate_exact(p: IntPolynomial, num: int, den: int = 1) -> int:
    """den^degree * P(num/den) as an exact integer (same sign as P(num/den))."""
    if den <= 0:
        raise PolynomialError("den must be positive")
    acc = 0
    dpow = 1
    # homogeneous Horner: sum_k c_k num^k den^(d-k)
    for c in reversed(p.coeffs):
        acc = acc * num + c * dpow
        dpow *= den
    return acc


def sign_at(p: IntPolynomial, x: Fraction | int) -> int:
    x = Fraction(x)
    v = evaluate_exact(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


# -- exact arithmetic over Q, used for division checks and square-free tests --


def divmod_exact(p: IntPolynomial, q: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial | None]:
    """Divide by a monic (or unit-leading) integer polynomial.

    Returns ``(quotient, remainder)`` with ``remainder`` None when zero.
    """
    if abs(q.leading) != 1:
        raise PolynomialError("divisor must have leading coefficient +-1")
    rem = list(p.coeffs)
    dq = q.degree
    if p.degree < dq:
        raise PolynomialError("divisor degree exceeds dividend degree")
    quot = [0] * (p.degree - dq + 1)
    lc = q.leading
    for i in range(p.degree - dq, -1, -1):
        c = rem[i + dq] * lc
        quot[i] = c
        if c:
            for j, qc in enumerate(q.coeffs):
                rem[i + j] -= c * qc
    r = _strip(rem[:dq] or [0])
    quotient = IntPolynomial(_strip(quot))
    return quotient, (None if all(c == 0 for c in r) else IntPolynomial(r))


def exact_quotient(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial | None:
    """P / Q when Q divides P exactly over Z, else None."""
    if q.degree > p.degree:
        return None
    quotient, rem = divmod_exact(p, q)
    return quotient if rem is None else None


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - db)
    inv = 1 / b[-1]
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv
        quot[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] -= c * bc
    rem = a[:db] or [Fraction(0)]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _qpoly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while not (len(b) == 1 and b[0] == 0):
        _, r = _qpoly_divmod(a, b)
        a, b = b, r
    lc = a[-1]
    return [c / lc for c in a]


def _to_primitive_int(a: list[Fraction]) -> IntPolynomial:
    den = reduce(lambda x, y: x * y // gcd(x, y), (c.denominator for c in a), 1)
    ints = [int(c * den) for c in a]
    g = reduce(gcd, ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(tuple(ints))


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Q with positive leading coefficient."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    return _to_primitive_int(_qpoly_gcd(a, b))


def is_squarefree(p: IntPolynomial) -> bool:
    if p.degree <= 1:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm over Q; returns primitive square-free factors with multiplicities.

    The product of ``f**m`` equals ``p`` up to a rational constant.
    """
    if p.degree == 0:
        return []
    a = [Fraction(c) for c in p.coeffs]
    da = [Fraction(k * c) for k, c in enumerate(p.coeffs) if k]
    g = _qpoly_gcd(a, da)
    b, _ = _qpoly_divmod(a, g)
    c, _ = _qpoly_divmod(da, g)
    out: list[tuple[IntPolynomial, int]] = []
    i = 1
    while len(b) > 1:
        db = [k * x for k, x in enumerate(b) if k]
        diff = _sub(c, db)
        d = _qpoly_gcd(b, diff)
        if len(d) > 1:
            out.append((_to_primitive_int(d), i))
        b, _ = _qpoly_divmod(b, d)
        c, _ = _qpoly_divmod(diff, d)
        i += 1
    return out


def _sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return [Fraction(x) for x in out]
