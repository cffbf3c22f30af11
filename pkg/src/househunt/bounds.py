"""Closed-form bounds, named constants, lemma templates and composite shortcuts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .poly import (
    IntPolynomial,
    PolynomialError,
    compose_power,
    divmod_exact,
    is_primitive,
    is_reciprocal,
    sign_at,
)
from .roots import CertifiedRealRoot, house, real_root_in_interval


class LemmaViolation(AssertionError):
    """An exact sign condition guaranteed by one of the lemma templates failed."""


class MissingRecordError(LookupError):
    pass


# -- constants -----------------------------------------------------------------

THETA_POLY = IntPolynomial.from_descending([1, 0, -1, -1])
SIGMA_POLY = IntPolynomial.from_descending([1, 0, 0, 1, 1, 1, 0, 0, 1])
TAU_POLY = IntPolynomial.from_descending([1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1])
GOLDEN_SQ_POLY = IntPolynomial.from_descending([1, 3, 1])

# printed digits, used only as cross-checks of the recomputed values
PRINTED_DIGITS = {"theta": "1.324717", "sigma": "1.169283", "tau": "1.125715", "U": "6.854102"}


@dataclass(frozen=True)
class ConstantCatalog:
    theta: float
    sigma: float
    tau: float
    U: float

    def check_printed(self) -> dict[str, bool]:
        """Compare against the six printed decimals quoted with each constant."""
        return {
            name: abs(getattr(self, name) - float(digits)) <= 1e-6
            for name, digits in PRINTED_DIGITS.items()
        }


@lru_cache(maxsize=None)
def constants() -> ConstantCatalog:
    """Recompute every constant from its defining polynomial."""
    golden_sq = house(GOLDEN_SQ_POLY)[0]
    return ConstantCatalog(
        theta=house(THETA_POLY)[0],
        sigma=house(SIGMA_POLY)[0],
        tau=house(TAU_POLY)[0],
        U=golden_sq**2,
    )


# -- bound evaluators -------------------------------------------------------------


def matveev_lower_bound(d: int, reciprocal: bool = False) -> float:
    if d < 2:
        raise ValueError("Matveev's bound needs d >= 2")
    if reciprocal:
        if d < 6:
            raise ValueError("the reciprocal bound needs d >= 6")
        return math.exp(3 * math.log(d / 2) / d**2)
    return math.exp(math.log(d + 0.5) / d**2)


def column_bound(d: int, kind: str) -> float:
    """theta^(3/(2d)), tau^(10/d) or sigma^(8/d)."""
    if d < 1:
        raise ValueError("d must be positive")
    c = constants()
    if kind == "theta32":
        return c.theta ** (1.5 / d)
    if kind == "tau10":
        return c.tau ** (10 / d)
    if kind == "sigma8":
        return c.sigma ** (8 / d)
    raise ValueError(f"unknown column {kind!r}")


def powerhouse(house_value: float, d: int) -> float:
    return house_value**d


def taylor_T_pow(T: float, d: int, terms: int) -> float:
    """Partial sum of T^(1/d) = sum_k log(T)^k / (k! d^k)."""
    if terms < 1:
        raise ValueError("terms must be positive")
    x = math.log(T) / d
    total, term = 0.0, 1.0
    for k in range(terms):
        total += term
        term *= x / (k + 1)
    return total


def sigma_dominates_matveev(k: int) -> tuple[bool, float, float]:
    """sigma^(8/2^k) against the reciprocal Matveev bound at d = 2^k."""
    d = 2**k
    lhs = constants().sigma ** (8 / d)
    rhs = (2 ** (k - 1)) ** (3 / 2 ** (2 * k))
    return lhs > rhs, lhs, rhs


def power_inequality(k: int) -> bool:
    """2^(k+3) > 15(k-1), exactly."""
    return 2 ** (k + 3) > 15 * (k - 1)


# -- lemma templates --------------------------------------------------------------


@dataclass(frozen=True)
class LemmaPattern:
    which: str
    m: int | None
    guaranteed_lower_bound: Fraction

    @property
    def bracket(self) -> tuple[Fraction, Fraction]:
        if self.which == "Lemma1":
            return Fraction(3, 2), Fraction(2)
        return Fraction(2), Fraction(3)


# fixed leading coefficients (descending), by lemma and m
def lemma_head(which: str, m: int | None) -> tuple[int, ...]:
    if which == "Lemma1":
        return (1, -1, -1, -1, -m)
    if which == "Lemma2":
        return (1, -2, -2)
    if which == "Lemma3":
        return (1, -2, -1, -m)
    raise ValueError(f"unknown lemma {which!r}")


LEMMA_MIN_DEGREE = {"Lemma1": 10, "Lemma2": 6, "Lemma3": 10}
LEMMA_M_VALUES = {"Lemma1": (0, 1), "Lemma2": (None,), "Lemma3": (1, 2)}
LEMMA_ALPHABET = {"Lemma1": range(-1, 2), "Lemma2": range(-2, 3), "Lemma3": range(-2, 3)}
LEMMA_BOUND = {"Lemma1": Fraction(3, 2), "Lemma2": Fraction(2), "Lemma3": Fraction(2)}


def lemma_template(which: str, d: int, m: int | None, free: Sequence[int]) -> IntPolynomial:
    """Build the palindromic polynomial of a template from its free middle coefficients.

    ``free`` lists the descending coefficients from the first unconstrained
    position down to x^(d/2).
    """
    if d % 2 or d < LEMMA_MIN_DEGREE[which]:
        raise ValueError(f"{which} needs even d >= {LEMMA_MIN_DEGREE[which]}")
    head = lemma_head(which, m)
    if len(head) + len(free) != d // 2 + 1:
        raise ValueError(f"expected {d // 2 + 1 - len(head)} free coefficients")
    return IntPolynomial.from_half(head + tuple(free))


def match_lemma_pattern(p: IntPolynomial) -> LemmaPattern | None:
    """Recognise the three templates that force a real root above 3/2 or 2."""
    d = p.degree
    if d % 2 or p.leading != 1 or not is_reciprocal(p):
        return None
    half = p.half()
    for which in ("Lemma1", "Lemma2", "Lemma3"):
        if d < LEMMA_MIN_DEGREE[which]:
            continue
        for m in LEMMA_M_VALUES[which]:
            head = lemma_head(which, m)
            if half[: len(head)] != head:
                continue
            alphabet = LEMMA_ALPHABET[which]
            if all(c in alphabet for c in half[len(head):]):
                return LemmaPattern(which, m, LEMMA_BOUND[which])
    return None


def verify_lemma_instance(pat: LemmaPattern, p: IntPolynomial) -> CertifiedRealRoot:
    """Check the exact sign change behind a template and bracket the real root."""
    lo, hi = pat.bracket
    s_lo, s_hi = sign_at(p, lo), sign_at(p, hi)
    if not (s_lo < 0 < s_hi):
        raise LemmaViolation(f"{pat.which} signs at {lo}, {hi} are {s_lo}, {s_hi} for {p}")
    root = real_root_in_interval(p, lo, hi)
    if root is None or root.lo < pat.guaranteed_lower_bound:
        raise LemmaViolation(f"{pat.which}: no certified root above {pat.guaranteed_lower_bound}")
    return root


# -- generators and witnesses -----------------------------------------------------


def generate_prime5mod6(d: int) -> IntPolynomial:
    """(x^(d+2) - x^2 - 1) / (x^2 - x + 1) for d = 5 (mod 6)."""
    if d < 5 or d % 6 != 5:
        raise ValueError("d must be >= 5 and congruent to 5 mod 6")
    num = IntPolynomial((-1, 0, -1) + (0,) * (d - 1) + (1,))
    quot, rem = divmod_exact(num, IntPolynomial((1, -1, 1)))
    if rem is not None:
        raise ArithmeticError(f"nonzero remainder {rem} dividing by x^2 - x + 1")
    return quot


def failed_generalization(d: int) -> tuple[IntPolynomial, bool]:
    """Zeros of (x^(d+3) - x^((d+3)/2) - x + 1) / ((x - 1)(x^2 + 1)), odd d.

    Returns the numerator of the reduced fraction and whether the division was
    exact. The factor x - 1 always divides; x^2 + 1 divides only when
    d = 19 (mod 24), otherwise the expression is a rational function whose
    zeros are those of the returned numerator.
    """
    if d % 2 == 0 or d < 1:
        raise ValueError("d must be a positive odd integer")
    n = d + 3
    coeffs = [0] * (n + 1)
    coeffs[n] += 1
    coeffs[n // 2] -= 1
    coeffs[1] -= 1
    coeffs[0] += 1
    num, rem = divmod_exact(IntPolynomial(tuple(coeffs)), IntPolynomial((-1, 1)))
    if rem is not None:
        raise ArithmeticError(f"x - 1 should divide, remainder {rem}")
    quot, rem = divmod_exact(num, IntPolynomial((1, 0, 1)))
    if rem is None:
        return quot, True
    return num, False


def upper_bound_witness(d: int, reciprocal: bool = False) -> tuple[IntPolynomial, float]:
    """x^d - 2 (house 2^(1/d)) or x^d + 3x^(d/2) + 1 (house ((3+sqrt 5)/2)^(2/d))."""
    if d < 1:
        raise ValueError("d must be positive")
    if not reciprocal:
        return IntPolynomial((-2,) + (0,) * (d - 1) + (1,)), 2 ** (1 / d)
    if d % 2:
        raise ValueError("a reciprocal witness needs even d")
    coeffs = [0] * (d + 1)
    coeffs[0] = coeffs[d] = 1
    coeffs[d // 2] = 3
    return IntPolynomial(tuple(coeffs)), ((3 + math.sqrt(5)) / 2) ** (2 / d)


# -- composite degrees ------------------------------------------------------------


@dataclass(frozen=True)
class CompositePrediction:
    poly: IntPolynomial
    house: float
    divisor: int
    powerhouse: float
    ties: tuple[int, ...]


def composite_prediction(
    d: int,
    known: Mapping[int, IntPolynomial],
    reciprocal: bool = True,
    houses: Mapping[int, float] | None = None,
) -> CompositePrediction:
    """Best nonprimitive polynomial Q(x^(d/b)) built from known primitive records.

    Records are ranked by powerhouse house^b; the lowest powerhouse gives the
    lowest house after composition. Ties go to the smaller divisor.
    """
    if reciprocal and d % 2:
        raise ValueError("reciprocal composite degree must be even")
    houses = dict(houses or {})
    ranked = []
    for b, poly in sorted(known.items()):
        if b >= d or d % b or (reciprocal and b % 2):
            continue
        if poly.degree != b:
            raise PolynomialError(f"record for degree {b} has degree {poly.degree}")
        if not is_primitive(poly):
            continue
        h = houses[b] if b in houses else house(poly)[0]
        ranked.append((h**b, b, poly, h))
    if not ranked:
        raise MissingRecordError(f"no primitive divisor records available for d={d}")
    ranked.sort(key=lambda t: (t[0], t[1]))
    best_ph, b, poly, h = ranked[0]
    ties = tuple(t[1] for t in ranked[1:] if abs(t[0] - best_ph) <= 1e-12 * best_ph)
    return CompositePrediction(
        poly=compose_power(poly, d // b),
        house=h ** (b / d),
        divisor=b,
        powerhouse=best_ph,
        ties=ties,
    )
