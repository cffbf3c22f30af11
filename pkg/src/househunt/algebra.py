"""Exact gates used before a polynomial may count as an extremal candidate.

Every positive claim is exact: a root-of-unity verdict comes from the Graeffe
root-squaring orbit in integer arithmetic, and a reducibility verdict always
carries a factor that divides the input with zero remainder.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .poly import (
    IntPolynomial,
    PolynomialError,
    exact_quotient,
    is_squarefree,
    mul_coeffs,
    poly_gcd,
)
from .roots import all_roots

# rounding filter for reconstructed factors; exact division decides
ROUNDING_SLACK = 1e-4
_MAX_SUBSET_GROUPS = 26


class Kind(enum.Enum):
    ROOT_OF_UNITY = "RootOfUnity"
    REDUCIBLE = "Reducible"
    CANDIDATE = "Candidate"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    witness: IntPolynomial | None = None
    cyclotomic_indices: tuple[int, ...] | None = None

    def __str__(self) -> str:
        if self.kind is Kind.REDUCIBLE:
            return f"{self.kind.value}\t{self.witness.format()}"
        if self.kind is Kind.ROOT_OF_UNITY:
            return f"{self.kind.value}\t" + " ".join(f"Phi_{n}" for n in self.cyclotomic_indices)
        return self.kind.value


def _monic(p: IntPolynomial) -> IntPolynomial:
    if p.leading == 1:
        return p
    if p.leading == -1:
        return -p
    raise PolynomialError(f"expected a monic polynomial, got leading coefficient {p.leading}")


# -- cyclotomic polynomials ----------------------------------------------------


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, f = n, n, 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    poly = IntPolynomial((-1,) + (0,) * (n - 1) + (1,))
    for d in range(1, n):
        if n % d == 0:
            poly = exact_quotient(poly, cyclotomic(d))
    return poly


@lru_cache(maxsize=None)
def cyclotomic_indices_upto(degree: int) -> tuple[int, ...]:
    """All n with phi(n) <= degree (phi(n) >= sqrt(n/2) bounds the scan)."""
    return tuple(n for n in range(1, 2 * degree * degree + 3) if euler_phi(n) <= degree)


# -- roots of unity --------------------------------------------------------------


def graeffe_step(p: IntPolynomial) -> IntPolynomial:
    """Monic polynomial whose roots are the squares of the roots of ``p``."""
    prod = mul_coeffs(p.coeffs, p.mirror().coeffs)
    sq = prod[::2]
    if p.degree % 2:
        sq = [-c for c in sq]
    return IntPolynomial(tuple(sq))


def is_root_of_unity_poly(p: IntPolynomial) -> bool:
    """True iff every root of the monic ``p`` is a root of unity.

    Squaring all roots keeps a product of cyclotomics inside the finite set of
    monic integer polynomials with roots on |z| = 1, whose coefficients obey
    |a_k| <= C(d, k). Any root off the circle makes the coefficients grow past
    that bound, so the orbit either repeats (True) or escapes (False).
    """
    p = _monic(p)
    if p.degree < 1:
        raise PolynomialError("degree must be at least 1")
    if p.coeffs[0] == 0:
        return False
    d = p.degree
    bounds = [math.comb(d, k) for k in range(d + 1)]
    seen = set()
    q = p
    while q.coeffs not in seen:
        if any(abs(c) > b for c, b in zip(q.coeffs, bounds)):
            return False
        seen.add(q.coeffs)
        q = graeffe_step(q)
    return True


def peel_cyclotomic(p: IntPolynomial) -> tuple[list[int], IntPolynomial]:
    """Divide out cyclotomic factors; returns (indices with multiplicity, cofactor)."""
    indices: list[int] = []
    rest = _monic(p)
    for n in cyclotomic_indices_upto(rest.degree):
        phi = cyclotomic(n)
        while phi.degree <= rest.degree:
            q = exact_quotient(rest, phi)
            if q is None:
                break
            indices.append(n)
            rest = q
            if rest.degree == 0:
                return indices, rest
    return indices, rest


def cyclotomic_factorization(p: IntPolynomial) -> tuple[int, ...]:
    indices, rest = peel_cyclotomic(p)
    if rest.degree != 0:
        raise PolynomialError(f"{p} is not a product of cyclotomic polynomials")
    return tuple(indices)


# -- modular degree sieve --------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(a[:db] or [0])


def _pdiv(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(q)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b != [0]:
        a, b = b, _pmod(a, b, p)
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    return _pmod(mul_coeffs(a, b), f, p)


def _factor_degrees_mod(f: list[int], p: int) -> list[int] | None:
    """Degrees of the irreducible factors of f mod p (distinct-degree factorization).

    Returns None when f is not square-free modulo p.
    """
    f = _trim([c % p for c in f])
    df = _trim([(k * c) % p for k, c in enumerate(f) if k] or [0])
    if df == [0] or len(_pgcd(f, df, p)) > 1:
        return None
    degrees: list[int] = []
    h = [0, 1]
    i = 1
    while len(f) - 1 >= 2 * i:
        # h <- h^p mod f
        result, base, e = [1], h, p
        while e:
            if e & 1:
                result = _pmulmod(result, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        h = result
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _trim(diff), p)
        if len(g) > 1:
            degrees += [i] * ((len(g) - 1) // i)
            f = _pdiv(f, g, p)
            h = _pmod(h, f, p)
        i += 1
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return degrees


def _subset_sums(parts: list[int]) -> set[int]:
    sums = {0}
    for part in parts:
        sums |= {s + part for s in sums}
    return sums


@lru_cache(maxsize=None)
def _small_primes(limit: int = 400) -> tuple[int, ...]:
    return tuple(n for n in range(3, limit) if all(n % q for q in range(2, int(n**0.5) + 1)))


def possible_factor_degrees(p: IntPolynomial, primes: int = 12) -> set[int]:
    """Degrees a proper factor over Z could have, from factorizations mod small primes."""
    d = p.degree
    allowed = set(range(1, d))
    used = 0
    for q in _small_primes():
        if p.leading % q == 0:
            continue
        degs = _factor_degrees_mod(list(p.coeffs), q)
        if degs is None:
            continue
        allowed &= _subset_sums(degs)
        used += 1
        if not allowed or used >= primes:
            break
    return allowed


# -- factor reconstruction from roots ---------------------------------------------


def _root_groups(p: IntPolynomial) -> list[list[complex]]:
    """Roots grouped into complex-conjugate orbits (real roots stand alone)."""
    roots = [r.value for r in all_roots(p)]
    real = [z for z in roots if abs(z.imag) <= 1e-12 * max(1, abs(z))]
    upper = sorted((z for z in roots if z.imag > 1e-12 * max(1, abs(z))), key=lambda z: (z.real, z.imag))
    groups = [[complex(z)] for z in real]
    groups += [[complex(z), complex(z).conjugate()] for z in upper]
    if sum(len(g) for g in groups) != p.degree:
        raise PolynomialError(f"could not pair conjugate roots of {p}")
    return groups


def _product_coeffs(zs: list[complex]) -> list[float]:
    """Real coefficients (ascending) of prod (x - z)."""
    coeffs = np.array([1.0 + 0j])
    for z in zs:
        coeffs = np.concatenate(([0j], coeffs)) - z * np.concatenate((coeffs, [0j]))
    if np.max(np.abs(coeffs)) > 2.0**40:
        with mpmath.workdps(40):
            acc = [mpmath.mpc(1)]
            for z in zs:
                acc = [mpmath.mpc(0)] + acc
                for k in range(len(acc) - 1):
                    acc[k] -= z * acc[k + 1]
            return [float(c.real) for c in acc]
    return list(coeffs.real)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [k for k in range(1, n + 1) if n % k == 0]


def _subset_factor(p: IntPolynomial, degrees: set[int]) -> IntPolynomial | None:
    groups = _root_groups(p)
    half = p.degree // 2
    targets = {k for k in degrees if 1 <= k <= half}
    if not targets:
        return None
    g = len(groups)
    if g > _MAX_SUBSET_GROUPS:
        raise PolynomialError(f"too many root groups ({g}) for subset reconstruction")
    deg = np.zeros(1, dtype=np.int64)
    trace = np.zeros(1)
    logmod = np.zeros(1)
    for grp in groups:
        deg = np.concatenate((deg, deg + len(grp)))
        trace = np.concatenate((trace, trace + sum(z.real for z in grp)))
        logmod = np.concatenate((logmod, logmod + sum(math.log(abs(z)) for z in grp)))
    ok = np.isin(deg, list(targets))
    ok &= np.abs(trace - np.round(trace)) < 1e-6
    logs = np.array([math.log(k) for k in _divisors(p.coeffs[0])])
    ok &= np.min(np.abs(logmod[:, None] - logs[None, :]), axis=1) < 1e-6
    for mask in np.nonzero(ok)[0]:
        zs = [z for bit, grp in enumerate(groups) if (int(mask) >> bit) & 1 for z in grp]
        approx = _product_coeffs(zs)
        rounded = [round(c) for c in approx]
        if max(abs(c - r) for c, r in zip(approx, rounded)) > ROUNDING_SLACK:
            continue
        factor = IntPolynomial(tuple(rounded))
        if exact_quotient(p, factor) is not None:
            return factor
    return None


# -- public gates -----------------------------------------------------------------


def find_factor(p: IntPolynomial) -> IntPolynomial | None:
    """A proper factor of the monic ``p`` over Z, or None when ``p`` is irreducible."""
    p = _monic(p)
    d = p.degree
    if d <= 1:
        return None
    a0 = p.coeffs[0]
    if a0 == 0:
        return IntPolynomial((0, 1))
    # (a) rational roots divide a0
    for r in _divisors(a0):
        for s in (r, -r):
            lin = IntPolynomial((-s, 1))
            if exact_quotient(p, lin) is not None:
                return lin
    # (b) cyclotomic factors
    for n in cyclotomic_indices_upto(d):
        phi = cyclotomic(n)
        if phi.degree < d and exact_quotient(p, phi) is not None:
            return phi
    if not is_squarefree(p):
        return poly_gcd(p, p.derivative())
    degrees = possible_factor_degrees(p)
    if not degrees:
        return None
    # (c) factors rebuilt from conjugate-closed root subsets
    return _subset_factor(p, degrees)


def is_irreducible(p: IntPolynomial) -> bool:
    return find_factor(p) is None


def minimal_gate(p: IntPolynomial) -> Classification:
    """Classify a monic polynomial as RootOfUnity, Reducible or Candidate."""
    p = _monic(p)
    if is_root_of_unity_poly(p):
        return Classification(Kind.ROOT_OF_UNITY, cyclotomic_indices=cyclotomic_factorization(p))
    factor = find_factor(p)
    if factor is not None:
        if exact_quotient(p, factor) is None:
            raise AssertionError(f"witness {factor} does not divide {p}")
        return Classification(Kind.REDUCIBLE, witness=factor)
    return Classification(Kind.CANDIDATE)
