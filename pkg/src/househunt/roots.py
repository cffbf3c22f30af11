"""Certified roots, house, Mahler measure and the count of roots outside |z| = 1.

Roots are seeded from companion-matrix eigenvalues (numpy), polished with the
Aberth-Ehrlich iteration in mpmath, and certified a posteriori: for
approximations z_1..z_n of a degree-n polynomial p, the disks

    |z - z_i| <= n |p(z_i)| / |a_n prod_{j != i} (z_i - z_j)|

cover all roots, and a connected union of m disks holds exactly m roots
(B. T. Smith, 1970). The evaluation of p(z_i) carries a rounding bound that is
added to |p(z_i)| so the radii remain upper bounds at the working precision.

Roots on the unit circle of a reciprocal polynomial are counted exactly with a
Sturm sequence after the substitution w = z + 1/z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .poly import (
    IntPolynomial,
    PolynomialError,
    _qpoly_divmod,
    exact_quotient,
    is_antireciprocal,
    is_reciprocal,
    is_squarefree,
    sign_at,
    squarefree_decomposition,
)

DEFAULT_TOL = 1e-13
_WORKING_DPS = (30, 60)


class RootFindingError(RuntimeError):
    """Raised when roots cannot be certified within the requested radius."""


class UndecidableError(RuntimeError):
    """A certified disk straddles |z| = 1 and no symmetry argument applies."""


@dataclass(frozen=True)
class RootEstimate:
    value: mpmath.mpc
    radius: float

    @property
    def approx(self) -> complex:
        return complex(self.value)

    @property
    def modulus(self) -> float:
        return float(abs(self.value))


@dataclass(frozen=True)
class RootSummary:
    house: float
    house_error: float
    nu: int
    mahler: float
    roots: tuple[RootEstimate, ...]


@dataclass(frozen=True)
class CertifiedRealRoot:
    lo: Fraction
    hi: Fraction

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


# -- floating-point helpers ---------------------------------------------------


def float_roots(p: IntPolynomial) -> np.ndarray:
    return np.roots(np.array(p.descending(), dtype=float))


def float_house(p: IntPolynomial) -> float:
    return float(np.max(np.abs(float_roots(p)))) if p.degree else 0.0


def batch_float_houses(desc: np.ndarray) -> np.ndarray:
    """Approximate houses of many monic polynomials of equal degree.

    ``desc`` has shape (batch, d + 1) with descending coefficients and a
    leading column of ones.
    """
    batch, width = desc.shape
    d = width - 1
    comp = np.zeros((batch, d, d))
    comp[:, 0, :] = -desc[:, 1:]
    if d > 1:
        idx = np.arange(d - 1)
        comp[:, idx + 1, idx] = 1.0
    return np.abs(np.linalg.eigvals(comp)).max(axis=1)


# -- certified roots -----------------------------------------------------------


def _seed(p: IntPolynomial) -> list[complex]:
    seeds = [complex(z) for z in float_roots(p)]
    # Aberth needs distinct starting points
    out: list[complex] = []
    for k, z in enumerate(seeds):
        while any(abs(z - w) < 1e-12 for w in out):
            z += 1e-7 * complex(math.cos(k + 1.0), math.sin(k + 1.0))
        out.append(z)
    return out


def _aberth(coeffs: list, zs: list, maxit: int, eps) -> list:
    n = len(zs)
    for _ in range(maxit):
        worst = mpmath.mpf(0)
        for i in range(n):
            zi = zs[i]
            pv, dpv = mpmath.polyval(coeffs, zi, derivative=True)
            if pv == 0:
                continue
            ratio = pv / dpv if dpv != 0 else pv
            s = mpmath.fsum(1 / (zi - zs[j]) for j in range(n) if j != i)
            step = ratio / (1 - ratio * s)
            zs[i] = zi - step
            worst = max(worst, abs(step) / max(1, abs(zi)))
        if worst < eps:
            break
    return zs


def _smith_radii(coeffs: list, zs: list, prec_bits: int) -> list[float]:
    n = len(zs)
    u = mpmath.ldexp(1, -prec_bits + 1)
    gamma = 2 * n * u / (1 - 2 * n * u)
    lead = abs(coeffs[0])
    abs_coeffs = [abs(c) for c in coeffs]
    radii = []
    for i, zi in enumerate(zs):
        pv = mpmath.polyval(coeffs, zi)
        bound = abs(pv) + gamma * mpmath.polyval(abs_coeffs, abs(zi))
        denom = lead
        for j in range(n):
            if j != i:
                denom *= abs(zi - zs[j])
        if denom == 0:
            radii.append(math.inf)
            continue
        r = n * bound / denom
        radii.append(float(r * (1 + 8 * n * u)) * (1 + 1e-12))
    return radii


def _component_radii(zs: list, radii: list[float]) -> list[float]:
    """Widen radii so each root's disk covers its whole overlapping cluster."""
    n = len(zs)
    pts = [complex(z) for z in zs]
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(radii)
    for members in groups.values():
        if len(members) == 1:
            continue
        for i in members:
            out[i] = max(abs(pts[i] - pts[j]) + radii[j] for j in members) * (1 + 1e-12)
    return out


def _squarefree_roots(f: IntPolynomial, tol: float) -> list[RootEstimate]:
    if f.degree == 1:
        b, a = f.coeffs
        with mpmath.workdps(_WORKING_DPS[-1]):
            z = mpmath.mpc(mpmath.mpf(-b) / a)
        return [RootEstimate(z, 0.0 if b % a == 0 else 1e-50)]
    seeds = _seed(f)
    for dps in _WORKING_DPS:
        with mpmath.workdps(dps):
            coeffs = [mpmath.mpf(c) for c in f.descending()]
            zs = [mpmath.mpc(z.real, z.imag) for z in seeds]
            zs = _aberth(coeffs, zs, maxit=200 * f.degree, eps=mpmath.mpf(10) ** (-dps + 5))
            radii = _component_radii(zs, _smith_radii(coeffs, zs, mpmath.mp.prec))
            if max(radii) <= tol:
                return [RootEstimate(+z, r) for z, r in zip(zs, radii)]
            seeds = [complex(z) for z in zs]
    raise RootFindingError(
        f"could not certify roots of {f} to radius {tol:g} (best {max(radii):.3g})"
    )


def all_roots(p: IntPolynomial, tol: float = DEFAULT_TOL) -> tuple[RootEstimate, ...]:
    """All complex roots with multiplicity, each with a certified error radius."""
    if p.degree < 1:
        raise PolynomialError("constant polynomials have no roots")
    if tol < 1e-14:
        raise ValueError("tol must be at least 1e-14")
    zeros = 0
    while p.coeffs[zeros] == 0:
        zeros += 1
    out = [RootEstimate(mpmath.mpc(0), 0.0)] * zeros
    if zeros == p.degree:
        return tuple(out)
    core = IntPolynomial(p.coeffs[zeros:])
    if core.degree == 0:
        return tuple(out)
    if is_squarefree(core):
        out.extend(_squarefree_roots(core, tol))
    else:
        for factor, mult in squarefree_decomposition(core):
            out.extend(_squarefree_roots(factor, tol) * mult)
    return tuple(out)


def house(p: IntPolynomial, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """House (largest root modulus) and a certified absolute error bound."""
    roots = all_roots(p, tol)
    top = max(roots, key=lambda r: abs(r.value))
    err = max(r.radius for r in roots)
    return float(abs(top.value)), err


def mahler_measure(p: IntPolynomial, tol: float = DEFAULT_TOL) -> float:
    """|a_d| * prod max(1, |root|)."""
    roots = all_roots(p, tol)
    with mpmath.workdps(30):
        m = mpmath.mpf(abs(p.leading))
        for r in roots:
            m *= max(mpmath.mpf(1), abs(r.value))
        return float(m)


# -- counting roots outside the unit circle ----------------------------------


def _trace_polynomial(p: IntPolynomial) -> list[int]:
    """Q with P(z) = z^n Q(z + 1/z) for palindromic P of degree 2n (ascending)."""
    n = p.degree // 2
    a = p.coeffs
    q = [0] * (n + 1)
    q[0] = a[n]
    prev, cur = [2], [0, 1]  # D_0 = 2, D_1 = w
    for k in range(1, n + 1):
        for i, c in enumerate(cur):
            q[i] += a[n + k] * c
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return q


def _sturm_count(q: list[int], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of q in (lo, hi]; q ascending, neither endpoint a root."""
    seq = [[Fraction(c) for c in q]]
    if len(q) > 1:
        seq.append([Fraction(k * c) for k, c in enumerate(q) if k])
        while len(seq[-1]) > 1:
            _, r = _qpoly_divmod(seq[-2], seq[-1])
            if len(r) == 1 and r[0] == 0:
                break
            seq.append([-c for c in r])

    def variations(x: Fraction) -> int:
        signs = []
        for f in seq:
            v = Fraction(0)
            for c in reversed(f):
                v = v * x + c
            if v:
                signs.append(v > 0)
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    return variations(lo) - variations(hi)


def _palindromic_core(p: IntPolynomial) -> tuple[IntPolynomial, int] | None:
    """Divide out x - 1 / x + 1 until an even-degree palindromic core remains.

    Returns the core and the number of removed unit-circle roots, or None if
    ``p`` is neither palindromic nor antipalindromic.
    """
    core, stripped = p, 0
    while True:
        if is_reciprocal(core) and core.degree % 2 == 0:
            return core, stripped
        if is_antireciprocal(core):
            divisor = IntPolynomial((-1, 1))
        elif is_reciprocal(core):
            divisor = IntPolynomial((1, 1))
        else:
            return None
        core = exact_quotient(core, divisor)
        stripped += 1


def count_outside_unit(p: IntPolynomial, tol: float = DEFAULT_TOL) -> int:
    """Number of roots with modulus strictly greater than one.

    Reciprocal input is handled exactly through w = z + 1/z; anything else
    needs certified disks that avoid the unit circle.
    """
    if p.degree < 1:
        raise PolynomialError("constant polynomial")
    if p.coeffs[0] != 0:
        core = _palindromic_core(p)
        if core is not None:
            poly, _ = core
            if not is_squarefree(p):
                raise PolynomialError("count_outside_unit needs a square-free polynomial")
            if poly.degree == 0:
                return 0
            q = _trace_polynomial(poly)
            two = Fraction(2)
            if sign_at(IntPolynomial(tuple(q)), two) == 0 or sign_at(IntPolynomial(tuple(q)), -two) == 0:
                raise PolynomialError("unexpected root at z = +-1")
            on_circle = _sturm_count(q, -two, two)
            return poly.degree // 2 - on_circle
    nu = 0
    for r in all_roots(p, tol):
        m = abs(r.value)
        if m - r.radius > 1:
            nu += 1
        elif m + r.radius >= 1:
            raise UndecidableError(f"root {complex(r.value)} is not separated from |z| = 1")
    return nu


def root_summary(p: IntPolynomial, tol: float = DEFAULT_TOL) -> RootSummary:
    roots = all_roots(p, tol)
    top = max(abs(r.value) for r in roots)
    err = max(r.radius for r in roots)
    with mpmath.workdps(30):
        m = mpmath.mpf(abs(p.leading))
        for r in roots:
            m *= max(mpmath.mpf(1), abs(r.value))
    return RootSummary(
        house=float(top),
        house_error=err,
        nu=count_outside_unit(p, tol),
        mahler=float(m),
        roots=roots,
    )


def real_root_in_interval(p: IntPolynomial, lo, hi, width: float = 1e-12) -> CertifiedRealRoot | None:
    """Bracket a real root of ``p`` in (lo, hi) by exact bisection.

    Only a strict sign change at the endpoints counts; otherwise returns None.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    s_lo, s_hi = sign_at(p, lo), sign_at(p, hi)
    if s_lo * s_hi >= 0:
        return None
    limit = Fraction(width)
    while hi - lo > limit:
        mid = (lo + hi) / 2
        s = sign_at(p, mid)
        if s == 0:
            return CertifiedRealRoot(mid, mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return CertifiedRealRoot(lo, hi)
