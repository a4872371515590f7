"""Indicial polynomial, root extraction and exceptional-case taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .ode import FrobeniusForm
from .scalars import GaussianRational, Scalar, gr_sqrt, is_exact, to_complex

__all__ = [
    "IndicialData",
    "CaseTag",
    "indicial_polynomial",
    "solve_roots",
    "classify_case",
    "integer_difference",
    "congruence_classes",
]

#: integer-difference and root-merging tolerance for floating roots
INT_TOL = 1e-8

_ONE = GaussianRational(1)


@dataclass(frozen=True)
class CaseTag:
    """Exceptional-case tag: which equalities / integer gaps the roots exhibit."""

    tag: str  # non_exceptional | o2_equal | o2_integer_diff | case_i .. case_iv | mixed
    m: Optional[int] = None
    p: Optional[int] = None
    detail: str = ""

    def __str__(self) -> str:
        args = [str(v) for v in (self.m, self.p) if v is not None]
        return self.tag + (f"({', '.join(args)})" if args else "")


@dataclass(frozen=True)
class IndicialData:
    poly: tuple  # scalar coefficients of q(r), low power first, monic
    roots: tuple  # ordered Re(r1) >= Re(r2) [>= Re(r3)], ties by decreasing Im
    case: CaseTag
    exact: bool  # whether the roots are exact Gaussian rationals


def indicial_polynomial(f: FrobeniusForm) -> tuple:
    """q(r) for the Frobenius form, monic, low power first."""
    b0, c0 = f.b[0], f.c[0]
    if f.order == 2:
        # r(r-1) + b0 r + c0
        return (c0, b0 - 1, _ONE)
    a0 = f.a[0]
    # r(r-1)(r-2) + a0 r(r-1) + b0 r + c0
    return (c0, GaussianRational(2) - a0 + b0, a0 - GaussianRational(3), _ONE)


def _poly_eval(poly: Sequence[Scalar], z):
    acc = poly[-1] if poly else 0
    for c in reversed(poly[:-1]):
        acc = acc * z + c
    return acc


def _rational_root(poly: Sequence[GaussianRational]) -> Optional[GaussianRational]:
    """A rational root of a monic poly with real-rational coefficients, or None."""
    if any(c.im != 0 for c in poly):
        return None
    fracs = [c.re for c in poly]
    from math import lcm

    den = lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * den) for f in fracs]
    # integer polynomial: rational roots p/q with p | ints[0]*? , q | lead
    a0, lead = ints[0], ints[-1]
    if a0 == 0:
        return GaussianRational(0)

    def divisors(n: int):
        n = abs(n)
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    for p in divisors(a0):
        for q in divisors(lead):
            for sgn in (1, -1):
                cand = Fraction(sgn * p, q)
                if _poly_eval(ints, cand) == 0:
                    return GaussianRational(cand)
    return None


def _deflate(poly: list, root: Scalar) -> list:
    """Synthetic division of a monic polynomial by (r - root)."""
    n = len(poly) - 1
    out = [None] * n
    out[n - 1] = poly[n]
    for i in range(n - 1, 0, -1):
        out[i - 1] = poly[i] + root * out[i]
    return out


def _exact_quadratic(poly: Sequence[GaussianRational]) -> Optional[list]:
    c, b, a = poly
    disc = b * b - GaussianRational(4) * a * c
    s = gr_sqrt(disc)
    if s is None:
        return None
    two_a = GaussianRational(2) * a
    return [(-b + s) / two_a, (-b - s) / two_a]


def _order_key(r: Scalar):
    z = to_complex(r)
    return (-z.real, -z.imag)


def solve_roots(poly: Sequence[Scalar]) -> tuple[tuple, bool]:
    """All roots of a degree-2/3 monic polynomial, ordered by decreasing real
    part (ties: decreasing imaginary part).  Returns (roots, exact_flag)."""
    poly = list(poly)
    deg = len(poly) - 1
    exact_in = all(is_exact(c) for c in poly)
    if exact_in:
        roots: list[Scalar] = []
        work = poly
        while len(work) - 1 > 2:
            r = _rational_root(work)
            if r is None:
                break
            roots.append(r)
            work = _deflate(work, r)
        if len(work) - 1 == 2:
            quad = _exact_quadratic(work)
            if quad is not None:
                roots.extend(quad)
                return tuple(sorted(roots, key=_order_key)), True
        elif len(work) - 1 == 1:
            roots.append(-work[0] / work[1])
            return tuple(sorted(roots, key=_order_key)), True
    # floating fallback: companion matrix + two Newton polish steps
    cpoly = [to_complex(c) for c in poly]
    arr = np.roots(list(reversed(cpoly)))
    dpoly = [k * cpoly[k] for k in range(1, deg + 1)]
    out = []
    for z in arr:
        z = complex(z)
        for _ in range(2):
            dp = _poly_eval(dpoly, z)
            if abs(dp) > 1e-14:
                z = z - _poly_eval(cpoly, z) / dp
        out.append(z)
    return tuple(sorted(out, key=_order_key)), False


def integer_difference(a: Scalar, b: Scalar, tol: float = INT_TOL) -> Optional[int]:
    """a - b when it is a (near-)integer, else None."""
    if is_exact(a) and is_exact(b):
        d = a - b
        if d.is_rational_integer:
            return int(d.re)
        return None
    d = to_complex(a) - to_complex(b)
    if abs(d.imag) <= tol and abs(d.real - round(d.real)) <= tol:
        return int(round(d.real))
    return None


def classify_case(roots: Sequence[Scalar], order: int | None = None) -> CaseTag:
    """Detect the equal-root / integer-gap configuration of the ordered roots."""
    roots = list(roots)
    order = order if order is not None else len(roots)
    if order == 2:
        d = integer_difference(roots[0], roots[1])
        if d == 0:
            return CaseTag("o2_equal")
        if d is not None and d > 0:
            return CaseTag("o2_integer_diff", m=d)
        return CaseTag("non_exceptional")
    r1, r2, r3 = roots
    d12 = integer_difference(r1, r2)
    d23 = integer_difference(r2, r3)
    d13 = integer_difference(r1, r3)
    if d12 == 0 and d23 == 0:
        return CaseTag("case_i")
    if d12 == 0 and d23 is not None and d23 > 0:
        return CaseTag("case_ii", m=d23)
    if d23 == 0 and d12 is not None and d12 > 0:
        return CaseTag("case_iii", m=d12)
    if d12 is not None and d12 > 0 and d23 is not None and d23 > 0:
        return CaseTag("case_iv", m=d12, p=d23)
    if d12 == 0:
        return CaseTag("mixed", detail="r1=r2, r3 non-congruent")
    if d23 == 0:
        return CaseTag("mixed", detail="r2=r3, r1 non-congruent")
    if d12 is not None and d12 > 0:
        return CaseTag("mixed", m=d12, detail="r1-r2 integer, r3 non-congruent")
    if d23 is not None and d23 > 0:
        return CaseTag("mixed", m=d23, detail="r2-r3 integer, r1 non-congruent")
    if d13 is not None and d13 > 0:
        return CaseTag("mixed", m=d13, detail="r1-r3 integer, r2 non-congruent")
    return CaseTag("non_exceptional")


def congruence_classes(roots: Sequence[Scalar]) -> list[list[tuple[Scalar, int]]]:
    """Group ordered roots into integer-difference classes.

    Each class is a list of (value, multiplicity), sorted by decreasing real
    part, with near-equal floating roots merged into one multiplicity.
    """
    classes: list[list[Scalar]] = []
    for r in roots:
        for cls in classes:
            if integer_difference(r, cls[0]) is not None:
                cls.append(r)
                break
        else:
            classes.append([r])
    out = []
    for cls in classes:
        cls_sorted = sorted(cls, key=_order_key)
        grouped: list[tuple[Scalar, int]] = []
        for r in cls_sorted:
            if grouped and integer_difference(r, grouped[-1][0]) == 0:
                grouped[-1] = (grouped[-1][0], grouped[-1][1] + 1)
            else:
                grouped.append((r, 1))
        out.append(grouped)
    return out


def analyze(f: FrobeniusForm) -> IndicialData:
    """Full indicial pipeline: polynomial, roots, case tag."""
    poly = indicial_polynomial(f)
    roots, exact = solve_roots(poly)
    return IndicialData(tuple(poly), roots, classify_case(roots, f.order), exact)
