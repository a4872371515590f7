"""Truncated power series, nilpotent jets, and generalized log-power series.

Three layers of calculus:

* :class:`Series` — a plain truncated power series ``sum d_n x^n`` with explicit
  truncation order.
* :class:`Jet` — a truncated Taylor expansion in a nilpotent parameter epsilon,
  used to push derivatives with respect to the indicial root through the
  coefficient recurrences.
* :class:`GeneralizedSeries` — a finite sum of terms ``x^rho (log x)^m series(x)``,
  the universal representation for solutions near a regular singular point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .scalars import (
    GaussianRational,
    Scalar,
    as_exact,
    is_exact,
    scalar_is_zero,
    to_complex,
)

__all__ = [
    "Series",
    "Jet",
    "JetValuationError",
    "GSTerm",
    "GeneralizedSeries",
    "series_arith",
    "series_inverse",
    "series_div",
    "series_exp",
    "laurent_ratio",
    "poly_eval_jet",
    "gs_differentiate",
    "gs_integrate",
    "gs_evaluate",
    "gs_from_series",
]

#: merging tolerance for floating exponents in GeneralizedSeries normalization
EXP_TOL = 1e-9

_ZERO = GaussianRational(0)


def _as_scalar_list(coeffs: Iterable) -> tuple:
    out = []
    for c in coeffs:
        if isinstance(c, (GaussianRational, complex)):
            out.append(c)
        elif isinstance(c, int):
            out.append(GaussianRational(c))
        elif isinstance(c, float):
            out.append(complex(c))
        elif isinstance(c, (str, Fraction, tuple, list)):
            out.append(as_exact(c))
        else:
            out.append(c)
    return tuple(out)


class Series:
    """Truncated power series: coefficients for x^0 .. x^trunc."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, trunc: int | None = None):
        cs = list(_as_scalar_list(coeffs))
        if trunc is not None:
            if len(cs) > trunc + 1:
                cs = cs[: trunc + 1]
            while len(cs) < trunc + 1:
                cs.append(_ZERO)
        elif not cs:
            cs = [_ZERO]
        self.coeffs = tuple(cs)

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Scalar:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return _ZERO

    def magnitude(self) -> float:
        return max((abs(to_complex(c)) for c in self.coeffs), default=0.0)

    def is_zero(self, scale: float | None = None) -> bool:
        s = scale if scale is not None else 1.0
        return all(scalar_is_zero(c, s) for c in self.coeffs)

    def valuation(self, scale: float | None = None) -> int | None:
        """Index of the first non-negligible coefficient, or None if all vanish."""
        s = scale if scale is not None else max(1.0, self.magnitude())
        for n, c in enumerate(self.coeffs):
            if not scalar_is_zero(c, s):
                return n
        return None

    # -- arithmetic (truncates to the shorter operand) ---------------------
    def __add__(self, other: "Series") -> "Series":
        n = min(len(self.coeffs), len(other.coeffs))
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __sub__(self, other: "Series") -> "Series":
        n = min(len(self.coeffs), len(other.coeffs))
        return Series([self.coeffs[i] - other.coeffs[i] for i in range(n)])

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs])

    def __mul__(self, other: "Series") -> "Series":
        n = min(len(self.coeffs), len(other.coeffs))
        out = [_ZERO] * n
        for i in range(n):
            a = self.coeffs[i]
            if isinstance(a, GaussianRational) and not a:
                continue
            for j in range(n - i):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return Series(out)

    def scale(self, k: Scalar) -> "Series":
        return Series([k * c for c in self.coeffs])

    def shift(self, k: int) -> "Series":
        """Multiply by x^k (k >= 0) or divide by x^{-k}, keeping trunc."""
        if k >= 0:
            return Series(([_ZERO] * k) + list(self.coeffs), trunc=self.trunc)
        return Series(list(self.coeffs[-k:]), trunc=self.trunc)

    def truncate(self, n: int) -> "Series":
        return Series(self.coeffs, trunc=n)

    def derivative(self) -> "Series":
        """d/dx as a plain series; trunc drops by one."""
        if len(self.coeffs) == 1:
            return Series([_ZERO])
        return Series([(n + 1) * self.coeffs[n + 1] for n in range(len(self.coeffs) - 1)])

    def evaluate(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + to_complex(c)
        return acc

    def conjugate(self) -> "Series":
        return Series([c.conjugate() for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self[i] == other[i] for i in range(n))

    def __repr__(self) -> str:
        return f"Series({list(self.coeffs)!r})"


def series_arith(a: Series, b: Series, op: str) -> Series:
    """Public add/mul with the strict equal-truncation contract."""
    if a.trunc != b.trunc:
        raise ValueError(f"truncation mismatch: {a.trunc} != {b.trunc}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def series_inverse(a: Series) -> Series:
    """Multiplicative inverse of a series with invertible constant term."""
    a0 = a.coeffs[0]
    if scalar_is_zero(a0, max(1.0, a.magnitude())):
        raise ZeroDivisionError("series has no invertible constant term")
    n = len(a.coeffs)
    inv0 = (GaussianRational(1) / a0) if is_exact(a0) else (1.0 / to_complex(a0))
    out = [inv0]
    for k in range(1, n):
        acc = _ZERO
        for j in range(1, k + 1):
            acc = acc + a.coeffs[j] * out[k - j]
        out.append(-inv0 * acc)
    return Series(out)


def series_div(a: Series, b: Series) -> Series:
    return a * series_inverse(b)


def series_exp(a: Series) -> Series:
    """exp of a series with zero constant term."""
    if not scalar_is_zero(a.coeffs[0], max(1.0, a.magnitude())):
        raise ValueError("series_exp requires zero constant term")
    n = len(a.coeffs)
    out = [GaussianRational(1) if is_exact(a.coeffs[0]) else 1.0 + 0j]
    for k in range(1, n):
        acc = _ZERO
        for j in range(1, k + 1):
            acc = acc + (j * a.coeffs[j]) * out[k - j]
        out.append(acc / k)
    return Series(out)


def laurent_ratio(num: Series, den: Series) -> tuple[int, Series]:
    """num/den as x^shift * unit, where unit has an invertible constant term.

    Returns (shift, unit-quotient).  shift < 0 means the ratio has a pole of
    order -shift.  The quotient's trunc shrinks by the cancelled valuations.
    """
    vd = den.valuation()
    if vd is None:
        raise ZeroDivisionError("division by a series that vanishes through trunc")
    vn = num.valuation()
    if vn is None:
        return 0, Series([_ZERO], trunc=num.trunc)
    v = max(vn, vd)
    nn = Series(num.coeffs[vn:])
    dd = Series(den.coeffs[vd:])
    q = series_div(nn.truncate(num.trunc - v), dd.truncate(den.trunc - v))
    return vn - vd, q


class JetValuationError(ArithmeticError):
    """Jet division where the numerator vanishes to lower order than the divisor.

    Signals a resonance-bookkeeping mismatch; never silently absorbed.
    """


class Jet:
    """Truncated expansion sum_t c_t eps^t with eps nilpotent."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        self.coeffs = tuple(_as_scalar_list(coeffs)) or (_ZERO,)

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "Jet":
        return cls([value] + [_ZERO] * order)

    @classmethod
    def variable(cls, base: Scalar, order: int) -> "Jet":
        """base + eps."""
        one = GaussianRational(1) if is_exact(base) else 1.0 + 0j
        cs = [base] + [_ZERO] * order
        if order >= 1:
            cs[1] = one
        return cls(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def magnitude(self) -> float:
        return max((abs(to_complex(c)) for c in self.coeffs), default=0.0)

    def valuation(self, scale: float = 1.0) -> int | None:
        for t, c in enumerate(self.coeffs):
            if not scalar_is_zero(c, scale):
                return t
        return None

    def __add__(self, other: "Jet") -> "Jet":
        n = min(len(self.coeffs), len(other.coeffs))
        return Jet([self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __sub__(self, other: "Jet") -> "Jet":
        n = min(len(self.coeffs), len(other.coeffs))
        return Jet([self.coeffs[i] - other.coeffs[i] for i in range(n)])

    def __neg__(self) -> "Jet":
        return Jet([-c for c in self.coeffs])

    def __mul__(self, other: "Jet") -> "Jet":
        n = min(len(self.coeffs), len(other.coeffs))
        out = [_ZERO] * n
        for i in range(n):
            a = self.coeffs[i]
            if isinstance(a, GaussianRational) and not a:
                continue
            for j in range(n - i):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return Jet(out)

    def scale(self, k: Scalar) -> "Jet":
        return Jet([k * c for c in self.coeffs])

    def div(self, other: "Jet", scale: float = 1.0) -> "Jet":
        """Valuation-cancelling division; the result's order drops by the
        divisor's valuation."""
        v = other.valuation(max(scale, other.magnitude()))
        if v is None:
            raise ZeroDivisionError("jet division by zero")
        if v > 0:
            nv = self.valuation(max(scale, self.magnitude(), 1.0))
            if nv is None:
                # identically zero numerator divides cleanly
                return Jet([_ZERO] * max(1, len(self.coeffs) - v))
            if nv < v:
                raise JetValuationError(
                    f"numerator valuation {nv} < divisor valuation {v}"
                )
        num = Jet(self.coeffs[v:] if v < len(self.coeffs) else [_ZERO])
        den = Jet(other.coeffs[v:])
        # invert the unit jet den
        d0 = den.coeffs[0]
        inv0 = (GaussianRational(1) / d0) if is_exact(d0) else (1.0 / to_complex(d0))
        n = min(len(num.coeffs), len(den.coeffs))
        out = []
        for k in range(n):
            acc = num.coeffs[k] if k < len(num.coeffs) else _ZERO
            for j in range(1, k + 1):
                acc = acc - den.coeffs[j] * out[k - j]
            out.append(inv0 * acc)
        return Jet(out)

    def coeff(self, t: int) -> Scalar:
        if t < len(self.coeffs):
            return self.coeffs[t]
        raise IndexError(f"jet coefficient {t} beyond reliable order {self.order}")

    def derivative_value(self, t: int) -> Scalar:
        """t-th derivative value: t! times the eps^t coefficient."""
        return math.factorial(t) * self.coeff(t)

    def __repr__(self) -> str:
        return f"Jet({list(self.coeffs)!r})"


def poly_eval_jet(poly: Sequence[Scalar], point: Scalar, order: int) -> Jet:
    """Evaluate a scalar polynomial (coeff list, low to high) at point + eps."""
    x = Jet.variable(point, order)
    acc = Jet.constant(_ZERO, order)
    for c in reversed(list(poly)):
        acc = acc * x + Jet.constant(c, order)
    return acc


# ---------------------------------------------------------------------------
# Generalized series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GSTerm:
    """One term x^exponent (log x)^logpow * body(x)."""

    exponent: Scalar
    logpow: int
    body: Series


def _exp_diff_integer(a: Scalar, b: Scalar) -> int | None:
    """If a - b is a (near-)integer, return it, else None."""
    if is_exact(a) and is_exact(b):
        d = a - b
        if d.is_rational_integer:
            return int(d.re)
        return None
    d = to_complex(a) - to_complex(b)
    if abs(d.imag) <= EXP_TOL and abs(d.real - round(d.real)) <= EXP_TOL:
        return int(round(d.real))
    return None


class GeneralizedSeries:
    """Finite sum of x^rho (log x)^m * Series terms, kept in canonical form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[GSTerm], normalize: bool = True):
        ts = tuple(terms)
        if normalize:
            ts = _normalize_terms(ts)
        self.terms = ts

    @property
    def trunc(self) -> int:
        if not self.terms:
            return 0
        return min(t.body.trunc for t in self.terms)

    def magnitude(self) -> float:
        return max((t.body.magnitude() for t in self.terms), default=0.0)

    def is_zero(self) -> bool:
        return not self.terms

    def max_logpow(self) -> int:
        return max((t.logpow for t in self.terms), default=0)

    def __add__(self, other: "GeneralizedSeries") -> "GeneralizedSeries":
        return GeneralizedSeries(self.terms + other.terms)

    def __sub__(self, other: "GeneralizedSeries") -> "GeneralizedSeries":
        return self + other.scale(GaussianRational(-1))

    def __mul__(self, other: "GeneralizedSeries") -> "GeneralizedSeries":
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                out.append(
                    GSTerm(t1.exponent + t2.exponent, t1.logpow + t2.logpow, t1.body * t2.body)
                )
        return GeneralizedSeries(out)

    def scale(self, k: Scalar) -> "GeneralizedSeries":
        return GeneralizedSeries(
            [GSTerm(t.exponent, t.logpow, t.body.scale(k)) for t in self.terms],
            normalize=False,
        )

    def shift_exponent(self, delta: Scalar) -> "GeneralizedSeries":
        return GeneralizedSeries(
            [GSTerm(t.exponent + delta, t.logpow, t.body) for t in self.terms],
            normalize=False,
        )

    def conjugate(self) -> "GeneralizedSeries":
        return GeneralizedSeries(
            [GSTerm(t.exponent.conjugate(), t.logpow, t.body.conjugate()) for t in self.terms],
            normalize=False,
        )

    def truncate(self, n: int) -> "GeneralizedSeries":
        return GeneralizedSeries(
            [GSTerm(t.exponent, t.logpow, t.body.truncate(n)) for t in self.terms],
            normalize=False,
        )

    def log_free(self) -> bool:
        return all(t.logpow == 0 for t in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "GeneralizedSeries(0)"
        bits = [
            f"x^{t.exponent!r}*log^{t.logpow}*{t.body!r}" for t in self.terms
        ]
        return "GeneralizedSeries(" + " + ".join(bits) + ")"


def _normalize_terms(terms: tuple[GSTerm, ...]) -> tuple[GSTerm, ...]:
    """Fold integer exponent offsets into bodies, merge, drop zero terms."""
    if not terms:
        return ()
    scale = max(1.0, max((t.body.magnitude() for t in terms), default=0.0))
    # choose class representatives: smallest real part within each integer class
    reps: list[Scalar] = []
    for t in terms:
        placed = False
        for i, r in enumerate(reps):
            k = _exp_diff_integer(t.exponent, r)
            if k is not None:
                if k < 0:
                    reps[i] = t.exponent
                placed = True
                break
        if placed:
            continue
        reps.append(t.exponent)
    merged: dict[tuple[int, int], Series] = {}
    rep_of: dict[tuple[int, int], Scalar] = {}
    trunc = min(t.body.trunc for t in terms)
    for t in terms:
        for i, r in enumerate(reps):
            k = _exp_diff_integer(t.exponent, r)
            if k is not None:
                key = (i, t.logpow)
                body = t.body.truncate(trunc).shift(k)
                if key in merged:
                    merged[key] = merged[key] + body
                else:
                    merged[key] = body
                    rep_of[key] = r
                break
    out = []
    for key in sorted(
        merged,
        key=lambda k: (
            to_complex(rep_of[k]).real,
            to_complex(rep_of[k]).imag,
            k[1],
        ),
    ):
        body = merged[key]
        if body.is_zero(scale):
            continue
        rho, k2 = rep_of[key], key[1]
        # compact: strip exactly-zero leading coefficients into the exponent
        v = 0
        while v < len(body.coeffs) and _hard_zero(body.coeffs[v]):
            v += 1
        if v and v <= body.trunc:
            body = Series(body.coeffs[v:])
            rho = rho + v
        out.append(GSTerm(rho, k2, body))
    return tuple(out)


def _hard_zero(c: Scalar) -> bool:
    if is_exact(c):
        return not bool(c)
    return c == 0


def gs_from_series(body: Series, exponent: Scalar = _ZERO, logpow: int = 0) -> GeneralizedSeries:
    return GeneralizedSeries([GSTerm(exponent, logpow, body)])


def gs_differentiate(g: GeneralizedSeries) -> GeneralizedSeries:
    """d/dx termwise; body truncation drops by one (last coefficient unreliable)."""
    out = []
    for t in g.terms:
        n_new = max(t.body.trunc - 1, 0)
        power_body = Series(
            [(t.exponent + n) * t.body[n] for n in range(n_new + 1)]
        )
        out.append(GSTerm(t.exponent - 1, t.logpow, power_body))
        if t.logpow >= 1:
            out.append(
                GSTerm(t.exponent - 1, t.logpow - 1, t.body.truncate(n_new).scale(t.logpow))
            )
    return GeneralizedSeries(out)


def gs_integrate(g: GeneralizedSeries) -> GeneralizedSeries:
    """Termwise antiderivative (integration constants fixed to zero)."""
    out = []
    for t in g.terms:
        rho, m, body = t.exponent, t.logpow, t.body
        N = body.trunc
        bodies = [[_ZERO] * (N + 1) for _ in range(m + 1)]
        log_raised = [_ZERO] * (N + 1)
        exact_mode = is_exact(rho) and all(is_exact(c) for c in body.coeffs)
        for n in range(N + 1):
            d = body[n]
            if _hard_zero(d):
                continue
            s1 = rho + n + 1  # s + 1
            resonant = (
                (is_exact(s1) and not bool(s1))
                or (not is_exact(s1) and abs(to_complex(s1)) <= EXP_TOL)
            )
            if resonant:
                # integral of x^{-1} log^m is log^{m+1}/(m+1)
                log_raised[n] = d / (m + 1)
                continue
            inv = (GaussianRational(1) / s1) if is_exact(s1) else (1.0 / to_complex(s1))
            fac = inv
            for j in range(m, -1, -1):
                coef = ((-1) ** (m - j)) * (math.factorial(m) // math.factorial(j))
                bodies[j][n] = bodies[j][n] + coef * fac * d
                fac = fac * inv
        for j in range(m + 1):
            out.append(GSTerm(rho + 1, j, Series(bodies[j])))
        if any(not _hard_zero(c) for c in log_raised):
            # these came from x^{rho+n} with rho+n = -1; exponent folds to 0
            for n in range(N + 1):
                if not _hard_zero(log_raised[n]):
                    out.append(
                        GSTerm(rho + n + 1, m + 1, Series([log_raised[n]], trunc=N))
                    )
        del exact_mode
    return GeneralizedSeries(out)


def gs_evaluate(g: GeneralizedSeries, x: complex, branch: str = "principal") -> complex:
    """Evaluate with the principal branch of log."""
    if x == 0:
        for t in g.terms:
            if to_complex(t.exponent).real < 0 or t.logpow > 0:
                raise ValueError("evaluation at 0 with singular term present")
        return sum(
            (to_complex(t.body[0]) if to_complex(t.exponent) == 0 else 0j)
            for t in g.terms
        )
    lx = cmath.log(x)
    acc = 0j
    for t in g.terms:
        acc += cmath.exp(to_complex(t.exponent) * lx) * (lx ** t.logpow) * t.body.evaluate(x)
    return acc


def gs_div_single(g: GeneralizedSeries, d: GeneralizedSeries) -> GeneralizedSeries:
    """Divide by a log-free single-class GeneralizedSeries with a unit leading term."""
    if len(d.terms) != 1 or d.terms[0].logpow != 0:
        raise ValueError("divisor must normalize to a single log-free term")
    dt = d.terms[0]
    v = dt.body.valuation()
    if v is None:
        raise ZeroDivisionError("divisor vanishes through trunc")
    unit = Series(dt.body.coeffs[v:])
    inv = series_inverse(unit)
    out = []
    for t in g.terms:
        out.append(
            GSTerm(t.exponent - dt.exponent - v, t.logpow, t.body * inv)
        )
    return GeneralizedSeries(out)
