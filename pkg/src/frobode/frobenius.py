"""Series fundamental systems at regular singular points.

The engine runs the coefficient recurrence

    E_n(r) = sum_{j<n} [ (j+r)(j+r-1) a_{n-j} + (j+r) b_{n-j} + c_{n-j} ] D_j(r)
    D_n(r) = -E_n(r) / q(n+r),      D_0 = seed(r)

(order 2 drops the quadratic block) with the root variable carried as a
nilpotent jet r = base + eps, so that derivatives with respect to r -- which
produce the logarithmic solutions in the exceptional cases -- come out of the
same O(N^2) loop.  Repeated roots and positive-integer root gaps make
q(n + base + eps) vanish to some order in eps at the resonant indices; seeds
(r - base)^s supply matching eps-valuation so the division cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .indicial import (
    IndicialData,
    analyze,
    congruence_classes,
    integer_difference,
)
from .ode import FrobeniusForm, Ode, to_frobenius_form
from .scalars import GaussianRational, Scalar, is_exact, scalar_is_zero, to_complex
from .series import (
    GSTerm,
    GeneralizedSeries,
    Jet,
    JetValuationError,
    Series,
    gs_differentiate,
    gs_from_series,
)

__all__ = [
    "FundamentalSystem",
    "FormalProbe",
    "WronskianResult",
    "solve_euler",
    "frobenius_solve",
    "solve",
    "recurrence_coefficients",
    "recurrence_jets",
    "formal_probe",
    "wronskian_ode_solution",
    "wronskian_of_system",
    "residual",
    "residual_valuation",
]

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


@dataclass(frozen=True)
class FundamentalSystem:
    solutions: tuple  # GeneralizedSeries, ordered to match indicial.roots
    indicial: IndicialData
    trunc: int
    constants: dict = field(default_factory=dict)  # the c / c_tilde of the log cases
    warnings: tuple = ()


# ---------------------------------------------------------------------------
# recurrence kernels
# ---------------------------------------------------------------------------


def _structural_zero(*cs: Scalar) -> bool:
    return all((is_exact(c) and not bool(c)) or c == 0 for c in cs)


def recurrence_jets(
    f: FrobeniusForm,
    roots: Sequence[Scalar],
    base: Scalar,
    seed_pow: int,
    jet_order: int,
    N: int,
) -> list[Jet]:
    """Run the recurrence with r = base + eps, seed D_0 = eps^seed_pow.

    `roots` are the indicial roots; q(n + r) is formed as the product of
    (n + base - r_i + eps) factors with near-zero constant parts snapped to
    exact zero, which makes resonance detection structural rather than a
    floating tolerance question.
    """
    order = f.order
    a, b, c = f.a, f.b, f.c
    seed = [_ZERO] * (jet_order + 1)
    if seed_pow > jet_order:
        raise ValueError("seed power exceeds jet order")
    seed[seed_pow] = _ONE
    D = [Jet(seed)]
    # (j + r) and (j + r)(j + r - 1) jets for all j
    p1 = [Jet.variable(base + j, jet_order) for j in range(N)]
    if order == 3:
        p2 = [p1[j] * Jet.variable(base + j - 1, jet_order) for j in range(N)]
    running = max(1.0, f.b.magnitude(), f.c.magnitude(),
                  f.a.magnitude() if f.a is not None else 0.0)
    for n in range(1, N + 1):
        acc: Optional[Jet] = None
        for j in range(n):
            k = n - j
            ak = a[k] if order == 3 else _ZERO
            bk, ck = b[k], c[k]
            if _structural_zero(ak, bk, ck):
                continue
            w = p1[j].scale(bk)
            if order == 3 and not _structural_zero(ak):
                w = w + p2[j].scale(ak)
            term = w * D[j] + D[j].scale(ck)
            acc = term if acc is None else acc + term
        if acc is None:
            acc = Jet([_ZERO] * (jet_order + 1))
        qn = _q_jet(roots, base, n, jet_order)
        dn = (-acc).div(qn, scale=running)
        D.append(dn)
        running = max(running, dn.magnitude(), acc.magnitude())
    return D


def _q_jet(roots: Sequence[Scalar], base: Scalar, n: int, jet_order: int) -> Jet:
    out = Jet.constant(_ONE, jet_order)
    for r in roots:
        d = base + n - r
        if integer_difference(base + n, r) == 0:
            d = _ZERO if is_exact(d) else 0j
        out = out * Jet.variable(d, jet_order)
    return out


def recurrence_coefficients(f: FrobeniusForm, r: Scalar, N: int) -> list[Scalar]:
    """Plain scalar recurrence D_n at an arbitrary (non-resonant) exponent r."""
    jets = recurrence_jets_free(f, r, N)
    return [j.coeffs[0] for j in jets]


def recurrence_jets_free(f: FrobeniusForm, r: Scalar, N: int, jet_order: int = 0) -> list[Jet]:
    """Recurrence at an exponent that need not be an indicial root.

    q(n+r) is evaluated from the indicial polynomial directly; divisions must
    be invertible (no resonance handling)."""
    from .indicial import indicial_polynomial
    from .series import poly_eval_jet

    qpoly = indicial_polynomial(f)
    order = f.order
    a, b, c = f.a, f.b, f.c
    D = [Jet.constant(_ONE, jet_order)]
    p1 = [Jet.variable(r + j, jet_order) for j in range(N)]
    if order == 3:
        p2 = [p1[j] * Jet.variable(r + j - 1, jet_order) for j in range(N)]
    running = 1.0
    for n in range(1, N + 1):
        acc = Jet([_ZERO] * (jet_order + 1))
        for j in range(n):
            k = n - j
            ak = a[k] if order == 3 else _ZERO
            bk, ck = b[k], c[k]
            if _structural_zero(ak, bk, ck):
                continue
            w = p1[j].scale(bk)
            if order == 3 and not _structural_zero(ak):
                w = w + p2[j].scale(ak)
            acc = acc + w * D[j] + D[j].scale(ck)
        qn = poly_eval_jet(qpoly, r + n, jet_order)
        dn = (-acc).div(qn, scale=running)
        D.append(dn)
        running = max(running, dn.magnitude())
    return D


def _emit_solution(base: Scalar, D: list[Jet], j: int, N: int) -> GeneralizedSeries:
    """The j-th r-derivative of x^r sum D_n(r) x^n at r = base, as a
    GeneralizedSeries: sum_t C(j,t) (log x)^t x^base sum_n D_n^{(j-t)} x^n."""
    terms = []
    for t in range(j + 1):
        fac = math.comb(j, t) * math.factorial(j - t)
        body = Series([fac * D[n].coeff(j - t) for n in range(N + 1)])
        terms.append(GSTerm(base, t, body))
    return GeneralizedSeries(terms)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def solve_euler(f: FrobeniusForm, N: int = 32) -> FundamentalSystem:
    """Closed-form basis for a constant-coefficient (Euler) Frobenius form:
    powers x^r with log-powers up to the root multiplicity."""
    ind = analyze(f)
    groups: list[tuple[Scalar, int]] = []
    for r in ind.roots:
        if groups and integer_difference(r, groups[-1][0]) == 0 and _same_root(r, groups[-1][0]):
            groups[-1] = (groups[-1][0], groups[-1][1] + 1)
        else:
            groups.append((r, 1))
    sols = []
    for r, mult in groups:
        for t in range(mult):
            sols.append(
                GeneralizedSeries([GSTerm(r, t, Series([_ONE], trunc=N))])
            )
    return FundamentalSystem(tuple(sols), ind, N)


def _same_root(a: Scalar, b: Scalar) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(to_complex(a) - to_complex(b)) <= 1e-8


def frobenius_solve(f: FrobeniusForm, N: int = 32) -> FundamentalSystem:
    """Fundamental system at a regular singular (or ordinary) chart origin."""
    if f.is_constant():
        return solve_euler(f, N)
    ind = analyze(f)
    roots = ind.roots
    classes = congruence_classes(roots)
    entries = []  # (sort_key, solution)
    constants: dict = {}
    warnings: list[str] = []
    for cls in classes:
        above = 0  # total multiplicity of class members above the current one
        for idx, (v, mu) in enumerate(cls):
            if idx == 0:
                jets = recurrence_jets(f, roots, v, 0, mu - 1, N)
                for j in range(mu):
                    entries.append(((v, j), _emit_solution(v, jets, j, N)))
            else:
                sols, info = _subordinate_solutions(f, roots, v, mu, above, N)
                for j, s in enumerate(sols):
                    entries.append(((v, j), s))
                constants.update(info.get("constants", {}))
                warnings.extend(info.get("warnings", []))
            above += mu
    entries.sort(key=lambda e: (-to_complex(e[0][0]).real, -to_complex(e[0][0]).imag, e[0][1]))
    sols = tuple(s for _, s in entries)
    # label the log constants per the case taxonomy
    return FundamentalSystem(sols, ind, N, constants, tuple(warnings))


def _subordinate_solutions(
    f: FrobeniusForm,
    roots: Sequence[Scalar],
    base: Scalar,
    mu: int,
    above: int,
    N: int,
) -> tuple[list[GeneralizedSeries], dict]:
    """Solutions attached to a non-maximal class member.

    Seeds (r-base)^s are tried in increasing order starting from the paper's
    choice; a seed fails (JetValuationError) when an eps-cancellation it relies
    on does not occur, in which case the next seed always absorbs one more
    resonance and eventually s = `above` is unconditionally safe.
    """
    s_first = 0 if mu > 1 else 1
    info: dict = {"constants": {}, "warnings": []}
    last_err: Exception | None = None
    for s in range(s_first, above + 1):
        jet_order = s + mu - 1 + above
        try:
            jets = recurrence_jets(f, roots, base, s, jet_order, N)
        except JetValuationError as err:
            last_err = err
            continue
        sols = [_emit_solution(base, jets, j, N) for j in range(s, s + mu)]
        if s > s_first:
            info["warnings"].append(
                f"seed (r-base)^{s} used at exponent {base!r}: the paper's"
                f" lower-order seed hit an uncancelled resonance"
            )
        info["constants"].update(_read_log_constants(jets, roots, base, s, N))
        return sols, info
    raise JetValuationError(
        f"no admissible seed at exponent {base!r}: {last_err}"
    )


def _read_log_constants(jets: list[Jet], roots, base, s: int, N: int) -> dict:
    """The c / c_tilde constants: the eps^0 coefficient of D at the first
    resonant index, which multiplies the leading exponent of the higher
    solution in the log term."""
    if s not in (1, 2):
        return {}
    # resonant indices above the base exponent (with repetition by multiplicity)
    res = sorted(
        n for r in roots
        if (n := integer_difference(r, base)) is not None and 0 < n <= N
    )
    if not res:
        return {}
    val = jets[res[0]].coeffs[0]
    if len(set(res)) >= 2:
        # two distinct resonances (case iv at the bottom root): the read-off
        # multiplies the middle solution's leading exponent
        return {"c_tilde": val}
    return {"c": val}


def solve(e: Ode, N: int = 32) -> FundamentalSystem:
    """Convenience: normalize an Ode at Finite(0) and solve."""
    return frobenius_solve(to_frobenius_form(e), N)


# ---------------------------------------------------------------------------
# formal probing at arbitrary (possibly irregular) points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormalProbe:
    status: str  # "solutions" | "trivial_only" | "divergent_formal"
    candidates: tuple  # Series tuple (one per free coefficient)
    trace: tuple  # first K ratio magnitudes |a_{k+1}/a_k| of the primary candidate
    radius_estimate: float  # may be 0.0 or math.inf


def formal_probe(e: Ode, N: int = 32, trace_len: int = 10) -> FormalProbe:
    """Plain power-series ansatz in the raw equation; reports whether
    nontrivial formal solutions exist and estimates their radius."""
    rows = []
    order = e.order
    exact = all(is_exact(c) for row in e.coeffs for c in row.coeffs)
    for k in range(N + order + 1):
        row = [_ZERO] * (N + 1)
        support_ok = True
        for n in range(0, k + order + 1):
            coef = _ZERO
            for i, arow in enumerate(e.coeffs):  # arow multiplies y^(order-i)
                deriv = order - i
                idx = k - n + deriv
                if 0 <= idx <= arow.trunc:
                    cc = arow[idx]
                    if not _structural_zero(cc):
                        coef = coef + _falling(n, deriv) * cc
            if _structural_zero(coef):
                continue
            if not is_exact(coef) and scalar_is_zero(coef, max(1.0, _row_mag(e))):
                continue
            if n > N:
                support_ok = False
                break
            row[n] = coef
        if support_ok and any(not _structural_zero(c) for c in row):
            rows.append(row)
    basis = _nullspace(rows, N + 1, exact)
    if not basis:
        return FormalProbe("trivial_only", (), (), math.inf)
    candidates = tuple(_monic_leading(Series(v)) for v in basis)
    primary = candidates[0]
    trace = []
    for k in range(min(trace_len, N)):
        a0, a1 = to_complex(primary[k]), to_complex(primary[k + 1])
        trace.append(abs(a1 / a0) if a0 != 0 else math.inf)
    radius = min(_radius_estimate(c) for c in candidates)
    status = "divergent_formal" if radius < 1e-3 else "solutions"
    return FormalProbe(status, candidates, tuple(trace), radius)


def _monic_leading(s: Series) -> Series:
    v = s.valuation()
    if v is None:
        return s
    lead = s.coeffs[v]
    if is_exact(lead):
        return s.scale(GaussianRational(1) / lead)
    return s.scale(1.0 / to_complex(lead))


def _row_mag(e: Ode) -> float:
    return max(r.magnitude() for r in e.coeffs)


def _falling(n: int, i: int) -> int:
    out = 1
    for t in range(i):
        out *= n - t
    return out


def _nullspace(rows: list[list], ncols: int, exact: bool) -> list[list]:
    """Nullspace basis by Gaussian elimination; exact or floating pivoting."""
    mat = [list(r) for r in rows]
    if not exact:
        mat = [[to_complex(c) for c in r] for r in mat]
    pivots: dict[int, int] = {}  # col -> row index
    used = [False] * len(mat)
    for col in range(ncols):
        best, bestmag = None, 0.0
        for ri, row in enumerate(mat):
            if used[ri]:
                continue
            mag = abs(to_complex(row[col]))
            if exact:
                if row[col] != 0 and (best is None):
                    best = ri
                    break
            elif mag > bestmag:
                best, bestmag = ri, mag
        if best is None:
            continue
        if not exact:
            rowscale = max(abs(to_complex(c)) for c in mat[best])
            if bestmag <= 1e-10 * max(1.0, rowscale):
                continue
        used[best] = True
        pivots[col] = best
        prow = mat[best]
        inv = (_ONE / prow[col]) if exact else (1.0 / prow[col])
        mat[best] = [inv * c for c in prow]
        for ri, row in enumerate(mat):
            if ri == best:
                continue
            fac = row[col]
            if _structural_zero(fac) if exact else fac == 0:
                continue
            mat[ri] = [row[j] - fac * mat[best][j] for j in range(ncols)]
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [_ZERO] * ncols
        vec[fc] = _ONE if exact else 1.0 + 0j
        for col, ri in pivots.items():
            vec[col] = -mat[ri][fc] * (_ONE if exact else (1.0 + 0j))
        basis.append(vec)
    return basis


def _radius_estimate(s: Series, tail: int = 8) -> float:
    """1 / limsup |a_n|^(1/n) from the last `tail` terms, with a growth-trend
    test: steadily increasing |a_n|^(1/n) (super-geometric coefficients)
    reports radius 0."""
    mags = [abs(to_complex(c)) for c in s.coeffs]
    idx = [n for n in range(1, len(mags)) if mags[n] > 0]
    if not idx:
        return math.inf
    last = idx[-tail:]
    if len(last) < 3:
        return math.inf
    rho = [mags[n] ** (1.0 / n) for n in last]
    increasing = all(b >= a * (1 - 1e-9) for a, b in zip(rho, rho[1:]))
    if increasing and rho[-1] > 1.10 * rho[0]:
        return 0.0
    return 1.0 / max(rho)


# ---------------------------------------------------------------------------
# wronskians and residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WronskianResult:
    """W = K x^exponent exp(series) -- or, when b/a has a pole of order >= 2,
    an essential singularity described by the principal part of -int b/a."""

    essential: bool
    exponent: Optional[Scalar] = None
    exp_argument: Optional[Series] = None  # analytic part of -int b/a
    principal_part: dict = field(default_factory=dict)  # exponent -> coefficient

    def as_generalized_series(self) -> GeneralizedSeries:
        if self.essential:
            raise ValueError("essential-singularity wronskian has no series form")
        from .series import series_exp

        return gs_from_series(series_exp(self.exp_argument), self.exponent)


def wronskian_ode_solution(e: Ode) -> WronskianResult:
    """Solve a W' + b W = 0 for an order-2 equation (rows a, b, c)."""
    if e.order != 2:
        raise ValueError("wronskian_ode_solution applies to order 2")
    from .series import laurent_ratio

    a, b = e.coeffs[0], e.coeffs[1]
    if b.valuation() is None:
        return WronskianResult(False, _ZERO, Series([_ZERO], trunc=e.trunc))
    shift, unit = laurent_ratio(b, a)
    if shift < -1:
        principal = {}
        for j, u in enumerate(unit.coeffs):
            p = shift + j
            if p >= -1:
                break
            if not scalar_is_zero(u, max(1.0, unit.magnitude())):
                # term of -int b/a: -u x^{p+1}/(p+1)
                principal[p + 1] = -u / (p + 1)
        return WronskianResult(True, principal_part=principal)
    residue = unit[-1 - shift] if shift <= -1 else _ZERO
    # analytic part of b/a, then -integral
    T = unit.trunc
    analytic = [_ZERO] * (T + 1)
    for j, u in enumerate(unit.coeffs):
        p = shift + j
        if 0 <= p <= T:
            analytic[p] = u
    arg = [_ZERO] * (T + 2)
    for p, u in enumerate(analytic):
        arg[p + 1] = -u / (p + 1)
    return WronskianResult(False, -residue, Series(arg, trunc=T + 1))


def wronskian_of_system(solutions) -> GeneralizedSeries:
    """Determinant of the derivative matrix in GeneralizedSeries arithmetic."""
    if isinstance(solutions, FundamentalSystem):
        solutions = solutions.solutions
    n = len(solutions)
    mat = [list(solutions)]
    for _ in range(n - 1):
        mat.append([gs_differentiate(g) for g in mat[-1]])
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    if n == 3:
        out = None
        for j in range(3):
            minor = (
                mat[1][(j + 1) % 3] * mat[2][(j + 2) % 3]
                - mat[1][(j + 2) % 3] * mat[2][(j + 1) % 3]
            )
            term = mat[0][j] * minor
            out = term if out is None else out + term
        return out
    raise ValueError("2 or 3 solutions expected")


def residual(e: Ode, g: GeneralizedSeries) -> GeneralizedSeries:
    """L(g) minus the right-hand side, in GeneralizedSeries arithmetic."""
    derivs = [g]
    for _ in range(e.order):
        derivs.append(gs_differentiate(derivs[-1]))
    out = None
    for i, row in enumerate(e.coeffs):  # row multiplies y^(order - i)
        term = gs_from_series(row) * derivs[e.order - i]
        out = term if out is None else out + term
    if e.rhs is not None:
        out = out - gs_from_series(e.rhs)
    return out


def residual_valuation(
    res: GeneralizedSeries,
    base: Scalar,
    scale: float = 1.0,
    tol: float = 1e-9,
) -> float:
    """How deeply the residual vanishes, graded by x^base: the smallest
    k + offset over non-negligible coefficients (math.inf if none)."""
    best = math.inf
    thresh = tol * max(1.0, scale)
    for t in res.terms:
        off = integer_difference(t.exponent, base)
        if off is None:
            off_c = to_complex(t.exponent) - to_complex(base)
            off = off_c.real
        for k, c in enumerate(t.body.coeffs):
            if abs(to_complex(c)) > thresh:
                best = min(best, k + off)
                break
    return best
