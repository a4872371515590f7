"""Riccati models, path continuation, holonomy fitting and Liouvillian forms."""

import cmath
import math
import random

import pytest

from frobode.ode import Ode
from frobode.riccati import (
    Circle,
    MoebiusMap,
    Polyline,
    ProjectivePoint,
    continue_along_path,
    holonomy_of_loop,
    liouvillian_solution,
    riccati_model,
)


def test_model_of_singular_equation():
    # z^2 u'' + u = 0: dt/dz = -(z^2 t^2 + 1)/z^2; regular singular at both
    # the origin and infinity, so both appear in sigma
    m = riccati_model(Ode.from_rows([[0, 0, 1], [0], [1]], trunc=4))
    assert m.a == (0j, 0j, 1 + 0j)
    assert m.c == (1 + 0j,)
    assert m.ramification == (0j, "infinity")


def test_model_ramification_at_infinity():
    # u'' - z u' - u = 0: a has no zeros but infinity is (irregular) singular
    m = riccati_model(Ode.from_rows([[1], [0, -1], [-1]], trunc=4))
    assert m.ramification == ("infinity",)


def test_continuation_follows_known_solution():
    # t = z solves the Riccati model of u'' - z u' - u = 0
    m = riccati_model(Ode.from_rows([[1], [0, -1], [-1]], trunc=4))
    path = Polyline((0.2 + 0j, 0.8 + 0.3j))
    out = continue_along_path(m, 0.2 + 0j, path)
    assert abs(out.as_complex() - (0.8 + 0.3j)) < 1e-8


def test_continuation_switches_charts():
    # start at t = infinity and come back to a finite value
    m = riccati_model(Ode.from_rows([[1], [0, -1], [-1]], trunc=4))
    out = continue_along_path(m, "infinity", Polyline((0j, 0.5 + 0j)))
    assert out.as_complex() is not None


def test_moebius_fit_and_composition():
    f = MoebiusMap.from_matrix(2, 1, 0, 1)
    g = MoebiusMap.from_matrix(1, 0, 1, 1)
    h = f.compose(g)
    p = ProjectivePoint.of(0.7 + 0.1j)
    lhs = h.apply(p).as_complex()
    rhs = f.apply(g.apply(p)).as_complex()
    assert abs(lhs - rhs) < 1e-12
    ident = f.compose(f.inverse())
    assert ident.identity_defect() < 1e-12


def test_holonomy_multipliers_around_singularity():
    # z^2 u'' + u = 0: loop map multipliers are e^{±2 pi sqrt(3)}
    m = riccati_model(Ode.from_rows([[0, 0, 1], [0], [1]], trunc=4))
    g = holonomy_of_loop(m, Circle(0j, 1.0))
    want = math.exp(2 * math.pi * math.sqrt(3))
    mult = sorted(abs(w) for w in g.multipliers())
    assert mult[1] == pytest.approx(want, rel=1e-4)
    assert mult[0] == pytest.approx(1 / want, rel=1e-4)


def test_trivial_holonomy_without_singularities():
    random.seed(9)
    b = [complex(random.uniform(-1, 1)) for _ in range(4)]
    c = [complex(random.uniform(-1, 1)) for _ in range(4)]
    m = riccati_model(Ode.from_rows([[1], b, c], trunc=4))
    g = holonomy_of_loop(m, Circle(0.2 + 0.1j, 0.7))
    assert g.identity_defect() < 1e-6


def test_loop_through_singularity_is_rejected():
    m = riccati_model(Ode.from_rows([[0, 0, 1], [0], [1]], trunc=4))
    with pytest.raises(ValueError):
        continue_along_path(m, 0j, Polyline((-1 + 0j, 1 + 0j)))


def test_liouvillian_closed_form():
    # u'' - z u' - u = 0 with gamma = z: u = e^{z^2/2} (ell + k int e^{-s^2/2})
    e = Ode.from_rows([[1], [0, -1], [-1]], trunc=8)
    sol = liouvillian_solution(e, ((0, 1), (1,)), anchor=0j, grid=[0.2, 0.5 + 0.1j])
    for j in range(1, 11):
        z = j / 10
        got = sol(z, 1, 2)
        want = math.exp(z * z / 2) * (2 + _erf_integral(z))
        assert abs(got - want) < 1e-8


def _erf_integral(z: float) -> float:
    return math.sqrt(math.pi / 2) * math.erf(z / math.sqrt(2))


def test_liouvillian_rejects_bad_gamma():
    e = Ode.from_rows([[1], [0, -1], [-1]], trunc=8)
    with pytest.raises(ValueError):
        liouvillian_solution(e, ((1, 1), (1,)), anchor=0j, grid=[0.3, 0.7])


def test_liouvillian_c_zero_branch():
    # u'' + u' = 0: c == 0, so u = ell + k int e^{-z}
    e = Ode.from_rows([[1], [1], [0]], trunc=8)
    sol = liouvillian_solution(e, None, anchor=0j, grid=[0.5])
    for z in (0.3, 0.9):
        want = 2 + (1 - math.exp(-z))
        assert abs(sol(z, 1, 2) - want) < 1e-8
