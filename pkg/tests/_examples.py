"""Shared equation builders for the regression fixtures used across tests."""

from quasibessel import QuasiBesselEquation, Term
from quasibessel.equation import DerivativeKind, from_constant_coefficients, from_power_factors

CAPUTO = DerivativeKind.CAPUTO
RL = DerivativeKind.RIEMANN_LIOUVILLE


def example1(nu: float = 2.0) -> QuasiBesselEquation:
    """1.5 x^1.5 D_C^1.5 u - 1.2 x^1.9 D_C^1.1 u + 3 x D_C^0.5 u + (x^2 - nu^2) u = 0."""
    return QuasiBesselEquation(
        terms=(
            Term(1.5, 1.5, "0"),
            Term(-1.2, 1.1, "0.8"),
            Term(3.0, 0.5, "0.5"),
        ),
        beta="2",
        nu_squared=nu * nu,
        kind=CAPUTO,
    )


def step_worked_example() -> QuasiBesselEquation:
    """2 x^2.4 D^2.4 u - 3 x^1.8 D^1.5 u + x D^0.4 u + (x^3 - nu^2) u = 0."""
    return QuasiBesselEquation(
        terms=(
            Term(2.0, 2.4, "0"),
            Term(-3.0, 1.5, "0.3"),
            Term(1.0, 0.4, "0.6"),
        ),
        beta="3",
        nu_squared=1.0,
        kind=CAPUTO,
    )


def example2() -> QuasiBesselEquation:
    """u' + u = 0 in quasi-Bessel form: x u' + x u = 0."""
    return from_constant_coefficients([(1.0, "1")], kind=CAPUTO)


def example3() -> QuasiBesselEquation:
    """D_R^1.7 u - 2 u = 0, normalised to -0.5 D_R^1.7 u + u = 0."""
    return from_constant_coefficients([(-0.5, "1.7")], kind=RL)


def example4(lam: float) -> QuasiBesselEquation:
    """D_R^0.5 u = lam x^0.7 u, normalised to -(1/lam) x^0.5 D_R^0.5 u + x^1.2 u = 0."""
    return from_power_factors([(-1.0 / lam, "0", "0.5")], delta="0.7", kind=RL)


def remark3_equation() -> QuasiBesselEquation:
    """x^1.5 D^1.5 u + x^0.7 D^0.5 u + x^1.2 u = 0 (root collision showcase)."""
    return QuasiBesselEquation(
        terms=(Term(1.0, 1.5, "0"), Term(1.0, 0.5, "0.2")),
        beta="1.2",
        nu_squared=0.0,
        kind=RL,
    )


def constant_coefficients_rl(orders) -> QuasiBesselEquation:
    """sum_i D_R^order_i u + u = 0 with unit coefficients."""
    return from_constant_coefficients([(1.0, o) for o in orders], kind=RL)


def divergent_equation() -> QuasiBesselEquation:
    """Shift on the leading term (p1 > 0) with an unshifted lower term:
    the converse case whose series blows up."""
    return QuasiBesselEquation(
        terms=(Term(1.0, 1.5, "0.4"), Term(1.0, 0.5, "0")),
        beta="1",
        nu_squared=0.0,
        kind=RL,
    )
