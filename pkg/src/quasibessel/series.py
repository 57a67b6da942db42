"""Series construction: step lattice, coefficient recursion, evaluation,
term-wise fractional derivatives, and the residual check.

A solution is sought as u(x) = sum_n c_n x^(gamma + s*n).  The step s is the
largest increment putting every power generated by the equation on one
lattice: rationalise beta/r and the nonzero p_i/r, take 1/LCD of their
denominators, then multiply back the GCF of the resulting integer shifts.
With the shifts n_beta = beta/(r*s) and n_pi = p_i/(r*s) the coefficients
satisfy

    c_n = -[ c_(n-n_beta) + sum over shifted terms of
             c_(n-n_pi) * d_i * Q((n-n_pi)s, alpha_i) ] / D_n,

    D_n = sum over pure Bessel terms of d_j * Q(ns, alpha_j) - nu^2,

where Q(r, p) = Gamma(1+gamma+r)/Gamma(1+gamma+r-p) and terms whose index
would be negative are absent.  A vanishing D_n means gamma + s*n is itself a
root of the characteristic equation (a root collision) and the series does
not exist; that is reported as DenominatorPoleError rather than patched.

The residual check substitutes the truncated series back into the equation
using the exact fractional power rule D^alpha x^q = Gamma(q+1)/Gamma(q+1-alpha)
x^(q-alpha), so any disagreement beyond the truncation tail is a bug, not
discretisation error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .equation import DerivativeKind, QuasiBesselEquation, ceil_order, is_integer_order
from .gammafn import TAU_POLE, gamma_ratio
from .rational import gcf, lcd

__all__ = [
    "StepPlan",
    "Truncation",
    "SeriesSolution",
    "DenominatorPoleError",
    "DerivativeUndefinedError",
    "CancellationWarning",
    "PowerDerivative",
    "compute_step",
    "build_coefficients",
    "evaluate",
    "frac_derivative_power",
    "residual",
    "c0_for_initial_derivative",
    "EPS_TAIL",
    "MAX_TERMS",
]

EPS_TAIL = 1e-14
MAX_TERMS = 2000

# below this, a recursion denominator is treated as an exact collision
_TAU_DENOM_SCALE = 1e-8
# a coefficient beyond this magnitude means the series is blowing up
_BLOWUP_LIMIT = 1e280
# evaluation warns when the largest term exceeds this multiple of the sum
_CANCELLATION_RATIO = 1e15


class DenominatorPoleError(ArithmeticError):
    """The recursion denominator D_n vanished: gamma + s*n is (numerically)
    another characteristic root, so this gamma generates no series."""

    def __init__(self, n: int, value: float):
        self.n = n
        self.value = value
        super().__init__(
            f"recursion denominator vanished at n={n} (D_n={value:.3e}): "
            f"gamma + s*n collides with another characteristic root"
        )


class DerivativeUndefinedError(ValueError):
    """The requested fractional derivative of x^q does not exist at the
    origin for this exponent."""


class CancellationWarning(UserWarning):
    """Series evaluation lost most of its significant digits to cancellation."""


@dataclass(frozen=True)
class StepPlan:
    """Step s (exact, in units of r) and the integer shifts of beta and the
    nonzero shifting indices onto the lattice.

    Invariants: s * n_beta = beta/r and s * n_p[i] = p_i/r exactly, and the
    shifts share no common factor (s is maximal).
    """

    s: Fraction
    n_beta: int
    n_p: Dict[int, int]
    lcd: int
    gcf: int
    r: float = 1.0

    @property
    def step_value(self) -> float:
        """The step with the common irrational factor applied."""
        return float(self.s) * self.r


@dataclass(frozen=True)
class Truncation:
    terms_used: int
    tail_estimate: float
    converged: bool


@dataclass(frozen=True)
class SeriesSolution:
    """Truncated series sum c_n x^(gamma + s*n); s carries the factor r."""

    gamma: float
    s: float
    coefficients: List[float]
    c0: float
    truncation: Truncation

    def exponent(self, n: int) -> float:
        return self.gamma + self.s * n


def compute_step(eq: QuasiBesselEquation) -> StepPlan:
    """Compute the maximal step and the lattice shifts for ``eq``."""
    if eq.beta == 0:
        raise ValueError(
            "beta = 0: the zeroth-order factor is constant and defines no step; "
            "fold it into nu_squared"
        )
    shifted = [(i, eq.terms[i].p) for i in eq.shifted_indices]
    values = [eq.beta] + [p for _, p in shifted]
    n_lcd = lcd(values)
    raw_beta = eq.beta * n_lcd
    raw_p = {i: p * n_lcd for i, p in shifted}
    assert raw_beta.denominator == 1 and all(v.denominator == 1 for v in raw_p.values())
    shifts = [int(raw_beta)] + [int(v) for v in raw_p.values()]
    n_gcf = gcf(shifts)
    return StepPlan(
        s=Fraction(n_gcf, n_lcd),
        n_beta=int(raw_beta) // n_gcf,
        n_p={i: int(v) // n_gcf for i, v in raw_p.items()},
        lcd=n_lcd,
        gcf=n_gcf,
        r=eq.r,
    )


def _log_magnitude(c: float, exponent: float, log_x: float) -> float:
    if c == 0.0:
        return -math.inf
    return math.log(abs(c)) + exponent * log_x


def build_coefficients(
    eq: QuasiBesselEquation,
    gamma: float,
    plan: StepPlan,
    n_terms: Optional[int] = None,
    c0: float = 1.0,
    *,
    x_max: float = 1.0,
    eps_tail: float = EPS_TAIL,
    max_terms: int = MAX_TERMS,
) -> SeriesSolution:
    """Run the coefficient recursion from c_0 = c0.

    With ``n_terms`` given, exactly that many steps are taken.  Otherwise the
    recursion stops at the smallest N for which the last n_beta consecutive
    terms all satisfy |c_n| x_max^(gamma+sn) < eps_tail -- a single small
    term proves nothing, since runs of up to n_beta zero coefficients occur
    legitimately on the lattice -- capped at ``max_terms`` with the converged
    flag cleared.  The recursion also stops early, not converged, if a
    coefficient exceeds 1e280: that is the divergent regime, reported rather
    than overflowed.

    The recursion is linear in c0, and that linearity is exact here: the
    coefficients are built once with unit normalisation and scaled at the end.
    """
    if n_terms is not None and n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    if x_max <= 0:
        raise ValueError(f"x_max must be positive, got {x_max}")
    s = plan.step_value
    tau_denom = _TAU_DENOM_SCALE * (1.0 + eq.nu_squared)
    pure = [eq.terms[i] for i in eq.pure_indices]
    shifted = [(eq.terms[i], plan.n_p[i]) for i in eq.shifted_indices]

    q_cache: Dict[Tuple[int, float], float] = {}

    def q_at(k: int, alpha: float) -> float:
        key = (k, alpha)
        if key not in q_cache:
            q_cache[key] = gamma_ratio(gamma, k * s, alpha)
        return q_cache[key]

    unit = [1.0]
    limit = n_terms if n_terms is not None else max_terms
    log_x = math.log(x_max)
    log_eps = math.log(eps_tail)
    converged = False
    for n in range(1, limit + 1):
        num = 0.0
        if n >= plan.n_beta:
            num += unit[n - plan.n_beta]
        for term, shift in shifted:
            k = n - shift
            if k >= 0 and unit[k] != 0.0:
                num += unit[k] * term.d * q_at(k, term.alpha)
        d_n = -eq.nu_squared
        for term in pure:
            d_n += term.d * q_at(n, term.alpha)
        if abs(d_n) < tau_denom:
            raise DenominatorPoleError(n, d_n)
        c = -num / d_n
        if not math.isfinite(c):
            raise ArithmeticError(f"coefficient overflow at n={n}")
        unit.append(c)
        if abs(c) > _BLOWUP_LIMIT:
            break
        if n_terms is None and n >= plan.n_beta:
            window = unit[n - plan.n_beta + 1 :]
            if all(
                _log_magnitude(c0 * w, gamma + s * (n - len(window) + 1 + j), log_x)
                < log_eps
                for j, w in enumerate(window)
            ):
                converged = True
                break

    coeffs = [c0 * u for u in unit]
    n_used = len(coeffs) - 1
    if n_terms is not None:
        window_lo = max(1, n_used - plan.n_beta + 1)
        converged = n_used >= plan.n_beta and all(
            _log_magnitude(coeffs[j], gamma + s * j, log_x) < log_eps
            for j in range(window_lo, n_used + 1)
        )
    tail_logs = [
        _log_magnitude(coeffs[j], gamma + s * j, log_x)
        for j in range(max(1, n_used - plan.n_beta + 1), n_used + 1)
    ]
    tail_log = max(tail_logs, default=-math.inf)
    tail = math.exp(tail_log) if tail_log < 700.0 else math.inf
    return SeriesSolution(
        gamma=gamma,
        s=s,
        coefficients=coeffs,
        c0=c0,
        truncation=Truncation(terms_used=n_used, tail_estimate=tail, converged=converged),
    )


def _accumulate(pairs: Sequence[Tuple[float, float]], x: float) -> Tuple[float, float]:
    """Sum coef * x^exponent over pairs, largest-magnitude terms first.
    Returns (sum, largest term magnitude)."""
    terms = []
    for coef, exponent in pairs:
        if coef == 0.0:
            continue
        terms.append(coef * x**exponent)
    terms.sort(key=abs, reverse=True)
    total = 0.0
    for t in terms:
        total += t
    return total, abs(terms[0]) if terms else 0.0


def evaluate(sol: SeriesSolution, xs: Sequence[float]) -> List[float]:
    """Evaluate the truncated series on a grid of x > 0 (x = 0 is accepted
    when every exponent is nonnegative).

    Terms are accumulated in descending magnitude order.  When the largest
    term exceeds 1e15 times the final sum the digits are gone to cancellation;
    a CancellationWarning is issued once and no compensation is attempted.
    """
    pairs = [(c, sol.exponent(n)) for n, c in enumerate(sol.coefficients)]
    out = []
    lost = False
    for x in xs:
        if x < 0:
            raise ValueError(f"series is defined for x >= 0, got {x}")
        total, largest = _accumulate(pairs, x)
        if largest > 0 and largest > _CANCELLATION_RATIO * abs(total):
            lost = True
        out.append(total)
    if lost:
        warnings.warn(
            CancellationWarning(
                "series evaluation lost more than 15 digits to cancellation "
                "(x too large for this truncation)"
            )
        )
    return out


class PowerDerivative(NamedTuple):
    coefficient: float
    exponent: float


def frac_derivative_power(
    kind: DerivativeKind, alpha: float, exponent: float
) -> PowerDerivative:
    """Fractional power rule: D^alpha x^q = Gamma(q+1)/Gamma(q+1-alpha) x^(q-alpha).

    Riemann-Liouville needs q > -1, and the coefficient is exactly zero when
    q+1-alpha is a nonpositive integer.  Caputo of x^q with q a nonnegative
    integer below ceil(alpha) is exactly zero (the classical derivative of a
    low-degree monomial); otherwise Caputo needs q > ceil(alpha)-1 and then
    agrees with Riemann-Liouville.
    """
    q = exponent
    if kind is DerivativeKind.CAPUTO:
        k = round(q)
        if k >= 0 and abs(q - k) < TAU_POLE and k < ceil_order(alpha):
            return PowerDerivative(0.0, q - alpha)
        if q <= ceil_order(alpha) - 1:
            raise DerivativeUndefinedError(
                f"Caputo derivative of order {alpha} undefined for x^{q}: "
                f"need exponent > {ceil_order(alpha) - 1} or a nonnegative "
                f"integer below {ceil_order(alpha)}"
            )
    else:
        if q <= -1:
            raise DerivativeUndefinedError(
                f"Riemann-Liouville derivative undefined for x^{q}: need exponent > -1"
            )
    return PowerDerivative(gamma_ratio(q, 0.0, alpha), q - alpha)


def residual(
    eq: QuasiBesselEquation, sol: SeriesSolution, xs: Sequence[float]
) -> List[float]:
    """Substitute the truncated series into the equation, term by term.

    Every series term is differentiated exactly with the fractional power
    rule, so the result is the genuine defect of the truncated series: it
    consists of the lattice slots beyond the truncation point and is bounded
    by a small multiple of the truncation tail.
    """
    gamma, s = sol.gamma, sol.s
    pairs: List[Tuple[float, float]] = []
    for i, t in enumerate(eq.terms):
        p_val = eq.p_value(i)
        for n, c in enumerate(sol.coefficients):
            if c == 0.0:
                continue
            pd = frac_derivative_power(eq.kind, t.alpha, gamma + s * n)
            if pd.coefficient != 0.0:
                pairs.append((t.d * c * pd.coefficient, gamma + s * n + p_val))
    beta_val = eq.beta_value
    for n, c in enumerate(sol.coefficients):
        if c == 0.0:
            continue
        pairs.append((c, gamma + s * n + beta_val))
        if eq.nu_squared != 0.0:
            pairs.append((-eq.nu_squared * c, gamma + s * n))
    out = []
    for x in xs:
        if x <= 0:
            raise ValueError(f"residual is defined for x > 0, got {x}")
        total, _ = _accumulate(pairs, x)
        out.append(total)
    return out


def c0_for_initial_derivative(gamma: float, mu: float, value: float) -> float:
    """Normalisation c0 making D^mu u(0+) equal ``value`` for a series with
    leading exponent gamma: inverts c0 * Gamma(1+gamma)/Gamma(1+gamma-mu) = value.

    Meaningful when mu = gamma (the differentiated leading term is then the
    only one surviving at the origin)."""
    ratio = gamma_ratio(gamma, 0.0, mu)
    if ratio == 0.0:
        raise ValueError(
            f"D^{mu} of x^{gamma} vanishes identically; it cannot fix c0"
        )
    return value / ratio
