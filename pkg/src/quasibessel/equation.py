"""Problem model for fractional quasi-Bessel equations.

An equation

    sum_i d_i x^(alpha_i + p_i) D^alpha_i u(x) + (x^beta - nu^2) u(x) = 0

is held as a list of terms plus the power beta, the constant nu^2, the kind
of fractional derivative, and an optional common irrational factor r.  The
shifting indices p_i and beta are exact rationals after division by r; the
derivative orders alpha_i may be arbitrary nonnegative reals.

Terms with p_i = 0 are the "pure Bessel" terms: their x-power matches their
derivative order, and only they enter the characteristic equation.  The term
with the largest derivative order is stored first and must have p = 0 for a
series solution to exist.

This module also provides the two reductions that bring constant-coefficient
and power-factor equations into quasi-Bessel form, the convergence threshold
on nu^2 for Caputo equations, and the contraction bound used by the
uniqueness criterion for the initial value problem.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

from .gammafn import TAU_POLE
from .rational import RationalLike, as_rational

__all__ = [
    "DerivativeKind",
    "Term",
    "QuasiBesselEquation",
    "ValidationIssue",
    "ValidationReport",
    "validate",
    "nu_min_threshold",
    "uniqueness_bound",
    "from_constant_coefficients",
    "from_power_factors",
    "ceil_order",
    "is_integer_order",
]


class DerivativeKind(enum.Enum):
    CAPUTO = "caputo"
    RIEMANN_LIOUVILLE = "riemann_liouville"

    @classmethod
    def from_string(cls, name: str) -> "DerivativeKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown derivative kind {name!r}; "
                f"expected 'caputo' or 'riemann_liouville'"
            ) from None


def is_integer_order(alpha: float) -> bool:
    """True when alpha is an integer to within the pole tolerance."""
    return abs(alpha - round(alpha)) < TAU_POLE


def ceil_order(alpha: float) -> int:
    """Integer ceiling n of a derivative order: n-1 < alpha < n for
    fractional alpha, and n = alpha for integer alpha."""
    if is_integer_order(alpha):
        return int(round(alpha))
    return math.ceil(alpha)


@dataclass(frozen=True)
class Term:
    """One derivative term d * x^(alpha+p) * D^alpha u.

    ``p`` is the shifting index in units of the common factor r, stored as an
    exact fraction (decimal strings are accepted and parsed exactly).
    """

    d: float
    alpha: float
    p: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", as_rational(self.p))
        if not math.isfinite(self.d):
            raise ValueError(f"term coefficient must be finite, got {self.d}")
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ValueError(f"derivative order must be finite and >= 0, got {self.alpha}")
        if self.p < 0:
            raise ValueError(f"shifting index must be >= 0, got {self.p}")

    @property
    def is_pure_bessel(self) -> bool:
        return self.p == 0


@dataclass(frozen=True)
class QuasiBesselEquation:
    """The full problem statement; immutable after construction.

    ``beta`` and every ``Term.p`` are exact rationals in units of ``r``; the
    true powers are r * beta and r * p.  Terms are normalised to descending
    derivative order (ties broken so an unshifted term comes first).
    """

    terms: Tuple[Term, ...]
    beta: Fraction
    nu_squared: float = 0.0
    r: float = 1.0
    kind: DerivativeKind = DerivativeKind.CAPUTO

    def __post_init__(self) -> None:
        terms = tuple(sorted(self.terms, key=lambda t: (-t.alpha, t.p)))
        if not terms:
            raise ValueError("equation needs at least one derivative term")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "beta", as_rational(self.beta))
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if not math.isfinite(self.nu_squared) or self.nu_squared < 0:
            raise ValueError(f"nu_squared must be finite and >= 0, got {self.nu_squared}")
        if not math.isfinite(self.r) or self.r <= 0:
            raise ValueError(f"common factor r must be finite and > 0, got {self.r}")

    # -- derived classification -------------------------------------------

    @cached_property
    def pure_indices(self) -> Tuple[int, ...]:
        """Indices of pure Bessel terms (p = 0)."""
        return tuple(i for i, t in enumerate(self.terms) if t.is_pure_bessel)

    @cached_property
    def shifted_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.terms) if not t.is_pure_bessel)

    @property
    def m1(self) -> int:
        """Number of pure Bessel terms."""
        return len(self.pure_indices)

    @cached_property
    def fractional_pure_indices(self) -> Tuple[int, ...]:
        return tuple(
            i for i in self.pure_indices if not is_integer_order(self.terms[i].alpha)
        )

    @property
    def m0(self) -> int:
        """Number of pure Bessel terms with non-integer derivative order."""
        return len(self.fractional_pure_indices)

    @cached_property
    def n_max(self) -> Optional[int]:
        """Max integer ceiling over the non-integer derivative orders, or
        None when every order is an integer."""
        ceilings = [
            ceil_order(t.alpha) for t in self.terms if not is_integer_order(t.alpha)
        ]
        return max(ceilings) if ceilings else None

    @cached_property
    def n_m0(self) -> Optional[int]:
        """Max integer ceiling over the fractional pure Bessel orders."""
        ceilings = [ceil_order(self.terms[i].alpha) for i in self.fractional_pure_indices]
        return max(ceilings) if ceilings else None

    @property
    def alpha1(self) -> float:
        """Highest derivative order."""
        return self.terms[0].alpha

    # -- true (r-applied) powers ------------------------------------------

    @property
    def beta_value(self) -> float:
        return float(self.beta) * self.r

    def p_value(self, i: int) -> float:
        return float(self.terms[i].p) * self.r

    def caputo_floor(self) -> float:
        """Smallest admissible leading exponent (exclusive) for this kind.

        Riemann-Liouville only needs gamma > -1.  Caputo additionally needs
        gamma > n_max - 1 so the derivatives of x^gamma exist, whenever a
        fractional derivative order is present.
        """
        if self.kind is DerivativeKind.CAPUTO and self.n_max is not None:
            return float(self.n_max - 1)
        return -1.0


# -- validation -----------------------------------------------------------

FATAL = "fatal"
WARNING = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    severity: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: Tuple[ValidationIssue, ...]

    @property
    def fatal_issues(self) -> Tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == FATAL)

    @property
    def warning_issues(self) -> Tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == WARNING)

    @property
    def is_valid(self) -> bool:
        return not self.fatal_issues


def validate(eq: QuasiBesselEquation) -> ValidationReport:
    """Check the structural conditions a series solution requires.

    Rationality of p_i/r and beta/r is already enforced at construction
    (shifting indices are stored as exact fractions), so the checks here are
    the leading-term condition and the sign condition on the pure Bessel
    coefficients.
    """
    issues = []
    if not eq.terms[0].is_pure_bessel:
        issues.append(
            ValidationIssue(
                code="E_SHIFTED_LEADING_TERM",
                severity=FATAL,
                message=(
                    f"the highest-order derivative (alpha={eq.terms[0].alpha}) carries a "
                    f"positive shift p={eq.terms[0].p}; the recursion numerator then grows "
                    "faster than its denominator, the coefficients blow up, and no series "
                    "solution on the step lattice exists"
                ),
            )
        )
    for i in eq.pure_indices:
        if eq.terms[i].d <= 0:
            issues.append(
                ValidationIssue(
                    code="W_NONPOSITIVE_BESSEL_COEFFICIENT",
                    severity=WARNING,
                    message=(
                        f"pure Bessel term {i} has d={eq.terms[i].d} <= 0; real roots of "
                        "the characteristic equation are no longer guaranteed"
                    ),
                )
            )
    if eq.beta == 0:
        issues.append(
            ValidationIssue(
                code="E_ZERO_BETA",
                severity=FATAL,
                message=(
                    "beta = 0 puts the zeroth-order factor x^0 outside the step lattice; "
                    "fold the constant into nu_squared instead"
                ),
            )
        )
    return ValidationReport(tuple(issues))


# -- convergence threshold and uniqueness bound ---------------------------


def nu_min_threshold(eq: QuasiBesselEquation) -> float:
    """Threshold on nu^2 above which the Caputo series is guaranteed to
    converge: Gamma(n_m0) * sum over pure Bessel terms of d_i/Gamma(n_max - alpha_i).

    Applicable only to Caputo equations with positive pure Bessel
    coefficients and at least one fractional pure Bessel term.
    """
    if eq.kind is not DerivativeKind.CAPUTO:
        raise ValueError("nu_min_threshold applies to Caputo equations only")
    if eq.m0 == 0:
        raise ValueError(
            "threshold inapplicable: no pure Bessel term with fractional order"
        )
    if any(eq.terms[i].d <= 0 for i in eq.pure_indices):
        raise ValueError("threshold requires positive pure Bessel coefficients")
    n_max = eq.n_max
    assert n_max is not None  # m0 >= 1 implies a fractional order exists
    total = 0.0
    for i in eq.pure_indices:
        arg = n_max - eq.terms[i].alpha
        if arg < TAU_POLE and abs(arg - round(arg)) < TAU_POLE:
            raise ValueError(
                f"threshold inapplicable: Gamma pole at n_max - alpha = {arg} "
                f"(term {i}, alpha={eq.terms[i].alpha})"
            )
        total += eq.terms[i].d / math.gamma(arg)
    return math.gamma(eq.n_m0) * total


def uniqueness_bound(eq: QuasiBesselEquation, b: float) -> float:
    """Contraction bound for the initial value problem on [0, b] (Caputo).

    The IVP solution is unique whenever nu^2 exceeds
    b1^beta + sum_i q_i |d_i| b1^(n_i + p_i), with b1 = max(1, b) and
    q_i = 1/(Gamma(n_i - alpha_i) (n_i - alpha_i + 1)) for fractional orders,
    q_i = 1 for integer orders.
    """
    if eq.kind is not DerivativeKind.CAPUTO:
        raise ValueError("uniqueness_bound applies to Caputo equations only")
    if b <= 0:
        raise ValueError(f"domain endpoint must be positive, got {b}")
    b1 = max(1.0, b)
    total = b1 ** eq.beta_value
    for i, t in enumerate(eq.terms):
        n_i = ceil_order(t.alpha)
        if is_integer_order(t.alpha):
            q_i = 1.0
        else:
            gap = n_i - t.alpha
            q_i = 1.0 / (math.gamma(gap) * (gap + 1.0))
        total += q_i * abs(t.d) * b1 ** (n_i + eq.p_value(i))
    return total


# -- reductions to quasi-Bessel form --------------------------------------


def _sorted_exact(pairs, key_index):
    return sorted(pairs, key=lambda item: item[key_index], reverse=True)


def from_constant_coefficients(
    coeffs: Sequence[Tuple[float, RationalLike]],
    r: float = 1.0,
    kind: DerivativeKind = DerivativeKind.RIEMANN_LIOUVILLE,
) -> QuasiBesselEquation:
    """Bring sum_i d_i D^alpha_i u + u = 0 into quasi-Bessel form.

    Multiplying every term by x^alpha_1 gives shifting indices
    p_i = alpha_1 - alpha_i, beta = alpha_1, and nu = 0.  The derivative
    orders are supplied as exact rationals in units of r (decimal strings
    are fine) so the shifts stay exact.
    """
    if not coeffs:
        raise ValueError("need at least one derivative term")
    exact = [(float(d), as_rational(a)) for d, a in coeffs]
    exact = _sorted_exact(exact, 1)
    a1 = exact[0][1]
    if a1 <= 0:
        raise ValueError(f"highest derivative order must be positive, got {a1}")
    for _, a in exact[1:]:
        if a >= a1:
            raise ValueError(
                f"highest derivative order must be strictly greater than the "
                f"others, got {a1} and {a}"
            )
        if a <= 0:
            raise ValueError(f"derivative orders must be positive, got {a}")
    terms = [Term(d=d, alpha=float(a) * r, p=a1 - a) for d, a in exact]
    return QuasiBesselEquation(
        terms=tuple(terms), beta=a1, nu_squared=0.0, r=r, kind=kind
    )


def from_power_factors(
    triples: Sequence[Tuple[float, RationalLike, RationalLike]],
    delta: RationalLike,
    r: float = 1.0,
    kind: DerivativeKind = DerivativeKind.RIEMANN_LIOUVILLE,
) -> QuasiBesselEquation:
    """Bring sum_i d_i x^beta_i D^alpha_i u + x^delta u = 0 into quasi-Bessel
    form by multiplying through by x^(alpha_1 - beta_1).

    Each triple is (d_i, beta_i, alpha_i) with beta_i and alpha_i exact
    rationals in units of r.  Requires alpha_1 >= beta_1 and
    alpha_1 - beta_1 >= alpha_i - beta_i for every term; the resulting
    shifting indices are p_i = alpha_1 - beta_1 + beta_i - alpha_i and the
    zeroth-order power is beta = alpha_1 - beta_1 + delta.
    """
    if not triples:
        raise ValueError("need at least one derivative term")
    exact = [(float(d), as_rational(b), as_rational(a)) for d, b, a in triples]
    exact = _sorted_exact(exact, 2)
    _, b1, a1 = exact[0]
    if a1 <= 0:
        raise ValueError(f"highest derivative order must be positive, got {a1}")
    if a1 < b1:
        raise ValueError(f"need alpha_1 >= beta_1, got alpha_1={a1}, beta_1={b1}")
    for _, b, a in exact[1:]:
        if a >= a1:
            raise ValueError(
                f"highest derivative order must be strictly greater than the "
                f"others, got {a1} and {a}"
            )
        if a <= 0:
            raise ValueError(f"derivative orders must be positive, got {a}")
        if a1 - b1 < a - b:
            raise ValueError(
                f"need alpha_1 - beta_1 >= alpha_i - beta_i; "
                f"violated by (beta_i={b}, alpha_i={a})"
            )
    d0 = as_rational(delta)
    if d0 < 0:
        raise ValueError(f"delta must be >= 0, got {d0}")
    terms = [Term(d=d, alpha=float(a) * r, p=a1 - b1 + b - a) for d, b, a in exact]
    return QuasiBesselEquation(
        terms=tuple(terms), beta=a1 - b1 + d0, nu_squared=0.0, r=r, kind=kind
    )
