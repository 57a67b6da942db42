"""Characteristic equation: evaluation, root search, and root screening.

The leading exponent gamma of a series solution must satisfy

    G(gamma) = sum over pure Bessel terms of d_i * Gamma(1+gamma)/Gamma(1+gamma-alpha_i) - nu^2 = 0.

G is continuous on gamma > -1 (1/Gamma is entire), so roots are located by
bracketing sign changes on a uniform grid and refining by bisection.  When a
single pure Bessel term meets nu = 0 the roots are known in closed form --
gamma = alpha - k for integers k >= 1 down to the -1 floor -- and are emitted
exactly instead of scanned.

A root can fail to generate a solution in two ways: for Caputo equations it
may sit at or below n_max - 1, where the fractional derivatives of x^gamma do
not exist; and it may collide with a larger root after a whole number of
steps, which zeroes a recursion denominator and blows the series up.  Both
conditions are recorded on the root rather than silently dropped.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

from .equation import DerivativeKind, QuasiBesselEquation, is_integer_order
from .gammafn import TAU_POLE, gamma_ratio
from .series import StepPlan

__all__ = [
    "RootStatus",
    "CharacteristicRoot",
    "RootSearchWarning",
    "characteristic_value",
    "find_roots",
    "screen_collisions",
    "caputo_integer_exponents",
    "GRID_POINTS",
    "REFINE_TOL",
    "TAU_COLLISION",
]

GRID_POINTS = 10_000
REFINE_TOL = 1e-10
TAU_COLLISION = 1e-6

# grid samples inspected when deciding whether G is already monotone positive
# at the top of the scan window
_TOP_WINDOW = 20
_MAX_DOUBLINGS = 3


class RootSearchWarning(UserWarning):
    """Raised as a warning when the scan finds no sign change."""


class RootStatus(enum.Enum):
    VALID = "valid"
    BELOW_CAPUTO_FLOOR = "below_caputo_floor"
    COLLISION_INVALID = "collision_invalid"
    DENOMINATOR_POLE = "denominator_pole"


@dataclass(frozen=True)
class CharacteristicRoot:
    """A root gamma of G with its screening outcome.

    ``collision_step`` is the step count n at which gamma + s*n lands on a
    larger root; present exactly when status is COLLISION_INVALID.
    """

    gamma: float
    status: RootStatus = RootStatus.VALID
    collision_step: Optional[int] = None

    @property
    def is_valid(self) -> bool:
        return self.status is RootStatus.VALID


def characteristic_value(eq: QuasiBesselEquation, gamma: float) -> float:
    """Evaluate G(gamma).  Only pure Bessel terms contribute; a term whose
    denominator argument hits a Gamma pole contributes exactly zero."""
    total = -eq.nu_squared
    for i in eq.pure_indices:
        t = eq.terms[i]
        total += t.d * gamma_ratio(gamma, 0.0, t.alpha)
    return total


def _status_for(eq: QuasiBesselEquation, gamma: float) -> RootStatus:
    if eq.kind is DerivativeKind.CAPUTO and eq.n_max is not None:
        if gamma <= eq.n_max - 1 + 1e-12:
            return RootStatus.BELOW_CAPUTO_FLOOR
    return RootStatus.VALID


def _analytic_family(eq: QuasiBesselEquation) -> List[CharacteristicRoot]:
    # single pure Bessel term, nu = 0: G vanishes exactly where the
    # denominator Gamma(1+gamma-alpha) has a pole, i.e. gamma = alpha - k
    alpha = eq.terms[eq.pure_indices[0]].alpha
    roots = []
    k = 1
    while alpha - k > -1.0 + TAU_POLE:
        g = alpha - k
        roots.append(CharacteristicRoot(gamma=g, status=_status_for(eq, g)))
        k += 1
    roots.sort(key=lambda root: root.gamma)
    return roots


def _bisect(eq: QuasiBesselEquation, lo: float, hi: float, f_lo: float) -> float:
    while hi - lo > REFINE_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = characteristic_value(eq, mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0) != (f_mid < 0):
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _default_search_hi(eq: QuasiBesselEquation) -> float:
    base = float(max(eq.n_max or 0, 4))
    if eq.nu_squared > 0:
        base += eq.nu_squared ** (1.0 / eq.alpha1)
    return base + 10.0


def _tail_monotone_positive(values: Sequence[float]) -> bool:
    window = values[-_TOP_WINDOW:]
    if any(v <= 0 for v in window):
        return False
    return all(b >= a for a, b in zip(window, window[1:]))


def find_roots(
    eq: QuasiBesselEquation,
    search_hi: Optional[float] = None,
    grid_points: int = GRID_POINTS,
) -> List[CharacteristicRoot]:
    """All real roots of G on (-1, search_hi], sorted ascending.

    Sign changes on a uniform grid are bracketed and bisected to within
    REFINE_TOL.  Without an explicit ``search_hi`` the window starts at
    max(n_max, 4) + nu^(2/alpha_1) + 10 and doubles (up to three times) until
    G is monotone positive at the top, since G grows like d_1 gamma^alpha_1.
    Tangential (double) roots produce no sign change and are not detected.

    Caputo roots at or below n_max - 1 are returned flagged rather than
    dropped, so callers can report why they generate no solution.
    """
    if eq.m1 == 0:
        warnings.warn(
            RootSearchWarning(
                "no pure Bessel terms: G(gamma) is the constant -nu^2 and has no roots"
            )
        )
        return []
    if eq.nu_squared == 0.0 and eq.m1 == 1:
        return _analytic_family(eq)

    floor = -1.0 + TAU_POLE
    hi = _default_search_hi(eq) if search_hi is None else float(search_hi)
    if hi <= floor:
        raise ValueError(f"search_hi={hi} must exceed the lower bound {floor}")

    attempts = _MAX_DOUBLINGS if search_hi is None else 0
    while True:
        step = (hi - floor) / grid_points
        grid = [floor + i * step for i in range(1, grid_points + 1)]
        values = [characteristic_value(eq, g) for g in grid]
        if attempts == 0 or _tail_monotone_positive(values):
            break
        hi = floor + 2.0 * (hi - floor)
        attempts -= 1

    roots: List[CharacteristicRoot] = []
    for (g_lo, f_lo), (g_hi, f_hi) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if f_lo == 0.0:
            roots.append(CharacteristicRoot(g_lo, _status_for(eq, g_lo)))
        elif (f_lo < 0) != (f_hi < 0):
            g = _bisect(eq, g_lo, g_hi, f_lo)
            roots.append(CharacteristicRoot(g, _status_for(eq, g)))
    if values and values[-1] == 0.0:
        roots.append(CharacteristicRoot(grid[-1], _status_for(eq, grid[-1])))

    if not roots:
        warnings.warn(
            RootSearchWarning(
                f"no sign change of G(gamma) found on ({floor:.3g}, {hi:.6g}] "
                f"with {grid_points} samples"
            )
        )
    roots.sort(key=lambda root: root.gamma)
    return roots


def screen_collisions(
    roots: Sequence[CharacteristicRoot], plan: StepPlan
) -> List[CharacteristicRoot]:
    """Invalidate every root that lands on a larger root after a whole number
    of steps (the recursion denominator vanishes there and the series blows
    up).  The largest root has nothing to collide with and always survives.

    Collision targets include flagged roots -- the denominator vanishes at a
    root of G whether or not that root generates a solution itself.  Roots
    already flagged for another reason keep their original status.  The
    operation is idempotent.
    """
    step = plan.step_value
    ordered = sorted(roots, key=lambda root: root.gamma)
    screened: List[CharacteristicRoot] = []
    for idx, root in enumerate(ordered):
        if root.status is not RootStatus.VALID:
            screened.append(root)
            continue
        hit: Optional[int] = None
        for other in ordered[idx + 1 :]:
            n = round((other.gamma - root.gamma) / step)
            if n >= 1 and abs(other.gamma - (root.gamma + step * n)) < TAU_COLLISION:
                hit = n if hit is None else min(hit, n)
        if hit is not None:
            screened.append(
                replace(root, status=RootStatus.COLLISION_INVALID, collision_step=hit)
            )
        else:
            screened.append(root)
    return screened


def caputo_integer_exponents(eq: QuasiBesselEquation) -> List[int]:
    """Nonnegative integer leading exponents j admissible for Caputo
    equations with nu = 0: the Caputo derivative of x^j vanishes for every
    pure Bessel term when j < ceil(alpha_i), so the zeroth balance holds
    without gamma being a characteristic root.  This is how the
    constant-coefficient Caputo reduction produces Mittag-Leffler solutions
    even though every characteristic root sits below the Caputo floor.
    """
    if eq.kind is not DerivativeKind.CAPUTO or eq.nu_squared != 0.0:
        return []
    if eq.m1 == 0:
        return []
    limit = min(
        int(math.ceil(eq.terms[i].alpha))
        if not is_integer_order(eq.terms[i].alpha)
        else int(round(eq.terms[i].alpha))
        for i in eq.pure_indices
    )
    return list(range(0, max(limit, 0)))
