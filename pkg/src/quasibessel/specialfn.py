"""Closed-form oracles: Mittag-Leffler and Kilbas-Saigo functions.

These are intentionally independent of the series machinery -- plain
truncated sums with Gamma factors -- so they can validate it.  Single-term
equations with nu = 0 have solutions c0 x^gamma E_{alpha,m,l}(lam x^s);
``kilbas_saigo_for_single_term`` maps a computed root and step onto those
parameters for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from .gammafn import GammaPoleError, signed_log_gamma

__all__ = [
    "KilbasSaigoParams",
    "mittag_leffler",
    "kilbas_saigo",
    "kilbas_saigo_coefficients",
    "kilbas_saigo_for_single_term",
]


@dataclass(frozen=True)
class KilbasSaigoParams:
    """Parameters of E_{alpha,m,l}(z) = sum_k c_k z^k with c_0 = 1 and
    c_k = prod_{j<k} Gamma(alpha(jm+l)+1)/Gamma(alpha(jm+l+1)+1)."""

    alpha: float
    m: float
    l: float

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.m <= 0:
            raise ValueError(f"m must be positive, got {self.m}")


def mittag_leffler(alpha: float, z: float, n_terms: int = 60) -> float:
    """Truncated E_alpha(z) = sum_{n=0}^{N} z^n / Gamma(1+alpha*n)."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    total = 1.0  # n = 0 term
    for n in range(1, n_terms + 1):
        if z == 0.0:
            break
        log_term = n * math.log(abs(z)) - math.lgamma(1.0 + alpha * n)
        term = math.exp(log_term) if log_term > -745.0 else 0.0
        if z < 0 and n % 2 == 1:
            term = -term
        total += term
    return total


def kilbas_saigo_coefficients(params: KilbasSaigoParams, n_terms: int) -> List[float]:
    """Coefficients c_0..c_N of the Kilbas-Saigo series.

    A Gamma pole in a numerator factor is an error; a pole in a denominator
    factor terminates the series (all later coefficients are zero).
    """
    a, m, l = params.alpha, params.m, params.l
    coeffs = [1.0]
    log_c, sign = 0.0, 1
    for j in range(n_terms):
        if sign == 0:
            coeffs.append(0.0)
            continue
        num = signed_log_gamma(a * (j * m + l) + 1.0)
        if num.is_pole:
            raise GammaPoleError(
                f"Kilbas-Saigo coefficient pole: alpha(jm+l)+1 = "
                f"{a * (j * m + l) + 1.0} at j={j}"
            )
        den = signed_log_gamma(a * (j * m + l + 1.0) + 1.0)
        if den.is_pole:
            sign = 0
            coeffs.append(0.0)
            continue
        log_c += num.log_abs - den.log_abs
        sign *= num.sign * den.sign
        coeffs.append(sign * math.exp(log_c) if log_c > -745.0 else 0.0)
    return coeffs


def kilbas_saigo(params: KilbasSaigoParams, z: float, n_terms: int = 60) -> float:
    """Truncated E_{alpha,m,l}(z)."""
    coeffs = kilbas_saigo_coefficients(params, n_terms)
    total = 0.0
    zk = 1.0
    for c in coeffs:
        total += c * zk
        zk *= z
    return total


def kilbas_saigo_for_single_term(
    alpha: float, step: float, gamma: float, d: float
) -> Tuple[KilbasSaigoParams, float]:
    """Closed form of the series built from a single derivative term with
    nu = 0: u(x) = c0 x^gamma E_{alpha,m,l}(lam x^step) with m = step/alpha,
    l = (gamma + step - alpha)/alpha and lam = -1/d.

    Covers the constant-coefficient reduction (step = alpha gives m = 1; a
    zero leading exponent then collapses to the plain Mittag-Leffler
    function) and the power-factor reduction.
    """
    if d == 0:
        raise ValueError("term coefficient must be nonzero")
    params = KilbasSaigoParams(
        alpha=alpha, m=step / alpha, l=(gamma + step - alpha) / alpha
    )
    return params, -1.0 / d
