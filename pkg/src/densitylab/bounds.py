"""Closed-form constants and numeric recursions of the density-model theory.

Everything here is a pure double-precision calculator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

SQRT_6_7 = math.sqrt(6.0 / 7.0)
GEOMETRIC_DEFICIT = 1.0 / (1.0 - SQRT_6_7)  # sum over j >= 0 of (6/7)^(j/2), 13.4807...
DEFICIT_BOUND = 14.0


def alpha(C: float) -> float:
    """Depth constant 1/log(1/(1-C)), at most 1/C."""
    if not 0 < C < 1:
        raise ValueError("alpha needs 0 < C < 1")
    a = -1.0 / math.log1p(-C)
    assert a <= 1.0 / C * (1 + 1e-15)
    return a


def _alpha_or_limit(C: float) -> float:
    # alpha -> 0 as C -> 1, so the side conditions are trivially met at C = 1
    return 0.0 if C == 1 else alpha(C)


def min_K(C: float) -> float:
    if not 0 < C <= 1:
        raise ValueError("C must lie in (0, 1]")
    return 3000.0 / C**5


def min_A(C: float) -> float:
    if not 0 < C <= 1:
        raise ValueError("C must lie in (0, 1]")
    return 3000.0 / C**4


@dataclass(frozen=True)
class SideConditions:
    C: float
    A: float
    alpha: float
    log_term: float
    first: bool  # 2 alpha log(7A/6C) <= A/8
    second: bool  # 4 alpha log(7A/6C) <= sqrt(A)

    @property
    def holds(self) -> bool:
        return self.first and self.second


def side_conditions(C: float, A: float = None) -> SideConditions:
    """The two conditions on A used in the local-to-global step (default A = 3000/C^4)."""
    if A is None:
        A = min_A(C)
    a = _alpha_or_limit(C)
    log_term = math.log(7.0 * A / (6.0 * C))
    return SideConditions(C, A, a, log_term, 2 * a * log_term <= A / 8, 4 * a * log_term <= math.sqrt(A))


@dataclass
class BootstrapResult:
    beta: float
    A: float
    display: List[float]
    lemma_scale: List[float]

    @property
    def display_infimum(self) -> float:
        return min(self.display)

    @property
    def lemma_infimum(self) -> float:
        return min(self.lemma_scale)

    @property
    def display_limit_deficit(self) -> float:
        """(1 + 1/(1 - sqrt(6/7)))/sqrt(A), about 14.48/sqrt(A)."""
        return (1.0 + GEOMETRIC_DEFICIT) / math.sqrt(self.A)

    @property
    def lemma_limit_deficit(self) -> float:
        """1/(1 - sqrt(6/7))/sqrt(A), about 13.48/sqrt(A)."""
        return GEOMETRIC_DEFICIT / math.sqrt(self.A)

    @property
    def stated_floor(self) -> float:
        return self.beta - DEFICIT_BOUND / math.sqrt(self.A)

    @property
    def lemma_holds(self) -> bool:
        return self.lemma_infimum >= self.stated_floor

    @property
    def display_holds(self) -> bool:
        return self.display_infimum >= self.stated_floor


def bootstrap_beta(beta: float, A: float, k_max: int = 500) -> BootstrapResult:
    """Two indexings of the decreasing sequence beta_k.

    ``display``: beta_0 = beta - 1/sqrt(A), beta_(k+1) = beta_k - 1/sqrt(A (7/6)^k).
    ``lemma_scale``: beta_0 = beta - 1/sqrt(A), beta_(k+1) = beta_k - 1/sqrt(A (7/6)^(k+1)),
    each step paying for the scale A (7/6)^(k+1) it reaches.
    """
    if A <= 0:
        raise ValueError("A must be positive")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    terms = [1.0 / math.sqrt(A * (7.0 / 6.0) ** k) for k in range(k_max + 1)]
    display, lemma = [], []
    for k in range(k_max + 1):
        # partial sums recomputed with fsum so rounding does not accumulate
        display.append(beta - terms[0] - math.fsum(terms[:k]))
        lemma.append(beta - math.fsum(terms[:k + 1]))
    return BootstrapResult(beta, A, display, lemma)


def assembly_term(C: float) -> float:
    """14/sqrt(K C) at K = 3000/C^5; must be at most eps/2."""
    return DEFICIT_BOUND / math.sqrt(min_K(C) * C)


def delta_bound(ell: float, d: float, eps: float) -> float:
    """Hyperbolicity constant bound 12 ell/(1 - 2d - eps)^2."""
    c = 1 - 2 * d - eps
    if c <= 0:
        raise ValueError("1 - 2d - eps must be positive")
    return 12.0 * ell / c**2


def greendlinger_threshold(ell: float, d: float, eps: float) -> float:
    """ell/2 + (ell/2)(1 - 5d - eps): run length two faces must exceed."""
    return ell / 2 + ell / 2 * (1 - 5 * d - eps)


def weak_greendlinger_threshold(ell: float, d: float, eps: float) -> float:
    """ell(1 - 5d/2 - eps): boundary edges (not necessarily consecutive) of some face."""
    return ell * (1 - 2.5 * d - eps)


@dataclass(frozen=True)
class CounterexampleMargin:
    lhs: float  # 6(1-2d)ell + 8 eps ell - 2
    rhs: float  # 7(1-2d-eps')ell
    gap: float  # rhs - lhs; positive means the extension is impossible
    eps_star: float  # eps at which the gap vanishes

    @property
    def positive(self) -> bool:
        return self.gap > 0


def counterexample_margin(ell: float, d: float, eps: float, eps_prime: float) -> CounterexampleMargin:
    """Boundary of the 6-face block plus a fourth relator versus the isoperimetric floor."""
    if d <= 0:
        raise ValueError("d must be positive")
    lhs = 6 * (1 - 2 * d) * ell + 8 * eps * ell - 2
    rhs = 7 * (1 - 2 * d - eps_prime) * ell
    eps_star = ((1 - 2 * d) - 7 * eps_prime + 2 / ell) / 8
    return CounterexampleMargin(lhs, rhs, rhs - lhs, eps_star)


def bounds_table(C: float, d: float, eps: float, ell: float) -> List[Tuple[str, object]]:
    """Every calculator at one parameter point, as (name, value) rows."""
    rows: List[Tuple[str, object]] = []
    rows.append(("alpha", _alpha_or_limit(C)))
    rows.append(("min_K", min_K(C)))
    rows.append(("min_A", min_A(C)))
    sc = side_conditions(C)
    rows.append(("side_condition_A/8", sc.first))
    rows.append(("side_condition_sqrtA", sc.second))
    boot = bootstrap_beta(1 - 2 * d - eps / 2, min_A(C))
    rows.append(("beta_inf_display", boot.display_infimum))
    rows.append(("beta_inf_lemma_scale", boot.lemma_infimum))
    rows.append(("beta_floor_14", boot.stated_floor))
    rows.append(("assembly_14/sqrt(KC)", assembly_term(C)))
    rows.append(("assembly_holds", assembly_term(C) <= eps / 2))
    try:
        rows.append(("delta_bound", delta_bound(ell, d, eps)))
    except ValueError:
        rows.append(("delta_bound", float("inf")))
    rows.append(("greendlinger_threshold", greendlinger_threshold(ell, d, eps)))
    rows.append(("weak_greendlinger_threshold", weak_greendlinger_threshold(ell, d, eps)))
    if d > 0:
        cm = counterexample_margin(ell, d, eps, eps)
        rows.append(("counterexample_gap", cm.gap))
        rows.append(("counterexample_eps_star", cm.eps_star))
    return rows
