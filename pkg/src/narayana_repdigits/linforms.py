"""Logarithmic heights, Matveev's lower bound and the three analytic bounding steps.

Every constant is recomputed in ball arithmetic from the ingredients of the
argument; the published decimal values are kept only as targets to compare
against (``PUBLISHED_TARGETS``).  Bounds that depend on ``n`` are carried as a
coefficient times ``(1 + log n)^k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Optional

from .errors import InvalidRational, LemmaInapplicable
from .hiprec import AlgebraicConstants, RealBall

# Displayed values the derivation is checked against (derived <= target).
PUBLISHED_TARGETS = {
    "h_lambda1_step1": "5.54",
    "A1_step1": "16.62",
    "matveev_step1": "1.20e14",
    "c_step1": "1.21e14",
    "h_lambda1_step2": "1.22e14",
    "A1_step2": "3.66e14",
    "matveev_step2": "2.64e27",
    "c_step2": "2.65e27",
    "c_u1_plus_u2": "2.66e27",
    "A1_step3": "8.01e27",
    "matveev_step3": "5.77e40",
    "T_log_power": "1.53e41",
    "n_bound": "1.05e48",
    "m_bound": "1.76e47",
}

# Below this index the analytic bound is not needed: it is far smaller than
# the final bound anyway.  Above it, 1 + log n <= (1 + 1/log n0) log n.
LOG_SPLIT_INDEX = 10**20


def height_rational(p: int, q: int, prec: int) -> RealBall:
    """h(p/q) = log max(|p|, q) for the reduced fraction."""
    if q == 0:
        raise InvalidRational("denominator must be nonzero")
    r = Fraction(p, q)
    return RealBall.exact(max(abs(r.numerator), r.denominator), prec).log()


def height_a1(consts: AlgebraicConstants) -> RealBall:
    """h(a1) = (1/3) log 31.

    31x^3 - 3x - 1 has leading coefficient 31 and all three roots inside the
    unit disc (a1 < 0.42, and the complex pair has |a2|^2 = 1/(31 a1)), so only
    the leading-coefficient term survives.
    """
    conj_sq = 1 / (31 * consts.a1)
    if not (consts.a1 < 1 and conj_sq < 1):
        raise AssertionError("conjugates of a1 are not certified inside the unit disc")
    return consts.exact(31).log() / 3


def height_alpha1(consts: AlgebraicConstants) -> RealBall:
    """h(alpha1) = (1/3) log alpha1 (monic, conjugates of modulus alpha1^(-1/2) < 1)."""
    return consts.log_alpha1 / 3


def matveev_constant(s: int, d: int, prec: int) -> RealBall:
    """1.4 * 30^(s+3) * s^4.5 * d^2 * (1 + log d)."""
    s_ball = RealBall.exact(s, prec)
    return (
        RealBall.exact(Fraction(7, 5), prec)
        * 30 ** (s + 3)
        * s**4
        * s_ball.sqrt()
        * d**2
        * (1 + RealBall.exact(d, prec).log())
    )


@dataclass(frozen=True)
class MatveevInstance:
    """Data for one application of Matveev's theorem.

    ``A`` holds the A_j; when ``a_log_power`` is k > 0 the first entry is only
    the coefficient of an A_1 that grows like (1 + log n)^k.  ``D`` is None
    when D = n is left symbolic.
    """

    s: int
    d: int
    A: tuple[RealBall, ...]
    D: Optional[int] = None
    a_log_power: int = 0

    def __post_init__(self):
        if self.s < 1 or self.d < 1 or (self.D is not None and self.D < 1):
            raise ValueError("Matveev needs s, d, D >= 1")
        if len(self.A) != self.s:
            raise ValueError("need exactly s values A_j")
        # the bound is increasing in each A_j, so A_j stands for the top of its ball
        for a in self.A:
            if a.upper_fraction() < Fraction(16, 100):
                raise ValueError(f"A_j must be at least 0.16, got {a!r}")

    @property
    def prec(self) -> int:
        return self.A[0].prec


def matveev_coefficient(inst: MatveevInstance) -> RealBall:
    """The factor multiplying (1 + log D)(1 + log n)^k in the lower bound."""
    value = matveev_constant(inst.s, inst.d, inst.prec)
    for a in inst.A:
        value = value * a
    return value


def matveev_lower_bound(inst: MatveevInstance, n: Optional[int] = None) -> RealBall:
    """Magnitude C with log|Gamma| > -C, evaluated at D = n."""
    D = n if n is not None else inst.D
    if D is None:
        raise ValueError("give n or an instance with D set")
    log_term = 1 + RealBall.exact(D, inst.prec).log()
    return matveev_coefficient(inst) * log_term ** (1 + inst.a_log_power)


@dataclass(frozen=True)
class StepBound:
    """(target quantity) < coefficient * (1 + log n)^exponent."""

    step_id: int
    coefficient: RealBall
    exponent: int
    matveev: RealBall
    details: dict = field(default_factory=dict, compare=False)

    def at(self, n: int) -> RealBall:
        return self.coefficient * (1 + RealBall.exact(n, self.coefficient.prec).log()) ** self.exponent


def _log_lambda1_step1(consts: AlgebraicConstants) -> RealBall:
    """max over f1 of |log(9 a1 / f1)|."""
    worst = None
    for f1 in range(1, 10):
        v = abs((9 * consts.a1 / f1).log())
        worst = v if worst is None or v.upper_fraction() > worst.upper_fraction() else worst
    return worst


def step1_bound(consts: AlgebraicConstants) -> StepBound:
    """u1 log 10 < c1 (1 + log n) from Lambda_1 = (9a1/f1) alpha1^n 10^-(2u1+u2) - 1."""
    log9 = consts.exact(9).log()
    h_lambda1 = log9 + height_a1(consts) + log9  # h(9) + h(a1) + h(f1), f1 <= 9
    A1 = 3 * h_lambda1
    log_lambda1 = _log_lambda1_step1(consts)
    if not log_lambda1 <= A1:
        raise AssertionError("A1 does not dominate |log lambda1| in step 1")
    inst = MatveevInstance(3, 3, (A1, consts.log_alpha1, 3 * consts.log10))
    matveev = matveev_coefficient(inst)
    # |Lambda_1| < 27 / 10^u1 gives u1 log 10 < C (1 + log n) + log 27 <= (C + log 27)(1 + log n)
    coefficient = matveev + consts.exact(27).log()
    return StepBound(
        1,
        coefficient,
        1,
        matveev,
        {"h_lambda1": h_lambda1, "A1": A1, "max_abs_log_lambda1": log_lambda1},
    )


def step2_bound(consts: AlgebraicConstants, step1: StepBound) -> StepBound:
    """u2 log 10 < c2 (1 + log n)^2 from Lambda_2 with lambda1 = 9a1 / (f1 10^u1 - (f1 - f2))."""
    log9 = consts.exact(9).log()
    log2 = consts.exact(2).log()
    # h(9) + h(a1) + u1 h(10) + h(f1) + h(f1 - f2) + log 2, with u1 log 10 < c1 (1 + log n)
    h_const = 3 * log9 + height_a1(consts) + log2
    h_coeff = step1.coefficient + h_const
    A1 = 3 * h_coeff
    # |log lambda1| <= log(10^(u1+1)) + |log 9a1| < c1(1+log n) + log 10 + |log 9a1| <= A1 (1 + log n)
    log_bound = step1.coefficient + consts.log10 + abs(consts.log_9a1)
    if not log_bound <= A1:
        raise AssertionError("A1 does not dominate |log lambda1| in step 2")
    inst = MatveevInstance(3, 3, (A1, consts.log_alpha1, 3 * consts.log10), a_log_power=1)
    matveev = matveev_coefficient(inst)
    coefficient = matveev + consts.exact(27).log()
    return StepBound(2, coefficient, 2, matveev, {"h_lambda1": h_coeff, "A1": A1})


@dataclass(frozen=True)
class Step3Result:
    u_sum: StepBound
    matveev_bound: StepBound
    T: RealBall
    log_power_bound: RealBall
    n_bound: int
    m_bound: int
    details: dict = field(default_factory=dict, compare=False)


def guzman_luca(m: int, T) -> RealBall:
    """If x / (log x)^m < T and T > (4 m^2)^m then x < 2^m T (log T)^m."""
    if m < 1:
        raise LemmaInapplicable("m must be a positive integer")
    if not isinstance(T, RealBall):
        T = RealBall.exact(T)
    if not T > (4 * m * m) ** m:
        raise LemmaInapplicable(f"T must exceed (4m^2)^m = {(4 * m * m) ** m}")
    return 2**m * T * T.log() ** m


def step3_n_bound(consts: AlgebraicConstants, step1: StepBound, step2: StepBound) -> Step3Result:
    """Absolute bound on n from Lambda_3 and the Guzman-Luca lemma."""
    # (u1 + u2) log 10 < c1 (1 + log n) + c2 (1 + log n)^2 <= (c1 + c2)(1 + log n)^2
    u_sum = StepBound(3, step1.coefficient + step2.coefficient, 2, step2.matveev)
    log9 = consts.exact(9).log()
    # lambda1 = X / (9 a1) with X = f1 10^(u1+u2) - (f1-f2) 10^u2 + (f1-f2), 0 < X < 10^(u1+u2+1),
    # so h(lambda1) <= h(9) + h(a1) + log X < log 9 + h(a1) + log 10 + (u1 + u2) log 10.
    h_coeff = u_sum.coefficient + log9 + height_a1(consts) + consts.log10
    A1 = 3 * h_coeff
    log_bound = u_sum.coefficient + consts.log10 + abs(consts.log_9a1)
    if not log_bound <= A1:
        raise AssertionError("A1 does not dominate |log lambda1| in step 3")
    inst = MatveevInstance(3, 3, (A1, consts.log_alpha1, 3 * consts.log10), a_log_power=2)
    matveev = matveev_coefficient(inst)
    matveev_bound = StepBound(3, matveev, 3, matveev, {"h_lambda1": h_coeff, "A1": A1})
    # |Lambda_3| < 2 / alpha1^n:  n log alpha1 - log 2 < M3 (1 + log n)^3.
    # For n > n0: (1 + log n)^3 <= (1 + 1/log n0)^3 (log n)^3 and log 2 <= log 2 (log n)^3 / (log n0)^3.
    log_n0 = consts.exact(LOG_SPLIT_INDEX).log()
    widen = (1 + 1 / log_n0) ** 3
    T = (matveev * widen + consts.exact(2).log() / log_n0**3) / consts.log_alpha1
    log_power = guzman_luca(3, T)
    n_bound = max(LOG_SPLIT_INDEX, log_power.floor_bounds()[1] + 1)
    # digit length: (2u1 + u2) log 10 - 2 < n log alpha1
    m_ball = (consts.log_alpha1 * n_bound + 2) / consts.log10
    m_bound = m_ball.floor_bounds()[1] + 1
    return Step3Result(
        u_sum,
        matveev_bound,
        T,
        log_power,
        n_bound,
        m_bound,
        {"log_split_index": LOG_SPLIT_INDEX, "widen_factor": widen},
    )


def digit_length_window(u1: int, u2: int, consts: AlgebraicConstants) -> tuple[int, int]:
    """Integers n with (2u1+u2) log 10 - 2 < n log alpha1 < (2u1+u2) log 10 + 1."""
    if u1 < 1 or u2 < 1:
        raise ValueError("u1, u2 must be positive")
    L = (2 * u1 + u2) * consts.log10
    low = (L - 2) / consts.log_alpha1
    high = (L + 1) / consts.log_alpha1
    n_low = low.floor_bounds()[0] + 1
    high_hi = high.upper_fraction()
    n_high = math.ceil(high_hi) - 1
    return n_low, n_high


@dataclass(frozen=True)
class AnalyticBounds:
    step1: StepBound
    step2: StepBound
    step3: Step3Result


def analytic_bounds(consts: AlgebraicConstants) -> AnalyticBounds:
    s1 = step1_bound(consts)
    s2 = step2_bound(consts, s1)
    return AnalyticBounds(s1, s2, step3_n_bound(consts, s1, s2))


def derived_constants(bounds: AnalyticBounds) -> dict[str, RealBall]:
    """Derived counterparts of every entry of PUBLISHED_TARGETS."""
    s1, s2, s3 = bounds.step1, bounds.step2, bounds.step3
    prec = s1.coefficient.prec
    return {
        "h_lambda1_step1": s1.details["h_lambda1"],
        "A1_step1": s1.details["A1"],
        "matveev_step1": s1.matveev,
        "c_step1": s1.coefficient,
        "h_lambda1_step2": s2.details["h_lambda1"],
        "A1_step2": s2.details["A1"],
        "matveev_step2": s2.matveev,
        "c_step2": s2.coefficient,
        "c_u1_plus_u2": s3.u_sum.coefficient,
        "A1_step3": s3.matveev_bound.details["A1"],
        "matveev_step3": s3.matveev_bound.coefficient,
        "T_log_power": s3.T,
        "n_bound": RealBall.exact(s3.n_bound, prec),
        "m_bound": RealBall.exact(s3.m_bound, prec),
    }


def target_ceiling(displayed: str) -> Fraction:
    """A displayed constant plus half a unit in its last shown digit."""
    exponent = Decimal(displayed).as_tuple().exponent
    return Fraction(displayed) + Fraction(1, 2) * Fraction(10) ** exponent


def compare_with_targets(bounds: AnalyticBounds) -> dict[str, bool]:
    """True where the derived ball lies entirely below the displayed value (ties allowed)."""
    derived = derived_constants(bounds)
    return {name: derived[name] <= target_ceiling(PUBLISHED_TARGETS[name]) for name in PUBLISHED_TARGETS}
