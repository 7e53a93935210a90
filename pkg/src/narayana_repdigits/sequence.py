"""Narayana's cows sequence: exact terms, Binet rounding, residual and growth checks.

Indexing follows the initial conditions N_0 = 0, N_1 = N_2 = 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionError
from .hiprec import AlgebraicConstants, RealBall

_cache = [0, 1, 1]
_cache_lock = threading.Lock()


def term(n: int) -> int:
    """Exact N_n by the recurrence N_{n+3} = N_{n+2} + N_n."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n < len(_cache):
        return _cache[n]
    with _cache_lock:
        while len(_cache) <= n:
            _cache.append(_cache[-1] + _cache[-3])
        return _cache[n]


def terms(n_max: int) -> list[int]:
    """[N_0, ..., N_n_max]."""
    term(n_max)
    return _cache[: n_max + 1]


@dataclass(frozen=True)
class NarayanaTerm:
    index: int
    value: int

    @classmethod
    def at(cls, n: int) -> "NarayanaTerm":
        return cls(n, term(n))


def dominant_part(n: int, consts: AlgebraicConstants) -> RealBall:
    """The ball a1 * alpha1^n."""
    return consts.a1 * consts.alpha1**n


def binet_term(n: int, consts: AlgebraicConstants) -> int:
    """N_n recovered by rounding a1 * alpha1^n to the nearest integer.

    Sound because |N_n - a1 alpha1^n| < 1/2 for n >= 1 (see :func:`rounding_margin_holds`).
    """
    if n < 1:
        raise ValueError("binet_term needs n >= 1")
    approx = dominant_part(n, consts)
    if not approx.rad_fraction() < Fraction(1, 100):
        raise PrecisionError(f"a1*alpha1^{n} is too wide to round at {consts.precision_digits} digits")
    m = round(approx.mid_fraction())
    if not (approx.lower_fraction() > m - Fraction(1, 2) and approx.upper_fraction() < m + Fraction(1, 2)):
        raise PrecisionError(f"a1*alpha1^{n} does not round unambiguously")
    return m


def residual(n: int, consts: AlgebraicConstants) -> RealBall:
    """Enclosure of r(n) = N_n - a1 alpha1^n = a2 alpha2^n + a3 alpha3^n."""
    if n < 1:
        raise ValueError("residual needs n >= 1")
    return RealBall.exact(term(n), consts.prec) - dominant_part(n, consts)


def residual_bound(n: int, consts: AlgebraicConstants) -> RealBall:
    """alpha1^(-n/2), the claimed bound on |r(n)|."""
    return consts.abs_alpha2**n


def residual_within_bound(n: int, consts: AlgebraicConstants) -> bool:
    return abs(residual(n, consts)) < residual_bound(n, consts)


@dataclass(frozen=True)
class ResidualModel:
    """Magnitude data for the two complex roots, kept in real arithmetic.

    |a2| = |a3| < 0.28 and |alpha2| = |alpha3| = alpha1^(-1/2), so
    |r(n)| <= 2 * 0.28 * alpha1^(-n/2) = 0.56 * alpha1^(-n/2).
    """

    abs_a2_bound: Fraction
    abs_alpha2: RealBall

    @classmethod
    def from_constants(cls, consts: AlgebraicConstants) -> "ResidualModel":
        model = cls(Fraction(28, 100), consts.abs_alpha2)
        model.check(consts)
        return model

    def check(self, consts: AlgebraicConstants) -> None:
        if not (self.abs_alpha2 > Fraction("0.82") and self.abs_alpha2 < Fraction("0.83")):
            raise PrecisionError("|alpha2| enclosure escaped (0.82, 0.83)")
        # |a2|^2 = a2*a3 = (1/31) / a1 from the minimal polynomial 31x^3 - 3x - 1
        abs_a2_sq = 1 / (31 * consts.a1)
        if not abs_a2_sq < self.abs_a2_bound**2:
            raise PrecisionError("|a2| is not certified below 0.28")

    def residual_magnitude(self, n: int) -> RealBall:
        return 2 * self.abs_a2_bound * self.abs_alpha2**n


def rounding_margin_holds(consts: AlgebraicConstants) -> bool:
    """Self-check: 2|a2||alpha2|^n <= 0.56 alpha1^(-n/2) < 1/2 for every n >= 1.

    The bound decreases in n, so checking n = 1 covers all indices.
    """
    model = ResidualModel.from_constants(consts)
    return model.residual_magnitude(1) < Fraction(1, 2)


def growth_holds(n: int, consts: AlgebraicConstants, shift: int = 2) -> bool:
    """Certify alpha1^(n-shift) <= N_n <= alpha1^(n-shift+1).

    ``shift=2`` is the textbook statement; with N_0 = 0 indexing the inequality
    that actually holds for n >= 2 is ``shift=3``.
    """
    if n < 1:
        raise ValueError("growth inequality is stated for n >= 1")
    value = RealBall.exact(term(n), consts.prec)
    return consts.alpha1 ** (n - shift) <= value and value <= consts.alpha1 ** (n - shift + 1)
