"""Certified midpoint-radius arithmetic and the algebraic constants of x^3 - x^2 - 1.

A :class:`RealBall` is a pair ``(mid, rad)`` of raw mpmath floats together with a
working precision in bits.  The exact value it stands for lies somewhere in
``[mid - rad, mid + rad]``.  Every operation rounds the midpoint to nearest and
folds the rounding error, plus the propagated input radii, into the output
radius (rounded upwards), so the enclosure property is preserved step by step.

Only mpmath's raw ``libmp`` layer is used: it takes precision and rounding mode
as explicit arguments, so nothing here touches the global ``mp`` context.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from decimal import ROUND_CEILING, Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

from mpmath.libmp import (
    fhalf,
    fone,
    fzero,
    from_int,
    from_man_exp,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_exp,
    mpf_floor,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_sqrt,
    mpf_sub,
    round_ceiling,
    round_floor,
    round_nearest,
    to_float,
    to_int,
    to_str,
)

from .errors import DomainError, PrecisionError, UndecidedComparison

RAD_PREC = 32
GUARD_BITS = 24
DEFAULT_DIGITS = 256

Number = Union[int, Fraction, str, "RealBall"]


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10)) + 8


def _err(x, prec: int):
    """Upper bound for the error made when ``x`` was rounded to ``prec`` bits."""
    if not x[1]:
        return fzero
    return from_man_exp(1, x[2] + x[3] - prec)


def _rsum(*terms):
    total = fzero
    for t in terms:
        total = mpf_add(total, t, RAD_PREC, round_ceiling)
    return total


def _rmul(a, b):
    return mpf_mul(a, b, RAD_PREC, round_ceiling)


def _fraction(x) -> Fraction:
    sign, man, exp, _ = x
    man = int(man)
    if sign:
        man = -man
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def _from_fraction(value: Fraction, prec: int):
    """Nearest ``prec``-bit float to ``value`` and the rounding error bound."""
    num = from_int(value.numerator)
    den = value.denominator
    if den & (den - 1) == 0:
        return from_man_exp(value.numerator, 1 - den.bit_length()), fzero
    mid = mpf_div(num, from_int(value.denominator), prec, round_nearest)
    return mid, _err(mid, prec)


class RealBall:
    """A real number known to lie in ``[mid - rad, mid + rad]``.

    Instances are immutable.  Arithmetic with ``int``, ``Fraction`` or decimal
    strings is allowed; such operands are converted exactly (or with a certified
    rounding radius).

    Strict and non-strict comparisons only answer when the answer holds for
    every pair of points in the two balls; otherwise they raise
    :class:`UndecidedComparison`.
    """

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid=fzero, rad=fzero, prec: int = digits_to_bits(DEFAULT_DIGITS)):
        if rad[0]:
            raise ValueError("ball radius must be nonnegative")
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "rad", rad)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("RealBall is immutable")

    def __reduce__(self):
        return (RealBall, (self.mid, self.rad, self.prec))

    # ------------------------------------------------------------------ builders

    @classmethod
    def exact(cls, value: Union[int, Fraction, str], prec: int = digits_to_bits(DEFAULT_DIGITS)) -> "RealBall":
        """Ball around an exact rational (``str`` is parsed as a decimal literal)."""
        if isinstance(value, bool):
            raise TypeError("booleans are not numbers here")
        if isinstance(value, numbers.Integral):
            return cls(from_int(int(value)), fzero, prec)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            mid, rad = _from_fraction(value, prec)
            return cls(mid, rad, prec)
        raise TypeError(f"cannot build a RealBall from {type(value).__name__}")

    @classmethod
    def from_interval(cls, lo, hi, prec: int) -> "RealBall":
        """Smallest convenient ball containing ``[lo, hi]``.

        Endpoints are raw mpf tuples or exact rationals.
        """
        if not isinstance(lo, tuple):
            lo = cls.exact(lo, prec).lower()
        if not isinstance(hi, tuple):
            hi = cls.exact(hi, prec).upper()
        if mpf_cmp(lo, hi) > 0:
            raise ValueError("empty interval")
        mid = mpf_mul(mpf_add(lo, hi, prec + 2, round_nearest), fhalf, prec, round_nearest)
        up = mpf_sub(hi, mid, RAD_PREC, round_ceiling)
        down = mpf_sub(mid, lo, RAD_PREC, round_ceiling)
        return cls(mid, up if mpf_cmp(up, down) >= 0 else down, prec)

    @classmethod
    def from_decimal(cls, mid: str, rad: str, prec: int = digits_to_bits(DEFAULT_DIGITS)) -> "RealBall":
        m, mrad = _from_fraction(Fraction(mid), prec)
        r, rrad = _from_fraction(Fraction(rad), RAD_PREC)
        return cls(m, _rsum(mrad, r, rrad), prec)

    def _coerce(self, other) -> "RealBall":
        if isinstance(other, RealBall):
            return other
        return RealBall.exact(other, self.prec)

    # --------------------------------------------------------------- accessors

    def lower(self):
        return mpf_sub(self.mid, self.rad, self.prec, round_floor)

    def upper(self):
        return mpf_add(self.mid, self.rad, self.prec, round_ceiling)

    def lower_fraction(self) -> Fraction:
        return _fraction(self.lower())

    def upper_fraction(self) -> Fraction:
        return _fraction(self.upper())

    def mid_fraction(self) -> Fraction:
        return _fraction(self.mid)

    def rad_fraction(self) -> Fraction:
        return _fraction(self.rad)

    def __float__(self) -> float:
        return to_float(self.mid)

    def __repr__(self) -> str:
        return f"RealBall({to_str(self.mid, 20)} +/- {to_str(self.rad, 3)})"

    def contains(self, value: Union[int, Fraction]) -> bool:
        """Exact membership test for a rational point."""
        value = Fraction(value)
        return self.lower_fraction() <= value <= self.upper_fraction()

    def contains_zero(self) -> bool:
        return mpf_cmp(mpf_abs(self.mid), self.rad) <= 0

    def overlaps(self, other: "RealBall") -> bool:
        other = self._coerce(other)
        return mpf_cmp(self.lower(), other.upper()) <= 0 and mpf_cmp(other.lower(), self.upper()) <= 0

    def contains_ball(self, other: "RealBall") -> bool:
        return mpf_cmp(self.lower(), other.lower()) <= 0 and mpf_cmp(other.upper(), self.upper()) <= 0

    def is_positive(self) -> bool:
        return mpf_cmp(self.lower(), fzero) > 0

    def is_negative(self) -> bool:
        return mpf_cmp(self.upper(), fzero) < 0

    # ------------------------------------------------------------- comparisons

    def __lt__(self, other):
        other = self._coerce(other)
        if mpf_cmp(self.upper(), other.lower()) < 0:
            return True
        if mpf_cmp(self.lower(), other.upper()) >= 0:
            return False
        raise UndecidedComparison(f"cannot decide {self!r} < {other!r}")

    def __le__(self, other):
        other = self._coerce(other)
        if mpf_cmp(self.upper(), other.lower()) <= 0:
            return True
        if mpf_cmp(self.lower(), other.upper()) > 0:
            return False
        raise UndecidedComparison(f"cannot decide {self!r} <= {other!r}")

    def __gt__(self, other):
        return self._coerce(other).__lt__(self)

    def __ge__(self, other):
        return self._coerce(other).__le__(self)

    __hash__ = None

    # -------------------------------------------------------------- arithmetic

    def __neg__(self):
        return RealBall(mpf_neg(self.mid), self.rad, self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        if not self.contains_zero():
            return RealBall(mpf_abs(self.mid), self.rad, self.prec)
        hi = mpf_add(mpf_abs(self.mid), self.rad, RAD_PREC, round_ceiling)
        return RealBall.from_interval(fzero, hi, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = mpf_add(self.mid, other.mid, prec, round_nearest)
        return RealBall(mid, _rsum(self.rad, other.rad, _err(mid, prec)), prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = mpf_sub(self.mid, other.mid, prec, round_nearest)
        return RealBall(mid, _rsum(self.rad, other.rad, _err(mid, prec)), prec)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = mpf_mul(self.mid, other.mid, prec, round_nearest)
        rad = _rsum(
            _rmul(mpf_abs(self.mid), other.rad),
            _rmul(mpf_abs(other.mid), self.rad),
            _rmul(self.rad, other.rad),
            _err(mid, prec),
        )
        return RealBall(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.contains_zero():
            raise DomainError(f"division by a ball containing zero: {other!r}")
        prec = max(self.prec, other.prec)
        mid = mpf_div(self.mid, other.mid, prec, round_nearest)
        bm = mpf_abs(other.mid)
        num = _rsum(_rmul(mpf_abs(self.mid), other.rad), _rmul(bm, self.rad))
        den = mpf_mul(bm, mpf_sub(bm, other.rad, RAD_PREC, round_floor), RAD_PREC, round_floor)
        rad = _rsum(mpf_div(num, den, RAD_PREC, round_ceiling), _err(mid, prec))
        return RealBall(mid, rad, prec)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported; use exp/log")
        if k < 0:
            return RealBall.exact(1, self.prec) / (self ** -k)
        result = RealBall.exact(1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def sqrt(self) -> "RealBall":
        if mpf_cmp(self.lower(), fzero) < 0:
            raise DomainError(f"sqrt of a ball reaching below zero: {self!r}")
        prec = self.prec
        mid = mpf_sqrt(self.mid, prec, round_nearest)
        if not self.mid[1]:
            rad = mpf_sqrt(self.rad, RAD_PREC, round_ceiling)
        else:
            root_lo = mpf_sqrt(self.mid, RAD_PREC, round_floor)
            rad = mpf_div(self.rad, root_lo, RAD_PREC, round_ceiling)
        return RealBall(mid, _rsum(rad, _err(mid, prec)), prec)

    def log(self) -> "RealBall":
        lo = self.lower()
        if mpf_cmp(lo, fzero) <= 0:
            raise DomainError(f"log of a ball that is not strictly positive: {self!r}")
        prec = self.prec
        mid = mpf_log(self.mid, prec + GUARD_BITS, round_nearest)
        mid_rounded = mpf_add(mid, fzero, prec, round_nearest)
        # |log x - log m| <= rad / lo by the mean value theorem
        prop = mpf_div(self.rad, lo, RAD_PREC, round_ceiling)
        return RealBall(mid_rounded, _rsum(prop, _err(mid_rounded, prec), _err(mid_rounded, prec)), prec)

    def exp(self) -> "RealBall":
        prec = self.prec
        mid = mpf_exp(self.mid, prec + GUARD_BITS, round_nearest)
        mid_rounded = mpf_add(mid, fzero, prec, round_nearest)
        top = mpf_exp(mpf_add(self.mid, self.rad, RAD_PREC, round_ceiling), RAD_PREC, round_ceiling)
        prop = _rmul(_rmul(top, self.rad), from_man_exp(0x100001, -20))  # 2^-20 slack on the bound
        return RealBall(mid_rounded, _rsum(prop, _err(mid_rounded, prec), _err(mid_rounded, prec)), prec)

    def floor(self) -> int:
        """Certified floor; raises when the ball straddles an integer."""
        lo = int(to_int(mpf_floor(self.lower())))
        hi = int(to_int(mpf_floor(self.upper())))
        if lo != hi:
            raise PrecisionError(f"floor of {self!r} is not determined")
        return lo

    def floor_bounds(self) -> tuple[int, int]:
        return int(to_int(mpf_floor(self.lower()))), int(to_int(mpf_floor(self.upper())))

    def with_prec(self, prec: int) -> "RealBall":
        mid = mpf_add(self.mid, fzero, prec, round_nearest)
        return RealBall(mid, _rsum(self.rad, _err(mid, prec)), prec)

    # ------------------------------------------------------------ serialisation

    def to_decimal(self, digits: int = 30) -> tuple[str, str]:
        """Decimal ``(mid, rad)`` strings whose ball still encloses this one."""
        exact_mid = self.mid_fraction()
        mid_str = to_str(self.mid, digits, strip_zeros=False) if self.mid[1] else "0"
        shift = abs(Fraction(mid_str) - exact_mid)
        total = self.rad_fraction() + shift
        if total == 0:
            return mid_str, "0"
        with localcontext() as ctx:
            ctx.prec = 4
            ctx.rounding = ROUND_CEILING
            rad_dec = Decimal(total.numerator) / Decimal(total.denominator)
        return mid_str, format(rad_dec, "e")


def ball(value: Number, prec: int = digits_to_bits(DEFAULT_DIGITS)) -> RealBall:
    if isinstance(value, RealBall):
        return value
    return RealBall.exact(value, prec)


def ball_log(x: RealBall) -> RealBall:
    """Certified natural logarithm; raises :class:`DomainError` unless ``x > 0``."""
    return x.log()


def nearest_int_distance(x: RealBall) -> RealBall:
    """Enclosure of ``min_m |x - m|`` over integers ``m``; always inside ``[0, 1/2]``.

    When the ball straddles a half-integer the result is widened to reach 1/2.
    """
    prec = x.prec
    lo, hi = x.lower(), x.upper()
    m_lo = int(to_int(mpf_floor(mpf_add(lo, fhalf, prec + 2, round_floor))))
    m_hi = int(to_int(mpf_floor(mpf_add(hi, fhalf, prec + 2, round_ceiling))))
    if m_lo == m_hi:
        m = from_int(m_lo)
        d_lo = mpf_sub(lo, m, prec, round_floor)
        d_hi = mpf_sub(hi, m, prec, round_ceiling)
        if mpf_cmp(d_lo, fzero) >= 0:
            return RealBall.from_interval(d_lo, d_hi, prec)
        if mpf_cmp(d_hi, fzero) <= 0:
            return RealBall.from_interval(mpf_neg(d_hi), mpf_neg(d_lo), prec)
        top = d_hi if mpf_cmp(d_hi, mpf_neg(d_lo)) >= 0 else mpf_neg(d_lo)
        return RealBall.from_interval(fzero, top, prec)
    if m_hi - m_lo > 1:
        return RealBall.from_interval(fzero, fhalf, prec)
    # exactly one half-integer inside [lo, hi]
    d_lo = mpf_sub(lo, from_int(m_lo), prec, round_floor)
    d_hi = mpf_sub(from_int(m_hi), hi, prec, round_floor)
    bottom = d_lo if mpf_cmp(d_lo, d_hi) <= 0 else d_hi
    if mpf_cmp(bottom, fzero) < 0:
        bottom = fzero
    return RealBall.from_interval(bottom, fhalf, prec)


# ---------------------------------------------------------------- polynomials


def _horner(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _horner_mpf(coeffs: Sequence[int], x, prec: int):
    acc = fzero
    for c in coeffs:
        acc = mpf_add(mpf_mul(acc, x, prec, round_nearest), from_int(c), prec, round_nearest)
    return acc


def poly_eval(coeffs: Sequence[int], x: RealBall) -> RealBall:
    """Evaluate an integer polynomial (highest degree first) on a ball."""
    acc = RealBall.exact(0, x.prec)
    for c in coeffs:
        acc = acc * x + c
    return acc


def certified_root(coeffs: Sequence[int], lo: Fraction, hi: Fraction, prec: int) -> RealBall:
    """Enclose the unique root of an integer polynomial inside ``(lo, hi)``.

    Bisection on exact dyadic rationals narrows the bracket, Newton's method
    in ``prec + 20`` bit arithmetic polishes it, and the final ball is accepted
    only after an exact sign change of the polynomial across its endpoints.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    f_lo, f_hi = _horner(coeffs, lo), _horner(coeffs, hi)
    if f_lo == 0 or f_hi == 0 or (f_lo > 0) == (f_hi > 0):
        raise ValueError(f"no certified sign change of the polynomial on ({lo}, {hi})")
    deriv = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
    rising = f_hi > 0
    for _ in range(40):
        mid = (lo + hi) / 2
        f_mid = _horner(coeffs, mid)
        if f_mid == 0:
            return RealBall.exact(mid, prec)
        if (f_mid > 0) == rising:
            hi = mid
        else:
            lo = mid
    work = prec + 20
    x, _ = _from_fraction((lo + hi) / 2, work)
    budget = 10 * prec
    target = from_man_exp(1, -(prec + 10))
    for _ in range(budget):
        step = mpf_div(_horner_mpf(coeffs, x, work), _horner_mpf(deriv, x, work), work, round_nearest)
        x = mpf_sub(x, step, work, round_nearest)
        if mpf_cmp(mpf_abs(step), target) < 0:
            break
    else:
        raise PrecisionError("root refinement did not converge within the iteration budget")
    centre = mpf_add(x, fzero, prec, round_nearest)
    c = _fraction(centre)
    for slack in range(0, 17, 4):
        eps = Fraction(1, 2 ** (prec - slack))
        a, b = _horner(coeffs, c - eps), _horner(coeffs, c + eps)
        if a != 0 and b != 0 and (a > 0) != (b > 0):
            return RealBall(centre, from_man_exp(1, -(prec - slack)), prec)
    raise PrecisionError("could not certify a sign change around the refined root")


# ------------------------------------------------------------------ constants

CHAR_POLY = (1, -1, 0, -1)  # x^3 - x^2 - 1
A1_MINPOLY = (31, 0, -3, -1)  # 31x^3 - 3x - 1


@dataclass(frozen=True)
class AlgebraicConstants:
    """Enclosures of the dominant root and its Binet coefficient at one precision."""

    precision_digits: int
    alpha1: RealBall
    a1: RealBall
    log_alpha1: RealBall
    log10: RealBall

    @property
    def prec(self) -> int:
        return self.alpha1.prec

    @cached_property
    def theta(self) -> RealBall:
        """log 10 / log alpha1, the slope shared by all three reductions."""
        return self.log10 / self.log_alpha1

    @cached_property
    def abs_alpha2(self) -> RealBall:
        """|alpha2| = |alpha3| = alpha1^(-1/2): the three roots multiply to 1."""
        return (1 / self.alpha1).sqrt()

    @cached_property
    def log_9a1(self) -> RealBall:
        return (9 * self.a1).log()

    def exact(self, value) -> RealBall:
        return RealBall.exact(value, self.prec)


def make_constants(precision_digits: int = DEFAULT_DIGITS) -> AlgebraicConstants:
    if precision_digits < 32:
        raise ValueError("precision_digits must be at least 32")
    prec = digits_to_bits(precision_digits)
    alpha1 = certified_root(CHAR_POLY, Fraction("1.46"), Fraction("1.47"), prec)
    a1 = certified_root(A1_MINPOLY, Fraction("0.41"), Fraction("0.42"), prec)
    consts = AlgebraicConstants(
        precision_digits=precision_digits,
        alpha1=alpha1,
        a1=a1,
        log_alpha1=alpha1.log(),
        log10=RealBall.exact(10, prec).log(),
    )
    _check_constants(consts)
    return consts


def _check_constants(c: AlgebraicConstants) -> None:
    if not (c.alpha1 > Fraction("1.46") and c.alpha1 < Fraction("1.47")):
        raise PrecisionError("alpha1 enclosure escaped (1.46, 1.47)")
    if not (c.a1 > Fraction("0.41") and c.a1 < Fraction("0.42")):
        raise PrecisionError("a1 enclosure escaped (0.41, 0.42)")
    # a1 = alpha1 / f'(alpha1) = 1 / (3 alpha1 - 2); both routes must agree
    if not c.a1.overlaps(1 / (3 * c.alpha1 - 2)):
        raise PrecisionError("a1 root enclosure disagrees with 1/(3 alpha1 - 2)")
