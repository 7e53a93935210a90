"""Reference computations that share no code with the package."""

from decimal import Decimal, localcontext
from fractions import Fraction


def atanh_series(x: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atanh(x) for 0 < x < 1 from the first ``terms`` odd powers."""
    total = Fraction(0)
    power = x
    for k in range(terms):
        total += power / (2 * k + 1)
        power *= x * x
    # tail is bounded by the next term over (1 - x^2)
    tail = power / (2 * terms + 1) / (1 - x * x)
    return total, total + tail


def ln10_interval(terms: int = 40) -> tuple[Fraction, Fraction]:
    """ln 10 = 3 ln 2 + ln(5/4), with ln y = 2 atanh((y - 1)/(y + 1))."""
    lo2, hi2 = atanh_series(Fraction(1, 3), terms)
    lo54, hi54 = atanh_series(Fraction(1, 9), terms)
    return 6 * lo2 + 2 * lo54, 6 * hi2 + 2 * hi54


def decimal_ln(x: Fraction, digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        return (Decimal(x.numerator) / Decimal(x.denominator)).ln()


def newton_alpha(digits: int = 80) -> Decimal:
    """Real root of x^3 - x^2 - 1 by Newton from 1.47 in Decimal."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        x = Decimal("1.47")
        for _ in range(200):
            step = (x**3 - x**2 - 1) / (3 * x**2 - 2 * x)
            x -= step
            if abs(step) < Decimal(10) ** (-digits - 5):
                break
        return x


def narayana_list(n_max: int) -> list[int]:
    seq = [0, 1, 1]
    while len(seq) <= n_max:
        seq.append(seq[-1] + seq[-3])
    return seq[: n_max + 1]

