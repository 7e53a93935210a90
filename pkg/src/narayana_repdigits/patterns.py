"""Repdigits and palindromic concatenations f1^u1 f2^u2 f1^u1 in base 10."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPattern


@dataclass(frozen=True, order=True)
class Repdigit:
    digit: int
    length: int

    def __post_init__(self):
        if not (1 <= self.digit <= 9) or self.length < 1:
            raise InvalidPattern(f"not a repdigit: digit={self.digit}, length={self.length}")

    @property
    def value(self) -> int:
        return repdigit_value(self.digit, self.length)


def repdigit_value(b: int, k: int) -> int:
    if not (1 <= b <= 9) or k < 1:
        raise InvalidPattern(f"repdigit needs 1 <= b <= 9 and k >= 1, got b={b}, k={k}")
    return b * (10**k - 1) // 9


@dataclass(frozen=True, order=True)
class PalPattern:
    """The digit string f1 repeated u1 times, f2 repeated u2 times, f1 repeated u1 times."""

    f1: int
    f2: int
    u1: int
    u2: int

    def __post_init__(self):
        if not (1 <= self.f1 <= 9):
            raise InvalidPattern(f"outer digit must be in 1..9, got {self.f1}")
        if not (0 <= self.f2 <= 9):
            raise InvalidPattern(f"inner digit must be in 0..9, got {self.f2}")
        if self.f1 == self.f2:
            raise InvalidPattern("outer and inner digits must differ")
        if self.u1 < 1 or self.u2 < 1:
            raise InvalidPattern("block lengths must be positive")

    @property
    def length(self) -> int:
        return 2 * self.u1 + self.u2

    @property
    def value(self) -> int:
        return pattern_value(self)

    def digits(self) -> str:
        return str(self.f1) * self.u1 + str(self.f2) * self.u2 + str(self.f1) * self.u1

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.f1, self.f2, self.u1, self.u2)


def pattern_value(p: PalPattern) -> int:
    """Closed form (f1 10^(2u1+u2) - (f1-f2) 10^(u1+u2) + (f1-f2) 10^u1 - f1) / 9."""
    f1, f2, u1, u2 = p.f1, p.f2, p.u1, p.u2
    diff = f1 - f2
    numerator = f1 * 10 ** (2 * u1 + u2) - diff * 10 ** (u1 + u2) + diff * 10**u1 - f1
    value, rest = divmod(numerator, 9)
    assert rest == 0
    return value


def pattern_parse(v: int) -> list[PalPattern]:
    """Every PalPattern whose value is ``v``, ordered by (u1, u2)."""
    if v < 1:
        raise ValueError("pattern_parse expects a positive integer")
    s = str(v)
    L = len(s)
    found = []
    for u1 in range(1, (L - 1) // 2 + 1):
        u2 = L - 2 * u1
        head, middle, tail = s[:u1], s[u1 : u1 + u2], s[u1 + u2 :]
        f1, f2 = s[0], middle[0]
        if f1 == f2 or head != f1 * u1 or tail != head or middle != f2 * u2:
            continue
        found.append(PalPattern(int(f1), int(f2), u1, u2))
    return found


def all_patterns(max_length: int, u_max: int | None = None):
    """Yield every PalPattern with 2u1 + u2 <= max_length (and u1, u2 <= u_max)."""
    for u1 in range(1, (max_length - 1) // 2 + 1):
        if u_max is not None and u1 > u_max:
            break
        for u2 in range(1, max_length - 2 * u1 + 1):
            if u_max is not None and u2 > u_max:
                break
            for f1 in range(1, 10):
                for f2 in range(10):
                    if f2 != f1:
                        yield PalPattern(f1, f2, u1, u2)
