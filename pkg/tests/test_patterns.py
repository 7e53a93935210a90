import pytest

from narayana_repdigits.errors import InvalidPattern
from narayana_repdigits.patterns import PalPattern, Repdigit, all_patterns, pattern_parse, pattern_value, repdigit_value


def concat(f1, f2, u1, u2) -> int:
    return int(str(f1) * u1 + str(f2) * u2 + str(f1) * u1)


@pytest.mark.parametrize(
    "fields, value", [((5, 9, 1, 1), 595), ((1, 0, 1, 1), 101), ((2, 7, 2, 3), 2277722)]
)
def test_pattern_value_examples(fields, value):
    assert pattern_value(PalPattern(*fields)) == value


@pytest.mark.parametrize("fields", [(0, 1, 1, 1), (3, 3, 1, 1), (1, 10, 1, 1), (1, 2, 0, 1), (1, 2, 1, 0)])
def test_invalid_patterns(fields):
    with pytest.raises(InvalidPattern):
        PalPattern(*fields)


def test_parse_examples():
    assert pattern_parse(595) == [PalPattern(5, 9, 1, 1)]
    assert pattern_parse(999) == []
    assert pattern_parse(1221) == [PalPattern(1, 2, 1, 2)]
    assert pattern_parse(7) == []


def test_parse_returns_every_decomposition():
    # 11011: u1 = 2 with a zero middle block; u1 = 1 fails because the middle is not uniform
    assert pattern_parse(11011) == [PalPattern(1, 0, 2, 1)]
    assert pattern_parse(1001) == [PalPattern(1, 0, 1, 2)]


def test_parse_rejects_nonpositive():
    with pytest.raises(ValueError):
        pattern_parse(0)


def test_round_trip_exhaustive():
    count = 0
    for f1 in range(1, 10):
        for f2 in range(10):
            if f2 == f1:
                continue
            for u1 in range(1, 7):
                for u2 in range(1, 7):
                    p = PalPattern(f1, f2, u1, u2)
                    v = pattern_value(p)
                    assert v == concat(f1, f2, u1, u2)
                    assert len(str(v)) == 2 * u1 + u2
                    assert p in pattern_parse(v)
                    count += 1
    assert count == 81 * 36


def test_all_patterns_counts():
    pats = list(all_patterns(5))
    assert len(pats) == len(set(pats))
    # lengths 3: (1,1); 4: (1,2); 5: (1,3), (2,1)
    assert len(pats) == 81 * 4
    assert all(p.length <= 5 for p in pats)
    assert len(list(all_patterns(5, u_max=1))) == 81


def test_repdigits():
    assert repdigit_value(7, 3) == 777
    assert Repdigit(4, 2).value == 44
    with pytest.raises(InvalidPattern):
        repdigit_value(10, 1)


def test_pattern_digits_and_order():
    p = PalPattern(2, 7, 2, 3)
    assert p.digits() == "2277722"
    assert p.as_tuple() == (2, 7, 2, 3)
    assert PalPattern(1, 0, 1, 1) < PalPattern(1, 2, 1, 1)
