from narayana_repdigits.patterns import PalPattern
from narayana_repdigits.search import SearchHit, oracle_search, small_range_search


def test_unique_hit_up_to_500():
    hits = small_range_search(500, 100)
    assert hits == [SearchHit(19, PalPattern(5, 9, 1, 1), 595)]
    assert hits[0].to_dict() == {"n": "19", "f1": "5", "f2": "9", "u1": "1", "u2": "1", "value": "595"}


def test_agrees_with_oracle():
    for n_max, u_max in ((50, 3), (120, 6), (200, 10)):
        assert small_range_search(n_max, u_max) == oracle_search(n_max, u_max)


def test_parallel_matches_serial():
    assert small_range_search(300, 20, threads=2) == small_range_search(300, 20)


def test_block_cap_excludes_hit():
    assert small_range_search(18, 5) == []
