"""Exhaustive small-range search for Narayana terms of the form f1^u1 f2^u2 f1^u1."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .patterns import PalPattern, all_patterns, pattern_parse, pattern_value
from .sequence import term, terms


@dataclass(frozen=True, order=True)
class SearchHit:
    n: int
    pattern: PalPattern
    value: int

    def to_dict(self) -> dict:
        f1, f2, u1, u2 = self.pattern.as_tuple()
        return {"n": str(self.n), "f1": str(f1), "f2": str(f2), "u1": str(u1), "u2": str(u2), "value": str(self.value)}


def _scan(n_lo: int, n_hi: int, u_max: int) -> list[SearchHit]:
    hits = []
    for n in range(n_lo, n_hi + 1):
        value = term(n)
        for p in pattern_parse(value):
            if p.u1 <= u_max and p.u2 <= u_max:
                hits.append(SearchHit(n, p, value))
    return hits


def _scan_chunk(args):
    return _scan(*args)


def small_range_search(n_max: int, u_max: int, threads: int = 1) -> list[SearchHit]:
    """Parse the decimal digits of N_1..N_n_max; hits come back sorted by n.

    With n_max = 500 every term has at most 84 digits, so u_max >= 42 already
    covers every possible block length.
    """
    if n_max < 1 or u_max < 1:
        raise ValueError("n_max and u_max must be positive")
    if threads <= 1:
        return sorted(_scan(1, n_max, u_max))
    step = -(-n_max // threads)
    chunks = [(lo, min(lo + step - 1, n_max), u_max) for lo in range(1, n_max + 1, step)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_scan_chunk, chunks))
    return sorted(hit for part in parts for hit in part)


def oracle_search(n_max: int, u_max: int) -> list[SearchHit]:
    """Independent direction: enumerate patterns, look them up among N_1..N_n_max."""
    if n_max < 1 or u_max < 1:
        raise ValueError("n_max and u_max must be positive")
    seq = terms(n_max)
    index: dict[int, list[int]] = {}
    for n in range(1, n_max + 1):
        index.setdefault(seq[n], []).append(n)
    max_length = len(str(term(n_max)))
    hits = []
    for p in all_patterns(max_length, u_max):
        value = pattern_value(p)
        for n in index.get(value, ()):
            hits.append(SearchHit(n, p, value))
    return sorted(hits)
