"""Continued fractions and the Baker-Davenport style reduction of the exponent bounds.

For a slope ``theta``, a family of shifts ``mu``, constants ``A > 0``, ``B > 1``
and a cap ``M``: if ``p/q`` is a convergent of ``theta`` with ``q > 6M`` and

    xi = ||mu q|| - M ||theta q|| > 0,

then ``0 < |m theta - n + mu| < A B^(-kappa)`` has no solution with ``m <= M``
and ``kappa >= log(A q / xi) / log B``.  Each stage below builds its family of
``mu`` values, looks for a convergent giving ``xi > 0`` for the whole family,
and turns it into an integer bound on ``kappa``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import PrecisionError, PrecisionExhausted, ReductionFailed
from .hiprec import AlgebraicConstants, RealBall, make_constants, nearest_int_distance

DEFAULT_M = 10**48
DEFAULT_LOOKAHEAD = 4
SCAN_BUDGET = 64
PUBLISHED_XI = {1: "0.0549802", 2: "0.0000252223", 3: "0.000000902495"}
PUBLISHED_BOUNDS = {1: 52, 2: 57, 3: 332}


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int
    partial_quotient: int


def convergents(x: RealBall) -> Iterator[Convergent]:
    """Yield the convergents of ``x`` that hold for every point of the ball.

    The expansions of both endpoints are run in exact rational arithmetic and
    stop at the first partial quotient on which they disagree.
    """
    lo, hi = x.lower_fraction(), x.upper_fraction()
    p_prev, q_prev, p, q = 0, 1, 1, 0
    k = 0
    while True:
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            return
        a = a_lo
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        yield Convergent(k, p, q, a)
        if lo == a or hi == a:
            return
        lo, hi = 1 / (lo - a), 1 / (hi - a)
        k += 1


def continued_fraction(x: RealBall, count: int) -> list[Convergent]:
    """The first ``count`` certified convergents of ``x``."""
    out = []
    for conv in convergents(x):
        out.append(conv)
        if len(out) == count:
            return out
    raise PrecisionExhausted(f"only {len(out)} partial quotients certified", out)


def convergent_law_holds(x: RealBall, conv: Convergent) -> bool:
    """Certify |x - p/q| < 1/q^2."""
    return abs(x - Fraction(conv.p, conv.q)) < Fraction(1, conv.q**2)


@dataclass(frozen=True)
class ReductionInstance:
    theta: RealBall
    mu: RealBall
    A: RealBall
    B: RealBall
    M: int

    def __post_init__(self):
        if not self.A.is_positive():
            raise ValueError("A must be certified positive")
        if not self.B > 1:
            raise ValueError("B must be certified greater than 1")
        if self.M <= 1:
            raise ValueError("M must exceed 1")


def xi_value(theta: RealBall, mu: RealBall, q: int, M: int) -> RealBall:
    return nearest_int_distance(mu * q) - M * nearest_int_distance(theta * q)


@dataclass(frozen=True)
class ScanResult:
    """Outcome of testing one convergent against a whole family."""

    convergent: Convergent
    status: str  # "positive", "nonpositive" or "undecided"
    xi_min: Optional[RealBall]
    argmin: Optional[int]


def _evaluate(mus: Sequence[RealBall], q: int, theta_part: RealBall, offset: int = 0):
    """Return (status, xi_min, argmin) of ||mu q|| - theta_part over ``mus``."""
    best, best_i, undecided = None, None, False
    best_lo = None
    for i, mu in enumerate(mus):
        xi = nearest_int_distance(mu * q) - theta_part
        if xi.is_positive():
            lo = xi.lower_fraction()
            if best is None or lo < best_lo:
                best, best_i, best_lo = xi, i + offset, lo
        elif xi.contains_zero():
            undecided = True
        else:
            return "nonpositive", xi, i + offset
    if undecided:
        return "undecided", None, None
    return "positive", best, best_i


def _merge(parts):
    status = "positive"
    best, best_i = None, None
    for st, xi, i in parts:
        if st == "nonpositive":
            return st, xi, i
        if st == "undecided":
            status = "undecided"
        elif best is None or xi.lower_fraction() < best.lower_fraction():
            best, best_i = xi, i
    if status == "undecided":
        return status, None, None
    return status, best, best_i


class FamilyEvaluator:
    """Evaluates xi over a family, in-process or across worker processes."""

    def __init__(self, mus: Sequence[RealBall] = (), family: Optional["MuFamily"] = None, threads: int = 1):
        self.family = family
        self.mus = list(mus) if family is None else None
        self.threads = max(1, threads)
        self._pool = None

    def __len__(self):
        return len(self.family.labels) if self.family is not None else len(self.mus)

    def values(self) -> list[RealBall]:
        if self.mus is None:
            self.mus = self.family.values()
        return self.mus

    def evaluate(self, q: int, theta_part: RealBall):
        if self.threads == 1 or self.family is None:
            return _evaluate(self.values(), q, theta_part)
        if self._pool is None:
            self._pool = ProcessPoolExecutor(max_workers=self.threads)
        n = len(self.family.labels)
        step = -(-n // (4 * self.threads))
        jobs = [
            (self.family.stage, self.family.precision_digits, self.family.labels[lo : lo + step], lo, q, theta_part)
            for lo in range(0, n, step)
        ]
        return _merge(self._pool.map(_worker_evaluate, jobs))

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


_worker_cache: dict = {}


def _worker_evaluate(job):
    stage, digits, labels, offset, q, theta_part = job
    key = (stage, digits, offset, len(labels))
    mus = _worker_cache.get(key)
    if mus is None:
        consts = make_constants(digits)
        mus = [mu_value(stage, label, consts) for label in labels]
        _worker_cache[key] = mus
    return _evaluate(mus, q, theta_part, offset)


def scan_convergents(theta: RealBall, M: int, evaluator: FamilyEvaluator, budget: int = SCAN_BUDGET) -> Iterator[ScanResult]:
    """Test convergents with q > 6M, in increasing order, against the family."""
    if M <= 1:
        raise ValueError("M must exceed 1")
    tested = 0
    reached = False
    for conv in convergents(theta):
        if conv.q <= 6 * M:
            continue
        reached = True
        if tested >= budget:
            return
        tested += 1
        theta_part = M * nearest_int_distance(theta * conv.q)
        status, xi, argmin = evaluator.evaluate(conv.q, theta_part)
        yield ScanResult(conv, status, xi, argmin)
    if not reached:
        raise PrecisionExhausted(f"no certified convergent with q > 6M at {theta.prec} bits")
    raise PrecisionExhausted("continued fraction of theta ran out of certified terms during the scan")


def find_reduction_convergent(theta: RealBall, M: int, family: Sequence[RealBall]) -> tuple[Convergent, RealBall]:
    """First convergent with q > 6M whose family-minimum xi is certified positive."""
    if not family:
        raise ValueError("family must be nonempty")
    evaluator = FamilyEvaluator(family)
    for result in scan_convergents(theta, M, evaluator):
        if result.status == "positive":
            return result.convergent, result.xi_min
        if result.status == "undecided":
            raise PrecisionError(f"xi undecided at convergent {result.convergent.index}")
    raise ReductionFailed(f"no convergent within {SCAN_BUDGET} steps gave xi > 0")


def kappa_bound(A: RealBall, B: RealBall, q: int, xi: RealBall) -> int:
    """Largest kappa not excluded: floor of an upper bound for log(A q / xi) / log B."""
    xi_low = xi.lower_fraction()
    if xi_low <= 0:
        raise ValueError("xi must be certified positive")
    value = (A * q / RealBall.exact(xi_low, A.prec)).log() / B.log()
    return value.floor_bounds()[1]


@dataclass(frozen=True)
class ReductionOutcome:
    convergent_used: Convergent
    xi: RealBall
    kappa_bound: int
    stage: int = 0
    A: Optional[RealBall] = None
    B: Optional[RealBall] = None
    M: int = 0
    family_size: int = 0
    argmin: Optional[tuple] = None
    scanned: list = field(default_factory=list, compare=False)


def reduce_family(
    theta: RealBall,
    A: RealBall,
    B: RealBall,
    M: int,
    evaluator: FamilyEvaluator,
    lookahead: int = DEFAULT_LOOKAHEAD,
    labels: Optional[Sequence[tuple]] = None,
    stage: int = 0,
) -> ReductionOutcome:
    """Smallest kappa bound over the first positive convergent and ``lookahead`` more.

    Any convergent with q > 6M and xi > 0 gives a valid bound, so taking the
    minimum over several is as sound as stopping at the first one.
    """
    best: Optional[ReductionOutcome] = None
    scanned = []
    remaining = None
    try:
        for result in scan_convergents(theta, M, evaluator):
            entry = {"index": result.convergent.index, "digits_q": len(str(result.convergent.q)), "status": result.status}
            if result.status == "undecided":
                scanned.append(entry)
                raise PrecisionError(f"xi undecided at convergent {result.convergent.index}")
            if result.status == "positive":
                bound = kappa_bound(A, B, result.convergent.q, result.xi_min)
                entry["kappa_bound"] = bound
                if best is None or bound < best.kappa_bound:
                    argmin = labels[result.argmin] if labels is not None else (result.argmin,)
                    best = ReductionOutcome(
                        result.convergent, result.xi_min, bound, stage, A, B, M, len(evaluator), argmin
                    )
                if remaining is None:
                    remaining = lookahead
            scanned.append(entry)
            if remaining is not None:
                if remaining == 0:
                    break
                remaining -= 1
    except PrecisionExhausted:
        if best is None:
            raise
    if best is None:
        raise ReductionFailed(f"no convergent within {SCAN_BUDGET} steps gave xi > 0")
    return ReductionOutcome(
        best.convergent_used,
        best.xi,
        best.kappa_bound,
        stage,
        A,
        B,
        M,
        len(evaluator),
        best.argmin,
        scanned,
    )


def reduce_instance(inst: ReductionInstance, lookahead: int = 0) -> ReductionOutcome:
    """Apply the reduction to a single (theta, mu, A, B, M) problem."""
    return reduce_family(inst.theta, inst.A, inst.B, inst.M, FamilyEvaluator([inst.mu]), lookahead)


# ------------------------------------------------------------------ families


@dataclass(frozen=True)
class MuFamily:
    stage: int
    precision_digits: int
    labels: tuple

    def values(self) -> list[RealBall]:
        consts = make_constants(self.precision_digits)
        return [mu_value(self.stage, label, consts) for label in self.labels]


def stage_argument(stage: int, label: tuple) -> int | Fraction:
    """The positive rational c with mu = log(c / (9 a1)) / log alpha1."""
    if stage == 1:
        (f1,) = label
        return f1
    if stage == 2:
        f1, f2, u1 = label
        return f1 * 10**u1 - (f1 - f2)
    # 9 N_n + f1 = 10^u1 (f1 10^(u1+u2) - (f1-f2) 10^u2 + (f1-f2))
    f1, f2, u1, u2 = label
    return f1 * 10 ** (u1 + u2) - (f1 - f2) * 10**u2 + (f1 - f2)


def mu_value(stage: int, label: tuple, consts: AlgebraicConstants) -> RealBall:
    arg = stage_argument(stage, label)
    return (consts.exact(arg).log() - consts.log_9a1) / consts.log_alpha1


def stage_labels(stage: int, u1_max: int = 0, u2_max: int = 0) -> tuple:
    digit_pairs = [(f1, f2) for f1 in range(1, 10) for f2 in range(10) if f2 != f1]
    if stage == 1:
        return tuple((f1,) for f1 in range(1, 10))
    if stage == 2:
        return tuple((f1, f2, u1) for f1, f2 in digit_pairs for u1 in range(1, u1_max + 1))
    if stage == 3:
        return tuple(
            (f1, f2, u1, u2) for f1, f2 in digit_pairs for u1 in range(1, u1_max + 1) for u2 in range(1, u2_max + 1)
        )
    raise ValueError(f"unknown stage {stage}")


def stage_parameters(stage: int, consts: AlgebraicConstants) -> tuple[RealBall, RealBall]:
    """(A, B) for each stage."""
    if stage in (1, 2):
        return 54 / consts.log_alpha1, consts.exact(10)
    if stage == 3:
        return 4 / consts.log_alpha1, consts.alpha1
    raise ValueError(f"unknown stage {stage}")


def _reduce_stage(stage, consts, M, labels, lookahead, threads):
    A, B = stage_parameters(stage, consts)
    family = MuFamily(stage, consts.precision_digits, labels)
    evaluator = FamilyEvaluator(family=family, threads=threads)
    try:
        return reduce_family(consts.theta, A, B, M, evaluator, lookahead, labels, stage)
    finally:
        evaluator.close()


def reduce_stage1(consts: AlgebraicConstants, M: int = DEFAULT_M, lookahead: int = DEFAULT_LOOKAHEAD, threads: int = 1) -> ReductionOutcome:
    """Bound u1 from |(2u1+u2) theta - n + mu(f1)| < (54 / log alpha1) 10^-u1.

    The linearisation assumes u1 >= 2; u1 = 1 lies below any bound >= 2.
    """
    return _reduce_stage(1, consts, M, stage_labels(1), lookahead, threads)


def reduce_stage2(consts: AlgebraicConstants, M: int = DEFAULT_M, u1_max: int = 52, lookahead: int = DEFAULT_LOOKAHEAD, threads: int = 1) -> ReductionOutcome:
    """Bound u2 from |(u1+u2) theta - n + mu(f1, f2, u1)| < (54 / log alpha1) 10^-u2."""
    return _reduce_stage(2, consts, M, stage_labels(2, u1_max), lookahead, threads)


def reduce_stage3(
    consts: AlgebraicConstants,
    M: int = DEFAULT_M,
    u1_max: int = 52,
    u2_max: int = 57,
    lookahead: int = DEFAULT_LOOKAHEAD,
    threads: int = 1,
) -> ReductionOutcome:
    """Bound n from |u1 theta - n + mu(f1, f2, u1, u2)| < (4 / log alpha1) alpha1^-n."""
    return _reduce_stage(3, consts, M, stage_labels(3, u1_max, u2_max), lookahead, threads)
