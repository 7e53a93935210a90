"""Run every stage of the argument in order and record the result as a certificate."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import ProofError
from .hiprec import DEFAULT_DIGITS, AlgebraicConstants, RealBall, make_constants
from .linforms import PUBLISHED_TARGETS, AnalyticBounds, analytic_bounds, derived_constants, target_ceiling
from .reduction import (
    DEFAULT_LOOKAHEAD,
    DEFAULT_M,
    PUBLISHED_BOUNDS,
    PUBLISHED_XI,
    ReductionOutcome,
    reduce_stage1,
    reduce_stage2,
    reduce_stage3,
)
from .search import SearchHit, small_range_search
from .sequence import rounding_margin_holds, term

log = logging.getLogger(__name__)

CONTRADICTION_THRESHOLD = 500
CLAIMED_SOLUTIONS = ((19, 595),)
BALL_DIGITS = 30


@dataclass
class ProveConfig:
    precision_digits: int = DEFAULT_DIGITS
    n_max: int = 500
    u_max: int = 100
    M: int = DEFAULT_M
    lookahead: int = DEFAULT_LOOKAHEAD
    threads: int = 1

    @classmethod
    def from_mapping(cls, data: dict) -> "ProveConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**{k: parse_int(v) for k, v in data.items()})


def parse_int(value) -> int:
    """Accept ints and exact decimal strings such as "1e48" or "1000"."""
    if isinstance(value, bool):
        raise ValueError("expected an integer")
    if isinstance(value, int):
        return value
    if not isinstance(value, str):
        # JSON numbers such as 1e48 arrive as inexact floats
        raise ValueError(f"{value!r}: give integers or decimal strings")
    frac = Fraction(str(value).strip())
    if frac.denominator != 1:
        raise ValueError(f"{value!r} is not an integer")
    return frac.numerator


def ball_record(b: RealBall, provenance: str = "derived") -> dict:
    mid, rad = b.to_decimal(BALL_DIGITS)
    return {"mid": mid, "rad": rad, "provenance": provenance}


def published_value(value: str) -> dict:
    return {"value": value, "provenance": "paper-target"}


@dataclass
class ProofCertificate:
    """Machine-readable record of one proof run.  Every leaf is a JSON primitive."""

    status: str
    failing_stage: Optional[str]
    tool: dict
    config: dict
    constants: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    reductions: list = field(default_factory=list)
    verdict: dict = field(default_factory=dict)
    nondegeneracy: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    timestamps: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ProofCertificate":
        return cls(**data)

    def to_json(self, include_timestamps: bool = True) -> str:
        data = self.to_dict()
        if not include_timestamps:
            data.pop("timestamps")
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ProofCertificate":
        return cls.from_dict(json.loads(text))


def emit_certificate(cert: ProofCertificate, path) -> None:
    Path(path).write_text(cert.to_json(), encoding="ascii")


# ------------------------------------------------------------------ sections


def _constants_section(consts: AlgebraicConstants) -> dict:
    return {
        "alpha1": ball_record(consts.alpha1),
        "a1": ball_record(consts.a1),
        "log_alpha1": ball_record(consts.log_alpha1),
        "log10": ball_record(consts.log10),
        "theta": ball_record(consts.theta),
        "abs_alpha2": ball_record(consts.abs_alpha2),
        "binet_rounding_margin_ok": rounding_margin_holds(consts),
    }


def _search_section(hits: list[SearchHit], n_max: int, u_max: int) -> dict:
    longest = len(str(term(n_max)))
    return {
        "n_max": str(n_max),
        "u_max": str(u_max),
        "max_digit_length": str(longest),
        # the longest possible block is the middle one with u1 = 1
        "block_lengths_exhaustive": u_max >= longest - 2,
        "hits": [h.to_dict() for h in hits],
    }


def _step_record(step, published_key: str) -> dict:
    return {
        "coefficient": ball_record(step.coefficient),
        "log_power": str(step.exponent),
        "matveev_coefficient": ball_record(step.matveev),
        "published_target": published_value(PUBLISHED_TARGETS[published_key]),
    }


def _bounds_section(bounds: AnalyticBounds) -> dict:
    derived = derived_constants(bounds)
    comparison = {}
    for name, target in PUBLISHED_TARGETS.items():
        comparison[name] = {
            "derived": ball_record(derived[name]),
            "published_target": published_value(target),
            "within_target": derived[name] <= target_ceiling(target),
        }
    s3 = bounds.step3
    return {
        "step1": _step_record(bounds.step1, "c_step1"),
        "step2": _step_record(bounds.step2, "c_step2"),
        "step3": {
            "u1_plus_u2_coefficient": ball_record(s3.u_sum.coefficient),
            "matveev_coefficient": ball_record(s3.matveev_bound.coefficient),
            "log_power": str(s3.matveev_bound.exponent),
            "log_split_index": str(s3.details["log_split_index"]),
            "T": ball_record(s3.T),
            "log_power_value": ball_record(s3.log_power_bound),
            "n_bound": str(s3.n_bound),
        },
        "digit_length": {"n_bound": str(s3.n_bound), "two_u1_plus_u2_bound": str(s3.m_bound)},
        "at_n_bound": {
            "u1_log10": ball_record(bounds.step1.at(s3.n_bound)),
            "u2_log10": ball_record(bounds.step2.at(s3.n_bound)),
        },
        "comparison": comparison,
        "assumptions": ["n > 500 (covered by the search stage)"],
    }


_SIDE_CONDITIONS = {
    1: "linearisation |z| < 2|e^z - 1| needs u1 >= 2; u1 = 1 is below the bound",
    2: "linearisation needs u2 >= 2; u2 = 1 is below the bound",
    3: "linearisation needs 2/alpha1^n < 1/2, true for n > 500",
}


def _reduction_record(out: ReductionOutcome) -> dict:
    conv = out.convergent_used
    return {
        "stage": str(out.stage),
        "convergent": {"index": str(conv.index), "p": str(conv.p), "q": str(conv.q)},
        "xi_min": ball_record(out.xi),
        "xi_argmin": [str(v) for v in out.argmin],
        "published_xi": published_value(PUBLISHED_XI[out.stage]),
        "bound": str(out.kappa_bound),
        "published_bound": published_value(str(PUBLISHED_BOUNDS[out.stage])),
        "A": ball_record(out.A),
        "B": ball_record(out.B),
        "M": str(out.M),
        "family_size": str(out.family_size),
        "scanned": [{k: str(v) for k, v in entry.items()} for entry in out.scanned],
        "side_condition": _SIDE_CONDITIONS[out.stage],
    }


def nondegeneracy_sanity(consts: AlgebraicConstants, n: int = 19, f1: int = 5, f2: int = 9, u1: int = 1, u2: int = 1) -> dict:
    """Evaluate the three linear forms at one parameter set and report whether they are nonzero.

    This is a numeric sanity check only; nonvanishing in general is assumed.
    """
    a, a1 = consts.alpha1, consts.a1
    diff = f1 - f2
    lam1 = (9 * a1 / f1) * a**n * consts.exact(10) ** (-(2 * u1 + u2)) - 1
    lam2 = 9 * a1 / (f1 * 10**u1 - diff) * a**n * consts.exact(10) ** (-(u1 + u2)) - 1
    lam3 = (f1 * 10 ** (u1 + u2) - diff * 10**u2 + diff) / (9 * a1) * a ** (-n) * consts.exact(10) ** u1 - 1
    return {"Lambda_1": lam1, "Lambda_2": lam2, "Lambda_3": lam3}


def _nondegeneracy_section(consts: AlgebraicConstants) -> list:
    out = []
    for name, value in nondegeneracy_sanity(consts).items():
        out.append(
            {
                "form": name,
                "provenance": "assumed-nondegeneracy",
                "note": "nonvanishing follows from a Galois conjugation argument that is not re-checked here",
                "sanity_point": {"n": "19", "f1": "5", "f2": "9", "u1": "1", "u2": "1"},
                "sanity_value": ball_record(value),
                "sanity_nonzero": not value.contains_zero(),
            }
        )
    return out


# -------------------------------------------------------------------- driver


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def prove(config: Optional[ProveConfig] = None) -> ProofCertificate:
    """Run search, analytic bounds and the three reductions; never raises ProofError."""
    config = config or ProveConfig()
    started = _now()
    cert = ProofCertificate(
        status="incomplete",
        failing_stage=None,
        tool={"name": "narayana_repdigits", "version": __version__},
        config={
            "precision_digits": str(config.precision_digits),
            "n_max": str(config.n_max),
            "u_max": str(config.u_max),
            "M": str(config.M),
            "lookahead": str(config.lookahead),
        },
    )
    failures: list[str] = []

    def fail(stage: str, exc: Exception):
        log.warning("stage %s failed: %s", stage, exc)
        failures.append(stage)
        cert.errors.append({"stage": stage, "type": type(exc).__name__, "message": str(exc)})

    consts = bounds = None
    try:
        consts = make_constants(config.precision_digits)
        cert.constants = _constants_section(consts)
        cert.nondegeneracy = _nondegeneracy_section(consts)
    except (ProofError, ValueError) as exc:
        fail("constants", exc)

    log.info("search: n <= %d, u <= %d", config.n_max, config.u_max)
    hits = small_range_search(config.n_max, config.u_max, config.threads)
    cert.search = _search_section(hits, config.n_max, config.u_max)
    found = tuple((h.n, h.value) for h in hits)
    search_ok = (
        config.n_max >= CONTRADICTION_THRESHOLD
        and cert.search["block_lengths_exhaustive"]
        and found == CLAIMED_SOLUTIONS
    )
    if not search_ok:
        failures.append("search")

    if consts is not None:
        try:
            bounds = analytic_bounds(consts)
            cert.bounds = _bounds_section(bounds)
            if config.M < bounds.step3.m_bound:
                failures.append("bounds")
                cert.errors.append({"stage": "bounds", "type": "ConfigError", "message": "M is below the bound on 2u1+u2"})
        except ProofError as exc:
            fail("bounds", exc)

    final_bound = None
    if bounds is not None:
        stage_fns = (
            lambda: reduce_stage1(consts, config.M, config.lookahead, config.threads),
            lambda u1: reduce_stage2(consts, config.M, u1, config.lookahead, config.threads),
            lambda u1, u2: reduce_stage3(consts, config.M, u1, u2, config.lookahead, config.threads),
        )
        carried: list[int] = []
        for stage, fn in enumerate(stage_fns, start=1):
            log.info("reduction stage %d", stage)
            try:
                outcome = fn(*carried)
            except ProofError as exc:
                fail(f"reduction-{stage}", exc)
                break
            cert.reductions.append(_reduction_record(outcome))
            carried.append(max(outcome.kappa_bound, 1))
        if len(carried) == 3:
            final_bound = carried[2]

    cert.verdict = {
        "contradiction_threshold": str(CONTRADICTION_THRESHOLD),
        "n_bound": None if final_bound is None else str(final_bound),
        "bound_below_threshold": final_bound is not None and final_bound < CONTRADICTION_THRESHOLD,
        "search_covers_threshold": config.n_max >= CONTRADICTION_THRESHOLD,
        "solutions": [{"n": str(h.n), "value": str(h.value)} for h in hits],
        "claimed_solutions": [{"n": str(n), "value": str(v)} for n, v in CLAIMED_SOLUTIONS],
    }
    if final_bound is not None and final_bound >= CONTRADICTION_THRESHOLD:
        failures.append("reduction-3")
    if not failures:
        cert.status = "proved"
    else:
        cert.failing_stage = failures[0]
    cert.timestamps = {"started": started, "finished": _now()}
    return cert
