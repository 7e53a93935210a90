from fractions import Fraction

import pytest

from narayana_repdigits.errors import PrecisionError, PrecisionExhausted
from narayana_repdigits.hiprec import RealBall, digits_to_bits, make_constants, nearest_int_distance
from narayana_repdigits.patterns import PalPattern, pattern_value
from narayana_repdigits.reduction import (
    PUBLISHED_XI,
    FamilyEvaluator,
    ReductionInstance,
    continued_fraction,
    convergent_law_holds,
    find_reduction_convergent,
    kappa_bound,
    mu_value,
    reduce_family,
    reduce_instance,
    reduce_stage1,
    reduce_stage2,
    stage_argument,
    stage_labels,
    stage_parameters,
    xi_value,
)

PREC = digits_to_bits(120)


def sqrt_ball(n: int) -> RealBall:
    return RealBall.exact(n, PREC).sqrt()


def test_golden_ratio_expansion():
    phi = (1 + sqrt_ball(5)) / 2
    convs = continued_fraction(phi, 60)
    assert all(c.partial_quotient == 1 for c in convs)
    fib = [1, 1]
    while len(fib) < 62:
        fib.append(fib[-1] + fib[-2])
    assert [(c.p, c.q) for c in convs] == [(fib[k + 1], fib[k]) for k in range(60)]


def test_sqrt2_expansion():
    convs = continued_fraction(sqrt_ball(2), 80)
    assert [c.partial_quotient for c in convs] == [1] + [2] * 79


@pytest.mark.parametrize("make", [lambda c: (1 + sqrt_ball(5)) / 2, lambda c: sqrt_ball(2), lambda c: c.theta])
def test_convergent_law(consts, make):
    x = make(consts)
    for conv in continued_fraction(x, 60):
        assert convergent_law_holds(x, conv)
        lo, hi = x.lower_fraction(), x.upper_fraction()
        target = Fraction(conv.p, conv.q)
        assert max(abs(lo - target), abs(hi - target)) < Fraction(1, conv.q**2)


def test_theta_expansion_start(consts):
    convs = continued_fraction(consts.theta, 8)
    assert [c.partial_quotient for c in convs] == [6, 41, 1, 15, 14, 2, 1, 62]


def test_expansion_of_rational_terminates():
    x = RealBall.exact(Fraction(27, 8), PREC)
    assert [c.partial_quotient for c in continued_fraction(x, 4)] == [3, 2, 1, 2]
    with pytest.raises(PrecisionExhausted) as info:
        continued_fraction(x, 6)
    assert len(info.value.partial) == 4


def test_low_precision_exhausts():
    with pytest.raises(PrecisionExhausted):
        continued_fraction(make_constants(32).theta, 200)


def test_instance_validation():
    one = RealBall.exact(1, PREC)
    with pytest.raises(ValueError):
        ReductionInstance(sqrt_ball(2), one, RealBall.exact(-1, PREC), RealBall.exact(2, PREC), 10)
    with pytest.raises(ValueError):
        ReductionInstance(sqrt_ball(2), one, one, one, 10)
    with pytest.raises(ValueError):
        ReductionInstance(sqrt_ball(2), one, one, RealBall.exact(2, PREC), 1)


def test_kappa_bound_formula():
    A = RealBall.exact(Fraction(1413, 10), PREC)
    xi = RealBall.exact(Fraction(55, 1000), PREC)
    bound = kappa_bound(A, RealBall.exact(10, PREC), 3 * 10**49, xi)
    assert 50 <= bound <= 53
    with pytest.raises(ValueError):
        kappa_bound(A, RealBall.exact(10, PREC), 10, RealBall.exact(0, PREC))


def _toy_instance():
    return ReductionInstance(
        sqrt_ball(2), RealBall.exact(Fraction(1, 3), PREC), RealBall.exact(10, PREC), RealBall.exact(2, PREC), 50
    )


def test_toy_reduction_is_sound():
    inst = _toy_instance()
    out = reduce_instance(inst)
    assert out.convergent_used.q > 6 * inst.M
    assert out.xi.is_positive()
    theta, mu = inst.theta, inst.mu
    violations = []
    for m in range(inst.M + 1):
        centre = (m * theta + mu).mid_fraction()
        for n in range(int(centre) - 11, int(centre) + 12):
            gap = abs(m * theta - n + mu)
            for kappa in range(61):
                if gap.upper_fraction() < Fraction(10, 2**kappa) and kappa > out.kappa_bound:
                    violations.append((m, n, kappa))
    assert violations == []
    # the bound is not vacuous: some triple gets within a factor of 2^4 of it
    assert out.kappa_bound < 60


def test_toy_bound_beats_trivial_search():
    out = reduce_instance(_toy_instance())
    assert out.kappa_bound <= 20


def test_find_reduction_convergent_matches_first_positive(consts):
    labels = stage_labels(1)
    mus = [mu_value(1, l, consts) for l in labels]
    conv, xi = find_reduction_convergent(consts.theta, 10**48, mus)
    assert conv.q > 6 * 10**48
    assert xi > Fraction("0.054")


def test_xi_value_matches_definition(consts):
    mu = mu_value(1, (5,), consts)
    q = 10**50 + 7
    direct = nearest_int_distance(mu * q) - 1000 * nearest_int_distance(consts.theta * q)
    assert xi_value(consts.theta, mu, q, 1000).overlaps(direct)


def test_stage_family_sizes_and_arguments():
    assert len(stage_labels(1)) == 9
    assert len(stage_labels(2, 52)) == 4212
    assert len(stage_labels(3, 52, 57)) == 240_084
    assert min(stage_argument(2, l) for l in stage_labels(2, 52)) >= 1
    # smallest stage-3 argument: f1 = 1, f2 = 9 gives 10^(u1+u2) - 8 * 10^u2 + 8 > 0
    assert min(stage_argument(3, l) for l in stage_labels(3, 3, 3)) > 0


def test_stage_arguments_reproduce_the_pattern():
    for f1 in range(1, 10):
        for f2 in range(10):
            if f2 == f1:
                continue
            for u1 in range(1, 5):
                assert stage_argument(1, (f1,)) == f1
                for u2 in range(1, 5):
                    value = pattern_value(PalPattern(f1, f2, u1, u2))
                    # the three linear forms come from these exact identities
                    assert 9 * value == f1 * 10 ** (2 * u1 + u2) - (f1 - f2) * 10 ** (u1 + u2) + (f1 - f2) * 10**u1 - f1
                    assert 9 * value == stage_argument(2, (f1, f2, u1)) * 10 ** (u1 + u2) + (f1 - f2) * 10**u1 - f1
                    assert 9 * value + f1 == stage_argument(3, (f1, f2, u1, u2)) * 10**u1


def test_stage_parameters(consts):
    A, B = stage_parameters(1, consts)
    assert A > Fraction("141.2") and A < Fraction("141.3")
    assert B.contains(10)
    A3, B3 = stage_parameters(3, consts)
    assert B3.overlaps(consts.alpha1)
    with pytest.raises(ValueError):
        stage_parameters(4, consts)


def test_stage1(consts):
    out = reduce_stage1(consts)
    assert out.kappa_bound <= 52
    assert out.convergent_used.q > 6 * 10**48
    assert out.xi.is_positive()
    published = Fraction(PUBLISHED_XI[1])
    assert out.xi > published / 2 and out.xi < 2 * published


def test_stage1_small_M(consts):
    out = reduce_stage1(consts, M=10**6)
    assert out.convergent_used.q > 6 * 10**6
    assert out.kappa_bound <= 52


def test_stage1_xi_is_certified_lower_bound(consts):
    out = reduce_stage1(consts)
    fine = make_constants(512)
    q = out.convergent_used.q
    mus = [mu_value(1, l, fine) for l in stage_labels(1)]
    recomputed = min((xi_value(fine.theta, mu, q, out.M) for mu in mus), key=lambda b: b.lower_fraction())
    assert recomputed.lower_fraction() >= out.xi.lower_fraction()
    assert out.xi.contains_ball(recomputed)


def test_stage1_monotone_in_precision():
    low, high = reduce_stage1(make_constants(128)), reduce_stage1(make_constants(256))
    assert high.kappa_bound <= low.kappa_bound
    assert high.xi.lower_fraction() >= low.xi.lower_fraction()


def test_stage1_precision_failure():
    with pytest.raises(PrecisionError):
        reduce_stage1(make_constants(40))


def test_stage2(consts):
    out = reduce_stage2(consts, u1_max=52)
    assert out.family_size == 4212
    assert out.xi.is_positive()
    assert out.kappa_bound <= 57


def test_stage2_threads_agree(consts):
    serial = reduce_stage2(consts, u1_max=10)
    parallel = reduce_stage2(consts, u1_max=10, threads=2)
    assert (serial.convergent_used, serial.kappa_bound, serial.argmin) == (
        parallel.convergent_used,
        parallel.kappa_bound,
        parallel.argmin,
    )


def test_lookahead_never_worsens_bound(consts):
    first = reduce_stage2(consts, u1_max=52, lookahead=0)
    best = reduce_stage2(consts, u1_max=52, lookahead=4)
    assert best.kappa_bound <= first.kappa_bound


def test_reduce_family_with_plain_list(consts):
    mus = [mu_value(1, l, consts) for l in stage_labels(1)]
    A, B = stage_parameters(1, consts)
    out = reduce_family(consts.theta, A, B, 10**48, FamilyEvaluator(mus), lookahead=0)
    assert out.kappa_bound <= 52
