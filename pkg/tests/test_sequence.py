import threading
from fractions import Fraction

import pytest

from narayana_repdigits.errors import PrecisionError
from narayana_repdigits.hiprec import make_constants
from narayana_repdigits.sequence import (
    NarayanaTerm,
    ResidualModel,
    binet_term,
    growth_holds,
    residual,
    residual_bound,
    residual_within_bound,
    rounding_margin_holds,
    term,
    terms,
)

from oracles import narayana_list


def test_initial_terms():
    assert terms(12) == [0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41]
    assert term(19) == 595
    assert [term(n) for n in (17, 18, 19, 20)] == [277, 406, 595, 872]


def test_term_against_list_oracle():
    ref = narayana_list(2000)
    assert [term(n) for n in range(2001)] == ref


def test_term_rejects_negative():
    with pytest.raises(ValueError):
        term(-1)


def test_cache_is_thread_safe():
    ref = narayana_list(3000)
    out = {}

    def work(k):
        out[k] = term(3000 - k)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(out[k] == ref[3000 - k] for k in range(8))


def test_narayana_term_record():
    rec = NarayanaTerm.at(19)
    assert (rec.index, rec.value) == (19, 595)


@pytest.mark.parametrize("n", [1, 2, 3, 19, 100, 500])
def test_binet_small(consts, n):
    assert binet_term(n, consts) == term(n)


def test_binet_reports_precision_failure():
    with pytest.raises(PrecisionError):
        binet_term(400, make_constants(40))


def test_binet_at_raised_precision_covers_2000():
    consts = make_constants(400)
    assert all(binet_term(n, consts) == term(n) for n in range(1, 2001))


def test_residual_examples(consts):
    assert abs(residual(1, consts)) < residual_bound(1, consts)
    assert abs(residual(50, consts)) < consts.alpha1 ** (-25)
    r19 = residual(19, consts)
    assert abs(r19) < Fraction(2, 100)
    assert r19.overlaps(595 - consts.a1 * consts.alpha1**19)


def test_residual_model(consts):
    model = ResidualModel.from_constants(consts)
    assert rounding_margin_holds(consts)
    for n in (1, 10, 100):
        assert abs(residual(n, consts)) <= model.residual_magnitude(n)


def test_residual_bound_up_to_500(consts):
    assert all(residual_within_bound(n, consts) for n in range(1, 501))


def test_growth_with_shifted_index(consts):
    # with N_0 = 0 the double inequality holds one index lower than the textbook form
    assert all(growth_holds(n, consts, shift=3) for n in range(2, 1001))


def test_textbook_growth_fails_at_595(consts):
    assert not growth_holds(19, consts)
    assert term(19) < consts.alpha1**17
