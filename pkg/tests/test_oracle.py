import pytest

from quatsplit.engine import Mode, check_hypotheses, decide_general
from quatsplit.errors import InvalidArgument
from quatsplit.hilbert import hilbert_at
from quatsplit.oracle import ConicPoint, conic_point_search, cross_check, local_solvable_bruteforce
from quatsplit.quadfield import make_field


def test_local_examples():
    assert local_solvable_bruteforce(2, 5, 5) == -1
    assert local_solvable_bruteforce(7, 47, 7) == hilbert_at(7, 47, 7) == -1
    assert local_solvable_bruteforce(-1, -1, 2) == -1
    assert local_solvable_bruteforce(-1, -1, 3) == 1


def test_local_small_grid():
    for p in (2, 3, 5, 7, 11):
        for a in range(-16, 17):
            for b in range(-16, 17):
                if a and b:
                    assert local_solvable_bruteforce(a, b, p) == hilbert_at(a, b, p), (a, b, p)


def test_local_margin_does_not_change_answer():
    for a, b in [(2, 5), (3, 6), (-1, 7), (8, 12), (-2, -2)]:
        for p in (2, 3):
            assert local_solvable_bruteforce(a, b, p, margin=2) == local_solvable_bruteforce(a, b, p)


@pytest.mark.parametrize("args", [(0, 1, 3), (1, 1, 53), (101, 1, 3), (1, 1, 9)])
def test_local_guards(args):
    with pytest.raises(InvalidArgument):
        local_solvable_bruteforce(*args)


def test_conic_trivial_point():
    K = make_field(3)
    pt = conic_point_search(K(1), 5, 10)
    assert pt == ConicPoint(1, 0, 0, 0, 1)


def test_conic_point_for_unit():
    K = make_field(3)
    alpha = K.from_sqrt(2, 1)
    pt = conic_point_search(alpha, 3, 20)
    assert pt is not None and pt.check(alpha, 3)


def test_conic_points_only_on_split_instances():
    # a point is a proof of splitting, so it may never show up for a division algebra
    found = 0
    for d in (-7, -3, 2, 5, 13):
        K = make_field(d)
        for a in range(-4, 5):
            for b in range(-2, 3):
                alpha = K.from_sqrt(a, b)
                if not alpha:
                    continue
                for m in (5, 13):
                    if not check_hypotheses(alpha, m, K, Mode.H).ok:
                        continue
                    pt = conic_point_search(alpha, m, 6)
                    dec = decide_general(alpha, m, K)
                    if pt is not None:
                        found += 1
                        assert pt.check(alpha, m)
                        assert dec.splits, (d, str(alpha), m)
                    report = cross_check(dec, point=pt)
                    assert report.agree
    assert found > 10


def test_conic_not_found_on_division_instance():
    K = make_field(13)
    alpha = K.from_sqrt(4, 1)
    assert not decide_general(alpha, 5, K).splits
    assert conic_point_search(alpha, 5, 8) is None


def test_conic_guards():
    K = make_field(3)
    with pytest.raises(InvalidArgument):
        conic_point_search(K(1), 5, 0)
    with pytest.raises(InvalidArgument):
        conic_point_search(K(0), 5, 3)


def test_cross_check_reports_disagreement():
    K = make_field(13)
    alpha = K.from_sqrt(4, 1)
    division = decide_general(alpha, 5, K)
    split = decide_general(K(9), 5, K)
    report = cross_check(division, split)
    assert not report.agree
    assert report.differences
    assert set(report.as_dict()["verdicts"]) == {"split", "division"}
    bogus = cross_check(division, point=ConicPoint(1, 0, 0, 0, 1))
    assert not bogus.agree and not bogus.corroborated
