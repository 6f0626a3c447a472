import pytest

import reserveseats as rs


def small_market():
    # sM1 > sm1 > sm2, everyone lists c1 then c2, one seat each.
    students = [(False, [0, 1]), (True, [0, 1]), (True, [0, 1])]
    return rs.Instance(students, [1, 1], [0, 1, 2])


def test_golden_examples_pass():
    names = rs.golden_names()
    assert len(names) == 6
    assert all(rs.verify_golden(n) for n in names)


def test_reserves_move_disadvantaged_up():
    inst = small_market()
    assert rs.run("base", inst, [1, 1]) == [0, 1, None]
    assert rs.run("mr", inst, [1, 1]) == [None, 0, 1]
    assert rs.compare(inst, rs.run("jsa", inst, [1, 1]),
                      rs.run("base", inst, [1, 1])) == "pareto-dominates"


def test_blocking_pairs_on_stable_outcome_are_empty():
    inst = small_market()
    assert rs.in_group_blocking_pairs(inst, rs.run("mr", inst, [1, 1])) == []


def test_thm44_values():
    lhs, rhs, holds = rs.thm44_condition(408.76, 362.40, 92.53, 83.13, 0.18, 0.18)
    assert lhs == pytest.approx(46.36, abs=0.01)
    assert holds


def test_quantile_median_and_errors():
    assert rs.normal_quantile_approx(0.5, 3.0, 2.0) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        rs.normal_quantile_approx(1.0)


def test_bad_instance_rejected():
    with pytest.raises(ValueError):
        rs.Instance([(False, [5])], [1], [0])
