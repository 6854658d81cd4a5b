from fractions import Fraction

import pytest

import vrpsd

FOUR = """NAME four
N_CUSTOMERS 4
CAPACITY 10
COST_MATRIX
0
1 0
2 1 0
3 2 1 0
4 3 2 1 0
N_SCENARIOS 1
PROB 1
DEMANDS
4 4 4 8
EOF
"""


def test_parse_and_recourse():
    inst = vrpsd.parse_instance(FOUR)
    assert inst.n == 4
    assert inst.prob == ["1"]
    assert vrpsd.route_recourse(inst, [1, 2, 3, 4]) == "6"


def test_generate_round_trip():
    a = vrpsd.generate(5, 3, seed=7)
    b = vrpsd.parse_instance(a.to_text())
    assert a.to_text() == b.to_text()
    assert sum(Fraction(p) for p in a.prob) == 1


def test_solve_modes_agree():
    inst = vrpsd.generate(5, 2, capacity=20, seed=3)
    ils = vrpsd.solve(inst, mode="ils", first_stage="subtour")
    sri = vrpsd.solve(inst, mode="sri", first_stage="subtour")
    assert ils["status"] == sri["status"] == "optimal"
    assert ils["exact_value"] == sri["exact_value"]
    total = sum(Fraction(r["cost"]) + Fraction(r["recourse"]) for r in sri["routes"])
    assert total == Fraction(sri["exact_value"])


def test_bad_configuration():
    inst = vrpsd.parse_instance(FOUR)
    with pytest.raises(ValueError):
        vrpsd.solve(inst, mode="sri", recourse="classical")


def test_bad_instance():
    with pytest.raises(ValueError):
        vrpsd.parse_instance("NAME x\nN_CUSTOMERS 1\nEOF\n")


def test_verify_tiny():
    results = vrpsd.verify("tiny")
    assert len(results) == 10
    assert all(r["passed"] for r in results), [r for r in results if not r["passed"]]
