import pytest

from pia2.linalg import F2, QQ
from pia2 import symbols as sym
from pia2.table import OperationTable, diff_tables
from pia2.transfer import SymbolicBackend, TransferEvaluator, compute_operation_table
from pia2.ainf import (AInfCategory, stasheff_check, unitality_check,
                       kappa_symmetry_check, classification_check,
                       expected_table, sign_exponent, composable_tuples)
from pia2.functors import pi_category, build_delta


def make_pi(arity=6, degree=4):
    sb = SymbolicBackend()
    ev = TransferEvaluator(sb)
    table = compute_operation_table(arity, degree, sb, evaluator=ev)
    return pi_category(table, ev)


def test_sign_exponent():
    # |f_n| + ... + |f_1| - n, degrees listed from f_1 upward
    assert sign_exponent([1, 0, 2], 2) == -1
    assert sign_exponent([1, 0, 2], 0) == 0


def test_stasheff_trivial_formal_table():
    # an all-zero table passes
    t = OperationTable({"arity_max": 4, "degree_max": 4})

    def hom(x, y, dmax):
        return [f"1_{x}"] if x == y else (["a"] if (x, y) == ("X", "Y") else [])

    cat = AInfCategory("formal", ["X", "Y"], hom, t, {"X": "1_X", "Y": "1_Y"},
                       F2, degree_of=lambda s: 0)
    assert stasheff_check(cat, 4, 2)["status"] == "pass"


def test_stasheff_trick_instance():
    """The first relation with a triple product: m_3(a, p2, j2) = 1 and
    (12) = m_2(j2, p1) force m_3(a, p2, (12)) = p1, which the full check
    confirms on the computed table."""
    pi = make_pi()
    assert pi.m(("a.u2^0", "p2", "(12)")) == [(F2.one, "p1")]
    rep = stasheff_check(pi, 4, 2)
    assert rep["status"] == "pass"


def test_stasheff_detects_corruption():
    pi = make_pi(4, 2)
    pi._m_fallback = None  # force table-only lookups
    del pi.table.entries[("a.u2^0", "p2", "(12)")]
    rep = stasheff_check(pi, 4, 2)
    assert rep["status"] == "fail"


def test_unitality_laws_f2_and_q():
    pi = make_pi(4, 2)
    assert unitality_check(pi, 4)["status"] == "pass"
    # over Q the left unit law carries the sign (-1)^{|g|}
    t = OperationTable({"arity_max": 2, "degree_max": 2})

    def hom(x, y, dmax):
        out = ["1_X"] if x == y else []
        if (x, y) == ("X", "X") and dmax >= 1:
            out.append("g")
        return out

    cat = AInfCategory("toy", ["X"], hom, t, {"X": "1_X"}, QQ,
                       degree_of=lambda s: 1 if s == "g" else 0)
    assert cat.m(("g", "1_X")) == [(QQ.one, "g")]
    assert cat.m(("1_X", "g")) == [(QQ.of(-1), "g")]
    assert cat.m(("g", "1_X", "g")) == []
    assert unitality_check(cat, 2)["status"] == "pass"


def test_expected_table_instances():
    exp = expected_table(6, 4)
    # basic triangles
    assert exp.get(("a.u2^0", "p2", "j2"))["output"] == "1_S1"
    assert exp.get(("j1", "b.u1^0", "p1"))["output"] == "1_P1"
    # quadrilateral families, as instantiated from the complete list
    assert exp.get(("u1^1", "p1", "(21)", "(12)"))["output"] == "p1"
    assert exp.get(("p2", "j2", "a.u2^0"))["output"] == "1_S2"
    # kappa image present
    assert exp.get(("u2^1", "p2", "(12)", "(21)"))["output"] == "p2"
    # the unit-law instance m_2(u1^0, p1) is left to strict unitality
    assert ("1_S1", "p1") not in exp
    # every entry satisfies the degree law
    for key, v in exp.entries.items():
        degs = [sym.ext_degree(sym.ext_from_str(s)) for s in key]
        assert v["degree"] == sum(degs) + 2 - len(key)


def test_expected_equals_computed_small():
    sb = SymbolicBackend()
    computed = compute_operation_table(5, 4, sb)
    exp = expected_table(5, 4)
    rep = diff_tables(computed, exp)
    assert rep["identical"], rep


def test_diff_tables_reports():
    exp = expected_table(4, 4)
    assert diff_tables(exp, exp)["identical"]
    smaller = expected_table(4, 2)
    rep = diff_tables(exp, smaller, check_bounds=False)
    assert not rep["identical"]
    assert rep["only_in_a"] and not rep["only_in_b"]
    with pytest.raises(ValueError):
        diff_tables(exp, smaller)


def test_kappa_symmetry():
    exp = expected_table(5, 4)
    assert kappa_symmetry_check(exp)["status"] == "pass"
    single = OperationTable({})
    single.add(("j1", "p2"), ["P2", "S2", "P1"], 1, "(21)", 0)
    assert kappa_symmetry_check(single)["status"] == "fail"
    assert kappa_symmetry_check(OperationTable({}))["status"] == "pass"


def test_classification():
    exp = expected_table(7, 4)
    assert classification_check(exp)["status"] == "pass"
    bogus = OperationTable({})
    bogus.add(("u1^1", "u1^1", "u1^1"), ["S1"] * 4, 1, "u1^2", 2)
    assert classification_check(bogus)["status"] == "fail"


def test_restriction_to_simples_is_formal():
    pi = make_pi(7, 4)
    sub = pi.table.restrict_objects({"S1", "S2"})
    assert set(sub.arities()) == {2}


def test_composable_tuples_are_composable_and_identity_free():
    delta = build_delta()
    seen = set()
    for tup in composable_tuples(delta, 4, 1):
        assert not any(s.startswith("1_") for s in tup)
        seen.add(tup)
    assert ("beta", "alpha") in seen
    assert ("gamma", "beta", "alpha") in seen
    assert ("alpha", "beta") not in seen  # not composable


def test_triangle_morphism_restriction():
    """Restricting the table to the morphisms {j1, p1, b} reproduces the
    distinguished-triangle pattern: the adjacent binary products vanish
    and the three rotations of the triple product are identities."""
    pi = make_pi(7, 4)
    allowed = {"j1", "p1", "b.u1^0"}
    sub = {k: v for k, v in pi.table.entries.items() if set(k) <= allowed}
    assert {k: v["output"] for k, v in sub.items()} == {
        ("b.u1^0", "p1", "j1"): "1_S2",
        ("p1", "j1", "b.u1^0"): "1_S1",
        ("j1", "b.u1^0", "p1"): "1_P1",
    }
