import pytest

from src.homkernel.errors import NotBurch, NotMonomial, NotRegularSequence, PdNotOne, UnitIdeal, ZeroModule
from src.homkernel.fields import FieldDescriptor
from src.homkernel.homology import tor
from src.homkernel.ideals import Ideal
from src.homkernel.models import EXHAUSTED, LICHTENBAUM_VIOLATION, TORRIGID_VIOLATION
from src.homkernel.modules import free_module, is_zero, power_of_maximal, quotient_ring, residue_field
from src.homkernel.predicates import (
    CandidateFamily,
    ass_monomial,
    burch_test,
    check_artin_rees_qs,
    check_burch_sharp,
    check_cor55_at_m,
    falsify_lichtenbaum,
    falsify_quasi_lichtenbaum,
    falsify_torrigid,
    finite_length,
    mpower_lichtenbaum_scan,
    power_intersection_holds,
    regular_sequence_check,
    verify_witness,
)
from src.homkernel.rings import make_ring

GF = FieldDescriptor.prime(32003)


def plane():
    return make_ring(GF, "xy")


def r0():
    return make_ring(GF, "xy", quotient_gens=["x^2", "x*y"])


def cyclic(ring, *gens):
    return quotient_ring(ring, Ideal(ring, list(gens)))


def test_burch_ideals_of_r0():
    ring = r0()
    report = burch_test(Ideal(ring, ["y^2"]))
    assert report.is_burch
    assert set(report.m_colon) == {"x^2", "x*y", "y^2"}
    assert set(report.i_m) == {"x^2", "x*y", "y^3"}
    assert not burch_test(Ideal(ring, ["y"])).is_burch
    assert burch_test(Ideal(plane(), ["x", "y"])).is_burch
    with pytest.raises(UnitIdeal):
        burch_test(Ideal(ring, ["1"]))


def test_cyclic_family_enumeration_order():
    family = CandidateFamily.cyclic(r0(), 3)
    labels = [label for label, _ in family.members()]
    assert labels == ["R/(y)", "R/(x)", "R/(y^2)", "R/(x, y)", "R/(y^3)", "R/(x, y^2)", "R/(x, y^3)"]
    assert family.bounds() == {"family": "cyclic-monomial", "max_degree": 3, "max_gens": 2, "size": 7}
    assert len(family.ideals()) == 7


def test_explicit_family_labels():
    ring = r0()
    family = CandidateFamily.explicit(ring, [cyclic(ring, "x"), ("k", residue_field(ring))])
    assert [label for label, _ in family.members()] == ["F1", "k"]
    assert family.bounds() == {"family": "explicit", "size": 2}
    assert family.ideals() == []


def test_lichtenbaum_witness_over_r0():
    ring = r0()
    family = CandidateFamily.cyclic(ring, 3)
    witness = falsify_lichtenbaum(cyclic(ring, "y"), family)
    assert witness.kind == LICHTENBAUM_VIOLATION
    assert witness.module_label == "R/(x)"
    assert witness.certificate["free"] is False
    assert witness.certificate["tor1"] == {"beta0": 0, "beta1": 0, "length": 0}
    assert verify_witness(witness)
    payload = witness.to_dict()
    assert payload["module"] == "R/(x)"
    assert payload["bounds"]["size"] == 7


def test_residue_field_survives_the_search():
    ring = r0()
    witness = falsify_lichtenbaum(residue_field(ring), CandidateFamily.cyclic(ring, 4))
    assert witness.kind == EXHAUSTED
    assert not witness.is_violation
    assert verify_witness(witness)
    assert witness.to_dict()["note"] == "no counterexample in family"


def test_free_members_are_skipped():
    ring = r0()
    family = CandidateFamily.explicit(ring, [free_module(ring, (0,))])
    assert falsify_lichtenbaum(cyclic(ring, "y"), family).kind == EXHAUSTED
    with pytest.raises(ZeroModule):
        falsify_lichtenbaum(cyclic(ring, "1"), family)


def test_quasi_lichtenbaum_against_burch_quotients():
    ring = r0()
    family = CandidateFamily.cyclic(ring, 3)
    subject = cyclic(ring, "y^2")
    assert falsify_quasi_lichtenbaum(subject, family).kind == EXHAUSTED
    explicit = CandidateFamily.explicit(ring, [cyclic(ring, "x")])
    assert falsify_quasi_lichtenbaum(subject, explicit).kind == EXHAUSTED
    assert falsify_lichtenbaum(subject, explicit).kind == LICHTENBAUM_VIOLATION


def test_burch_quotients_are_quasi_lichtenbaum_in_family():
    ring = r0()
    family = CandidateFamily.cyclic(ring, 3)
    burch = [ideal for ideal in family.ideals() if burch_test(ideal).is_burch]
    assert burch
    for ideal in burch:
        witness = falsify_quasi_lichtenbaum(quotient_ring(ring, ideal), family)
        assert witness.kind == EXHAUSTED


def test_m_power_witnesses():
    ring = r0()
    family = CandidateFamily.cyclic(ring, 3)
    entries = mpower_lichtenbaum_scan(ring, 3, family)
    assert [entry.n for entry in entries] == [1, 2, 3]
    assert entries[0].witness.kind == EXHAUSTED
    assert [entry.witness.module_label for entry in entries[1:]] == ["R/(x)", "R/(x)"]
    assert entries[1].to_dict()["witness"]["subject"] == "R/m^2"


def test_torrigid_search():
    ring = r0()
    witness = falsify_torrigid(cyclic(ring, "y"), CandidateFamily.explicit(ring, [cyclic(ring, "x")]), 2)
    assert witness.kind == TORRIGID_VIOLATION
    assert witness.index == 1
    assert set(witness.certificate) == {"tor1", "tor2"}
    assert verify_witness(witness)
    assert witness.bounds["imax"] == 2

    truncated = make_ring(GF, "x", quotient_gens=["x^4"])
    t = power_of_maximal(truncated, 3)
    assert falsify_torrigid(t, CandidateFamily.explicit(truncated, [t]), 4).kind == EXHAUSTED
    with pytest.raises(ValueError):
        falsify_torrigid(t, CandidateFamily.explicit(truncated, [t]), 0)


def test_ass_of_monomial_ideals():
    ring = plane()
    primes = ass_monomial(Ideal(ring, ["x^2", "x*y"]))
    assert [p.render_gb() for p in primes] == [["x"], ["x", "y"]]
    assert [p.render_gb() for p in ass_monomial(Ideal(ring, ["x^2"]))] == [["x"]]
    assert ass_monomial(Ideal(ring, []))[0].is_zero()
    with pytest.raises(NotMonomial):
        ass_monomial(Ideal(ring, ["x + y"]))
    with pytest.raises(UnitIdeal):
        ass_monomial(Ideal(ring, ["1"]))


def test_socle_of_tor_against_a_pd_one_module():
    ring = plane()
    m = cyclic(ring, "x")
    report = check_cor55_at_m(m, cyclic(ring, "x^2", "x*y"))
    assert report.pd == 1
    assert report.tor1_socle_nonzero and report.n_socle_nonzero and not report.m_free
    assert report.holds
    assert check_cor55_at_m(m, cyclic(ring, "y")).holds
    free = check_cor55_at_m(free_module(ring, (0,)), cyclic(ring, "x^2", "x*y"))
    assert free.m_free and not free.tor1_socle_nonzero and free.holds
    assert free.to_dict()["right_side"] is False
    with pytest.raises(PdNotOne):
        check_cor55_at_m(residue_field(ring), m)


def test_burch_sharp_bound():
    ring = r0()
    ideal = Ideal(ring, ["y^2"])
    report = check_burch_sharp(ideal, CandidateFamily.explicit(ring, [cyclic(ring, "x")]), 1, 3)
    assert report.passed
    assert report.entries[0].note == "hypothesis not met"
    free = check_burch_sharp(ideal, CandidateFamily.explicit(ring, [free_module(ring, (0,))]), 1, 3)
    assert free.entries[0].hypothesis_met
    assert free.entries[0].pd == 0
    assert free.passed
    with pytest.raises(NotBurch):
        check_burch_sharp(Ideal(ring, ["y"]), CandidateFamily.explicit(ring, []), 1, 3)


def test_regular_sequences_and_artin_rees():
    ring = r0()
    y = ring.parse("y")
    report = check_artin_rees_qs(cyclic(ring, "x"), [y], 3)
    assert report.passed
    assert [step.n for step in report.steps] == [1, 2, 3]
    assert report.to_dict()["sequence"] == ["y"]
    with pytest.raises(NotRegularSequence) as excinfo:
        regular_sequence_check(free_module(ring, (0,)), [y])
    assert excinfo.value.step == 1
    a = plane()
    assert regular_sequence_check(free_module(a, (0,)), [a.parse("x"), a.parse("y")])
    with pytest.raises(NotRegularSequence) as excinfo:
        regular_sequence_check(free_module(a, (0,)), [a.parse("x"), a.parse("x")])
    assert excinfo.value.step == 2


def test_finite_length():
    ring = r0()
    assert finite_length(cyclic(ring, "y"))
    assert not finite_length(free_module(ring, (0,)))


def test_power_intersection_against_the_cover():
    ring = r0()
    assert power_intersection_holds(cyclic(ring, "x"), Ideal(ring, ["y"]), 1)
    assert power_intersection_holds(cyclic(ring, "x"), Ideal(ring, ["y"]), 2)
    assert not power_intersection_holds(cyclic(ring, "y"), Ideal(ring, ["y"]), 1)
    assert power_intersection_holds(free_module(ring, (0,)), Ideal(ring, ["y"]), 1)
    a = plane()
    assert not power_intersection_holds(cyclic(a, "x^2", "x*y"), Ideal(a, ["x"]), 1)
    assert power_intersection_holds(cyclic(a, "x^2"), Ideal(a, ["y"]), 2)


def test_artin_rees_steps_carry_the_intersection_check():
    ring = r0()
    report = check_artin_rees_qs(cyclic(ring, "x"), [ring.parse("y")], 2)
    assert all(step.intersection_equal for step in report.steps)
    assert report.passed


def test_regular_element_gives_a_lichtenbaum_violation():
    a, ring = plane(), r0()
    corpus = [
        (free_module(a, (0,)), a, "x"),
        (cyclic(a, "x"), a, "y"),
        (cyclic(a, "x^2"), a, "y"),
        (cyclic(ring, "x"), ring, "y"),
    ]
    for module, base, element in corpus:
        x = base.parse(element)
        assert regular_sequence_check(module, [x])
        target = cyclic(base, element)
        assert is_zero(tor(1, module, target))
        witness = falsify_lichtenbaum(module, CandidateFamily.explicit(base, [target]))
        assert witness.kind == LICHTENBAUM_VIOLATION
        assert verify_witness(witness)


def test_burch_sharp_over_a_cyclic_family():
    ring = r0()
    family = CandidateFamily.cyclic(ring, 2)
    report = check_burch_sharp(Ideal(ring, ["y^2"]), family, 1, 3)
    assert report.passed
    assert len(report.entries) == len(family.members())
    assert not any(entry.hypothesis_met for entry in report.entries)


def test_m_power_scan_over_a_depth_zero_ring():
    ring = make_ring(GF, "xy", quotient_gens=["x^3", "x^2*y"])
    assert is_zero(tor(1, power_of_maximal(ring, 3), cyclic(ring, "x^2")))
    entries = mpower_lichtenbaum_scan(ring, 3, CandidateFamily.cyclic(ring, 3))
    assert entries[0].witness.kind == EXHAUSTED
    assert entries[2].witness.kind == LICHTENBAUM_VIOLATION
    assert verify_witness(entries[2].witness)
