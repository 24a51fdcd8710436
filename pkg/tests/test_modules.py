import math

import pytest

from src.homkernel.errors import InhomogeneousInput, RankMismatch, ZeroModule
from src.homkernel.fields import FieldDescriptor
from src.homkernel.ideals import Ideal, ideal_equal, maximal_ideal
from src.homkernel.modules import (
    annihilator,
    betti_numbers,
    cokernel_of_map,
    colon_in_module,
    depth_zero_test,
    direct_sum,
    free_module,
    hilbert_function,
    hom_module,
    image_of_map,
    is_free,
    is_zero,
    kernel_of_map,
    length,
    make_coker,
    minimal_presentation,
    multiplication_map,
    power_of_maximal,
    quotient_by_ideal,
    quotient_ring,
    residue_field,
    socle,
    summary,
    tensor,
    transpose,
    twist,
)
from src.homkernel.rings import make_ring

GF = FieldDescriptor.prime(32003)


def plane():
    return make_ring(GF, "xy")


def r0():
    return make_ring(GF, "xy", quotient_gens=["x^2", "x*y"])


def cyclic(ring, *gens):
    return quotient_ring(ring, Ideal(ring, list(gens)))


def test_lengths_over_r0():
    ring = r0()
    assert length(residue_field(ring)) == 1
    assert length(cyclic(ring, "y")) == 2
    assert length(free_module(ring, (0,))) == math.inf
    assert length(power_of_maximal(ring, 3)) == 4
    assert length(cyclic(ring, "1")) == 0


def test_hilbert_function_of_r0_and_twists():
    ring = r0()
    assert hilbert_function(free_module(ring, (0,)), 3) == (1, 2, 1, 1)
    assert hilbert_function(cyclic(ring, "y"), 3) == (1, 1, 0, 0)
    assert hilbert_function(twist(residue_field(ring), 2), 3) == (0, 0, 1, 0)
    assert hilbert_function(twist(residue_field(ring), -1), 1, -2) == (0, 1, 0, 0)
    with pytest.raises(ValueError):
        hilbert_function(residue_field(ring), 0, 2)


def test_free_and_zero_detection():
    ring = r0()
    assert is_free(free_module(ring, (0, 1))) == (True, 2, (0, 1))
    assert is_free(cyclic(ring, "x"))[0] is False
    assert is_zero(cyclic(ring, "x", "y", "1"))
    assert is_free(make_coker(ring, (0,), [["1"]])) == (True, 0, ())


def test_minimal_presentation_drops_unit_pivots():
    ring = plane()
    module = make_coker(ring, (1, 0), [["1", "x"]])
    minimal = minimal_presentation(module)
    assert minimal.rank == 1
    assert minimal.relations == ()
    assert is_free(module) == (True, 1, (0,))


def test_make_coker_validation():
    ring = plane()
    with pytest.raises(RankMismatch):
        make_coker(ring, (0, 0), [["x"]])
    with pytest.raises(InhomogeneousInput):
        make_coker(ring, (0,), [["x + y^2"]])
    with pytest.raises(RankMismatch):
        make_coker(ring, None, [])
    assert make_coker(ring, None, [["x", "y"]]).twists == (0, 0)


def test_socle_and_depth_zero():
    ring = r0()
    assert length(socle(free_module(ring, (0,)))) == 1
    assert depth_zero_test(free_module(ring, (0,)))
    assert not depth_zero_test(free_module(plane(), (0,)))
    assert is_zero(socle(free_module(plane(), (0,))))
    with pytest.raises(ZeroModule):
        depth_zero_test(cyclic(ring, "1"))


def test_colon_in_module():
    ring = r0()
    colon = colon_in_module(free_module(ring, (0,)), "y")
    assert length(colon) == 1
    assert colon.rank == 1
    assert hilbert_function(colon, 2) == (0, 1, 0)


def test_tensor_hom_and_sum():
    ring = r0()
    m, n = cyclic(ring, "y"), cyclic(ring, "x")
    assert length(tensor(m, n)) == 1
    assert hilbert_function(hom_module(m, m), 3) == (1, 1, 0, 0)
    assert length(direct_sum(m, residue_field(ring))) == 3
    assert length(quotient_by_ideal(free_module(ring, (0, 0)), Ideal(ring, ["x", "y"]))) == 2


def test_annihilator_and_transpose():
    ring = r0()
    assert ideal_equal(annihilator(cyclic(ring, "y")), Ideal(ring, ["y"]))
    assert annihilator(cyclic(ring, "1")).is_unit()
    dual = transpose(cyclic(plane(), "x"))
    assert dual.twists == (-1,)
    assert hilbert_function(dual, 0, -1) == (1, 1)


def test_summary_shapes():
    ring = r0()
    assert summary(cyclic(ring, "1")) == {"beta0": 0, "beta1": 0, "length": 0}
    report = summary(cyclic(ring, "y"), prefix=3)
    assert report["beta0"] == 1
    assert report["degrees"] == [0]
    assert report["hilbert"] == [1, 1, 0]
    assert report["length"] == 2
    assert summary(free_module(ring, (0,)))["length"] == "infinite"


def test_multiplication_map_kernel_image_cokernel():
    ring = plane()
    f = multiplication_map(free_module(ring, (0,)), ring.parse("x"))
    assert f.target.twists == (-1,)
    assert f.is_well_defined()
    assert is_zero(kernel_of_map(f))
    assert is_free(image_of_map(f)) == (True, 1, (0,))
    assert hilbert_function(cokernel_of_map(f), 1, -1) == (1, 1, 1)


def test_transpose_of_the_residue_field():
    ring = plane()
    k = residue_field(ring)
    dual = transpose(k)
    assert betti_numbers(dual) == (2, 1)
    assert dual.twists == (-1, -1)
    back = transpose(dual)
    assert betti_numbers(back) == (1, 2)
    assert hilbert_function(back, 3) == (1, 0, 0, 0)
    assert ideal_equal(annihilator(back), maximal_ideal(ring))


def test_double_transpose_recovers_the_presentation():
    ring = r0()
    module = cyclic(ring, "y")
    back = transpose(transpose(module))
    assert betti_numbers(back) == betti_numbers(module)
    assert hilbert_function(back, 4) == hilbert_function(module, 4)
    assert ideal_equal(annihilator(back), Ideal(ring, ["y"]))


def test_transpose_of_a_free_module_vanishes():
    for ring in (plane(), r0()):
        assert is_zero(transpose(free_module(ring, (0,))))
        assert is_zero(transpose(free_module(ring, (0, 2))))


def test_hom_into_r0_is_the_socle_line():
    ring = r0()
    dual = hom_module(cyclic(ring, "y"), free_module(ring, (0,)))
    assert length(dual) == 1
    assert hilbert_function(dual, 3) == (0, 1, 0, 0)
    assert ideal_equal(annihilator(dual), maximal_ideal(ring))
