"""Change-of-variables solve and invariant extraction, pinned to anchors.

Every numeric anchor here was computed twice: once by this engine and once
by the fixed-point oracle (or a classical closed form), and frozen only
after the two agreed.
"""

from fractions import Fraction as Rat

import pytest

from concavex.geometry import parse_spec, validate
from concavex.mirror import (
    ExtractionError,
    MirrorInconsistencyError,
    extract_invariants,
    integrand_series,
    one_pointed,
    solve_mirror_map,
    two_pointed,
    verify_all,
)
from concavex.qseries import degrees_upto

QUINTIC = parse_spec("name quintic\nspace 4\nbundle convex 5\n")
PAIR = parse_spec("name pair\nspace 1\nbundle concave 1\nbundle concave 1\n")
LOCAL_P2 = parse_spec("name kp2\nspace 2\nbundle concave 3\n")
P3_QUARTIC = parse_spec("name p3q\nspace 3\nbundle convex 4\n")
TWO_FACTOR = parse_spec(
    "space 1\nspace 1\nbundle convex 1 1\nbundle convex 1 1\n"
)


def test_pair_map_is_trivial_and_invariants_cubic():
    mm = solve_mirror_map(PAIR, 6)
    for d in degrees_upto(1, 6):
        if not any(d):
            continue
        assert mm.normalization[d] == 0
        assert mm.prefactor[d] == 0
        assert mm.shift_vector(d) == (Rat(0),)
    table = extract_invariants(PAIR, mm, 6)
    for d in range(1, 7):
        assert table.value((d,)) == Rat(1, d**3)


def test_quintic_map_anchors():
    mm = solve_mirror_map(QUINTIC, 2)
    assert mm.normalization[(1,)] == 120
    assert mm.prefactor[(1,)] == 274
    assert mm.shift_vector((1,)) == (Rat(770),)
    assert mm.normalization[(2,)] == 113400  # 10!/(2!)^5


def test_quintic_invariants():
    mm = solve_mirror_map(QUINTIC, 2)
    table = extract_invariants(QUINTIC, mm, 2)
    assert table.excess == 0
    assert table.value((1,)) == 2875
    assert table.value((2,)) == Rat(4876875, 8)


def test_quintic_degree_three_and_four():
    mm = solve_mirror_map(QUINTIC, 4)
    table = extract_invariants(QUINTIC, mm, 4)
    assert table.value((3,)) == Rat(8564575000, 27)
    assert table.value((4,)) == Rat(15517926796875, 64)


def test_local_p2_map_and_invariants():
    mm = solve_mirror_map(LOCAL_P2, 3)
    assert mm.normalization[(1,)] == 0
    assert mm.prefactor[(1,)] == 2
    assert mm.shift_vector((1,)) == (Rat(-6),)
    table = extract_invariants(LOCAL_P2, mm, 3)
    assert table.value((1,)) == 3
    assert table.value((2,)) == Rat(-45, 8)
    assert table.value((3,)) == Rat(244, 9)


def test_positive_excess_spec():
    assert validate(P3_QUARTIC) == 1
    mm = solve_mirror_map(P3_QUARTIC, 2)
    assert mm.normalization[(1,)] == 24
    assert mm.prefactor[(1,)] == 50
    assert mm.shift_vector((1,)) == (Rat(104),)
    table = extract_invariants(P3_QUARTIC, mm, 2)
    assert table.excess == 1
    assert table.value((1,)) == 320
    assert table.value((2,)) == 5056
    # the x^1 reading is the headline value; x^1 must appear in raw
    for entry in table.entries:
        exponents = [j for j, _ in entry.raw]
        assert 1 in exponents
        assert dict(entry.raw)[1] == entry.value


def test_two_factor_invariants():
    mm = solve_mirror_map(TWO_FACTOR, 2)
    table = extract_invariants(TWO_FACTOR, mm, 2)
    assert table.excess == 3
    assert table.value((0, 1)) == 4
    assert table.value((1, 0)) == 4
    assert table.value((1, 1)) == 4
    assert table.value((0, 2)) == Rat(1, 2)
    assert table.value((2, 0)) == Rat(1, 2)


@pytest.mark.parametrize("spec,bound", [(PAIR, 4), (QUINTIC, 2), (LOCAL_P2, 2)])
def test_euler_mode_matches_symbolic_mode(spec, bound):
    mm = solve_mirror_map(spec, bound)
    sym = extract_invariants(spec, mm, bound)
    eul = extract_invariants(spec, mm, bound, euler=True)
    for entry in sym.entries:
        assert eul.value(entry.degree) == entry.value


def test_euler_mode_requires_zero_excess():
    mm = solve_mirror_map(P3_QUARTIC, 1)
    with pytest.raises(ValueError):
        extract_invariants(P3_QUARTIC, mm, 1, euler=True)


@pytest.mark.parametrize("spec,bound", [(PAIR, 3), (QUINTIC, 2), (TWO_FACTOR, 2)])
def test_truncation_stability(spec, bound):
    mm_lo = solve_mirror_map(spec, bound)
    mm_hi = solve_mirror_map(spec, bound + 2)
    lo = extract_invariants(spec, mm_lo, bound)
    hi = extract_invariants(spec, mm_hi, bound + 2)
    for d in degrees_upto(spec.m, bound):
        if not any(d):
            continue
        assert mm_lo.normalization[d] == mm_hi.normalization[d]
        assert mm_lo.prefactor[d] == mm_hi.prefactor[d]
        assert mm_lo.shift_vector(d) == mm_hi.shift_vector(d)
    for entry in lo.entries:
        assert hi.value(entry.degree) == entry.value


def test_integrand_vanishes_at_degree_zero_and_sits_below_alpha():
    for spec, bound in ((PAIR, 3), (QUINTIC, 2), (P3_QUARTIC, 2)):
        mm = solve_mirror_map(spec, bound)
        js = integrand_series(spec, mm, bound)
        assert js.coefficient((0,) * spec.m).is_zero()
        for d in degrees_upto(spec.m, bound):
            if not any(d):
                continue
            support = js.coefficient(d).alpha_support()
            if support is not None:
                assert support[1] <= -2


def test_pointed_invariants_on_the_pair():
    mm = solve_mirror_map(PAIR, 4)
    table = extract_invariants(PAIR, mm, 4)
    for d in range(1, 5):
        assert one_pointed(table, d) == Rat(1, d**2)
        assert two_pointed(table, d) == Rat(1, d)


def test_pointed_invariants_reject_other_specs():
    mm = solve_mirror_map(QUINTIC, 1)
    table = extract_invariants(QUINTIC, mm, 1)
    with pytest.raises(ValueError):
        one_pointed(table, 1)
    with pytest.raises(ValueError):
        two_pointed(table, 1)


def test_verify_all_passes_on_pair():
    checks = verify_all(PAIR, 4)
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]
    names = [c.name for c in checks]
    assert "solve_and_extract" in names
    assert "truncation_stability" in names
    assert "oracle_degree_1" in names
    assert "oracle_degree_2" in names


def test_verify_all_on_two_factor_skips_oracle():
    checks = verify_all(TWO_FACTOR, 2)
    assert all(c.passed for c in checks)
    assert not any(c.name.startswith("oracle") for c in checks)
