from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import build_setup
from wallcross.errors import ValidationError
from wallcross.lattice import (
    CentralCharge,
    Charge,
    QuadraticForm,
    Sector,
    SurfaceModel,
    TruncationSet,
    charges_parallel,
    cone_enumerate,
    cross,
    phase_precedes,
    wall_first_type,
    wall_second_type,
)


def _ch(*coords: int) -> Charge:
    return Charge(coords)


def test_central_charge_evaluation(setup):
    assert setup.z.evaluate(setup.g1) == (1, 1)
    assert setup.z.evaluate(setup.g2) == (-1, 1)
    assert setup.z.evaluate(setup.g1 + setup.g2) == (0, 2)


def test_central_charge_additive(setup):
    rng = random.Random(7)
    for _ in range(200):
        a = _ch(rng.randint(-9, 9), rng.randint(-9, 9))
        b = _ch(rng.randint(-9, 9), rng.randint(-9, 9))
        za, zb = setup.z.evaluate(a), setup.z.evaluate(b)
        zab = setup.z.evaluate(a + b)
        assert zab == (za[0] + zb[0], za[1] + zb[1])


def test_pairing_values(setup):
    lat = setup.lattice
    assert lat.pairing(setup.g1, setup.g2) == 1
    assert lat.pairing(setup.g2, setup.g1) == -1
    assert lat.pairing(setup.g1, setup.g1) == 0
    assert lat.pairing(setup.g1 + setup.g2, setup.g2) == 1


def test_pairing_bilinear_skew(setup):
    lat = setup.lattice
    rng = random.Random(11)
    for _ in range(300):
        a = _ch(rng.randint(-5, 5), rng.randint(-5, 5))
        b = _ch(rng.randint(-5, 5), rng.randint(-5, 5))
        c = _ch(rng.randint(-5, 5), rng.randint(-5, 5))
        assert lat.pairing(a, b) == -lat.pairing(b, a)
        assert lat.pairing(a + c, b) == lat.pairing(a, b) + lat.pairing(c, b)


def test_boundary_map_applied():
    # non-trivial boundary map: both generators hit the same homology class
    surface = SurfaceModel.standard(1)
    from wallcross.lattice import ChargeLattice

    lat = ChargeLattice(rank=2, boundary=((1, 1), (0, 0)), surface=surface)
    assert lat.boundary_of(_ch(2, 3)) == (5, 0)
    assert lat.pairing(_ch(1, 0), _ch(0, 1)) == 0


def test_sector_contains(setup):
    s = setup.sector
    one = Fraction(1)
    assert s.contains((Fraction(0), one)) is True
    assert s.contains((Fraction(0), -one)) is False
    assert s.contains((one, one)) is True  # closed boundary
    assert s.contains((-one, one)) is True
    with pytest.raises(ValidationError):
        s.contains((Fraction(0), Fraction(0)))


def test_sector_strict_convexity():
    with pytest.raises(ValidationError, match="strictly convex"):
        Sector((Fraction(1), Fraction(1)), (Fraction(-1), Fraction(1)))  # wrong sweep
    with pytest.raises(ValidationError, match="strictly convex"):
        Sector((Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0)))  # opening = pi
    with pytest.raises(ValidationError):
        Sector((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)))


def test_phase_precedes(setup):
    zg1 = setup.z.evaluate(setup.g1)
    zg2 = setup.z.evaluate(setup.g2)
    assert phase_precedes(zg2, zg1) is True
    assert phase_precedes(zg1, zg2) is False
    assert phase_precedes(zg1, (Fraction(2), Fraction(2))) is False  # same ray


def test_phase_precedes_is_strict_order(setup):
    # vectors in the upper half plane: clockwise precedence is a strict
    # total order on distinct rays
    vecs = [
        (Fraction(x), Fraction(y))
        for x in range(-3, 4)
        for y in range(1, 4)
    ]
    for u in vecs:
        assert not phase_precedes(u, u)
        for v in vecs:
            if phase_precedes(u, v):
                assert not phase_precedes(v, u)
            for w in vecs:
                if phase_precedes(u, v) and phase_precedes(v, w):
                    assert phase_precedes(u, w)


def test_cone_running_example(setup):
    members = cone_enumerate(setup.lattice, setup.z, setup.q, setup.sector, setup.trunc)
    assert set(members) == {_ch(1, 0), _ch(0, 1), _ch(1, 1), _ch(2, 0), _ch(0, 2)}
    # sorted by height then lexicographic coordinates
    assert members == (_ch(0, 1), _ch(1, 0), _ch(0, 2), _ch(1, 1), _ch(2, 0))


def test_cone_smaller_cutoffs():
    s1 = build_setup(cutoff=1)
    members = cone_enumerate(s1.lattice, s1.z, s1.q, s1.sector, s1.trunc)
    assert set(members) == {_ch(1, 0), _ch(0, 1)}
    s0 = build_setup(cutoff=0)
    assert cone_enumerate(s0.lattice, s0.z, s0.q, s0.sector, s0.trunc) == ()


def test_cone_brute_force_oracle(setup):
    # oracle: in this configuration membership reduces to first-quadrant
    # lattice points of height <= cutoff, checked by direct scan
    expected = {
        _ch(a, b)
        for a in range(0, 5)
        for b in range(0, 5)
        if 0 < a + b <= 2
    }
    members = cone_enumerate(setup.lattice, setup.z, setup.q, setup.sector, setup.trunc)
    assert set(members) == expected


def test_cone_scan_box_stability():
    small = build_setup(scan_box=2)
    large = build_setup(scan_box=7)
    assert cone_enumerate(
        small.lattice, small.z, small.q, small.sector, small.trunc
    ) == cone_enumerate(large.lattice, large.z, large.q, large.sector, large.trunc)


def test_cone_closure_under_addition(setup):
    members = cone_enumerate(setup.lattice, setup.z, setup.q, setup.sector, setup.trunc)
    mset = set(members)
    for a in members:
        for b in members:
            s = a + b
            if setup.trunc.height(setup.z.evaluate(s)) <= setup.trunc.cutoff:
                assert s in mset


def test_cone_closure_via_nonconvex_generators():
    # generators need Q >= 0 but sums do not: (1,1) fails Q yet is a member
    s = build_setup(q_rows=((1, -3), (-3, 1)))
    assert s.q.evaluate(_ch(1, 1)) < 0
    members = cone_enumerate(s.lattice, s.z, s.q, s.sector, s.trunc)
    assert _ch(1, 1) in set(members)


def test_parallel_members_pair_to_zero(setup):
    members = cone_enumerate(setup.lattice, setup.z, setup.q, setup.sector, setup.trunc)
    for a in members:
        for b in members:
            if charges_parallel(a, b):
                assert setup.lattice.pairing(a, b) == 0


def test_kernel_definiteness_guard():
    # Z kills (0,1); identity Q is not negative there -> rejected
    bad = build_setup(
        z_rows=((1, 0), (0, 0)),
        sector_dirs=((1, 1), (1, -1)),
        covector=(1, 0),
    )
    with pytest.raises(ValidationError, match="negative definite"):
        cone_enumerate(bad.lattice, bad.z, bad.q, bad.sector, bad.trunc)
    good = build_setup(
        z_rows=((1, 0), (0, 0)),
        sector_dirs=((1, 1), (1, -1)),
        covector=(1, 0),
        q_rows=((1, 0), (0, -1)),
        cutoff=1,
    )
    members = cone_enumerate(good.lattice, good.z, good.q, good.sector, good.trunc)
    assert set(members) == {_ch(1, -1), _ch(1, 0), _ch(1, 1)}


def test_truncation_covector_positivity(setup):
    bad = TruncationSet((Fraction(1), Fraction(0)), Fraction(2), 4)
    with pytest.raises(ValidationError, match="positive on the closed sector"):
        cone_enumerate(setup.lattice, setup.z, setup.q, setup.sector, bad)


def test_wall_first_type(setup):
    members = cone_enumerate(setup.lattice, setup.z, setup.q, setup.sector, setup.trunc)
    assert wall_first_type(setup.z, members) is None
    # proportional charges on one ray are not a wall
    assert wall_first_type(setup.z, [_ch(1, 0), _ch(2, 0)]) is None
    # degenerate Z puts the two generators on one ray
    z_wall = CentralCharge(((Fraction(1), Fraction(1)), (Fraction(1), Fraction(1))))
    assert wall_first_type(z_wall, [_ch(1, 0), _ch(0, 1)]) == (_ch(0, 1), _ch(1, 0))


def test_wall_second_type(setup):
    # running sector: phase of (1,0) sits on the end boundary ray
    hit = wall_second_type(
        setup.lattice, setup.z, setup.q, setup.sector, _ch(1, 1), setup.trunc
    )
    assert hit is not None
    b1, b2 = hit
    assert b1 + b2 == _ch(1, 1)
    assert setup.sector.boundary_ray(setup.z.evaluate(b1)) is not None

    # widened sector keeps every phase interior: no wall
    wide = build_setup(sector_dirs=((-3, 2), (3, 2)))
    assert (
        wall_second_type(wide.lattice, wide.z, wide.q, wide.sector, _ch(1, 1), wide.trunc)
        is None
    )
    # no split of a generator through nonzero members exists
    assert (
        wall_second_type(
            setup.lattice, setup.z, setup.q, setup.sector, _ch(1, 0), setup.trunc
        )
        is None
    )


def test_charge_arithmetic():
    a, b = _ch(1, 2), _ch(3, -1)
    assert a + b == _ch(4, 1)
    assert a - b == _ch(-2, 3)
    assert 3 * a == _ch(3, 6)
    assert (-a).coords == (-1, -2)
    assert a != (1, 2)
    assert len({a, _ch(1, 2)}) == 1
    with pytest.raises(ValidationError):
        Charge((Fraction(1, 2), 1))


def test_cross_sign_convention():
    assert cross((Fraction(-1), Fraction(1)), (Fraction(1), Fraction(1))) == -2
    assert cross((Fraction(1), Fraction(1)), (Fraction(1), Fraction(1))) == 0
