from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import pytest

from wallcross.lattice import (
    CentralCharge,
    Charge,
    ChargeLattice,
    QuadraticForm,
    Sector,
    SurfaceModel,
    TruncationSet,
)


@dataclass
class LatticeSetup:
    lattice: ChargeLattice
    z: CentralCharge
    q: QuadraticForm
    sector: Sector
    trunc: TruncationSet
    g1: Charge
    g2: Charge


def build_setup(
    cutoff=2,
    z_rows=((1, -1), (1, 1)),
    sector_dirs=((-1, 1), (1, 1)),
    q_rows=((1, 0), (0, 1)),
    covector=(0, 1),
    scan_box=4,
) -> LatticeSetup:
    """Rank-2 lattice over a genus-1 surface with identity boundary map."""
    surface = SurfaceModel.standard(1)
    lattice = ChargeLattice(rank=2, boundary=((1, 0), (0, 1)), surface=surface)
    z = CentralCharge(tuple(tuple(Fraction(x) for x in row) for row in z_rows))
    q = QuadraticForm(tuple(tuple(Fraction(x) for x in row) for row in q_rows))
    sector = Sector(
        (Fraction(sector_dirs[0][0]), Fraction(sector_dirs[0][1])),
        (Fraction(sector_dirs[1][0]), Fraction(sector_dirs[1][1])),
    )
    trunc = TruncationSet(
        (Fraction(covector[0]), Fraction(covector[1])), Fraction(cutoff), scan_box
    )
    return LatticeSetup(lattice, z, q, sector, trunc, Charge((1, 0)), Charge((0, 1)))


@pytest.fixture
def setup() -> LatticeSetup:
    return build_setup()
