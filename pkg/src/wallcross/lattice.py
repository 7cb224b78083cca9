"""Charge lattice, exact phase geometry and truncated cone enumeration.

Everything here is exact rational arithmetic.  Central charge values are
pairs of Fractions and every phase comparison goes through the 2x2 cross
determinant; no angles, no floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import ValidationError

Vec2 = tuple[Fraction, Fraction]


def cross(u, v) -> Fraction:
    """Cross determinant u_x v_y - u_y v_x.  Sign encodes relative phase."""
    return u[0] * v[1] - u[1] * v[0]


def phase_precedes(u, v) -> bool:
    """True when the ray of u comes strictly before the ray of v in the
    clockwise sweep, i.e. cross(u, v) < 0.  Parallel rays never precede
    each other.  Only meaningful for vectors inside one strictly convex
    sector, where the clockwise sweep is a linear order on rays."""
    return cross(u, v) < 0


class Charge:
    """Immutable integer vector in the charge lattice."""

    __slots__ = ("coords", "_hash")

    def __init__(self, coords: Iterable[int]):
        cs = tuple(coords)
        for c in cs:
            if not isinstance(c, int):
                raise ValidationError(f"charge coordinates must be integers, got {c!r}")
        object.__setattr__(self, "coords", cs)
        object.__setattr__(self, "_hash", hash(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Charge is immutable")

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: "Charge") -> "Charge":
        return Charge(a + b for a, b in zip(self.coords, other.coords, strict=True))

    def __sub__(self, other: "Charge") -> "Charge":
        return Charge(a - b for a, b in zip(self.coords, other.coords, strict=True))

    def __neg__(self) -> "Charge":
        return Charge(-a for a in self.coords)

    def __rmul__(self, k: int) -> "Charge":
        return Charge(k * a for a in self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, Charge) and self.coords == other.coords

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Charge{self.coords!r}"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def charges_parallel(b1: Charge, b2: Charge) -> bool:
    """True when b1 and b2 are rational multiples of one another."""
    n = len(b1.coords)
    for i in range(n):
        for j in range(i + 1, n):
            if b1.coords[i] * b2.coords[j] != b1.coords[j] * b2.coords[i]:
                return False
    return True


def _freeze_int_matrix(rows) -> tuple[tuple[int, ...], ...]:
    out = []
    for row in rows:
        frozen = tuple(row)
        for x in frozen:
            if not isinstance(x, int):
                raise ValidationError(f"matrix entries must be integers, got {x!r}")
        out.append(frozen)
    return tuple(out)


def _freeze_fraction_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class SurfaceModel:
    """First homology of the reference surface with its intersection form.

    The matrix is 2g x 2g, integer and skew-symmetric; g = 0 (empty matrix)
    is allowed and makes every pairing vanish.
    """

    intersection: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mat = _freeze_int_matrix(self.intersection)
        object.__setattr__(self, "intersection", mat)
        dim = len(mat)
        if dim % 2 != 0:
            raise ValidationError("intersection matrix must have even dimension")
        for row in mat:
            if len(row) != dim:
                raise ValidationError("intersection matrix must be square")
        for i in range(dim):
            for j in range(dim):
                if mat[i][j] != -mat[j][i]:
                    raise ValidationError("intersection matrix must be skew-symmetric")

    @classmethod
    def standard(cls, genus: int) -> "SurfaceModel":
        """Standard symplectic form: basis a_1..a_g, b_1..b_g with
        a_i . b_i = 1."""
        dim = 2 * genus
        rows = [[0] * dim for _ in range(dim)]
        for i in range(genus):
            rows[i][genus + i] = 1
            rows[genus + i][i] = -1
        return cls(tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.intersection)

    def pairing_h1(self, x, y) -> int:
        """Intersection pairing of two integer homology vectors."""
        xs, ys = tuple(x), tuple(y)
        if len(xs) != self.dim or len(ys) != self.dim:
            raise ValidationError("homology vector length does not match surface")
        total = 0
        for i, xi in enumerate(xs):
            if xi == 0:
                continue
            row = self.intersection[i]
            total += xi * sum(row[j] * ys[j] for j in range(self.dim))
        return total


@dataclass(frozen=True)
class ChargeLattice:
    """Free lattice of charges with a boundary map to surface homology.

    The pairing of two charges is the intersection pairing of their
    boundary images; it is integral and skew by construction.
    """

    rank: int
    boundary: tuple[tuple[int, ...], ...]
    surface: SurfaceModel

    def __post_init__(self):
        mat = _freeze_int_matrix(self.boundary)
        object.__setattr__(self, "boundary", mat)
        if self.rank < 1:
            raise ValidationError("lattice rank must be positive")
        if len(mat) != self.surface.dim:
            raise ValidationError("boundary matrix must have one row per homology basis vector")
        for row in mat:
            if len(row) != self.rank:
                raise ValidationError("boundary matrix row length must equal the lattice rank")

    def charge(self, coords: Iterable[int]) -> Charge:
        c = Charge(coords)
        if len(c) != self.rank:
            raise ValidationError(f"charge has {len(c)} coordinates, lattice rank is {self.rank}")
        return c

    def boundary_of(self, beta: Charge) -> tuple[int, ...]:
        return tuple(
            sum(row[j] * beta.coords[j] for j in range(self.rank)) for row in self.boundary
        )

    def pairing(self, b1: Charge, b2: Charge) -> int:
        return self.surface.pairing_h1(self.boundary_of(b1), self.boundary_of(b2))


@dataclass(frozen=True)
class CentralCharge:
    """Additive map from charges to exact plane vectors (2 x rank matrix)."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        mat = _freeze_fraction_matrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != 2 or len(mat[0]) != len(mat[1]):
            raise ValidationError("central charge matrix must have exactly two rows of equal length")

    @property
    def rank(self) -> int:
        return len(self.matrix[0])

    def evaluate(self, beta) -> Vec2:
        coords = beta.coords if isinstance(beta, Charge) else tuple(beta)
        if len(coords) != self.rank:
            raise ValidationError("charge length does not match central charge rank")
        return (
            sum((self.matrix[0][j] * coords[j] for j in range(self.rank)), Fraction(0)),
            sum((self.matrix[1][j] * coords[j] for j in range(self.rank)), Fraction(0)),
        )


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric rational form used to cut the cone generators down."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        mat = _freeze_fraction_matrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        n = len(mat)
        for row in mat:
            if len(row) != n:
                raise ValidationError("quadratic form matrix must be square")
        for i in range(n):
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    raise ValidationError("quadratic form matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def evaluate(self, beta) -> Fraction:
        coords = beta.coords if isinstance(beta, Charge) else tuple(beta)
        if len(coords) != self.rank:
            raise ValidationError("charge length does not match quadratic form rank")
        total = Fraction(0)
        for i, ci in enumerate(coords):
            if ci == 0:
                continue
            row = self.matrix[i]
            total += ci * sum((row[j] * coords[j] for j in range(self.rank)), Fraction(0))
        return total


@dataclass(frozen=True)
class Sector:
    """Closed strictly convex sector swept clockwise from start to end.

    Strict convexity means opening angle < pi, equivalently
    cross(start, end) < 0.  Membership includes both boundary rays.
    """

    start: Vec2
    end: Vec2

    def __post_init__(self):
        start = (Fraction(self.start[0]), Fraction(self.start[1]))
        end = (Fraction(self.end[0]), Fraction(self.end[1]))
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        if start == (0, 0) or end == (0, 0):
            raise ValidationError("sector boundary directions must be nonzero")
        if cross(start, end) >= 0:
            raise ValidationError("sector not strictly convex")

    def contains(self, v) -> bool:
        if v[0] == 0 and v[1] == 0:
            raise ValidationError("sector membership is undefined for the zero vector")
        return cross(self.start, v) <= 0 and cross(v, self.end) <= 0

    def boundary_ray(self, v) -> Optional[str]:
        """'start' or 'end' when v lies on that boundary ray, else None.
        Only meaningful for v inside the sector."""
        if not self.contains(v):
            return None
        if cross(self.start, v) == 0:
            return "start"
        if cross(v, self.end) == 0:
            return "end"
        return None


@dataclass(frozen=True)
class TruncationSet:
    """Rational covector and cutoff bounding the part of the cone kept.

    The covector must be positive on the closed sector, which makes the
    height of every cone charge positive and the truncated set downward
    closed under cone splits.  scan_box bounds the coordinate search for
    cone generators; every generator with height <= cutoff must fit in
    the box (members found by closure may lie outside it).
    """

    covector: Vec2
    cutoff: Fraction
    scan_box: int

    def __post_init__(self):
        cov = (Fraction(self.covector[0]), Fraction(self.covector[1]))
        object.__setattr__(self, "covector", cov)
        object.__setattr__(self, "cutoff", Fraction(self.cutoff))
        if self.cutoff < 0:
            raise ValidationError("truncation cutoff must be non-negative")
        if not isinstance(self.scan_box, int) or self.scan_box < 1:
            raise ValidationError("scan_box must be a positive integer")

    def height(self, z_value) -> Fraction:
        return self.covector[0] * z_value[0] + self.covector[1] * z_value[1]

    def validate_for(self, sector: Sector) -> None:
        # positivity on both boundary rays gives positivity on the whole
        # closed sector, which is spanned by them with >= 0 coefficients
        if self.height(sector.start) <= 0 or self.height(sector.end) <= 0:
            raise ValidationError("truncation covector must be positive on the closed sector")


def _kernel_basis(z: CentralCharge) -> list[tuple[Fraction, ...]]:
    """Rational basis of ker Z via Gaussian elimination on the 2 x n matrix."""
    n = z.rank
    rows = [list(r) for r in z.matrix]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    basis = []
    free_cols = [c for c in range(n) if c not in pivots]
    for fc in free_cols:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        basis.append(tuple(vec))
    return basis


def _determinant(mat: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if m[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def check_kernel_definiteness(z: CentralCharge, q: QuadraticForm) -> None:
    """Reject configurations where Q fails to be negative definite on ker Z.

    Without this the set of cone generators below a height cutoff can be
    infinite and enumeration would silently truncate it.
    """
    basis = _kernel_basis(z)
    if not basis:
        return
    k = len(basis)
    n = z.rank
    restricted = [
        [
            sum(
                basis[a][i] * q.matrix[i][j] * basis[b][j]
                for i in range(n)
                for j in range(n)
            )
            for b in range(k)
        ]
        for a in range(k)
    ]
    sign = Fraction(1)
    for size in range(1, k + 1):
        sign = -sign
        minor = _determinant([row[:size] for row in restricted[:size]])
        if sign * minor <= 0:
            raise ValidationError("quadratic form is not negative definite on ker Z")


def cone_enumerate(
    lattice: ChargeLattice,
    z: CentralCharge,
    q: QuadraticForm,
    sector: Sector,
    trunc: TruncationSet,
) -> tuple[Charge, ...]:
    """Nonzero non-negative integer combinations of the cone generators
    with height at most the cutoff, sorted by (height, lexicographic).

    Generators are the charges with central charge inside the sector and
    non-negative quadratic form, found by scanning the integer box given
    by trunc.scan_box.  Heights of generators are strictly positive, so
    the additive closure below the cutoff is finite.
    """
    if z.rank != lattice.rank or q.rank != lattice.rank:
        raise ValidationError("central charge / quadratic form rank must match the lattice")
    trunc.validate_for(sector)
    check_kernel_definiteness(z, q)
    box = trunc.scan_box
    gens: list[Charge] = []
    for point in itertools.product(range(-box, box + 1), repeat=lattice.rank):
        if all(c == 0 for c in point):
            continue
        zv = z.evaluate(point)
        if zv[0] == 0 and zv[1] == 0:
            continue
        if not sector.contains(zv):
            continue
        if q.evaluate(point) < 0:
            continue
        if trunc.height(zv) > trunc.cutoff:
            continue
        gens.append(Charge(point))
    members = set(gens)
    frontier = list(gens)
    while frontier:
        fresh: list[Charge] = []
        for m in frontier:
            for g in gens:
                s = m + g
                if s in members:
                    continue
                if trunc.height(z.evaluate(s)) <= trunc.cutoff:
                    members.add(s)
                    fresh.append(s)
        frontier = fresh
    return tuple(
        sorted(members, key=lambda b: (trunc.height(z.evaluate(b)), b.coords))
    )


def wall_first_type(
    z: CentralCharge, charges: Iterable[Charge]
) -> Optional[tuple[Charge, Charge]]:
    """First pair of non-proportional charges with parallel central charges,
    or None.  Deterministic: charges are scanned in lexicographic order."""
    cs = sorted(set(charges), key=lambda b: b.coords)
    for i in range(len(cs)):
        zi = z.evaluate(cs[i])
        for j in range(i + 1, len(cs)):
            if cross(zi, z.evaluate(cs[j])) == 0 and not charges_parallel(cs[i], cs[j]):
                return (cs[i], cs[j])
    return None


def wall_second_type(
    lattice: ChargeLattice,
    z: CentralCharge,
    q: QuadraticForm,
    sector: Sector,
    beta: Charge,
    trunc: TruncationSet,
) -> Optional[tuple[Charge, Charge]]:
    """Witness split beta = b1 + b2 with both parts truncated cone members
    and the phase of b1 on a sector boundary ray, or None.  Splits through
    zero are not considered.  Downward closure of the truncated cone makes
    the member-level scan complete for beta below the cutoff."""
    members = cone_enumerate(lattice, z, q, sector, trunc)
    mset = set(members)
    for b1 in members:
        b2 = beta - b1
        if b2.is_zero() or b2 not in mset:
            continue
        if sector.boundary_ray(z.evaluate(b1)) is not None:
            return (b1, b2)
    return None
