"""Stability data, exact wall detection along paths, spectrum transport.

A variation path moves the central charge matrix linearly between
keyframes.  Along each segment the cross product of two charge values is
a polynomial of degree at most two in the segment parameter, so every
phase alignment is found by exact root isolation: rational roots are
reported as degenerate intervals, irrational ones as rational brackets.
No floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .algebra import BracketMode, PbwAlgebra, Spectrum
from .errors import FirstTypeWallError, SecondTypeWallError, ValidationError
from .lattice import (
    CentralCharge,
    Charge,
    ChargeLattice,
    QuadraticForm,
    Sector,
    TruncationSet,
    Vec2,
    charges_parallel,
    cone_enumerate,
    cross,
    wall_first_type,
)
from .refinement import QuadraticRefinement


def _dot(u: Vec2, v: Vec2) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


@dataclass(frozen=True, eq=False)
class StabilityStructure:
    """A central charge with a spectrum supported on its truncated cone."""

    lattice: ChargeLattice
    z: CentralCharge
    q: QuadraticForm
    sector: Sector
    trunc: TruncationSet
    spectrum: Spectrum
    mode: BracketMode = BracketMode.PLAIN
    refinement: Optional[QuadraticRefinement] = None
    members: tuple[Charge, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", BracketMode.coerce(self.mode))
        if not isinstance(self.spectrum, Spectrum):
            object.__setattr__(self, "spectrum", Spectrum(self.spectrum))
        members = cone_enumerate(self.lattice, self.z, self.q, self.sector, self.trunc)
        object.__setattr__(self, "members", members)
        mset = set(members)
        for ch in self.spectrum.support():
            if ch not in mset:
                raise ValidationError(
                    f"spectrum weight outside the truncated cone: {ch.coords}"
                )
        witness = wall_first_type(self.z, self.spectrum.support())
        if witness is not None:
            raise FirstTypeWallError(
                "central charge lies on a first-type wall for the spectrum "
                f"support: {witness[0].coords} ~ {witness[1].coords}"
            )
        if self.refinement is not None and self.refinement.surface != self.lattice.surface:
            raise ValidationError("refinement surface does not match the lattice")

    def algebra(self) -> PbwAlgebra:
        return PbwAlgebra(
            self.lattice, self.z, self.q, self.sector, self.trunc,
            self.mode, self.members,
        )


@dataclass(frozen=True)
class VariationPath:
    """Piecewise-linear interpolation between central charge keyframes."""

    keyframes: tuple[CentralCharge, ...]

    def __post_init__(self):
        frames = tuple(self.keyframes)
        object.__setattr__(self, "keyframes", frames)
        if len(frames) < 2:
            raise ValidationError("a variation path needs at least two keyframes")
        rank = frames[0].rank if isinstance(frames[0], CentralCharge) else -1
        for f in frames:
            if not isinstance(f, CentralCharge) or f.rank != rank:
                raise ValidationError("keyframes must be central charges of equal rank")

    @property
    def segment_count(self) -> int:
        return len(self.keyframes) - 1

    def z_at(self, t) -> CentralCharge:
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValidationError("path parameter outside [0, 1]")
        m = self.segment_count
        scaled = t * m
        i = min(int(scaled), m - 1)
        s = scaled - i
        a = self.keyframes[i].matrix
        b = self.keyframes[i + 1].matrix
        rows = tuple(
            tuple(a[r][c] + s * (b[r][c] - a[r][c]) for c in range(len(a[r])))
            for r in range(2)
        )
        return CentralCharge(rows)


@dataclass(frozen=True)
class WallEvent:
    t_lo: Fraction
    t_hi: Fraction
    kind: str  # "first_type" or "second_type"
    beta1: Charge
    beta2: Charge

    def sort_key(self):
        return (self.t_lo, self.t_hi, self.kind, self.beta1.coords, self.beta2.coords)


def _fraction_sqrt(x: Fraction) -> Optional[Fraction]:
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _quadratic_events(
    a: Fraction, b: Fraction, c: Fraction, tol: Fraction
) -> list[tuple[Fraction, Fraction]]:
    """Sign-changing roots of a + b s + c s^2 on [0, 1] as rational intervals.

    A double root grazes zero without changing sign and is not an event.
    Irrational roots are bracketed to width <= tol, shrinking further until
    the bracket is clear of 0 and 1 so clipping cannot lose the root."""
    if c == 0:
        if b == 0:
            return []
        s = -a / b
        return [(s, s)] if 0 <= s <= 1 else []
    disc = b * b - 4 * a * c
    if disc <= 0:
        return []
    root = _fraction_sqrt(disc)
    if root is not None:
        pair = sorted(((-b - root) / (2 * c), (-b + root) / (2 * c)))
        return [(r, r) for r in pair if 0 <= r <= 1]

    def value(s: Fraction) -> Fraction:
        return a + s * (b + s * c)

    vertex = Fraction(-b, 2 * c)
    bound = 1 + max(abs(a), abs(b)) / abs(c)  # Cauchy bound on root size
    out = []
    for lo, hi in ((min(-bound, vertex - 1), vertex), (vertex, max(bound, vertex + 1))):
        flo = value(lo)
        if flo * value(hi) > 0:
            continue
        while hi - lo > tol or lo < 0 < hi or lo < 1 < hi:
            mid = (lo + hi) / 2
            # mid is rational and the roots are not, so value(mid) != 0
            if value(mid) * flo < 0:
                hi = mid
            else:
                lo, flo = mid, value(mid)
        if hi <= 0 or lo >= 1:
            continue
        out.append((max(lo, Fraction(0)), min(hi, Fraction(1))))
    return sorted(out)


def detect_walls(
    path: VariationPath,
    charges: Iterable[Charge],
    sector: Sector,
    tolerance: Fraction = Fraction(1, 1024),
) -> tuple[WallEvent, ...]:
    """Every phase alignment along the path, sorted by interval.

    First-type events pair two non-parallel tracked charges; second-type
    events pair a charge whose phase meets a sector boundary ray with each
    partner completing a tracked total.  A pair whose phases agree along a
    whole segment, or a charge riding a boundary ray, is rejected."""
    charge_list = sorted(set(charges), key=lambda ch: ch.coords)
    mset = set(charge_list)
    m = path.segment_count
    tol = Fraction(tolerance)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    events: set[WallEvent] = set()
    for i in range(m):
        z0, z1 = path.keyframes[i], path.keyframes[i + 1]
        vals = {ch: z0.evaluate(ch) for ch in charge_list}
        delta = {}
        for ch in charge_list:
            v1 = z1.evaluate(ch)
            delta[ch] = (v1[0] - vals[ch][0], v1[1] - vals[ch][1])

        def to_global(s: Fraction) -> Fraction:
            return Fraction(i + s, m) if isinstance(s, int) else (i + s) / m

        for ai in range(len(charge_list)):
            b1 = charge_list[ai]
            u0, du = vals[b1], delta[b1]
            for b2 in charge_list[ai + 1:]:
                if charges_parallel(b1, b2):
                    continue
                v0, dv = vals[b2], delta[b2]
                qa = cross(u0, v0)
                qb = cross(u0, dv) + cross(du, v0)
                qc = cross(du, dv)
                if qa == 0 and qb == 0 and qc == 0:
                    raise ValidationError(
                        "variation path runs along a first-type wall for "
                        f"{b1.coords} ~ {b2.coords}"
                    )
                for lo, hi in _quadratic_events(qa, qb, qc, tol):
                    events.add(
                        WallEvent(to_global(lo), to_global(hi), "first_type", b1, b2)
                    )
        for b1 in charge_list:
            u0, du = vals[b1], delta[b1]
            for ray in (sector.start, sector.end):
                la = cross(u0, ray)
                lb = cross(du, ray)
                if la == 0 and lb == 0:
                    end = (u0[0] + du[0], u0[1] + du[1])
                    if _dot(u0, ray) > 0 or _dot(end, ray) > 0:
                        raise ValidationError(
                            f"charge {b1.coords} rides the sector boundary "
                            "along the path"
                        )
                    continue
                if lb == 0:
                    continue
                s = -la / lb
                if not 0 <= s <= 1:
                    continue
                hit = (u0[0] + s * du[0], u0[1] + s * du[1])
                if _dot(hit, ray) <= 0:
                    continue  # aligned with the opposite ray
                t = to_global(s)
                for b2 in charge_list:
                    if (b1 + b2) in mset:
                        events.add(WallEvent(t, t, "second_type", b1, b2))
    ordered = sorted(events, key=WallEvent.sort_key)
    return tuple(ev for ev in _confirmed(ordered, path, sector))


def _confirmed(events, path, sector):
    """Drop exact events where the crossing function only grazes zero.

    Interval events come from simple irrational roots inside one segment
    and always change sign; an exact root can sit at a keyframe junction
    where the path touches a wall and bounces back."""
    times = sorted({ev.t_lo for ev in events} | {Fraction(0), Fraction(1)})
    for ev in events:
        if ev.t_lo != ev.t_hi or ev.t_lo in (0, 1):
            yield ev
            continue
        t = ev.t_lo
        idx = times.index(t)
        left = (times[idx - 1] + t) / 2
        right = (t + times[idx + 1]) / 2
        if ev.kind == "first_type":
            def sign_at(u: Fraction) -> Fraction:
                zu = path.z_at(u)
                return cross(zu.evaluate(ev.beta1), zu.evaluate(ev.beta2))
        else:
            zt = path.z_at(t)
            ray = sector.start
            if cross(zt.evaluate(ev.beta1), ray) != 0:
                ray = sector.end

            def sign_at(u: Fraction) -> Fraction:
                return cross(path.z_at(u).evaluate(ev.beta1), ray)

        if sign_at(left) * sign_at(right) < 0:
            yield ev


def _guard_second_type(z: CentralCharge, sector: Sector, members) -> None:
    mset = set(members)
    for b1 in members:
        if sector.boundary_ray(z.evaluate(b1)) is None:
            continue
        for b2 in members:
            if (b1 + b2) in mset:
                total = b1 + b2
                raise SecondTypeWallError(
                    f"second-type wall: charge {total.coords} splits as "
                    f"{b1.coords} + {b2.coords} with a constituent on the "
                    "sector boundary"
                )


def transport_spectrum(
    struct: StabilityStructure, z_new: CentralCharge
) -> Spectrum:
    """Refactorize the sector product of the spectrum under a new order.

    The product is formed in the source algebra, re-expressed in the basis
    ordered by the new central charge, and read back off.  The element
    itself never changes; only the ordered factorization does."""
    members_new = cone_enumerate(
        struct.lattice, z_new, struct.q, struct.sector, struct.trunc
    )
    if set(members_new) != set(struct.members):
        raise ValidationError(
            "transport requires the same truncated cone membership under "
            "both central charges"
        )
    witness = wall_first_type(z_new, members_new)
    if witness is not None:
        raise FirstTypeWallError(
            "target central charge lies on a first-type wall: "
            f"{witness[0].coords} ~ {witness[1].coords}"
        )
    for z in (struct.z, z_new):
        _guard_second_type(z, struct.sector, members_new)
    alg_new = PbwAlgebra(
        struct.lattice, z_new, struct.q, struct.sector, struct.trunc,
        struct.mode, members_new,
    )
    total = struct.algebra().ray_product(struct.spectrum)
    return alg_new.factorize(alg_new.convert(total))


@dataclass(frozen=True)
class SpectrumJump:
    t_lo: Fraction
    t_hi: Fraction
    before: Spectrum
    after: Spectrum
    witnesses: tuple[tuple[Charge, Charge], ...]


@dataclass(frozen=True)
class VariationReport:
    initial: Spectrum
    final: Spectrum
    events: tuple[WallEvent, ...]
    jumps: tuple[SpectrumJump, ...]

    def lines(self) -> list[str]:
        out = ["spectrum at t=0:"]
        out.extend(_spectrum_lines(self.initial))
        if not self.events:
            out.append("no events, spectrum constant")
            return out
        for ev in self.events:
            out.append(
                f"event t in [{ev.t_lo}, {ev.t_hi}] {ev.kind} "
                f"{ev.beta1.coords} x {ev.beta2.coords}"
            )
        for jump in self.jumps:
            out.append(f"jump on [{jump.t_lo}, {jump.t_hi}]:")
            out.append("  before:")
            out.extend("  " + line for line in _spectrum_lines(jump.before))
            out.append("  after:")
            out.extend("  " + line for line in _spectrum_lines(jump.after))
        out.append("spectrum at t=1:")
        out.extend(_spectrum_lines(self.final))
        return out


def _spectrum_lines(spectrum: Spectrum) -> list[str]:
    if not len(spectrum):
        return ["  (empty)"]
    return [f"  {ch.coords} -> {c}" for ch, c in spectrum.items()]


@dataclass
class _Cluster:
    lo: Fraction
    hi: Fraction
    events: list[WallEvent]


def _cluster_events(events) -> list[_Cluster]:
    clusters: list[_Cluster] = []
    for ev in events:
        if clusters and ev.t_lo <= clusters[-1].hi:
            clusters[-1].hi = max(clusters[-1].hi, ev.t_hi)
            clusters[-1].events.append(ev)
        else:
            clusters.append(_Cluster(ev.t_lo, ev.t_hi, [ev]))
    return clusters


def check_variation(
    path: VariationPath,
    struct: StabilityStructure,
    tolerance: Fraction = Fraction(1, 1024),
) -> VariationReport:
    """Walk the path, asserting constancy between walls and recording jumps.

    Events are clustered into disjoint intervals; rational sample points
    between clusters carry the spectrum forward by transport.  A cluster
    containing a second-type event aborts the walk."""
    if path.keyframes[0] != struct.z:
        raise ValidationError(
            "structure central charge must match the start of the path"
        )
    events = detect_walls(path, struct.members, struct.sector, tolerance)
    clusters = _cluster_events(events)
    for cl in clusters:
        for ev in cl.events:
            if ev.kind == "second_type":
                total = ev.beta1 + ev.beta2
                raise SecondTypeWallError(
                    f"second-type wall on [{cl.lo}, {cl.hi}]: charge "
                    f"{total.coords} splits as {ev.beta1.coords} + "
                    f"{ev.beta2.coords}"
                )
    cuts = [Fraction(0)]
    for cl in clusters:
        cuts.extend((cl.lo, cl.hi))
    cuts.append(Fraction(1))
    spans = [(cuts[2 * k], cuts[2 * k + 1]) for k in range(len(clusters) + 1)]
    for lo, hi in spans:
        if lo >= hi:
            raise ValidationError(
                "wall events touch an end of the path; cannot sample around them"
            )

    def structure_at(t: Fraction, spectrum: Spectrum) -> StabilityStructure:
        return StabilityStructure(
            struct.lattice, path.z_at(t), struct.q, struct.sector,
            struct.trunc, spectrum, struct.mode, struct.refinement,
        )

    current = struct.spectrum
    state = struct
    jumps: list[SpectrumJump] = []
    for k, (lo, hi) in enumerate(spans):
        gap = (hi - lo) / 3
        p, q = lo + gap, hi - gap
        stepped = transport_spectrum(state, path.z_at(p))
        if k == 0:
            if stepped != current:
                raise ValidationError("spectrum changed between detected walls")
        else:
            cl = clusters[k - 1]
            witnesses = tuple(
                (ev.beta1, ev.beta2) for ev in cl.events if ev.kind == "first_type"
            )
            jumps.append(SpectrumJump(cl.lo, cl.hi, current, stepped, witnesses))
            current = stepped
        state = structure_at(p, current)
        if transport_spectrum(state, path.z_at(q)) != current:
            raise ValidationError("spectrum changed between detected walls")
        state = structure_at(q, current)
    if transport_spectrum(state, path.z_at(Fraction(1))) != current:
        raise ValidationError("spectrum changed between detected walls")
    return VariationReport(struct.spectrum, current, tuple(events), tuple(jumps))
