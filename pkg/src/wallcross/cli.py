"""Command line front end: load a scenario file, run one command, print
an exact-rational report.

Identical input produces byte-identical output; every number is printed
as an integer or p/q, never a float.
"""

from __future__ import annotations

import argparse
import dataclasses
import random
import sys
from fractions import Fraction

from .algebra import BracketMode, PbwAlgebra, Spectrum
from .engine import StabilityStructure, VariationPath, check_variation, detect_walls
from .errors import (
    FirstTypeWallError,
    ReconstructionError,
    SecondTypeWallError,
    ValidationError,
    WallcrossError,
)
from .lattice import cone_enumerate
from .multidisk import enumerate_forests, multilink_total
from .refinement import all_refinements, twist_spectrum
from .scenario import Scenario, parse_scenario

COMMANDS = (
    "cone", "product", "factorize", "cross", "walls",
    "multilink", "twist", "selftest",
)


def _structure(sc: Scenario) -> StabilityStructure:
    return StabilityStructure(
        sc.lattice, sc.z, sc.q, sc.sector, sc.trunc, sc.spectrum,
        mode=sc.mode, refinement=sc.refinement,
    )


def _coords(charge) -> str:
    return str(charge.coords)


def _spectrum_lines(spectrum: Spectrum) -> list[str]:
    if not spectrum.items():
        return ["(empty)"]
    return [f"{_coords(ch)} -> {c}" for ch, c in spectrum.items()]


def _path(sc: Scenario) -> VariationPath:
    if not sc.keyframes:
        raise ValidationError(
            "this command needs at least one keyframe in [central_charge]"
        )
    return VariationPath(sc.path_keyframes())


def cmd_cone(sc: Scenario) -> list[str]:
    members = cone_enumerate(sc.lattice, sc.z, sc.q, sc.sector, sc.trunc)
    if not members:
        return ["(empty)"]
    return [
        f"{_coords(ch)} height {sc.trunc.height(sc.z.evaluate(ch))}"
        for ch in members
    ]


def _word_str(word) -> str:
    if not word:
        return "1"
    return " ".join(f"e{_coords(ch)}" for ch in word)


def cmd_product(sc: Scenario) -> list[str]:
    element = _structure(sc).algebra().ray_product(sc.spectrum)
    return [f"{_word_str(word)} -> {c}" for word, c in element.terms()]


def cmd_factorize(sc: Scenario) -> list[str]:
    alg = _structure(sc).algebra()
    recovered = alg.factorize(alg.ray_product(sc.spectrum))
    return _spectrum_lines(recovered)


def cmd_cross(sc: Scenario) -> list[str]:
    report = check_variation(_path(sc), _structure(sc))
    return report.lines()


def cmd_walls(sc: Scenario) -> list[str]:
    struct = _structure(sc)
    events = detect_walls(_path(sc), struct.members, sc.sector)
    if not events:
        return ["no wall events"]
    return [
        f"t in [{ev.t_lo}, {ev.t_hi}] {ev.kind} "
        f"{_coords(ev.beta1)} x {_coords(ev.beta2)}"
        for ev in events
    ]


def cmd_multilink(sc: Scenario) -> list[str]:
    if not sc.chains:
        raise ValidationError("this command needs a [chains] section")
    surface = sc.lattice.surface
    return [
        f"chain {i}: total = {multilink_total(chain, sc.z, surface)}"
        for i, chain in enumerate(sc.chains, start=1)
    ]


def cmd_twist(sc: Scenario) -> list[str]:
    if sc.refinement is None:
        raise ValidationError("this command needs a [refinement] section")
    return _spectrum_lines(twist_spectrum(sc.refinement, sc.lattice, sc.spectrum))


def cmd_selftest(sc: Scenario) -> list[str]:
    """Small property suites over the scenario's own stability data."""
    rng = random.Random(7)
    out = []

    members = cone_enumerate(sc.lattice, sc.z, sc.q, sc.sector, sc.trunc)
    assert members == cone_enumerate(sc.lattice, sc.z, sc.q, sc.sector, sc.trunc)
    for ch in members:
        assert sc.sector.contains(sc.z.evaluate(ch))
        assert sc.trunc.height(sc.z.evaluate(ch)) <= sc.trunc.cutoff
    out.append(f"ok cone ({len(members)} members)")

    if members:
        alg = PbwAlgebra(sc.lattice, sc.z, sc.q, sc.sector, sc.trunc, mode=sc.mode)
        for _ in range(3):
            spectrum = Spectrum({ch: Fraction(rng.randrange(-2, 3)) for ch in members})
            assert alg.factorize(alg.ray_product(spectrum)) == spectrum
        out.append("ok factorization round trip")

        for _ in range(5):
            word = tuple(rng.choice(members) for _ in range(3))
            left = alg.normal_form(word, strategy="leftmost")
            right = alg.normal_form(word, strategy="rightmost")
            assert left == right
        out.append("ok rewrite confluence")
    else:
        out.append("skip algebra checks: the truncated cone is empty")

    surface = sc.lattice.surface
    if surface.dim and surface.dim <= 6:
        vectors = [
            tuple(rng.randrange(-2, 3) for _ in range(surface.dim))
            for _ in range(4)
        ]
        for sigma in all_refinements(surface):
            for x in vectors:
                for y in vectors:
                    total = tuple(a + b for a, b in zip(x, y))
                    lhs = sigma.evaluate(x) * sigma.evaluate(y)
                    assert lhs == (-1) ** surface.pairing_h1(x, y) * sigma.evaluate(total)
        out.append("ok refinement defining relation")

    zero = sc.lattice.charge((0,) * sc.lattice.rank)
    counts = [len(enumerate_forests((zero,) * n)) for n in range(1, 5)]
    assert counts == [1, 2, 7, 38]
    out.append("ok forest enumeration")

    riding = any(
        sc.sector.boundary_ray(sc.z.evaluate(ch)) is not None for ch in members
    )
    if riding:
        out.append("skip wall scan: a member rides the sector boundary")
    else:
        constant = VariationPath((sc.z, sc.z))
        assert detect_walls(constant, members, sc.sector) == ()
        out.append("ok constant path has no walls")

    out.append("selftest passed")
    return out


_DISPATCH = {
    "cone": cmd_cone,
    "product": cmd_product,
    "factorize": cmd_factorize,
    "cross": cmd_cross,
    "walls": cmd_walls,
    "multilink": cmd_multilink,
    "twist": cmd_twist,
    "selftest": cmd_selftest,
}


def run(command: str, sc: Scenario) -> str:
    if command not in _DISPATCH:
        raise ValidationError(f"unknown command {command!r}")
    return "\n".join(_DISPATCH[command](sc)) + "\n"


def _apply_overrides(sc: Scenario, cutoff: str | None, mode: str | None) -> Scenario:
    if cutoff is not None:
        try:
            value = Fraction(cutoff)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"malformed rational {cutoff!r}") from None
        trunc = dataclasses.replace(sc.trunc, cutoff=value)
        sc = dataclasses.replace(sc, trunc=trunc)
    if mode is not None:
        sc = dataclasses.replace(sc, mode=BracketMode(mode))
    return sc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wallcross",
        description="Exact wall-crossing computations from a scenario file.",
    )
    parser.add_argument("--scenario", required=True, help="path to a scenario file")
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument(
        "--lambda", dest="cutoff", default=None, metavar="P/Q",
        help="override the truncation cutoff",
    )
    parser.add_argument("--mode", choices=("plain", "twisted"), default=None)
    args = parser.parse_args(argv)

    try:
        with open(args.scenario, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return 2

    try:
        sc = _apply_overrides(parse_scenario(text), args.cutoff, args.mode)
        sys.stdout.write(run(args.command, sc))
    except SecondTypeWallError as exc:
        print(f"error: second-type-wall: {exc}", file=sys.stderr)
        return 3
    except ReconstructionError as exc:
        print(f"error: reconstruction: {exc}", file=sys.stderr)
        return 4
    except FirstTypeWallError as exc:
        print(f"error: first-type-wall: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return 2
    except WallcrossError as exc:  # future subclasses default to validation
        print(f"error: validation: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
