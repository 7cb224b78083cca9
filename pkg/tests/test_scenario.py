from fractions import Fraction
from pathlib import Path

import pytest

from wallcross.algebra import BracketMode
from wallcross.errors import ValidationError
from wallcross.scenario import format_scenario, parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL = """\
[lattice]
rank = 2
boundary = 1 0 ; 0 1

[surface]
genus = 1

[central_charge]
matrix = 1 -1 ; 1 1

[quadratic_form]
matrix = 1 0 ; 0 1

[sector]
start = -1 1
end = 1 1

[truncation]
covector = 0 1
cutoff = 2
scan_box = 4

[mode]
value = plain

[spectrum]
entry = 1 0 : 1
"""


def with_lines(replacements: dict[str, str]) -> str:
    lines = MINIMAL.splitlines()
    out = []
    for line in lines:
        key = line.split("=")[0].strip() if "=" in line else None
        if key in replacements:
            out.append(replacements.pop(key))
        else:
            out.append(line)
    assert not replacements
    return "\n".join(out) + "\n"


def test_parse_primitive_scenario():
    sc = parse_scenario((SCENARIOS / "primitive.scn").read_text())
    assert sc.lattice.rank == 2
    assert sc.lattice.surface.dim == 2
    assert sc.z.matrix == ((Fraction(1), Fraction(-1)), (Fraction(1), Fraction(1)))
    assert sc.keyframes == ()
    assert sc.mode is BracketMode.PLAIN
    assert len(sc.spectrum.items()) == 3
    assert sc.refinement is not None
    assert sc.refinement.basis_signs == (1, 1)
    assert len(sc.chains) == 2
    assert sc.chains[0].vertices[0].theta == Fraction(3, 10)
    # boundary classes were filled from the lattice
    assert sc.chains[0].vertices[0].boundary == (0, 1)


def test_parse_crossing_scenario():
    sc = parse_scenario((SCENARIOS / "crossing.scn").read_text())
    assert len(sc.keyframes) == 1
    assert sc.path_keyframes() == (sc.z, sc.keyframes[0])
    assert sc.trunc.cutoff == 2
    assert sc.chains == ()


def test_parse_print_round_trip():
    for name in ("primitive.scn", "crossing.scn"):
        first = parse_scenario((SCENARIOS / name).read_text())
        printed = format_scenario(first)
        assert parse_scenario(printed) == first
        # printing is idempotent on canonical text
        assert format_scenario(parse_scenario(printed)) == printed


def test_format_crossing_golden():
    sc = parse_scenario((SCENARIOS / "crossing.scn").read_text())
    assert format_scenario(sc) == """\
[lattice]
rank = 2
boundary = 1 0 ; 0 1

[surface]
genus = 1

[central_charge]
matrix = -3 -1 ; 1 1
keyframe = 1 -1 ; 1 1

[quadratic_form]
matrix = 1 2 ; 2 1

[sector]
start = -5 1
end = 5 1

[truncation]
covector = 0 1
cutoff = 2
scan_box = 4

[mode]
value = plain

[spectrum]
entry = 0 1 : 1
entry = 1 0 : 1

[refinement]
signs = 1 1
"""


def test_nonstandard_intersection_round_trips():
    text = MINIMAL.replace(
        "genus = 1", "genus = 1\nintersection = 0 2 ; -2 0"
    )
    sc = parse_scenario(text)
    assert sc.lattice.surface.intersection == ((0, 2), (-2, 0))
    assert "intersection = 0 2 ; -2 0" in format_scenario(sc)
    assert parse_scenario(format_scenario(sc)) == sc


def test_minimal_parses_without_optional_sections():
    sc = parse_scenario(MINIMAL)
    assert sc.refinement is None
    assert sc.chains == ()


@pytest.mark.parametrize(
    "mangle, fragment",
    [
        (lambda t: t.replace("[mode]", "[modes]"), "line 23: unknown section [modes]"),
        (lambda t: t.replace("rank = 2", "rang = 2"), "line 2: unknown key 'rang'"),
        (lambda t: t.replace("genus = 1", "genus = 1\ngenus = 2"), "duplicate key 'genus'"),
        (lambda t: "rank = 2\n" + t, "line 1: key outside a section"),
        (lambda t: t.replace("rank = 2", "rank 2"), "line 2: expected 'key = value'"),
        (lambda t: t.replace("[surface]\ngenus = 1\n", ""), "missing section [surface]"),
        (lambda t: t.replace("rank = 2\n", ""), "section [lattice] is missing key 'rank'"),
        (lambda t: t.replace("cutoff = 2", "cutoff = 1/0"), "line 20: malformed rational '1/0'"),
        (lambda t: t.replace("cutoff = 2", "cutoff = two"), "malformed rational 'two'"),
        (lambda t: t.replace("start = -1 1", "start = -1 0").replace("end = 1 1", "end = 1 0"),
         "sector not strictly convex"),
        (lambda t: t.replace("matrix = 1 -1 ; 1 1", "matrix = 1 -1 ; 2 -2"),
         "not negative definite on ker Z"),
        (lambda t: t.replace("matrix = 1 -1 ; 1 1", "matrix = 1 -1 3 ; 1 1 3"),
         "central charge rank must match the lattice"),
        (lambda t: t.replace("matrix = 1 0 ; 0 1", "matrix = 1 0 0 ; 0 1 0 ; 0 0 1"),
         "quadratic form rank must match the lattice"),
        (lambda t: t.replace("boundary = 1 0 ; 0 1", "boundary = 1 0 ; 0 1 ; 0 0"),
         "one row per homology basis vector"),
        (lambda t: t.replace("boundary = 1 0 ; 0 1", "boundary = 1 0 ; 0"),
         "matrix rows have unequal lengths"),
        (lambda t: t.replace("genus = 1", "genus = 2\nintersection = 0 1 ; -1 0"),
         "intersection matrix does not match the genus"),
        (lambda t: t.replace("value = plain", "value = fancy"), "mode must be 'plain' or 'twisted'"),
        (lambda t: t.replace("entry = 1 0 : 1", "entry = 1 0 1"), "needs '<coords> : <weight>'"),
        (lambda t: t.replace("entry = 1 0 : 1", "entry = 1 0 : 1\nentry = 1 0 : 2"),
         "duplicate spectrum charge (1, 0)"),
        (lambda t: t.replace("covector = 0 1", "covector = 1 0"),
         "positive on the closed sector"),
        (lambda t: t + "\n[chains]\nchain = 1/2 : 1 0 , 1/2 : 0 1\n",
         "pairwise distinct"),
        (lambda t: t + "\n[refinement]\nsigns = 1 1 1\n",
         "one sign per homology basis vector"),
    ],
)
def test_parse_errors(mangle, fragment):
    with pytest.raises(ValidationError, match=None) as err:
        parse_scenario(mangle(MINIMAL))
    assert fragment in str(err.value)


def test_comments_and_blank_lines_ignored():
    noisy = "# header comment\n\n" + MINIMAL.replace(
        "[sector]", "# about to open the sector\n[sector]"
    )
    assert parse_scenario(noisy) == parse_scenario(MINIMAL)
