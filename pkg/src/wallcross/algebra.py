"""Truncated enveloping algebra over the cone charges, in PBW normal form.

Basis words are weakly increasing charge sequences in the generator order
(clockwise phase, then height, then lexicographic).  The single rewrite

    e_a e_b  ->  e_b e_a + c(a, b) e_{a+b}      (a after b in the order)

brings every word to normal form.  Rewriting preserves the total charge of
a word, so truncation only ever drops whole words: a word survives exactly
when its total height stays within the cutoff.

Clockwise-ordered ray products concatenate words that are already sorted,
which is what makes factorization of a sector product exact and unique.
"""

from __future__ import annotations

import enum
import functools
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    FirstTypeWallError,
    ReconstructionError,
    ValidationError,
)
from .lattice import (
    CentralCharge,
    Charge,
    ChargeLattice,
    QuadraticForm,
    Sector,
    TruncationSet,
    charges_parallel,
    cone_enumerate,
    cross,
)


class BracketMode(enum.Enum):
    PLAIN = "plain"
    TWISTED = "twisted"

    @classmethod
    def coerce(cls, value) -> "BracketMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValidationError(f"unknown bracket mode {value!r}") from None


class GeneratorOrder:
    """Total order on the truncated cone charges.

    Primary key: clockwise phase of the central charge.  Ties (parallel
    phases) break by height, then by lexicographic coordinates, so
    proportional charges sit next to each other.
    """

    __slots__ = ("charges", "index")

    def __init__(self, charges: tuple[Charge, ...]):
        self.charges = charges
        self.index = {ch: i for i, ch in enumerate(charges)}

    @classmethod
    def build(
        cls, members: Iterable[Charge], z: CentralCharge, trunc: TruncationSet
    ) -> "GeneratorOrder":
        zmap = {ch: z.evaluate(ch) for ch in members}

        def compare(a: Charge, b: Charge) -> int:
            c = cross(zmap[a], zmap[b])
            if c < 0:
                return -1
            if c > 0:
                return 1
            ha, hb = trunc.height(zmap[a]), trunc.height(zmap[b])
            if ha != hb:
                return -1 if ha < hb else 1
            if a.coords == b.coords:
                return 0
            return -1 if a.coords < b.coords else 1

        return cls(tuple(sorted(zmap, key=functools.cmp_to_key(compare))))

    def position(self, charge: Charge) -> int:
        try:
            return self.index[charge]
        except KeyError:
            raise ValidationError(f"letter outside the truncated cone: {charge!r}") from None


class Spectrum:
    """Rational weight for each cone charge; zero weights are dropped."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[Charge, Fraction] = ()):
        m = dict(mapping)
        self._map = {}
        for ch, c in m.items():
            if not isinstance(ch, Charge):
                raise ValidationError(f"spectrum keys must be charges, got {ch!r}")
            c = Fraction(c)
            if c != 0:
                self._map[ch] = c

    def coefficient(self, charge: Charge) -> Fraction:
        return self._map.get(charge, Fraction(0))

    def support(self) -> tuple[Charge, ...]:
        return tuple(sorted(self._map, key=lambda ch: ch.coords))

    def items(self) -> list[tuple[Charge, Fraction]]:
        return [(ch, self._map[ch]) for ch in self.support()]

    def restrict(self, keep) -> "Spectrum":
        return Spectrum({ch: c for ch, c in self._map.items() if keep(ch)})

    def __eq__(self, other) -> bool:
        return isinstance(other, Spectrum) and self._map == other._map

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        inner = ", ".join(f"{ch.coords}: {c}" for ch, c in self.items())
        return f"Spectrum({{{inner}}})"


class PbwAlgebra:
    """Enveloping algebra truncated to words with total height <= cutoff."""

    def __init__(
        self,
        lattice: ChargeLattice,
        z: CentralCharge,
        q: QuadraticForm,
        sector: Sector,
        trunc: TruncationSet,
        mode: BracketMode | str = BracketMode.PLAIN,
        members: Optional[tuple[Charge, ...]] = None,
    ):
        self.lattice = lattice
        self.z = z
        self.q = q
        self.sector = sector
        self.trunc = trunc
        self.mode = BracketMode.coerce(mode)
        if members is None:
            members = cone_enumerate(lattice, z, q, sector, trunc)
        self.members = tuple(members)
        self.order = GeneratorOrder.build(self.members, z, trunc)
        n = len(self.order.charges)
        self._zvals = [z.evaluate(ch) for ch in self.order.charges]
        self._heights = [trunc.height(v) for v in self._zvals]
        self._cutoff = trunc.cutoff
        self._cstr: list[list[int]] = [[0] * n for _ in range(n)]
        self._merge: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
        for i, a in enumerate(self.order.charges):
            for j, b in enumerate(self.order.charges):
                p = lattice.pairing(a, b)
                if self.mode is BracketMode.TWISTED and p % 2 != 0:
                    p = -p
                self._cstr[i][j] = p
                self._merge[i][j] = self.order.index.get(a + b)
        self.signature = (
            lattice.boundary,
            lattice.surface.intersection,
            self.mode,
            self.order.charges,
        )

    # -- element constructors -------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): Fraction(1)})

    def generator(self, charge: Charge) -> "AlgebraElement":
        i = self.order.position(charge)
        return AlgebraElement(self, {(i,): Fraction(1)})

    def from_terms(
        self, terms: Mapping[Sequence[Charge], Fraction]
    ) -> "AlgebraElement":
        out: dict[tuple[int, ...], Fraction] = {}
        for word, coeff in terms.items():
            idxs = tuple(self.order.position(ch) for ch in word)
            self._normalize_into(out, idxs, Fraction(coeff))
        return AlgebraElement(self, out)

    def normal_form(
        self, word: Sequence[Charge], coeff=1, strategy: str = "leftmost"
    ) -> "AlgebraElement":
        idxs = tuple(self.order.position(ch) for ch in word)
        out: dict[tuple[int, ...], Fraction] = {}
        self._normalize_into(out, idxs, Fraction(coeff), strategy)
        return AlgebraElement(self, out)

    def structure_constant(self, a: Charge, b: Charge) -> int:
        return self._cstr[self.order.position(a)][self.order.position(b)]

    # -- rewriting core --------------------------------------------------

    def _word_height(self, word: tuple[int, ...]) -> Fraction:
        heights = self._heights
        return sum((heights[i] for i in word), Fraction(0))

    def _normalize_into(
        self,
        out: dict[tuple[int, ...], Fraction],
        word: tuple[int, ...],
        coeff: Fraction,
        strategy: str = "leftmost",
    ) -> None:
        if coeff == 0:
            return
        # the total charge is a rewriting invariant: drop once, up front
        if word and self._word_height(word) > self._cutoff:
            return
        if strategy not in ("leftmost", "rightmost"):
            raise ValidationError(f"unknown rewrite strategy {strategy!r}")
        left_first = strategy == "leftmost"
        cstr = self._cstr
        merge = self._merge
        stack = [(word, coeff)]
        while stack:
            w, c = stack.pop()
            pos = -1
            scan = range(len(w) - 1) if left_first else range(len(w) - 2, -1, -1)
            for k in scan:
                if w[k] > w[k + 1]:
                    pos = k
                    break
            if pos < 0:
                prev = out.get(w)
                total = c if prev is None else prev + c
                if total == 0:
                    if prev is not None:
                        del out[w]
                else:
                    out[w] = total
                continue
            a, b = w[pos], w[pos + 1]
            stack.append((w[:pos] + (b, a) + w[pos + 2 :], c))
            k = cstr[a][b]
            if k:
                tgt = merge[a][b]
                if tgt is None:
                    raise ValidationError(
                        "merged letter left the truncated cone during rewriting"
                    )
                stack.append((w[:pos] + (tgt,) + w[pos + 2 :], c * k))

    # -- products and series ---------------------------------------------

    def multiply(self, left: "AlgebraElement", right: "AlgebraElement") -> "AlgebraElement":
        self._require_same(left)
        self._require_same(right)
        out: dict[tuple[int, ...], Fraction] = {}
        cutoff = self._cutoff
        right_items = [
            (wb, cb, self._word_height(wb)) for wb, cb in right._terms.items()
        ]
        for wa, ca in left._terms.items():
            ha = self._word_height(wa)
            for wb, cb, hb in right_items:
                if ha + hb > cutoff:
                    continue
                self._normalize_into(out, wa + wb, ca * cb)
        return AlgebraElement(self, out)

    def exponential(self, x: "AlgebraElement") -> "AlgebraElement":
        """Finite exponential series; requires zero constant term."""
        self._require_same(x)
        if x.coefficient(()) != 0:
            raise ValidationError("exponential requires zero constant term")
        result = self.one()
        term = self.one()
        k = 0
        while True:
            k += 1
            term = self.multiply(term, x) * Fraction(1, k)
            if term.is_zero():
                break
            result = result + term
        return result

    def ray_product(self, spectrum: Spectrum) -> "AlgebraElement":
        """Clockwise-ordered product of ray exponentials.

        Support charges are grouped by parallel central charge; groups are
        multiplied first ray first.  Non-proportional charges sharing a ray
        are a first-type wall and rejected.
        """
        support = spectrum.support()
        for ch in support:
            if ch not in self.order.index:
                raise ValidationError(f"spectrum support outside the truncated cone: {ch!r}")
        by_order = sorted(support, key=self.order.position)
        groups: list[list[Charge]] = []
        for ch in by_order:
            if groups and cross(
                self._zvals[self.order.position(groups[-1][-1])],
                self._zvals[self.order.position(ch)],
            ) == 0:
                if not charges_parallel(groups[-1][-1], ch):
                    raise FirstTypeWallError(
                        f"first-type wall in spectrum support: {groups[-1][-1]!r} and {ch!r}"
                    )
                groups[-1].append(ch)
            else:
                groups.append([ch])
        result = self.one()
        for group in groups:
            x = self.zero()
            for ch in group:
                x = x + spectrum.coefficient(ch) * self.generator(ch)
            result = self.multiply(result, self.exponential(x))
        return result

    def factorize(self, element: "AlgebraElement") -> Spectrum:
        """Unique spectrum whose clockwise ray product equals the element.

        In a clockwise-ordered product every concatenation is already
        sorted, so no rewriting occurs and the coefficient of each
        single-letter word is exactly that charge's ray weight.  Walking
        heights bottom-up with discrepancy peeling reduces to reading the
        single-letter coefficients off directly; re-multiplication then
        certifies the factorization.
        """
        self._require_same(element)
        if element.coefficient(()) != 1:
            raise ValidationError("factorization requires constant term 1")
        values: dict[Charge, Fraction] = {}
        for i, ch in enumerate(self.order.charges):
            c = element._terms.get((i,))
            if c:
                values[ch] = c
        spectrum = Spectrum(values)
        if self.ray_product(spectrum) != element:
            raise ReconstructionError(
                "element is not a clockwise sector product over the truncated cone"
            )
        return spectrum

    def convert(self, element: "AlgebraElement") -> "AlgebraElement":
        """Re-express an element of a compatible algebra in this basis.

        The source must share the lattice, member set and bracket mode; only
        the generator order (that is, the central charge) may differ.
        """
        src = element.algebra
        if (
            src.lattice.boundary != self.lattice.boundary
            or src.lattice.surface != self.lattice.surface
            or src.mode is not self.mode
            or set(src.members) != set(self.members)
        ):
            raise ValidationError("elements can only be converted between algebras "
                                  "sharing lattice, members and mode")
        out: dict[tuple[int, ...], Fraction] = {}
        for w, c in element._terms.items():
            idxs = tuple(self.order.index[src.order.charges[i]] for i in w)
            self._normalize_into(out, idxs, c)
        return AlgebraElement(self, out)

    def with_mode(self, mode: BracketMode | str) -> "PbwAlgebra":
        return PbwAlgebra(
            self.lattice, self.z, self.q, self.sector, self.trunc,
            BracketMode.coerce(mode), self.members,
        )

    def _require_same(self, element: "AlgebraElement") -> None:
        if element.algebra.signature != self.signature:
            raise ValidationError("element belongs to a different algebra")


class AlgebraElement:
    """Finite rational combination of PBW basis words."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: PbwAlgebra, terms: dict[tuple[int, ...], Fraction]):
        self.algebra = algebra
        self._terms = terms

    def coefficient(self, word: Sequence[Charge] | tuple[int, ...]) -> Fraction:
        """Coefficient of a normal-form basis word."""
        idxs: tuple[int, ...] = ()
        for ch in word:
            if isinstance(ch, Charge):
                idxs += (self.algebra.order.position(ch),)
            else:
                raise ValidationError("coefficient expects a word of charges")
        if any(idxs[k] > idxs[k + 1] for k in range(len(idxs) - 1)):
            raise ValidationError("coefficient expects a word in normal form")
        return self._terms.get(idxs, Fraction(0))

    def terms(self) -> list[tuple[tuple[Charge, ...], Fraction]]:
        charges = self.algebra.order.charges
        keys = sorted(self._terms, key=lambda w: (len(w), w))
        return [(tuple(charges[i] for i in w), self._terms[w]) for w in keys]

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self.algebra._require_same(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            total = out.get(w, Fraction(0)) + c
            if total == 0:
                out.pop(w, None)
            else:
                out[w] = total
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-1) * other

    def __neg__(self) -> "AlgebraElement":
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        return self.__rmul__(other)

    def __rmul__(self, scalar) -> "AlgebraElement":
        c = Fraction(scalar)
        if c == 0:
            return AlgebraElement(self.algebra, {})
        return AlgebraElement(self.algebra, {w: c * v for w, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.algebra.signature == other.algebra.signature
            and self._terms == other._terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self._terms:
            return "AlgebraElement(0)"
        parts = []
        for word, coeff in self.terms():
            if not word:
                parts.append(str(coeff))
            else:
                letters = " ".join("e" + str(ch.coords) for ch in word)
                parts.append(f"{coeff}*{letters}")
        return "AlgebraElement(" + " + ".join(parts) + ")"
