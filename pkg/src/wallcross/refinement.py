"""Quadratic refinements of the mod-2 intersection pairing.

A refinement assigns a sign to every mod-2 homology class so that

    sigma(x) sigma(y) = (-1)^{x . y} sigma(x + y).

It is determined by its values on the basis; evaluation expands a class
over the basis in a fixed order, which is well defined because the
intersection pairing is symmetric mod 2.  The degree-1 cohomology group
acts on refinements by sign flips along a mod-2 covector, freely and
transitively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .algebra import AlgebraElement, BracketMode, Spectrum
from .errors import ValidationError
from .lattice import ChargeLattice, SurfaceModel


@dataclass(frozen=True)
class QuadraticRefinement:
    surface: SurfaceModel
    basis_signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(self.basis_signs)
        object.__setattr__(self, "basis_signs", signs)
        if len(signs) != self.surface.dim:
            raise ValidationError("refinement needs one sign per homology basis vector")
        for s in signs:
            if s not in (1, -1):
                raise ValidationError(f"refinement values must be +1 or -1, got {s!r}")

    def evaluate(self, gamma: Sequence[int]) -> int:
        """Sign of an integer homology vector; depends only on it mod 2."""
        if len(gamma) != self.surface.dim:
            raise ValidationError("homology vector length does not match surface")
        support = [i for i, g in enumerate(gamma) if g % 2]
        sign = 1
        inter = self.surface.intersection
        for a, i in enumerate(support):
            if self.basis_signs[i] < 0:
                sign = -sign
            for j in support[a + 1:]:
                if inter[i][j] % 2:
                    sign = -sign
        return sign


@dataclass(frozen=True)
class CohomologyAction:
    """Mod-2 covector acting on refinements by sign flips."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(b % 2 for b in self.bits)
        object.__setattr__(self, "bits", bits)

    def evaluate(self, gamma: Sequence[int]) -> int:
        if len(gamma) != len(self.bits):
            raise ValidationError("homology vector length does not match action")
        return sum(b * (g % 2) for b, g in zip(self.bits, gamma)) % 2

    def apply(self, sigma: QuadraticRefinement) -> QuadraticRefinement:
        if len(self.bits) != sigma.surface.dim:
            raise ValidationError("action length does not match surface")
        signs = tuple(
            -s if b else s for s, b in zip(sigma.basis_signs, self.bits)
        )
        return QuadraticRefinement(sigma.surface, signs)


def all_refinements(surface: SurfaceModel) -> Iterator[QuadraticRefinement]:
    for signs in itertools.product((1, -1), repeat=surface.dim):
        yield QuadraticRefinement(surface, signs)


def twist_spectrum(
    sigma: QuadraticRefinement, lattice: ChargeLattice, spectrum: Spectrum
) -> Spectrum:
    """Multiply each weight by the refinement sign of the charge boundary.

    The result is independent of the chosen refinement when the input
    transforms covariantly under the cohomology action."""
    return Spectrum(
        {ch: Fraction(sigma.evaluate(lattice.boundary_of(ch))) * c for ch, c in spectrum.items()}
    )


def covariant_spectrum(
    action: CohomologyAction, lattice: ChargeLattice, spectrum: Spectrum
) -> Spectrum:
    """Companion spectrum for the acted refinement: flip the weight sign
    wherever the action is odd on the charge boundary."""
    out = {}
    for ch, c in spectrum.items():
        if action.evaluate(lattice.boundary_of(ch)):
            c = -c
        out[ch] = c
    return Spectrum(out)


def to_twisted(sigma: QuadraticRefinement, element: AlgebraElement) -> AlgebraElement:
    """Algebra morphism from plain to twisted mode: each generator picks up
    the refinement sign of its boundary.  Basis words map letterwise since
    the generator order does not depend on the mode."""
    alg = element.algebra
    if alg.mode is not BracketMode.PLAIN:
        raise ValidationError("to_twisted expects an element in plain mode")
    target = alg.with_mode(BracketMode.TWISTED)
    lattice = alg.lattice
    letter_sign = {
        ch: sigma.evaluate(lattice.boundary_of(ch)) for ch in alg.order.charges
    }
    terms = {}
    for word, coeff in element.terms():
        sign = 1
        for ch in word:
            sign *= letter_sign[ch]
        terms[word] = coeff * sign
    return target.from_terms(terms)
