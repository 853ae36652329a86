"""Finite groups of affine torus automorphisms and quotient fixed-point bounds.

A group element is a unimodular linear part plus a rational translation.
Freeness of each non-identity element is decided exactly by Smith-form
solvability of (U - I)x = -s over the torus.  The quotient itself is
never built: orbit counting on the fixed set upstairs certifies the
lower bound for fixed points downstairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fixpoint import BudgetExceededError, DEFAULT_BUDGET, count_fixed, enumerate_fixed
from .lattice import LatticeEndomorphism, TorsionPoint, reduce_mod_lattice
from .linalg import IntegerMatrix, det, smith_normal_form


@dataclass(frozen=True)
class AffineAutomorphism:
    """Torus automorphism x -> U x + s with U unimodular."""

    linear: IntegerMatrix
    translation: tuple[Fraction, ...] = ()

    def __post_init__(self):
        U = self.linear
        if not U.is_square:
            raise ValueError("linear part must be square")
        if abs(det(U)) != 1:
            raise ValueError("linear part must be unimodular (|det| = 1)")
        s = self.translation if self.translation else (Fraction(0),) * U.rows
        if len(s) != U.rows:
            raise ValueError("translation length must match the linear part")
        object.__setattr__(self, "translation", reduce_mod_lattice(s))

    @classmethod
    def identity(cls, n: int) -> "AffineAutomorphism":
        return cls(IntegerMatrix.identity(n))

    @property
    def rank(self) -> int:
        return self.linear.rows

    def is_identity(self) -> bool:
        return self.linear == IntegerMatrix.identity(self.rank) and all(
            c == 0 for c in self.translation
        )

    def apply(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        image = self.linear.apply(point)
        return reduce_mod_lattice([a + b for a, b in zip(image, self.translation)])

    def compose(self, other: "AffineAutomorphism") -> "AffineAutomorphism":
        if self.rank != other.rank:
            raise ValueError("dimension mismatch in composition")
        linear = self.linear * other.linear
        shifted = self.linear.apply(other.translation)
        translation = tuple(a + b for a, b in zip(shifted, self.translation))
        return AffineAutomorphism(linear, translation)


@dataclass(frozen=True)
class GroupAction:
    """Finite list of affine automorphisms, meant to be a free group action."""

    elements: tuple[AffineAutomorphism, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a group action needs at least the identity element")
        ranks = {e.rank for e in self.elements}
        if len(ranks) != 1:
            raise ValueError("all elements must act on the same torus")
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def rank(self) -> int:
        return self.elements[0].rank

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ActionReport:
    """Outcome of the group-action axioms, one named entry per violation."""

    valid: bool
    free: bool
    violations: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class LiftReport:
    """Matching permutation for f g = g' f, or the named failures."""

    compatible: bool
    permutation: tuple[int, ...] = ()
    failures: tuple[str, ...] = ()


@dataclass(frozen=True)
class QuotientBound:
    """Orbit count of the fixed set against the |G|-to-1 lower bound."""

    l: int
    upstairs_count: int
    group_order: int
    orbit_count: int
    lower_bound: Fraction
    formula_bound: Fraction


def _element_has_fixed_point(element: AffineAutomorphism) -> bool:
    """Exact solvability of (U - I)x = -s over the torus via Smith form.

    Nonzero elementary divisors always admit solutions; each zero divisor
    demands an integral transformed right-hand side.
    """
    n = element.rank
    k = element.linear - IntegerMatrix.identity(n)
    snf = smith_normal_form(k)
    rhs = snf.U.apply([-c for c in element.translation])
    for d, b in zip(snf.elementary_divisors, rhs):
        if d == 0 and b.denominator != 1:
            return False
    return True


def validate_action(action: GroupAction) -> ActionReport:
    """Check closure, identity, inverses, and fixed-point freeness."""
    violations: list[str] = []
    elements = action.elements
    keys = {(e.linear, e.translation): i for i, e in enumerate(elements)}
    if len(keys) != len(elements):
        violations.append("duplicate elements in the list")
    if not any(e.is_identity() for e in elements):
        violations.append("identity element missing")
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            c = a.compose(b)
            if (c.linear, c.translation) not in keys:
                violations.append(f"closure fails: element {i} composed with {j}")
    for i, a in enumerate(elements):
        if not any(a.compose(b).is_identity() for b in elements):
            violations.append(f"inverse missing for element {i}")
    free = True
    for i, a in enumerate(elements):
        if a.is_identity():
            continue
        if _element_has_fixed_point(a):
            free = False
            violations.append(f"freeness fails: element {i} has a fixed point")
    return ActionReport(valid=not violations, free=free, violations=tuple(violations))


def lift_compatibility(f: LatticeEndomorphism, action: GroupAction) -> LiftReport:
    """For each g find g' in the group with f g = g' f as torus maps.

    Matrix parts must agree exactly; translations up to Z^{2g}.  The
    matching permutation witnesses that f descends to the quotient.
    """
    if f.rank != action.rank:
        raise ValueError("endomorphism and action ranks differ")
    permutation: list[int] = []
    failures: list[str] = []
    for i, g in enumerate(action.elements):
        lhs_matrix = f.matrix * g.linear
        lhs_translation = reduce_mod_lattice(
            [a + b for a, b in zip(f.matrix.apply(g.translation), f.translation)]
        )
        match = None
        for j, g_prime in enumerate(action.elements):
            if g_prime.linear * f.matrix != lhs_matrix:
                continue
            rhs_translation = reduce_mod_lattice(
                [
                    a + b
                    for a, b in zip(
                        g_prime.linear.apply(f.translation), g_prime.translation
                    )
                ]
            )
            if rhs_translation == lhs_translation:
                match = j
                break
        if match is None:
            failures.append(f"no group element matches f composed with element {i}")
            permutation.append(-1)
        else:
            permutation.append(match)
    return LiftReport(
        compatible=not failures,
        permutation=tuple(permutation),
        failures=tuple(failures),
    )


def orbit_partition(
    points: Sequence[TorsionPoint], action: GroupAction
) -> list[list[TorsionPoint]]:
    """Partition a G-stable-or-not point set into classes of the G-relation.

    Two points are related when some group element maps one to the other;
    images outside the given set are ignored (classes may be smaller than
    full orbits).
    """
    remaining = {p.coordinates: p for p in points}
    classes: list[list[TorsionPoint]] = []
    while remaining:
        _, seed = remaining.popitem()
        cls = [seed]
        for g in action.elements:
            image = g.apply(seed.coordinates)
            if image in remaining:
                cls.append(remaining.pop(image))
        classes.append(cls)
    return classes


def quotient_fixed_lower_bound(
    f: LatticeEndomorphism,
    action: GroupAction,
    q: int,
    l: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> QuotientBound:
    """Orbit count of Fix(f^l), a certified lower bound for the quotient count.

    The asserted inequality is orbit_count >= |Fix(f^l)| / |G| (the
    at-most-|G|-to-1 projection argument), kept as an exact rational.  The
    multiplier-based value (q^l - 1)^g / |G| is reported for comparison
    but never asserted.
    """
    report = validate_action(action)
    if not report.valid:
        raise ValueError("invalid group action: " + "; ".join(report.violations))
    lift = lift_compatibility(f, action)
    if not lift.compatible:
        raise ValueError("endomorphism does not descend: " + "; ".join(lift.failures))
    upstairs = count_fixed(f, l)
    if upstairs > budget:
        raise BudgetExceededError(
            f"enumerating {upstairs} fixed points exceeds budget {budget}"
        )
    points = enumerate_fixed(f, l)
    classes = orbit_partition(points, action)
    orbit_count = len(classes)
    order = len(action)
    bound = Fraction(upstairs, order)
    if orbit_count < bound:
        raise AssertionError(
            "orbit count fell below |Fix|/|G|; this should be impossible"
        )
    g = f.g
    formula = Fraction((q**l - 1) ** g, order)
    return QuotientBound(
        l=l,
        upstairs_count=upstairs,
        group_order=order,
        orbit_count=orbit_count,
        lower_bound=bound,
        formula_bound=formula,
    )
