"""Arithmetic in the semidirect product of A by Aut(A), regular subsets, orbits.

A regular subset assigns one automorphism to each group element; it is the
vertex type of every enumerated quiver in this package.  Translating a regular
subset by one of its own pairs is the transition step that generates the
dynamical families.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, NamedTuple

from .errors import InputError, ResourceCapError
from .groups import Automorphism, FiniteGroup, automorphism_group

#: Default bound on closure/enumeration sizes; CLI-overridable.
DEFAULT_CAP = 10**8


class HolElement(NamedTuple):
    """A pair (group element, automorphism index into the canonical order)."""

    elem: int
    aut: int


@lru_cache(maxsize=None)
def holomorph(group: FiniteGroup) -> "Holomorph":
    return Holomorph(group)


class Holomorph:
    """Composition, inverse and evaluation tables for Aut(A) acting on A."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.auts: tuple[Automorphism, ...] = automorphism_group(group)
        images = [a.images for a in self.auts]
        index = {img: k for k, img in enumerate(images)}
        k = len(images)
        n = group.order
        self.act: tuple[tuple[int, ...], ...] = tuple(images)
        self.comp = tuple(
            tuple(index[tuple(images[f][images[g][x]] for x in range(n))] for g in range(k))
            for f in range(k)
        )
        ident = tuple(range(n))
        self.ainv = tuple(
            next(g for g in range(k) if tuple(images[f][images[g][x]] for x in range(n)) == ident)
            for f in range(k)
        )

    @property
    def size(self) -> int:
        return self.group.order * len(self.auts)


def hol_mul(x: HolElement, y: HolElement, group: FiniteGroup) -> HolElement:
    """(a,f)*(b,g) = (a*f(b), f o g)."""
    hol = holomorph(group)
    a, f = x
    b, g = y
    return HolElement(group.mul(a, hol.act[f][b]), hol.comp[f][g])


def hol_inv(x: HolElement, group: FiniteGroup) -> HolElement:
    """(a,f)^-1 = (f^-1(a^-1), f^-1)."""
    hol = holomorph(group)
    a, f = x
    fi = hol.ainv[f]
    return HolElement(hol.act[fi][group.inv(a)], fi)


@dataclass(frozen=True, order=True)
class RegularSubset:
    """One automorphism index per group element: the subset {(a, f_a) : a in A}.

    The array form makes regularity structural; the subset is unital exactly
    when the identity element carries the identity automorphism.
    """

    assignment: tuple[int, ...]

    def pairs(self) -> Iterator[HolElement]:
        for a, f in enumerate(self.assignment):
            yield HolElement(a, f)

    def is_unital(self, group: FiniteGroup) -> bool:
        return self.assignment[group.identity] == 0

    def describe(self) -> str:
        return ",".join(str(f) for f in self.assignment)


def check_regular_subset(subset: RegularSubset, group: FiniteGroup) -> None:
    hol = holomorph(group)
    if len(subset.assignment) != group.order:
        raise InputError(
            f"assignment length {len(subset.assignment)} for group of order {group.order}"
        )
    k = len(hol.auts)
    for a, f in enumerate(subset.assignment):
        if not (0 <= f < k):
            raise InputError(f"automorphism index {f} at element {a} out of range [0,{k})")


def identity_subset(group: FiniteGroup) -> RegularSubset:
    return RegularSubset(tuple(0 for _ in range(group.order)))


def translate(subset: RegularSubset, a: int, group: FiniteGroup) -> RegularSubset:
    """The regular subset {(a, f_a)^-1 * (b, f_b) : b in A}.

    The image is automatically regular; this is asserted, a failure indicates
    a bug rather than bad input.
    """
    hol = holomorph(group)
    if not (0 <= a < group.order):
        raise InputError(f"element {a} out of range for order {group.order}")
    fa = subset.assignment[a]
    fi = hol.ainv[fa]
    act_fi = hol.act[fi]
    comp_fi = hol.comp[fi]
    inv_a = group.inv(a)
    row = group.table[inv_a]
    out = [-1] * group.order
    for b, fb in enumerate(subset.assignment):
        c = act_fi[row[b]]
        out[c] = comp_fi[fb]
    assert all(f >= 0 for f in out), "translation image failed regularity"
    return RegularSubset(tuple(out))


def translation_target(subset: RegularSubset, a: int, group: FiniteGroup) -> RegularSubset:
    """Alias emphasising the quiver reading: the target of the arrow labelled a."""
    return translate(subset, a, group)


def orbit_closure(
    seed: RegularSubset, group: FiniteGroup, cap: int = DEFAULT_CAP
) -> tuple[RegularSubset, ...]:
    """Smallest set containing ``seed`` closed under translation by every element.

    Returned in canonical order (lexicographic on assignments).
    """
    check_regular_subset(seed, group)
    seen = {seed.assignment}
    frontier = [seed]
    while frontier:
        nxt = []
        for s in frontier:
            for a in range(group.order):
                t = translate(s, a, group)
                if t.assignment not in seen:
                    if len(seen) >= cap:
                        raise ResourceCapError(len(seen) + 1, cap, "subsets in closure")
                    seen.add(t.assignment)
                    nxt.append(t)
        frontier = nxt
    return tuple(RegularSubset(x) for x in sorted(seen))


def subset_to_json(subset: RegularSubset) -> dict:
    return {"assignment": list(subset.assignment)}


def subset_from_json(data: Mapping, group: FiniteGroup) -> RegularSubset:
    if "assignment" not in data:
        raise InputError("regular subset JSON needs an 'assignment' key")
    subset = RegularSubset(tuple(int(v) for v in data["assignment"]))
    check_regular_subset(subset, group)
    return subset
