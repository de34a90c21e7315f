"""Ground sets, set families and cardinality-profile bounds.

A family is a *set* of subsets of one finite ground set: duplicates are
collapsed on construction, and every subset is stored as a bitmask over
the ground-set index. All types are immutable after construction and all
operations are pure functions, so values can be shared freely across
threads.

The central notion is *d-boundedness*: a family is d-bounded (for an
integer d >= 1) when, for every cardinality j >= 1, it contains at most
(j+1)**(d-1) member sets of size j. Cardinality 0 is unconstrained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import ValidationError

Element = Union[str, int]
SubsetLike = Union[int, Iterable[Element]]


@dataclass(frozen=True)
class GroundSet:
    """Ordered finite universe of distinct element identifiers.

    Iteration order is the tuple order and is stable across runs; it fixes
    the bit positions used by every subset mask.
    """

    elements: tuple[Element, ...]
    _index: dict[Element, int] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        index: dict[Element, int] = {}
        for i, e in enumerate(self.elements):
            if e in index:
                raise ValidationError(f"duplicate ground element {e!r}")
            index[e] = i
        object.__setattr__(self, "_index", index)

    @property
    def m(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def index_of(self, element: Element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise ValidationError(f"element {element!r} not in ground set") from None

    def mask_of(self, subset: Iterable[Element]) -> int:
        mask = 0
        for e in subset:
            mask |= 1 << self.index_of(e)
        return mask

    def as_mask(self, subset: SubsetLike) -> int:
        """Normalize a subset given either as a bitmask or as elements."""
        if isinstance(subset, int):
            if subset < 0 or subset & ~self.full_mask:
                raise ValidationError(
                    f"mask {subset:#x} has bits outside the {self.m}-element ground set"
                )
            return subset
        return self.mask_of(subset)

    def elements_of(self, mask: int) -> tuple[Element, ...]:
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)


def ground_set(elements: Iterable[Element]) -> GroundSet:
    return GroundSet(tuple(elements))


@dataclass(frozen=True)
class SetFamily:
    """Deduplicated collection of subsets of one ground set.

    ``sets`` holds bitmasks in ascending numeric order; ``profile`` maps
    each cardinality j to the number of member sets of that size.
    """

    ground: GroundSet
    sets: tuple[int, ...]
    profile: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        counts: dict[int, int] = {}
        for h in self.sets:
            j = h.bit_count()
            counts[j] = counts.get(j, 0) + 1
        object.__setattr__(self, "profile", counts)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    @property
    def union_mask(self) -> int:
        u = 0
        for h in self.sets:
            u |= h
        return u

    def members(self) -> tuple[tuple[Element, ...], ...]:
        return tuple(self.ground.elements_of(h) for h in self.sets)


def family_from_masks(ground: GroundSet, masks: Iterable[int]) -> SetFamily:
    """Build a family from bitmasks, collapsing duplicates.

    Masks must already lie within the ground set; this skips per-element
    validation and is the fast path used by restriction and expansion.
    """
    return SetFamily(ground, tuple(sorted(set(masks))))


def make_family(ground: GroundSet, sets: Iterable[SubsetLike]) -> SetFamily:
    """Build a family from subsets given as element collections or masks.

    Duplicate subsets collapse; an element outside the ground set raises a
    :class:`ValidationError` naming it.
    """
    return family_from_masks(ground, (ground.as_mask(s) for s in sets))


def is_d_bounded(family: SetFamily, d: int) -> bool:
    """True iff for every cardinality j >= 1, profile(j) <= (j+1)**(d-1)."""
    if d < 1:
        raise ValidationError(f"d must be a positive integer, got {d}")
    return all(
        count <= (j + 1) ** (d - 1) for j, count in family.profile.items() if j >= 1
    )


def _smallest_d_for_count(j: int, count: int) -> int:
    """Smallest d >= 1 with count <= (j+1)**(d-1), for j >= 1, count >= 2.

    Uses the closed form ceil(log(count)/log(j+1)) + 1 with an exact
    integer fix-up so float rounding can never shift the answer.
    """
    d = math.ceil(math.log(count) / math.log(j + 1)) + 1
    while (j + 1) ** (d - 1) < count:
        d += 1
    while d > 1 and (j + 1) ** (d - 2) >= count:
        d -= 1
    return max(d, 1)


def _min_d_from_counts(counts: dict[int, int]) -> tuple[int, int | None]:
    """(smallest valid d, smallest cardinality violating d-1) for a profile."""
    min_d = 1
    witness = None
    for j, count in sorted(counts.items()):
        if j >= 1 and count >= 2:
            d = _smallest_d_for_count(j, count)
            if d > min_d:
                min_d = d
                witness = j
    return min_d, witness


def _min_d_of_masks(masks: Iterable[int]) -> int:
    """Smallest d for which the deduplicated masks are d-bounded."""
    counts: dict[int, int] = {}
    for h in set(masks):
        j = h.bit_count()
        if j:
            counts[j] = counts.get(j, 0) + 1
    return _min_d_from_counts(counts)[0]


@dataclass(frozen=True)
class BoundednessReport:
    """Per-cardinality counts against the ceilings at the minimal valid d.

    ``per_j`` maps j to (count, (j+1)**(min_d-1)); ``violating_j`` is a
    cardinality whose count exceeds the ceiling at min_d - 1, present
    whenever min_d > 1.
    """

    min_d: int
    per_j: dict[int, tuple[int, int]]
    violating_j: int | None


def min_boundedness(family: SetFamily) -> BoundednessReport:
    """Smallest d such that the family is d-bounded, with witnesses.

    The empty family is 1-bounded vacuously; a single empty member adds
    nothing because cardinality 0 is never constrained.
    """
    counts = {j: c for j, c in family.profile.items() if j >= 1}
    min_d, witness = _min_d_from_counts(counts)
    per_j = {j: (c, (j + 1) ** (min_d - 1)) for j, c in sorted(counts.items())}
    return BoundednessReport(min_d=min_d, per_j=per_j, violating_j=witness)


def restrict(family: SetFamily, h: SubsetLike) -> SetFamily:
    """The family of pairwise-distinct intersections {member & h}."""
    mask = family.ground.as_mask(h)
    return family_from_masks(family.ground, (s & mask for s in family.sets))


def subtract(family: SetFamily, h: SubsetLike) -> SetFamily:
    """The family of pairwise-distinct differences {member \\ h}."""
    mask = family.ground.as_mask(h)
    return family_from_masks(family.ground, (s & ~mask for s in family.sets))


def _is_chain_masks(masks: tuple[int, ...]) -> bool:
    # Masks are distinct; strictly nested finite sets have distinct sizes,
    # so sorting by cardinality and checking adjacent containment suffices.
    if len(masks) <= 1:
        return True
    ordered = sorted(masks, key=int.bit_count)
    for a, b in zip(ordered, ordered[1:]):
        if a & b != a or a == b or a.bit_count() == b.bit_count():
            return False
    return True


def is_chain(family: SetFamily) -> bool:
    """True iff members can be ordered so each strictly contains the last.

    Families of size <= 1 are chains trivially.
    """
    return _is_chain_masks(family.sets)
