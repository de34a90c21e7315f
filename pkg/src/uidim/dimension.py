"""Exact brute-force dimension computations over finite ground sets.

Two complexity measures of a family H are computed here by exhaustive
enumeration of restriction sets h':

* the union-intersection (UI) dimension: the smallest d such that every
  restriction ``H & h'`` is d-bounded;
* the VC dimension: the largest size of a set shattered by H, i.e. an h'
  with all ``2**|h'|`` intersection patterns realized.

Both enumerations range only over subsets of the union of the members:
for any h', ``h & h' == h & (h' & union)`` for every member h, so
restrictions (and hence both dimensions) are unchanged by elements that
appear in no member. Witness enumeration is in ascending bitmask order
and the first maximizer wins, so results are deterministic.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

from .errors import InfeasibleError
from .family import SetFamily, _min_d_from_counts, restrict

DEFAULT_MAX_ELEMENTS = 20


class UiResult(NamedTuple):
    dim: int
    witness: int  # bitmask of the restriction attaining the dimension


class VcResult(NamedTuple):
    dim: int
    witness: int  # bitmask of a largest shattered set


def _effective_mask(family: SetFamily, max_elements: int, what: str) -> int:
    union = family.union_mask
    if union.bit_count() > max_elements:
        raise InfeasibleError(
            f"exact {what} computation infeasible: members span "
            f"{union.bit_count()} elements > limit {max_elements}; "
            f"use the rule engine for an upper bound instead"
        )
    return union


def _iter_submasks(mask: int):
    """All subsets of ``mask`` in ascending numeric order, starting at 0."""
    s = 0
    while True:
        yield s
        if s == mask:
            return
        s = (s - mask) & mask


def ui_dimension_exact(
    family: SetFamily, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> UiResult:
    """Exact UI dimension: max over all h' of the restriction's minimal d.

    Enumerates the ``2**u`` subsets of the u-element union of members and
    raises :class:`InfeasibleError` when u exceeds ``max_elements``. The
    witness is the first (smallest-bitmask) restriction attaining the
    maximum; it is always at least 1-dimensional, so the empty h' is a
    valid witness for 1-dimensional families.
    """
    union = _effective_mask(family, max_elements, "UI dimension")
    sets = family.sets
    best = 1
    witness = 0
    for hp in _iter_submasks(union):
        if hp.bit_count() < 2:
            # A restriction by fewer than two elements has at most one
            # nonempty intersection, hence is always 1-bounded.
            continue
        counts: dict[int, int] = {}
        for s in {h & hp for h in sets}:
            j = s.bit_count()
            if j:
                counts[j] = counts.get(j, 0) + 1
        d = _min_d_from_counts(counts)[0]
        if d > best:
            best = d
            witness = hp
    return UiResult(best, witness)


def _is_shattered(sets: tuple[int, ...], hp: int) -> bool:
    want = 1 << hp.bit_count()
    seen: set[int] = set()
    for h in sets:
        seen.add(h & hp)
        if len(seen) == want:
            return True
    return False


def vc_dimension_exact(
    family: SetFamily, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> VcResult:
    """Exact VC dimension: the largest D with some size-D subset shattered.

    Searches sizes in increasing order and stops at the first size with no
    shattered set; within a size, candidates are visited in ascending
    bitmask order and the first shattered one becomes the witness. The
    empty family has no realized intersection pattern at all; its VC
    dimension is reported as 0 with an empty witness by convention.
    """
    union = _effective_mask(family, max_elements, "VC dimension")
    if not family.sets:
        return VcResult(0, 0)
    bits = [i for i in range(family.ground.m) if union >> i & 1]
    best = VcResult(0, 0)
    # No family of N sets shatters more than log2(N) elements.
    max_size = min(len(bits), len(family.sets).bit_length() - 1)
    for size in range(1, max_size + 1):
        found = None
        for combo in combinations(bits, size):
            hp = 0
            for b in combo:
                hp |= 1 << b
            if _is_shattered(family.sets, hp):
                if found is None or hp < found:
                    found = hp
        if found is None:
            break
        best = VcResult(size, found)
    return best


def check_ui_vc_inequality(
    family: SetFamily,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    ui_dim: int | None = None,
) -> bool:
    """Verify |H & h'| <= sum_{j=0..|h'|} (j+1)**(d-1) for every h'.

    Here d is the exact UI dimension (recomputed unless the caller passes
    the known value). The inequality holds for every family; a False
    return signals an implementation bug, not a property of the input.
    """
    union = _effective_mask(family, max_elements, "growth inequality")
    d = ui_dim if ui_dim is not None else ui_dimension_exact(family, max_elements).dim
    u = union.bit_count()
    # ceilings[t] = sum_{j=0..t} (j+1)**(d-1); |h'| may exceed |h' & union|,
    # so comparing against the pruned size only strengthens the check.
    ceilings = [0] * (u + 1)
    acc = 0
    for t in range(u + 1):
        acc += (t + 1) ** (d - 1)
        ceilings[t] = acc
    sets = family.sets
    for hp in _iter_submasks(union):
        if len({h & hp for h in sets}) > ceilings[hp.bit_count()]:
            return False
    return True


def vc_limit_from_ui(ui_dim: int) -> int:
    """Largest conceivable shattered-set size for a given UI dimension.

    A shattered set of size D needs 2**D distinct restriction patterns,
    but a d-dimensional family realizes at most sum_{j=0..D} (j+1)**(d-1)
    of them. Returns one less than the smallest D where the power of two
    overtakes that sum for good.
    """
    d = ui_dim
    acc = 0
    cap = 0
    while True:
        acc += (cap + 1) ** (d - 1)
        if 2**cap > acc:
            return cap - 1
        cap += 1


def dimension_witness_check(family: SetFamily, result: UiResult) -> bool:
    """True iff the witness restriction reproduces the reported dimension."""
    from .family import min_boundedness

    return min_boundedness(restrict(family, result.witness)).min_d == result.dim
