"""Compositional dimension bounds for random-set supports.

A :data:`FamilyExpr` describes the support of a random set as a tree:
leaves are containment-ordered chains, explicit families, or single fixed
sets; inner nodes combine children by elementwise union or intersection
of one pick per child. :func:`eval_bound` derives an upper bound on the
UI dimension of the composite support without materializing it, using
three rules:

* a containment-ordered support has dimension at most 1;
* a union's dimension is at most the sum of its parts;
* an intersection is bounded only when some designated child's members
  all have fewer than k elements, in which case the sum of the parts is
  scaled by log2(k).

Inside the rule arithmetic a fixed set counts as dimension 0; a reported
final dimension is never below 1. Intersections of unbounded random sets
admit no finite bound at all (the quarter-plane construction below
realizes the failure), so such nodes are rejected unless a bounded child
is designated or all but one child is deterministic.

:func:`expand` materializes the exact support so that every derived
bound can be checked against :func:`ui_dimension_exact`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Union

from .dimension import DEFAULT_MAX_ELEMENTS, ui_dimension_exact
from .errors import InfeasibleError, ValidationError
from .family import GroundSet, SetFamily, family_from_masks, ground_set

DEFAULT_MAX_EXPANSION = 10**6


@dataclass(frozen=True)
class ChainLeaf:
    """Support listed in strictly increasing containment order."""

    ground: GroundSet
    sets: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.sets:
            raise ValidationError("chain leaf needs at least one set")
        full = self.ground.full_mask
        for s in self.sets:
            if s < 0 or s & ~full:
                raise ValidationError("chain set outside ground mask")
        for a, b in zip(self.sets, self.sets[1:]):
            if a & b != a or a == b:
                raise ValidationError(
                    "chain sets must strictly increase under containment"
                )


@dataclass(frozen=True)
class ExplicitLeaf:
    """Arbitrary support with an optional known dimension.

    ``declared_dim`` must be a true upper bound on the family's UI
    dimension; when omitted, the exact dimension is computed on demand.
    """

    family: SetFamily
    declared_dim: int | None = None

    def __post_init__(self) -> None:
        if not self.family.sets:
            raise ValidationError("explicit leaf needs a nonempty support")
        if self.declared_dim is not None and self.declared_dim < 1:
            raise ValidationError("declared dimension must be >= 1")

    @property
    def ground(self) -> GroundSet:
        return self.family.ground


@dataclass(frozen=True)
class DeterministicLeaf:
    """A single fixed set (support of size one)."""

    ground: GroundSet
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask & ~self.ground.full_mask:
            raise ValidationError("deterministic set outside ground mask")


@dataclass(frozen=True)
class UnionNode:
    children: tuple["FamilyExpr", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValidationError("union node needs at least one child")


@dataclass(frozen=True)
class IntersectNode:
    """Intersection node; ``bounded``/``k`` designate the child whose
    members are promised to have fewer than k elements (checked when the
    support is expanded)."""

    children: tuple["FamilyExpr", ...]
    bounded: int | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        if not self.children:
            raise ValidationError("intersect node needs at least one child")
        if (self.bounded is None) != (self.k is None):
            raise ValidationError("bounded child index and k must come together")
        if self.bounded is not None:
            if not 0 <= self.bounded < len(self.children):
                raise ValidationError(
                    f"bounded child index {self.bounded} out of range"
                )
            if self.k < 1:
                raise ValidationError("cardinality bound k must be >= 1")


FamilyExpr = Union[ChainLeaf, ExplicitLeaf, DeterministicLeaf, UnionNode, IntersectNode]


def expr_ground(expr: FamilyExpr) -> GroundSet:
    """The single ground set shared by all leaves of the expression."""
    if isinstance(expr, (ChainLeaf, DeterministicLeaf, ExplicitLeaf)):
        return expr.ground
    found: GroundSet | None = None
    for child in expr.children:
        g = expr_ground(child)
        if found is None:
            found = g
        elif g != found:
            raise ValidationError("expression mixes different ground sets")
    assert found is not None
    return found


@dataclass(frozen=True)
class RuleTrace:
    """One node of the bound derivation: which rule fired and with what."""

    rule: str
    bound: int
    children: tuple["RuleTrace", ...] = ()
    note: str = ""


@dataclass(frozen=True)
class BoundDerivation:
    """Derived dimension bound plus the trace that reproduces it.

    ``bound`` is the raw rule arithmetic (0 for a lone fixed set);
    ``dimension`` clamps it to the valid range d >= 1.
    """

    bound: int
    dimension: int
    trace: RuleTrace


def _eval(expr: FamilyExpr, max_elements: int) -> RuleTrace:
    if isinstance(expr, ChainLeaf):
        return RuleTrace("chain", 1)
    if isinstance(expr, DeterministicLeaf):
        return RuleTrace("deterministic", 0)
    if isinstance(expr, ExplicitLeaf):
        if expr.declared_dim is not None:
            return RuleTrace("explicit-declared", expr.declared_dim)
        exact = ui_dimension_exact(expr.family, max_elements).dim
        return RuleTrace("explicit-exact", exact)
    if isinstance(expr, UnionNode):
        kids = tuple(_eval(c, max_elements) for c in expr.children)
        return RuleTrace("union", sum(k.bound for k in kids), kids)
    assert isinstance(expr, IntersectNode)
    kids = tuple(_eval(c, max_elements) for c in expr.children)
    if expr.bounded is not None:
        total = sum(k.bound for k in kids)
        bound = math.ceil(total * math.log2(expr.k))
        return RuleTrace(
            "intersect-scaled", bound, kids, note=f"k={expr.k} child={expr.bounded}"
        )
    nondet = [
        i for i, c in enumerate(expr.children) if not isinstance(c, DeterministicLeaf)
    ]
    if len(nondet) == 0:
        return RuleTrace(
            "deterministic", 0, kids, note="intersection of fixed sets is fixed"
        )
    if len(nondet) == 1:
        return RuleTrace(
            "restrict",
            kids[nondet[0]].bound,
            kids,
            note="intersecting with fixed sets cannot raise the dimension",
        )
    raise ValidationError(
        "Intersection Rule inapplicable: an intersection of two or more "
        "unbounded random sets has no finite dimension bound (two "
        "quarter-plane threshold sets already defeat every candidate d); "
        "designate a bounded child with its cardinality limit k"
    )


def eval_bound(
    expr: FamilyExpr, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> BoundDerivation:
    """Upper-bound the UI dimension of the expression's support."""
    trace = _eval(expr, max_elements)
    return BoundDerivation(trace.bound, max(trace.bound, 1), trace)


def _expand_masks(expr: FamilyExpr, cap: int) -> tuple[int, ...]:
    if isinstance(expr, ChainLeaf):
        return tuple(sorted(set(expr.sets)))
    if isinstance(expr, DeterministicLeaf):
        return (expr.mask,)
    if isinstance(expr, ExplicitLeaf):
        return expr.family.sets
    supports = [_expand_masks(c, cap) for c in expr.children]
    combos = math.prod(len(s) for s in supports)
    if combos > cap:
        sizes = " x ".join(str(len(s)) for s in supports)
        raise InfeasibleError(
            f"expansion cap exceeded: {sizes} = {combos} combinations > {cap}"
        )
    if isinstance(expr, IntersectNode) and expr.bounded is not None:
        for h in supports[expr.bounded]:
            if h.bit_count() >= expr.k:
                raise ValidationError(
                    f"bounded child has a member of size {h.bit_count()} "
                    f">= k={expr.k}"
                )
    out: set[int] = set()
    if isinstance(expr, UnionNode):
        for pick in product(*supports):
            acc = 0
            for h in pick:
                acc |= h
            out.add(acc)
    else:
        for pick in product(*supports):
            acc = pick[0]
            for h in pick[1:]:
                acc &= h
            out.add(acc)
    return tuple(sorted(out))


def expand(expr: FamilyExpr, max_sets: int = DEFAULT_MAX_EXPANSION) -> SetFamily:
    """Materialize the exact support of the composite random set.

    Enumerates one member choice per child at every inner node and
    deduplicates the results. The per-node combination count is capped by
    ``max_sets``; exceeding it raises :class:`InfeasibleError` naming the
    per-child support sizes.
    """
    ground = expr_ground(expr)
    return family_from_masks(ground, _expand_masks(expr, max_sets))


class VerifyResult(NamedTuple):
    exact: int
    bound: int
    sound: bool


def verify_bound(
    expr: FamilyExpr,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    max_sets: int = DEFAULT_MAX_EXPANSION,
) -> VerifyResult:
    """Compare the derived bound against the exact dimension of the support.

    ``sound`` is ``exact <= max(bound, 1)``; an unsound result signals an
    implementation bug, never a property of the expression.
    """
    derivation = eval_bound(expr, max_elements)
    support = expand(expr, max_sets)
    exact = ui_dimension_exact(support, max_elements).dim
    return VerifyResult(exact, derivation.bound, exact <= derivation.dimension)


# ---------------------------------------------------------------------------
# Reference constructions
# ---------------------------------------------------------------------------


def quarterplane_ground(n: int) -> GroundSet:
    """Diagonal antichain of n plane points (i, n+1-i), i = 1..n."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    return ground_set(tuple(f"({i},{n + 1 - i})" for i in range(1, n + 1)))


def quarterplane_family(n: int) -> SetFamily:
    """All nonempty traces of upper-right quarter-planes on the diagonal.

    A quarter-plane {x > a, y > b} meets the antichain in a contiguous run
    of diagonal positions, so the family is exactly the n(n+1)/2 nonempty
    runs. It contains n singletons, hence is not d-bounded for any d with
    2**(d-1) < n; its minimal d grows like 1 + log2(n) without bound.
    """
    ground = quarterplane_ground(n)
    masks = []
    for a in range(n):
        acc = 0
        for b in range(a, n):
            acc |= 1 << b
            masks.append(acc)
    return family_from_masks(ground, masks)


def two_axis_union(n: int) -> UnionNode:
    """Union of the two threshold chains over the diagonal antichain.

    One chain collects the points with x above a threshold (suffix runs),
    the other those with y above a threshold (prefix runs); both include
    the empty and the full set. The union rule bounds the composite by 2.
    """
    ground = quarterplane_ground(n)
    suffixes = [0]
    for a in range(n - 1, -1, -1):
        suffixes.append(suffixes[-1] | 1 << a)
    prefixes = [0]
    for b in range(n):
        prefixes.append(prefixes[-1] | 1 << b)
    return UnionNode(
        (ChainLeaf(ground, tuple(suffixes)), ChainLeaf(ground, tuple(prefixes)))
    )


def halfline_family(rows: int, cols: int) -> SetFamily:
    """Row-wise suffix segments on a rows x cols grid.

    Each member is the tail {c >= c0} of one row: the finite shadow of a
    family of horizontal half-lines. Its VC dimension stays at most 1 for
    every grid size, while restricting to one point per row yields as many
    singletons as there are rows, so the UI dimension grows with the row
    count.
    """
    if rows < 1 or cols < 1:
        raise ValidationError("rows and cols must be >= 1")
    ground = ground_set(
        tuple(f"r{r}c{c}" for r in range(1, rows + 1) for c in range(1, cols + 1))
    )
    masks = []
    for r in range(rows):
        acc = 0
        for c in range(cols - 1, -1, -1):
            acc |= 1 << (r * cols + c)
            masks.append(acc)
    return family_from_masks(ground, masks)


# ---------------------------------------------------------------------------
# Random expressions for soundness testing
# ---------------------------------------------------------------------------


def _random_chain(rng: random.Random, ground: GroundSet) -> ChainLeaf:
    order = list(range(ground.m))
    rng.shuffle(order)
    length = rng.randint(1, min(4, ground.m))
    cuts = sorted(rng.sample(range(1, ground.m + 1), length))
    if rng.random() < 0.3:
        cuts = [0] + cuts
    sets = []
    for cut in cuts:
        mask = 0
        for b in order[:cut]:
            mask |= 1 << b
        sets.append(mask)
    return ChainLeaf(ground, tuple(sets))


def _random_leaf(rng: random.Random, ground: GroundSet, max_elements: int) -> FamilyExpr:
    roll = rng.random()
    if roll < 0.5:
        return _random_chain(rng, ground)
    if roll < 0.75:
        return DeterministicLeaf(ground, rng.randrange(ground.full_mask + 1))
    masks = {rng.randrange(ground.full_mask + 1) for _ in range(rng.randint(1, 4))}
    fam = family_from_masks(ground, masks)
    declared = None
    if rng.random() < 0.5:
        declared = ui_dimension_exact(fam, max_elements).dim
    return ExplicitLeaf(fam, declared)


def random_family_expr(
    rng: random.Random,
    ground: GroundSet,
    max_depth: int = 3,
    max_fanout: int = 3,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    max_support: int = 400,
) -> FamilyExpr:
    """A random expression whose expanded support stays small.

    Intersections are always generated in an applicable form: either a
    bounded child is designated with a k that its support honors, or all
    children but one are deterministic. Regenerates until the expansion
    fits ``max_support`` member sets.
    """
    for _ in range(200):
        expr = _random_expr(rng, ground, max_depth, max_fanout, max_elements)
        try:
            support = expand(expr, max_sets=10 * max_support)
        except (InfeasibleError, ValidationError):
            continue
        if len(support) <= max_support:
            return expr
    raise RuntimeError("could not generate a feasible expression")


def _random_expr(
    rng: random.Random,
    ground: GroundSet,
    depth: int,
    max_fanout: int,
    max_elements: int,
) -> FamilyExpr:
    if depth == 0 or rng.random() < 0.45:
        return _random_leaf(rng, ground, max_elements)
    nchild = rng.randint(2, max_fanout)
    children = tuple(
        _random_expr(rng, ground, depth - 1, max_fanout, max_elements)
        for _ in range(nchild)
    )
    if rng.random() < 0.6:
        return UnionNode(children)
    if rng.random() < 0.5:
        # restriction form: one random child, the rest deterministic
        rest = tuple(
            DeterministicLeaf(ground, rng.randrange(ground.full_mask + 1))
            for _ in range(nchild - 1)
        )
        return IntersectNode((children[0],) + rest)
    idx = rng.randrange(nchild)
    support = _expand_masks(children[idx], DEFAULT_MAX_EXPANSION)
    k = max(h.bit_count() for h in support) + 1
    return IntersectNode(children, bounded=idx, k=k)
