"""File formats: family JSON, expression JSON, trial CSV, canonical JSON.

Family files look like::

    {"universe": ["a", "b", "c"], "sets": [["a"], ["a", "b"], []]}

The order of ``universe`` fixes the bit positions of every subset.
Expression files mirror the expression tree::

    {"op": "union", "children": [...]}
    {"op": "intersect", "k": 5, "bounded": 0, "children": [...]}
    {"op": "chain", "sets": [["a"], ["a", "b"]]}
    {"op": "det", "set": ["a"]}
    {"op": "explicit", "sets": [["a"], ["b"]], "dim": 2}

Expressions carry no universe of their own: the ground set is the sorted
union of every element mentioned anywhere in the tree. Element names must
be all strings or all integers.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

from .errors import ParseError
from .family import Element, GroundSet, SetFamily, ground_set, make_family
from .rules import (
    ChainLeaf,
    DeterministicLeaf,
    ExplicitLeaf,
    FamilyExpr,
    IntersectNode,
    UnionNode,
)
from .sampling import TrialBatch


def _load_json(path: str | Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def canonical_json(obj: Any) -> str:
    """Key-sorted, indented JSON with a trailing newline; byte-stable."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def family_from_dict(data: Any, where: str = "family") -> SetFamily:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected a JSON object")
    if "universe" not in data or "sets" not in data:
        raise ParseError(f'{where}: needs "universe" and "sets" keys')
    universe = data["universe"]
    sets = data["sets"]
    if not isinstance(universe, list) or not all(
        isinstance(e, (str, int)) for e in universe
    ):
        raise ParseError(f'{where}: "universe" must be a list of names')
    if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
        raise ParseError(f'{where}: "sets" must be a list of element lists')
    return make_family(ground_set(tuple(universe)), sets)


def load_family(path: str | Path) -> SetFamily:
    return family_from_dict(_load_json(path), where=str(path))


def family_to_dict(family: SetFamily) -> dict:
    return {
        "universe": list(family.ground.elements),
        "sets": [list(members) for members in family.members()],
    }


def dump_family(family: SetFamily, path: str | Path) -> None:
    Path(path).write_text(canonical_json(family_to_dict(family)))


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


def _collect_elements(node: Any, out: set, where: str) -> None:
    if not isinstance(node, dict) or "op" not in node:
        raise ParseError(f'{where}: expression nodes are objects with an "op" key')
    op = node["op"]
    if op in ("chain", "explicit"):
        for s in node.get("sets", ()):
            out.update(s)
    elif op == "det":
        out.update(node.get("set", ()))
    elif op in ("union", "intersect"):
        for child in node.get("children", ()):
            _collect_elements(child, out, where)
    else:
        raise ParseError(f"{where}: unknown op {op!r}")


def _build_expr(node: dict, ground: GroundSet, where: str) -> FamilyExpr:
    op = node["op"]
    try:
        if op == "chain":
            return ChainLeaf(ground, tuple(ground.mask_of(s) for s in node["sets"]))
        if op == "det":
            return DeterministicLeaf(ground, ground.mask_of(node["set"]))
        if op == "explicit":
            dim = node.get("dim")
            if dim is not None and not isinstance(dim, int):
                raise ParseError(f'{where}: "dim" must be an integer')
            return ExplicitLeaf(make_family(ground, node["sets"]), dim)
        children = tuple(_build_expr(c, ground, where) for c in node["children"])
    except KeyError as exc:
        raise ParseError(f"{where}: {op!r} node is missing key {exc}") from None
    if op == "union":
        return UnionNode(children)
    bounded = node.get("bounded")
    k = node.get("k")
    if (bounded is not None and not isinstance(bounded, int)) or (
        k is not None and not isinstance(k, int)
    ):
        raise ParseError(f'{where}: "bounded" and "k" must be integers')
    return IntersectNode(children, bounded=bounded, k=k)


def expr_from_dict(data: Any, where: str = "expression") -> FamilyExpr:
    elements: set[Element] = set()
    _collect_elements(data, elements, where)
    kinds = {type(e) for e in elements}
    if len(kinds) > 1:
        raise ParseError(f"{where}: element names must be all strings or all ints")
    ground = ground_set(tuple(sorted(elements)))
    return _build_expr(data, ground, where)


def load_expr(path: str | Path) -> FamilyExpr:
    return expr_from_dict(_load_json(path), where=str(path))


def expr_to_dict(expr: FamilyExpr) -> dict:
    if isinstance(expr, ChainLeaf):
        ground = expr.ground
        return {"op": "chain", "sets": [list(ground.elements_of(s)) for s in expr.sets]}
    if isinstance(expr, DeterministicLeaf):
        return {"op": "det", "set": list(expr.ground.elements_of(expr.mask))}
    if isinstance(expr, ExplicitLeaf):
        out: dict = {
            "op": "explicit",
            "sets": [list(members) for members in expr.family.members()],
        }
        if expr.declared_dim is not None:
            out["dim"] = expr.declared_dim
        return out
    if isinstance(expr, UnionNode):
        return {"op": "union", "children": [expr_to_dict(c) for c in expr.children]}
    out = {"op": "intersect", "children": [expr_to_dict(c) for c in expr.children]}
    if expr.bounded is not None:
        out["bounded"] = expr.bounded
        out["k"] = expr.k
    return out


# ---------------------------------------------------------------------------
# Trial batches
# ---------------------------------------------------------------------------

TRIAL_CSV_HEADER = (
    "trial_index",
    "chosen_set_size",
    "reds",
    "imbalance",
    "threshold",
    "exceeded",
)


def write_trials_csv(batch: TrialBatch, path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(TRIAL_CSV_HEADER)
        for i in range(batch.trials):
            writer.writerow(
                [
                    i,
                    int(batch.sizes[i]),
                    int(batch.reds[i]),
                    repr(float(batch.imbalances[i])),
                    repr(float(batch.thresholds[i])),
                    int(batch.exceeded[i]),
                ]
            )


def write_summary_json(batch: TrialBatch, path: str | Path) -> None:
    Path(path).write_text(canonical_json(batch.summary()))


def write_slices_csv(
    rows: tuple[tuple[int, int, float, float], ...], path: str | Path
) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("cardinality", "count", "exact_value", "slice_bound"))
        for j, count, exact, bound in rows:
            writer.writerow([j, count, repr(exact), repr(bound)])
