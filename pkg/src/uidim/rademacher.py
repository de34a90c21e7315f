"""Rademacher complexity of a family viewed as 0/1 vectors.

Members are encoded as binary vectors over the ground set and correlated
against independent uniform +-1 signs; the reported quantity is the
expected supremum ``E[max over members of sum of signs inside the
member]``, i.e. the ``m * Rad(H)`` normalization. At p = 1/2 this is
exactly the red-minus-uncolored imbalance of the worst member, which ties
these values to the sampling simulators.

Logarithms are natural throughout, matching the Hoeffding-derived
``sqln`` unit; the choice is isolated in the bound formulas below.

Signs outside the union of the members never enter any member's sum, so
both the exact enumeration and the Monte Carlo estimator draw signs only
for the union's columns; this changes nothing but the cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, ValidationError
from .family import SetFamily, family_from_masks, min_boundedness

DEFAULT_MAX_SIGN_ELEMENTS = 22
MC_CHUNK = 4096


def massart_bound(n_vectors: int, c: float) -> float:
    """Expected-supremum bound c*sqrt(2*ln(N)) for N vectors of norm <= c."""
    if n_vectors < 1:
        raise ValidationError(f"N must be >= 1, got {n_vectors}")
    if c < 0:
        raise ValidationError(f"norm bound c must be >= 0, got {c}")
    return c * math.sqrt(2.0 * math.log(n_vectors))


def slice_bound(j: int, d: int) -> float:
    """sqrt(2*(d-1)*j*ln(j+1)): the cardinality-j slice of a d-bounded family.

    Equals ``massart_bound((j+1)**(d-1), sqrt(j))``: the slice holds at
    most (j+1)**(d-1) vectors, each of norm sqrt(j).
    """
    if j < 1 or d < 1:
        raise ValidationError("slice_bound needs j >= 1 and d >= 1")
    return math.sqrt(2.0 * (d - 1) * j * math.log(j + 1))


def vc_rad_bound(vc_dim: int, m: int) -> float:
    """VC-based bound sqrt(m*2*D*ln(e*m/D)) in the m*Rad normalization.

    Provided for comparison plots only; unlike the slice bound it grows
    with the ground-set size m.
    """
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if not 1 <= vc_dim <= m:
        raise ValidationError(f"need 1 <= D <= m, got D={vc_dim}, m={m}")
    return math.sqrt(m * 2.0 * vc_dim * math.log(math.e * m / vc_dim))


@dataclass(frozen=True)
class RadReport:
    """Expected supremum of sign correlations, with comparison bounds.

    ``value`` is m*Rad(H); ``massart`` is the generic finite-class bound
    at the family's own size and maximal member norm. ``slices`` holds
    (j, count, exact slice value, slice bound) rows when requested.
    """

    m: int
    family_size: int
    value: float
    method: str
    massart: float
    samples: int | None = None
    seed: int | None = None
    stderr: float | None = None
    slices: tuple[tuple[int, int, float, float], ...] | None = None


def _columns(family: SetFamily) -> tuple[np.ndarray, int]:
    """(member matrix over union columns, number of columns)."""
    union = family.union_mask
    cols = [i for i in range(family.ground.m) if union >> i & 1]
    matrix = np.zeros((len(family.sets), len(cols)), dtype=np.float32)
    for r, h in enumerate(family.sets):
        for c, bit in enumerate(cols):
            if h >> bit & 1:
                matrix[r, c] = 1.0
    return matrix, len(cols)


def _family_massart(family: SetFamily) -> float:
    max_card = max(h.bit_count() for h in family.sets)
    return massart_bound(len(family.sets), math.sqrt(max_card))


def _require_nonempty(family: SetFamily) -> None:
    if not family.sets:
        raise ValidationError(
            "Rademacher value of an empty family is undefined; supply at "
            "least one member set"
        )


def rademacher_exact(
    family: SetFamily,
    max_elements: int = DEFAULT_MAX_SIGN_ELEMENTS,
    include_slices: bool = False,
) -> RadReport:
    """Exact expectation over all sign assignments of the member supremum.

    Enumerates all 2**u sign patterns over the u-element union of members;
    every supremum is an integer and the pattern count is a power of two,
    so the returned value is exact, not merely accurate.
    """
    _require_nonempty(family)
    matrix, u = _columns(family)
    if u > max_elements:
        raise InfeasibleError(
            f"exact enumeration infeasible: members span {u} elements "
            f"> limit {max_elements}; use the Monte Carlo estimator"
        )
    if u == 0:
        value = 0.0
    else:
        total = 0
        shifts = np.arange(u, dtype=np.uint32)
        chunk = 1 << min(u, 14)
        for start in range(0, 1 << u, chunk):
            patterns = np.arange(start, start + chunk, dtype=np.uint32)
            bits = ((patterns[:, None] >> shifts) & 1).astype(np.int8)
            signs = (bits * 2 - 1).astype(np.float32)
            sups = (signs @ matrix.T).max(axis=1)
            total += int(sups.astype(np.int64).sum())
        value = total / float(1 << u)
    slices = _slice_rows(family) if include_slices else None
    return RadReport(
        m=family.ground.m,
        family_size=len(family.sets),
        value=value,
        method="exact",
        massart=_family_massart(family),
        slices=slices,
    )


def rademacher_mc(
    family: SetFamily,
    samples: int,
    seed: int,
    threads: int = 1,
) -> RadReport:
    """Monte Carlo estimate of the expected member supremum.

    Sample chunk c draws its signs from ``default_rng(SeedSequence((seed,
    c)))`` with a fixed chunk width, so estimates are reproducible for any
    thread count. The standard error is the sample standard deviation over
    sqrt(samples).
    """
    _require_nonempty(family)
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    matrix, u = _columns(family)
    if u == 0:
        sups = np.zeros(samples)
    else:
        spans = [
            (c, s, min(s + MC_CHUNK, samples))
            for c, s in enumerate(range(0, samples, MC_CHUNK))
        ]

        def run(chunk_index: int, start: int, stop: int) -> np.ndarray:
            rng = np.random.default_rng(np.random.SeedSequence((seed, chunk_index)))
            signs = (rng.integers(0, 2, size=(stop - start, u)) * 2 - 1).astype(
                np.float32
            )
            return (signs @ matrix.T).max(axis=1)

        if threads <= 1:
            parts = [run(*span) for span in spans]
        else:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(lambda span: run(*span), spans))
        sups = np.concatenate(parts).astype(np.float64)
    stderr = float(sups.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return RadReport(
        m=family.ground.m,
        family_size=len(family.sets),
        value=float(sups.mean()),
        method="monte_carlo",
        massart=_family_massart(family),
        samples=samples,
        seed=seed,
        stderr=stderr,
    )


def _slice_rows(family: SetFamily) -> tuple[tuple[int, int, float, float], ...]:
    d = min_boundedness(family).min_d
    rows = []
    by_size: dict[int, list[int]] = {}
    for h in family.sets:
        by_size.setdefault(h.bit_count(), []).append(h)
    for j in sorted(by_size):
        if j < 1:
            continue
        members = by_size[j]
        slice_family = family_from_masks(family.ground, members)
        exact = rademacher_exact(slice_family).value
        rows.append((j, len(members), exact, slice_bound(j, d)))
    return tuple(rows)
