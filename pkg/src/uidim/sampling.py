"""Bernoulli colorings, adversarial imbalance, and tail-bound simulators.

Every element of a ground set is independently colored red with a common
probability p. For a selected sub-population T the *imbalance* is
``abs(reds(T) - p*|T|)``. For a deterministic T of size t the imbalance
stays below ``r*sqln(t)`` except with probability ``2/t**(2*r*r)``; for a
T chosen adversarially from a d-bounded support it stays below
``d*sqln(|T|)`` for all members of size >= t_min simultaneously, except
with probability about ``4/t_min``. The simulators here estimate those
failure rates empirically so the bounds can be checked (and, for the
quarter-plane support, be seen to fail).

Randomness is reproducible by construction: trial i of a batch uses
``numpy.random.default_rng(SeedSequence((master_seed, i)))`` and nothing
else, so results are bit-identical for any chunking or thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from scipy.stats import binom

from .errors import ValidationError
from .family import GroundSet, SetFamily, is_d_bounded

TRIAL_CHUNK = 512


def sqln(t: float) -> float:
    """sqrt(t * ln(t)), the size-scaled deviation unit; sqln(1) == 0."""
    if t < 1:
        raise ValidationError(f"sqln requires t >= 1, got {t}")
    return math.sqrt(t * math.log(t))


def _sqln_vec(t: np.ndarray) -> np.ndarray:
    return np.sqrt(t * np.log(t))


def hoeffding_failure_bound(t: int, q: float, clamp: bool = True) -> float:
    """Two-sided Hoeffding tail 2*exp(-2*q**2/t) for a sum of t indicators.

    The raw formula exceeds 1 for small q; by default the value is clamped
    to 1 so it can be reported as a probability.
    """
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    if q < 0:
        raise ValidationError(f"q must be >= 0, got {q}")
    raw = 2.0 * math.exp(-2.0 * q * q / t)
    return min(raw, 1.0) if clamp else raw


def binomial_failure_exact(t: int, p: float, threshold: float) -> float:
    """Exact P(|Binomial(t, p) - p*t| >= threshold) by summing the pmf."""
    _check_p(p)
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    k = np.arange(t + 1)
    pmf = binom.pmf(k, t, p)
    return float(pmf[np.abs(k - p * t) >= threshold].sum())


def _check_p(p: float) -> None:
    if not 0.0 < p <= 1.0:
        raise ValidationError(f"p must lie in (0, 1], got {p}")


def trial_seed(master_seed: int, index: int) -> int:
    """Deterministic 64-bit stream seed for one trial of a batch."""
    ss = np.random.SeedSequence(entropy=(master_seed, index))
    return int(ss.generate_state(1, np.uint64)[0])


def _red_bits(m: int, p: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return rng.random(m) < p


@dataclass(frozen=True)
class Coloring:
    """One realized red/uncolored assignment, reproducible from (seed, p)."""

    ground: GroundSet
    red: int
    p: float
    seed: int


def color_population(ground: GroundSet, p: float, seed: int) -> Coloring:
    """Color every element red independently with probability p.

    The same (seed, p) pair always reproduces the same coloring.
    """
    _check_p(p)
    bits = _red_bits(ground.m, p, seed)
    packed = np.packbits(bits, bitorder="little").tobytes()
    return Coloring(ground, int.from_bytes(packed, "little"), p, seed)


@dataclass(frozen=True)
class ImbalanceRecord:
    """Imbalance of one selected set against its size-indexed threshold."""

    set_mask: int
    size: int
    reds: int
    imbalance: float
    bound_value: float | None
    exceeded: bool | None


def worst_imbalance(
    family: SetFamily, coloring: Coloring, t_min: int = 0, d: int | None = None
) -> ImbalanceRecord:
    """The member of size >= t_min with the largest imbalance.

    Ties break toward the smallest bitmask. When ``d`` is given the record
    carries the threshold ``d*sqln(size)`` and whether it was met or
    exceeded. Growing the family can never decrease the returned
    imbalance.
    """
    if t_min < 0:
        raise ValidationError("t_min must be >= 0")
    p = coloring.p
    red = coloring.red
    best: tuple[float, int] | None = None
    for h in family.sets:
        size = h.bit_count()
        if size < t_min:
            continue
        imb = abs((h & red).bit_count() - p * size)
        if best is None or imb > best[0]:
            best = (imb, h)
    if best is None:
        raise ValidationError(f"no family member has size >= {t_min}")
    imb, h = best
    size = h.bit_count()
    bound = d * sqln(size) if d is not None and size >= 1 else None
    return ImbalanceRecord(
        set_mask=h,
        size=size,
        reds=(h & red).bit_count(),
        imbalance=imb,
        bound_value=bound,
        exceeded=None if bound is None else bool(imb >= bound),
    )


@dataclass(frozen=True, eq=False)
class TrialBatch:
    """Seeded Monte Carlo batch with per-trial worst-imbalance records.

    ``theoretical_bound`` is clamped to [0, 1] for reporting;
    ``theoretical_bound_raw`` keeps the unclamped formula value. For the
    random-set simulator the reported bound uses the rigorous tail sum
    ``4/(t_min-1)`` and ``approx_bound`` carries the looser-looking
    ``4/t_min`` approximation for comparison. The quarter-plane scenario
    has no finite bound, so both are ``None`` there.
    """

    kind: str
    trials: int
    master_seed: int
    p: float
    sizes: np.ndarray
    reds: np.ndarray
    imbalances: np.ndarray
    thresholds: np.ndarray
    exceeded: np.ndarray
    chosen_sets: tuple[int, ...]
    theoretical_bound: float | None
    theoretical_bound_raw: float | None
    approx_bound: float | None = None

    @property
    def failures(self) -> int:
        return int(self.exceeded.sum())

    @property
    def empirical_failure_rate(self) -> float:
        return self.failures / self.trials

    def records(self) -> Iterator[ImbalanceRecord]:
        for i in range(self.trials):
            yield ImbalanceRecord(
                set_mask=self.chosen_sets[i],
                size=int(self.sizes[i]),
                reds=int(self.reds[i]),
                imbalance=float(self.imbalances[i]),
                bound_value=float(self.thresholds[i]),
                exceeded=bool(self.exceeded[i]),
            )

    def summary(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "empirical_rate": self.empirical_failure_rate,
            "theoretical_bound": self.theoretical_bound,
        }


def _chunk_spans(total: int, chunk: int) -> list[tuple[int, int]]:
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def _map_chunks(
    spans: list[tuple[int, int]],
    fn: Callable[[int, int], tuple],
    threads: int,
) -> list[tuple]:
    if threads <= 1:
        return [fn(s, e) for s, e in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda se: fn(se[0], se[1]), spans))


def simulate_deterministic(
    t: int,
    p: float,
    r: float,
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> TrialBatch:
    """Failure rate of the fixed-set bound: imbalance >= r*sqln(t).

    The selected set is all t elements of a fresh ground set; each trial
    draws an independent coloring. The comparison bound is 2/t**(2*r*r).
    """
    if t < 2:
        raise ValidationError(f"t must be >= 2, got {t}")
    if r < 1:
        raise ValidationError(f"r must be >= 1, got {r}")
    _check_p(p)
    threshold = r * sqln(t)

    def run(start: int, stop: int) -> tuple:
        reds = np.empty(stop - start, dtype=np.int64)
        for i in range(start, stop):
            bits = _red_bits(t, p, trial_seed(master_seed, i))
            reds[i - start] = int(bits.sum())
        return (reds,)

    parts = _map_chunks(_chunk_spans(trials, TRIAL_CHUNK), run, threads)
    reds = np.concatenate([part[0] for part in parts])
    imbalances = np.abs(reds - p * t)
    raw = 2.0 * t ** (-2.0 * r * r)
    full = (1 << t) - 1
    return TrialBatch(
        kind="deterministic",
        trials=trials,
        master_seed=master_seed,
        p=p,
        sizes=np.full(trials, t, dtype=np.int64),
        reds=reds,
        imbalances=imbalances,
        thresholds=np.full(trials, threshold),
        exceeded=imbalances >= threshold,
        chosen_sets=(full,) * trials,
        theoretical_bound=min(raw, 1.0),
        theoretical_bound_raw=raw,
    )


def _member_matrix(family: SetFamily) -> np.ndarray:
    m = family.ground.m
    nbytes = (m + 7) // 8
    rows = np.frombuffer(
        b"".join(h.to_bytes(nbytes, "little") for h in family.sets), dtype=np.uint8
    ).reshape(len(family.sets), nbytes)
    bits = np.unpackbits(rows, axis=1, bitorder="little")[:, :m]
    return bits.astype(np.float32)


def simulate_random_set(
    family: SetFamily,
    p: float,
    d: int,
    t_min: int,
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> TrialBatch:
    """Adversary-complete failure rate of the d-bounded support bound.

    A trial fails when *some* member of size >= t_min has imbalance at
    least ``d*sqln(size)``; the recorded set is the member with the
    largest margin over its threshold (ties toward the smallest bitmask).
    The family must actually be d-bounded for the supplied d.
    """
    _check_p(p)
    if t_min < 2:
        raise ValidationError(f"t_min must be >= 2, got {t_min}")
    if not is_d_bounded(family, d):
        raise ValidationError(f"family is not {d}-bounded; check min_boundedness")
    sizes = np.array([h.bit_count() for h in family.sets], dtype=np.int64)
    eligible = sizes >= t_min
    if not eligible.any():
        raise ValidationError(f"no family member has size >= {t_min}")
    matrix = _member_matrix(family)
    thresholds = np.full(len(sizes), np.inf)
    thresholds[eligible] = d * _sqln_vec(sizes[eligible].astype(np.float64))
    m = family.ground.m

    def run(start: int, stop: int) -> tuple:
        cols = np.empty((m, stop - start), dtype=np.float32)
        for i in range(start, stop):
            cols[:, i - start] = _red_bits(m, p, trial_seed(master_seed, i))
        red_counts = np.rint(matrix @ cols).astype(np.int64)
        imb = np.abs(red_counts - p * sizes[:, None])
        margin = imb - thresholds[:, None]
        margin[~eligible, :] = -np.inf
        idx = np.argmax(margin, axis=0)
        take = np.arange(stop - start)
        return (
            idx,
            red_counts[idx, take],
            imb[idx, take],
            margin[idx, take] >= 0,
        )

    parts = _map_chunks(_chunk_spans(trials, TRIAL_CHUNK), run, threads)
    idx = np.concatenate([part[0] for part in parts])
    reds = np.concatenate([part[1] for part in parts])
    imbalances = np.concatenate([part[2] for part in parts])
    exceeded = np.concatenate([part[3] for part in parts])
    raw = 4.0 / (t_min - 1)
    return TrialBatch(
        kind="random-set",
        trials=trials,
        master_seed=master_seed,
        p=p,
        sizes=sizes[idx],
        reds=reds,
        imbalances=imbalances,
        thresholds=thresholds[idx],
        exceeded=exceeded,
        chosen_sets=tuple(family.sets[i] for i in idx),
        theoretical_bound=min(raw, 1.0),
        theoretical_bound_raw=raw,
        approx_bound=4.0 / t_min,
    )


# ---------------------------------------------------------------------------
# Quarter-plane scenario: contiguous-run adversary without materialization
# ---------------------------------------------------------------------------


def interval_worst_imbalance(bits: np.ndarray, p: float) -> tuple[float, int, int]:
    """(imbalance, start, size) of the contiguous run maximizing imbalance.

    Every quarter-plane traces a contiguous run on the diagonal antichain,
    so the adversary's raw optimum is the interval of prefix-sum extremes;
    found by direct scan in O(n).
    """
    values = bits.astype(np.float64) - p
    prefix = np.concatenate(([0.0], np.cumsum(values)))
    hi = int(np.argmax(prefix))
    lo = int(np.argmin(prefix))
    imbalance = float(prefix[hi] - prefix[lo])
    if hi == lo:
        return 0.0, 0, 1
    start, stop = (lo, hi) if lo < hi else (hi, lo)
    return abs(imbalance), start, stop - start


def interval_best_ratio(
    bits: np.ndarray, p: float, min_size: int = 2
) -> tuple[float, int, int]:
    """(ratio, start, size) maximizing imbalance/sqln(size) over runs.

    Scans run lengths in increasing order; once the global prefix range
    divided by sqln(length) can no longer beat the incumbent, all longer
    runs are ruled out and the scan stops, so the result is exact.
    """
    n = len(bits)
    if min_size < 2:
        raise ValidationError("min_size must be >= 2 so the threshold is positive")
    if n < min_size:
        raise ValidationError(f"need at least {min_size} elements, got {n}")
    values = bits.astype(np.float64) - p
    prefix = np.concatenate(([0.0], np.cumsum(values)))
    reach = float(prefix.max() - prefix.min())
    best = -1.0
    best_start = 0
    best_size = min_size
    for size in range(min_size, n + 1):
        unit = sqln(size)
        if reach <= best * unit:
            break
        diffs = np.abs(prefix[size:] - prefix[:-size])
        at = int(np.argmax(diffs))
        ratio = float(diffs[at]) / unit
        if ratio > best:
            best = ratio
            best_start = at
            best_size = size
    return best, best_start, best_size


def simulate_quarterplane(
    n: int,
    p: float,
    trials: int,
    master_seed: int,
    t_min: int = 2,
    threads: int = 1,
) -> TrialBatch:
    """Adversarial run selection on the diagonal antichain of n points.

    Per trial the adversary picks the contiguous run maximizing the ratio
    imbalance/sqln(size) among runs of at least t_min points; a trial is a
    "failure" when that ratio reaches 1, i.e. the imbalance meets the
    deterministic-scale threshold 1*sqln(size). No finite bound applies to
    this support (its singleton count alone defeats every d), which is
    exactly what the reported rates demonstrate.
    """
    _check_p(p)
    if n < max(t_min, 2):
        raise ValidationError(f"n must be >= {max(t_min, 2)}")

    def run(start: int, stop: int) -> tuple:
        count = stop - start
        sizes = np.empty(count, dtype=np.int64)
        reds = np.empty(count, dtype=np.int64)
        imbalances = np.empty(count)
        masks: list[int] = []
        for i in range(start, stop):
            bits = _red_bits(n, p, trial_seed(master_seed, i))
            ratio, at, size = interval_best_ratio(bits, p, min_size=t_min)
            sizes[i - start] = size
            reds[i - start] = int(bits[at : at + size].sum())
            imbalances[i - start] = ratio * sqln(size)
            masks.append(((1 << size) - 1) << at)
        return sizes, reds, imbalances, masks

    parts = _map_chunks(_chunk_spans(trials, TRIAL_CHUNK), run, threads)
    sizes = np.concatenate([part[0] for part in parts])
    reds = np.concatenate([part[1] for part in parts])
    imbalances = np.concatenate([part[2] for part in parts])
    masks = tuple(mask for part in parts for mask in part[3])
    thresholds = _sqln_vec(sizes.astype(np.float64))
    return TrialBatch(
        kind="quarterplane",
        trials=trials,
        master_seed=master_seed,
        p=p,
        sizes=sizes,
        reds=reds,
        imbalances=imbalances,
        thresholds=thresholds,
        exceeded=imbalances >= thresholds,
        chosen_sets=masks,
        theoretical_bound=None,
        theoretical_bound_raw=None,
    )
