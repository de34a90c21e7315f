from __future__ import annotations

import random
from functools import lru_cache

from uidim import family_from_masks, ground_set


@lru_cache(maxsize=None)
def ground(m: int):
    return ground_set(tuple(f"e{i}" for i in range(m)))


def random_family(rng: random.Random, m: int, max_members: int = 6, min_members: int = 0):
    k = rng.randint(min_members, max_members)
    masks = {rng.randrange(1 << m) for _ in range(k)}
    if len(masks) < min_members:
        masks.add((1 << m) - 1)
    return family_from_masks(ground(m), masks)


def random_chain_masks(rng: random.Random, m: int, length: int) -> list[int]:
    order = list(range(m))
    rng.shuffle(order)
    cuts = sorted(rng.sample(range(1, m + 1), min(length, m)))
    masks = []
    for cut in cuts:
        mask = 0
        for b in order[:cut]:
            mask |= 1 << b
        masks.append(mask)
    return masks
