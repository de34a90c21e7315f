from __future__ import annotations

import math
import random

import numpy as np
import pytest

from uidim import (
    ValidationError,
    ground_set,
    make_family,
    massart_bound,
    min_boundedness,
    rademacher_exact,
    rademacher_mc,
    slice_bound,
    vc_rad_bound,
)
from uidim.family import family_from_masks
from uidim.sampling import _red_bits

from conftest import ground, random_family


class TestExact:
    def test_single_full_set_is_zero(self):
        g = ground(5)
        fam = family_from_masks(g, [g.full_mask])
        assert rademacher_exact(fam).value == 0.0

    def test_empty_plus_singleton(self):
        fam = make_family(ground_set(("a",)), [[], ["a"]])
        assert rademacher_exact(fam).value == 0.5  # E[max(0, s)] over s = +-1

    def test_two_singletons(self):
        fam = make_family(ground_set(("a", "b")), [["a"], ["b"]])
        assert rademacher_exact(fam).value == 0.5  # (1+1+1-1)/4

    def test_value_is_exact_dyadic(self):
        rng = random.Random(3)
        for _ in range(10):
            fam = random_family(rng, 6, min_members=1)
            u = fam.union_mask.bit_count()
            value = rademacher_exact(fam).value
            assert value * (1 << u) == round(value * (1 << u))

    def test_brute_force_oracle(self):
        rng = random.Random(4)
        for _ in range(15):
            fam = random_family(rng, 5, min_members=1)
            m = fam.ground.m
            total = 0.0
            for pattern in range(1 << m):
                signs = [1 if pattern >> i & 1 else -1 for i in range(m)]
                total += max(
                    sum(signs[i] for i in range(m) if h >> i & 1) for h in fam.sets
                )
            assert rademacher_exact(fam).value == pytest.approx(total / (1 << m))

    def test_monotone_under_family_growth(self):
        rng = random.Random(5)
        g = ground(8)
        for _ in range(15):
            masks = [rng.randrange(1 << 8) for _ in range(5)]
            small = family_from_masks(g, masks[:2])
            large = family_from_masks(g, masks)
            assert rademacher_exact(large).value >= rademacher_exact(small).value

    def test_empty_family_rejected(self):
        with pytest.raises(ValidationError, match="empty"):
            rademacher_exact(make_family(ground_set(("a",)), []))

    def test_infeasible_span(self):
        g = ground(24)
        fam = family_from_masks(g, [g.full_mask, 1])
        with pytest.raises(Exception, match="Monte Carlo"):
            rademacher_exact(fam, max_elements=10)


class TestMonteCarlo:
    def test_single_full_set_near_zero(self):
        g = ground(6)
        fam = family_from_masks(g, [g.full_mask])
        report = rademacher_mc(fam, 20000, seed=1)
        assert abs(report.value) <= 3 * report.stderr + 1e-12

    def test_matches_exact_within_4_se(self):
        rng = random.Random(7)
        for _ in range(10):
            fam = random_family(rng, 8, min_members=1)
            exact = rademacher_exact(fam).value
            mc = rademacher_mc(fam, 20000, seed=8)
            assert abs(mc.value - exact) <= 4 * mc.stderr + 1e-9

    def test_reproducible(self):
        fam = make_family(ground_set(("a", "b")), [["a"], ["b"]])
        one = rademacher_mc(fam, 5000, seed=5)
        two = rademacher_mc(fam, 5000, seed=5)
        assert one.value == two.value

    def test_thread_invariance(self):
        rng = random.Random(9)
        fam = random_family(rng, 10, min_members=2)
        one = rademacher_mc(fam, 30000, seed=6)
        two = rademacher_mc(fam, 30000, seed=6, threads=3)
        assert one.value == two.value
        assert one.stderr == two.stderr


class TestBounds:
    def test_massart_trivial_cases(self):
        assert massart_bound(1, 3.0) == 0.0
        assert massart_bound(9, 0.0) == 0.0

    def test_massart_nine_vectors(self):
        assert massart_bound(9, math.sqrt(2)) == pytest.approx(
            math.sqrt(2) * math.sqrt(2 * math.log(9))
        )
        assert massart_bound(9, math.sqrt(2)) == pytest.approx(2.9646, abs=1e-4)

    def test_slice_at_d_one_vanishes(self):
        for j in (1, 2, 10, 100):
            assert slice_bound(j, 1) == 0.0

    def test_slice_value(self):
        assert slice_bound(1, 3) == pytest.approx(math.sqrt(4 * math.log(2)))
        assert slice_bound(1, 3) == pytest.approx(1.6651, abs=1e-4)

    def test_slice_is_massart_specialization(self):
        for j in range(1, 9):
            for d in range(1, 6):
                assert slice_bound(j, d) == pytest.approx(
                    massart_bound((j + 1) ** (d - 1), math.sqrt(j))
                )

    def test_vc_bound_at_full_dimension(self):
        for m in (3, 10, 50):
            assert vc_rad_bound(m, m) == pytest.approx(m * math.sqrt(2))

    def test_vc_bound_value(self):
        assert vc_rad_bound(2, 100) == pytest.approx(
            math.sqrt(100 * 4 * math.log(math.e * 50))
        )
        assert vc_rad_bound(2, 100) == pytest.approx(44.326, abs=1e-3)

    def test_vc_bound_monotone_in_m(self):
        values = [vc_rad_bound(1, m) for m in range(3, 30)]
        assert values == sorted(values)
        assert values[0] > 0

    def test_vc_bound_domain(self):
        with pytest.raises(ValidationError):
            vc_rad_bound(5, 4)
        with pytest.raises(ValidationError):
            vc_rad_bound(0, 4)


class TestDominationProperties:
    def test_massart_dominates_exact(self):
        rng = random.Random(11)
        for _ in range(25):
            fam = random_family(rng, 9, min_members=1)
            report = rademacher_exact(fam)
            assert report.value <= report.massart + 1e-9

    def test_slice_bound_dominates_slices(self):
        rng = random.Random(12)
        for _ in range(20):
            fam = random_family(rng, 9, min_members=1)
            report = rademacher_exact(fam, include_slices=True)
            d = min_boundedness(fam).min_d
            for j, count, exact, bound in report.slices:
                assert count <= (j + 1) ** (d - 1)
                assert exact <= bound + 1e-9


class TestSignSymmetry:
    def test_red_minus_uncolored_equals_signed_sum(self):
        # +1 for red, -1 for uncolored: reds - uncolored == sum of signs
        rng = random.Random(13)
        for seed in range(20):
            m = 12
            bits = _red_bits(m, 0.5, seed)
            signs = [1 if bits[i] else -1 for i in range(m)]
            subset = rng.randrange(1 << m)
            reds = sum(1 for i in range(m) if subset >> i & 1 and bits[i])
            uncolored = sum(1 for i in range(m) if subset >> i & 1 and not bits[i])
            assert reds - uncolored == sum(
                signs[i] for i in range(m) if subset >> i & 1
            )
