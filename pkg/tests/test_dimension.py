from __future__ import annotations

import random

import pytest

from uidim import (
    InfeasibleError,
    check_ui_vc_inequality,
    ground_set,
    halfline_family,
    is_chain,
    make_family,
    min_boundedness,
    quarterplane_family,
    restrict,
    ui_dimension_exact,
    vc_dimension_exact,
    vc_limit_from_ui,
)
from uidim.family import family_from_masks

from conftest import ground, random_chain_masks, random_family


def ui_unpruned(fam):
    """Definition-level oracle: scan every restriction of the full ground."""
    best = 1
    for hp in range(1 << fam.ground.m):
        best = max(best, min_boundedness(restrict(fam, hp)).min_d)
    return best


def vc_oracle(fam):
    """Definition-level oracle: largest |h'| with all patterns realized."""
    if not fam.sets:
        return 0
    best = 0
    for hp in range(1 << fam.ground.m):
        if len({h & hp for h in fam.sets}) == 1 << hp.bit_count():
            best = max(best, hp.bit_count())
    return best


class TestUiDimension:
    def test_chain_has_dimension_one(self):
        g = ground_set(("a", "b", "c"))
        fam = make_family(g, [["a"], ["a", "b"], ["a", "b", "c"]])
        assert ui_dimension_exact(fam).dim == 1

    def test_two_singletons(self):
        g = ground_set(("a", "b"))
        fam = make_family(g, [["a"], ["b"]])
        result = ui_dimension_exact(fam)
        assert result.dim == 2
        assert result.witness == g.mask_of(["a", "b"])

    def test_quarterplane_eight_points(self):
        fam = quarterplane_family(8)
        # eight singletons force (1+1)**(d-1) >= 8, i.e. d >= 4
        assert fam.profile[1] == 8
        assert ui_dimension_exact(fam).dim == 4

    def test_empty_family(self):
        result = ui_dimension_exact(make_family(ground_set(("a",)), []))
        assert result == (1, 0)

    def test_witness_reproduces_dimension(self):
        rng = random.Random(2)
        for _ in range(60):
            fam = random_family(rng, 8)
            result = ui_dimension_exact(fam)
            assert min_boundedness(restrict(fam, result.witness)).min_d == result.dim

    def test_pruned_enumeration_matches_full_scan(self):
        rng = random.Random(3)
        for _ in range(40):
            fam = random_family(rng, 7)
            assert ui_dimension_exact(fam).dim == ui_unpruned(fam)

    def test_at_least_min_boundedness(self):
        rng = random.Random(5)
        for _ in range(60):
            fam = random_family(rng, 9)
            assert ui_dimension_exact(fam).dim >= min_boundedness(fam).min_d

    def test_infeasible_union_raises(self):
        g = ground(16)
        fam = family_from_masks(g, [1 << i for i in range(16)])
        with pytest.raises(InfeasibleError, match="rule engine"):
            ui_dimension_exact(fam, max_elements=12)

    def test_large_ground_small_union_is_fine(self):
        g = ground(30)
        fam = family_from_masks(g, [0b1, 0b10])
        assert ui_dimension_exact(fam, max_elements=12).dim == 2


class TestChainEquivalence:
    def test_random_families_both_directions(self):
        rng = random.Random(8)
        for _ in range(300):
            fam = random_family(rng, 6)
            assert is_chain(fam) == (ui_dimension_exact(fam).dim <= 1)

    def test_chains_stay_one(self):
        rng = random.Random(9)
        for _ in range(40):
            fam = family_from_masks(ground(10), random_chain_masks(rng, 10, 6))
            assert ui_dimension_exact(fam).dim == 1


class TestRestrictionMonotonicity:
    def test_dimension_never_grows_under_restriction(self):
        rng = random.Random(12)
        for _ in range(150):
            fam = random_family(rng, 8)
            hp = rng.randrange(1 << 8)
            assert (
                ui_dimension_exact(restrict(fam, hp)).dim
                <= ui_dimension_exact(fam).dim
            )


class TestVcDimension:
    def test_powerset_shatters_itself(self):
        g = ground_set(("a", "b"))
        fam = make_family(g, [[], ["a"], ["b"], ["a", "b"]])
        result = vc_dimension_exact(fam)
        assert result.dim == 2
        assert result.witness == 0b11

    def test_empty_set_only(self):
        fam = make_family(ground_set(("a",)), [[]])
        assert vc_dimension_exact(fam) == (0, 0)

    def test_empty_family_convention(self):
        assert vc_dimension_exact(make_family(ground_set(("a",)), [])) == (0, 0)

    def test_halfline_grid_three_by_three(self):
        assert vc_dimension_exact(halfline_family(3, 3)).dim == 1

    def test_matches_definition_oracle(self):
        rng = random.Random(21)
        for _ in range(60):
            fam = random_family(rng, 6, max_members=8)
            assert vc_dimension_exact(fam).dim == vc_oracle(fam)

    def test_witness_is_shattered_and_maximal(self):
        rng = random.Random(22)
        for _ in range(40):
            fam = random_family(rng, 6, max_members=8, min_members=1)
            dim, witness = vc_dimension_exact(fam)
            assert witness.bit_count() == dim
            assert len({h & witness for h in fam.sets}) == 1 << dim
            for hp in range(1 << fam.ground.m):
                if hp.bit_count() == dim + 1:
                    assert len({h & hp for h in fam.sets}) < 1 << (dim + 1)


class TestGrowthInequality:
    def test_two_singletons_by_hand(self):
        g = ground_set(("a", "b"))
        fam = make_family(g, [["a"], ["b"]])
        # d = 2 and the full restriction has 2 sets <= 1 + 2 + 3 = 6
        assert ui_dimension_exact(fam).dim == 2
        assert len(restrict(fam, 0b11).sets) <= 6
        assert check_ui_vc_inequality(fam)

    def test_chain_restrictions_small(self):
        g = ground_set(("a", "b", "c"))
        fam = make_family(g, [["a"], ["a", "b"], ["a", "b", "c"]])
        for hp in range(8):
            assert len(restrict(fam, hp).sets) <= hp.bit_count() + 1
        assert check_ui_vc_inequality(fam)

    def test_empty_family(self):
        assert check_ui_vc_inequality(make_family(ground_set(("a",)), []))

    def test_random_families(self):
        rng = random.Random(31)
        for _ in range(80):
            assert check_ui_vc_inequality(random_family(rng, 8))

    def test_precomputed_dimension_shortcut_agrees(self):
        rng = random.Random(32)
        for _ in range(20):
            fam = random_family(rng, 7)
            d = ui_dimension_exact(fam).dim
            assert check_ui_vc_inequality(fam, ui_dim=d) == check_ui_vc_inequality(fam)


class TestUiVsVc:
    def test_vc_within_growth_ceiling(self):
        rng = random.Random(41)
        for _ in range(80):
            fam = random_family(rng, 8, min_members=1)
            ui = ui_dimension_exact(fam).dim
            assert vc_dimension_exact(fam).dim <= vc_limit_from_ui(ui)

    def test_halfline_separation(self):
        dims = []
        for rows in (2, 4, 8, 16):
            fam = halfline_family(rows, 1)
            assert vc_dimension_exact(fam).dim <= 1
            dims.append(ui_dimension_exact(fam).dim)
        assert dims == sorted(set(dims))  # strictly increasing
        assert dims[-1] > dims[0]
