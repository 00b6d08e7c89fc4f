"""Combination and derived-license tests."""

from __future__ import annotations

import itertools
import random

import pytest

from mdl.composer import AssetKind, NotDerivable, combine, derived_grant
from mdl.expression import parse
from mdl.taxonomy import (
    DataRight,
    GrantSet,
    ModelRight,
    Restriction,
    RestrictionKind,
    closure,
    denote,
    meet,
)

from test_taxonomy import (
    DATA_TOKENS,
    MODEL_TOKENS,
    grant_from_tokens,
    oracle_closure,
    random_grant,
    tokens_of,
)


def g(expr: str) -> GrantSet:
    return parse(expr).grant


class TestCombine:
    def test_single_source_is_closure(self):
        source = g("MDL-1.0; model: publish")
        report = combine([source])
        assert report.effective == closure(source)
        assert report.conflicts == ()

    def test_publish_with_output_commercial(self):
        report = combine(
            [g("MDL-1.0; model: publish"), g("MDL-1.0; model: output-commercial")]
        )
        assert report.effective.model_rights == frozenset(
            {ModelRight.RESEARCH, ModelRight.BENCHMARK_TRAINED, ModelRight.BENCHMARK}
        )
        assert report.effective.data_rights == frozenset({DataRight.ACCESS})
        assert report.conflicts == ()

    def test_attribution_vs_confidential_conflict(self):
        report = combine(
            [
                g("MDL-1.0; restrictions: attribution"),
                g("MDL-1.0; restrictions: confidential"),
            ]
        )
        assert report.effective.has_restriction(RestrictionKind.CONFIDENTIAL)
        assert not report.effective.has_restriction(RestrictionKind.ATTRIBUTION_REQUIRED)
        assert len(report.conflicts) == 1
        assert report.conflicts[0].kind == "attribution-vs-confidential"

    def test_disjoint_parties_conflict(self):
        report = combine(
            [
                g("MDL-1.0; restrictions: parties(acme)"),
                g("MDL-1.0; restrictions: parties(zeta)"),
            ]
        )
        parties = report.effective.restriction(RestrictionKind.DESIGNATED_PARTIES)
        assert parties is not None and parties.payload == ()
        assert [c.kind for c in report.conflicts] == ["disjoint-designated-parties"]

    def test_overlapping_parties_no_conflict(self):
        report = combine(
            [
                g("MDL-1.0; restrictions: parties(acme|zeta)"),
                g("MDL-1.0; restrictions: parties(zeta)"),
            ]
        )
        parties = report.effective.restriction(RestrictionKind.DESIGNATED_PARTIES)
        assert parties.payload == ("zeta",)
        assert report.conflicts == ()

    def test_effective_equals_fold_of_meet(self):
        rng = random.Random(5150)
        for _ in range(200):
            sources = [random_grant(rng) for _ in range(rng.randint(1, 4))]
            folded = closure(sources[0])
            for s in sources[1:]:
                folded = meet(folded, s)
            assert combine(sources).effective == folded

    def test_permutation_invariance_500(self):
        rng = random.Random(314159)
        for _ in range(500):
            sources = [random_grant(rng) for _ in range(rng.randint(2, 4))]
            baseline = combine(sources)
            shuffled = sources[:]
            rng.shuffle(shuffled)
            report = combine(shuffled)
            assert report.effective == baseline.effective
            assert sorted(c.kind for c in report.conflicts) == sorted(
                c.kind for c in baseline.conflicts
            )

    def test_effective_never_exceeds_any_source(self):
        # Exhaustive over pairs of the 2^6 model subsets above benchmark
        # case 1 and all 2^4 data subsets.
        model_pool = [
            frozenset(c)
            for n in range(len(MODEL_TOKENS[1:]) + 1)
            for c in itertools.combinations(MODEL_TOKENS[1:], n)
        ]
        data_pool = [
            frozenset(c)
            for n in range(len(DATA_TOKENS) + 1)
            for c in itertools.combinations(DATA_TOKENS, n)
        ]
        for pool in (model_pool, data_pool):
            for left, right in itertools.product(pool, pool):
                effective = combine(
                    [grant_from_tokens(left), grant_from_tokens(right)]
                ).effective
                assert tokens_of(effective) <= oracle_closure(left)
                assert tokens_of(effective) <= oracle_closure(right)

    def test_empty_sources_rejected(self):
        with pytest.raises(ValueError):
            combine([])

    def test_provenance_defaults_to_canonical_expressions(self):
        report = combine([g("MDL-1.0; model: publish"), g("MDL-1.0")])
        assert report.provenance == ("MDL-1.0; model: publish", "MDL-1.0")


class TestDerivedGrant:
    def test_trained_model_under_research(self):
        parent = g("MDL-1.0; model: research; restrictions: attribution")
        derived = derived_grant(parent, AssetKind.TRAINED_MODEL)
        assert derived == GrantSet(
            model_rights=frozenset({ModelRight.RESEARCH}),
            restrictions=frozenset({Restriction.attribution_required()}),
        )

    def test_trained_model_under_access_not_derivable(self):
        derived = derived_grant(g("MDL-1.0; data: access"), AssetKind.TRAINED_MODEL)
        assert isinstance(derived, NotDerivable)

    def test_trained_model_under_publish(self):
        derived = derived_grant(g("MDL-1.0; model: publish"), AssetKind.TRAINED_MODEL)
        assert derived == GrantSet(
            model_rights=frozenset({ModelRight.RESEARCH, ModelRight.PUBLISH})
        )

    def test_trained_model_under_internal_use_is_research_terms(self):
        derived = derived_grant(g("MDL-1.0; model: internal"), AssetKind.TRAINED_MODEL)
        assert derived == GrantSet(model_rights=frozenset({ModelRight.RESEARCH}))

    def test_trained_model_under_benchmark_trained_not_derivable(self):
        derived = derived_grant(
            g("MDL-1.0; model: benchmark-trained"), AssetKind.TRAINED_MODEL
        )
        assert isinstance(derived, NotDerivable)
        assert "deleted" in derived.reason

    def test_trained_model_under_model_commercial_full_escape(self):
        parent = g(
            "MDL-1.0; model: model-commercial; "
            "restrictions: attribution, exclude(military)"
        )
        derived = derived_grant(parent, AssetKind.TRAINED_MODEL)
        assert derived.model_rights == frozenset(ModelRight)
        assert derived.restrictions == frozenset(
            {Restriction.ethical_exclusion("military")}
        )

    def test_labelled_data_same_terms(self):
        parent = g("MDL-1.0; data: access, label; restrictions: confidential")
        derived = derived_grant(parent, AssetKind.LABELLED_DATA)
        assert derived == closure(parent)

    def test_representation_same_terms(self):
        parent = g("MDL-1.0; data: represent")
        assert derived_grant(parent, AssetKind.REPRESENTATION) == closure(parent)

    def test_distributed_data_same_terms(self):
        parent = g("MDL-1.0; data: distribute; restrictions: no-sublicense")
        assert derived_grant(parent, AssetKind.DATA) == closure(parent)

    def test_data_without_distribute_not_derivable(self):
        assert isinstance(
            derived_grant(g("MDL-1.0; data: access"), AssetKind.DATA), NotDerivable
        )

    def test_untrained_model_never_derivable(self):
        assert isinstance(
            derived_grant(g("MDL-1.0; model: model-commercial"), AssetKind.UNTRAINED_MODEL),
            NotDerivable,
        )

    def test_output_never_derivable(self):
        assert isinstance(
            derived_grant(g("MDL-1.0; model: output-commercial"), AssetKind.OUTPUT),
            NotDerivable,
        )

    def test_derived_bounded_by_parent_except_model_commercial(self):
        rng = random.Random(2718)
        for _ in range(300):
            parent = random_grant(rng)
            for asset in AssetKind:
                derived = derived_grant(parent, asset)
                if isinstance(derived, NotDerivable):
                    continue
                if ModelRight.MODEL_COMMERCIAL in closure(parent).model_rights:
                    continue
                assert denote(derived) <= denote(parent)

    def test_research_chain_propagates_unbounded(self):
        generation = g("MDL-1.0; model: publish; restrictions: exclude(military)")
        for _ in range(5):
            derived = derived_grant(generation, AssetKind.TRAINED_MODEL)
            assert isinstance(derived, GrantSet)
            assert ModelRight.RESEARCH in derived.model_rights
            generation = derived
