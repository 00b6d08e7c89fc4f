"""Combining multiply-licensed datasets and licensing derived assets.

:func:`combine` folds any number of source grants into the largest grant
every source permits, reporting structured conflicts when restriction
merging had to make a call (attribution vs confidentiality, disjoint
designated-party lists). :func:`derived_grant` answers what license
automatically attaches to an asset produced under a grant: labelled data
and representations inherit the parent terms, models trained under
research-family rights carry same-terms research licenses, and a
commercialized model leaves the licensor free to choose terms (ethical
exclusions excepted, which follow the model downstream).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .taxonomy import (
    Capability,
    DataRight,
    GrantSet,
    ModelRight,
    Restriction,
    RestrictionKind,
    closure,
    denote,
    merge_restrictions,
)
from .expression import serialize

__all__ = [
    "AssetKind",
    "CombinationReport",
    "Conflict",
    "NotDerivable",
    "combine",
    "derived_grant",
]


class AssetKind(Enum):
    """The asset kinds a compliance question or derivation can be about."""

    DATA = "data"
    LABELLED_DATA = "labelled-data"
    REPRESENTATION = "representation"
    UNTRAINED_MODEL = "untrained-model"
    TRAINED_MODEL = "trained-model"
    OUTPUT = "output"


@dataclass(frozen=True)
class Conflict:
    """A restriction-merge rule that fired while combining sources."""

    kind: str
    detail: str
    sources: tuple[str, ...]


@dataclass(frozen=True)
class CombinationReport:
    """Effective grant for a combined dataset, with conflicts and provenance."""

    effective: GrantSet
    conflicts: tuple[Conflict, ...]
    provenance: tuple[str, ...]


def combine(
    sources: list[GrantSet], labels: list[str] | None = None
) -> CombinationReport:
    """Meet all source grants; order of sources never affects the result.

    ``labels`` names the sources in conflict reports and provenance;
    it defaults to each source's canonical expression.
    """
    if not sources:
        raise ValueError("combine requires at least one source grant")
    if labels is None:
        labels = [serialize(g) for g in sources]
    elif len(labels) != len(sources):
        raise ValueError("labels must match sources one to one")

    closed = [closure(g) for g in sources]
    data_rights = frozenset.intersection(*(g.data_rights for g in closed))
    model_rights = frozenset.intersection(*(g.model_rights for g in closed))
    restrictions = merge_restrictions([g.restrictions for g in sources])
    effective = GrantSet(
        data_rights=data_rights, model_rights=model_rights, restrictions=restrictions
    )

    conflicts: list[Conflict] = []
    attributing = [
        label
        for label, g in zip(labels, sources)
        if g.has_restriction(RestrictionKind.ATTRIBUTION_REQUIRED)
    ]
    confidential = [
        label
        for label, g in zip(labels, sources)
        if g.has_restriction(RestrictionKind.CONFIDENTIAL)
    ]
    if attributing and confidential:
        conflicts.append(
            Conflict(
                kind="attribution-vs-confidential",
                detail=(
                    "some sources require attribution while others forbid public "
                    "reference; confidentiality prevails and the attribution "
                    "requirement is dropped"
                ),
                sources=tuple(attributing + confidential),
            )
        )
    party_sources = [
        (label, g.restriction(RestrictionKind.DESIGNATED_PARTIES))
        for label, g in zip(labels, sources)
        if g.has_restriction(RestrictionKind.DESIGNATED_PARTIES)
    ]
    if party_sources:
        shared = frozenset.intersection(
            *(frozenset(r.payload) for _, r in party_sources)
        )
        if not shared:
            conflicts.append(
                Conflict(
                    kind="disjoint-designated-parties",
                    detail=(
                        "no party is designated by every source; the combined "
                        "grant is exercisable by nobody"
                    ),
                    sources=tuple(label for label, _ in party_sources),
                )
            )
    return CombinationReport(
        effective=effective, conflicts=tuple(conflicts), provenance=tuple(labels)
    )


@dataclass(frozen=True)
class NotDerivable:
    """No license attaches to the asset under the parent grant."""

    reason: str


def _ethical_exclusions_of(grant: GrantSet) -> frozenset[Restriction]:
    r = grant.restriction(RestrictionKind.ETHICAL_EXCLUSION)
    return frozenset({r}) if r is not None else frozenset()


def derived_grant(parent: GrantSet, asset: AssetKind) -> GrantSet | NotDerivable:
    """The license that automatically attaches to an asset derived under ``parent``.

    Distributed data copies, labelled data, and representations carry the
    parent's terms. A trained model carries a research license (plus publish
    when the parent may publish) under the parent's restrictions; under
    model commercialization the licensee becomes the model's licensor and
    only ethical exclusions follow the model. Training permitted solely for
    benchmark evaluation yields no retainable asset, and output is never a
    separately licensed asset — whether it may be shared is a compliance
    question, not a license of its own.
    """
    permitted = denote(parent)
    closed = closure(parent)

    if asset is AssetKind.DATA:
        if Capability.DISTRIBUTE_DATA in permitted:
            return closed
        return NotDerivable("the grant does not permit distributing the data")

    if asset is AssetKind.LABELLED_DATA:
        if Capability.CREATE_LABELS in permitted:
            return closed
        return NotDerivable("the grant does not permit labelling the data")

    if asset is AssetKind.REPRESENTATION:
        if Capability.CREATE_REPRESENTATION in permitted:
            return closed
        return NotDerivable("the grant does not permit creating a representation")

    if asset is AssetKind.UNTRAINED_MODEL:
        return NotDerivable(
            "an untrained model embodies no insight from the data; no license attaches"
        )

    if asset is AssetKind.TRAINED_MODEL:
        if Capability.TRAIN_MODEL not in permitted:
            return NotDerivable("the grant does not permit training a model")
        if ModelRight.MODEL_COMMERCIAL in closed.model_rights:
            return GrantSet(
                model_rights=frozenset(ModelRight),
                restrictions=_ethical_exclusions_of(parent),
            )
        if ModelRight.PUBLISH in closed.model_rights:
            return GrantSet(
                model_rights=frozenset({ModelRight.RESEARCH, ModelRight.PUBLISH}),
                restrictions=parent.restrictions,
            )
        if ModelRight.RESEARCH in closed.model_rights:
            return GrantSet(
                model_rights=frozenset({ModelRight.RESEARCH}),
                restrictions=parent.restrictions,
            )
        return NotDerivable(
            "training is permitted for benchmark evaluation only; the trained "
            "weights must be deleted, so no asset license attaches"
        )

    if asset is AssetKind.OUTPUT:
        return NotDerivable(
            "output is not a separately licensed asset; whether it may be used "
            "or shared is a compliance question under the data license"
        )

    raise ValueError(f"unknown asset kind: {asset!r}")
