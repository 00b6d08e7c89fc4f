"""Rights vocabulary and implication lattice for Montreal Data License grants.

The MDL-1.0 vocabulary splits into two families:

* four rights over the data itself — ``access``, ``label``, ``distribute``,
  ``represent``;
* seven rights to use the data in conjunction with models — ``benchmark``
  (evaluation without training), ``benchmark-trained`` (a model is trained
  on the data so as to evaluate it), ``research``, ``publish``, ``internal``,
  ``output-commercial`` and ``model-commercial``.

Rights imply one another: publishing research models implies the research
right, the commercial rights imply the internal ones, and every right
implies access to the data. :func:`closure` extends a grant with everything
it implies, :func:`meet` computes the largest grant permitted by two source
licenses of a combined dataset, and :func:`denote` maps a grant to the set
of atomic acts (:class:`Capability`) it permits.

Restrictions (designated parties, no sub-licensing, attribution,
confidentiality, ethical exclusions) are conjunctive side conditions; they
never participate in closure.

All types are immutable values and every operation is a pure function, so
the module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Capability",
    "DataRight",
    "GrantError",
    "GrantSet",
    "ModelRight",
    "Restriction",
    "RestrictionKind",
    "Right",
    "ALL_CAPABILITIES",
    "ALL_RIGHTS",
    "CAPABILITY_NAMES",
    "EMPTY_GRANT",
    "FULL_GRANT",
    "RESTRICTION_NAMES",
    "RIGHT_DEFINITIONS",
    "RIGHT_NAMES",
    "closure",
    "denote",
    "implied_rights",
    "meet",
    "merge_restrictions",
    "right_capabilities",
    "right_from_token",
]


class GrantError(ValueError):
    """An invalid grant: unknown token, bad payload, or conflicting restrictions."""


class DataRight(Enum):
    """Rights over the data itself, in canonical serialization order."""

    ACCESS = "access"
    LABELLING = "label"
    DISTRIBUTE = "distribute"
    REPRESENT = "represent"


class ModelRight(Enum):
    """Rights to use the data in conjunction with models, in canonical order."""

    BENCHMARK = "benchmark"
    BENCHMARK_TRAINED = "benchmark-trained"
    RESEARCH = "research"
    PUBLISH = "publish"
    INTERNAL_USE = "internal"
    OUTPUT_COMMERCIAL = "output-commercial"
    MODEL_COMMERCIAL = "model-commercial"


Right = DataRight | ModelRight

ALL_RIGHTS: tuple[Right, ...] = tuple(DataRight) + tuple(ModelRight)

_RIGHT_INDEX = {right: i for i, right in enumerate(ALL_RIGHTS)}

_TOKEN_TO_RIGHT: dict[str, Right] = {right.value: right for right in ALL_RIGHTS}


def right_from_token(token: str) -> Right:
    """Resolve a serialized right token (``"publish"``, ``"label"``, ...)."""
    try:
        return _TOKEN_TO_RIGHT[token]
    except KeyError:
        raise GrantError(f"unknown right token: {token!r}") from None


RIGHT_NAMES: dict[Right, str] = {
    DataRight.ACCESS: "Access",
    DataRight.LABELLING: "Labelling",
    DataRight.DISTRIBUTE: "Distribute",
    DataRight.REPRESENT: "Represent",
    ModelRight.BENCHMARK: "Benchmark (case 1)",
    ModelRight.BENCHMARK_TRAINED: "Benchmark (case 2)",
    ModelRight.RESEARCH: "Research",
    ModelRight.PUBLISH: "Publish",
    ModelRight.INTERNAL_USE: "Internal Use",
    ModelRight.OUTPUT_COMMERCIAL: "Output Commercialization",
    ModelRight.MODEL_COMMERCIAL: "Model Commercialization",
}

# Definition text per right, as published in the MDL-1.0 rights matrix.
# Wording is preserved verbatim, including its typographical quirks.
RIGHT_DEFINITIONS: dict[Right, str] = {
    DataRight.ACCESS: (
        "To access, view and/or download the Data to view it and evaluate it "
        "(evaluation algorithms may be exposed to it, but no Untrained Models)."
    ),
    DataRight.LABELLING: (
        "To build upon Data by adding tags, labels or other metadata to the "
        "dataset or subsets of the Data."
    ),
    DataRight.DISTRIBUTE: "Make all or part of the Data available to third parties.",
    DataRight.REPRESENT: (
        "Transform the data into a new representation, thereby re-representing "
        "each data element in a way that mimics the effects of the initial data "
        "itself (i.e. the purpose or end-result consists of a suitable "
        "alternative to such Data)."
    ),
    ModelRight.BENCHMARK: (
        "Without training a model: use the Data to measure the performance of a "
        "Trained or Untrained Model, without however having the right to "
        "carry-over weights, code or architecture or implement any modifications "
        "resulting from such evaluation."
    ),
    ModelRight.BENCHMARK_TRAINED: (
        "To access the Data, use the Data as training data to evaluate the "
        "efficiency of different Untrained Models, algorithms and structures, "
        "but excludes reuse of the Trained Model, except to show the results of "
        "the Training."
    ),
    ModelRight.RESEARCH: (
        "To access the Data, use the Data to create or improve Models, but "
        "without the right to use the Output or resulting Trained Model for any "
        "purpose other than evaluating the Model Research under the same terms."
    ),
    ModelRight.PUBLISH: (
        "To make available to third parties the Models resulting from Research, "
        "provided however that third parties accessing such Trained Models have "
        "the right to use them for Research or Publication only."
    ),
    ModelRight.INTERNAL_USE: (
        "To access the Data, use the Data to create or improve Models and "
        "resulting Output, but without the right to Output Commercialization or "
        "Model Commercialization. The Output can be used internally for any "
        "purpose, but not made available to Third Parties or for their benefit."
    ),
    ModelRight.OUTPUT_COMMERCIAL: (
        "To access the Data, use the Data to create or improve Models and "
        "resulting Output, with the right to make the Output available to Third "
        "Parties or to use it for their benefit. The Trained Model itself "
        "however cannot be not made available to Third Parties. This would "
        "allow SaaS commercialization."
    ),
    ModelRight.MODEL_COMMERCIAL: (
        "Make a Trained Model itself available to a Third Party, or embodying "
        "the Trained Model in a product or service, with or without direct "
        "access to the Output for such Third Party."
    ),
}


class Capability(Enum):
    """Atomic permitted acts; the semantic denotation of a grant."""

    VIEW_DOWNLOAD = "view-download"
    RUN_EVALUATION_ALGORITHMS = "run-evaluation-algorithms"
    CREATE_LABELS = "create-labels"
    DISTRIBUTE_DATA = "distribute-data"
    CREATE_REPRESENTATION = "create-representation"
    TRAIN_MODEL = "train-model"
    MEASURE_PERFORMANCE = "measure-performance"
    SHOW_TRAINING_RESULTS = "show-training-results"
    RETAIN_TRAINED_MODEL = "retain-trained-model"
    USE_OUTPUT_FOR_EVALUATION_ONLY = "use-output-evaluation-only"
    USE_OUTPUT_INTERNALLY = "use-output-internally"
    PUBLISH_MODEL_RESTRICTED = "publish-model-restricted"
    PROVIDE_OUTPUT_TO_THIRD_PARTIES = "provide-output-third-party"
    PROVIDE_MODEL_TO_THIRD_PARTIES = "provide-model-third-party"
    EMBED_MODEL_IN_PRODUCT = "embed-model-in-product"


ALL_CAPABILITIES: tuple[Capability, ...] = tuple(Capability)

CAPABILITY_NAMES: dict[Capability, str] = {
    Capability.VIEW_DOWNLOAD: "Access, view and/or download the Data",
    Capability.RUN_EVALUATION_ALGORITHMS: "Expose evaluation algorithms to the Data",
    Capability.CREATE_LABELS: "Add tags, labels or other metadata to the Data",
    Capability.DISTRIBUTE_DATA: "Make all or part of the Data available to third parties",
    Capability.CREATE_REPRESENTATION: "Transform the Data into a Representation",
    Capability.TRAIN_MODEL: "Train a Model on the Data",
    Capability.MEASURE_PERFORMANCE: "Measure the performance of a Trained or Untrained Model",
    Capability.SHOW_TRAINING_RESULTS: "Show the results of the Training",
    Capability.RETAIN_TRAINED_MODEL: "Retain the Trained Model and its weights",
    Capability.USE_OUTPUT_FOR_EVALUATION_ONLY: "Use Output solely to evaluate the Model",
    Capability.USE_OUTPUT_INTERNALLY: "Use Output internally for any purpose",
    Capability.PUBLISH_MODEL_RESTRICTED: (
        "Make the Trained Model available to third parties for Research or Publication only"
    ),
    Capability.PROVIDE_OUTPUT_TO_THIRD_PARTIES: (
        "Make Output available to third parties or use it for their benefit"
    ),
    Capability.PROVIDE_MODEL_TO_THIRD_PARTIES: (
        "Make the Trained Model itself available to a third party"
    ),
    Capability.EMBED_MODEL_IN_PRODUCT: "Embody the Trained Model in a product or service",
}


class RestrictionKind(Enum):
    """Restriction vocabulary, in canonical serialization order."""

    DESIGNATED_PARTIES = "parties"
    NO_SUBLICENSE = "no-sublicense"
    ATTRIBUTION_REQUIRED = "attribution"
    CONFIDENTIAL = "confidential"
    ETHICAL_EXCLUSION = "exclude"


_PAYLOAD_KINDS = {RestrictionKind.DESIGNATED_PARTIES, RestrictionKind.ETHICAL_EXCLUSION}

_KIND_INDEX = {kind: i for i, kind in enumerate(RestrictionKind)}


@dataclass(frozen=True)
class Restriction:
    """A conjunctive side condition attached to a grant.

    ``payload`` holds designated-party identifiers or excluded-domain tags
    (opaque, case-sensitive strings); it is stored deduplicated and sorted.
    An empty designated-parties payload is representable but only ever
    produced by combining licenses whose party lists are disjoint — it means
    nobody may exercise the grant, and it has no expression syntax.
    """

    kind: RestrictionKind
    payload: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        canonical = tuple(sorted(set(self.payload)))
        if canonical != self.payload:
            object.__setattr__(self, "payload", canonical)
        if self.kind not in _PAYLOAD_KINDS:
            if self.payload:
                raise GrantError(f"restriction {self.kind.value!r} takes no payload")
        elif self.kind is RestrictionKind.ETHICAL_EXCLUSION and not self.payload:
            raise GrantError("ethical exclusion requires at least one excluded domain")
        if any(not item for item in self.payload):
            raise GrantError(f"restriction {self.kind.value!r} has an empty identifier")

    @classmethod
    def designated_parties(cls, *parties: str) -> Restriction:
        return cls(RestrictionKind.DESIGNATED_PARTIES, tuple(parties))

    @classmethod
    def no_sublicense(cls) -> Restriction:
        return cls(RestrictionKind.NO_SUBLICENSE)

    @classmethod
    def attribution_required(cls) -> Restriction:
        return cls(RestrictionKind.ATTRIBUTION_REQUIRED)

    @classmethod
    def confidential(cls) -> Restriction:
        return cls(RestrictionKind.CONFIDENTIAL)

    @classmethod
    def ethical_exclusion(cls, *domains: str) -> Restriction:
        return cls(RestrictionKind.ETHICAL_EXCLUSION, tuple(domains))


RESTRICTION_NAMES: dict[RestrictionKind, str] = {
    RestrictionKind.DESIGNATED_PARTIES: "Designated parties",
    RestrictionKind.NO_SUBLICENSE: "No sub-licensing",
    RestrictionKind.ATTRIBUTION_REQUIRED: "Attribution required",
    RestrictionKind.CONFIDENTIAL: "Confidential use",
    RestrictionKind.ETHICAL_EXCLUSION: "Ethical exclusions",
}


@dataclass(frozen=True)
class GrantSet:
    """The rights and restrictions a licensor confers on a dataset.

    An empty grant is valid and means all rights reserved. Attribution and
    confidentiality are mutually exclusive: attribution publicizes the
    source, confidentiality forbids public reference to it.
    """

    data_rights: frozenset[DataRight] = frozenset()
    model_rights: frozenset[ModelRight] = frozenset()
    restrictions: frozenset[Restriction] = frozenset()
    version: str = "MDL-1.0"

    def __post_init__(self) -> None:
        object.__setattr__(self, "data_rights", frozenset(self.data_rights))
        object.__setattr__(self, "model_rights", frozenset(self.model_rights))
        object.__setattr__(self, "restrictions", frozenset(self.restrictions))
        kinds = [r.kind for r in self.restrictions]
        if len(kinds) != len(set(kinds)):
            raise GrantError("at most one restriction of each kind is allowed")
        if self.has_restriction(RestrictionKind.ATTRIBUTION_REQUIRED) and self.has_restriction(
            RestrictionKind.CONFIDENTIAL
        ):
            raise GrantError("attribution and confidential are mutually exclusive")

    @property
    def rights(self) -> frozenset[Right]:
        return frozenset(self.data_rights) | frozenset(self.model_rights)

    def rights_in_order(self) -> tuple[Right, ...]:
        return tuple(sorted(self.rights, key=_RIGHT_INDEX.__getitem__))

    def restrictions_in_order(self) -> tuple[Restriction, ...]:
        return tuple(sorted(self.restrictions, key=lambda r: _KIND_INDEX[r.kind]))

    def restriction(self, kind: RestrictionKind) -> Restriction | None:
        for r in self.restrictions:
            if r.kind is kind:
                return r
        return None

    def has_restriction(self, kind: RestrictionKind) -> bool:
        return self.restriction(kind) is not None

    def is_empty(self) -> bool:
        return not (self.data_rights or self.model_rights or self.restrictions)


EMPTY_GRANT = GrantSet()

FULL_GRANT = GrantSet(data_rights=frozenset(DataRight), model_rights=frozenset(ModelRight))


# Direct implication edges of the lattice. The chain bottoms out at access:
# every model right reaches it transitively, matching the rights matrix in
# which each model right begins by granting access to the data.
_DIRECT_IMPLICATIONS: dict[Right, frozenset[Right]] = {
    DataRight.ACCESS: frozenset(),
    DataRight.LABELLING: frozenset({DataRight.ACCESS}),
    DataRight.DISTRIBUTE: frozenset({DataRight.ACCESS}),
    DataRight.REPRESENT: frozenset({DataRight.ACCESS}),
    ModelRight.BENCHMARK: frozenset({DataRight.ACCESS}),
    ModelRight.BENCHMARK_TRAINED: frozenset({ModelRight.BENCHMARK}),
    ModelRight.RESEARCH: frozenset({ModelRight.BENCHMARK_TRAINED}),
    ModelRight.PUBLISH: frozenset({ModelRight.RESEARCH}),
    ModelRight.INTERNAL_USE: frozenset({ModelRight.RESEARCH}),
    ModelRight.OUTPUT_COMMERCIAL: frozenset({ModelRight.INTERNAL_USE}),
    ModelRight.MODEL_COMMERCIAL: frozenset(
        {ModelRight.OUTPUT_COMMERCIAL, ModelRight.PUBLISH}
    ),
}


def implied_rights(right: Right) -> frozenset[Right]:
    """Direct implication edges out of ``right`` (non-transitive)."""
    return _DIRECT_IMPLICATIONS[right]


def _reachable(right: Right) -> frozenset[Right]:
    seen: set[Right] = {right}
    stack: list[Right] = [right]
    while stack:
        for implied in _DIRECT_IMPLICATIONS[stack.pop()]:
            if implied not in seen:
                seen.add(implied)
                stack.append(implied)
    return frozenset(seen)


_REACHABLE: dict[Right, frozenset[Right]] = {r: _reachable(r) for r in ALL_RIGHTS}


# Capability atoms conferred by each right alone (non-transitive; compose
# with closure to obtain the full denotation of a grant).
_RIGHT_CAPABILITIES: dict[Right, frozenset[Capability]] = {
    DataRight.ACCESS: frozenset(
        {Capability.VIEW_DOWNLOAD, Capability.RUN_EVALUATION_ALGORITHMS}
    ),
    DataRight.LABELLING: frozenset({Capability.CREATE_LABELS}),
    DataRight.DISTRIBUTE: frozenset({Capability.DISTRIBUTE_DATA}),
    DataRight.REPRESENT: frozenset({Capability.CREATE_REPRESENTATION}),
    ModelRight.BENCHMARK: frozenset({Capability.MEASURE_PERFORMANCE}),
    ModelRight.BENCHMARK_TRAINED: frozenset(
        {
            Capability.TRAIN_MODEL,
            Capability.MEASURE_PERFORMANCE,
            Capability.SHOW_TRAINING_RESULTS,
        }
    ),
    ModelRight.RESEARCH: frozenset(
        {
            Capability.TRAIN_MODEL,
            Capability.USE_OUTPUT_FOR_EVALUATION_ONLY,
            Capability.RETAIN_TRAINED_MODEL,
        }
    ),
    ModelRight.PUBLISH: frozenset({Capability.PUBLISH_MODEL_RESTRICTED}),
    ModelRight.INTERNAL_USE: frozenset(
        {
            Capability.TRAIN_MODEL,
            Capability.RETAIN_TRAINED_MODEL,
            Capability.USE_OUTPUT_INTERNALLY,
        }
    ),
    ModelRight.OUTPUT_COMMERCIAL: frozenset(
        {Capability.PROVIDE_OUTPUT_TO_THIRD_PARTIES}
    ),
    ModelRight.MODEL_COMMERCIAL: frozenset(
        {Capability.PROVIDE_MODEL_TO_THIRD_PARTIES, Capability.EMBED_MODEL_IN_PRODUCT}
    ),
}


def right_capabilities(right: Right) -> frozenset[Capability]:
    """Capability atoms conferred by ``right`` alone (non-transitive)."""
    return _RIGHT_CAPABILITIES[right]


def closure(grant: GrantSet) -> GrantSet:
    """Extend a grant with every right it implies; restrictions unchanged.

    Idempotent, extensive and monotone.
    """
    reached: set[Right] = set()
    for right in grant.rights:
        reached |= _REACHABLE[right]
    return GrantSet(
        data_rights=frozenset(r for r in reached if isinstance(r, DataRight)),
        model_rights=frozenset(r for r in reached if isinstance(r, ModelRight)),
        restrictions=grant.restrictions,
        version=grant.version,
    )


def denote(grant: GrantSet) -> frozenset[Capability]:
    """The set of atomic acts a grant permits: capabilities of its closure."""
    caps: set[Capability] = set()
    for right in closure(grant).rights:
        caps |= _RIGHT_CAPABILITIES[right]
    return frozenset(caps)


def merge_restrictions(
    restriction_sets: list[frozenset[Restriction]],
) -> frozenset[Restriction]:
    """Conjunction of restriction sets, as carried by a combined dataset.

    Designated-party payloads are intersected (a combined use must satisfy
    every source), ethical exclusions are unioned, and when attribution and
    confidentiality meet, confidentiality prevails. The result is
    independent of the order of the inputs.
    """
    parties: frozenset[str] | None = None
    excluded: set[str] = set()
    kinds: set[RestrictionKind] = set()
    for restrictions in restriction_sets:
        for r in restrictions:
            kinds.add(r.kind)
            if r.kind is RestrictionKind.DESIGNATED_PARTIES:
                members = frozenset(r.payload)
                parties = members if parties is None else parties & members
            elif r.kind is RestrictionKind.ETHICAL_EXCLUSION:
                excluded.update(r.payload)

    merged: set[Restriction] = set()
    if parties is not None:
        merged.add(Restriction(RestrictionKind.DESIGNATED_PARTIES, tuple(parties)))
    if RestrictionKind.NO_SUBLICENSE in kinds:
        merged.add(Restriction.no_sublicense())
    if RestrictionKind.CONFIDENTIAL in kinds:
        merged.add(Restriction.confidential())
    elif RestrictionKind.ATTRIBUTION_REQUIRED in kinds:
        merged.add(Restriction.attribution_required())
    if excluded:
        merged.add(Restriction(RestrictionKind.ETHICAL_EXCLUSION, tuple(excluded)))
    return frozenset(merged)


def meet(a: GrantSet, b: GrantSet) -> GrantSet:
    """The greatest grant permitted by both sources.

    Rights are the intersection of the two closures; restrictions are
    merged per :func:`merge_restrictions`. Commutative, associative, and
    idempotent on closed grants.
    """
    ca, cb = closure(a), closure(b)
    return GrantSet(
        data_rights=ca.data_rights & cb.data_rights,
        model_rights=ca.model_rights & cb.model_rights,
        restrictions=merge_restrictions([a.restrictions, b.restrictions]),
    )
