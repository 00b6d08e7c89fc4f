"""Compliance checking: is a concrete proposed use permitted under a grant?

A query names the atomic act (:class:`~mdl.taxonomy.Capability`), the asset
it concerns, and optional context: the acting party, the field of use, and
whether sub-licensing is involved. Restriction checks run before capability
checks — an excluded field forbids even viewing the data — and a permitted
act may carry obligations (attribute, keep confidential, distribute under
the same terms, delete trained weights after a benchmark evaluation, pass
research/publication-only terms downstream).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .composer import AssetKind
from .taxonomy import (
    ALL_CAPABILITIES,
    Capability,
    GrantSet,
    RestrictionKind,
    Right,
    closure,
    denote,
    right_capabilities,
)

__all__ = [
    "ActionQuery",
    "CAPABILITY_ASSETS",
    "Decision",
    "Obligation",
    "QueryError",
    "Verdict",
    "check",
    "default_asset",
    "scenario_table",
]


class QueryError(ValueError):
    """A malformed action query, e.g. a capability/asset mismatch."""


class Verdict(Enum):
    PERMITTED = "permitted"
    FORBIDDEN = "forbidden"
    PERMITTED_WITH_OBLIGATIONS = "permitted-with-obligations"


class Obligation(Enum):
    ATTRIBUTE = "attribute"
    SAME_TERMS_ON_DISTRIBUTION = "same-terms-on-distribution"
    KEEP_CONFIDENTIAL = "keep-confidential"
    DELETE_TRAINED_WEIGHTS_AFTER_EVALUATION = "delete-trained-weights-after-evaluation"
    DOWNSTREAM_RESEARCH_PUBLICATION_ONLY = "downstream-research-publication-only"


OBLIGATION_DESCRIPTIONS: dict[Obligation, str] = {
    Obligation.ATTRIBUTE: (
        "Make commercially reasonable efforts to link to the source of the Data."
    ),
    Obligation.SAME_TERMS_ON_DISTRIBUTION: (
        "Any distribution of all or part of the Data shall be done under the "
        "same terms as those of this License."
    ),
    Obligation.KEEP_CONFIDENTIAL: (
        "Do not publicly refer to Licensor and/or the source of the Data."
    ),
    Obligation.DELETE_TRAINED_WEIGHTS_AFTER_EVALUATION: (
        "The weights of a Trained Model trained to evaluate it must be deleted; "
        "weights, code or architecture may not be carried over."
    ),
    Obligation.DOWNSTREAM_RESEARCH_PUBLICATION_ONLY: (
        "Third parties accessing the Trained Model may use it for Research or "
        "Publication only."
    ),
}

# Assets each capability can meaningfully be queried against; the first
# entry is the neutral default used by scenario tables and the CLI.
CAPABILITY_ASSETS: dict[Capability, tuple[AssetKind, ...]] = {
    Capability.VIEW_DOWNLOAD: (AssetKind.DATA,),
    Capability.RUN_EVALUATION_ALGORITHMS: (AssetKind.DATA,),
    Capability.CREATE_LABELS: (AssetKind.DATA,),
    Capability.DISTRIBUTE_DATA: (AssetKind.DATA,),
    Capability.CREATE_REPRESENTATION: (AssetKind.DATA,),
    Capability.TRAIN_MODEL: (AssetKind.UNTRAINED_MODEL, AssetKind.DATA),
    Capability.MEASURE_PERFORMANCE: (AssetKind.TRAINED_MODEL, AssetKind.UNTRAINED_MODEL),
    Capability.SHOW_TRAINING_RESULTS: (AssetKind.TRAINED_MODEL, AssetKind.OUTPUT),
    Capability.RETAIN_TRAINED_MODEL: (AssetKind.TRAINED_MODEL,),
    Capability.USE_OUTPUT_FOR_EVALUATION_ONLY: (AssetKind.OUTPUT,),
    Capability.USE_OUTPUT_INTERNALLY: (AssetKind.OUTPUT,),
    Capability.PUBLISH_MODEL_RESTRICTED: (AssetKind.TRAINED_MODEL,),
    Capability.PROVIDE_OUTPUT_TO_THIRD_PARTIES: (AssetKind.OUTPUT,),
    Capability.PROVIDE_MODEL_TO_THIRD_PARTIES: (AssetKind.TRAINED_MODEL,),
    Capability.EMBED_MODEL_IN_PRODUCT: (AssetKind.TRAINED_MODEL,),
}


def default_asset(capability: Capability) -> AssetKind:
    return CAPABILITY_ASSETS[capability][0]


@dataclass(frozen=True)
class ActionQuery:
    """A concrete proposed use: who does what act to which asset."""

    capability: Capability
    asset: AssetKind
    actor: str | None = None
    target_domain: str | None = None
    involves_sublicense: bool = False

    def __post_init__(self) -> None:
        allowed = CAPABILITY_ASSETS[self.capability]
        if self.asset not in allowed:
            raise QueryError(
                f"capability {self.capability.value!r} applies to "
                f"{', '.join(a.value for a in allowed)}, not {self.asset.value!r}"
            )

    @classmethod
    def neutral(cls, capability: Capability) -> ActionQuery:
        return cls(capability=capability, asset=default_asset(capability))


@dataclass(frozen=True)
class Decision:
    """The checker's verdict, with the justification trace."""

    verdict: Verdict
    obligations: tuple[Obligation, ...]
    trace: tuple[tuple[Right, Capability], ...]
    reason: str

    @property
    def permitted(self) -> bool:
        return self.verdict is not Verdict.FORBIDDEN


def _forbidden(reason: str) -> Decision:
    return Decision(verdict=Verdict.FORBIDDEN, obligations=(), trace=(), reason=reason)


def check(grant: GrantSet, query: ActionQuery) -> Decision:
    """Decide a query against a grant.

    Restriction checks run first: excluded target domain, actor outside the
    designated parties (an actor-less query fails a designated-parties
    restriction outright), and sub-licensing under a no-sublicense grant
    are each forbidden regardless of the rights granted. The act is then
    permitted iff some granted or implied right confers its capability,
    with obligations attached per the grant's restrictions and the act.
    """
    exclusion = grant.restriction(RestrictionKind.ETHICAL_EXCLUSION)
    if (
        exclusion is not None
        and query.target_domain is not None
        and query.target_domain in exclusion.payload
    ):
        return _forbidden(
            f"the grant excludes use in the {query.target_domain!r} field"
        )

    parties = grant.restriction(RestrictionKind.DESIGNATED_PARTIES)
    if parties is not None:
        if query.actor is None:
            return _forbidden(
                "the grant is limited to designated parties; an actor is required"
            )
        if query.actor not in parties.payload:
            return _forbidden(
                f"actor {query.actor!r} is not among the designated parties"
            )

    if query.involves_sublicense and grant.has_restriction(RestrictionKind.NO_SUBLICENSE):
        return _forbidden("the grant does not permit sub-licensing")

    permitted = denote(grant)
    if query.capability not in permitted:
        return _forbidden(
            f"no granted right confers the capability {query.capability.value!r}"
        )

    trace = tuple(
        (right, query.capability)
        for right in closure(grant).rights_in_order()
        if query.capability in right_capabilities(right)
    )
    obligations: list[Obligation] = []
    if grant.has_restriction(RestrictionKind.ATTRIBUTION_REQUIRED):
        obligations.append(Obligation.ATTRIBUTE)
    if grant.has_restriction(RestrictionKind.CONFIDENTIAL):
        obligations.append(Obligation.KEEP_CONFIDENTIAL)
    if query.capability is Capability.DISTRIBUTE_DATA:
        obligations.append(Obligation.SAME_TERMS_ON_DISTRIBUTION)
    if (
        query.capability is Capability.TRAIN_MODEL
        and Capability.RETAIN_TRAINED_MODEL not in permitted
    ):
        # Training can then only come from benchmark case 2.
        obligations.append(Obligation.DELETE_TRAINED_WEIGHTS_AFTER_EVALUATION)
    if query.capability is Capability.PUBLISH_MODEL_RESTRICTED:
        obligations.append(Obligation.DOWNSTREAM_RESEARCH_PUBLICATION_ONLY)

    granting = ", ".join(right.value for right, _ in trace)
    if obligations:
        return Decision(
            verdict=Verdict.PERMITTED_WITH_OBLIGATIONS,
            obligations=tuple(obligations),
            trace=trace,
            reason=f"permitted by {granting}, subject to obligations",
        )
    return Decision(
        verdict=Verdict.PERMITTED,
        obligations=(),
        trace=trace,
        reason=f"permitted by {granting}",
    )


def scenario_table(grant: GrantSet) -> dict[Capability, Decision]:
    """Decide every capability under a neutral query, in capability order."""
    return {cap: check(grant, ActionQuery.neutral(cap)) for cap in ALL_CAPABILITIES}
