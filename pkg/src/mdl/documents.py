"""Wire documents shared by the CLI (--json) and the HTTP service.

Both surfaces must emit byte-identical JSON for the same inputs, so every
document is built here and serialized with :func:`canonical_json`.
"""

from __future__ import annotations

import json

from .checker import (
    OBLIGATION_DESCRIPTIONS,
    ActionQuery,
    CAPABILITY_ASSETS,
    Decision,
)
from .composer import CombinationReport
from .expression import serialize
from .render import LicenseDocument
from .taxonomy import (
    ALL_CAPABILITIES,
    ALL_RIGHTS,
    CAPABILITY_NAMES,
    DataRight,
    GrantSet,
    ModelRight,
    RESTRICTION_NAMES,
    RIGHT_DEFINITIONS,
    RIGHT_NAMES,
    RestrictionKind,
    closure,
    implied_rights,
    right_capabilities,
)

__all__ = [
    "canonical_json",
    "combine_document",
    "decision_document",
    "generate_document",
    "grant_document",
    "parse_document",
    "taxonomy_document",
]


def canonical_json(document: dict) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def grant_document(grant: GrantSet) -> dict:
    return {
        "data": [r.value for r in DataRight if r in grant.data_rights],
        "model": [r.value for r in ModelRight if r in grant.model_rights],
        "restrictions": [
            {"name": r.kind.value, "payload": list(r.payload)}
            for r in grant.restrictions_in_order()
        ],
    }


def parse_document(grant: GrantSet) -> dict:
    return {
        "canonical": serialize(grant),
        "grant": grant_document(grant),
        "closure": grant_document(closure(grant)),
    }


def decision_document(grant: GrantSet, query: ActionQuery, decision: Decision) -> dict:
    return {
        "expression": serialize(grant),
        "query": {
            "capability": query.capability.value,
            "asset": query.asset.value,
            "actor": query.actor,
            "domain": query.target_domain,
            "sublicense": query.involves_sublicense,
        },
        "verdict": decision.verdict.value,
        "obligations": [
            {"name": o.value, "description": OBLIGATION_DESCRIPTIONS[o]}
            for o in decision.obligations
        ],
        "trace": [
            {"right": right.value, "capability": capability.value}
            for right, capability in decision.trace
        ],
        "reason": decision.reason,
    }


def combine_document(report: CombinationReport) -> dict:
    return {
        "expression": serialize(report.effective),
        "effective": grant_document(report.effective),
        "conflicts": [
            {"kind": c.kind, "detail": c.detail, "sources": list(c.sources)}
            for c in report.conflicts
        ],
        "provenance": list(report.provenance),
    }


def generate_document(document: LicenseDocument) -> dict:
    return {"text": document.text, "hash": document.content_hash}


def taxonomy_document() -> dict:
    """The full vocabulary: rights, implication edges, capabilities, restrictions."""
    return {
        "version": "MDL-1.0",
        "rights": [
            {
                "token": right.value,
                "name": RIGHT_NAMES[right],
                "family": "data" if isinstance(right, DataRight) else "model",
                "definition": RIGHT_DEFINITIONS[right],
            }
            for right in ALL_RIGHTS
        ],
        "edges": [
            {"from": right.value, "to": implied.value}
            for right in ALL_RIGHTS
            for implied in sorted(implied_rights(right), key=lambda r: r.value)
        ],
        "capability_map": {
            right.value: sorted(c.value for c in right_capabilities(right))
            for right in ALL_RIGHTS
        },
        "capabilities": [
            {
                "token": capability.value,
                "name": CAPABILITY_NAMES[capability],
                "assets": [a.value for a in CAPABILITY_ASSETS[capability]],
            }
            for capability in ALL_CAPABILITIES
        ],
        "restrictions": [
            {
                "token": kind.value,
                "name": RESTRICTION_NAMES[kind],
                "takes_payload": kind
                in (RestrictionKind.DESIGNATED_PARTIES, RestrictionKind.ETHICAL_EXCLUSION),
            }
            for kind in RestrictionKind
        ],
    }
