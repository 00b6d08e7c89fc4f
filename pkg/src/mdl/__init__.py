"""Montreal Data License (MDL) toolkit.

Grant expressions, the rights-implication lattice, compliance checking,
dataset combination, license text and Top Sheet generation, sidecar
metadata, a CLI, and a stateless HTTP service.
"""

from .taxonomy import (
    Capability,
    DataRight,
    GrantError,
    GrantSet,
    ModelRight,
    Restriction,
    RestrictionKind,
    closure,
    denote,
    implied_rights,
    meet,
    right_capabilities,
)
from .expression import Expression, ParseError, canonical, parse, serialize
from .composer import AssetKind, CombinationReport, Conflict, NotDerivable, combine, derived_grant
from .checker import ActionQuery, Decision, Obligation, QueryError, Verdict, check, scenario_table
from .render import LicenseDocument, TopSheet, build_topsheet, generate_license, render_topsheet
from .sidecar import Sidecar, SidecarError, read_sidecar, write_sidecar

__version__ = "0.1.0"

__all__ = [
    "ActionQuery",
    "AssetKind",
    "Capability",
    "CombinationReport",
    "Conflict",
    "DataRight",
    "Decision",
    "Expression",
    "GrantError",
    "GrantSet",
    "LicenseDocument",
    "ModelRight",
    "NotDerivable",
    "Obligation",
    "ParseError",
    "QueryError",
    "Restriction",
    "RestrictionKind",
    "Sidecar",
    "SidecarError",
    "TopSheet",
    "Verdict",
    "build_topsheet",
    "canonical",
    "check",
    "closure",
    "combine",
    "denote",
    "derived_grant",
    "generate_license",
    "implied_rights",
    "meet",
    "parse",
    "read_sidecar",
    "render_topsheet",
    "right_capabilities",
    "scenario_table",
    "serialize",
    "write_sidecar",
]
