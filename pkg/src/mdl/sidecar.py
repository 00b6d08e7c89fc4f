"""Machine-readable license metadata shipped alongside a dataset.

A sidecar is a small JSON file — ``MDL.json`` at the dataset root by
convention — carrying the canonical grant expression, the licensor, the
data source, any notices that must travel with the data, and optionally a
hash binding the sidecar to a generated license text. The published schema
lives in ``docs/sidecar.schema.json``.

Reading is strict by default: unknown top-level fields are rejected, the
expression must be written in canonical form (the error suggests it), and a
present ``license_text_hash`` must match the license generated for the
expression under one of the two template wordings. Lenient mode preserves
unknown top-level fields opaquely instead of rejecting them.

:func:`write_sidecar` emits canonical bytes (sorted keys, two-space indent,
trailing newline), so reading and writing round-trip exactly.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field

from .expression import ParseError, parse, serialize
from .render import generate_license

__all__ = ["Sidecar", "SidecarError", "read_sidecar", "write_sidecar"]

RECOGNIZED_SCHEMA_VERSIONS = frozenset({"1"})

_KNOWN_FIELDS = frozenset(
    {
        "schema_version",
        "expression",
        "licensor",
        "data_source",
        "notices",
        "license_text_hash",
    }
)


class SidecarError(ValueError):
    """A sidecar validation failure, with the offending field path."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class Sidecar:
    """Validated sidecar content."""

    schema_version: str
    expression: str
    licensor_name: str
    licensor_contact: str | None = None
    data_source: str | None = None
    notices: tuple[str, ...] = ()
    license_text_hash: str | None = None
    extra: dict = field(default_factory=dict, compare=True)


def _require_string(value: object, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise SidecarError(path, "must be a non-empty string")
    return value


def read_sidecar(data: bytes | str, *, strict: bool = True) -> Sidecar:
    """Parse and fully validate sidecar bytes."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SidecarError("", f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SidecarError("", "sidecar must be a JSON object")

    unknown = sorted(set(raw) - _KNOWN_FIELDS)
    if unknown and strict:
        raise SidecarError(unknown[0], "unknown field")
    extra = {key: raw[key] for key in unknown}

    if "schema_version" not in raw:
        raise SidecarError("schema_version", "required field is missing")
    schema_version = _require_string(raw["schema_version"], "schema_version")
    if schema_version not in RECOGNIZED_SCHEMA_VERSIONS:
        raise SidecarError("schema_version", f"unrecognized version {schema_version!r}")

    if "expression" not in raw:
        raise SidecarError("expression", "required field is missing")
    expression = _require_string(raw["expression"], "expression")
    try:
        grant = parse(expression).grant
    except ParseError as exc:
        raise SidecarError("expression", str(exc)) from exc
    canonical_form = serialize(grant)
    if expression != canonical_form:
        raise SidecarError("expression", f"non-canonical; expected '{canonical_form}'")

    if "licensor" not in raw:
        raise SidecarError("licensor", "required field is missing")
    licensor = raw["licensor"]
    if not isinstance(licensor, dict):
        raise SidecarError("licensor", "must be an object")
    unknown_licensor = sorted(set(licensor) - {"name", "contact"})
    if unknown_licensor:
        raise SidecarError(f"licensor.{unknown_licensor[0]}", "unknown field")
    if "name" not in licensor:
        raise SidecarError("licensor.name", "required field is missing")
    licensor_name = _require_string(licensor["name"], "licensor.name")
    licensor_contact = None
    if "contact" in licensor:
        licensor_contact = _require_string(licensor["contact"], "licensor.contact")

    data_source = None
    if "data_source" in raw:
        data_source = _require_string(raw["data_source"], "data_source")
        if "://" not in data_source:
            raise SidecarError("data_source", "must be a URL")

    notices: tuple[str, ...] = ()
    if "notices" in raw:
        if not isinstance(raw["notices"], list):
            raise SidecarError("notices", "must be an array of strings")
        notices = tuple(
            _require_string(item, f"notices[{i}]") for i, item in enumerate(raw["notices"])
        )

    license_text_hash = None
    if "license_text_hash" in raw:
        license_text_hash = _require_string(raw["license_text_hash"], "license_text_hash")
        if len(license_text_hash) != 64 or any(
            c not in string.hexdigits for c in license_text_hash
        ):
            raise SidecarError("license_text_hash", "must be a 64-character hex digest")
        candidates = {
            generate_license(grant, verbatim_typos=True).content_hash,
            generate_license(grant, verbatim_typos=False).content_hash,
        }
        if license_text_hash not in candidates:
            raise SidecarError(
                "license_text_hash",
                "does not match the license generated for the expression "
                "(under either template wording)",
            )

    return Sidecar(
        schema_version=schema_version,
        expression=expression,
        licensor_name=licensor_name,
        licensor_contact=licensor_contact,
        data_source=data_source,
        notices=notices,
        license_text_hash=license_text_hash,
        extra=extra,
    )


def write_sidecar(sidecar: Sidecar) -> bytes:
    """Serialize to canonical bytes; ``read_sidecar`` inverts this exactly."""
    doc: dict = {
        "schema_version": sidecar.schema_version,
        "expression": sidecar.expression,
        "licensor": {"name": sidecar.licensor_name},
    }
    if sidecar.licensor_contact is not None:
        doc["licensor"]["contact"] = sidecar.licensor_contact
    if sidecar.data_source is not None:
        doc["data_source"] = sidecar.data_source
    if sidecar.notices:
        doc["notices"] = list(sidecar.notices)
    if sidecar.license_text_hash is not None:
        doc["license_text_hash"] = sidecar.license_text_hash
    doc.update(sidecar.extra)
    text = json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    return text.encode("utf-8")
