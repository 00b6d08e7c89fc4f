"""License document and Top Sheet generation.

:func:`generate_license` instantiates the standard MDL-1.0 license text for
a grant: the granted rights appear in the (a) subsections using the
template's own item wording, every right not granted is named in the
corresponding (b) subsection, and restrictions become additional exclusions
or notice-clause changes. The default wording is reproduced verbatim,
including its typographical quirks (``verbatim_typos=False`` selects the
corrected wording documented in ``docs/template-corrections.md``).

:func:`render_topsheet` produces the at-a-glance rights matrix shipped
alongside the license: all eleven rights with granted / implied / excluded
status, plus restrictions and the obligations that attach to permitted
acts.

The template text lives in a JSON resource; set ``MDL_TEMPLATE_DIR`` to a
directory containing an alternative ``template.json`` to override it.
"""

from __future__ import annotations

import hashlib
import html as html_module
import json
import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .checker import OBLIGATION_DESCRIPTIONS, Obligation, Verdict, scenario_table
from .expression import serialize
from .taxonomy import (
    ALL_RIGHTS,
    DataRight,
    GrantSet,
    ModelRight,
    Restriction,
    RestrictionKind,
    Right,
    RIGHT_DEFINITIONS,
    RIGHT_NAMES,
    closure,
)

__all__ = [
    "LicenseDocument",
    "RightStatus",
    "TopSheet",
    "TopSheetRow",
    "build_topsheet",
    "generate_license",
    "render_topsheet",
    "restriction_description",
]

TEMPLATE_DIR_ENV = "MDL_TEMPLATE_DIR"

_ROMAN = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii"]


@lru_cache(maxsize=8)
def _load_template_from(override: str | None) -> dict:
    if override:
        return json.loads((Path(override) / "template.json").read_text(encoding="utf-8"))
    data = resources.files("mdl.data").joinpath("template.json").read_text(encoding="utf-8")
    return json.loads(data)


def _load_template() -> dict:
    return _load_template_from(os.environ.get(TEMPLATE_DIR_ENV))


@dataclass(frozen=True)
class LicenseDocument:
    """Generated license text with its provenance."""

    text: str
    grant: GrantSet
    template_version: str
    content_hash: str


def _item_lines(items: list[str], indent: str = "    ") -> list[str]:
    return [f"{indent}({_ROMAN[i]}) {text}" for i, text in enumerate(items)]


def _letter_lines(items: list[str], indent: str = "  ") -> list[str]:
    return [f"{indent}({chr(ord('a') + i)}) {text}" for i, text in enumerate(items)]


def _restriction_exclusions(tpl: dict, grant: GrantSet) -> list[str]:
    items: list[str] = []
    parties = grant.restriction(RestrictionKind.DESIGNATED_PARTIES)
    if parties is not None:
        if parties.payload:
            items.append(tpl["parties_exclusion"].format(parties=", ".join(parties.payload)))
        else:
            items.append(tpl["no_parties_exclusion"])
    exclusion = grant.restriction(RestrictionKind.ETHICAL_EXCLUSION)
    if exclusion is not None:
        items.append(tpl["domain_exclusion"].format(domains=", ".join(exclusion.payload)))
    return items


def generate_license(grant: GrantSet, *, verbatim_typos: bool = True) -> LicenseDocument:
    """Instantiate the MDL-1.0 license text for a grant.

    The (a)/(b) split reflects the grant's closure: an implied right is a
    granted right in the document. Deterministic — identical input yields
    byte-identical text and hash.
    """
    tpl = _load_template()
    variant = "verbatim" if verbatim_typos else "corrected"
    closed = closure(grant)
    no_sublicense = grant.has_restriction(RestrictionKind.NO_SUBLICENSE)

    lines: list[str] = []
    title = tpl["title"]
    lines.append(title)
    lines.append("=" * len(title))
    lines.append("")
    lines.append(f"Grant-Expression: {serialize(grant)}")
    lines.append(f"Template-Version: {tpl['template_version']} ({variant} wording)")
    lines.append("")
    lines.append(tpl["release_note"])
    lines.append("")
    lines.append(tpl["covering"][variant])
    lines.append("")

    lines.append(f"1. {tpl['section_titles']['definitions']}")
    lines.append("")
    lines.extend(_letter_lines(tpl["definitions"]))
    lines.append("")

    lines.append(f"2. {tpl['section_titles']['general']}")
    lines.append("")
    lines.extend(_letter_lines(tpl["general_clauses"]))
    lines.append("")

    lines.append(f"3. {tpl['section_titles']['data_rights']}")
    lines.append("")
    lines.append(f"  (a) {tpl['data_grant_intro']}")
    granted_items = []
    for right in DataRight:
        if right not in closed.data_rights:
            continue
        item = tpl["data_right_items"][right.value]
        if right is DataRight.DISTRIBUTE and no_sublicense:
            item += tpl["no_sublicense_proviso"]
        granted_items.append(item)
    lines.extend(_item_lines(granted_items))
    lines.append("")
    lines.append(f"  (b) {tpl['data_exclude_intro']}")
    excluded_items = [
        tpl["excluded_data_names"][right.value]
        for right in DataRight
        if right not in closed.data_rights
    ]
    if no_sublicense and DataRight.DISTRIBUTE not in closed.data_rights:
        excluded_items.append(tpl["no_sublicense_exclusion"])
    excluded_items.extend(_restriction_exclusions(tpl, grant))
    lines.extend(_item_lines(excluded_items))
    lines.append("")

    lines.append(f"4. {tpl['section_titles']['model_rights']}")
    lines.append("")
    lines.append(f"  (a) {tpl['model_grant_intro']}")
    benchmark_case1 = ModelRight.BENCHMARK in closed.model_rights
    benchmark_case2 = ModelRight.BENCHMARK_TRAINED in closed.model_rights
    granted_items = []
    if benchmark_case1 or benchmark_case2:
        note = tpl["benchmark_both_cases_note"] if benchmark_case2 else tpl["benchmark_case1_note"]
        granted_items.append(tpl["model_right_items"]["benchmark"] + note)
    for right in (
        ModelRight.RESEARCH,
        ModelRight.PUBLISH,
        ModelRight.INTERNAL_USE,
        ModelRight.OUTPUT_COMMERCIAL,
        ModelRight.MODEL_COMMERCIAL,
    ):
        if right in closed.model_rights:
            granted_items.append(tpl["model_right_items"][right.value])
    lines.extend(_item_lines(granted_items))
    lines.append("")
    lines.append(f"  (b) {tpl['model_exclude_intro']}")
    excluded_items = []
    if not (benchmark_case1 or benchmark_case2):
        excluded_items.append(tpl["excluded_model_names"]["benchmark"])
    for right in (
        ModelRight.RESEARCH,
        ModelRight.PUBLISH,
        ModelRight.INTERNAL_USE,
        ModelRight.OUTPUT_COMMERCIAL,
        ModelRight.MODEL_COMMERCIAL,
    ):
        if right not in closed.model_rights:
            excluded_items.append(tpl["excluded_model_names"][right.value])
    excluded_items.extend(_restriction_exclusions(tpl, grant))
    lines.extend(_item_lines(excluded_items))
    lines.append("")

    lines.append(f"5. {tpl['section_titles']['notice']}")
    lines.append("")
    notice = tpl["notice_body"][variant]
    if grant.has_restriction(RestrictionKind.CONFIDENTIAL):
        notice = f"{notice} {tpl['confidentiality_sentence']}"
    else:
        notice = (
            f"{notice} {tpl['attribution_sentence']} "
            f"{tpl['conditional_confidentiality_sentence']}"
        )
    lines.append(f"  {notice}")

    text = "\n".join(lines) + "\n"
    return LicenseDocument(
        text=text,
        grant=grant,
        template_version=tpl["template_version"],
        content_hash=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


class RightStatus(Enum):
    GRANTED = "granted"
    IMPLIED = "implied"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class TopSheetRow:
    right: Right
    status: RightStatus
    definition: str


@dataclass(frozen=True)
class TopSheet:
    """The at-a-glance rights matrix for a grant."""

    grant: GrantSet
    rows: tuple[TopSheetRow, ...]
    restriction_rows: tuple[tuple[Restriction, str], ...]
    obligations: tuple[Obligation, ...]


def restriction_description(restriction: Restriction) -> str:
    kind = restriction.kind
    payload = ", ".join(restriction.payload)
    if kind is RestrictionKind.DESIGNATED_PARTIES:
        if not restriction.payload:
            return "No party is designated; the rights are exercisable by nobody."
        return f"Only the following designated parties may exercise the licensed rights: {payload}."
    if kind is RestrictionKind.NO_SUBLICENSE:
        return "Licensee may not sub-license the Data to third parties."
    if kind is RestrictionKind.ATTRIBUTION_REQUIRED:
        return "Attribution to the source of the Data is required."
    if kind is RestrictionKind.CONFIDENTIAL:
        return (
            "Use of the Data is confidential; Licensee shall not publicly refer "
            "to Licensor and/or the source of the Data."
        )
    return f"The licensed rights may not be exercised in the following fields: {payload}."


def build_topsheet(grant: GrantSet) -> TopSheet:
    """Classify every right as granted, implied, or excluded for a grant."""
    closed = closure(grant)
    rows = []
    for right in ALL_RIGHTS:
        if right in grant.rights:
            status = RightStatus.GRANTED
        elif right in closed.rights:
            status = RightStatus.IMPLIED
        else:
            status = RightStatus.EXCLUDED
        rows.append(TopSheetRow(right=right, status=status, definition=RIGHT_DEFINITIONS[right]))
    restriction_rows = tuple(
        (r, restriction_description(r)) for r in grant.restrictions_in_order()
    )
    seen: set[Obligation] = set()
    for decision in scenario_table(grant).values():
        if decision.verdict is not Verdict.FORBIDDEN:
            seen.update(decision.obligations)
    obligations = tuple(o for o in Obligation if o in seen)
    return TopSheet(
        grant=grant,
        rows=tuple(rows),
        restriction_rows=restriction_rows,
        obligations=obligations,
    )


DATA_SECTION_TITLE = "The Data itself"
MODEL_SECTION_TITLE = "Summary of rights granted in conjunction with Models"


def topsheet_document(sheet: TopSheet) -> dict:
    """The structured Top Sheet (canonical wire form; field names frozen)."""
    return {
        "version": sheet.grant.version,
        "expression": serialize(sheet.grant),
        "rights": [
            {
                "name": row.right.value,
                "family": "data" if isinstance(row.right, DataRight) else "model",
                "status": row.status.value,
                "definition": row.definition,
            }
            for row in sheet.rows
        ],
        "restrictions": [
            {
                "name": restriction.kind.value,
                "payload": list(restriction.payload),
                "description": description,
            }
            for restriction, description in sheet.restriction_rows
        ],
        "obligations": [
            {"name": obligation.value, "description": OBLIGATION_DESCRIPTIONS[obligation]}
            for obligation in sheet.obligations
        ],
    }


def _topsheet_markdown(sheet: TopSheet) -> str:
    lines = ["# MDL Top Sheet", ""]
    lines.append(f"Expression: `{serialize(sheet.grant)}`")
    lines.append("")
    for family, title in ((DataRight, DATA_SECTION_TITLE), (ModelRight, MODEL_SECTION_TITLE)):
        lines.append(f"## {title}")
        lines.append("")
        lines.append("| Right | Status | Definition |")
        lines.append("| --- | --- | --- |")
        for row in sheet.rows:
            if isinstance(row.right, family):
                status = row.status.value.capitalize()
                lines.append(f"| {RIGHT_NAMES[row.right]} | {status} | {row.definition} |")
        lines.append("")
    lines.append("## Restrictions")
    lines.append("")
    if sheet.restriction_rows:
        for restriction, description in sheet.restriction_rows:
            lines.append(f"- **{restriction.kind.value}**: {description}")
    else:
        lines.append("None.")
    lines.append("")
    lines.append("## Obligations")
    lines.append("")
    if sheet.obligations:
        for obligation in sheet.obligations:
            lines.append(f"- **{obligation.value}**: {OBLIGATION_DESCRIPTIONS[obligation]}")
    else:
        lines.append("None.")
    return "\n".join(lines) + "\n"


def _topsheet_html(sheet: TopSheet) -> str:
    esc = html_module.escape
    parts = [
        "<!doctype html>",
        '<html lang="en"><head><meta charset="utf-8"><title>MDL Top Sheet</title></head><body>',
        "<h1>MDL Top Sheet</h1>",
        f"<p>Expression: <code>{esc(serialize(sheet.grant))}</code></p>",
    ]
    for family, title in ((DataRight, DATA_SECTION_TITLE), (ModelRight, MODEL_SECTION_TITLE)):
        parts.append(f"<h2>{esc(title)}</h2>")
        parts.append("<table><thead><tr><th>Right</th><th>Status</th><th>Definition</th></tr></thead><tbody>")
        for row in sheet.rows:
            if isinstance(row.right, family):
                parts.append(
                    f'<tr class="{row.status.value}"><td>{esc(RIGHT_NAMES[row.right])}</td>'
                    f"<td>{esc(row.status.value.capitalize())}</td>"
                    f"<td>{esc(row.definition)}</td></tr>"
                )
        parts.append("</tbody></table>")
    parts.append("<h2>Restrictions</h2>")
    if sheet.restriction_rows:
        parts.append("<ul>")
        for restriction, description in sheet.restriction_rows:
            parts.append(f"<li><strong>{esc(restriction.kind.value)}</strong>: {esc(description)}</li>")
        parts.append("</ul>")
    else:
        parts.append("<p>None.</p>")
    parts.append("<h2>Obligations</h2>")
    if sheet.obligations:
        parts.append("<ul>")
        for obligation in sheet.obligations:
            parts.append(
                f"<li><strong>{esc(obligation.value)}</strong>: "
                f"{esc(OBLIGATION_DESCRIPTIONS[obligation])}</li>"
            )
        parts.append("</ul>")
    else:
        parts.append("<p>None.</p>")
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def render_topsheet(grant: GrantSet, format: str = "structured") -> dict | str:
    """Render the Top Sheet as ``structured`` (dict), ``markdown``, or ``html``."""
    sheet = build_topsheet(grant)
    if format == "structured":
        return topsheet_document(sheet)
    if format == "markdown":
        return _topsheet_markdown(sheet)
    if format == "html":
        return _topsheet_html(sheet)
    raise ValueError(f"unknown top sheet format: {format!r}")
