"""License text and Top Sheet tests.

The complement check re-derives granted/excluded rights purely from the
generated text and compares them with the closure of the input grant, for
every one of the 2^11 right subsets.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from mdl.expression import parse, serialize
from mdl.render import (
    RightStatus,
    build_topsheet,
    generate_license,
    render_topsheet,
    topsheet_document,
)
from mdl.taxonomy import (
    ALL_RIGHTS,
    EMPTY_GRANT,
    FULL_GRANT,
    DataRight,
    GrantSet,
    ModelRight,
    closure,
    denote,
    right_capabilities,
)

from test_taxonomy import SUBSETS, grant_from_tokens

FIXTURES = Path(__file__).parent / "fixtures"

FRAGMENTS = json.loads((FIXTURES / "license_fragments.json").read_text(encoding="utf-8"))


def g(expr: str) -> GrantSet:
    return parse(expr).grant


# Markers identifying each right's (a)-section item and (b)-section name item.
DATA_ITEM_MARKERS = {
    DataRight.ACCESS: "Access the Data, where",
    DataRight.LABELLING: "Creation of Tagged Data.",
    DataRight.DISTRIBUTE: "Distribute the Data, i.e.",
    DataRight.REPRESENT: "Creation of a Representation of the Data.",
}
DATA_NAME_ITEMS = {
    DataRight.ACCESS: ") Access.",
    DataRight.LABELLING: ") Labelling.",
    DataRight.DISTRIBUTE: ") Distribute.",
    DataRight.REPRESENT: ") Represent.",
}
MODEL_ITEM_MARKERS = {
    ModelRight.RESEARCH: "Research: To access the Data",
    ModelRight.PUBLISH: "Publish: To make available to Third Parties",
    ModelRight.INTERNAL_USE: "Internal Use: To access the Data",
    ModelRight.OUTPUT_COMMERCIAL: "Output Commercialization: To access the Data",
    ModelRight.MODEL_COMMERCIAL: "Model Commercialization: Make a Trained Model",
}
MODEL_NAME_ITEMS = {
    ModelRight.RESEARCH: ") Research.",
    ModelRight.PUBLISH: ") Publish.",
    ModelRight.INTERNAL_USE: ") Internal Use.",
    ModelRight.OUTPUT_COMMERCIAL: ") Output Commercialization.",
    ModelRight.MODEL_COMMERCIAL: ") Model Commercialization.",
}


def section_blocks(text: str):
    """((3a, 3b), (4a, 4b)) line blocks of a generated license."""
    lines = text.splitlines()
    i3 = lines.index("3. Licensed Rights to the Data")
    i4 = lines.index("4. Licensed Rights in Conjunction with Models")
    i5 = lines.index("5. Attribution and Notice")

    def split_ab(section: list[str]):
        a = next(i for i, line in enumerate(section) if line.startswith("  (a)"))
        b = next(i for i, line in enumerate(section) if line.startswith("  (b)"))
        return "\n".join(section[a:b]), "\n".join(section[b:])

    return split_ab(lines[i3:i4]), split_ab(lines[i4:i5])


class TestGenerateLicense:
    def test_full_grant_contains_all_golden_fragments(self):
        text = generate_license(FULL_GRANT).text
        for entry in FRAGMENTS:
            assert entry["fragment"] in text, entry["anchor"]

    def test_attribution_note_present(self):
        text = generate_license(FULL_GRANT).text
        assert "Montreal Data License" in text

    def test_machine_readable_lines(self):
        grant = g("MDL-1.0; model: research; restrictions: attribution")
        doc = generate_license(grant)
        assert f"Grant-Expression: {serialize(grant)}" in doc.text
        assert "Template-Version: MDL-1.0 (verbatim wording)" in doc.text
        assert "MDL-1.0" in doc.text

    def test_access_only_excludes_rest(self):
        (_, b3), (_, b4) = section_blocks(generate_license(g("MDL-1.0; data: access")).text)
        assert ") Labelling." in b3
        assert ") Distribute." in b3
        assert ") Represent." in b3
        assert ") Benchmark." in b4
        for item in MODEL_NAME_ITEMS.values():
            assert item in b4

    def test_empty_grant_sections_empty(self):
        (a3, b3), (a4, b4) = section_blocks(generate_license(EMPTY_GRANT).text)
        assert "(i)" not in a3 and "(i)" not in a4
        for item in DATA_NAME_ITEMS.values():
            assert item in b3
        assert ") Benchmark." in b4
        for item in MODEL_NAME_ITEMS.values():
            assert item in b4

    def test_determinism(self):
        grant = g("MDL-1.0; data: access, distribute; model: publish")
        first = generate_license(grant)
        second = generate_license(grant)
        assert first.text == second.text
        assert first.content_hash == second.content_hash

    def test_hash_matches_text(self):
        import hashlib

        doc = generate_license(g("MDL-1.0; model: internal"))
        assert doc.content_hash == hashlib.sha256(doc.text.encode()).hexdigest()

    def test_verbatim_wording_quirks_preserved(self):
        text = generate_license(FULL_GRANT).text
        assert "use of the data consists acceptance" in text
        assert "to you (“License”)" in text
        assert "Output and/Model" in text

    def test_corrected_variant(self):
        doc = generate_license(FULL_GRANT, verbatim_typos=False)
        assert "use of the data consists of acceptance" in doc.text
        assert "to you (“Licensee”)" in doc.text
        assert "Output and/or Model" in doc.text
        assert "Template-Version: MDL-1.0 (corrected wording)" in doc.text
        assert doc.content_hash != generate_license(FULL_GRANT).content_hash

    def test_implied_rights_rendered_as_granted(self):
        (a3, _), (a4, _) = section_blocks(generate_license(g("MDL-1.0; model: publish")).text)
        assert DATA_ITEM_MARKERS[DataRight.ACCESS] in a3
        assert MODEL_ITEM_MARKERS[ModelRight.RESEARCH] in a4
        assert "Benchmark: To access the Data" in a4

    def test_benchmark_case_notes(self):
        both = generate_license(g("MDL-1.0; model: benchmark-trained")).text
        assert "[cases 1 and 2]" in both
        case1 = generate_license(g("MDL-1.0; model: benchmark")).text
        assert "[case 1 only]" in case1

    def test_item_numbering_contiguous(self):
        (a3, _), _ = section_blocks(
            generate_license(g("MDL-1.0; data: access, represent")).text
        )
        assert "    (i) " in a3 and "    (ii) " in a3
        assert "(iii)" not in a3

    def test_no_sublicense_limits_distribute(self):
        granted = generate_license(
            g("MDL-1.0; data: distribute; restrictions: no-sublicense")
        ).text
        assert "may not itself sub-license the Data" in granted
        withheld = generate_license(g("MDL-1.0; restrictions: no-sublicense")).text
        (_, b3), _ = section_blocks(withheld)
        assert "Sub-licensing of the Data." in b3

    def test_parties_and_domains_rendered_as_exclusions(self):
        text = generate_license(
            g("MDL-1.0; data: access; restrictions: parties(acme|zeta), exclude(military)")
        ).text
        (_, b3), (_, b4) = section_blocks(text)
        for block in (b3, b4):
            assert "designated parties: acme, zeta." in block
            assert "excluded fields: military." in block

    def test_confidentiality_replaces_attribution_sentence(self):
        confidential = generate_license(
            g("MDL-1.0; data: access; restrictions: confidential")
        ).text
        assert "Licensee shall not publicly refer to Licensor" in confidential
        assert "commercially reasonable efforts" not in confidential
        attributed = generate_license(
            g("MDL-1.0; data: access; restrictions: attribution")
        ).text
        assert "commercially reasonable efforts" in attributed

    def test_complement_partition_exhaustive(self):
        for tokens in SUBSETS:
            grant = grant_from_tokens(tokens)
            closed = closure(grant)
            (a3, b3), (a4, b4) = section_blocks(generate_license(grant).text)
            for right in DataRight:
                granted = DATA_ITEM_MARKERS[right] in a3
                excluded = DATA_NAME_ITEMS[right] in b3
                assert granted != excluded
                assert granted == (right in closed.data_rights)
            for right in MODEL_ITEM_MARKERS:
                granted = MODEL_ITEM_MARKERS[right] in a4
                excluded = MODEL_NAME_ITEMS[right] in b4
                assert granted != excluded
                assert granted == (right in closed.model_rights)
            case1 = ModelRight.BENCHMARK in closed.model_rights
            case2 = ModelRight.BENCHMARK_TRAINED in closed.model_rights
            if case2:
                assert "[cases 1 and 2]" in a4
            elif case1:
                assert "[case 1 only]" in a4
            else:
                assert ") Benchmark." in b4
                assert "Benchmark: To access" not in a4

    def test_template_dir_override(self, tmp_path, monkeypatch):
        template = json.loads(
            (Path("src/mdl/data/template.json")).read_text(encoding="utf-8")
        )
        template["title"] = "Custom Data License"
        (tmp_path / "template.json").write_text(json.dumps(template), encoding="utf-8")
        monkeypatch.setenv("MDL_TEMPLATE_DIR", str(tmp_path))
        text = generate_license(EMPTY_GRANT).text
        assert text.startswith("Custom Data License")


class TestTopSheet:
    def test_publish_statuses(self):
        sheet = build_topsheet(g("MDL-1.0; model: publish"))
        statuses = {row.right: row.status for row in sheet.rows}
        assert statuses[ModelRight.PUBLISH] is RightStatus.GRANTED
        for implied in (
            ModelRight.RESEARCH,
            ModelRight.BENCHMARK_TRAINED,
            ModelRight.BENCHMARK,
            DataRight.ACCESS,
        ):
            assert statuses[implied] is RightStatus.IMPLIED
        for excluded in (
            DataRight.LABELLING,
            DataRight.DISTRIBUTE,
            DataRight.REPRESENT,
            ModelRight.INTERNAL_USE,
            ModelRight.OUTPUT_COMMERCIAL,
            ModelRight.MODEL_COMMERCIAL,
        ):
            assert statuses[excluded] is RightStatus.EXCLUDED

    def test_empty_all_excluded(self):
        sheet = build_topsheet(EMPTY_GRANT)
        assert all(row.status is RightStatus.EXCLUDED for row in sheet.rows)

    def test_full_all_granted(self):
        sheet = build_topsheet(FULL_GRANT)
        assert all(row.status is RightStatus.GRANTED for row in sheet.rows)

    def test_every_right_exactly_once(self):
        sheet = build_topsheet(g("MDL-1.0; model: internal"))
        assert [row.right for row in sheet.rows] == list(ALL_RIGHTS)

    def test_implied_iff_closure_minus_grant_exhaustive(self):
        for tokens in list(SUBSETS)[::7]:
            grant = grant_from_tokens(tokens)
            closed = closure(grant)
            for row in build_topsheet(grant).rows:
                expected = (
                    RightStatus.GRANTED
                    if row.right in grant.rights
                    else RightStatus.IMPLIED
                    if row.right in closed.rights
                    else RightStatus.EXCLUDED
                )
                assert row.status is expected

    def test_granted_or_implied_iff_capabilities_denoted(self):
        for tokens in list(SUBSETS)[::13]:
            grant = grant_from_tokens(tokens)
            capabilities = denote(grant)
            for row in build_topsheet(grant).rows:
                reachable = row.status is not RightStatus.EXCLUDED
                assert reachable == (right_capabilities(row.right) <= capabilities)

    def test_structured_document_shape(self):
        doc = render_topsheet(
            g("MDL-1.0; data: distribute; restrictions: attribution"), "structured"
        )
        assert set(doc) == {"version", "expression", "rights", "restrictions", "obligations"}
        assert len(doc["rights"]) == 11
        assert set(doc["rights"][0]) == {"name", "family", "status", "definition"}
        assert doc["restrictions"][0]["name"] == "attribution"
        names = [o["name"] for o in doc["obligations"]]
        assert names == ["attribute", "same-terms-on-distribution"]

    def test_markdown_sections(self):
        text = render_topsheet(g("MDL-1.0; model: publish"), "markdown")
        assert "## The Data itself" in text
        assert "## Summary of rights granted in conjunction with Models" in text
        assert "| Publish | Granted |" in text
        assert "| Research | Implied |" in text

    def test_html_escapes_and_renders(self):
        text = render_topsheet(
            g("MDL-1.0; data: access; restrictions: parties(A&B Corp)"), "html"
        )
        assert "<table>" in text
        assert "A&amp;B Corp" in text

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            render_topsheet(EMPTY_GRANT, "pdf")

    def test_structured_matches_builder(self):
        grant = g("MDL-1.0; model: benchmark-trained")
        assert render_topsheet(grant, "structured") == topsheet_document(build_topsheet(grant))
