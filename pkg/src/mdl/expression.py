"""Textual expression language for MDL grants.

An expression is a single line that names the license version, the granted
rights, and the restrictions, e.g.::

    MDL-1.0; data: access, label; model: research, publish; restrictions: attribution

Grammar (ABNF-style; keywords are case-insensitive, whitespace around
separators is ignored)::

    expr         = version *clause
    version      = "MDL-1.0"
    clause       = ";" (data-clause / model-clause / restr-clause)
    data-clause  = "data:" right-token *("," right-token)
    model-clause = "model:" right-token *("," right-token)
    restr-clause = "restrictions:" restr *("," restr)
    restr        = "attribution" / "confidential" / "no-sublicense"
                 / "parties(" id *("|" id) ")"
                 / "exclude(" id *("|" id) ")"

Each clause may appear at most once and clauses must appear in the order
data, model, restrictions. ``MDL-1.0`` alone is the all-rights-reserved
expression. Party and domain identifiers are opaque, case-sensitive strings
(legal names may contain spaces); everything else is a case-insensitive
keyword. Tokens are frozen for version MDL-1.0; unknown tokens are
rejected.

The canonical form — produced by :func:`serialize` and :func:`canonical` —
uses lowercase keywords, a single space after each separator, rights in
taxonomy order, restrictions in kind order, and payloads deduplicated and
sorted. ``serialize(parse(s).grant) == canonical(s)`` for every valid ``s``,
and parsing preserves exactly the rights written down (no closure is
applied).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .taxonomy import (
    DataRight,
    GrantSet,
    ModelRight,
    Restriction,
    RestrictionKind,
)

__all__ = ["Expression", "ParseError", "canonical", "parse", "serialize"]

VERSION_TOKEN = "MDL-1.0"

_WORD_BREAK = set(";:,()|") | set(" \t\r\n")

_DATA_TOKENS = {r.value: r for r in DataRight}
_MODEL_TOKENS = {r.value: r for r in ModelRight}

_SIMPLE_RESTRICTIONS = {
    "attribution": RestrictionKind.ATTRIBUTION_REQUIRED,
    "confidential": RestrictionKind.CONFIDENTIAL,
    "no-sublicense": RestrictionKind.NO_SUBLICENSE,
}
_PAYLOAD_RESTRICTIONS = {
    "parties": RestrictionKind.DESIGNATED_PARTIES,
    "exclude": RestrictionKind.ETHICAL_EXCLUSION,
}

_CLAUSE_ORDER = {"data": 0, "model": 1, "restrictions": 2}


class ParseError(ValueError):
    """A syntax or validity error in an MDL expression.

    ``offset`` is the byte offset of the offending token in the UTF-8
    encoding of the input; ``expected`` describes what would have been
    accepted there and ``found`` is the token actually present (empty at
    end of input).
    """

    def __init__(
        self,
        text: str,
        char_pos: int,
        message: str,
        *,
        expected: frozenset[str] = frozenset(),
        found: str = "",
    ) -> None:
        self.text = text
        self.char_pos = min(char_pos, len(text))
        self.offset = len(text[: self.char_pos].encode("utf-8"))
        self.expected = expected
        self.found = found
        self.message = message
        super().__init__(f"{message} (offset {self.offset})")

    def caret_diagnostic(self) -> str:
        """Two-line diagnostic: the input with a caret under the error."""
        return f"{self.text}\n{' ' * self.char_pos}^ {self.message}"


@dataclass(frozen=True)
class Expression:
    """A parsed expression: the raw text, its grant, and the token spans."""

    raw: str
    grant: GrantSet
    span_map: tuple[tuple[str, tuple[int, int]], ...] = field(default=(), repr=False)


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.spans: list[tuple[str, tuple[int, int]]] = []

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _record(self, token: str, start: int) -> None:
        self.spans.append(
            (
                token,
                (
                    len(self.text[:start].encode("utf-8")),
                    len(self.text[: start + len(token)].encode("utf-8")),
                ),
            )
        )

    def take_char(self, ch: str, description: str) -> None:
        if self.peek() != ch:
            raise ParseError(
                self.text,
                self.pos,
                f"expected {description}",
                expected=frozenset({ch}),
                found=self.peek(),
            )
        self._record(ch, self.pos)
        self.pos += 1

    def read_word(self) -> tuple[str, int]:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _WORD_BREAK:
            self.pos += 1
        word = self.text[start : self.pos]
        if word:
            self._record(word, start)
        return word, start

    def read_payload_item(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in "|)":
            self.pos += 1
        item = self.text[start : self.pos].rstrip()
        if item:
            self._record(item, start)
        return item, start


def _parse_rights_clause(
    sc: _Scanner, tokens: dict[str, DataRight] | dict[str, ModelRight], family: str
) -> frozenset:
    rights = set()
    while True:
        sc.skip_ws()
        word, start = sc.read_word()
        if not word:
            raise ParseError(
                sc.text,
                start,
                f"expected a {family} right token",
                expected=frozenset(tokens),
                found=sc.peek(),
            )
        right = tokens.get(word.lower())
        if right is None:
            raise ParseError(
                sc.text,
                start,
                f"unknown {family} right token {word!r}",
                expected=frozenset(tokens),
                found=word,
            )
        if right in rights:
            raise ParseError(sc.text, start, f"duplicate right {word.lower()!r}", found=word)
        rights.add(right)
        sc.skip_ws()
        if sc.peek() == ",":
            sc.take_char(",", "','")
        else:
            return frozenset(rights)


def _parse_payload(sc: _Scanner, keyword: str) -> tuple[str, ...]:
    sc.skip_ws()
    sc.take_char("(", f"'(' after {keyword!r}")
    items: list[str] = []
    while True:
        item, start = sc.read_payload_item()
        if not item:
            if sc.peek() == ")" and not items:
                raise ParseError(
                    sc.text, sc.pos, f"empty parenthesized list after {keyword!r}"
                )
            raise ParseError(sc.text, start, "empty identifier in list")
        items.append(item)
        if sc.peek() == "|":
            sc.take_char("|", "'|'")
        elif sc.peek() == ")":
            sc.take_char(")", "')'")
            return tuple(items)
        else:
            raise ParseError(
                sc.text,
                sc.pos,
                "expected '|' or ')' in identifier list",
                expected=frozenset({"|", ")"}),
                found=sc.peek(),
            )


def _parse_restrictions_clause(sc: _Scanner) -> frozenset[Restriction]:
    restrictions: dict[RestrictionKind, Restriction] = {}
    while True:
        sc.skip_ws()
        word, start = sc.read_word()
        lowered = word.lower()
        if not word:
            raise ParseError(
                sc.text,
                start,
                "expected a restriction",
                expected=frozenset(_SIMPLE_RESTRICTIONS) | frozenset(_PAYLOAD_RESTRICTIONS),
                found=sc.peek(),
            )
        if lowered in _SIMPLE_RESTRICTIONS:
            kind = _SIMPLE_RESTRICTIONS[lowered]
            payload: tuple[str, ...] = ()
        elif lowered in _PAYLOAD_RESTRICTIONS:
            kind = _PAYLOAD_RESTRICTIONS[lowered]
            payload = _parse_payload(sc, lowered)
        else:
            raise ParseError(
                sc.text,
                start,
                f"unknown restriction {word!r}",
                expected=frozenset(_SIMPLE_RESTRICTIONS) | frozenset(_PAYLOAD_RESTRICTIONS),
                found=word,
            )
        if kind in restrictions:
            raise ParseError(sc.text, start, f"duplicate restriction {lowered!r}", found=word)
        conflicting = (
            kind is RestrictionKind.ATTRIBUTION_REQUIRED
            and RestrictionKind.CONFIDENTIAL in restrictions
        ) or (
            kind is RestrictionKind.CONFIDENTIAL
            and RestrictionKind.ATTRIBUTION_REQUIRED in restrictions
        )
        if conflicting:
            raise ParseError(
                sc.text,
                start,
                "'attribution' and 'confidential' are mutually exclusive",
                found=word,
            )
        restrictions[kind] = Restriction(kind, payload)
        sc.skip_ws()
        if sc.peek() == ",":
            sc.take_char(",", "','")
        else:
            return frozenset(restrictions.values())


def parse(text: str) -> Expression:
    """Parse an MDL expression, validating tokens and restriction rules.

    Raises :class:`ParseError` with the byte offset of the offending token
    on unknown tokens, duplicate or out-of-order clauses, duplicate rights,
    conflicting restrictions, and empty parenthesized lists.
    """
    sc = _Scanner(text)
    sc.skip_ws()
    word, start = sc.read_word()
    if word.lower() != VERSION_TOKEN.lower():
        raise ParseError(
            text,
            start,
            f"expected version {VERSION_TOKEN!r}",
            expected=frozenset({VERSION_TOKEN}),
            found=word,
        )

    data_rights: frozenset[DataRight] = frozenset()
    model_rights: frozenset[ModelRight] = frozenset()
    restrictions: frozenset[Restriction] = frozenset()
    seen: list[str] = []
    while True:
        sc.skip_ws()
        if sc.at_end():
            break
        sc.take_char(";", "';' or end of expression")
        sc.skip_ws()
        word, start = sc.read_word()
        keyword = word.lower()
        if keyword not in _CLAUSE_ORDER:
            raise ParseError(
                text,
                start,
                f"expected a clause keyword, found {word!r}" if word else "expected a clause keyword",
                expected=frozenset(_CLAUSE_ORDER),
                found=word,
            )
        if keyword in seen:
            raise ParseError(text, start, f"duplicate clause {keyword!r}", found=word)
        if seen and _CLAUSE_ORDER[keyword] < _CLAUSE_ORDER[seen[-1]]:
            raise ParseError(
                text,
                start,
                f"clause {keyword!r} out of order: clauses follow data, model, restrictions",
                found=word,
            )
        seen.append(keyword)
        sc.skip_ws()
        sc.take_char(":", f"':' after {keyword!r}")
        if keyword == "data":
            data_rights = _parse_rights_clause(sc, _DATA_TOKENS, "data")
        elif keyword == "model":
            model_rights = _parse_rights_clause(sc, _MODEL_TOKENS, "model")
        else:
            restrictions = _parse_restrictions_clause(sc)

    grant = GrantSet(
        data_rights=data_rights, model_rights=model_rights, restrictions=restrictions
    )
    return Expression(raw=text, grant=grant, span_map=tuple(sc.spans))


def _render_restriction(restriction: Restriction) -> str:
    token = restriction.kind.value
    if restriction.kind in (
        RestrictionKind.DESIGNATED_PARTIES,
        RestrictionKind.ETHICAL_EXCLUSION,
    ):
        return f"{token}({'|'.join(restriction.payload)})"
    return token


def serialize(grant: GrantSet) -> str:
    """Emit the canonical expression for a grant.

    Deterministic: rights in taxonomy order, restrictions in kind order,
    payloads sorted, single space after separators. The stored rights are
    written as-is; no closure is applied.
    """
    parts = [grant.version]
    if grant.data_rights:
        tokens = [r.value for r in DataRight if r in grant.data_rights]
        parts.append(f"data: {', '.join(tokens)}")
    if grant.model_rights:
        tokens = [r.value for r in ModelRight if r in grant.model_rights]
        parts.append(f"model: {', '.join(tokens)}")
    if grant.restrictions:
        rendered = [_render_restriction(r) for r in grant.restrictions_in_order()]
        parts.append(f"restrictions: {', '.join(rendered)}")
    return "; ".join(parts)


def canonical(text: str) -> str:
    """Canonicalize an expression string; parse errors propagate."""
    return serialize(parse(text).grant)
