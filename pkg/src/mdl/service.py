"""Stateless HTTP API over the MDL core.

All handlers are pure over the immutable taxonomy: no session, no
persistence, no request mutates server state. Response bodies are the same
canonical JSON documents the CLI emits with ``--json``, byte for byte.

Error contract: malformed JSON or a malformed query body is 400, an
expression that fails to parse is 422 (with the byte offset of the error),
unknown routes are 404. The listen address comes from ``MDL_ADDR``
(``host:port``, default ``127.0.0.1:8000``); one structured access-log line
per request goes to standard output.
"""

from __future__ import annotations

import json
import os
import time

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from starlette.exceptions import HTTPException as StarletteHTTPException

from .checker import ActionQuery, QueryError, check
from .composer import AssetKind, combine
from .documents import (
    canonical_json,
    combine_document,
    decision_document,
    generate_document,
    parse_document,
    taxonomy_document,
)
from .expression import ParseError, parse
from .render import generate_license, render_topsheet
from .taxonomy import Capability

__all__ = ["app", "create_app", "main"]

ADDR_ENV = "MDL_ADDR"


class ApiError(Exception):
    """Structured API failure: HTTP status, machine code, optional detail."""

    def __init__(
        self,
        status: int,
        code: str,
        message: str,
        *,
        offset: int | None = None,
        field: str | None = None,
    ) -> None:
        self.status = status
        self.code = code
        self.message = message
        self.offset = offset
        self.field = field
        super().__init__(message)

    def document(self) -> dict:
        doc: dict = {"code": self.code, "message": self.message}
        if self.offset is not None:
            doc["offset"] = self.offset
        if self.field is not None:
            doc["field"] = self.field
        return doc


def _json_response(document: dict, status: int = 200, **headers: str) -> Response:
    return Response(
        content=canonical_json(document),
        status_code=status,
        media_type="application/json",
        headers=headers or None,
    )


async def _body_object(request: Request) -> dict:
    try:
        body = json.loads(await request.body())
    except json.JSONDecodeError as exc:
        raise ApiError(400, "bad-json", f"request body is not valid JSON: {exc}")
    if not isinstance(body, dict):
        raise ApiError(400, "bad-request", "request body must be a JSON object")
    return body


def _field(body: dict, name: str, kind: type, *, required: bool = True, default=None):
    if name not in body:
        if required:
            raise ApiError(400, "missing-field", f"missing field {name!r}", field=name)
        return default
    value = body[name]
    if not isinstance(value, kind):
        raise ApiError(
            400, "bad-field", f"field {name!r} must be {kind.__name__}", field=name
        )
    return value


def _parse_expression(text: str, field: str = "expression"):
    try:
        return parse(text).grant
    except ParseError as exc:
        raise ApiError(
            422, "parse-error", exc.message, offset=exc.offset, field=field
        ) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="MDL service", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        print(
            json.dumps(
                {
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "duration_ms": round((time.monotonic() - started) * 1000, 3),
                },
                sort_keys=True,
            ),
            flush=True,
        )
        return response

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return _json_response(exc.document(), status=exc.status)

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(_request: Request, exc: StarletteHTTPException):
        code = {404: "not-found", 405: "method-not-allowed"}.get(exc.status_code, "error")
        return _json_response(
            {"code": code, "message": str(exc.detail)}, status=exc.status_code
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request: Request, exc: RequestValidationError):
        return _json_response({"code": "bad-request", "message": str(exc)}, status=400)

    @app.get("/v1/taxonomy")
    async def taxonomy() -> Response:
        return _json_response(
            taxonomy_document(),
            **{"Cache-Control": "public, max-age=31536000, immutable"},
        )

    @app.post("/v1/parse")
    async def parse_endpoint(request: Request) -> Response:
        body = await _body_object(request)
        grant = _parse_expression(_field(body, "expression", str))
        return _json_response(parse_document(grant))

    @app.post("/v1/generate")
    async def generate_endpoint(request: Request) -> Response:
        body = await _body_object(request)
        grant = _parse_expression(_field(body, "expression", str))
        corrected = _field(body, "corrected", bool, required=False, default=False)
        document = generate_license(grant, verbatim_typos=not corrected)
        return _json_response(generate_document(document))

    @app.post("/v1/check")
    async def check_endpoint(request: Request) -> Response:
        body = await _body_object(request)
        grant = _parse_expression(_field(body, "expression", str))
        query_body = _field(body, "query", dict)
        capability_token = _field(query_body, "capability", str)
        try:
            capability = Capability(capability_token)
        except ValueError:
            raise ApiError(
                400,
                "bad-field",
                f"unknown capability token {capability_token!r}",
                field="query.capability",
            )
        asset_token = _field(query_body, "asset", str, required=False)
        if asset_token is None:
            from .checker import default_asset

            asset = default_asset(capability)
        else:
            try:
                asset = AssetKind(asset_token)
            except ValueError:
                raise ApiError(
                    400,
                    "bad-field",
                    f"unknown asset kind {asset_token!r}",
                    field="query.asset",
                )
        try:
            query = ActionQuery(
                capability=capability,
                asset=asset,
                actor=_field(query_body, "actor", str, required=False),
                target_domain=_field(query_body, "domain", str, required=False),
                involves_sublicense=_field(
                    query_body, "sublicense", bool, required=False, default=False
                ),
            )
        except QueryError as exc:
            raise ApiError(400, "bad-query", str(exc), field="query")
        return _json_response(decision_document(grant, query, check(grant, query)))

    @app.post("/v1/combine")
    async def combine_endpoint(request: Request) -> Response:
        body = await _body_object(request)
        expressions = _field(body, "expressions", list)
        if not expressions:
            raise ApiError(400, "bad-field", "expressions must be non-empty", field="expressions")
        grants = []
        errors = []
        for index, expression in enumerate(expressions):
            if not isinstance(expression, str):
                raise ApiError(
                    400,
                    "bad-field",
                    f"expressions[{index}] must be str",
                    field=f"expressions[{index}]",
                )
            try:
                grants.append(parse(expression).grant)
            except ParseError as exc:
                errors.append({"index": index, "message": exc.message, "offset": exc.offset})
        if errors:
            return _json_response(
                {
                    "code": "parse-error",
                    "message": "one or more expressions failed to parse",
                    "errors": errors,
                },
                status=422,
            )
        return _json_response(combine_document(combine(grants)))

    @app.post("/v1/topsheet")
    async def topsheet_endpoint(request: Request) -> Response:
        body = await _body_object(request)
        grant = _parse_expression(_field(body, "expression", str))
        format_token = _field(body, "format", str, required=False, default="structured")
        if format_token == "structured":
            return _json_response(render_topsheet(grant, "structured"))
        if format_token == "markdown":
            return Response(
                content=render_topsheet(grant, "markdown"), media_type="text/markdown"
            )
        if format_token == "html":
            return Response(content=render_topsheet(grant, "html"), media_type="text/html")
        raise ApiError(400, "bad-field", f"unknown format {format_token!r}", field="format")

    return app


app = create_app()


def main() -> None:
    import uvicorn

    addr = os.environ.get(ADDR_ENV, "127.0.0.1:8000")
    host, _, port = addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")


if __name__ == "__main__":
    main()
