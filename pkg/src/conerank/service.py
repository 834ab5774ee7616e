"""HTTP service over the same payload builders as the CLI.

Handlers return prebuilt canonical JSON bytes so responses are byte-identical
to CLI output. Error mapping: 400 validation, 404 unknown dataset, 409
revision conflict, 422 algorithm precondition (including improper cones).
What-if edits never touch the store unless ?commit=true, and commits are
serialized per dataset id.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response

from . import api
from .classify import NotSeparableError
from .geometry import (
    GeometryError,
    ImproperConeError,
    NoInteriorError,
    NotPointedError,
)
from .ranking import DEFAULT_SEED, RankingInputError
from .store import (
    CsvError,
    RevisionConflictError,
    Store,
    UnknownDatasetError,
    parse_csv,
)


class _HttpError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message


def _json_response(payload: dict, status: int = 200) -> Response:
    return Response(
        content=api.to_canonical_bytes(payload),
        media_type="application/json",
        status_code=status,
    )


def create_app(store: Store, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="conerank", docs_url=None, redoc_url=None)

    @app.exception_handler(_HttpError)
    async def _handle(request: Request, exc: _HttpError):
        return _json_response({"error": exc.message}, status=exc.status)

    def _dataset(body: dict):
        dataset_id = body.get("dataset")
        if not dataset_id:
            raise _HttpError(400, 'missing "dataset"')
        revision = body.get("revision")
        try:
            latest = store.latest_revision(dataset_id)
        except UnknownDatasetError:
            raise _HttpError(404, f"unknown dataset {dataset_id!r}") from None
        if revision is not None and revision != latest:
            raise _HttpError(
                409, f"dataset {dataset_id!r} is at revision {latest}, request pinned {revision}"
            )
        return store.get(dataset_id, latest)

    def _cone(body: dict, dim: int):
        config = body.get("cone")
        if not isinstance(config, dict):
            raise _HttpError(400, 'missing or malformed "cone" config')
        return api.resolve_cone(config, dim)

    async def _body(request: Request) -> dict:
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as e:
            raise _HttpError(400, f"invalid JSON body: {e}") from None
        if not isinstance(body, dict):
            raise _HttpError(400, "body must be a JSON object")
        return body

    def _guarded(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ImproperConeError as e:
            raise _HttpError(422, str(e)) from None
        except (NotPointedError, NoInteriorError, NotSeparableError) as e:
            raise _HttpError(422, str(e)) from None
        except (RankingInputError, GeometryError, CsvError) as e:
            raise _HttpError(400, str(e)) from None

    @app.get("/health")
    async def health():
        return _json_response({"status": "ok", "service": "conerank"})

    @app.post("/datasets")
    async def post_dataset(request: Request):
        text = (await request.body()).decode("utf-8", errors="replace")
        ds = _guarded(store.ingest_csv, text)
        return _json_response(api.dataset_payload(ds))

    @app.get("/datasets/{dataset_id}")
    async def get_dataset(dataset_id: str, revision: int | None = None):
        try:
            ds = store.get(dataset_id, revision)
        except UnknownDatasetError:
            raise _HttpError(404, f"unknown dataset {dataset_id!r}") from None
        return _json_response(api.dataset_payload(ds))

    @app.post("/rank")
    async def rank(request: Request):
        body = await _body(request)
        ds = _dataset(body)
        cone = _guarded(_cone_of, body, ds)
        payload = _guarded(
            api.rank_payload,
            ds,
            cone,
            query_points=body.get("points"),
            oracle_samples=body.get("oracle_samples"),
            seed=body.get("seed", DEFAULT_SEED),
        )
        return _json_response(payload)

    def _cone_of(body: dict, ds):
        return _cone(body, ds.alternatives.dim)

    @app.post("/setrank")
    async def setrank(request: Request):
        body = await _body(request)
        ds = _dataset(body)
        cone = _guarded(_cone_of, body, ds)
        sets = body.get("sets")
        if not isinstance(sets, dict):
            raise _HttpError(400, 'missing or malformed "sets"')
        return _json_response(_guarded(api.setrank_payload, ds, cone, sets))

    @app.post("/whatif")
    async def whatif(request: Request, commit: bool = False):
        body = await _body(request)
        ds = _dataset(body)
        cone = _guarded(_cone_of, body, ds)
        add = body.get("add") or []
        remove = body.get("remove") or []
        payload = _guarded(api.whatif_payload, ds, cone, add=add, remove=remove)
        if commit:
            from fractions import Fraction

            from .ranking import AlternativeSet, LabeledPoint

            points = []
            for pid, block in payload["points_after"].items():
                points.append(
                    LabeledPoint(pid, tuple(Fraction(c) for c in block["coords_exact"]))
                )
            points.sort(key=lambda p: p.id)
            labels = {k: v for k, v in ds.labels.items() if k not in set(remove)}
            try:
                new_ds = store.commit_revision(
                    ds.dataset_id, AlternativeSet(tuple(points)), labels, ds.revision
                )
            except RevisionConflictError as e:
                raise _HttpError(409, str(e)) from None
            payload["committed"] = True
            payload["new_revision"] = new_ds.revision
        return _json_response(payload)

    @app.post("/classify")
    async def classify_endpoint(request: Request):
        body = await _body(request)
        ds = _dataset(body)
        cone = _guarded(_cone_of, body, ds)
        payload = _guarded(
            api.classify_payload, ds, cone, n=body.get("n"), alpha=body.get("alpha")
        )
        return _json_response(payload)

    @app.post("/align")
    async def align(request: Request):
        body = await _body(request)
        ds = _dataset(body)
        cone = _guarded(_cone_of, body, ds)
        return _json_response(_guarded(api.align_payload, ds, cone))

    @app.post("/compare")
    async def compare(request: Request):
        body = await _body(request)
        ds = _dataset(body)
        cone = _guarded(_cone_of, body, ds)
        return _json_response(
            _guarded(api.compare_payload, ds, cone, weights=body.get("weights"))
        )

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
