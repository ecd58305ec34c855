"""HTTP service: sessions, per-stroke classification, iterative search,
screen images, and feedback logging.

All endpoints speak JSON.  Error responses always carry
``{"error": {"code": <stable-string>, "message": <human text>}}``; the code
set is fixed (see docs/api.md).  Mutating endpoints accept an optional
client ``nonce`` — replaying a nonce returns the cached response instead of
re-applying the mutation, so lossy clients can retry safely.
"""

from __future__ import annotations

import json
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse

from .canvas import CanvasState, build_query, snapshot_of
from .categories import CATEGORIES
from .classify import ElementPrediction, Recognizer
from .corpus import CorpusIndex
from .errors import EmptyQueryError, InvalidInputError, InvalidStateError
from .search import PAGE_SIZE, Ranking, rank_all

DEFAULT_TTL_SECONDS = 3600.0

_SCREEN_ID = re.compile(r"^[A-Za-z0-9_-]{1,128}$")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class _Session:
    id: str
    state: CanvasState
    created: float
    last_active: float
    ranking: Ranking | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    nonces: dict[str, tuple[int, dict]] = field(default_factory=dict)


def _prediction_payload(pred: ElementPrediction | None) -> list[dict]:
    if pred is None:
        return []
    return [{"category": cat, "confidence": conf} for cat, conf in pred.entries]


def create_app(
    index: CorpusIndex,
    screens_dir=None,
    *,
    recognizer: Recognizer | None = None,
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    w_pos: float = 0.7,
    w_shape: float = 0.3,
    feedback_path=None,
    frontend_dir=None,
    clock=None,
) -> FastAPI:
    """Build the application around one immutable corpus index.

    ``clock`` is injectable for TTL tests; defaults to ``time.monotonic``.
    ``frontend_dir``, when given, is served at ``/`` (static files).
    """
    now = clock or time.monotonic
    screens = Path(screens_dir) if screens_dir else None
    feedback_file = Path(feedback_path) if feedback_path else None

    app = FastAPI(
        title="sketchsearch service",
        version="0.1.0",
        description="Sketch-driven mobile-screen search: draw elements, get ranked screens.",
    )
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()
    feedback_lock = threading.Lock()
    app.state.feedback_records = []

    @app.exception_handler(ApiError)
    async def _api_error(_request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": {"code": exc.code, "message": exc.message}}
        )

    def _purge_expired() -> None:
        cutoff = now() - ttl_seconds
        with registry_lock:
            dead = [sid for sid, s in sessions.items() if s.last_active < cutoff]
            for sid in dead:
                del sessions[sid]

    def _get_session(session_id) -> _Session:
        if not isinstance(session_id, str) or not session_id:
            raise ApiError(400, "invalid_body", "session_id must be a non-empty string")
        with registry_lock:
            sess = sessions.get(session_id)
            if sess is not None and sess.last_active < now() - ttl_seconds:
                del sessions[session_id]
                sess = None
        if sess is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r} (unknown or expired)")
        sess.last_active = now()
        return sess

    async def _body(request: Request) -> dict:
        try:
            raw = await request.body()
            doc = json.loads(raw) if raw else {}
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ApiError(400, "invalid_body", f"body is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ApiError(400, "invalid_body", "body must be a JSON object")
        return doc

    def _cached(sess: _Session, nonce, payload_fn, status: int = 200):
        """Run a mutation once per nonce; replays return the cached response."""
        if nonce is not None and not isinstance(nonce, str):
            raise ApiError(400, "invalid_body", "nonce must be a string")
        if nonce is not None and nonce in sess.nonces:
            cached_status, cached_payload = sess.nonces[nonce]
            return JSONResponse(status_code=cached_status, content=cached_payload)
        payload = payload_fn()
        if nonce is not None:
            sess.nonces[nonce] = (status, payload)
        return JSONResponse(status_code=status, content=payload)

    def _results_payload(ranking: Ranking | None, page: int) -> dict:
        if ranking is None:
            return {"page": page, "total": 0, "results": []}
        res = ranking.page(page)
        return {
            "page": res.page,
            "total": res.total,
            "results": [
                {
                    "id": sid,
                    "score": score,
                    "thumb": f"/screens/{sid}/thumb",
                    "full": f"/screens/{sid}/full",
                }
                for sid, score in res.entries
            ],
        }

    def _run_search(sess: _Session) -> None:
        try:
            query = build_query(sess.state)
        except EmptyQueryError:
            sess.ranking = None
            return
        sess.ranking = rank_all(query, index, w_pos=w_pos, w_shape=w_shape)

    # -- session lifecycle ----------------------------------------------------

    session_nonces: dict[str, dict] = {}

    @app.post("/api/session")
    async def create_session(request: Request):
        """Open a fresh drawing session; returns its opaque id."""
        body = await _body(request)
        nonce = body.get("nonce")
        if nonce is not None and not isinstance(nonce, str):
            raise ApiError(400, "invalid_body", "nonce must be a string")
        _purge_expired()
        with registry_lock:
            if nonce is not None and nonce in session_nonces:
                return JSONResponse(session_nonces[nonce])
            sid = uuid.uuid4().hex
            sessions[sid] = _Session(id=sid, state=CanvasState(), created=now(), last_active=now())
            payload = {"session_id": sid}
            if nonce is not None:
                session_nonces[nonce] = payload
        return JSONResponse(payload)

    # -- drawing --------------------------------------------------------------

    @app.post("/api/stroke")
    async def add_stroke(request: Request):
        """Append one stroke; returns the live top-3 for the partial sketch."""
        body = await _body(request)
        sess = _get_session(body.get("session_id"))
        points = body.get("points")
        if not isinstance(points, list) or not points:
            raise ApiError(400, "invalid_body", "points must be a non-empty list of [x, y] pairs")

        def apply() -> dict:
            try:
                sess.state.add_stroke(points)
            except (InvalidInputError, TypeError, ValueError) as exc:
                raise ApiError(400, "invalid_body", f"bad stroke points: {exc}") from exc
            pred = sess.state.predict_current(recognizer)
            return {"top3": _prediction_payload(pred), "noop": False}

        with sess.lock:
            return _cached(sess, body.get("nonce"), apply)

    @app.post("/api/stroke/undo")
    async def undo_stroke(request: Request):
        """Move the last stroke to the redo stack (no-op flag when empty)."""
        body = await _body(request)
        sess = _get_session(body.get("session_id"))

        def apply() -> dict:
            applied = sess.state.undo_stroke()
            pred = sess.state.predict_current(recognizer)
            return {"noop": not applied, "top3": _prediction_payload(pred)}

        with sess.lock:
            return _cached(sess, body.get("nonce"), apply)

    @app.post("/api/stroke/redo")
    async def redo_stroke(request: Request):
        """Re-apply the most recently undone stroke."""
        body = await _body(request)
        sess = _get_session(body.get("session_id"))

        def apply() -> dict:
            applied = sess.state.redo_stroke()
            pred = sess.state.predict_current(recognizer)
            return {"noop": not applied, "top3": _prediction_payload(pred)}

        with sess.lock:
            return _cached(sess, body.get("nonce"), apply)

    @app.post("/api/element/done")
    async def element_done(request: Request):
        """Commit the current sketch as an element and run the full search."""
        body = await _body(request)
        sess = _get_session(body.get("session_id"))
        chosen = body.get("chosen")
        if chosen is not None and chosen not in CATEGORIES:
            raise ApiError(400, "invalid_body", f"chosen must be one of the 23 categories, got {chosen!r}")

        def apply() -> dict:
            try:
                element = sess.state.commit_element(chosen=chosen, recognizer=recognizer)
            except InvalidStateError as exc:
                raise ApiError(409, "empty_sketch", str(exc)) from exc
            _run_search(sess)
            payload = _results_payload(sess.ranking, 0)
            payload["committed"] = {
                "category": element.category,
                "bbox": [float(v) for v in element.bbox],
            }
            payload["noop"] = False
            return payload

        with sess.lock:
            return _cached(sess, body.get("nonce"), apply)

    @app.post("/api/element/remove-last")
    async def remove_last(request: Request):
        """Drop the most recent committed element and re-run the search."""
        body = await _body(request)
        sess = _get_session(body.get("session_id"))

        def apply() -> dict:
            applied = sess.state.remove_last_icon()
            if applied:
                _run_search(sess)
            payload = _results_payload(sess.ranking, 0)
            payload["noop"] = not applied
            return payload

        with sess.lock:
            return _cached(sess, body.get("nonce"), apply)

    # -- results & feedback -----------------------------------------------------

    @app.get("/api/results")
    async def get_results(request: Request):
        """A cached ranking page (no re-scoring); 409 before the first search."""
        params = request.query_params
        sess = _get_session(params.get("session_id"))
        raw_page = params.get("page", "0")
        try:
            page = int(raw_page)
        except ValueError:
            raise ApiError(400, "invalid_body", f"page must be an integer, got {raw_page!r}")
        if page < 0:
            raise ApiError(400, "invalid_body", "page must be >= 0")
        with sess.lock:
            if sess.ranking is None:
                raise ApiError(409, "no_search_yet", "no search has run in this session")
            return JSONResponse(_results_payload(sess.ranking, page))

    @app.post("/api/feedback")
    async def feedback(request: Request):
        """Record a thumbs up/down vote with the current query snapshot."""
        body = await _body(request)
        sess = _get_session(body.get("session_id"))
        vote = body.get("vote")
        if vote not in ("up", "down"):
            raise ApiError(400, "invalid_vote", f"vote must be 'up' or 'down', got {vote!r}")

        def apply() -> dict:
            snap = snapshot_of(sess.state)
            record = {
                "ts": time.time(),
                "session_id": sess.id,
                "vote": vote,
                "query": {
                    "elements": [
                        {"category": cat, "bbox": [float(v) for v in bbox]}
                        for cat, bbox in snap.elements
                    ]
                },
            }
            with feedback_lock:
                app.state.feedback_records.append(record)
                if feedback_file is not None:
                    with feedback_file.open("a") as fh:
                        fh.write(json.dumps(record, sort_keys=True) + "\n")
            return {"ok": True, "noop": False}

        with sess.lock:
            return _cached(sess, body.get("nonce"), apply)

    # -- screen images ----------------------------------------------------------

    def _screen_file(screen_id: str, kind: str):
        if not _SCREEN_ID.match(screen_id) or screens is None:
            raise ApiError(404, "unknown_screen", f"no screen {screen_id!r}")
        path = screens / f"{screen_id}.{kind}"
        if not path.is_file():
            raise ApiError(404, "unknown_screen", f"no screen {screen_id!r}")
        return FileResponse(
            path,
            media_type="image/png",
            headers={"Cache-Control": "public, max-age=86400, immutable"},
        )

    @app.get("/screens/{screen_id}/thumb")
    async def screen_thumb(screen_id: str):
        """Gallery-resolution screenshot."""
        return _screen_file(screen_id, "thumb")

    @app.get("/screens/{screen_id}/full")
    async def screen_full(screen_id: str):
        """Full-resolution screenshot (fetched on enlarge)."""
        return _screen_file(screen_id, "full")

    if frontend_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="frontend")

    return app
