"""Session-oriented HTTP API for the elicit-check-revise loop.

Sessions live in a single JSON file each under a data directory, so a
stopped service reloads exactly where it left off; no database.  Writes
to one session are serialized by an optimistic revision counter: a
submission carries the revision it was based on and loses with 409 if
another write landed first.  Incomplete pairwise sessions never reach
the numeric engine; their responses carry progress only.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import elicitation, montecarlo, priority
from .core import ComparisonMatrix, ValidationError

PAIRWISE = "PAIRWISE"
COIN = "COIN"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class Session:
    """Judgment session state, either a pairwise grid or a coin vector."""

    id: str
    mode: str
    n: int
    labels: list[str]
    delta: float
    created: str
    updated: str
    revision: int = 0
    judgments: dict[tuple[int, int], float] = field(default_factory=dict)
    prices: list[float] | None = None

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "mode": self.mode,
            "n": self.n,
            "labels": list(self.labels),
            "delta": self.delta,
            "created": self.created,
            "updated": self.updated,
            "revision": self.revision,
        }
        if self.mode == PAIRWISE:
            out["judgments"] = [
                [r, c, v] for (r, c), v in sorted(self.judgments.items())
            ]
        else:
            out["prices"] = list(self.prices or [])
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "Session":
        return cls(
            id=obj["id"],
            mode=obj["mode"],
            n=obj["n"],
            labels=list(obj["labels"]),
            delta=obj["delta"],
            created=obj["created"],
            updated=obj["updated"],
            revision=obj["revision"],
            judgments={(int(r), int(c)): float(v) for r, c, v in obj.get("judgments", [])},
            prices=list(obj["prices"]) if obj.get("prices") is not None else None,
        )

    # -- state inspection ----------------------------------------------

    def total_slots(self) -> int:
        return self.n * (self.n - 1)

    def is_complete(self) -> bool:
        if self.mode == COIN:
            return True
        return len(self.judgments) == self.total_slots()

    def matrix_entries(self) -> np.ndarray:
        """Current matrix; unset pairwise cells appear as the identity placeholder 1."""
        if self.mode == COIN:
            return elicitation.coin_to_matrix(elicitation.CoinVector(np.asarray(self.prices))).entries
        a = np.ones((self.n, self.n))
        for (r, c), v in self.judgments.items():
            a[r, c] = v
        return a

    def matrix(self) -> ComparisonMatrix:
        if not self.is_complete():
            raise ValidationError("session is incomplete")
        return ComparisonMatrix(self.matrix_entries())


class SessionStore:
    """JSON-file-per-session persistence with per-session write locks."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        for path in sorted(self.data_dir.glob("*.json")):
            with open(path, "r", encoding="utf-8") as fh:
                session = Session.from_dict(json.load(fh))
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def _persist(self, session: Session) -> None:
        path = self.data_dir / f"{session.id}.json"
        tmp = path.with_suffix(".json.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(session.to_dict(), fh)
        os.replace(tmp, path)

    def add(self, session: Session) -> None:
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self._persist(session)

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            lock = self._locks.get(session_id)
        if lock is None:
            raise KeyError(session_id)
        return lock

    def mutate(self, session_id: str, expected_revision: int, apply) -> Session:
        """Run `apply(session)` under the write lock iff the revision matches."""
        lock = self.lock(session_id)
        with lock:
            session = self.get(session_id)
            if expected_revision != session.revision:
                raise RevisionConflict(session.revision)
            apply(session)
            session.revision += 1
            session.updated = _now()
            self._persist(session)
            return session


class RevisionConflict(Exception):
    def __init__(self, current_revision: int):
        self.current_revision = current_revision
        super().__init__(f"stale revision; session is at {current_revision}")


# --- request bodies ---------------------------------------------------------


class CreateSessionBody(BaseModel):
    mode: str
    n: int
    labels: list[str] | None = None
    delta: float = 0.1


class JudgmentBody(BaseModel):
    row: int
    col: int
    value: float
    reciprocal_fill: bool = True
    revision: int


class WhatIfBody(BaseModel):
    row: int
    col: int
    value: float


class CoinBody(BaseModel):
    prices: list[float]
    revision: int


class PanelBody(BaseModel):
    importance: list[float]
    vectors: list[list[float]]


# --- response assembly ------------------------------------------------------


def _engine_report(matrix: ComparisonMatrix, delta: float) -> dict:
    report = priority.consistency_report(matrix, delta=delta)
    eig = priority.eigen_weights(matrix)
    llsm = priority.llsm_weights(matrix)
    dev = priority.deviation_matrix(matrix)
    hint = elicitation.revision_hint(matrix)
    return {
        "consistency": report.to_dict(),
        "eigen_weights": [float(w) for w in eig.weights.weights],
        "llsm_weights": [float(w) for w in llsm.weights],
        "deviation": [[float(v) for v in row] for row in dev.residuals],
        "hint": None
        if hint is None
        else {
            "row": hint.row,
            "col": hint.col,
            "current_value": hint.current_value,
            "suggested_value": hint.suggested_value,
        },
    }


def _session_payload(session: Session) -> dict:
    complete = session.is_complete()
    payload = {
        "session": session.to_dict(),
        "status": "COMPLETE" if complete else "INCOMPLETE",
        "progress": {
            "set": session.total_slots() if session.mode == COIN else len(session.judgments),
            "total": session.total_slots(),
        },
        "matrix": [[float(v) for v in row] for row in session.matrix_entries()],
        "report": None,
    }
    if complete:
        payload["report"] = _engine_report(session.matrix(), session.delta)
    return payload


def create_app(data_dir: str | Path) -> FastAPI:
    app = FastAPI(title="priorank service")
    store = SessionStore(data_dir)
    app.state.store = store

    @app.exception_handler(ValidationError)
    def _validation(_, exc: ValidationError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    def _get_or_404(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        if body.mode not in (PAIRWISE, COIN):
            raise HTTPException(status_code=422, detail=f"mode must be PAIRWISE or COIN, got {body.mode!r}")
        if body.n < 2:
            raise HTTPException(status_code=422, detail=f"n must be >= 2, got {body.n}")
        if body.delta <= 0:
            raise HTTPException(status_code=422, detail="delta must be > 0")
        labels = body.labels if body.labels is not None else [f"item{i + 1}" for i in range(body.n)]
        if len(labels) != body.n:
            raise HTTPException(status_code=422, detail=f"expected {body.n} labels, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise HTTPException(status_code=422, detail="labels must be distinct")
        now = _now()
        session = Session(
            id=uuid.uuid4().hex,
            mode=body.mode,
            n=body.n,
            labels=list(labels),
            delta=body.delta,
            created=now,
            updated=now,
            prices=[1.0] * body.n if body.mode == COIN else None,
        )
        store.add(session)
        return _session_payload(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_payload(_get_or_404(session_id))

    @app.put("/sessions/{session_id}/judgments")
    def submit_judgment(session_id: str, body: JudgmentBody):
        session = _get_or_404(session_id)
        if session.mode != PAIRWISE:
            raise HTTPException(status_code=422, detail="judgments apply to PAIRWISE sessions; use /coin")
        n = session.n
        if not (0 <= body.row < n and 0 <= body.col < n) or body.row == body.col:
            raise HTTPException(status_code=422, detail=f"bad cell ({body.row}, {body.col}) for n={n}")
        if not (body.value > 0 and np.isfinite(body.value)):
            raise HTTPException(status_code=422, detail=f"judgment must be finite and > 0, got {body.value}")

        def apply(s: Session) -> None:
            s.judgments[(body.row, body.col)] = float(body.value)
            if body.reciprocal_fill:
                s.judgments[(body.col, body.row)] = 1.0 / float(body.value)

        try:
            session = store.mutate(session_id, body.revision, apply)
        except RevisionConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return _session_payload(session)

    @app.put("/sessions/{session_id}/coin")
    def put_coin(session_id: str, body: CoinBody):
        session = _get_or_404(session_id)
        if session.mode != COIN:
            raise HTTPException(status_code=422, detail="price vectors apply to COIN sessions")
        if len(body.prices) != session.n:
            raise HTTPException(status_code=422, detail=f"expected {session.n} prices, got {len(body.prices)}")
        prices = elicitation.CoinVector(np.asarray(body.prices, dtype=float))  # validates

        def apply(s: Session) -> None:
            s.prices = [float(v) for v in prices.prices]

        try:
            session = store.mutate(session_id, body.revision, apply)
        except RevisionConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return _session_payload(session)

    @app.post("/sessions/{session_id}/whatif")
    def whatif(session_id: str, body: WhatIfBody):
        session = _get_or_404(session_id)
        if not session.is_complete():
            raise HTTPException(status_code=422, detail="whatif needs a complete session")
        n = session.n
        if not (0 <= body.row < n and 0 <= body.col < n) or body.row == body.col:
            raise HTTPException(status_code=422, detail=f"bad cell ({body.row}, {body.col}) for n={n}")
        if not (body.value > 0 and np.isfinite(body.value)):
            raise HTTPException(status_code=422, detail=f"judgment must be finite and > 0, got {body.value}")
        entries = session.matrix_entries().copy()
        entries[body.row, body.col] = float(body.value)
        matrix = ComparisonMatrix(entries)
        return {
            "session_id": session.id,
            "revision": session.revision,  # unchanged: no mutation
            "row": body.row,
            "col": body.col,
            "value": body.value,
            "report": _engine_report(matrix, session.delta),
        }

    @app.post("/panels/aggregate")
    def aggregate(body: PanelBody):
        panel = elicitation.PanelWeights(np.asarray(body.importance, dtype=float))
        vectors = [elicitation.CoinVector(np.asarray(v, dtype=float)) for v in body.vectors]
        merged = elicitation.aggregate_panel(vectors, panel)
        matrix = elicitation.coin_to_matrix(merged)
        return {
            "prices": [float(v) for v in merged.prices],
            "matrix": [[float(v) for v in row] for row in matrix.entries],
        }

    @app.get("/census")
    def census(n: str, samples: int = 10000, seed: int = 0, threshold: float = 0.1):
        from .cli import _parse_n_range

        results = montecarlo.consistency_census(
            _parse_n_range(n), samples, threshold=threshold, seed=seed
        )
        return [r.to_dict() for r in results]

    return app
