"""HTTP service: generation, evaluation, history, and rating.

JSON request/response bodies; binary artifacts (MusicXML, MIDI) are served
from dedicated routes with their proper media types. History is global and
persists across restarts in the sqlite store.
"""

from __future__ import annotations

import base64
import binascii
import logging
from contextlib import asynccontextmanager
from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .config import DEFAULT_CONFIG, PitchConfig
from .errors import (
    AuthFailure,
    EmptyGeneration,
    EmptyLyrics,
    LyricMismatch,
    MalformedScore,
    MelodistError,
    NoPitches,
    ProviderUnavailable,
    TooShort,
    Undefined,
    UnknownKey,
    ZeroVariance,
)  # noqa: F401 (TooShort/Undefined/etc. used by /evaluate)
from .image_lyrics import LyricsRequest, provider_from_env, request_lyrics
from .metrics import evaluate_score
from .midi import MIDI_MEDIA_TYPE
from .musicxml import MUSICXML_MEDIA_TYPE, parse_musicxml
from .pipeline import compose, make_seed
from .store import SongRecord, SongStore, new_record_id, utc_now

logger = logging.getLogger(__name__)

_SNIFF = {b"\x89PNG\r\n\x1a\n": "image/png", b"\xff\xd8": "image/jpeg"}


class GenerateBody(BaseModel):
    lyrics: str | None = None
    image_base64: str | None = None
    key: str = "random"
    output: Literal["song", "music"] = "song"
    length_preference: Literal["short", "medium", "long"] = "medium"
    instrument: int = Field(default=0, ge=0, le=127)
    seed: int | None = Field(default=None, ge=0)
    title: str | None = None


class RatingBody(BaseModel):
    stars: int


class EvaluateBody(BaseModel):
    musicxml: str
    reference: str | None = None


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(
    store_path: str = "melodist.sqlite",
    stub_mode: bool | None = None,
    cfg: PitchConfig = DEFAULT_CONFIG,
) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        app.state.store.close()

    app = FastAPI(title="melodist", version=__version__, lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = SongStore(store_path)
    app.state.stub_mode = stub_mode
    app.state.cfg = cfg

    @app.exception_handler(RequestValidationError)
    async def invalid_body(request: Request, exc: RequestValidationError):
        return _error(400, f"invalid request body: {exc.errors()[:1]}")

    @app.post("/generate", status_code=201)
    def generate(body: GenerateBody):
        if (body.lyrics is None) == (body.image_base64 is None):
            return _error(400, "provide exactly one of lyrics or image_base64")
        input_kind = "lyrics" if body.lyrics is not None else "image"
        if input_kind == "image":
            try:
                image = base64.b64decode(body.image_base64, validate=True)
            except (binascii.Error, ValueError):
                return _error(400, "image_base64 is not valid base64")
            media_type = next(
                (mt for magic, mt in _SNIFF.items() if image.startswith(magic)), None
            )
            if media_type is None:
                return _error(400, "image must be PNG or JPEG")
            try:
                request = LyricsRequest(image, media_type, body.length_preference)
                provider = provider_from_env(app.state.stub_mode)
                lyrics = request_lyrics(request, provider).lyrics
            except (ProviderUnavailable, AuthFailure) as exc:
                return _error(502, str(exc))
            except EmptyGeneration as exc:
                return _error(502, f"provider produced no usable lyrics: {exc}")
        else:
            lyrics = body.lyrics
        seed = body.seed if body.seed is not None else make_seed()
        try:
            result = compose(
                lyrics,
                key=body.key,
                seed=seed,
                instrument=body.instrument,
                title=body.title,
                lyrical=body.output == "song",
                cfg=app.state.cfg,
            )
        except UnknownKey as exc:
            return _error(400, str(exc))
        except EmptyLyrics as exc:
            return _error(422, str(exc))
        except MelodistError as exc:
            logger.exception("generation failed")
            return _error(500, str(exc))
        record = SongRecord(
            id=new_record_id(),
            created_at=utc_now(),
            input_kind=input_kind,
            title=result.score.title,
            lyrics=lyrics,
            key=result.plan.ks.name,
            time_signature=result.plan.ts.name,
            seed=result.seed,
            instrument=result.score.instrument,
            lyrical=result.lyrical,
            musicxml=result.musicxml,
            midi=result.midi,
            report=result.report_dict(),
        )
        app.state.store.add(record)
        return record.public_dict()

    @app.get("/songs")
    def list_songs(limit: int = 50, offset: int = 0):
        limit = max(1, min(limit, 500))
        offset = max(0, offset)
        total, records = app.state.store.list(limit, offset)
        return {
            "total": total,
            "limit": limit,
            "offset": offset,
            "items": [r.public_dict() for r in records],
        }

    @app.get("/songs/{song_id}")
    def get_song(song_id: str):
        record = app.state.store.get(song_id)
        if record is None:
            return _error(404, "unknown song id")
        return record.public_dict()

    @app.get("/songs/{song_id}/musicxml")
    def get_musicxml(song_id: str):
        record = app.state.store.get(song_id)
        if record is None:
            return _error(404, "unknown song id")
        return Response(content=record.musicxml, media_type=MUSICXML_MEDIA_TYPE)

    @app.get("/songs/{song_id}/midi")
    def get_midi(song_id: str):
        record = app.state.store.get(song_id)
        if record is None:
            return _error(404, "unknown song id")
        return Response(content=record.midi, media_type=MIDI_MEDIA_TYPE)

    @app.post("/songs/{song_id}/rating")
    def rate_song(song_id: str, body: RatingBody):
        if not 1 <= body.stars <= 5:
            return _error(400, "stars must be between 1 and 5")
        record = app.state.store.set_rating(song_id, body.stars)
        if record is None:
            return _error(404, "unknown song id")
        return record.public_dict()

    @app.post("/evaluate")
    def evaluate(body: EvaluateBody):
        try:
            score = parse_musicxml(body.musicxml.encode("utf-8"))
            reference = (
                parse_musicxml(body.reference.encode("utf-8"))
                if body.reference is not None
                else None
            )
            report = evaluate_score(score, reference)
        except MalformedScore as exc:
            return _error(400, str(exc))
        except LyricMismatch as exc:
            return _error(409, str(exc))
        except (NoPitches, TooShort, Undefined, ZeroVariance) as exc:
            return _error(400, str(exc))
        return report.to_dict()

    return app
