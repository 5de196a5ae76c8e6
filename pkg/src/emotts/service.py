"""HTTP synthesis service: JSON in, WAV out, plus speaker/emotion metadata
endpoints and a diagnostics variant returning the mel spectrogram.

Models are loaded once at startup and never mutated; a bounded semaphore
caps concurrent syntheses. Every 4xx/5xx body is a JSON object
{"code", "field", "message"} with codes from ERROR_CODES.
"""

import base64
import json
import os
import threading
import uuid
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .emotions import EMOTION_TO_ID, N_EMOTIONS
from .errors import EmottsError, ModelNotLoaded, UnknownSpeaker
from .speakers import speaker_gender
from .synthesizer import (
    ACOUSTIC_FILE,
    CLASSIFIER_FILE,
    VOCODER_FILE,
    SynthesisRequest,
    Synthesizer,
)
from .vocoder.wavio import wav_bytes

ERROR_CODES = (
    "BAD_JSON",
    "MISSING_FIELD",
    "EMPTY_TEXT",
    "TEXT_TOO_LONG",
    "INVALID_EMOTION",
    "INVALID_SEED",
    "UNKNOWN_SPEAKER",
    "CLASSIFIER_UNAVAILABLE",
    "NOT_FOUND",
    "METHOD_NOT_ALLOWED",
    "HTTP_ERROR",
    "INTERNAL",
)

DEFAULT_MAX_TEXT_LENGTH = 500


@dataclass(frozen=True)
class ServiceConfig:
    acoustic_checkpoint: str
    classifier_checkpoint: str = None
    vocoder_checkpoint: str = None
    host: str = "127.0.0.1"
    port: int = 8321
    default_speaker: str = None
    max_text_length: int = DEFAULT_MAX_TEXT_LENGTH
    vocoder: str = None  # griffin_lim | neural; None picks neural when loaded
    workers: int = None

    def __post_init__(self):
        if self.max_text_length < 1:
            raise ValueError("max_text_length must be >= 1")

    def validate_paths(self) -> None:
        for label, path in (
            ("acoustic", self.acoustic_checkpoint),
            ("classifier", self.classifier_checkpoint),
            ("vocoder", self.vocoder_checkpoint),
        ):
            if path is not None and not Path(path).exists():
                raise ModelNotLoaded(f"{label} checkpoint not found: {path}")

    @classmethod
    def from_bundle_dir(cls, bundle_dir, **overrides) -> "ServiceConfig":
        bundle_dir = Path(bundle_dir)
        classifier = bundle_dir / CLASSIFIER_FILE
        vocoder = bundle_dir / VOCODER_FILE
        return cls(
            acoustic_checkpoint=str(bundle_dir / ACOUSTIC_FILE),
            classifier_checkpoint=str(classifier) if classifier.exists() else None,
            vocoder_checkpoint=str(vocoder) if vocoder.exists() else None,
            **overrides,
        )


_INT_KEYS = {"port", "max_text_length", "workers"}


def load_service_config(path) -> ServiceConfig:
    """Parse the KEY=VALUE config file; EMOTTS_HOST/EMOTTS_PORT override."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected KEY=VALUE, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = int(value) if key in _INT_KEYS else value
    config = ServiceConfig(**values)
    return apply_env_overrides(config)


def apply_env_overrides(config: ServiceConfig) -> ServiceConfig:
    host = os.environ.get("EMOTTS_HOST")
    port = os.environ.get("EMOTTS_PORT")
    if host:
        config = replace(config, host=host)
    if port:
        config = replace(config, port=int(port))
    return config


def build_synthesizer(config: ServiceConfig) -> Synthesizer:
    config.validate_paths()
    from .acoustic.io import load_acoustic
    from .emoclass.model import ClassifierBundle
    from .vocoder.generator import load_generator

    model, speakers, feature_config = load_acoustic(config.acoustic_checkpoint)
    classifier = (
        ClassifierBundle.load(config.classifier_checkpoint)
        if config.classifier_checkpoint
        else None
    )
    generator = (
        load_generator(config.vocoder_checkpoint) if config.vocoder_checkpoint else None
    )
    vocoder = config.vocoder or ("neural" if generator is not None else "griffin_lim")
    return Synthesizer(
        model, speakers, feature_config,
        classifier=classifier, generator=generator, vocoder=vocoder,
    )


def _error(status: int, code: str, message: str, field: str = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "field": field, "message": message},
    )


def _parse_synthesis_request(
    body: dict, synthesizer: Synthesizer, max_text: int, default_speaker=None
):
    """Validate the request body; returns SynthesisRequest or a JSONResponse."""
    if not isinstance(body, dict):
        return _error(400, "BAD_JSON", "request body must be a JSON object")
    text = body.get("text")
    if text is None:
        return _error(400, "MISSING_FIELD", "text is required", field="text")
    if not isinstance(text, str) or not text.strip():
        return _error(400, "EMPTY_TEXT", "text must be a non-empty string", field="text")
    if len(text) > max_text:
        return _error(
            400, "TEXT_TOO_LONG",
            f"text exceeds the {max_text}-character limit", field="text",
        )
    speaker = body.get("speaker_id", default_speaker)
    if not isinstance(speaker, str) or not speaker:
        return _error(400, "MISSING_FIELD", "speaker_id is required", field="speaker_id")

    emotion = body.get("emotion", "auto")
    if emotion in (None, "auto"):
        emotion_id = None
        if synthesizer.classifier is None:
            return _error(
                400, "CLASSIFIER_UNAVAILABLE",
                "no classifier loaded; pick one of: " + ", ".join(EMOTION_TO_ID),
                field="emotion",
            )
    elif isinstance(emotion, str) and emotion in EMOTION_TO_ID:
        emotion_id = EMOTION_TO_ID[emotion]
    elif isinstance(emotion, int) and 0 <= emotion < N_EMOTIONS:
        emotion_id = emotion
    else:
        return _error(
            400, "INVALID_EMOTION",
            f"emotion must be 'auto' or one of: {', '.join(EMOTION_TO_ID)}",
            field="emotion",
        )

    seed = body.get("seed", 0)
    if not isinstance(seed, int):
        return _error(400, "INVALID_SEED", "seed must be an integer", field="seed")
    return SynthesisRequest(text=text, speaker_id=speaker, emotion=emotion_id, seed=seed)


def create_app(synthesizer: Synthesizer, config: ServiceConfig = None) -> FastAPI:
    max_text = config.max_text_length if config else DEFAULT_MAX_TEXT_LENGTH
    default_speaker = config.default_speaker if config else None
    workers = (config.workers if config else None) or os.cpu_count() or 1
    gate = threading.Semaphore(workers)
    app = FastAPI(title="emotts synthesis service")

    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(request: Request, exc: StarletteHTTPException):
        code = {404: "NOT_FOUND", 405: "METHOD_NOT_ALLOWED"}.get(
            exc.status_code, "HTTP_ERROR"
        )
        return _error(exc.status_code, code, str(exc.detail))

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/speakers")
    def speakers():
        table = sorted(synthesizer.speakers.items(), key=lambda kv: kv[1])
        return {
            "speakers": [
                {"id": name, "gender": speaker_gender(name)} for name, _ in table
            ]
        }

    @app.get("/emotions")
    def emotions():
        return {"emotions": dict(EMOTION_TO_ID)}

    def _synthesize(raw_body: bytes):
        """Shared validation + synthesis; returns (response|None, result)."""
        try:
            body = json.loads(raw_body) if raw_body else {}
        except json.JSONDecodeError:
            return _error(400, "BAD_JSON", "request body is not valid JSON"), None
        parsed = _parse_synthesis_request(body, synthesizer, max_text, default_speaker)
        if isinstance(parsed, JSONResponse):
            return parsed, None
        try:
            with gate:
                waveform, diagnostics = synthesizer.synthesize(parsed)
        except UnknownSpeaker as exc:
            return _error(404, "UNKNOWN_SPEAKER", str(exc), field="speaker_id"), None
        except EmottsError as exc:
            return _error(400, "EMPTY_TEXT", str(exc), field="text"), None
        except Exception:
            opaque = uuid.uuid4().hex
            return _error(500, "INTERNAL", f"internal error (id {opaque})"), None
        return None, (waveform, diagnostics)

    @app.post("/synthesize")
    async def synthesize(request: Request):
        raw_body = await request.body()
        error, result = await run_in_threadpool(_synthesize, raw_body)
        if error is not None:
            return error
        waveform, diagnostics = result
        return Response(
            content=wav_bytes(waveform),
            media_type="audio/wav",
            headers={
                "X-Emotion-Id": str(diagnostics.emotion_id),
                "X-Emotion-Name": diagnostics.emotion_name,
                "X-Emotion-Source": diagnostics.emotion_source,
            },
        )

    @app.post("/synthesize/diagnostics")
    async def synthesize_diagnostics(request: Request):
        raw_body = await request.body()
        error, result = await run_in_threadpool(_synthesize, raw_body)
        if error is not None:
            return error
        waveform, diagnostics = result
        return {
            "audio_wav_base64": base64.b64encode(wav_bytes(waveform)).decode("ascii"),
            "sample_rate": waveform.sample_rate,
            "audio_seconds": waveform.duration,
            "emotion": {
                "id": diagnostics.emotion_id,
                "name": diagnostics.emotion_name,
                "source": diagnostics.emotion_source,
            },
            "mel": [[round(float(v), 4) for v in row] for row in diagnostics.mel],
            "timings": diagnostics.timings,
        }

    return app


def serve(config: ServiceConfig) -> None:
    """Blocking uvicorn server over a freshly loaded synthesizer."""
    import uvicorn

    synthesizer = build_synthesizer(config)
    app = create_app(synthesizer, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
