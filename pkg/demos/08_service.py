"""HTTP service walkthrough: build a toy checkpoint bundle, start the
service in a background thread, and exercise the JSON/WAV endpoints."""

import json
import threading
import time
import urllib.error
import urllib.request
from pathlib import Path

import torch
import uvicorn

from emotts.acoustic import AcousticConfig, AcousticModel
from emotts.corpus import FeatureConfig
from emotts.emoclass import train_classifier
from emotts.service import ServiceConfig, build_synthesizer, create_app
from emotts.synthesizer import write_bundle

out = Path(__file__).parent / "out" / "service"
out.mkdir(parents=True, exist_ok=True)
bundle = out / "bundle"

print("== building a toy checkpoint bundle ==")
torch.manual_seed(0)
model = AcousticModel(
    AcousticConfig(
        n_speakers=4, encoder_layers=2, decoder_layers=2,
        encoder_hidden=64, decoder_hidden=64, fft_inner=128,
        variance_filter=64, postnet_channels=64,
    )
)
classifier = train_classifier(
    [("ha ha so funny", "amused"), ("full of rage", "anger"),
     ("yuck disgusting", "disgust"), ("a plain sentence", "neutral"),
     ("yawn so sleepy", "sleepiness")] * 4,
    epochs=10, seed=0,
)
write_bundle(bundle, model, {"bea": 0, "jenie": 1, "josh": 2, "sam": 3},
             FeatureConfig(), classifier=classifier)
print(f"bundle: {sorted(p.name for p in bundle.iterdir())}")

config = ServiceConfig.from_bundle_dir(bundle, host="127.0.0.1", port=8765)
app = create_app(build_synthesizer(config), config)
server = uvicorn.Server(uvicorn.Config(app, host=config.host, port=config.port,
                                       log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
base = f"http://{config.host}:{config.port}"
print(f"service up at {base}")


def get(path):
    with urllib.request.urlopen(f"{base}{path}") as response:
        return json.loads(response.read())


def post(path, body):
    request = urllib.request.Request(
        f"{base}{path}", data=json.dumps(body).encode(),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    try:
        with urllib.request.urlopen(request) as response:
            return response.status, dict(response.headers), response.read()
    except urllib.error.HTTPError as error:
        return error.code, dict(error.headers), error.read()


print("\n== metadata endpoints ==")
print("GET /speakers ->", get("/speakers"))
print("GET /emotions ->", get("/emotions"))

print("\n== synthesis ==")
status, headers, body = post("/synthesize", {
    "text": "Keep an eye on him.", "speaker_id": "bea", "emotion": "auto",
})
print(f"POST /synthesize (auto) -> {status}, {len(body)} bytes of "
      f"{headers.get('content-type')}, resolved emotion "
      f"{headers.get('x-emotion-name')} (id {headers.get('x-emotion-id')})")
(out / "demo.wav").write_bytes(body)

status, headers, body = post("/synthesize", {
    "text": "Keep an eye on him.", "speaker_id": "bea", "emotion": "neutral",
})
print(f"POST /synthesize (manual) -> {status}, source "
      f"{headers.get('x-emotion-source')}")

print("\n== validation errors are structured JSON ==")
for case in (
    {"text": "", "speaker_id": "bea"},
    {"text": "hi", "speaker_id": "nobody"},
    {"text": "hi", "speaker_id": "bea", "emotion": "joy"},
):
    status, _, body = post("/synthesize", case)
    print(f"  {status}: {json.loads(body)}")

print("\n== diagnostics endpoint ==")
status, _, body = post("/synthesize/diagnostics", {
    "text": "good morning", "speaker_id": "sam", "emotion": "neutral",
})
diag = json.loads(body)
print(f"  mel {len(diag['mel'])} frames x {len(diag['mel'][0])} bands, "
      f"timings {dict((k, round(v, 3)) for k, v in diag['timings'].items())}")

server.should_exit = True
thread.join(timeout=5)
print("\nservice stopped")
