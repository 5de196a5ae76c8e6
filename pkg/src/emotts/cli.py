"""Command-line interface: preprocess, train-classifier, train-acoustic,
synth, classify, bench, serve.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

import argparse
import shutil
import sys
from pathlib import Path

from .emotions import EMOTION_NAMES, EMOTION_TO_ID
from .errors import EmottsError

EMOTION_CHOICES = tuple(EMOTION_NAMES) + ("auto",)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emotts", description="emotion-aware text-to-speech toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="ingest a corpus into a feature manifest")
    p.add_argument("--audio-dir", required=True)
    p.add_argument("--textgrid-dir", required=True)
    p.add_argument("--metadata", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--sample-rate", type=int, default=22050)

    p = sub.add_parser("train-classifier", help="train the text emotion classifier")
    p.add_argument("--data", required=True, help="TSV file: text<TAB>emotion per line")
    p.add_argument("--out", required=True, help="classifier checkpoint path")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train-acoustic", help="train the acoustic model")
    p.add_argument("--dataset", required=True, help="manifest dir from preprocess")
    p.add_argument("--out-dir", required=True, help="checkpoint bundle directory")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--warmup", type=int, default=4000)
    p.add_argument("--base-scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checkpoint-every", type=int, default=None)
    p.add_argument(
        "--preset", choices=("full", "toy"), default="full",
        help="full: 4/6-layer 256-hidden model; toy: small desk-scale model",
    )
    p.add_argument("--classifier", help="classifier checkpoint to copy into the bundle")

    p = sub.add_parser("synth", help="synthesize speech from text")
    p.add_argument("--checkpoint-dir", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--speaker", required=True)
    p.add_argument("--emotion", choices=EMOTION_CHOICES, default="auto")
    p.add_argument("--out", required=True, help="output WAV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocoder", choices=("griffin_lim", "neural"), default=None)

    p = sub.add_parser("classify", help="classify the emotion of a text")
    p.add_argument("--checkpoint-dir")
    p.add_argument("--classifier", help="explicit classifier checkpoint path")
    p.add_argument("--text", required=True)

    p = sub.add_parser("bench", help="measure synthesis timing and RTF")
    p.add_argument("--checkpoint-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--text", default="Keep an eye on him.")
    p.add_argument("--speakers", nargs="*", default=None)
    p.add_argument("--emotions", nargs="*", choices=EMOTION_CHOICES, default=["neutral"])
    p.add_argument("--repeats", type=int, default=3)

    p = sub.add_parser("serve", help="run the HTTP synthesis service")
    p.add_argument("--checkpoint-dir")
    p.add_argument("--config", help="KEY=VALUE service config file")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)

    return parser


def _cmd_preprocess(args) -> int:
    from .corpus import FeatureConfig, build_dataset, compute_stats, save_dataset
    from .corpus.dataset import lint_silence, phones_tier
    from .corpus.textgrid import parse_textgrid

    config = FeatureConfig(sample_rate=args.sample_rate)
    utterances = build_dataset(args.audio_dir, args.textgrid_dir, args.metadata, config)
    stats = compute_stats(utterances)
    save_dataset(utterances, args.out_dir, config, stats)
    print(f"wrote {len(utterances)} utterances to {args.out_dir}")

    for utt in utterances:
        tg_path = Path(args.textgrid_dir) / f"{utt.record.file_id}.TextGrid"
        tier = phones_tier(parse_textgrid(tg_path.read_text(encoding="utf-8")))
        for note in lint_silence(tier):
            print(f"lint: {utt.record.file_id}: {note}")
    return 0


def _cmd_train_classifier(args) -> int:
    from .emoclass import train_classifier

    pairs = []
    for raw in Path(args.data).read_text(encoding="utf-8").splitlines():
        if not raw.strip():
            continue
        text, label = raw.rsplit("\t", 1)
        pairs.append((text, label.strip()))
    bundle = train_classifier(
        pairs, epochs=args.epochs, batch_size=args.batch_size, lr=args.lr, seed=args.seed
    )
    bundle.save(args.out)
    last = bundle.history[-1]
    print(
        f"saved {args.out}: {len(pairs)} samples, {args.epochs} epochs, "
        f"loss {last['loss']:.4f}, macro-F1 {last['macro_f1']:.3f}"
    )
    return 0


def _cmd_train_acoustic(args) -> int:
    import torch

    from .acoustic import AcousticConfig, AcousticModel
    from .corpus import load_dataset
    from .emotions import write_emotions_json
    from .speakers import speaker_table, write_speakers_json
    from .training import OptimizerConfig, train_acoustic

    utterances, feature_config, stats = load_dataset(args.dataset)
    speakers = speaker_table(u.record.speaker_id for u in utterances)
    if args.preset == "toy":
        config = AcousticConfig(
            n_speakers=len(speakers), encoder_layers=2, decoder_layers=2,
            encoder_hidden=64, decoder_hidden=64, fft_inner=128,
            variance_filter=64, postnet_channels=64, variance_bins=64,
            n_mels=feature_config.n_mels,
        )
    else:
        config = AcousticConfig(n_speakers=len(speakers), n_mels=feature_config.n_mels)
    torch.manual_seed(args.seed)
    model = AcousticModel(config, stats)
    optimizer = OptimizerConfig(
        batch_size=args.batch_size, warmup=args.warmup, base_scale=args.base_scale
    )
    result = train_acoustic(
        utterances, model, optimizer, steps=args.steps, seed=args.seed,
        out_dir=args.out_dir, feature_config=feature_config, speakers=speakers,
        checkpoint_every=args.checkpoint_every,
    )
    out_dir = Path(args.out_dir)
    write_speakers_json(result.speakers, out_dir / "speakers.json")
    write_emotions_json(out_dir / "emotions.json")
    if args.classifier:
        shutil.copyfile(args.classifier, out_dir / "classifier.ckpt")
    first, last = result.history[0]["total"], result.history[-1]["total"]
    print(
        f"trained {args.steps} steps: total loss {first:.4f} -> {last:.4f}; "
        f"bundle at {out_dir}"
    )
    return 0


def _resolve_emotion(name: str):
    return None if name == "auto" else EMOTION_TO_ID[name]


def _cmd_synth(args) -> int:
    from .synthesizer import SynthesisRequest, Synthesizer
    from .vocoder import write_wav

    synthesizer = Synthesizer.from_dir(args.checkpoint_dir, vocoder=args.vocoder)
    request = SynthesisRequest(
        text=args.text, speaker_id=args.speaker,
        emotion=_resolve_emotion(args.emotion), seed=args.seed,
    )
    waveform, diagnostics = synthesizer.synthesize(request)
    write_wav(waveform, args.out)
    print(
        f"wrote {args.out}: {waveform.duration:.2f}s, emotion "
        f"{diagnostics.emotion_name} ({diagnostics.emotion_source}), "
        f"{diagnostics.frames} frames"
    )
    return 0


def _cmd_classify(args) -> int:
    from .emoclass import ClassifierBundle

    path = args.classifier
    if path is None:
        if args.checkpoint_dir is None:
            print("classify: --checkpoint-dir or --classifier is required", file=sys.stderr)
            return 2
        path = str(Path(args.checkpoint_dir) / "classifier.ckpt")
    bundle = ClassifierBundle.load(path)
    output = bundle.classify_text(args.text)
    for name, idx in EMOTION_TO_ID.items():
        print(f"{name}: {output.probs[idx]:.4f}")
    print(f"predicted: {output.predicted.name} ({output.predicted.id})")
    return 0


def _cmd_bench(args) -> int:
    from .evalkit import emit_report, time_synthesis
    from .synthesizer import SynthesisRequest, Synthesizer

    synthesizer = Synthesizer.from_dir(args.checkpoint_dir)
    speakers = args.speakers or sorted(synthesizer.speakers)
    results = []
    for speaker in speakers:
        for emotion in args.emotions:
            request = SynthesisRequest(
                text=args.text, speaker_id=speaker, emotion=_resolve_emotion(emotion)
            )
            result = time_synthesis(synthesizer, request, repeats=args.repeats)
            results.append(result)
            print(
                f"{result.method:<10} {speaker:<8} {result.emotion:<11} "
                f"{result.wall_seconds:.3f}s rtf {result.rtf:.3f}"
            )
    paths = emit_report(results, out_dir=args.out_dir, rtf_reference=True)
    print(f"report written to {paths['run_json'].parent}")
    return 0


def _cmd_serve(args) -> int:
    from .service import ServiceConfig, apply_env_overrides, load_service_config, serve

    if args.config:
        config = load_service_config(args.config)
    elif args.checkpoint_dir:
        config = apply_env_overrides(ServiceConfig.from_bundle_dir(args.checkpoint_dir))
    else:
        print("serve: --checkpoint-dir or --config is required", file=sys.stderr)
        return 2
    overrides = {}
    if args.host:
        overrides["host"] = args.host
    if args.port:
        overrides["port"] = args.port
    if args.workers:
        overrides["workers"] = args.workers
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    serve(config)
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "train-classifier": _cmd_train_classifier,
    "train-acoustic": _cmd_train_acoustic,
    "synth": _cmd_synth,
    "classify": _cmd_classify,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except EmottsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
