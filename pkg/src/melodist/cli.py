"""Command-line interface: generate, evaluate, compare, list-keys, serve.

Exit codes: 0 success, 2 usage/missing file, 3 empty lyrics or malformed
score, 4 provider/network errors, 5 lyric mismatch.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import DEFAULT_CONFIG, load_config
from .errors import (
    AuthFailure,
    ConfigError,
    EmptyGeneration,
    EmptyLyrics,
    LyricMismatch,
    MalformedScore,
    MelodistError,
    ProviderUnavailable,
)
from .image_lyrics import LyricsRequest, provider_from_env, request_lyrics
from .metrics import evaluate_corpus, evaluate_score, plot_table, write_report
from .musicxml import parse_musicxml
from .pipeline import artifact_basename, candidate_keys_for_compare, compose, extract_lyrics
from .theory import KEY_CATALOG

EXIT_USAGE = 2
EXIT_BAD_INPUT = 3
EXIT_PROVIDER = 4
EXIT_MISMATCH = 5

logger = logging.getLogger(__name__)


def _report_lines(report_dict: dict) -> list[str]:
    return [f"{name}={value}" for name, value in report_dict.items()]


def _print_report(report_dict: dict, pretty: bool) -> None:
    if pretty:
        width = max(len(name) for name in report_dict)
        for name, value in report_dict.items():
            print(f"  {name:<{width}}  {value}")
    else:
        for line in _report_lines(report_dict):
            print(line)


def _read_text(path: str) -> str:
    return Path(path).read_text("utf-8")


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = DEFAULT_CONFIG
    if args.config:
        try:
            cfg = load_config(args.config)
        except (ConfigError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    source = args.lyrics or args.image
    if not Path(source).is_file():
        print(f"error: no such file: {source}", file=sys.stderr)
        return EXIT_USAGE
    if args.lyrics:
        text = _read_text(args.lyrics)
    else:
        image = Path(args.image).read_bytes()
        media_type = "image/png" if image[:8] == b"\x89PNG\r\n\x1a\n" else "image/jpeg"
        try:
            request = LyricsRequest(image, media_type, args.length)
            provider = provider_from_env(args.stub or None)
            text = request_lyrics(request, provider).lyrics
        except (ProviderUnavailable, AuthFailure, EmptyGeneration) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PROVIDER
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        result = compose(
            text,
            key=args.key,
            seed=args.seed,
            instrument=args.instrument,
            title=args.title,
            lyrical=args.output == "song",
            cfg=cfg,
        )
    except EmptyLyrics as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except MelodistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = artifact_basename(text, result.plan.ks, result.seed)
    (out_dir / f"{base}.musicxml").write_bytes(result.musicxml)
    (out_dir / f"{base}.mid").write_bytes(result.midi)
    report_dict = result.report_dict()
    report_path = out_dir / f"{base}.report.txt"
    report_path.write_text("\n".join(_report_lines(report_dict)) + "\n", "utf-8")
    summary = " ".join(
        [f"wrote={base}", f"key={result.plan.ks.name!r}", f"ts={result.plan.ts.name}",
         f"seed={result.seed}"]
        + [f"{k}={v}" for k, v in report_dict.items() if isinstance(v, float)]
    )
    print(summary)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    for path in filter(None, (args.file, args.reference)):
        if not Path(path).is_file():
            print(f"error: no such file: {path}", file=sys.stderr)
            return EXIT_USAGE
    try:
        score = parse_musicxml(Path(args.file).read_bytes())
        reference = (
            parse_musicxml(Path(args.reference).read_bytes()) if args.reference else None
        )
        report = evaluate_score(score, reference)
    except MalformedScore as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except LyricMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except MelodistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    _print_report(report.to_dict(), args.pretty)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    originals_dir = Path(args.originals)
    paths = sorted(
        p for p in originals_dir.glob("*")
        if p.suffix.lower() in (".musicxml", ".xml")
    ) if originals_dir.is_dir() else []
    if not paths:
        print(f"error: no MusicXML files in {args.originals}", file=sys.stderr)
        return EXIT_BAD_INPUT
    items = []
    scores = []
    for i, path in enumerate(paths):
        try:
            original = parse_musicxml(path.read_bytes())
            lyrics = extract_lyrics(original)
        except (MalformedScore, EmptyLyrics) as exc:
            print(f"error: {path.name}: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        for j, (variant_key, variant_seed) in enumerate(
            candidate_keys_for_compare(original.ks, args.seed, i, args.regenerate)
        ):
            result = compose(
                lyrics, key=variant_key, seed=variant_seed,
                title=f"{path.stem} variant {j + 1}",
            )
            reference = original
            try:
                evaluate_score(result.score, reference)
            except LyricMismatch:
                logger.warning(
                    "lyrics differ for %s; skipping rhythm match", result.score.title
                )
                reference = None
            except MelodistError:
                reference = None
            items.append((result.score, reference))
            scores.append(result.score)
    stats, reports = evaluate_corpus(items)
    table = plot_table(stats)
    print(table, end="")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_report(out_dir / "report.json", scores, reports, stats)
        (out_dir / "plot_table.tsv").write_text(table, "utf-8")
    return 0


def cmd_list_keys(args: argparse.Namespace) -> int:
    del args
    for key in KEY_CATALOG:
        print(key.name)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = args.addr.rpartition(":")
    host = host or "127.0.0.1"
    try:
        port = int(port_text)
    except ValueError:
        print(f"error: bad address {args.addr!r}", file=sys.stderr)
        return EXIT_USAGE
    app = create_app(store_path=args.store, stub_mode=args.stub or None)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except SystemExit:
        print(f"error: cannot listen on {args.addr} (address in use?)", file=sys.stderr)
        return EXIT_PROVIDER
    except OSError as exc:
        print(f"error: cannot listen on {args.addr}: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="melodist",
        description="Compose a melodic score from lyrics; evaluate scores "
        "against music-theory metrics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="compose a song from lyrics or an image")
    source = g.add_mutually_exclusive_group(required=True)
    source.add_argument("--lyrics", metavar="FILE", help="lyric text file")
    source.add_argument("--image", metavar="FILE", help="PNG or JPEG image file")
    g.add_argument("--key", default="random", help='key name (e.g. "D major") or "random"')
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--output", choices=("song", "music"), default="song")
    g.add_argument("--out", default=".", help="output directory")
    g.add_argument("--instrument", type=int, default=0, help="General MIDI program 0-127")
    g.add_argument("--title", default=None)
    g.add_argument("--length", choices=("short", "medium", "long"), default="medium",
                   help="phrase count preference for image lyrics")
    g.add_argument("--config", default=None, help="pitch-sampler config file")
    g.add_argument("--stub", action="store_true", help="use the offline lyrics stub")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("evaluate", help="evaluate a MusicXML score")
    e.add_argument("file", help="MusicXML file")
    e.add_argument("--reference", default=None, help="reference MusicXML for rhythm matching")
    e.add_argument("--pretty", action="store_true")
    e.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("compare", help="regenerate variants of originals and aggregate metrics")
    c.add_argument("--originals", required=True, help="directory of MusicXML files with lyrics")
    c.add_argument("--regenerate", type=int, default=3, metavar="K")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None, help="directory for report.json and plot_table.tsv")
    c.set_defaults(func=cmd_compare)

    k = sub.add_parser("list-keys", help="print the supported key catalog")
    k.set_defaults(func=cmd_list_keys)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--addr", default="127.0.0.1:8000")
    s.add_argument("--store", default="melodist.sqlite")
    s.add_argument("--stub", action="store_true", help="serve with the offline lyrics stub")
    s.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
