"""Command-line surface for the shape-coding pipeline.

Commands: thin, segment, encode, fit, build-codebook, recognize,
identify-font.  Exit codes: 0 success, 2 input/config parse error,
3 corpus error, 4 codebook error.  Results go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import codebook as cb
from . import config as cfgmod
from . import encoder, geomfit, raster, render

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CORPUS = 3
EXIT_CODEBOOK = 4


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_engine_config(args) -> cfgmod.EngineConfig:
    cfg = cfgmod.load_config(args.config) if args.config else cfgmod.EngineConfig()
    if getattr(args, "threshold", None) is not None:
        from dataclasses import replace

        cfg = replace(cfg, threshold=args.threshold)
    return cfg


def cmd_thin(args) -> int:
    try:
        cfg = _load_engine_config(args)
        image = raster.load_image(args.input, cfg.threshold)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    raster.write_pbm(raster.thin(image), args.output)
    return EXIT_OK


def cmd_segment(args) -> int:
    try:
        cfg = _load_engine_config(args)
        image = raster.load_image(args.input, cfg.threshold)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    strokes = encoder.order_strokes(raster.segment(raster.thin(image)))
    out = [
        {"pixels": len(s), "centroid": [s.centroid[0], s.centroid[1]]}
        for s in strokes
    ]
    print(json.dumps(out, indent=1))
    return EXIT_OK


def cmd_fit(args) -> int:
    try:
        cfg = _load_engine_config(args)
        image = raster.load_image(args.input, cfg.threshold)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    pixels = image.foreground()
    result = {}
    try:
        if args.kind in ("line", "both"):
            line = geomfit.fit_line(pixels)
            length, start, end = geomfit.segment_extent(pixels, line)
            result["line"] = {
                "p": line.p,
                "alpha": line.alpha,
                "l": length,
                "residual": geomfit.line_residual(pixels, line),
            }
        if args.kind in ("ellipse", "both"):
            coef = geomfit.fit_ellipse(pixels)
            x0, y0, a, b, phi = geomfit.conic_to_geometric(coef)
            result["ellipse"] = {
                "x0": x0,
                "y0": y0,
                "a": a,
                "b": b,
                "phi": phi,
                "coefficients": list(coef.as_array()),
            }
    except (geomfit.DegenerateInputError, geomfit.NumericalFitError,
            geomfit.NonEllipseError) as exc:
        return _fail(EXIT_PARSE, f"fit failed: {exc}")
    print(json.dumps(result, indent=1))
    if args.svg:
        word = encoder.encode_word(image, cfg.encoder)
        with open(args.svg, "w") as fh:
            fh.write(render.svg_overlay(word, raster.thin(image)))
    return EXIT_OK


def cmd_encode(args) -> int:
    try:
        cfg = _load_engine_config(args)
        image = raster.load_image(args.input, cfg.threshold)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    word = encoder.encode_word(image, cfg.encoder)
    text = encoder.word_to_json(word, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render.svg_overlay(word, raster.thin(image)))
    return EXIT_OK


def cmd_build_codebook(args) -> int:
    import os

    try:
        cfg = _load_engine_config(args)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    if not os.path.isdir(args.corpus):
        return _fail(EXIT_CORPUS, f"corpus directory not found: {args.corpus}")
    table = cb.arabic_connectivity()
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError as exc:
        return _fail(EXIT_PARSE, f"bad sizes: {exc}")
    book = cb.build_codebook(
        args.corpus, table, sizes, cfg.encoder, cfg.tolerances, font=args.font
    )
    if not book.entries and not book.flagged:
        return _fail(EXIT_CORPUS, "corpus produced no codebook entries")
    cb.build_fingerprints([book])
    cb.save_codebook(book, args.output)
    print(
        f"entries={len(book.entries)} fingerprint={len(book.fingerprint)} "
        f"flagged={len(book.flagged)} skipped={book.skipped}"
    )
    return EXIT_OK


def _load_books(paths):
    return [cb.load_codebook(p) for p in paths]


def cmd_recognize(args) -> int:
    try:
        book = cb.load_codebook(args.codebook)
    except cb.CodebookFormatError as exc:
        return _fail(EXIT_CODEBOOK, str(exc))
    try:
        cfg = _load_engine_config(args)
        image = raster.load_image(args.input, cfg.threshold)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    word = encoder.encode_word(image, cfg.encoder)
    if args.size:
        word = encoder.scale_word(word, 1.0 / args.size)
    for glyph, position, (si, off) in cb.recognize(word, book, book.tolerances):
        print(f"{glyph}\t{position}\t{si}\t{off}")
    return EXIT_OK


def cmd_identify_font(args) -> int:
    try:
        books = _load_books(args.codebooks)
    except cb.CodebookFormatError as exc:
        return _fail(EXIT_CODEBOOK, str(exc))
    try:
        cfg = _load_engine_config(args)
        image = raster.load_image(args.input, cfg.threshold)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    word = encoder.encode_word(image, cfg.encoder)
    if args.size:
        word = encoder.scale_word(word, 1.0 / args.size)
    name = cb.identify_font(word, books, books[0].tolerances)
    print(name if name else "unknown")
    return EXIT_OK


def _add_common(p):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--threshold", type=int, help="binarization threshold (0-255)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glyphcode",
        description="Shape-coding OCR: skeletons to line/arc codes and back",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thin", help="thin an image to its skeleton")
    p.add_argument("input")
    p.add_argument("output")
    _add_common(p)
    p.set_defaults(func=cmd_thin)

    p = sub.add_parser("segment", help="list skeleton strokes")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("fit", help="fit a line/ellipse to all ink pixels")
    p.add_argument("input")
    p.add_argument("--kind", choices=["line", "ellipse", "both"], default="both")
    p.add_argument("--svg", help="write an SVG overlay of the encoding")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("encode", help="encode an image as a word code")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.add_argument("--svg", help="write an SVG overlay of the encoding")
    _add_common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("build-codebook", help="build a codebook from a corpus")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--sizes", default="50,75,100", help="comma-separated px sizes")
    p.add_argument("--font", help="font name (default: corpus dir name)")
    _add_common(p)
    p.set_defaults(func=cmd_build_codebook)

    p = sub.add_parser("recognize", help="recognize glyphs in an image")
    p.add_argument("input")
    p.add_argument("codebook")
    p.add_argument("--size", type=float, help="nominal render size for scale normalization")
    _add_common(p)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("identify-font", help="identify the font of an image")
    p.add_argument("input")
    p.add_argument("codebooks", nargs="+")
    p.add_argument("--size", type=float, help="nominal render size for scale normalization")
    _add_common(p)
    p.set_defaults(func=cmd_identify_font)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
