"""Command line: train, run, sweep-tau, demo.

Exit codes: 0 success, 1 input error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures
from .decoder import DecoderConfig, DecoderState, run
from .emotions import EmotionConfig
from .hierarchy import (
    ChannelConfig,
    best_secondary,
    load_association_map,
    load_exclusions,
    merge_repetitions,
    run_two_channels,
)
from .lexicon import LexiconError, load_lexicon, read_text
from .ngram import (
    ModelFormatError,
    Smoothing,
    UnknownImage,
    dump_model,
    load_model,
    read_corpus,
    train,
)
from .trace import (
    LaughterParams,
    decoder_records,
    dumps,
    parse_grid,
    parse_tau,
    race_records,
    sweep_tau,
)

INPUT_ERRORS = (OSError, UnicodeDecodeError, LexiconError, ModelFormatError, UnknownImage)


class InputError(Exception):
    pass


class ConfigError(Exception):
    pass


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _tau(text: str) -> float:
    try:
        return parse_tau(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tau {text!r} (integer >= 0 or 'inf')") from None


def _rates(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two integers, e.g. 2,1") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("rates must be >= 1")
    return a, b


def _decoder_config(args) -> DecoderConfig:
    try:
        return DecoderConfig(
            tau_max=args.tau,
            memory_budget=args.memory,
            p_low=args.plow,
            suppression_enabled=getattr(args, "suppress", False),
            emotions=EmotionConfig(args.need, args.i0_pleasure, args.i0_confidence),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _laughter(args) -> LaughterParams:
    if not 0.0 <= args.rho <= 1.0:
        raise ConfigError("--rho must lie in [0, 1]")
    return LaughterParams(
        spins_per_image=args.spins, coupling_scale=args.coupling, field_strength=args.field,
        routing_rho=args.rho, seed=args.seed, overload=args.overload,
    )


def _passages(source: str) -> list[list[str]]:
    return [read_text(line) for line in source.splitlines() if line.strip()]


def _decode_passages(passages, cfg, model, lex, params, annotate=False) -> list[dict]:
    """Each text line is a passage; the decoder state (and its suppression store) persists."""
    state = DecoderState()
    records: list[dict] = []
    offset = 0
    for text in passages:
        trace = run(text, cfg, model, lex, state=state)
        recs = decoder_records(trace.events, params)
        if annotate:
            known = [s for s in text if s in lex]
            for rec in recs:
                if rec["type"] == "humor":
                    rec["note"] = "; ".join(
                        f"{known[p]}: {o} -> {n}"
                        for p, o, n in zip(range(rec["start"], rec["end"]), rec["old"], rec["new"])
                        if o != n
                    )
        for rec in recs:
            rec["t"] += offset
        records.extend(recs)
        offset += len(text) + 1
    return records


# --- commands -------------------------------------------------------------


def cmd_train(args) -> int:
    corpus = read_corpus(_read(args.corpus))
    if not corpus:
        raise InputError(f"{args.corpus}: empty corpus")
    try:
        model = train(corpus, args.smoothing)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    Path(args.out).write_text(dump_model(model), encoding="utf-8")
    n_rows = sum(len(r) for r in model.rows.values())
    print(f"vocabulary size\t{len(model.vocab)}")
    print(f"rows\t{n_rows}")
    return 0


def cmd_run(args) -> int:
    if args.two_channel and not args.assoc:
        raise ConfigError("--two-channel requires --assoc")
    cfg = _decoder_config(args)
    params = _laughter(args)
    passages = _passages(_read(args.text))
    lex = load_lexicon(_read(args.lexicon))
    model = load_model(_read(args.model))
    if args.two_channel:
        amap = load_association_map(_read(args.assoc))
        excl = load_exclusions(_read(args.exclusions)) if args.exclusions else frozenset()
        text = [s for p in passages for s in p]
        r1, r2 = args.rates
        race = run_two_channels(
            text, lex, model, amap,
            ChannelConfig(r1, 1, args.tau, not args.no_jitter),
            ChannelConfig(r2, 2, args.tau, not args.no_jitter),
            seed=args.seed, exclusions=excl, lam=args.lam,
            memory_budget=args.memory, p_low=args.plow,
        )
        records = race_records(race, params)
    else:
        records = _decode_passages(passages, cfg, model, lex, params)
    sys.stdout.write(dumps(records))
    return 0


def cmd_sweep_tau(args) -> int:
    if args.alpha < 0 or args.beta < 0:
        raise ConfigError("--alpha and --beta must be nonnegative")
    try:
        grid = parse_grid(args.grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.texts:
        texts = [p for path in args.texts for p in _passages(_read(path))]
    else:
        texts = [t for _, t in fixtures.mixed_corpus()]
    if not texts:
        raise InputError("empty corpus")
    lex = load_lexicon(_read(args.lexicon)) if args.lexicon else fixtures.lexicon()
    model = load_model(_read(args.model)) if args.model else fixtures.model()
    base = DecoderConfig(memory_budget=args.memory, p_low=args.plow, emotions=None)
    result = sweep_tau(texts, grid, args.alpha, args.beta, model, lex, base)
    sys.stdout.write(result.table())
    return 0


DEMOS = {
    "14": "joke14",
    "14-slow": "joke14_slow",
    "bear": "bear",
    "cow": "cow",
    "dreifus": "dreifus",
}


def cmd_demo(args) -> int:
    if args.joke_id not in DEMOS:
        raise InputError(f"unknown demo {args.joke_id!r}; available: {', '.join(DEMOS)}")
    lex, model = fixtures.lexicon(), fixtures.model()
    name = DEMOS[args.joke_id]
    text = fixtures.text(name)
    if name == "joke14_slow":
        # the pauses only matter when memory is tight
        args.memory = min(args.memory, 16)
    cfg = _decoder_config(args)
    params = _laughter(args)
    if name == "bear":
        # a frightening switch: the released energy goes elsewhere, not into laughter
        params = LaughterParams(**{**params.__dict__, "routing_rho": 0.0})
    if name == "dreifus":
        race = run_two_channels(
            text, lex, model, fixtures.association_map(),
            ChannelConfig(1, 1, args.tau), ChannelConfig(1, 2, args.tau),
            seed=args.seed, exclusions=fixtures.exclusions(), lam=args.lam,
            memory_budget=args.memory, p_low=args.plow,
        )
        records = race_records(race, params)
    else:
        records = _decode_passages([text], cfg, model, lex, params, annotate=True)
        if name == "cow":
            primary = [r for r in records if r["type"] == "commit"]
            images = [img for r in primary for img in r["images"]]
            secondary, score = best_secondary(images, fixtures.association_map(), model, args.lam)
            records.append({
                "t": len(text), "type": "secondary", "images": secondary,
                "score": score, "merged": merge_repetitions(secondary),
            })
    sys.stdout.write(dumps(records))
    return 0


# --- parser ---------------------------------------------------------------


def _add_decoder_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=_tau, default=2, help="commit delay in steps, or 'inf'")
    p.add_argument("--memory", type=int, default=64, help="beam budget in trajectory-symbols")
    p.add_argument("--plow", type=float, default=-6.0, help="per-symbol log-prob floor")
    p.add_argument("--rho", type=float, default=1.0, help="share of released energy sent to laughter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lam", type=float, default=2.0, help="size weighting for enlarged images")
    p.add_argument("--spins", type=int, default=4, help="spins per retracted image")
    p.add_argument("--coupling", type=float, default=0.05, help="coupling scale of erased blocks")
    p.add_argument("--field", type=float, default=1.0, help="nullifying field strength")
    p.add_argument("--overload", type=int, default=0,
                   help="consecutive incomprehension steps that force a nervous deletion (0: off)")
    p.add_argument("--need", type=float, default=1.0, help="need strength N for emotions")
    p.add_argument("--i0-pleasure", type=float, default=-2.0)
    p.add_argument("--i0-confidence", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="humorbeam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="estimate a bigram model from an image corpus")
    p.add_argument("corpus", help="one space-separated image sequence per line")
    p.add_argument("--smoothing", type=Smoothing.parse, default=Smoothing(), help="mle or addone:ALPHA")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("run", help="decode a text into a JSON-lines trace")
    p.add_argument("text")
    p.add_argument("lexicon")
    p.add_argument("model")
    _add_decoder_flags(p)
    p.add_argument("--suppress", action="store_true", help="remember retracted senses across passages")
    p.add_argument("--assoc", help="association map for the secondary level")
    p.add_argument("--exclusions", help="pairs of mutually exclusive images")
    p.add_argument("--two-channel", action="store_true")
    p.add_argument("--rates", type=_rates, default=(1, 1), help="symbols per tick, primary,secondary")
    p.add_argument("--no-jitter", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-tau", help="retraction rate vs latency over tau values")
    p.add_argument("texts", nargs="*", help="text files (default: bundled mixed corpus)")
    p.add_argument("--lexicon")
    p.add_argument("--model")
    p.add_argument("--grid", default="0,1,2,4,8,inf")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--memory", type=int, default=64)
    p.add_argument("--plow", type=float, default=-6.0)
    p.set_defaults(func=cmd_sweep_tau)

    p = sub.add_parser("demo", help="run a bundled fixture")
    p.add_argument("joke_id", help=f"one of: {', '.join(DEMOS)}")
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
