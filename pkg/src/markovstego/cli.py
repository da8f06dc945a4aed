"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 decode failure.
Every failure prints one ``E_<CODE>: detail`` line on stderr.
"""
from __future__ import annotations

import argparse
import sys

from . import corpus, markov, stego
from .errors import DecodeMismatch, StegoError, TruncatedPayload
from .evaluate import MODES, bpw_stats, perplexity

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DECODE = 0, 1, 2, 3

DEFAULTS = {
    "order": 2,
    "min_count": 5,
    "keyword_count": 100,
    "max_sentence_tokens": 64,
    "max_sentence_words": 32,
    "coding": "huffman",
    "mode": "per-word",
}
INT_KEYS = {"order", "min_count", "keyword_count", "max_sentence_tokens", "max_sentence_words", "cps", "seed"}
# Config-file keys each command understands.
CONFIG_KEYS = {
    "train": {"order", "min_count", "keyword_count", "max_sentence_tokens"},
    "embed": {"cps", "seed", "max_sentence_words", "coding"},
    "extract": {"cps", "max_sentence_words", "coding"},
    "eval": {"mode"},
    "stats": {"max_sentence_tokens"},
}
REQUIRED = {"cps"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int(text):
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="markovstego", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help):
        p = sub.add_parser(name, help=help, allow_abbrev=False)
        p.add_argument("--config", metavar="PATH", help="key=value file; flags override it")
        return p

    p = command("train", "train a model from a corpus (one sentence per line)")
    p.add_argument("--corpus", required=True)
    p.add_argument("--order", type=_int)
    p.add_argument("--min-count", dest="min_count", type=_int)
    p.add_argument("--keywords", dest="keyword_count", type=_int)
    p.add_argument("--max-sentence-tokens", dest="max_sentence_tokens", type=_int)
    p.add_argument("--out", required=True)

    p = command("embed", "hide a payload in generated text")
    p.add_argument("--model", required=True)
    p.add_argument("--cps", type=_int)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--payload", metavar="FILE")
    src.add_argument("--payload-hex", metavar="HEX")
    p.add_argument("--seed", type=_int)
    p.add_argument("--max-sentence-words", dest="max_sentence_words", type=_int)
    p.add_argument("--coding", choices=("huffman", "fixed"))
    p.add_argument("--out", required=True)

    p = command("extract", "recover a payload from stego text")
    p.add_argument("--model", required=True)
    p.add_argument("--cps", type=_int)
    p.add_argument("--text", required=True)
    p.add_argument("--max-sentence-words", dest="max_sentence_words", type=_int)
    p.add_argument("--coding", choices=("huffman", "fixed"))
    p.add_argument("--expect-fingerprint", metavar="HEX", help="fail unless the model has this fingerprint")
    p.add_argument("--out", required=True)

    p = command("eval", "perplexity of a text under a model")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--mode", choices=MODES)

    p = command("stats", "corpus statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--max-sentence-tokens", dest="max_sentence_tokens", type=_int)
    return parser


def resolve(args) -> argparse.Namespace:
    """Fill unset flags from ``--config`` and then from DEFAULTS."""
    allowed = CONFIG_KEYS[args.command]
    from_file = {}
    if args.config:
        try:
            entries = corpus.read_config_file(args.config)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for key, value in entries.items():
            if key == "keywords":
                key = "keyword_count"
            if key not in allowed:
                raise UsageError(f"unknown config key {key!r} for {args.command}")
            if key in INT_KEYS:
                try:
                    value = int(value)
                except ValueError:
                    raise UsageError(f"config key {key!r}: invalid integer {value!r}") from None
            from_file[key] = value
    for key in allowed:
        if getattr(args, key, None) is None:
            setattr(args, key, from_file.get(key, DEFAULTS.get(key)))
        if key in REQUIRED and getattr(args, key) is None:
            raise UsageError(f"--{key} is required (flag or config file)")
    return args


def _read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data: bytes):
    with open(path, "wb") as fh:
        fh.write(data)


def _embed_config(args, seed=None):
    try:
        return stego.EmbedConfig(
            cps=args.cps, max_sentence_words=args.max_sentence_words, keyword_seed=seed, coding=args.coding
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_train(args, out):
    try:
        config = markov.ModelConfig(
            args.order, corpus.PreprocessConfig(args.min_count, args.keyword_count, args.max_sentence_tokens)
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sentences = corpus.read_sentences(_read_bytes(args.corpus), config.preprocess)
    model = markov.train(sentences, config)
    _write(args.out, model.serialize())
    print(f"fingerprint={model.fingerprint}", file=out)
    print(f"sentences={len(sentences)}", file=out)
    print(f"dict_size={len(model.dictionary)}", file=out)
    print(f"keywords={len(model.keywords)}", file=out)
    for k, table in enumerate(model.tables, 1):
        print(f"contexts_order{k}={len(table)}", file=out)


def cmd_embed(args, out):
    config = _embed_config(args, args.seed)
    if args.payload_hex is not None:
        try:
            payload = stego.Payload.from_hex(args.payload_hex)
        except ValueError:
            raise UsageError(f"--payload-hex is not valid hex: {args.payload_hex!r}") from None
    else:
        payload = stego.Payload(_read_bytes(args.payload))
    model = markov.load_model(args.model)
    text, trace = stego.embed(model, stego.frame_payload(payload), config)
    _write(args.out, stego.format_text(text).encode("utf-8"))
    stats = bpw_stats(trace)
    print(f"fingerprint={model.fingerprint}", file=out)
    print(f"cps={config.cps}", file=out)
    print(f"payload_bits={payload.bit_length}", file=out)
    print(f"sentences={len(text)}", file=out)
    print(f"words={sum(len(s) for s in text)}", file=out)
    print(f"bpw_mean={stats.mean:.6f}", file=out)
    print(f"bpw_std={stats.std_dev:.6f}", file=out)


class FingerprintMismatch(StegoError):
    code = "E_FINGERPRINT_MISMATCH"


def cmd_extract(args, out):
    config = _embed_config(args)
    model = markov.load_model(args.model)
    expected = args.expect_fingerprint
    if expected is not None and expected.lower() != model.fingerprint:
        raise FingerprintMismatch(f"model fingerprint {model.fingerprint} != expected {expected.lower()}")
    text = stego.parse_text(_read_bytes(args.text).decode("utf-8"))
    try:
        payload = stego.extract(model, text, config)
    except (DecodeMismatch, TruncatedPayload) as exc:
        raise type(exc)(f"{exc} [model fingerprint {model.fingerprint}]") from None
    _write(args.out, payload.data)
    print(f"fingerprint={model.fingerprint}", file=out)
    print(f"payload_bits={payload.bit_length}", file=out)


def cmd_eval(args, out):
    model = markov.load_model(args.model)
    text = stego.parse_text(_read_bytes(args.text).decode("utf-8"))
    report = perplexity(model, text, args.mode)
    print(f"fingerprint={model.fingerprint}", file=out)
    for line in report.lines():
        print(line, file=out)


def cmd_stats(args, out):
    config = corpus.PreprocessConfig(max_sentence_tokens=args.max_sentence_tokens)
    stats = corpus.corpus_stats(corpus.read_sentences(_read_bytes(args.corpus), config))
    print(stats.table(), file=out)


COMMANDS = {"train": cmd_train, "embed": cmd_embed, "extract": cmd_extract, "eval": cmd_eval, "stats": cmd_stats}


def _fail(err, code, name, message):
    print(f"{name}: {message}", file=err)
    return code


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = resolve(parser.parse_args(argv))
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=err)
        return _fail(err, EXIT_USAGE, "E_USAGE", exc)
    except (DecodeMismatch, TruncatedPayload, FingerprintMismatch) as exc:
        return _fail(err, EXIT_DECODE, exc.code, exc)
    except StegoError as exc:
        return _fail(err, EXIT_DATA, exc.code, exc)
    except UnicodeDecodeError as exc:
        return _fail(err, EXIT_DATA, "E_ENCODING", exc)
    except OSError as exc:
        return _fail(err, EXIT_DATA, "E_IO", exc)
    return EXIT_OK


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
