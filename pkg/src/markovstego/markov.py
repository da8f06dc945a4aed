"""Order-m Markov chain over word ids, stored as integer successor counts.

Probabilities are always ``count / total`` of integers, so sender and receiver
see the same ordering on any platform. Lower orders are kept for backoff.
"""
from __future__ import annotations

import hashlib
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .corpus import (
    BOS,
    EOS,
    RESERVED,
    UNK,
    Dictionary,
    PreprocessConfig,
    build_dictionary,
    build_keyword_list,
)
from .errors import EmptyCorpusError, ModelParseError, UnknownContext

MAGIC = "MHSTEG/1"


@dataclass(frozen=True)
class ModelConfig:
    order: int = 2
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")


@dataclass(frozen=True)
class Distribution:
    """Successors of one context, sorted by (count desc, id asc)."""

    context: tuple[int, ...]
    successors: tuple[tuple[int, int], ...]
    total: int

    @property
    def order(self) -> int:
        """The context length that actually served this distribution."""
        return len(self.context)

    def __len__(self):
        return len(self.successors)

    def count(self, wid: int) -> int:
        for w, c in self.successors:
            if w == wid:
                return c
        return 0

    def prob(self, wid: int) -> Fraction:
        return Fraction(self.count(wid), self.total)

    @classmethod
    def from_counts(cls, context, counts) -> "Distribution":
        succ = tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
        return cls(tuple(context), succ, sum(c for _, c in succ))


def pad(ids: Sequence[int], order: int) -> list[int]:
    return [BOS] * order + list(ids) + [EOS]


def count_ngrams(id_sentences: Iterable[Sequence[int]], order: int) -> list[Counter]:
    """Window counts per order; element ``k-1`` maps ``ctx + (succ,)`` to a count.

    Each sentence is padded with ``order`` BOS and one EOS. Windows whose
    successor falls inside the BOS padding are skipped, so BOS never appears
    as a successor.
    """
    tables = [Counter() for _ in range(order)]
    for ids in id_sentences:
        seq = pad(ids, order)
        for pos in range(order, len(seq)):
            for k in range(1, order + 1):
                tables[k - 1][tuple(seq[pos - k : pos + 1])] += 1
    return tables


def merge_counts(parts: Iterable[list[Counter]]) -> list[Counter]:
    merged = None
    for part in parts:
        if merged is None:
            merged = [Counter() for _ in part]
        for acc, c in zip(merged, part):
            acc.update(c)
    if merged is None:
        raise EmptyCorpusError("no shards to merge")
    return merged


def _freeze(counts: Counter) -> dict[tuple[int, ...], Distribution]:
    grouped: dict[tuple[int, ...], dict[int, int]] = defaultdict(dict)
    for gram, c in counts.items():
        grouped[gram[:-1]][gram[-1]] = c
    return {ctx: Distribution.from_counts(ctx, succ) for ctx, succ in grouped.items()}


class MarkovModel:
    def __init__(self, config: ModelConfig, dictionary: Dictionary, keywords: Sequence[int], tables):
        self.config = config
        self.dictionary = dictionary
        self.keywords = tuple(keywords)
        self.tables = tuple(tables)
        self.code_cache = {}

    @property
    def order(self) -> int:
        return self.config.order

    @classmethod
    def from_counts(cls, config, dictionary, keywords, counts: list[Counter]) -> "MarkovModel":
        return cls(config, dictionary, keywords, [_freeze(c) for c in counts])

    def start_context(self, keyword: int) -> tuple[int, ...]:
        return (BOS,) * (self.order - 1) + (keyword,)

    def distribution_at(self, context: Sequence[int], k: int) -> Distribution | None:
        """Stored distribution for the last ``k`` ids of ``context``, if any."""
        return self.tables[k - 1].get(tuple(context[len(context) - k :]))

    def successor_distribution(self, context: Sequence[int]) -> Distribution:
        if len(context) != self.order:
            raise ValueError(f"context has {len(context)} ids, model order is {self.order}")
        for k in range(self.order, 0, -1):
            dist = self.tables[k - 1].get(tuple(context[self.order - k :]))
            if dist is not None:
                return dist
        words = " ".join(self.dictionary.word(i) if 0 <= i < len(self.dictionary) else f"#{i}" for i in context)
        raise UnknownContext(f"no stored successors for context ({words})")

    def total_tokens(self) -> int:
        """Training transitions at order 1 (words plus EOS)."""
        return sum(d.total for d in self.tables[0].values())

    def serialize(self) -> bytes:
        return serialize_model(self)

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.serialize()).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, MarkovModel):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __hash__(self):
        return hash(self.fingerprint)


def train(sentences: Sequence[Sequence[str]], config: ModelConfig = ModelConfig()) -> MarkovModel:
    sentences = [s for s in sentences if s]
    if not sentences:
        raise EmptyCorpusError("empty corpus")
    dictionary = build_dictionary(sentences, config.preprocess)
    keywords = build_keyword_list(sentences, dictionary, config.preprocess)
    counts = count_ngrams((dictionary.encode(s) for s in sentences), config.order)
    return MarkovModel.from_counts(config, dictionary, keywords, counts)


def model_fingerprint(model: MarkovModel) -> str:
    return model.fingerprint


# -- canonical file format -------------------------------------------------


def _header(config: ModelConfig, dict_size: int) -> list[str]:
    p = config.preprocess
    return [
        MAGIC,
        f"order={config.order}",
        f"min_count={p.min_count}",
        f"dict_size={dict_size}",
        f"keyword_count={p.keyword_count}",
        f"max_sentence_tokens={p.max_sentence_tokens}",
    ]


def serialize_model(model: MarkovModel) -> bytes:
    lines = _header(model.config, len(model.dictionary))
    lines.append("[DICT]")
    lines.extend(f"{i} {w} {c}" for i, w, c in model.dictionary.entries())
    lines.append("[KEYWORDS]")
    lines.extend(str(k) for k in model.keywords)
    for k, table in enumerate(model.tables, 1):
        lines.append(f"[NGRAMS {k}]")
        for ctx in sorted(table):
            prefix = " ".join(map(str, ctx))
            for wid, c in sorted(table[ctx].successors):
                lines.append(f"{prefix} {wid} {c}")
    body = ("\n".join(lines) + "\n").encode("utf-8")
    return body + f"sha256={hashlib.sha256(body).hexdigest()}\n".encode("ascii")


class _Lines:
    """Line cursor that remembers the byte offset of each line."""

    def __init__(self, body: bytes):
        self.items = []
        offset = 0
        for raw in body.split(b"\n")[:-1]:
            self.items.append((offset, raw.decode("utf-8")))
            offset += len(raw) + 1
        self.i = 0
        self.end = offset

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else (self.end, None)

    def next(self, what):
        if self.i >= len(self.items):
            raise ModelParseError(f"unexpected end of file, expected {what}", self.end)
        item = self.items[self.i]
        self.i += 1
        return item


def _int(text, offset, what, minimum=0):
    if not text.isdigit() or (len(text) > 1 and text[0] == "0"):
        raise ModelParseError(f"{what}: expected a non-negative integer, got {text!r}", offset)
    value = int(text)
    if value < minimum:
        raise ModelParseError(f"{what}: {value} < {minimum}", offset)
    return value


def _keyval(lines, key, minimum):
    offset, line = lines.next(key)
    name, sep, value = line.partition("=")
    if name != key or not sep:
        raise ModelParseError(f"expected '{key}=', got {line!r}", offset)
    return _int(value, offset, key, minimum)


def _section(lines, title):
    offset, line = lines.next(title)
    if line != title:
        raise ModelParseError(f"expected {title!r}, got {line!r}", offset)


def parse_model(data: bytes) -> MarkovModel:
    if not data.endswith(b"\n"):
        raise ModelParseError("file does not end with a newline (truncated?)", len(data))
    cut = data.rfind(b"\n", 0, len(data) - 1) + 1
    trailer = data[cut:-1]
    if not trailer.startswith(b"sha256="):
        raise ModelParseError("missing sha256 trailer (truncated?)", cut)
    body = data[:cut]
    if trailer[7:] != hashlib.sha256(body).hexdigest().encode("ascii"):
        raise ModelParseError("checksum mismatch", cut)
    try:
        lines = _Lines(body)
    except UnicodeDecodeError as exc:
        raise ModelParseError("invalid UTF-8", exc.start) from None

    offset, magic = lines.next("magic")
    if magic != MAGIC:
        raise ModelParseError(f"bad magic/version {magic!r}, expected {MAGIC!r}", offset)
    order = _keyval(lines, "order", 1)
    min_count = _keyval(lines, "min_count", 1)
    dict_size = _keyval(lines, "dict_size", len(RESERVED) + 1)
    keyword_count = _keyval(lines, "keyword_count", 1)
    max_tokens = _keyval(lines, "max_sentence_tokens", 2)
    config = ModelConfig(order, PreprocessConfig(min_count, keyword_count, max_tokens))

    _section(lines, "[DICT]")
    words, counts = [], []
    for i in range(dict_size):
        offset, line = lines.next(f"dictionary entry {i}")
        parts = line.split(" ")
        if len(parts) != 3:
            raise ModelParseError(f"malformed dictionary line {line!r}", offset)
        wid = _int(parts[0], offset, "id")
        count = _int(parts[2], offset, "count")
        word = parts[1]
        if wid != i:
            raise ModelParseError(f"dictionary id {wid} out of sequence (expected {i})", offset)
        if i < len(RESERVED):
            if word != RESERVED[i] or count != 0:
                raise ModelParseError(f"reserved entry {i} must be '{RESERVED[i]} 0'", offset)
        else:
            if count < min_count:
                raise ModelParseError(f"count {count} below min_count {min_count}", offset)
            if i > len(RESERVED) and (-counts[-1], words[-1]) >= (-count, word):
                raise ModelParseError("dictionary entries not in canonical order", offset)
        words.append(word)
        counts.append(count)
    dictionary = Dictionary(tuple(words), tuple(counts))

    _section(lines, "[KEYWORDS]")
    keywords = []
    while lines.peek()[1] is not None and not lines.peek()[1].startswith("["):
        offset, line = lines.next("keyword")
        kid = _int(line, offset, "keyword id")
        if not len(RESERVED) <= kid < dict_size:
            raise ModelParseError(f"keyword id {kid} out of range", offset)
        keywords.append(kid)
    if not keywords or len(keywords) > keyword_count:
        raise ModelParseError(f"keyword list has {len(keywords)} entries", lines.peek()[0])

    tables = []
    for k in range(1, order + 1):
        _section(lines, f"[NGRAMS {k}]")
        grouped: dict[tuple[int, ...], dict[int, int]] = defaultdict(dict)
        prev = None
        while lines.peek()[1] is not None and not lines.peek()[1].startswith("["):
            offset, line = lines.next("n-gram")
            parts = line.split(" ")
            if len(parts) != k + 2:
                raise ModelParseError(f"order-{k} line needs {k + 2} fields", offset)
            ids = tuple(_int(p, offset, "id") for p in parts[:-1])
            count = _int(parts[-1], offset, "count", 1)
            if any(i >= dict_size for i in ids) or ids[-1] == BOS:
                raise ModelParseError(f"invalid id in {line!r}", offset)
            if prev is not None and ids <= prev:
                raise ModelParseError("n-gram lines not in canonical order", offset)
            prev = ids
            grouped[ids[:-1]][ids[-1]] = count
        tables.append({ctx: Distribution.from_counts(ctx, succ) for ctx, succ in grouped.items()})
    offset, extra = lines.peek()
    if extra is not None:
        raise ModelParseError(f"unexpected line {extra!r}", offset)

    model = MarkovModel(config, dictionary, keywords, tables)
    canonical = model.serialize()
    if canonical != data:
        at = next((i for i, (a, b) in enumerate(zip(canonical, data)) if a != b), min(len(canonical), len(data)))
        raise ModelParseError("non-canonical encoding", at)
    model.__dict__["fingerprint"] = hashlib.sha256(data).hexdigest()
    return model


def load_model(path) -> MarkovModel:
    with open(path, "rb") as fh:
        return parse_model(fh.read())


def save_model(model: MarkovModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(model.serialize())
