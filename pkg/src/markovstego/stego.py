"""Hiding a framed bitstream in generated sentences, and getting it back.

At every generation step the successor distribution is cut to the top-``cps``
candidates, a code tree is built over them and the payload bits pick a leaf.
The extractor rebuilds the identical tree and reads off the leaf's codeword.
A 32-bit length header tells the extractor when to stop.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .bits import bits_to_bytes, bytes_to_bits, uint_to_bits
from .coder import WINDOW_BITS, CandidatePool, PrefixTable, build_candidate_pool, make_code
from .corpus import BOS, EOS, UNK
from .errors import CapacityError, DecodeMismatch, EmptyPool, StegoError, TruncatedPayload
from .markov import MarkovModel

HEADER_BITS = 32
# Sentences in a row that carry no bits before embed gives up.
MAX_IDLE_SENTENCES = 10_000


@dataclass(frozen=True)
class Payload:
    data: bytes = b""

    def __post_init__(self):
        if self.bit_length >= 1 << HEADER_BITS:
            raise ValueError("payload too large for a 32-bit length header")

    @property
    def bit_length(self) -> int:
        return 8 * len(self.data)

    @classmethod
    def from_hex(cls, text: str) -> "Payload":
        return cls(bytes.fromhex(text))


def frame_payload(payload: Payload) -> str:
    return uint_to_bits(payload.bit_length, HEADER_BITS) + bytes_to_bits(payload.data)


def declared_length(bits: str) -> int:
    if len(bits) < HEADER_BITS:
        raise TruncatedPayload(f"only {len(bits)} bits, the length header needs {HEADER_BITS}")
    return int(bits[:HEADER_BITS], 2)


def unframe_payload(bits: str) -> Payload:
    length = declared_length(bits)
    end = HEADER_BITS + length
    if len(bits) < end:
        raise TruncatedPayload(f"header declares {length} payload bits but only {len(bits) - HEADER_BITS} follow")
    if length % 8:
        raise TruncatedPayload(f"declared payload length {length} is not a whole number of bytes")
    return Payload(bits_to_bytes(bits[HEADER_BITS:end]))


@dataclass(frozen=True)
class EmbedConfig:
    cps: int = 8
    max_sentence_words: int = 32
    keyword_seed: int | None = None
    coding: str = "huffman"

    def __post_init__(self):
        if self.cps < 2:
            raise ValueError("cps must be >= 2")
        if self.max_sentence_words < 2:
            raise ValueError("max_sentence_words must be >= 2")


class Step(NamedTuple):
    context: tuple[int, ...]
    pool_size: int
    code_length: int
    payload_bits: int


@dataclass
class EmbedTrace:
    """Per-sentence lists of coding steps (the keyword is not a step)."""

    sentences: list[list[Step]] = field(default_factory=list)

    @property
    def steps(self) -> list[Step]:
        return [s for sent in self.sentences for s in sent]

    @property
    def bits_coded(self) -> int:
        return sum(s.code_length for sent in self.sentences for s in sent)

    @property
    def payload_bits(self) -> int:
        return sum(s.payload_bits for sent in self.sentences for s in sent)

    @property
    def step_count(self) -> int:
        return sum(len(sent) for sent in self.sentences)


class StepCoder:
    """Context -> code lookup shared by embed and extract.

    Codes depend only on (model, context, cps, coding) and the model is
    immutable, so the memo lives on the model and is reused across calls.
    """

    def __init__(self, model: MarkovModel, cps: int, coding: str = "huffman"):
        self.model = model
        self.cps = cps
        self.coding = coding
        self._cache = model.code_cache.setdefault((cps, coding), {})

    def pool(self, context: tuple[int, ...]) -> CandidatePool:
        # A served distribution holding only UNK backs off one order further.
        model = self.model
        for k in range(model.order, 0, -1):
            dist = model.distribution_at(context, k)
            if dist is None:
                continue
            try:
                return build_candidate_pool(dist, self.cps)
            except EmptyPool:
                continue
        model.successor_distribution(context)  # raises UnknownContext
        raise EmptyPool(f"context {context} has no usable successors at any order")

    def table(self, context: tuple[int, ...]) -> PrefixTable:
        table = self._cache.get(context)
        if table is None:
            table = self._cache[context] = PrefixTable(make_code(self.pool(context), self.coding))
        return table

    def __call__(self, context: tuple[int, ...]):
        return self.table(context).code


def _keyword_rng(seed):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def embed(model: MarkovModel, framed: str, config: EmbedConfig = EmbedConfig(), record: bool = True):
    """Generate sentences carrying ``framed``; returns ``(sentences, trace)``.

    Sentences are lists of words. Generation continues past the last payload
    bit until the current sentence ends; those trailing choices read 0s.
    With ``record=False`` no per-step trace is kept and ``trace`` is None.
    """
    if not model.keywords:
        raise StegoError("model has an empty keyword list")
    rng = _keyword_rng(config.keyword_seed)
    coder = StepCoder(model, config.cps, config.coding)
    cache, table_at = coder._cache, coder.table
    end = len(framed)
    # Zero padding lets window lookups run past the end; the 0s are the
    # default branch the extractor would take anyway.
    padded = framed + "0" * WINDOW_BITS
    new_step = tuple.__new__
    limit = config.max_sentence_words
    pos = 0
    words = model.dictionary.words
    keywords = model.keywords
    lead = (BOS,) * (model.order - 1)
    trace = EmbedTrace() if record else None
    text = []
    idle = 0
    while True:
        keyword = keywords[rng.randrange(len(keywords))]
        context = lead + (keyword,)
        ids = [keyword]
        steps = []
        start = pos
        while len(ids) < limit:
            table = cache.get(context) or table_at(context)
            if table.window is not None:
                wid, n = table.window[padded[pos : pos + table.width]]
            else:
                wid, n = table.decode(framed, pos)
            used = n if pos + n <= end else end - pos
            if record:
                steps.append(new_step(Step, (context, table.size, n, used)))
            pos += used
            if wid == EOS:
                break
            ids.append(wid)
            context = context[1:] + (wid,)
        text.append([words[i] for i in ids])
        if record:
            trace.sentences.append(steps)
        if pos >= end:
            return text, trace
        idle = idle + 1 if pos == start else 0
        if idle >= MAX_IDLE_SENTENCES:
            raise CapacityError(f"{idle} consecutive sentences carried no bits; cps or model too small")


def extract(model: MarkovModel, text: Sequence[Sequence[str]], config: EmbedConfig = EmbedConfig()) -> Payload:
    coder = StepCoder(model, config.cps, config.coding)
    cache = coder._cache
    index = model.dictionary.index
    lead = (BOS,) * (model.order - 1)
    limit = config.max_sentence_words
    chunks: list[str] = []
    have = 0
    need = None
    for si, sentence in enumerate(text):
        if not sentence:
            continue
        ids = [index.get(word, BOS) for word in sentence]
        if min(ids) <= UNK:  # unknown words map to BOS; all reserved ids are <= UNK
            pos = next(i for i, wid in enumerate(ids) if wid <= UNK)
            raise DecodeMismatch(f"{sentence[pos]!r} is not a dictionary word", si, pos)
        context = lead + (ids[0],)
        if len(ids) < limit:
            ids.append(EOS)
        for pos in range(1, len(ids)):
            wid = ids[pos]
            table = cache.get(context)
            bits = table.codes.get(wid) if table is not None else None
            if bits is None:
                try:
                    bits = coder(context).codeword(wid)
                except StegoError as exc:
                    shown = "</s>" if wid == EOS else model.dictionary.word(wid)
                    raise DecodeMismatch(f"{shown!r} not decodable here ({exc})", si, pos) from None
            chunks.append(bits)
            have += len(bits)
            context = context[1:] + (wid,)
        if need is None and have >= HEADER_BITS:
            need = HEADER_BITS + declared_length("".join(chunks))
        if need is not None and have >= need:
            return unframe_payload("".join(chunks))
    if need is None:
        raise TruncatedPayload(f"text carries {have} bits, fewer than the {HEADER_BITS}-bit header")
    raise TruncatedPayload(f"text carries {have} bits but the header declares {need - HEADER_BITS} payload bits")


def hide(model: MarkovModel, data: bytes, config: EmbedConfig = EmbedConfig(), record: bool = True):
    """Convenience: frame ``data`` and embed it."""
    return embed(model, frame_payload(Payload(data)), config, record)


def reveal(model: MarkovModel, text, config: EmbedConfig = EmbedConfig()) -> bytes:
    return extract(model, text, config).data


def format_text(sentences: Sequence[Sequence[str]]) -> str:
    return "".join(" ".join(s) + "\n" for s in sentences)


def parse_text(data: str) -> list[list[str]]:
    return [line.split() for line in data.splitlines() if line.strip()]
