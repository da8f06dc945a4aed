"""Corpus ingestion: normalization, dictionary and keyword-list construction.

Everything here must be bit-for-bit reproducible, because the receiver rebuilds
the same dictionary from the same public corpus. Every tie is broken by the
word string, ascending.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EmptyCorpusError, IngestError

BOS, EOS, UNK = 0, 1, 2
RESERVED = ("<s>", "</s>", "<unk>")

_URL_PREFIXES = ("http://", "https://", "www.")
_NON_TOKEN = re.compile(r"[^a-z0-9'\-]+")
_HAS_ALNUM = re.compile(r"[a-z0-9]")


@dataclass(frozen=True)
class PreprocessConfig:
    min_count: int = 5
    keyword_count: int = 100
    max_sentence_tokens: int = 64

    def __post_init__(self):
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.keyword_count < 1:
            raise ValueError("keyword_count must be >= 1")
        if self.max_sentence_tokens < 2:
            raise ValueError("max_sentence_tokens must be >= 2")


def normalize_sentence(raw: str, config: PreprocessConfig = PreprocessConfig()) -> list[str] | None:
    """Lowercase and tokenize one line; ``None`` means the line is skipped.

    URL tokens are dropped whole. Any character outside ``[a-z0-9'-]`` splits
    tokens, and tokens with no letter or digit (a lone ``'`` or ``-``) are
    dropped.
    """
    tokens = []
    for chunk in raw.lower().replace("’", "'").split():
        if chunk.startswith(_URL_PREFIXES):
            continue
        for tok in _NON_TOKEN.split(chunk):
            if tok and _HAS_ALNUM.search(tok):
                tokens.append(tok)
    if not tokens:
        return None
    return tokens[: config.max_sentence_tokens]


def iter_lines(data: bytes) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, text)`` pairs, 1-based, decoding strictly."""
    for lineno, raw in enumerate(data.split(b"\n"), 1):
        try:
            yield lineno, raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IngestError(f"invalid UTF-8 at column {exc.start + 1}", line=lineno) from None


def read_sentences(data: bytes, config: PreprocessConfig = PreprocessConfig()) -> list[list[str]]:
    sentences = []
    for _, line in iter_lines(data):
        tokens = normalize_sentence(line, config)
        if tokens is not None:
            sentences.append(tokens)
    return sentences


def load_corpus(path, config: PreprocessConfig = PreprocessConfig()) -> list[list[str]]:
    with open(path, "rb") as fh:
        return read_sentences(fh.read(), config)


def _ranked(counts: Counter) -> list[tuple[str, int]]:
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass(frozen=True)
class Dictionary:
    words: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})

    @classmethod
    def from_counts(cls, counts: Counter, min_count: int) -> "Dictionary":
        kept = [(w, c) for w, c in _ranked(counts) if c >= min_count]
        if not kept:
            raise EmptyCorpusError("no words survive cutoff")
        words = RESERVED + tuple(w for w, _ in kept)
        return cls(words, (0, 0, 0) + tuple(c for _, c in kept))

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def id_of(self, word: str) -> int:
        """Id of ``word``; unknown words map to UNK."""
        return self._index.get(word, UNK)

    @property
    def index(self) -> dict[str, int]:
        """Word -> id mapping (read-only by convention)."""
        return self._index

    def lookup(self, word: str) -> int | None:
        return self._index.get(word)

    def word(self, wid: int) -> str:
        return self.words[wid]

    def encode(self, tokens: Sequence[str]) -> list[int]:
        index = self._index
        return [index.get(t, UNK) for t in tokens]

    def entries(self) -> Iterator[tuple[int, str, int]]:
        for i, (w, c) in enumerate(zip(self.words, self.counts)):
            yield i, w, c


def word_counts(sentences: Iterable[Sequence[str]]) -> Counter:
    counts: Counter = Counter()
    for s in sentences:
        counts.update(s)
    return counts


def build_dictionary(sentences: Iterable[Sequence[str]], config: PreprocessConfig = PreprocessConfig()) -> Dictionary:
    counts = word_counts(sentences)
    if not counts:
        raise EmptyCorpusError("empty corpus")
    return Dictionary.from_counts(counts, config.min_count)


def build_keyword_list(
    sentences: Iterable[Sequence[str]], dictionary: Dictionary, config: PreprocessConfig = PreprocessConfig()
) -> tuple[int, ...]:
    """The most frequent sentence-initial words, as dictionary ids."""
    firsts = Counter(s[0] for s in sentences if s and s[0] in dictionary)
    if not firsts:
        raise EmptyCorpusError("no sentence starts with a dictionary word")
    return tuple(dictionary.id_of(w) for w, _ in _ranked(firsts)[: config.keyword_count])


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    total_tokens: int
    unique_words: int
    mean_sentence_length: float
    mean_letters_per_word: float

    def table(self) -> str:
        rows = [
            ("Average Length", f"{self.mean_sentence_length:.2f}"),
            ("Sentence Number", f"{self.sentence_count:,}"),
            ("Words Number", f"{self.total_tokens:,}"),
            ("Unique Number", f"{self.unique_words:,}"),
            ("Letters per Word", f"{self.mean_letters_per_word:.2f}"),
        ]
        return "\n".join(f"{name:<17}{value}" for name, value in rows)


_LETTER = re.compile(r"[a-z0-9'\-]")


def corpus_stats(sentences: Iterable[Sequence[str]]) -> CorpusStats:
    n_sent = n_tok = n_letters = 0
    vocab = set()
    for s in sentences:
        n_sent += 1
        n_tok += len(s)
        vocab.update(s)
        n_letters += sum(len(_LETTER.findall(t)) for t in s)
    return CorpusStats(
        sentence_count=n_sent,
        total_tokens=n_tok,
        unique_words=len(vocab),
        mean_sentence_length=n_tok / n_sent if n_sent else 0.0,
        mean_letters_per_word=n_letters / n_tok if n_tok else 0.0,
    )


def read_config_file(path) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            values[key.strip().replace("-", "_")] = value.strip()
    return values
