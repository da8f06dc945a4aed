"""Candidate pools and the per-step word codes built over them.

Huffman trees are not unique, so construction is pinned down completely:
leaves get creation indices in pool order, the min-queue is keyed on
``(count, creation index)``, the first pop becomes the left (``0``) child and
the merged node takes the next creation index.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .bits import BitReader, uint_to_bits
from .corpus import UNK
from .errors import EmptyPool, NotInPool
from .markov import Distribution


@dataclass(frozen=True)
class CandidatePool:
    entries: tuple[tuple[int, int], ...]
    context: tuple[int, ...] = ()

    def __len__(self):
        return len(self.entries)

    @property
    def words(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.entries)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.entries)


def build_candidate_pool(dist: Distribution, cps: int) -> CandidatePool:
    if cps < 2:
        raise ValueError("cps must be >= 2")
    entries = []
    for wid, count in dist.successors:
        if wid == UNK:
            continue
        entries.append((wid, count))
        if len(entries) == cps:
            break
    if not entries:
        raise EmptyPool(f"context {dist.context} has no successors besides UNK")
    return CandidatePool(tuple(entries), dist.context)


class HuffmanTree:
    """Binary code tree over a candidate pool.

    Nodes are indexed by creation order: leaves ``0..n-1`` follow the pool,
    internal nodes follow in merge order and the root is the last node.
    """

    def __init__(self, words: Sequence[int], counts: Sequence[int]):
        if not words:
            raise EmptyPool("cannot build a code tree over an empty pool")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in pool")
        self.words = tuple(words)
        self.counts = tuple(counts)
        n = len(words)
        left = [-1] * n
        right = [-1] * n
        weight = list(counts)
        heap = [(c, i) for i, c in enumerate(counts)]
        heapq.heapify(heap)
        while len(heap) > 1:
            c0, a = heapq.heappop(heap)
            c1, b = heapq.heappop(heap)
            left.append(a)
            right.append(b)
            weight.append(c0 + c1)
            heapq.heappush(heap, (c0 + c1, len(weight) - 1))
        self.left = left
        self.right = right
        self.weight = weight
        self.root = len(weight) - 1
        self.codes = self._assign_codes()

    @classmethod
    def from_pool(cls, pool: CandidatePool) -> "HuffmanTree":
        return cls(pool.words, pool.counts)

    def _assign_codes(self) -> dict[int, str]:
        codes = {}
        stack = [(self.root, "")]
        while stack:
            node, prefix = stack.pop()
            if self.left[node] < 0:
                codes[self.words[node]] = prefix
            else:
                stack.append((self.right[node], prefix + "1"))
                stack.append((self.left[node], prefix + "0"))
        return codes

    def __len__(self):
        return len(self.words)

    def codeword(self, word: int) -> str:
        try:
            return self.codes[word]
        except KeyError:
            raise NotInPool(f"word id {word} is not in the candidate pool") from None

    def decode(self, reader: BitReader) -> tuple[int, int]:
        """Walk from the root; returns ``(word, real bits consumed)``."""
        bits, start = reader.bits, reader.pos
        end = len(bits)
        pos = start
        node = self.root
        left, right = self.left, self.right
        while left[node] >= 0:
            if pos < end and bits[pos] == "1":
                node = right[node]
            else:
                node = left[node]
            pos += 1
        reader.pos = max(start, min(pos, end))
        return self.words[node], reader.pos - start

    def expected_length(self) -> float:
        total = sum(self.counts)
        return sum(c * len(self.codes[w]) for w, c in zip(self.words, self.counts)) / total


def build_huffman_tree(pool: CandidatePool) -> HuffmanTree:
    return HuffmanTree.from_pool(pool)


def codeword_of(tree, word: int) -> str:
    return tree.codeword(word)


def decode_word(tree, bits, start: int = 0) -> tuple[int, int]:
    """Decode one word from ``bits`` (a str or a ``BitReader``).

    Once the source is exhausted every remaining branch takes edge 0.
    """
    reader = bits if isinstance(bits, BitReader) else BitReader(bits, start)
    return tree.decode(reader)


class FixedLengthCode:
    """Baseline: pool truncated to a power of two, index written in binary."""

    def __init__(self, words: Sequence[int]):
        if len(words) < 2:
            raise ValueError("fixed-length coding needs at least 2 candidates")
        self.width = len(words).bit_length() - 1
        self.words = tuple(words[: 1 << self.width])
        self.codes = {w: uint_to_bits(i, self.width) for i, w in enumerate(self.words)}

    @classmethod
    def from_pool(cls, pool: CandidatePool) -> "FixedLengthCode":
        return cls(pool.words)

    def __len__(self):
        return len(self.words)

    def codeword(self, word: int) -> str:
        try:
            return self.codes[word]
        except KeyError:
            raise NotInPool(f"word id {word} is not in the truncated candidate pool") from None

    def decode(self, reader: BitReader) -> tuple[int, int]:
        start = reader.pos
        index = 0
        for _ in range(self.width):
            index = (index << 1) | reader.read()
        return self.words[index], reader.pos - start


def fixed_length_codebook(pool: CandidatePool) -> dict[int, str]:
    return dict(FixedLengthCode.from_pool(pool).codes)


class SingleWordCode:
    """A one-entry pool: the word is forced and carries no bits."""

    def __init__(self, word: int):
        self.words = (word,)
        self.codes = {word: ""}

    def __len__(self):
        return 1

    def codeword(self, word: int) -> str:
        if word != self.words[0]:
            raise NotInPool(f"word id {word} is not the single candidate")
        return ""

    def decode(self, reader: BitReader) -> tuple[int, int]:
        return self.words[0], 0


# Codes no longer than this get a full window table on the hot path.
WINDOW_BITS = 12


class PrefixTable:
    """Lookup form of a complete prefix code, used on the hot path.

    Because the code is complete, exactly one codeword is a prefix of the
    remaining bits padded with 0s. ``window`` maps every ``width``-bit string
    to ``(word, codeword length)``, which reproduces the tree walk with its
    default-0 rule in a single dict lookup; it is ``None`` for codes deeper
    than ``WINDOW_BITS``, which fall back to :meth:`decode`.
    """

    __slots__ = ("code", "size", "codes", "words", "lengths", "width", "window")

    def __init__(self, code):
        self.code = code
        self.size = len(code)
        self.codes = code.codes
        self.words = {bits: w for w, bits in code.codes.items()}
        self.lengths = tuple(sorted({len(b) for b in code.codes.values()}))
        self.width = self.lengths[-1]
        self.window = None
        if self.width <= WINDOW_BITS:
            window = {}
            for bits, w in self.words.items():
                free = self.width - len(bits)
                for tail in range(1 << free):
                    window[bits + (uint_to_bits(tail, free) if free else "")] = (w, len(bits))
            self.window = window

    def decode(self, bits: str, pos: int) -> tuple[int, int]:
        """Return ``(word, codeword length)`` for the codeword at ``pos``."""
        words = self.words
        end = len(bits)
        for n in self.lengths:
            chunk = bits[pos : pos + n]
            if pos + n > end:
                chunk += "0" * (pos + n - max(pos, end))
            w = words.get(chunk)
            if w is not None:
                return w, n
        raise AssertionError("prefix code is not complete")


CODINGS = ("huffman", "fixed")


def make_code(pool: CandidatePool, coding: str = "huffman"):
    if coding == "huffman":
        return HuffmanTree.from_pool(pool)
    if coding == "fixed":
        return SingleWordCode(pool.words[0]) if len(pool) == 1 else FixedLengthCode.from_pool(pool)
    raise ValueError(f"unknown coding {coding!r}; expected one of {CODINGS}")
