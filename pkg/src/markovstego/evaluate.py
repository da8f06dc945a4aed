"""Perplexity, embedding rate and bits-per-word statistics."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus import BOS, EOS
from .markov import MarkovModel

MODES = ("per-word", "per-sentence")


@dataclass(frozen=True)
class PerplexityReport:
    mean: float
    std_dev: float
    mode: str
    sentence_count: int
    pooled: float
    floored: int = 0

    def lines(self) -> list[str]:
        return [
            f"mode={self.mode}",
            f"sentences={self.sentence_count}",
            f"ppl_mean={self.mean:.6f}",
            f"ppl_std={self.std_dev:.6f}",
            f"ppl_pooled={self.pooled:.6f}",
            f"floored_transitions={self.floored}",
        ]


def sentence_logprob(model: MarkovModel, words: Sequence[str]) -> tuple[float, int, int]:
    """``(log2 p, transitions, floored transitions)`` for one sentence.

    Transitions run from the BOS-padded start through the final EOS. Each is
    scored at the longest stored context whose distribution contains the
    word; a word absent at every order gets probability 1/N (N = training
    tokens) and is counted as floored.
    """
    order = model.order
    ids = [BOS] * order + model.dictionary.encode(words) + [EOS]
    floor = None
    logp = 0.0
    floored = 0
    for pos in range(order, len(ids)):
        context = ids[pos - order : pos]
        wid = ids[pos]
        for k in range(order, 0, -1):
            dist = model.distribution_at(context, k)
            if dist is not None:
                count = dist.count(wid)
                if count:
                    logp += math.log2(count) - math.log2(dist.total)
                    break
        else:
            if floor is None:
                floor = -math.log2(model.total_tokens())
            logp += floor
            floored += 1
    return logp, len(ids) - order, floored


def perplexity(model: MarkovModel, sentences: Iterable[Sequence[str]], mode: str = "per-word") -> PerplexityReport:
    """Per-word mode (default) divides each sentence's log-probability by its
    transition count; per-sentence mode uses the whole-sentence probability.
    ``pooled`` is 2 to the negative mean of the same per-sentence exponents.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    exponents = []
    floored = 0
    for words in sentences:
        if not words:
            continue
        logp, n, fl = sentence_logprob(model, words)
        floored += fl
        exponents.append(-logp / n if mode == "per-word" else -logp)
    if not exponents:
        raise ValueError("no sentences to score")
    values = [2.0 ** e for e in exponents]
    return PerplexityReport(
        mean=statistics.fmean(values),
        std_dev=statistics.pstdev(values),
        mode=mode,
        sentence_count=len(values),
        pooled=2.0 ** statistics.fmean(exponents),
        floored=floored,
    )


@dataclass(frozen=True)
class EmbedRateReport:
    k: float
    mean_len: float
    mean_letters: float
    exact: Fraction

    @property
    def rate(self) -> float:
        return float(self.exact)

    @property
    def percent(self) -> float:
        return float(self.exact * 100)


def embedding_rate(k: float, mean_len: float, mean_letters: float) -> EmbedRateReport:
    """Payload bits over carrier bits, with 8 bits per letter and a free keyword."""
    if k < 0 or mean_len < 1 or mean_letters <= 0:
        raise ValueError("need k >= 0, mean_len >= 1 and mean_letters > 0")
    fk, fl, fm = Fraction(k), Fraction(mean_len), Fraction(mean_letters)
    exact = (fl - 1) * fk / (8 * fl * fm)
    return EmbedRateReport(k, mean_len, mean_letters, exact)


@dataclass(frozen=True)
class BpwStats:
    mean: float
    std_dev: float
    bits: int
    steps: int


def bpw_stats(traces) -> BpwStats:
    """Bits per coding step over one or more traces.

    A coding step is every non-keyword choice, including a chosen EOS.
    The mean pools all steps; the standard deviation is across sentences.
    """
    if hasattr(traces, "sentences"):
        traces = [traces]
    per_sentence = []
    bits = steps = 0
    for trace in traces:
        for sent in trace.sentences:
            if not sent:
                continue
            b = sum(s.code_length for s in sent)
            bits += b
            steps += len(sent)
            per_sentence.append(b / len(sent))
    if not steps:
        raise ValueError("no coding steps in the given traces")
    return BpwStats(bits / steps, statistics.pstdev(per_sentence), bits, steps)
