"""Embedding-rate table: a reference operating point (k=3, L=16.95, m=4.79), plus rates measured
on text generated from the desk model at several pool sizes."""
import argparse
import random

from markovstego.corpus import corpus_stats, read_sentences
from markovstego.evaluate import bpw_stats, embedding_rate
from markovstego.markov import ModelConfig, train
from markovstego.stego import EmbedConfig, hide
from markovstego.synthetic import desk_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=1000)
    args = parser.parse_args()

    print(f"{'source':<22}{'k':>7}{'L':>8}{'m':>7}{'ER %':>9}")
    ref = embedding_rate(3, 16.95, 4.79)
    print(f"{'reference (bpw=3)':<22}{ref.k:>7.3f}{ref.mean_len:>8.2f}{ref.mean_letters:>7.2f}{ref.percent:>9.3f}")

    model = train(read_sentences("\n".join(desk_corpus()).encode()), ModelConfig())
    rng = random.Random(0)
    for cps in (2, 4, 8, 16, 32):
        text, traces = [], []
        while len(text) < args.sentences:
            sents, trace = hide(model, rng.randbytes(256), EmbedConfig(cps=cps, keyword_seed=rng.getrandbits(64)))
            text.extend(sents)
            traces.append(trace)
        stats = corpus_stats(text)
        rate = embedding_rate(bpw_stats(traces).mean, stats.mean_sentence_length, stats.mean_letters_per_word)
        label = f"desk cps={cps}"
        print(f"{label:<22}{rate.k:>7.3f}{rate.mean_len:>8.2f}{rate.mean_letters:>7.2f}{rate.percent:>9.3f}")


if __name__ == "__main__":
    main()
