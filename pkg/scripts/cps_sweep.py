"""Bits-per-word and perplexity of generated stego text across pool sizes.

Prints CSV with columns cps,bpw_mean,bpw_std,ppl_mean,ppl_std. Without
--corpus the synthetic desk corpus is used.
"""
import argparse
import csv
import random
import sys
from dataclasses import dataclass

from markovstego.corpus import PreprocessConfig, load_corpus, read_sentences
from markovstego.evaluate import bpw_stats, perplexity
from markovstego.markov import ModelConfig, load_model, train
from markovstego.stego import EmbedConfig, hide
from markovstego.synthetic import desk_corpus


@dataclass
class SweepConfig:
    cps_values: tuple = (2, 4, 8, 16, 32, 64)
    sentences: int = 1000
    payload_bytes: int = 256
    coding: str = "huffman"
    seed: int = 0


def sweep(model, config: SweepConfig):
    rows = []
    for cps in config.cps_values:
        rng = random.Random(config.seed * 1_000_003 + cps)
        text, traces = [], []
        while len(text) < config.sentences:
            embed_config = EmbedConfig(cps=cps, keyword_seed=rng.getrandbits(64), coding=config.coding)
            sents, trace = hide(model, rng.randbytes(config.payload_bytes), embed_config)
            text.extend(sents)
            traces.append(trace)
        bpw = bpw_stats(traces)
        ppl = perplexity(model, text)
        rows.append({"cps": cps, "bpw_mean": f"{bpw.mean:.4f}", "bpw_std": f"{bpw.std_dev:.4f}",
                     "ppl_mean": f"{ppl.mean:.4f}", "ppl_std": f"{ppl.std_dev:.4f}"})
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", help="training corpus, one sentence per line")
    parser.add_argument("--model", help="pre-trained model file (overrides --corpus)")
    parser.add_argument("--order", type=int, default=2)
    parser.add_argument("--sentences", type=int, default=1000)
    parser.add_argument("--coding", choices=("huffman", "fixed"), default="huffman")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if args.model:
        model = load_model(args.model)
    else:
        config = ModelConfig(args.order, PreprocessConfig())
        if args.corpus:
            sentences = load_corpus(args.corpus, config.preprocess)
        else:
            sentences = read_sentences("\n".join(desk_corpus()).encode(), config.preprocess)
        model = train(sentences, config)
    print(f"# model fingerprint {model.fingerprint}, coding={args.coding}", file=sys.stderr)
    rows = sweep(model, SweepConfig(sentences=args.sentences, coding=args.coding, seed=args.seed))
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)


if __name__ == "__main__":
    main()
