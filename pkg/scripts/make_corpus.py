"""Write the seeded synthetic desk corpus, one sentence per line."""
import argparse

from markovstego.synthetic import desk_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=60_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in desk_corpus(args.sentences, args.seed):
            fh.write(line + "\n")


if __name__ == "__main__":
    main()
