"""Reference (polarity, subjectivity) scores from TextBlob for the seed
sentences, computed on lowercased tokens so the Rust port sees identical input.

usage: python3 tools/build_sentiment_oracle.py > crates/core/tests/data/sentiment_oracle.tsv
"""
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))
from build_silver_corpus import tokenize  # noqa: E402
from textblob.en import sentiment  # noqa: E402


def main():
    seed = os.path.join(os.path.dirname(__file__), "seed_sentences.txt")
    print("# tokens\tpolarity\tsubjectivity")
    for line in open(seed, encoding="utf-8"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = [t.lower().replace("’", "'") for t in tokenize(line)]
        r = sentiment(toks)
        print(f"{' '.join(toks)}\t{r[0]!r}\t{r[1]!r}")


if __name__ == "__main__":
    main()
