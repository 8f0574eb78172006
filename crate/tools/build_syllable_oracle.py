"""Build the 1k-word syllable oracle used by the syllable counter tests.

Words are the most frequent lowercase alphabetic forms of a CoNLL-U corpus
that appear in the CMU Pronouncing Dictionary (BSD); the syllable count is the
number of stressed vowel phonemes of the first pronunciation.

usage: python3 tools/build_syllable_oracle.py silver.conllu cmudict.dict > crates/core/tests/data/syllables_1k.tsv
"""
import collections
import sys


def main(conllu, cmudict):
    freq = collections.Counter()
    with open(conllu) as fh:
        for line in fh:
            cols = line.rstrip("\n").split("\t")
            if len(cols) == 10 and cols[1].isalpha() and cols[1].isascii():
                freq[cols[1].lower()] += 1
    pron = {}
    with open(cmudict) as fh:
        for line in fh:
            parts = line.split()
            if parts and "(" not in parts[0] and parts[0] not in pron:
                pron[parts[0]] = sum(p[-1].isdigit() for p in parts[1:] if p != "#")
    print("# word\tsyllables (CMU Pronouncing Dictionary, first pronunciation)")
    n = 0
    for word, _ in freq.most_common():
        if word in pron and len(word) > 1 or word in ("a", "i"):
            if word not in pron:
                continue
            print(f"{word}\t{pron[word]}")
            n += 1
            if n == 1000:
                break


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
