"""Derive data/sentiment.tsv from the pattern/TextBlob sentiment XML.

Scores are averaged per part of speech, then across parts of speech, which is
the entry TextBlob consults when no tag is supplied. Adjectives also
yield a derived -ly adverb ("terrible" -> "terribly") that replaces any
existing entry for that form. A word is marked as a modifier when one of its
senses is an adverb (RB).

usage: python3 tools/build_sentiment_lexicon.py path/to/en-sentiment.xml > crates/core/data/sentiment.tsv
"""
import sys
import xml.etree.ElementTree as ET


def avg(xs):
    return sum(xs) / len(xs)


def main(path):
    words = {}
    for w in ET.parse(path).getroot().findall("word"):
        form = w.attrib.get("form")
        if not form:
            continue
        psi = (
            float(w.attrib.get("polarity", 0.0)),
            float(w.attrib.get("subjectivity", 0.0)),
            float(w.attrib.get("intensity", 1.0)),
        )
        words.setdefault(form, {}).setdefault(w.attrib.get("pos"), []).append(psi)
    table = {}
    for form, senses in words.items():
        per_pos = {pos: [avg(c) for c in zip(*v)] for pos, v in senses.items()}
        per_pos[None] = [avg(c) for c in zip(*per_pos.values())]
        table[form] = per_pos
    for form, per_pos in list(table.items()):
        if "JJ" in per_pos:
            w = form
            if w.endswith("y"):
                w = w[:-1] + "i"
            if w.endswith("le"):
                w = w[:-2]
            entry = table.setdefault(w + "ly", {})
            entry["RB"] = entry[None] = list(per_pos["JJ"])
    print("# form\tpolarity\tsubjectivity\tintensity\tmodifier")
    print("# derived from pattern/TextBlob en-sentiment.xml (BSD/MIT)")
    for form in sorted(table):
        per_pos = table[form]
        p, s, i = per_pos[None]
        modifier = 1 if "RB" in per_pos else 0
        print(f"{form}\t{p!r}\t{s!r}\t{i!r}\t{modifier}")


if __name__ == "__main__":
    main(sys.argv[1])
