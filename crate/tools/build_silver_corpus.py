"""Build a silver-annotated CoNLL-U training corpus for the perceptron tagger.

English prose is collected from locally available sources (the seed sentence
file, Python's pydoc topic help, stdlib docstrings, and package descriptions
under site-packages), tokenized with the same clitic rules as the Rust
tokenizer, and tagged with the Brill lexicon/rule tagger bundled in TextBlob.
A few systematic Brill confusions (clitics, object "her", "to") are patched.

usage: python3 tools/build_silver_corpus.py tools/seed_sentences.txt > silver.conllu
then:  lingshift train-tagger --conllu silver.conllu --out crates/core/data/tagger.stxp
"""
import glob
import importlib
import inspect
import os
import re
import sys

from textblob.en import tag

ABBREVIATIONS = {
    l.strip() for l in open(os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "abbreviations.txt"))
    if l.strip() and not l.startswith("#")
}
CLITICS = ("'s", "'m", "'re", "'ve", "'ll", "'d")
APOS = "'’"


def tokenize(text):
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isalnum():
            j = i + 1
            while j < n:
                d = text[j]
                nxt = text[j + 1] if j + 1 < n else ""
                if d.isalnum():
                    j += 1
                elif d in APOS and nxt.isalpha():
                    j += 1
                elif d == "-" and nxt.isalnum():
                    j += 1
                elif d in ".," and text[j - 1].isdigit() and nxt.isdigit():
                    j += 1
                elif d == "." and nxt.isalpha() and text[j - 1].isalpha() and (j + 2 >= n or not text[j + 2].isalpha()):
                    j += 1
                else:
                    break
            word = text[i:j]
            if j < n and text[j] == "." and ((word + ".").lower() in ABBREVIATIONS or "." in word and not word[-1].isdigit()):
                j += 1
                word = text[i:j]
            out.extend(split_clitics(word))
            i = j
            continue
        if c == ".":
            j = i
            while j < n and text[j] == ".":
                j += 1
            out.append(text[i:j])
            i = j
            continue
        out.append(c)
        i += 1
    return out


def split_clitics(word):
    low = word.lower().replace("’", "'")
    if low.endswith("n't") and len(word) > 3:
        return [word[:-3], word[-3:]]
    for cl in CLITICS:
        if low.endswith(cl) and len(word) > len(cl):
            return [word[: -len(cl)], word[-len(cl):]]
    return [word]


UPOS = [
    ("NNP", "PROPN"), ("NN", "NOUN"), ("VB", "VERB"), ("MD", "AUX"), ("JJ", "ADJ"),
    ("RB", "ADV"), ("WRB", "ADV"), ("PRP", "PRON"), ("WP", "PRON"), ("EX", "PRON"),
    ("DT", "DET"), ("PDT", "DET"), ("WDT", "DET"), ("IN", "ADP"), ("CC", "CCONJ"),
    ("RP", "PART"), ("TO", "PART"), ("POS", "PART"), ("CD", "NUM"), ("UH", "INTJ"),
]


def upos(xpos, form):
    if not any(ch.isalnum() for ch in form):
        return "PUNCT"
    for prefix, u in UPOS:
        if xpos.startswith(prefix):
            return u
    return "X"


def patch(tokens, tags):
    tags = list(tags)
    for k, (w, t) in enumerate(zip(tokens, tags)):
        low = w.lower().replace("’", "'")
        nxt = tags[k + 1] if k + 1 < len(tags) else "."
        prev = tokens[k - 1].lower() if k > 0 else ""
        if low == "n't":
            tags[k] = "RB"
        elif low in ("'m", "'re", "'ve"):
            tags[k] = "VBP"
        elif low in ("'ll", "'d"):
            tags[k] = "MD"
        elif low == "'s":
            tags[k] = "VBZ" if prev in ("it", "he", "she", "that", "there", "what", "who", "here", "this") else "POS"
        elif low == "to":
            tags[k] = "TO"
        elif low == "her":
            tags[k] = "PRP$" if nxt[:2] in ("NN", "JJ", "CD") else "PRP"
        elif not any(ch.isalnum() for ch in w):
            tags[k] = w if w in ".,:;" else ("." if w in "!?" else "SYM")
        elif tags[k] in ("NN", "NNS") and w.islower():
            # Brill often leaves verbs right after a subject pronoun as nouns
            j = k - 1
            while j >= 0 and tags[j] == "RB":
                j -= 1
            subj = tokens[j].lower() if j >= 0 else ""
            if subj in ("he", "she", "it") and tags[k] == "NNS" and low.endswith("s"):
                tags[k] = "VBZ"
            elif subj in ("i", "we", "you", "they") and tags[k] == "NN":
                tags[k] = "VBP"
    return tags


BAD = re.compile(r"[(){}\[\]=<>_`*#|/\\@$%^~]")
SPLIT = re.compile(r"(?<=[.!?])\s+(?=[A-Z])")


def sentences_from(text):
    for para in re.split(r"\n\s*\n", text):
        para = " ".join(para.split())
        for s in SPLIT.split(para):
            if BAD.search(s) or not s or s[-1] not in ".!?":
                continue
            toks = tokenize(s)
            words = [t for t in toks if any(ch.isalnum() for ch in t)]
            if not 4 <= len(words) <= 40:
                continue
            if sum(w.isalpha() for w in words) < 0.85 * len(words):
                continue
            yield toks


def sources(seed_path):
    with open(seed_path) as fh:
        seed = [l.strip() for l in fh if l.strip()]
    for _ in range(3):
        for line in seed:
            yield tokenize(line)
    import pydoc_data.topics as topics
    for v in topics.topics.values():
        yield from sentences_from(v)
    for name in sorted(sys.stdlib_module_names):
        if name.startswith("_") or name in ("antigravity", "this", "idlelib", "tkinter", "turtledemo"):
            continue
        try:
            mod = importlib.import_module(name)
        except Exception:
            continue
        docs = [inspect.getdoc(mod) or ""]
        for _, obj in inspect.getmembers(mod):
            if inspect.isfunction(obj) or inspect.isclass(obj):
                docs.append(inspect.getdoc(obj) or "")
        for d in docs:
            yield from sentences_from(d)
    for meta in sorted(glob.glob("/usr/local/lib/python3*/dist-packages/*.dist-info/METADATA")):
        with open(meta, errors="ignore") as fh:
            body = fh.read().split("\n\n", 1)[-1]
        yield from sentences_from(body)


def main(seed_path):
    seen = set()
    n = 0
    for toks in sources(seed_path):
        key = " ".join(toks)
        if key in seen and n > 600:
            continue
        seen.add(key)
        tagged = tag(key, tokenize=False)
        if len(tagged) != len(toks):
            continue
        tags = patch(toks, [t for _, t in tagged])
        n += 1
        print(f"# sent_id = s{n}")
        for k, (w, t) in enumerate(zip(toks, tags), start=1):
            print(f"{k}\t{w}\t_\t{upos(t, w)}\t{t}\t_\t_\t_\t_\t_")
        print()
    print(f"{n} sentences", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1])
