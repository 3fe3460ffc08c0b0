#!/usr/bin/env python3
"""Independent reference for the vocabulary trainer.

Recomputes the expected token list for tests/data/trainer_corpus.txt with
target size 120 from first principles: seed with specials and the alphabet,
then repeatedly fuse the adjacent symbol pair maximizing
count(pair) / (count(left) * count(right)), requiring count >= 2, ties
broken on the lexicographically smaller fused string, then the left symbol.

Usage: train_vocab_oracle.py <corpus.txt> <target_size> > expected_vocab.txt
"""

import sys
import unicodedata

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def pre_tokenize(text):
    words = []
    current = []

    def flush():
        if current:
            words.append("".join(current))
            current.clear()

    for ch in text:
        cat = unicodedata.category(ch)
        if ch in "\t\n\r":
            flush()
            continue
        if cat in ("Cc", "Cf"):
            continue
        # strip accents (NFD, drop marks)
        decomposed = unicodedata.normalize("NFD", ch)
        decomposed = "".join(
            c for c in decomposed if unicodedata.category(c) != "Mn")
        for c in decomposed.lower():
            if c.isspace():
                flush()
            elif unicodedata.category(c).startswith("P"):
                flush()
                words.append(c)
            else:
                current.append(c)
    flush()
    return words


def train(corpus_path, target_size):
    word_counts = {}
    with open(corpus_path, encoding="utf-8") as f:
        for line in f:
            for w in pre_tokenize(line):
                word_counts[w] = word_counts.get(w, 0) + 1

    words = []  # (symbols, count)
    alphabet = set()
    for w, c in word_counts.items():
        symbols = [w[0]] + ["##" + ch for ch in w[1:]]
        alphabet.update(symbols)
        words.append((symbols, c))

    vocab = list(SPECIALS) + sorted(alphabet)
    in_vocab = set(vocab)
    assert target_size > len(vocab)

    while len(vocab) < target_size:
        sym_counts = {}
        pair_counts = {}
        for symbols, c in words:
            for s in symbols:
                sym_counts[s] = sym_counts.get(s, 0) + c
            for a, b in zip(symbols, symbols[1:]):
                pair_counts[(a, b)] = pair_counts.get((a, b), 0) + c

        best = None
        for (a, b), c in sorted(pair_counts.items()):
            if c < 2:
                continue
            fused = a + b[2:]
            score = c / (sym_counts[a] * sym_counts[b])
            key = (-score, fused, a)
            if best is None or key < best[0]:
                best = (key, (a, b), fused)
        if best is None:
            break

        (_, (left, right), fused) = best
        if fused not in in_vocab:
            vocab.append(fused)
            in_vocab.add(fused)
        for symbols, _ in words:
            i = 0
            while i + 1 < len(symbols):
                if symbols[i] == left and symbols[i + 1] == right:
                    symbols[i] = fused
                    del symbols[i + 1]
                else:
                    i += 1
    return vocab


if __name__ == "__main__":
    tokens = train(sys.argv[1], int(sys.argv[2]))
    for t in tokens:
        print(t)
