"""Deterministic synthetic tag corpora for demos and studies."""

from __future__ import annotations

import random

from .engine import TagSpec

_ONSETS = ("b", "bl", "br", "c", "ch", "cl", "cr", "d", "dr", "f", "fl", "g",
           "gl", "gr", "h", "k", "l", "m", "n", "p", "pl", "pr", "r", "s",
           "sh", "sl", "st", "t", "th", "tr", "v", "w")
_VOWELS = ("a", "e", "i", "o", "u", "ai", "ea", "ee", "io", "ou")
_CODAS = ("", "", "", "b", "ck", "d", "l", "ll", "m", "n", "nd", "ng", "nt",
          "r", "rn", "s", "st", "t", "th")


def make_word(rng: random.Random) -> str:
    syllables = rng.choice((2, 2, 3))
    word = ""
    for _ in range(syllables):
        word += rng.choice(_ONSETS) + rng.choice(_VOWELS)
    return word + rng.choice(_CODAS)


def make_corpus(seed: int, n: int) -> list[TagSpec]:
    """`n` unique pseudo-words with Zipf-like frequency weights."""
    rng = random.Random(seed)
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n:
        w = make_word(rng)
        if w not in seen:
            seen.add(w)
            words.append(w)
    specs = []
    for rank, word in enumerate(words, start=1):
        weight = round(1000.0 / rank ** 0.9 * rng.uniform(0.85, 1.15), 1)
        specs.append(TagSpec(text=word, weight=max(weight, 1.0)))
    return sorted(specs, key=lambda s: -s.weight)
