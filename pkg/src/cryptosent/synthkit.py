"""Deterministic synthetic corpora and sentiment-driven price series.

The generated world makes the pipeline's premise true by construction:
disjoint two-character CJK vocabularies per sentiment class, posts written
predominantly in their class vocabulary (always with a strict majority of
in-class tokens), per-day dominant polarity, and next-day log-returns driven
by the day's net labeled sentiment plus Gaussian noise.  Prices take nothing
from their own past beyond the random walk, so an autoregressive baseline
has no structural signal to find.

With label_noise = 0 and price_noise = 0, majority vote over the true labels
predicts every day's direction exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cryptosent.corpus import Corpus, Post, SentimentLabel
from cryptosent.market import PriceSeries

_CJK_POOL = tuple(chr(0x4E00 + k) for k in range(2048))
_WORD_LEN = 2
_OFF_CLASS_RATE = 0.2
_DOMINANT_SHARE = 0.6
_NEUTRAL_SHARE = 0.25
_SEEDS_PER_POLARITY = 5
_INITIAL_CLOSE = 100.0


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 7
    n_days: int = 40
    posts_per_day: int = 30
    vocab_pos: int = 20
    vocab_neg: int = 20
    vocab_neu: int = 20
    label_noise: float = 0.1
    price_noise: float = 0.01
    sentiment_strength: float = 0.05

    def __post_init__(self) -> None:
        if self.n_days < 1:
            raise ValueError(f"n_days must be >= 1, got {self.n_days}")
        if self.posts_per_day < 1:
            raise ValueError(f"posts_per_day must be >= 1, got {self.posts_per_day}")
        if min(self.vocab_pos, self.vocab_neg, self.vocab_neu) < 1:
            raise ValueError("every vocabulary size must be >= 1")
        if not 0.0 <= self.label_noise < 1.0:
            raise ValueError(f"label_noise must lie in [0, 1), got {self.label_noise}")
        if self.price_noise < 0:
            raise ValueError(f"price_noise must be >= 0, got {self.price_noise}")
        if self.sentiment_strength <= 0:
            raise ValueError(
                f"sentiment_strength must be > 0, got {self.sentiment_strength}"
            )


def _make_vocab(rng: np.random.Generator, size: int, taken: set[str]) -> list[str]:
    words = []
    while len(words) < size:
        chars = rng.integers(0, len(_CJK_POOL), size=_WORD_LEN)
        word = "".join(_CJK_POOL[int(c)] for c in chars)
        if word in taken:
            continue
        taken.add(word)
        words.append(word)
    return words


def _flip_label(
    label: SentimentLabel, rng: np.random.Generator
) -> SentimentLabel:
    others = [lab for lab in SentimentLabel if lab is not label]
    return others[int(rng.integers(0, len(others)))]


def synth_corpus(cfg: SynthConfig) -> tuple[Corpus, list[tuple[str, SentimentLabel]]]:
    """Generate a labeled corpus plus a seed dictionary for bootstrapping.

    Each day draws a dominant polarity; each post draws its class (dominant,
    neutral, or the opposite polarity), then 3-10 tokens with a guaranteed
    strict majority from its class vocabulary.  Labels equal the class,
    flipped to one of the other two with probability label_noise; ranks are
    +2/-2 for polar labels and 0 for neutral.  The seed dictionary holds the
    first few words of each polar vocabulary and all neutral words.
    """
    rng = np.random.default_rng([cfg.seed, 0])
    taken: set[str] = set()
    vocab = {
        SentimentLabel.POSITIVE: _make_vocab(rng, cfg.vocab_pos, taken),
        SentimentLabel.NEGATIVE: _make_vocab(rng, cfg.vocab_neg, taken),
        SentimentLabel.NEUTRAL: _make_vocab(rng, cfg.vocab_neu, taken),
    }

    posts = []
    for day in range(cfg.n_days):
        dominant = (
            SentimentLabel.POSITIVE
            if rng.random() < 0.5
            else SentimentLabel.NEGATIVE
        )
        opposite = (
            SentimentLabel.NEGATIVE
            if dominant is SentimentLabel.POSITIVE
            else SentimentLabel.POSITIVE
        )
        for k in range(cfg.posts_per_day):
            u = rng.random()
            if u < _DOMINANT_SHARE:
                cls = dominant
            elif u < _DOMINANT_SHARE + _NEUTRAL_SHARE:
                cls = SentimentLabel.NEUTRAL
            else:
                cls = opposite
            n_tokens = int(rng.integers(3, 11))
            # cap off-class tokens so the class vocabulary keeps a strict majority
            n_off = min(int(rng.binomial(n_tokens, _OFF_CLASS_RATE)), (n_tokens - 1) // 2)
            off_pool = [w for lab in SentimentLabel if lab is not cls for w in vocab[lab]]
            own = [
                vocab[cls][int(j)]
                for j in rng.integers(0, len(vocab[cls]), size=n_tokens - n_off)
            ]
            off = [
                off_pool[int(j)] for j in rng.integers(0, len(off_pool), size=n_off)
            ]
            tokens = own + off
            order = rng.permutation(n_tokens)
            text = "".join(tokens[int(j)] for j in order)

            label = cls
            if cfg.label_noise > 0 and rng.random() < cfg.label_noise:
                label = _flip_label(cls, rng)
            rank = 2 * label.code
            posts.append(
                Post(id=f"d{day:03d}-p{k:03d}", day=day, text=text, label=label, rank=rank)
            )

    seeds = [
        (w, SentimentLabel.POSITIVE)
        for w in vocab[SentimentLabel.POSITIVE][:_SEEDS_PER_POLARITY]
    ]
    seeds += [
        (w, SentimentLabel.NEGATIVE)
        for w in vocab[SentimentLabel.NEGATIVE][:_SEEDS_PER_POLARITY]
    ]
    seeds += [(w, SentimentLabel.NEUTRAL) for w in vocab[SentimentLabel.NEUTRAL]]
    return Corpus(tuple(posts)), seeds


def synth_market(corpus: Corpus, cfg: SynthConfig) -> PriceSeries:
    """Price series driven by the corpus labels: day d+1's log-return is
    sentiment_strength times day d's normalized (positive - negative) label
    count plus Gaussian(0, price_noise) noise.  Closes start at 100 on the
    first corpus day and extend one day past the last."""
    rng = np.random.default_rng([cfg.seed, 1])
    days = corpus.days()
    if days != list(range(days[0], days[-1] + 1)):
        raise ValueError("synth_market requires contiguous corpus days")
    closes = [_INITIAL_CLOSE]
    for day in days:
        pos = neg = total = 0
        for post in corpus.posts_on(day):
            total += 1
            if post.label is SentimentLabel.POSITIVE:
                pos += 1
            elif post.label is SentimentLabel.NEGATIVE:
                neg += 1
        net = (pos - neg) / total
        log_return = cfg.sentiment_strength * net + rng.normal(0.0, cfg.price_noise)
        closes.append(closes[-1] * math.exp(log_return))
    price_days = tuple(range(days[0], days[-1] + 2))
    return PriceSeries(price_days, tuple(closes))
