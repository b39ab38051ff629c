"""Training loop and per-post prediction for the LSTM sentiment analyzer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cryptosent.corpus import Corpus, SentimentLabel
from cryptosent.encoder import DEFAULT_MAX_LEN, EncodedPost, encode, encode_post
from cryptosent.errors import DataError
from cryptosent.lexicon import Lexicon
from cryptosent.neural import (
    ModelDims,
    SentimentModel,
    backward,
    forward,
    init_model,
    loss,
    sgd_step,
)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    lr: float = 0.05
    clip: float = 5.0
    batch_size: int = 32
    max_len: int = DEFAULT_MAX_LEN
    seed: int = 7
    shuffle: bool = True
    embed: int = 32
    hidden: int = 64

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.lr <= 0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if self.clip <= 0:
            raise ValueError(f"clip must be > 0, got {self.clip}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {self.max_len}")
        if self.embed < 1 or self.hidden < 1:
            raise ValueError("embed and hidden must be >= 1")


@dataclass(frozen=True)
class TrainHistory:
    """Per-epoch mean loss and training accuracy, both measured on the
    pre-update weights as each batch is visited."""

    losses: tuple[float, ...]
    accuracies: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.losses)


@dataclass(frozen=True)
class Prediction:
    label: SentimentLabel
    scores: tuple[float, float, float] | None
    empty: bool = False


def label_from_scores(scores: np.ndarray) -> SentimentLabel:
    """Argmax over the three class scores; an exact tie for the maximum is
    uninformative and resolves to Neutral."""
    top = scores.max()
    winners = np.flatnonzero(scores == top)
    if len(winners) > 1:
        return SentimentLabel.NEUTRAL
    return SentimentLabel.from_class_index(int(winners[0]))


def _encode_labeled(
    corpus: Corpus, lexicon: Lexicon, max_len: int
) -> list[tuple[EncodedPost, SentimentLabel]]:
    encoded = []
    for post in corpus:
        if post.label is None:
            raise DataError(f"post {post.id!r} has no label")
        enc = encode_post(post, lexicon, max_len)
        if enc.length == 0:
            # punctuation-only posts carry no trainable tokens
            continue
        encoded.append((enc, post.label))
    if not encoded:
        raise DataError("no post encodes to a non-empty token sequence")
    return encoded


def train(
    corpus: Corpus, lexicon: Lexicon, cfg: TrainConfig
) -> tuple[SentimentModel, TrainHistory]:
    """Seeded minibatch SGD over a fully labeled corpus.

    The model is initialized from cfg.seed; each epoch's visit order comes
    from a generator seeded by (cfg.seed, epoch), so runs are reproducible
    while epochs differ.  Determinism is bit-level: identical inputs give
    identical checkpoints.
    """
    if not len(corpus):
        raise DataError("empty corpus")
    if not lexicon.indexed:
        raise DataError("lexicon has no assigned indices; run assign_indices first")
    examples = _encode_labeled(corpus, lexicon, cfg.max_len)
    dims = ModelDims(vocab=lexicon.vocab_size, embed=cfg.embed, hidden=cfg.hidden)
    model = init_model(dims, cfg.seed)

    n = len(examples)
    losses = []
    accuracies = []
    for epoch in range(cfg.epochs):
        if cfg.shuffle:
            order = np.random.default_rng([cfg.seed, epoch]).permutation(n)
        else:
            order = np.arange(n)
        total_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            batch = [examples[int(j)] for j in order[start : start + cfg.batch_size]]
            for enc, label in batch:
                scores = forward(model, enc).scores
                total_loss += loss(scores, label)
                if label_from_scores(scores) is label:
                    correct += 1
            grads = backward(model, batch)
            model = sgd_step(model, grads, cfg.lr, cfg.clip)
        losses.append(total_loss / n)
        accuracies.append(correct / n)
    return model, TrainHistory(tuple(losses), tuple(accuracies))


def predict_post(
    model: SentimentModel,
    lexicon: Lexicon,
    text: str,
    max_len: int = DEFAULT_MAX_LEN,
) -> Prediction:
    """Encode and score one post.  Text that encodes to zero tokens cannot be
    scored and comes back Neutral with the ``empty`` flag set."""
    if lexicon.vocab_size != model.dims.vocab:
        raise DataError(
            f"lexicon vocab {lexicon.vocab_size} does not match model vocab "
            f"{model.dims.vocab}"
        )
    enc = encode(text, lexicon, max_len)
    if enc.length == 0:
        return Prediction(SentimentLabel.NEUTRAL, None, empty=True)
    scores = forward(model, enc).scores
    return Prediction(
        label_from_scores(scores),
        (float(scores[0]), float(scores[1]), float(scores[2])),
        empty=False,
    )
