"""Greedy longest-match tokenization and fixed-length index encoding.

The tokenizer is a maximal-munch dictionary scan: at each position the
longest lexicon surface wins; otherwise one code point is consumed, dropped
if it is whitespace or punctuation and emitted as an OOV token otherwise.
Encoding maps tokens to indices (OOV -> 1), keeps the first ``max_len``
tokens, and right-pads with 0.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum

from cryptosent.corpus import Post, SentimentLabel
from cryptosent.errors import DataError
from cryptosent.lexicon import Lexicon, OOV_INDEX, PAD_INDEX

DEFAULT_MAX_LEN = 64


class PieceKind(Enum):
    WORD = "word"  # matched lexicon surface
    OOV = "oov"  # single code point outside the lexicon
    DROP = "drop"  # whitespace or punctuation, discarded


@dataclass(frozen=True)
class ScanPiece:
    text: str
    kind: PieceKind


@dataclass(frozen=True)
class Token:
    text: str
    known: bool


@dataclass(frozen=True)
class EncodedPost:
    """Fixed-capacity index sequence; positions >= length are PAD (0)."""

    indices: tuple[int, ...]
    length: int
    label: SentimentLabel | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.length <= len(self.indices):
            raise DataError(
                f"length {self.length} outside [0, {len(self.indices)}]"
            )
        for k, idx in enumerate(self.indices):
            if k < self.length and idx == PAD_INDEX:
                raise DataError(f"PAD index at position {k} before length {self.length}")
            if k >= self.length and idx != PAD_INDEX:
                raise DataError(f"non-PAD index at padded position {k}")


def _is_droppable(ch: str) -> bool:
    return ch.isspace() or unicodedata.category(ch).startswith("P")


def scan(text: str, lexicon: Lexicon) -> list[ScanPiece]:
    """Full segmentation audit trail, dropped pieces included.

    Concatenating ``piece.text`` over the result reproduces ``text`` exactly.
    """
    pieces = []
    pos = 0
    n = len(text)
    longest = lexicon.max_surface_len
    while pos < n:
        match = None
        for length in range(min(longest, n - pos), 0, -1):
            candidate = text[pos : pos + length]
            if candidate in lexicon:
                match = candidate
                break
        if match is not None:
            pieces.append(ScanPiece(match, PieceKind.WORD))
            pos += len(match)
        else:
            ch = text[pos]
            kind = PieceKind.DROP if _is_droppable(ch) else PieceKind.OOV
            pieces.append(ScanPiece(ch, kind))
            pos += 1
    return pieces


def tokenize(text: str, lexicon: Lexicon) -> list[Token]:
    """Tokens in input order: matched surfaces plus OOV code points."""
    return [
        Token(piece.text, piece.kind is PieceKind.WORD)
        for piece in scan(text, lexicon)
        if piece.kind is not PieceKind.DROP
    ]


def encode(
    text: str,
    lexicon: Lexicon,
    max_len: int = DEFAULT_MAX_LEN,
    label: SentimentLabel | None = None,
) -> EncodedPost:
    """Tokenize and map to a fixed-length index vector.

    Known tokens take their lexicon index, OOV tokens take 1; only the first
    ``max_len`` tokens are kept.  Total: any Unicode input encodes (empty
    text yields length 0, all PAD).
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if not lexicon.indexed:
        raise DataError("lexicon has no assigned indices; run assign_indices first")
    tokens = tokenize(text, lexicon)[:max_len]
    indices = [
        lexicon.index_of(t.text) if t.known else OOV_INDEX for t in tokens
    ]
    length = len(indices)
    indices.extend([PAD_INDEX] * (max_len - length))
    return EncodedPost(tuple(indices), length, label)


def encode_post(
    post: Post, lexicon: Lexicon, max_len: int = DEFAULT_MAX_LEN
) -> EncodedPost:
    return encode(post.text, lexicon, max_len, label=post.label)
