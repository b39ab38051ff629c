"""Labeled post corpora: canonical on-disk format, loading, day splits.

A corpus file is UTF-8 with one record per line, tab-separated fields in
fixed order::

    id <TAB> day <TAB> label <TAB> rank <TAB> text

``day`` is a 0-based integer day index, ``label`` is -1/0/1 or empty,
``rank`` is an integer in [-3, 3] or empty, and ``text`` may contain any
character except tab or newline.  Lines beginning with ``#`` are comments.
Days are abstract integer indices, not timestamps; replies are ordinary
records carrying their parent's day.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from cryptosent.errors import DataError

RANK_MIN = -3
RANK_MAX = 3


class SentimentLabel(Enum):
    """Three-way sentiment with canonical numeric codes -1/0/1."""

    NEGATIVE = -1
    NEUTRAL = 0
    POSITIVE = 1

    @property
    def code(self) -> int:
        return self.value

    @property
    def class_index(self) -> int:
        """Dense index used by the classifier head: negative 0, neutral 1, positive 2."""
        return self.value + 1

    @classmethod
    def from_code(cls, code: int) -> SentimentLabel:
        return cls(code)

    @classmethod
    def from_class_index(cls, index: int) -> SentimentLabel:
        return cls(index - 1)


@dataclass(frozen=True)
class Post:
    """One microblog post.  ``rank`` is the manual polarity ranking in [-3, 3]
    consumed by lexicon bootstrapping; ``label`` is the training target."""

    id: str
    day: int
    text: str
    label: SentimentLabel | None = None
    rank: int | None = None

    def __post_init__(self) -> None:
        if "\t" in self.id or "\n" in self.id:
            raise DataError(f"post id {self.id!r} contains tab or newline")
        if not self.text.strip():
            raise DataError(f"post {self.id!r}: text is empty")
        if "\t" in self.text or "\n" in self.text:
            raise DataError(f"post {self.id!r}: text contains tab or newline")
        if self.day < 0:
            raise DataError(f"post {self.id!r}: day {self.day} is negative")
        if self.rank is not None and not RANK_MIN <= self.rank <= RANK_MAX:
            raise DataError(
                f"post {self.id!r}: rank {self.rank} outside [{RANK_MIN}, {RANK_MAX}]"
            )


@dataclass(frozen=True)
class Corpus:
    """An immutable day-ordered collection of posts."""

    posts: tuple[Post, ...]

    def __post_init__(self) -> None:
        # Stable sort: within a day, input order is preserved.
        object.__setattr__(
            self, "posts", tuple(sorted(self.posts, key=lambda p: p.day))
        )

    def __len__(self) -> int:
        return len(self.posts)

    def __iter__(self) -> Iterator[Post]:
        return iter(self.posts)

    def __bool__(self) -> bool:
        return bool(self.posts)

    @property
    def day_range(self) -> tuple[int, int]:
        if not self.posts:
            raise DataError("empty corpus has no day range")
        return self.posts[0].day, self.posts[-1].day

    def days(self) -> list[int]:
        """Distinct day indices in ascending order."""
        return sorted({p.day for p in self.posts})

    def posts_on(self, day: int) -> list[Post]:
        return [p for p in self.posts if p.day == day]


def _parse_line(line: str, lineno: int, require_labels: bool) -> Post:
    fields = line.split("\t")
    if len(fields) != 5:
        raise DataError(
            f"line {lineno}: expected 5 tab-separated fields, got {len(fields)}"
        )
    pid, day_s, label_s, rank_s, text = fields
    try:
        day = int(day_s)
    except ValueError:
        raise DataError(f"line {lineno}: day {day_s!r} is not an integer") from None
    label = None
    if label_s:
        try:
            label = SentimentLabel(int(label_s))
        except ValueError:
            raise DataError(
                f"line {lineno}: label {label_s!r} is not one of -1/0/1"
            ) from None
    elif require_labels:
        raise DataError(f"line {lineno}: missing label")
    rank = None
    if rank_s:
        try:
            rank = int(rank_s)
        except ValueError:
            raise DataError(f"line {lineno}: rank {rank_s!r} is not an integer") from None
    try:
        return Post(pid, day, text, label=label, rank=rank)
    except DataError as exc:
        raise DataError(f"line {lineno}: {exc}") from None


def load_corpus(path: str | Path, require_labels: bool = False) -> Corpus:
    """Load a corpus file, sorting posts by day.

    Raises DataError on malformed lines (naming the line number), missing
    labels when ``require_labels`` is set, non-UTF-8 content, or an empty
    corpus.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read corpus {path}: {exc}") from None
    try:
        content = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8: {exc}") from None

    posts = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line or line.startswith("#"):
            continue
        posts.append(_parse_line(line, lineno, require_labels))
    if not posts:
        raise DataError(f"{path}: empty corpus")
    return Corpus(tuple(posts))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical corpus format; ``load_corpus`` round-trips it exactly."""
    lines = []
    for p in corpus:
        label_s = str(p.label.code) if p.label is not None else ""
        rank_s = str(p.rank) if p.rank is not None else ""
        lines.append(f"{p.id}\t{p.day}\t{label_s}\t{rank_s}\t{p.text}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def split_by_day(corpus: Corpus, train_days: int) -> tuple[Corpus, Corpus]:
    """Split into the earliest ``train_days`` distinct days and the remainder.

    The two halves partition the corpus.  Raises DataError unless the corpus
    spans at least ``train_days`` + 1 distinct days.
    """
    if train_days < 1:
        raise DataError(f"train_days must be >= 1, got {train_days}")
    days = corpus.days()
    if len(days) < train_days + 1:
        raise DataError(
            f"corpus spans {len(days)} distinct days, need at least {train_days + 1}"
        )
    cutoff = days[train_days - 1]
    train = tuple(p for p in corpus if p.day <= cutoff)
    test = tuple(p for p in corpus if p.day > cutoff)
    return Corpus(train), Corpus(test)


def class_histogram(corpus: Corpus) -> dict[SentimentLabel, int]:
    """Count posts per label; every label key is present.  Raises DataError on
    an unlabeled post."""
    counts = {label: 0 for label in SentimentLabel}
    for p in corpus:
        if p.label is None:
            raise DataError(f"post {p.id!r} has no label")
        counts[p.label] += 1
    return counts
