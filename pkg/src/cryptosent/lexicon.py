"""Crypto slang sentiment dictionary: seed words, bootstrap expansion, indexing.

Bootstrapping harvests frequent character n-grams from strongly polar posts
(|rank| >= threshold), keeps the ones whose occurrences concentrate on one
polarity side, and adds them with the majority side's polarity.  Indexing
recounts each surface over the full corpus with the greedy tokenizer and
assigns integer indices in descending frequency, starting at 2 (0 is PAD,
1 is OOV).

File format: UTF-8, header line ``#lexicon v1``, then one entry per line
with tab-separated surface, polarity code (-1/0/1), frequency, and index
(empty until assigned).  Only the header line may start with ``#``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, replace
from pathlib import Path

from cryptosent.corpus import Corpus, SentimentLabel
from cryptosent.errors import DataError

PAD_INDEX = 0
OOV_INDEX = 1
LEXICON_HEADER = "#lexicon v1"


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    polarity: SentimentLabel
    frequency: int = 0
    index: int | None = None

    def __post_init__(self) -> None:
        if not self.surface:
            raise DataError("lexicon surface is empty")
        if "\t" in self.surface or "\n" in self.surface:
            raise DataError(f"lexicon surface {self.surface!r} contains tab or newline")
        if self.frequency < 0:
            raise DataError(f"surface {self.surface!r}: negative frequency")
        if self.index is not None and self.index < 2:
            raise DataError(
                f"surface {self.surface!r}: index {self.index} collides with reserved 0/1"
            )


class Lexicon:
    """Entries keyed by surface form, in insertion order.

    Token indices 0 and 1 are reserved for PAD and OOV; entry indices start
    at 2 once :func:`assign_indices` has run.
    """

    def __init__(self, entries: Iterable[LexiconEntry] = ()) -> None:
        self._entries: dict[str, LexiconEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: LexiconEntry) -> None:
        if entry.surface in self._entries:
            raise DataError(f"duplicate lexicon surface {entry.surface!r}")
        self._entries[entry.surface] = entry

    def get(self, surface: str) -> LexiconEntry:
        try:
            return self._entries[surface]
        except KeyError:
            raise KeyError(f"surface {surface!r} not in lexicon") from None

    def index_of(self, surface: str) -> int:
        entry = self.get(surface)
        if entry.index is None:
            raise DataError(f"surface {surface!r} has no assigned index")
        return entry.index

    def __contains__(self, surface: str) -> bool:
        return surface in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self._entries.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return list(self) == list(other)

    @property
    def vocab_size(self) -> int:
        """Entry count plus the two reserved indices."""
        return len(self._entries) + 2

    @property
    def indexed(self) -> bool:
        return all(e.index is not None for e in self)

    @property
    def max_surface_len(self) -> int:
        return max((len(s) for s in self._entries), default=0)


@dataclass(frozen=True)
class BootstrapConfig:
    rank_threshold: int = 2
    min_candidate_freq: int = 3
    max_ngram_len: int = 4
    max_new_per_iter: int = 20
    max_iters: int = 5
    purity_min: float = 0.8

    def __post_init__(self) -> None:
        if self.rank_threshold < 1:
            raise ValueError("rank_threshold must be >= 1")
        if self.min_candidate_freq < 1:
            raise ValueError("min_candidate_freq must be >= 1")
        if self.max_ngram_len < 1:
            raise ValueError("max_ngram_len must be >= 1")
        if self.max_new_per_iter < 1:
            raise ValueError("max_new_per_iter must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0.5 < self.purity_min <= 1.0:
            raise ValueError("purity_min must lie in (0.5, 1]")


def bootstrap_iteration(
    corpus: Corpus, lexicon: Lexicon, cfg: BootstrapConfig
) -> list[LexiconEntry]:
    """One expansion round: candidate n-grams from strongly polar posts.

    Counts every occurrence (all start positions, overlaps included) of each
    character n-gram of 1..max_ngram_len code points in posts with
    |rank| >= rank_threshold, split by the post's polarity side.  A candidate
    qualifies when its total polar count reaches min_candidate_freq, the
    majority side holds at least purity_min of its occurrences, and the
    surface is not already in the lexicon.  Returns at most max_new_per_iter
    entries ordered by descending polar frequency, ties by code-point order;
    an empty list means a fixed point.
    """
    if len(lexicon) == 0:
        raise DataError("bootstrap requires a non-empty lexicon")

    pos_counts: Counter[str] = Counter()
    neg_counts: Counter[str] = Counter()
    for post in corpus:
        if post.rank is None or abs(post.rank) < cfg.rank_threshold:
            continue
        counts = pos_counts if post.rank > 0 else neg_counts
        text = post.text
        n = len(text)
        for start in range(n):
            limit = min(cfg.max_ngram_len, n - start)
            for length in range(1, limit + 1):
                counts[text[start : start + length]] += 1

    candidates = []
    for gram in pos_counts.keys() | neg_counts.keys():
        if gram in lexicon:
            continue
        p = pos_counts[gram]
        q = neg_counts[gram]
        total = p + q
        if total < cfg.min_candidate_freq:
            continue
        if max(p, q) / total < cfg.purity_min:
            continue
        # purity_min > 0.5 guarantees a strict majority side
        polarity = SentimentLabel.POSITIVE if p > q else SentimentLabel.NEGATIVE
        candidates.append((total, gram, polarity))
    candidates.sort(key=lambda item: (-item[0], item[1]))
    return [
        LexiconEntry(gram, polarity, frequency=total)
        for total, gram, polarity in candidates[: cfg.max_new_per_iter]
    ]


def build_lexicon(
    corpus: Corpus,
    seeds: Sequence[tuple[str, SentimentLabel]],
    cfg: BootstrapConfig | None = None,
) -> Lexicon:
    """Seed the lexicon and expand it with bootstrap rounds until a fixed
    point or cfg.max_iters.  Seeds keep their given polarity; bootstrapping
    only adds new surfaces, it never flips existing ones."""
    cfg = cfg or BootstrapConfig()
    if not seeds:
        raise DataError("seed list is empty")
    if not any(p.rank is not None for p in corpus):
        raise DataError("corpus has no ranked posts")
    lexicon = Lexicon()
    for surface, polarity in seeds:
        lexicon.add(LexiconEntry(surface, polarity))
    for _ in range(cfg.max_iters):
        new_entries = bootstrap_iteration(corpus, lexicon, cfg)
        if not new_entries:
            break
        for entry in new_entries:
            lexicon.add(entry)
    return lexicon


def assign_indices(lexicon: Lexicon, corpus: Corpus) -> Lexicon:
    """Recount every surface over the full corpus with the greedy tokenizer
    and assign indices 2..V+1 in descending frequency, ties by ascending
    code-point order of the surface.  Idempotent: token counts depend only on
    the surface set, which is unchanged."""
    from cryptosent.encoder import tokenize  # deferred: encoder depends on this module

    counts: Counter[str] = Counter()
    for post in corpus:
        for token in tokenize(post.text, lexicon):
            if token.known:
                counts[token.text] += 1
    ordered = sorted(lexicon, key=lambda e: (-counts[e.surface], e.surface))
    return Lexicon(
        replace(entry, frequency=counts[entry.surface], index=rank)
        for rank, entry in enumerate(ordered, start=2)
    )


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    """Write the lexicon file; entries appear in iteration order, so an
    indexed lexicon from :func:`assign_indices` serializes in index order."""
    lines = [LEXICON_HEADER]
    for e in lexicon:
        idx = "" if e.index is None else str(e.index)
        lines.append(f"{e.surface}\t{e.polarity.code}\t{e.frequency}\t{idx}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_lexicon(path: str | Path) -> Lexicon:
    path = Path(path)
    try:
        content = path.read_bytes().decode("utf-8")
    except OSError as exc:
        raise DataError(f"cannot read lexicon {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8: {exc}") from None
    lines = content.splitlines()
    if not lines or lines[0] != LEXICON_HEADER:
        raise DataError(f"{path}: missing header {LEXICON_HEADER!r}")
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise DataError(
                f"{path}:{lineno}: expected 4 tab-separated fields, got {len(fields)}"
            )
        surface, polarity_s, freq_s, idx_s = fields
        try:
            polarity = SentimentLabel(int(polarity_s))
            frequency = int(freq_s)
            index = int(idx_s) if idx_s else None
        except ValueError:
            raise DataError(f"{path}:{lineno}: malformed numeric field") from None
        entries.append(LexiconEntry(surface, polarity, frequency, index))
    return Lexicon(entries)
