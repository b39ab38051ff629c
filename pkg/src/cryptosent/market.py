"""Daily price series, trend labels, majority-vote day predictions, and an
autoregressive baseline fit by conditional least squares on returns.

Price files are CSV with header ``day,close``; day indices align with the
corpus day indices.  The convention throughout: posts of day d predict the
trend of day d+1, and a return r_t belongs to its later day t.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from cryptosent.corpus import SentimentLabel
from cryptosent.errors import DataError, NumericError


class Trend(Enum):
    UP = "up"
    DOWN = "down"
    FLAT = "flat"


class Verdict(Enum):
    UP = "up"
    DOWN = "down"
    ABSTAIN = "abstain"


@dataclass(frozen=True)
class PriceSeries:
    days: tuple[int, ...]
    closes: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.days) != len(self.closes):
            raise DataError("days and closes differ in length")
        if not self.days:
            raise DataError("empty price series")
        for k in range(1, len(self.days)):
            if self.days[k] <= self.days[k - 1]:
                raise DataError(
                    f"days must be strictly increasing ({self.days[k - 1]} then {self.days[k]})"
                )
        for day, close in zip(self.days, self.closes):
            if not (math.isfinite(close) and close > 0):
                raise DataError(f"day {day}: close {close} is not a positive real")

    def __len__(self) -> int:
        return len(self.days)


def load_prices(path: str | Path) -> PriceSeries:
    path = Path(path)
    try:
        lines = path.read_bytes().decode("utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read prices {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8: {exc}") from None
    if not lines or lines[0] != "day,close":
        raise DataError(f"{path}: expected header 'day,close'")
    days = []
    closes = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 'day,close'")
        try:
            days.append(int(parts[0]))
            closes.append(float(parts[1]))
        except ValueError:
            raise DataError(f"{path}:{lineno}: malformed number") from None
    return PriceSeries(tuple(days), tuple(closes))


def save_prices(series: PriceSeries, path: str | Path) -> None:
    lines = ["day,close"]
    lines.extend(f"{d},{c!r}" for d, c in zip(series.days, series.closes))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def trend_labels(series: PriceSeries) -> list[tuple[int, Trend]]:
    """Per consecutive close pair: Up/Down/Flat, labeled with the later day."""
    if len(series) < 2:
        raise DataError("price series too short for trend labels (need >= 2 closes)")
    out = []
    for k in range(1, len(series)):
        prev, cur = series.closes[k - 1], series.closes[k]
        if cur > prev:
            trend = Trend.UP
        elif cur < prev:
            trend = Trend.DOWN
        else:
            trend = Trend.FLAT
        out.append((series.days[k], trend))
    return out


@dataclass(frozen=True)
class TrendPrediction:
    target_day: int
    verdict: Verdict
    pos_votes: int
    neg_votes: int
    neutral_votes: int

    def __post_init__(self) -> None:
        if min(self.pos_votes, self.neg_votes, self.neutral_votes) < 0:
            raise DataError("vote counts must be non-negative")
        if self.pos_votes > self.neg_votes:
            expected = Verdict.UP
        elif self.neg_votes > self.pos_votes:
            expected = Verdict.DOWN
        else:
            expected = Verdict.ABSTAIN
        if self.verdict is not expected:
            raise DataError(
                f"verdict {self.verdict} inconsistent with votes "
                f"{self.pos_votes}/{self.neg_votes}"
            )


def majority_vote(
    post_sentiments: Sequence[SentimentLabel], target_day: int
) -> TrendPrediction:
    """Count one vote per post: Up when positives outnumber negatives, Down
    for the reverse, Abstain on a tie or an empty window.  Neutral posts are
    counted but do not vote."""
    pos = sum(1 for s in post_sentiments if s is SentimentLabel.POSITIVE)
    neg = sum(1 for s in post_sentiments if s is SentimentLabel.NEGATIVE)
    neu = sum(1 for s in post_sentiments if s is SentimentLabel.NEUTRAL)
    if pos > neg:
        verdict = Verdict.UP
    elif neg > pos:
        verdict = Verdict.DOWN
    else:
        verdict = Verdict.ABSTAIN
    return TrendPrediction(target_day, verdict, pos, neg, neu)


def compute_returns(series: PriceSeries, mode: str = "log") -> np.ndarray:
    """Per consecutive close pair: log return ln(c_{t+1}/c_t) or simple
    difference c_{t+1} - c_t, aligned with the later day."""
    if mode not in ("log", "simple"):
        raise ValueError(f"mode must be 'log' or 'simple', got {mode!r}")
    if len(series) < 2:
        raise DataError("price series too short for returns (need >= 2 closes)")
    closes = np.asarray(series.closes, dtype=np.float64)
    if mode == "log":
        return np.log(closes[1:] / closes[:-1])
    return closes[1:] - closes[:-1]


@dataclass(frozen=True)
class ArModel:
    """r_hat_t = intercept + sum_k coefficients[k-1] * r_{t-k}; the first
    coefficient multiplies the most recent return."""

    order: int
    coefficients: tuple[float, ...]
    intercept: float

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if len(self.coefficients) != self.order:
            raise ValueError(
                f"expected {self.order} coefficients, got {len(self.coefficients)}"
            )


def fit_ar(returns: Sequence[float] | np.ndarray, p: int) -> ArModel:
    """Conditional least squares: regress r_t on (1, r_{t-1}, ..., r_{t-p})
    over all valid t by solving the (p+1)-dimensional normal equations
    exactly.  Raises NumericError when the design is singular (for example,
    constant returns) and DataError with fewer than 2p+1 observations."""
    if p < 1:
        raise ValueError(f"order must be >= 1, got {p}")
    r = np.asarray(returns, dtype=np.float64)
    if r.ndim != 1:
        raise ValueError("returns must be one-dimensional")
    n = r.size
    if n < 2 * p + 1:
        raise DataError(f"need at least {2 * p + 1} returns for order {p}, got {n}")
    columns = [np.ones(n - p)]
    columns.extend(r[p - k : n - k] for k in range(1, p + 1))
    design = np.column_stack(columns)
    y = r[p:]
    try:
        beta = np.linalg.solve(design.T @ design, design.T @ y)
    except np.linalg.LinAlgError:
        raise NumericError(
            f"singular AR({p}) design matrix (degenerate returns)"
        ) from None
    if not np.isfinite(beta).all():
        raise NumericError(f"AR({p}) solve produced non-finite coefficients")
    return ArModel(p, tuple(float(b) for b in beta[1:]), float(beta[0]))


def ar_predict(
    model: ArModel, recent_returns: Sequence[float]
) -> tuple[float, Trend]:
    """One-step forecast from exactly the last p returns, given in
    chronological order (most recent last).  Trend is the forecast's sign."""
    if len(recent_returns) != model.order:
        raise DataError(
            f"expected {model.order} recent returns, got {len(recent_returns)}"
        )
    r_hat = model.intercept
    for k, phi in enumerate(model.coefficients, start=1):
        r_hat += phi * float(recent_returns[-k])
    if r_hat > 0:
        trend = Trend.UP
    elif r_hat < 0:
        trend = Trend.DOWN
    else:
        trend = Trend.FLAT
    return r_hat, trend
