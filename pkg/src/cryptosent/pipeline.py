"""End-to-end wiring: the sentiment pipeline and the AR baseline evaluated on
the identical day-level up/down task (posts of day d predict day d+1)."""

from __future__ import annotations

from dataclasses import dataclass

from cryptosent.corpus import Corpus, split_by_day
from cryptosent.encoder import DEFAULT_MAX_LEN
from cryptosent.errors import DataError
from cryptosent.evaluation import EvalReport, build_report, evaluate_trend
from cryptosent.lexicon import Lexicon
from cryptosent.market import (
    ArModel,
    PriceSeries,
    Trend,
    TrendPrediction,
    Verdict,
    ar_predict,
    compute_returns,
    fit_ar,
    majority_vote,
    trend_labels,
)
from cryptosent.neural import SentimentModel
from cryptosent.sentiment import predict_post


@dataclass(frozen=True)
class ArDayForecast:
    target_day: int
    predicted_return: float
    verdict: Verdict


def predict_day_trends(
    model: SentimentModel,
    lexicon: Lexicon,
    corpus: Corpus,
    days: list[int],
    max_len: int = DEFAULT_MAX_LEN,
) -> list[TrendPrediction]:
    """Majority vote over the predicted sentiment of each day's posts;
    day d votes on the trend of day d+1."""
    predictions = []
    for day in days:
        labels = [
            predict_post(model, lexicon, post.text, max_len).label
            for post in corpus.posts_on(day)
        ]
        predictions.append(majority_vote(labels, day + 1))
    return predictions


def _trend_to_verdict(trend: Trend) -> Verdict:
    if trend is Trend.UP:
        return Verdict.UP
    if trend is Trend.DOWN:
        return Verdict.DOWN
    return Verdict.ABSTAIN  # a flat forecast asserts no direction


def ar_day_forecasts(
    prices: PriceSeries,
    order: int,
    mode: str,
    last_train_day: int,
    target_days: list[int],
) -> list[ArDayForecast]:
    """Fit AR(order) on returns realized through ``last_train_day``, then
    one-step forecast each target day from the actual preceding returns."""
    returns = compute_returns(prices, mode)
    by_day = dict(zip(prices.days[1:], returns))
    train_returns = [by_day[d] for d in prices.days[1:] if d <= last_train_day]
    model = fit_ar(train_returns, order)
    forecasts = []
    for target in target_days:
        lag_days = range(target - order, target)
        missing = [d for d in lag_days if d not in by_day]
        if missing:
            raise DataError(
                f"target day {target}: missing returns for days {missing}"
            )
        recent = [by_day[d] for d in lag_days]
        r_hat, trend = ar_predict(model, recent)
        forecasts.append(ArDayForecast(target, r_hat, _trend_to_verdict(trend)))
    return forecasts


def run_evaluation(
    corpus: Corpus,
    lexicon: Lexicon,
    model: SentimentModel,
    prices: PriceSeries,
    train_days: int,
    ar_order: int = 2,
    return_mode: str = "log",
    max_len: int = DEFAULT_MAX_LEN,
    config_digest: str = "",
) -> EvalReport:
    """Split the corpus, run both predictors over the test days, and score
    them on the same non-flat target days."""
    train_corpus, test_corpus = split_by_day(corpus, train_days)
    test_days = test_corpus.days()
    targets = [d + 1 for d in test_days]

    actual_by_day = dict(trend_labels(prices))
    missing = [t for t in targets if t not in actual_by_day]
    if missing:
        raise DataError(f"price series lacks closes for target days {missing}")
    kept = [t for t in targets if actual_by_day[t] is not Trend.FLAT]
    if not kept:
        raise DataError("every target day is flat; nothing to evaluate")
    actual = [(t, actual_by_day[t]) for t in kept]

    lstm_all = predict_day_trends(model, lexicon, test_corpus, test_days, max_len)
    lstm_kept = [p for p in lstm_all if p.target_day in set(kept)]

    last_train_day = train_corpus.days()[-1]
    ar_all = ar_day_forecasts(prices, ar_order, return_mode, last_train_day, targets)
    ar_kept = [(f.target_day, f.verdict) for f in ar_all if f.target_day in set(kept)]

    lstm_eval = evaluate_trend(lstm_kept, actual)
    ar_eval = evaluate_trend(ar_kept, actual)
    split = (
        f"train days {train_corpus.days()[0]}..{last_train_day}, "
        f"test targets {targets[0]}..{targets[-1]}"
    )
    return build_report(ar_eval, lstm_eval, split, config_digest)
