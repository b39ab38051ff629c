"""Confusion matrices, precision/recall with explicit undefined handling,
relative-improvement arithmetic, and the two-method comparison report.

Undefined rates (zero denominators) are surfaced as None and rendered
"n/a"; they are never silently reported as 0.  For trend evaluation the
positive class is Up, and an Abstain counts as a non-Up prediction: it can
cost recall but never precision.
"""

from __future__ import annotations

import json
from collections.abc import Hashable, Sequence
from dataclasses import dataclass

from cryptosent.errors import DataError
from cryptosent.market import Trend, TrendPrediction, Verdict

METHOD_AR = "Auto Regression"
METHOD_LSTM = "LSTM Sentiment Analyzer"


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[Hashable, ...]
    counts: dict[tuple[Hashable, Hashable], int]

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    def tp(self, positive: Hashable) -> int:
        return self.counts[(positive, positive)]

    def fp(self, positive: Hashable) -> int:
        return sum(
            self.counts[(positive, a)] for a in self.classes if a != positive
        )

    def fn(self, positive: Hashable) -> int:
        return sum(
            self.counts[(p, positive)] for p in self.classes if p != positive
        )

    def tn(self, positive: Hashable) -> int:
        return self.n - self.tp(positive) - self.fp(positive) - self.fn(positive)


def confusion(
    predicted: Sequence[Hashable],
    actual: Sequence[Hashable],
    classes: Sequence[Hashable],
) -> ConfusionMatrix:
    """Exact (predicted, actual) tally over a declared class set."""
    if len(predicted) != len(actual):
        raise DataError(
            f"predicted has {len(predicted)} entries, actual has {len(actual)}"
        )
    class_set = set(classes)
    counts = {(p, a): 0 for p in classes for a in classes}
    for p, a in zip(predicted, actual):
        if p not in class_set:
            raise DataError(f"unknown predicted class {p!r}")
        if a not in class_set:
            raise DataError(f"unknown actual class {a!r}")
        counts[(p, a)] += 1
    return ConfusionMatrix(tuple(classes), counts)


def precision_recall(
    cm: ConfusionMatrix, positive_class: Hashable
) -> tuple[float | None, float | None]:
    """(TP/(TP+FP), TP/(TP+FN)); a zero denominator yields None, not 0."""
    if cm.n == 0:
        raise DataError("empty confusion matrix")
    tp = cm.tp(positive_class)
    fp = cm.fp(positive_class)
    fn = cm.fn(positive_class)
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / (tp + fn) if tp + fn > 0 else None
    return precision, recall


def relative_improvement(new_rate: float, baseline_rate: float) -> float:
    """100 * (new - baseline) / baseline; callers format to one decimal."""
    if baseline_rate <= 0:
        raise DataError(f"baseline rate must be positive, got {baseline_rate}")
    return 100.0 * (new_rate - baseline_rate) / baseline_rate


@dataclass(frozen=True)
class TrendEval:
    """Binary tally for the day-level up/down task, positive class Up."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def n_days(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def precision(self) -> float | None:
        denom = self.tp + self.fp
        return self.tp / denom if denom > 0 else None

    @property
    def recall(self) -> float | None:
        denom = self.tp + self.fn
        return self.tp / denom if denom > 0 else None


def evaluate_trend(
    predictions: Sequence[TrendPrediction | tuple[int, Verdict]],
    actual: Sequence[tuple[int, Trend]],
) -> TrendEval:
    """Score day-aligned predictions against realized trends.

    Accepts TrendPrediction objects or plain (target_day, verdict) pairs so
    the AR baseline is scored by the identical rule.  Flat actual days must
    be excluded beforehand; misaligned days raise DataError.
    """
    if len(predictions) != len(actual):
        raise DataError(
            f"{len(predictions)} predictions but {len(actual)} actual trends"
        )
    tp = fp = fn = tn = 0
    for pred, (day, trend) in zip(predictions, actual):
        if isinstance(pred, TrendPrediction):
            pred_day, verdict = pred.target_day, pred.verdict
        else:
            pred_day, verdict = pred
        if pred_day != day:
            raise DataError(f"day misalignment: prediction for {pred_day}, actual {day}")
        if trend is Trend.FLAT:
            raise DataError(f"day {day}: flat actual days must be excluded")
        predicted_up = verdict is Verdict.UP
        actual_up = trend is Trend.UP
        if predicted_up and actual_up:
            tp += 1
        elif predicted_up:
            fp += 1
        elif actual_up:
            fn += 1
        else:
            tn += 1
    return TrendEval(tp, fp, fn, tn)


@dataclass(frozen=True)
class MethodResult:
    method: str
    precision: float | None
    recall: float | None

    def __post_init__(self) -> None:
        for name, rate in (("precision", self.precision), ("recall", self.recall)):
            if rate is not None and not 0.0 <= rate <= 1.0:
                raise DataError(f"{self.method}: {name} {rate} outside [0, 1]")


@dataclass(frozen=True)
class EvalReport:
    baseline: MethodResult
    candidate: MethodResult
    improvement_precision_pct: float | None
    improvement_recall_pct: float | None
    n_days: int
    split: str
    config_digest: str


def build_report(
    ar_eval: TrendEval,
    lstm_eval: TrendEval,
    split: str,
    config_digest: str,
) -> EvalReport:
    """Assemble the comparison report; improvements are None whenever either
    side's rate is undefined or the baseline rate is zero."""
    if ar_eval.n_days != lstm_eval.n_days:
        raise DataError("methods were evaluated on different day counts")

    def improvement(new: float | None, base: float | None) -> float | None:
        if new is None or base is None or base <= 0:
            return None
        return relative_improvement(new, base)

    baseline = MethodResult(METHOD_AR, ar_eval.precision, ar_eval.recall)
    candidate = MethodResult(METHOD_LSTM, lstm_eval.precision, lstm_eval.recall)
    return EvalReport(
        baseline=baseline,
        candidate=candidate,
        improvement_precision_pct=improvement(candidate.precision, baseline.precision),
        improvement_recall_pct=improvement(candidate.recall, baseline.recall),
        n_days=ar_eval.n_days,
        split=split,
        config_digest=config_digest,
    )


def _pct(rate: float | None) -> str:
    return "n/a" if rate is None else f"{100.0 * rate:.1f}%"


def _imp(pct: float | None) -> str:
    return "n/a" if pct is None else f"{pct:+.1f}%"


def render_report(report: EvalReport, format: str = "text") -> str:
    """Human two-row table or machine JSON carrying full-precision values."""
    if format == "text":
        rows = [report.baseline, report.candidate]
        width = max(len(r.method) for r in rows) + 2
        lines = [f"{'Method':<{width}}{'Precision':>10}{'Recall':>10}"]
        for r in rows:
            lines.append(f"{r.method:<{width}}{_pct(r.precision):>10}{_pct(r.recall):>10}")
        lines.append("")
        lines.append(
            f"Improvement over {report.baseline.method}: "
            f"precision {_imp(report.improvement_precision_pct)}, "
            f"recall {_imp(report.improvement_recall_pct)}"
        )
        lines.append(
            f"n_days={report.n_days}  split={report.split}  "
            f"config={report.config_digest}"
        )
        return "\n".join(lines) + "\n"
    if format == "json":
        doc = {
            "methods": [
                {
                    "method": r.method,
                    "precision": r.precision,
                    "recall": r.recall,
                }
                for r in (report.baseline, report.candidate)
            ],
            "improvement_precision_pct": report.improvement_precision_pct,
            "improvement_recall_pct": report.improvement_recall_pct,
            "n_days": report.n_days,
            "split": report.split,
            "config_digest": report.config_digest,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"format must be 'text' or 'json', got {format!r}")


def parse_report(text: str) -> EvalReport:
    """Inverse of the JSON rendering; values round-trip exactly."""
    try:
        doc = json.loads(text)
        methods = {m["method"]: m for m in doc["methods"]}
        baseline = methods[METHOD_AR]
        candidate = methods[METHOD_LSTM]
        return EvalReport(
            baseline=MethodResult(METHOD_AR, baseline["precision"], baseline["recall"]),
            candidate=MethodResult(
                METHOD_LSTM, candidate["precision"], candidate["recall"]
            ),
            improvement_precision_pct=doc["improvement_precision_pct"],
            improvement_recall_pct=doc["improvement_recall_pct"],
            n_days=doc["n_days"],
            split=doc["split"],
            config_digest=doc["config_digest"],
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DataError(f"malformed report document: {exc}") from None
