"""Command-line interface: the whole pipeline as subcommands.

Every subcommand reads one shared configuration: built-in defaults, then an
optional ``key = value`` config file (``--config``), then per-key CLI flags,
the last writer winning.  All randomness flows from the single ``seed`` key.

Exit codes: 0 success, 2 usage or config error, 3 data error, 4 numeric
failure (failed gradient check, singular AR fit).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from cryptosent.corpus import SentimentLabel, load_corpus, save_corpus, split_by_day
from cryptosent.encoder import EncodedPost, encode_post
from cryptosent.errors import DataError, NumericError
from cryptosent.evaluation import render_report
from cryptosent.lexicon import (
    BootstrapConfig,
    LexiconEntry,
    Lexicon,
    assign_indices,
    build_lexicon,
    load_lexicon,
    save_lexicon,
)
from cryptosent.market import load_prices, save_prices
from cryptosent.neural import (
    ModelDims,
    grad_check,
    init_model,
    load_model,
    save_model,
)
from cryptosent.pipeline import ar_day_forecasts, predict_day_trends, run_evaluation
from cryptosent.sentiment import TrainConfig, predict_post, train
from cryptosent.synthkit import SynthConfig, synth_corpus, synth_market

COMMANDS = (
    "build-lexicon",
    "encode",
    "train",
    "predict-sentiment",
    "predict-trend",
    "baseline-ar",
    "evaluate",
    "gradcheck",
    "synth",
)

# One flat schema shared by every subcommand; values are the defaults and
# fix each key's type.
CONFIG_DEFAULTS: dict[str, object] = {
    # paths
    "corpus": "corpus.tsv",
    "prices": "prices.csv",
    "lexicon": "lexicon.tsv",
    "seeds": "seeds.tsv",
    "checkpoint": "model.ckpt",
    "history": "history.csv",
    "report": "report.json",
    # training
    "epochs": 30,
    "batch_size": 32,
    "lr": 0.05,
    "clip": 5.0,
    "max_len": 64,
    "seed": 7,
    "shuffle": True,
    "embed": 32,
    "hidden": 64,
    # lexicon bootstrapping
    "rank_threshold": 2,
    "min_candidate_freq": 3,
    "max_ngram_len": 4,
    "max_new_per_iter": 20,
    "max_iters": 5,
    "purity_min": 0.8,
    # market / evaluation
    "ar_order": 2,
    "return_mode": "log",
    "train_days": 7,
    # synthetic data
    "n_days": 40,
    "posts_per_day": 30,
    "vocab_pos": 20,
    "vocab_neg": 20,
    "vocab_neu": 20,
    "label_noise": 0.1,
    "price_noise": 0.01,
    "sentiment_strength": 0.05,
}


def _coerce(key: str, raw: str) -> object:
    default = CONFIG_DEFAULTS[key]
    if isinstance(default, bool):
        lowered = raw.strip().lower()
        if lowered in ("true", "1", "yes"):
            return True
        if lowered in ("false", "0", "no"):
            return False
        raise ValueError(f"config key {key!r}: expected a boolean, got {raw!r}")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def parse_config_file(path: str | Path) -> dict[str, object]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    try:
        content = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from None
    values: dict[str, object] = {}
    for lineno, line in enumerate(content.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in CONFIG_DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _coerce(key, raw.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return values


def effective_config(args: argparse.Namespace) -> dict[str, object]:
    cfg = dict(CONFIG_DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(parse_config_file(args.config))
    for key in CONFIG_DEFAULTS:
        override = getattr(args, key.replace("-", "_"), None)
        if override is not None:
            cfg[key] = _coerce(key, override) if isinstance(override, str) else override
    return cfg


def config_digest(cfg: dict[str, object]) -> str:
    canonical = "\n".join(f"{k} = {cfg[k]}" for k in sorted(cfg))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cryptosent",
        description="Crypto sentiment lexicon, LSTM sentiment analyzer, and "
        "day-level price trend prediction with an AR baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "build-lexicon": "bootstrap the sentiment dictionary and assign indices",
        "encode": "print length + index vector for every corpus post",
        "train": "train the sentiment model, write checkpoint and history",
        "predict-sentiment": "score one post given via --text",
        "predict-trend": "majority-vote day trends for the test split",
        "baseline-ar": "autoregressive up/down forecasts after --boundary",
        "evaluate": "compare the pipeline against the AR baseline",
        "gradcheck": "finite-difference check of the analytic gradients",
        "synth": "generate a synthetic corpus, seed dictionary, and prices",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", help="path to a 'key = value' config file")
        for key in CONFIG_DEFAULTS:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, help=argparse.SUPPRESS)
        if name == "predict-sentiment":
            p.add_argument("--text", required=True, help="post text to score")
        if name == "baseline-ar":
            p.add_argument(
                "--boundary",
                type=int,
                required=True,
                help="last training day; forecasts start the day after",
            )
    return parser


def _cmd_synth(cfg: dict[str, object]) -> int:
    synth_cfg = SynthConfig(
        seed=cfg["seed"],
        n_days=cfg["n_days"],
        posts_per_day=cfg["posts_per_day"],
        vocab_pos=cfg["vocab_pos"],
        vocab_neg=cfg["vocab_neg"],
        vocab_neu=cfg["vocab_neu"],
        label_noise=cfg["label_noise"],
        price_noise=cfg["price_noise"],
        sentiment_strength=cfg["sentiment_strength"],
    )
    corpus, seeds = synth_corpus(synth_cfg)
    prices = synth_market(corpus, synth_cfg)
    save_corpus(corpus, cfg["corpus"])
    save_lexicon(Lexicon(LexiconEntry(s, pol) for s, pol in seeds), cfg["seeds"])
    save_prices(prices, cfg["prices"])
    print(
        f"wrote {len(corpus)} posts to {cfg['corpus']}, {len(seeds)} seeds to "
        f"{cfg['seeds']}, {len(prices)} closes to {cfg['prices']}"
    )
    return 0


def _bootstrap_config(cfg: dict[str, object]) -> BootstrapConfig:
    return BootstrapConfig(
        rank_threshold=cfg["rank_threshold"],
        min_candidate_freq=cfg["min_candidate_freq"],
        max_ngram_len=cfg["max_ngram_len"],
        max_new_per_iter=cfg["max_new_per_iter"],
        max_iters=cfg["max_iters"],
        purity_min=cfg["purity_min"],
    )


def _cmd_build_lexicon(cfg: dict[str, object]) -> int:
    corpus = load_corpus(cfg["corpus"])
    seeds = [(e.surface, e.polarity) for e in load_lexicon(cfg["seeds"])]
    lexicon = build_lexicon(corpus, seeds, _bootstrap_config(cfg))
    lexicon = assign_indices(lexicon, corpus)
    save_lexicon(lexicon, cfg["lexicon"])
    print(f"wrote {len(lexicon)} entries to {cfg['lexicon']}")
    return 0


def _cmd_encode(cfg: dict[str, object]) -> int:
    corpus = load_corpus(cfg["corpus"])
    lexicon = load_lexicon(cfg["lexicon"])
    for post in corpus:
        enc = encode_post(post, lexicon, cfg["max_len"])
        print(f"{enc.length} " + " ".join(str(i) for i in enc.indices))
    return 0


def _train_config(cfg: dict[str, object]) -> TrainConfig:
    return TrainConfig(
        epochs=cfg["epochs"],
        lr=cfg["lr"],
        clip=cfg["clip"],
        batch_size=cfg["batch_size"],
        max_len=cfg["max_len"],
        seed=cfg["seed"],
        shuffle=cfg["shuffle"],
        embed=cfg["embed"],
        hidden=cfg["hidden"],
    )


def _cmd_train(cfg: dict[str, object]) -> int:
    corpus = load_corpus(cfg["corpus"], require_labels=True)
    lexicon = load_lexicon(cfg["lexicon"])
    model, history = train(corpus, lexicon, _train_config(cfg))
    save_model(model, cfg["checkpoint"])
    lines = ["epoch,loss,accuracy"]
    for epoch, (lo, acc) in enumerate(zip(history.losses, history.accuracies), start=1):
        lines.append(f"{epoch},{lo!r},{acc!r}")
    Path(cfg["history"]).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(
        f"trained {len(history)} epochs: final loss {history.losses[-1]:.4f}, "
        f"accuracy {history.accuracies[-1]:.3f}; checkpoint {cfg['checkpoint']}"
    )
    return 0


def _cmd_predict_sentiment(cfg: dict[str, object], text: str) -> int:
    model = load_model(cfg["checkpoint"])
    lexicon = load_lexicon(cfg["lexicon"])
    pred = predict_post(model, lexicon, text, cfg["max_len"])
    if pred.empty:
        print(f"{pred.label.code}\t{pred.label.name.lower()}\tempty")
    else:
        scores = " ".join(repr(s) for s in pred.scores)
        print(f"{pred.label.code}\t{pred.label.name.lower()}\t{scores}")
    return 0


def _cmd_predict_trend(cfg: dict[str, object]) -> int:
    corpus = load_corpus(cfg["corpus"])
    lexicon = load_lexicon(cfg["lexicon"])
    model = load_model(cfg["checkpoint"])
    _, test_corpus = split_by_day(corpus, cfg["train_days"])
    for pred in predict_day_trends(
        model, lexicon, test_corpus, test_corpus.days(), cfg["max_len"]
    ):
        print(
            f"{pred.target_day}\t{pred.verdict.value}\t{pred.pos_votes}"
            f"\t{pred.neg_votes}\t{pred.neutral_votes}"
        )
    return 0


def _cmd_baseline_ar(cfg: dict[str, object], boundary: int) -> int:
    prices = load_prices(cfg["prices"])
    targets = [
        d for d in prices.days if d > boundary and d - cfg["ar_order"] >= prices.days[1]
    ]
    if not targets:
        raise DataError(f"no forecastable days after boundary {boundary}")
    for f in ar_day_forecasts(
        prices, cfg["ar_order"], cfg["return_mode"], boundary, targets
    ):
        print(f"{f.target_day}\t{f.predicted_return!r}\t{f.verdict.value}")
    return 0


def _cmd_evaluate(cfg: dict[str, object]) -> int:
    corpus = load_corpus(cfg["corpus"])
    lexicon = load_lexicon(cfg["lexicon"])
    model = load_model(cfg["checkpoint"])
    prices = load_prices(cfg["prices"])
    report = run_evaluation(
        corpus,
        lexicon,
        model,
        prices,
        train_days=cfg["train_days"],
        ar_order=cfg["ar_order"],
        return_mode=cfg["return_mode"],
        max_len=cfg["max_len"],
        config_digest=config_digest(cfg),
    )
    Path(cfg["report"]).write_text(render_report(report, "json"), encoding="utf-8")
    print(render_report(report, "text"), end="")
    return 0


def _cmd_gradcheck(cfg: dict[str, object]) -> int:
    dims = ModelDims(vocab=12, embed=4, hidden=6)
    model = init_model(dims, cfg["seed"])
    rng = np.random.default_rng(cfg["seed"])
    length = 5
    indices = tuple(int(k) for k in rng.integers(2, dims.vocab, size=length))
    example = (EncodedPost(indices, length), SentimentLabel.POSITIVE)
    report = grad_check(model, example)
    status = "PASS" if report.passed else "FAIL"
    print(
        f"{status} max_rel_err={report.max_rel_err:.3e} worst={report.worst_param} "
        f"n_checked={report.n_checked}"
    )
    if not report.passed:
        raise NumericError(
            f"gradient check failed: max_rel_err={report.max_rel_err:.3e} "
            f"at {report.worst_param}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = effective_config(args)
        if args.command == "synth":
            return _cmd_synth(cfg)
        if args.command == "build-lexicon":
            return _cmd_build_lexicon(cfg)
        if args.command == "encode":
            return _cmd_encode(cfg)
        if args.command == "train":
            return _cmd_train(cfg)
        if args.command == "predict-sentiment":
            return _cmd_predict_sentiment(cfg, args.text)
        if args.command == "predict-trend":
            return _cmd_predict_trend(cfg)
        if args.command == "baseline-ar":
            return _cmd_baseline_ar(cfg, args.boundary)
        if args.command == "evaluate":
            return _cmd_evaluate(cfg)
        if args.command == "gradcheck":
            return _cmd_gradcheck(cfg)
        print(f"error: usage: unknown command {args.command!r}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"error: numeric: {exc}", file=sys.stderr)
        return 4
    except DataError as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
