"""Crypto microblog sentiment and price-trend prediction.

The package covers the full pipeline: loading labeled post corpora,
bootstrapping a crypto-slang sentiment dictionary from seed words, encoding
posts as index sequences, training a from-scratch LSTM sentiment classifier,
turning a day's predicted sentiments into an up/down call by majority vote,
and scoring that call against an autoregressive price baseline with
precision and recall.
"""

from cryptosent.corpus import (
    Corpus,
    Post,
    SentimentLabel,
    class_histogram,
    load_corpus,
    save_corpus,
    split_by_day,
)
from cryptosent.encoder import EncodedPost, Token, encode, encode_post, scan, tokenize
from cryptosent.errors import CryptosentError, DataError, NumericError
from cryptosent.evaluation import (
    ConfusionMatrix,
    EvalReport,
    confusion,
    evaluate_trend,
    precision_recall,
    relative_improvement,
    render_report,
)
from cryptosent.lexicon import (
    BootstrapConfig,
    Lexicon,
    LexiconEntry,
    assign_indices,
    bootstrap_iteration,
    build_lexicon,
    load_lexicon,
    save_lexicon,
)
from cryptosent.market import (
    ArModel,
    PriceSeries,
    Trend,
    TrendPrediction,
    Verdict,
    ar_predict,
    compute_returns,
    fit_ar,
    load_prices,
    majority_vote,
    save_prices,
    trend_labels,
)
from cryptosent.neural import (
    ForwardTrace,
    GradCheckReport,
    ModelDims,
    SentimentModel,
    backward,
    forward,
    grad_check,
    init_model,
    load_model,
    loss,
    save_model,
    sgd_step,
)
from cryptosent.pipeline import ar_day_forecasts, predict_day_trends, run_evaluation
from cryptosent.sentiment import (
    Prediction,
    TrainConfig,
    TrainHistory,
    predict_post,
    train,
)
from cryptosent.synthkit import SynthConfig, synth_corpus, synth_market

__version__ = "0.1.0"
