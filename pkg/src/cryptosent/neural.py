"""From-scratch LSTM classifier core.

Parameters, forward recurrence, summed binary cross-entropy loss over three
one-vs-rest sigmoid outputs, exact gradients via backpropagation through
time, a norm-clipped SGD step, and a central finite-difference gradient
checker.  All arithmetic is float64; forward, backward, and the step are
bit-reproducible for identical inputs.

Recurrence, per step t over the true token length (h_0 = c_0 = 0):

    f_t = sigmoid(W_f e_t + U_f h_{t-1} + b_f)      forget gate
    i_t = sigmoid(W_i e_t + U_i h_{t-1} + b_i)      input gate
    o_t = sigmoid(W_o e_t + U_o h_{t-1} + b_o)      output gate
    g_t = tanh   (W_c e_t + U_c h_{t-1} + b_c)      candidate cell
    c_t = f_t * c_{t-1} + i_t * g_t
    h_t = o_t * tanh(c_t)

Scores are sigmoid(W_y h_L + b_y), one independent unit per class.

Checkpoint format (text, documented for round-trip tests): header lines
``#checkpoint v1``, ``model_format_version: 1``, seed and dimensions, then
one ``param: <name> <shape>`` line per array followed by its rows as
space-separated decimal floats.  Decimal ``repr`` output is used because it
round-trips float64 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from cryptosent.corpus import SentimentLabel
from cryptosent.encoder import EncodedPost
from cryptosent.errors import DataError, NumericError

GATES = ("f", "i", "o", "c")
PARAM_NAMES = (
    "E",
    "W_f", "U_f", "b_f",
    "W_i", "U_i", "b_i",
    "W_o", "U_o", "b_o",
    "W_c", "U_c", "b_c",
    "W_y", "b_y",
)
SCORE_EPS = 1e-12
CHECKPOINT_HEADER = "#checkpoint v1"
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelDims:
    vocab: int
    embed: int
    hidden: int
    classes: int = 3

    def __post_init__(self) -> None:
        if self.vocab < 3:
            raise ValueError(f"vocab must be >= 3 (2 reserved indices), got {self.vocab}")
        if self.embed < 1:
            raise ValueError(f"embed must be >= 1, got {self.embed}")
        if self.hidden < 1:
            raise ValueError(f"hidden must be >= 1, got {self.hidden}")
        if self.classes != 3:
            raise ValueError(f"classes must be 3, got {self.classes}")


def _expected_shapes(dims: ModelDims) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {"E": (dims.vocab, dims.embed)}
    for g in GATES:
        shapes[f"W_{g}"] = (dims.hidden, dims.embed)
        shapes[f"U_{g}"] = (dims.hidden, dims.hidden)
        shapes[f"b_{g}"] = (dims.hidden,)
    shapes["W_y"] = (dims.classes, dims.hidden)
    shapes["b_y"] = (dims.classes,)
    return {name: shapes[name] for name in PARAM_NAMES}


@dataclass
class SentimentModel:
    """All trainable parameters.  Treated as immutable: training produces new
    models via :func:`sgd_step` rather than updating in place."""

    dims: ModelDims
    seed: int
    E: np.ndarray
    W_f: np.ndarray
    U_f: np.ndarray
    b_f: np.ndarray
    W_i: np.ndarray
    U_i: np.ndarray
    b_i: np.ndarray
    W_o: np.ndarray
    U_o: np.ndarray
    b_o: np.ndarray
    W_c: np.ndarray
    U_c: np.ndarray
    b_c: np.ndarray
    W_y: np.ndarray
    b_y: np.ndarray

    def __post_init__(self) -> None:
        for name, shape in _expected_shapes(self.dims).items():
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ValueError(f"{name}: expected shape {shape}, got {arr.shape}")
            if arr.dtype != np.float64:
                raise ValueError(f"{name}: expected float64, got {arr.dtype}")
            if not np.isfinite(arr).all():
                raise NumericError(f"{name} contains non-finite values")

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> SentimentModel:
        return SentimentModel(
            dims=self.dims,
            seed=self.seed,
            **{name: getattr(self, name).copy() for name in PARAM_NAMES},
        )


@dataclass(frozen=True)
class ForwardTrace:
    """Per-step activations kept for backpropagation.

    Arrays are stacked over the true length L: gates and states are (L, H),
    embeddings (L, D).  Scores are the three sigmoid outputs.
    """

    indices: tuple[int, ...]
    e: np.ndarray
    f: np.ndarray
    i: np.ndarray
    o: np.ndarray
    g: np.ndarray
    c: np.ndarray
    h: np.ndarray
    scores: np.ndarray


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def init_model(dims: ModelDims, seed: int) -> SentimentModel:
    """Seeded uniform init in [-1/sqrt(H), 1/sqrt(H)] for all weight matrices
    (embedding included, drawn in PARAM_NAMES order).  Biases start at zero
    except the forget gate's, which starts at 1 so early cell state flows;
    the PAD embedding row is zeroed."""
    rng = np.random.default_rng(seed)
    bound = 1.0 / math.sqrt(dims.hidden)
    arrays: dict[str, np.ndarray] = {}
    for name, shape in _expected_shapes(dims).items():
        if name.startswith("b_"):
            arrays[name] = np.zeros(shape)
        else:
            arrays[name] = rng.uniform(-bound, bound, size=shape)
    arrays["b_f"] = np.ones(dims.hidden)
    arrays["E"][0, :] = 0.0
    return SentimentModel(dims=dims, seed=seed, **arrays)


def forward(model: SentimentModel, x: EncodedPost) -> ForwardTrace:
    """Run the recurrence over the true length of ``x`` and score the final
    hidden state.  PAD positions beyond ``x.length`` are never touched."""
    length = x.length
    if length < 1:
        raise DataError("cannot run forward on a zero-length input")
    idx = x.indices[:length]
    vocab = model.dims.vocab
    for k in idx:
        if not 0 <= k < vocab:
            raise DataError(f"token index {k} out of range for vocab {vocab}")

    hidden = model.dims.hidden
    e = model.E[list(idx)]
    f = np.empty((length, hidden))
    i = np.empty((length, hidden))
    o = np.empty((length, hidden))
    g = np.empty((length, hidden))
    c = np.empty((length, hidden))
    h = np.empty((length, hidden))
    h_prev = np.zeros(hidden)
    c_prev = np.zeros(hidden)
    for t in range(length):
        e_t = e[t]
        f[t] = _sigmoid(model.W_f @ e_t + model.U_f @ h_prev + model.b_f)
        i[t] = _sigmoid(model.W_i @ e_t + model.U_i @ h_prev + model.b_i)
        o[t] = _sigmoid(model.W_o @ e_t + model.U_o @ h_prev + model.b_o)
        g[t] = np.tanh(model.W_c @ e_t + model.U_c @ h_prev + model.b_c)
        c[t] = f[t] * c_prev + i[t] * g[t]
        h[t] = o[t] * np.tanh(c[t])
        h_prev = h[t]
        c_prev = c[t]
    scores = _sigmoid(model.W_y @ h[-1] + model.b_y)
    return ForwardTrace(indices=idx, e=e, f=f, i=i, o=o, g=g, c=c, h=h, scores=scores)


def one_hot(label: SentimentLabel) -> np.ndarray:
    target = np.zeros(3)
    target[label.class_index] = 1.0
    return target


def loss(scores: np.ndarray, label: SentimentLabel) -> float:
    """Summed binary cross-entropy of the three sigmoid scores against the
    one-hot target.  Scores are clamped to [1e-12, 1 - 1e-12] so exact 0/1
    never produce infinities."""
    s = np.clip(np.asarray(scores, dtype=np.float64), SCORE_EPS, 1.0 - SCORE_EPS)
    y = one_hot(label)
    return float(-(y * np.log(s) + (1.0 - y) * np.log(1.0 - s)).sum())


def backward(
    model: SentimentModel,
    batch: list[tuple[EncodedPost, SentimentLabel]],
) -> dict[str, np.ndarray]:
    """Exact gradient of the mean batch loss for every parameter, by
    backpropagation through time over each example's true length.  The PAD
    embedding row's gradient is forced to zero."""
    if not batch:
        raise DataError("empty batch")
    grads = {name: np.zeros_like(arr) for name, arr in model.params().items()}
    for x, label in batch:
        trace = forward(model, x)
        _accumulate(model, trace, label, grads)
    inv = 1.0 / len(batch)
    for arr in grads.values():
        arr *= inv
    grads["E"][0, :] = 0.0
    return grads


def _accumulate(
    model: SentimentModel,
    trace: ForwardTrace,
    label: SentimentLabel,
    grads: dict[str, np.ndarray],
) -> None:
    length = len(trace.indices)
    hidden = model.dims.hidden

    # Sigmoid + BCE collapse: d(loss)/d(logit) = score - target.
    dz = trace.scores - one_hot(label)
    grads["W_y"] += np.outer(dz, trace.h[length - 1])
    grads["b_y"] += dz

    dh = model.W_y.T @ dz
    dc = np.zeros(hidden)
    zeros = np.zeros(hidden)
    for t in range(length - 1, -1, -1):
        h_prev = trace.h[t - 1] if t > 0 else zeros
        c_prev = trace.c[t - 1] if t > 0 else zeros
        f_t, i_t, o_t, g_t = trace.f[t], trace.i[t], trace.o[t], trace.g[t]
        tanh_c = np.tanh(trace.c[t])

        do = dh * tanh_c
        dc = dc + dh * o_t * (1.0 - tanh_c * tanh_c)
        df = dc * c_prev
        di = dc * g_t
        dg = dc * i_t

        da_f = df * f_t * (1.0 - f_t)
        da_i = di * i_t * (1.0 - i_t)
        da_o = do * o_t * (1.0 - o_t)
        da_c = dg * (1.0 - g_t * g_t)

        e_t = trace.e[t]
        for gate, da in (("f", da_f), ("i", da_i), ("o", da_o), ("c", da_c)):
            grads[f"W_{gate}"] += np.outer(da, e_t)
            grads[f"U_{gate}"] += np.outer(da, h_prev)
            grads[f"b_{gate}"] += da

        de = (
            model.W_f.T @ da_f
            + model.W_i.T @ da_i
            + model.W_o.T @ da_o
            + model.W_c.T @ da_c
        )
        grads["E"][trace.indices[t]] += de
        dh = (
            model.U_f.T @ da_f
            + model.U_i.T @ da_i
            + model.U_o.T @ da_o
            + model.U_c.T @ da_c
        )
        dc = dc * f_t


def gradient_norm(grads: dict[str, np.ndarray]) -> float:
    """Global L2 norm across every gradient array."""
    total = 0.0
    for name in PARAM_NAMES:
        g = grads[name]
        total += float((g * g).sum())
    return math.sqrt(total)


def sgd_step(
    model: SentimentModel,
    grads: dict[str, np.ndarray],
    lr: float,
    clip: float,
) -> SentimentModel:
    """One descent step: if the global gradient norm exceeds ``clip``, all
    gradients are rescaled by clip/norm first.  Returns a new model."""
    if lr < 0:
        raise ValueError(f"lr must be >= 0, got {lr}")
    if clip <= 0:
        raise ValueError(f"clip must be > 0, got {clip}")
    for name in PARAM_NAMES:
        if not np.isfinite(grads[name]).all():
            raise NumericError(f"non-finite gradient in {name}; step rejected")
    norm = gradient_norm(grads)
    scale = clip / norm if norm > clip else 1.0
    step = lr * scale
    new_params = {
        name: getattr(model, name) - step * grads[name] for name in PARAM_NAMES
    }
    return SentimentModel(dims=model.dims, seed=model.seed, **new_params)


@dataclass(frozen=True)
class GradCheckReport:
    passed: bool
    max_rel_err: float
    worst_param: str
    n_checked: int
    eps: float
    tol: float


def grad_check(
    model: SentimentModel,
    example: tuple[EncodedPost, SentimentLabel],
    eps: float = 1e-5,
    tol: float = 1e-4,
    grads: dict[str, np.ndarray] | None = None,
    max_coords: int = 2000,
    seed: int = 0,
) -> GradCheckReport:
    """Compare analytic gradients to central finite differences.

    Every coordinate is checked unless the model has more than ``max_coords``
    parameters, in which case a seeded random subsample of ``max_coords``
    coordinates (>= 500) is used.  Relative error for a pair (a, n) is
    |a - n| / max(|a|, |n|, 1e-8); the check passes when the worst error is
    below ``tol``.  ``grads`` defaults to ``backward`` on the example.
    """
    if eps <= 0 or tol <= 0:
        raise ValueError("eps and tol must be positive")
    if max_coords < 500:
        raise ValueError("max_coords must be >= 500")
    x, label = example
    if grads is None:
        grads = backward(model, [(x, label)])

    coords: list[tuple[str, int]] = []
    for name in PARAM_NAMES:
        coords.extend((name, k) for k in range(getattr(model, name).size))
    if len(coords) > max_coords:
        rng = np.random.default_rng(seed)
        chosen = rng.choice(len(coords), size=max_coords, replace=False)
        coords = [coords[int(k)] for k in sorted(chosen)]

    scratch = model.copy()
    worst_err = 0.0
    worst_param = ""
    for name, flat in coords:
        arr = getattr(scratch, name)
        original = arr.flat[flat]
        arr.flat[flat] = original + eps
        loss_plus = loss(forward(scratch, x).scores, label)
        arr.flat[flat] = original - eps
        loss_minus = loss(forward(scratch, x).scores, label)
        arr.flat[flat] = original
        numeric = (loss_plus - loss_minus) / (2.0 * eps)
        analytic = grads[name].flat[flat]
        rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
        if rel > worst_err:
            worst_err = rel
            multi = np.unravel_index(flat, getattr(model, name).shape)
            worst_param = f"{name}[{','.join(str(k) for k in multi)}]"
    return GradCheckReport(
        passed=worst_err < tol,
        max_rel_err=worst_err,
        worst_param=worst_param,
        n_checked=len(coords),
        eps=eps,
        tol=tol,
    )


def save_model(model: SentimentModel, path: str | Path) -> None:
    """Write the text checkpoint; decimal reprs round-trip float64 exactly."""
    dims = model.dims
    lines = [
        CHECKPOINT_HEADER,
        f"model_format_version: {MODEL_FORMAT_VERSION}",
        f"seed: {model.seed}",
        f"vocab: {dims.vocab}",
        f"embed: {dims.embed}",
        f"hidden: {dims.hidden}",
        f"classes: {dims.classes}",
    ]
    for name in PARAM_NAMES:
        arr = getattr(model, name)
        shape_s = " ".join(str(d) for d in arr.shape)
        lines.append(f"param: {name} {shape_s}")
        for row in np.atleast_2d(arr):
            lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _expect(lines: list[str], lineno: int, key: str) -> str:
    if lineno >= len(lines) or not lines[lineno].startswith(key + ": "):
        raise DataError(f"checkpoint line {lineno + 1}: expected {key!r} field")
    return lines[lineno][len(key) + 2 :]


def load_model(path: str | Path) -> SentimentModel:
    path = Path(path)
    try:
        lines = path.read_bytes().decode("utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read checkpoint {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8: {exc}") from None
    if not lines or lines[0] != CHECKPOINT_HEADER:
        raise DataError(f"{path}: missing header {CHECKPOINT_HEADER!r}")
    version = _expect(lines, 1, "model_format_version")
    if version != str(MODEL_FORMAT_VERSION):
        raise DataError(f"{path}: unsupported model format version {version!r}")
    try:
        seed = int(_expect(lines, 2, "seed"))
        dims = ModelDims(
            vocab=int(_expect(lines, 3, "vocab")),
            embed=int(_expect(lines, 4, "embed")),
            hidden=int(_expect(lines, 5, "hidden")),
            classes=int(_expect(lines, 6, "classes")),
        )
    except ValueError as exc:
        raise DataError(f"{path}: bad header field: {exc}") from None

    arrays: dict[str, np.ndarray] = {}
    lineno = 7
    for name in PARAM_NAMES:
        marker = f"param: {name}"
        if lineno >= len(lines) or not lines[lineno].startswith(marker + " "):
            raise DataError(f"{path}:{lineno + 1}: expected {marker!r}")
        shape = tuple(int(s) for s in lines[lineno][len(marker) + 1 :].split())
        lineno += 1
        n_rows = shape[0] if len(shape) > 1 else 1
        rows = []
        for _ in range(n_rows):
            if lineno >= len(lines):
                raise DataError(f"{path}: truncated parameter {name}")
            rows.append([float(v) for v in lines[lineno].split()])
            lineno += 1
        arrays[name] = np.array(rows, dtype=np.float64).reshape(shape)
    return SentimentModel(dims=dims, seed=seed, **arrays)
