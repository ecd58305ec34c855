"""Stroke-sequence classifier runtime: conv stack -> BiLSTM stack -> dense.

This is an inference-only runtime over a binary weights container; no
training code lives here.  Input is the delta encoding of a doodle
((dx, dy, pen_lift) per step); output is a 23-way confidence distribution.

Weights container layout (magic ``PSDW1``):

    5 bytes   magic
    u32 LE    header length
    JSON      {"version", "categories", "layers": [...]}
    payload   row-major float32 blocks, in layer order
              conv1d: weight (out, in, k), bias (out,)
              bilstm: wf, rf, bf, wb, rb, bb   (gate order i, f, g, o)
              dense:  weight (out, in), bias (out,)
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .categories import CATEGORIES
from .errors import InvalidInputError, ModelFormatError

MAGIC = b"PSDW1"
FORMAT_VERSION = 1

DEFAULT_CONV_CHANNELS = (48, 64, 96)
DEFAULT_CONV_KERNELS = (5, 5, 3)
DEFAULT_LSTM_LAYERS = 3
DEFAULT_LSTM_HIDDEN = 128
INPUT_DIM = 3


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign to avoid overflow in exp.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ModelFormatError(message)


@dataclass
class Conv1D:
    """Temporal convolution with same padding, optional ReLU."""

    weight: np.ndarray  # (out, in, k)
    bias: np.ndarray  # (out,)
    relu: bool = True

    def __post_init__(self):
        _require(self.weight.ndim == 3, "conv weight must be (out, in, kernel)")
        _require(self.bias.shape == (self.weight.shape[0],), "conv bias length mismatch")

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]

    def forward(self, x: np.ndarray) -> np.ndarray:
        t = x.shape[0]
        k = self.weight.shape[2]
        lo, hi = (k - 1) // 2, k // 2
        xp = np.zeros((t + lo + hi, x.shape[1]))
        xp[lo : lo + t] = x
        windows = np.lib.stride_tricks.sliding_window_view(xp, k, axis=0)  # (t, in, k)
        out = np.einsum("tik,oik->to", windows, self.weight) + self.bias
        return np.maximum(out, 0.0) if self.relu else out


@dataclass
class BiLSTM:
    """Bidirectional LSTM; each direction has input, recurrent, and bias
    parameters stacked over the four gates in (i, f, g, o) order."""

    wf: np.ndarray  # (4H, in)
    rf: np.ndarray  # (4H, H)
    bf: np.ndarray  # (4H,)
    wb: np.ndarray
    rb: np.ndarray
    bb: np.ndarray

    def __post_init__(self):
        h = self.hidden
        for name in ("wf", "wb"):
            _require(getattr(self, name).shape == (4 * h, self.in_dim), f"bilstm {name} shape mismatch")
        for name in ("rf", "rb"):
            _require(getattr(self, name).shape == (4 * h, h), f"bilstm {name} shape mismatch")
        for name in ("bf", "bb"):
            _require(getattr(self, name).shape == (4 * h,), f"bilstm {name} shape mismatch")
        _require(self.rf.shape[0] % 4 == 0, "bilstm gate rows must be divisible by 4")

    @property
    def hidden(self) -> int:
        return self.rf.shape[1]

    @property
    def in_dim(self) -> int:
        return self.wf.shape[1]

    @property
    def out_dim(self) -> int:
        return 2 * self.hidden

    @staticmethod
    def _run(x: np.ndarray, w: np.ndarray, r: np.ndarray, b: np.ndarray) -> np.ndarray:
        h_dim = r.shape[1]
        t = x.shape[0]
        pre = x @ w.T + b  # (t, 4H): input contributions, hoisted out of the loop
        h = np.zeros(h_dim)
        c = np.zeros(h_dim)
        out = np.empty((t, h_dim))
        for step in range(t):
            z = pre[step] + r @ h
            i = _sigmoid(z[:h_dim])
            f = _sigmoid(z[h_dim : 2 * h_dim])
            g = np.tanh(z[2 * h_dim : 3 * h_dim])
            o = _sigmoid(z[3 * h_dim :])
            c = f * c + i * g
            h = o * np.tanh(c)
            out[step] = h
        return out

    def forward(self, x: np.ndarray) -> np.ndarray:
        fwd = self._run(x, self.wf, self.rf, self.bf)
        bwd = self._run(x[::-1], self.wb, self.rb, self.bb)[::-1]
        return np.concatenate([fwd, bwd], axis=1)


@dataclass
class Dense:
    weight: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)

    def __post_init__(self):
        _require(self.weight.ndim == 2, "dense weight must be (out, in)")
        _require(self.bias.shape == (self.weight.shape[0],), "dense bias length mismatch")

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.weight @ x + self.bias


Layer = Conv1D | BiLSTM | Dense


@dataclass
class StrokeModel:
    """An ordered layer stack plus the category names aligned to the logits."""

    categories: tuple[str, ...]
    layers: list[Layer]

    def __post_init__(self):
        _require(len(self.layers) > 0, "model must have at least one layer")
        _require(isinstance(self.layers[-1], Dense), "final layer must be dense")
        _require(
            self.layers[-1].out_dim == len(self.categories),
            "dense output size must match category count",
        )
        dim = self.layers[0].in_dim
        for layer in self.layers:
            _require(layer.in_dim == dim, "layer input size does not match previous output")
            dim = layer.out_dim

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    def forward(self, steps: np.ndarray) -> np.ndarray:
        """Logits for one delta-encoded sequence (t, in_dim)."""
        x = np.asarray(steps, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] != self.in_dim:
            raise InvalidInputError(f"model expects (t, {self.in_dim}) input, got {x.shape}")
        for layer in self.layers:
            if isinstance(layer, Dense) and x.ndim == 2:
                x = x.mean(axis=0)  # mean pool over time before the head
            x = layer.forward(x)
        return x

    def predict(self, steps: np.ndarray) -> np.ndarray:
        """Softmax distribution over ``self.categories``."""
        logits = self.forward(steps)
        z = logits - logits.max()
        e = np.exp(z)
        return e / e.sum()


def _layer_header(layer: Layer) -> dict:
    if isinstance(layer, Conv1D):
        return {
            "type": "conv1d",
            "in": layer.in_dim,
            "out": layer.out_dim,
            "kernel": int(layer.weight.shape[2]),
            "relu": bool(layer.relu),
        }
    if isinstance(layer, BiLSTM):
        return {"type": "bilstm", "in": layer.in_dim, "hidden": layer.hidden}
    return {"type": "dense", "in": layer.in_dim, "out": layer.out_dim}


def _layer_arrays(layer: Layer) -> list[np.ndarray]:
    if isinstance(layer, Conv1D):
        return [layer.weight, layer.bias]
    if isinstance(layer, BiLSTM):
        return [layer.wf, layer.rf, layer.bf, layer.wb, layer.rb, layer.bb]
    return [layer.weight, layer.bias]


def _layer_shapes(spec: dict) -> list[tuple[int, ...]]:
    kind = spec.get("type")
    if kind == "conv1d":
        o, i, k = spec["out"], spec["in"], spec["kernel"]
        return [(o, i, k), (o,)]
    if kind == "bilstm":
        i, h = spec["in"], spec["hidden"]
        return [(4 * h, i), (4 * h, h), (4 * h,), (4 * h, i), (4 * h, h), (4 * h,)]
    if kind == "dense":
        return [(spec["out"], spec["in"]), (spec["out"],)]
    raise ModelFormatError(f"unknown layer type: {kind!r}")


def save_model(model: StrokeModel, path) -> None:
    header = {
        "version": FORMAT_VERSION,
        "categories": list(model.categories),
        "layers": [_layer_header(layer) for layer in model.layers],
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    chunks = [MAGIC, struct.pack("<I", len(blob)), blob]
    for layer in model.layers:
        for arr in _layer_arrays(layer):
            chunks.append(np.ascontiguousarray(arr, dtype=np.float32).tobytes())
    Path(path).write_bytes(b"".join(chunks))


def load_model(path) -> StrokeModel:
    raw = Path(path).read_bytes()
    if raw[:5] != MAGIC:
        raise ModelFormatError("not a weights container (bad magic)")
    if len(raw) < 9:
        raise ModelFormatError("truncated weights container")
    (hlen,) = struct.unpack("<I", raw[5:9])
    if len(raw) < 9 + hlen:
        raise ModelFormatError("truncated weights header")
    try:
        header = json.loads(raw[9 : 9 + hlen])
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"bad weights header: {exc}") from exc
    if header.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"weights version {header.get('version')!r}, expected {FORMAT_VERSION}")
    categories = tuple(header.get("categories", ()))
    specs = header.get("layers")
    if not isinstance(specs, list) or not specs:
        raise ModelFormatError("weights header lists no layers")
    shapes = [_layer_shapes(spec) for spec in specs]
    need = sum(4 * int(np.prod(s)) for group in shapes for s in group)
    payload = raw[9 + hlen :]
    if len(payload) != need:
        raise ModelFormatError(f"weights payload is {len(payload)} bytes, expected {need}")
    offset = 0
    layers: list[Layer] = []
    for spec, group in zip(specs, shapes):
        arrays = []
        for shape in group:
            size = 4 * int(np.prod(shape))
            arr = np.frombuffer(payload, dtype="<f4", count=int(np.prod(shape)), offset=offset)
            arrays.append(arr.reshape(shape).copy())
            offset += size
        if spec["type"] == "conv1d":
            layers.append(Conv1D(arrays[0], arrays[1], relu=bool(spec.get("relu", True))))
        elif spec["type"] == "bilstm":
            layers.append(BiLSTM(*arrays))
        else:
            layers.append(Dense(arrays[0], arrays[1]))
    return StrokeModel(categories=categories, layers=layers)


def new_default_model(seed: int | None = None, zero: bool = False) -> StrokeModel:
    """The stock architecture: 3 convolutions, 3 BiLSTM layers, dense head.

    ``zero=True`` gives all-zero weights (useful as a null baseline: every
    input then scores a uniform distribution).
    """
    rng = np.random.default_rng(seed)

    def init(*shape: int) -> np.ndarray:
        if zero:
            return np.zeros(shape, dtype=np.float32)
        fan_in = int(np.prod(shape[1:])) if len(shape) > 1 else shape[0]
        bound = 1.0 / np.sqrt(max(fan_in, 1))
        return rng.uniform(-bound, bound, shape).astype(np.float32)

    layers: list[Layer] = []
    dim = INPUT_DIM
    for out, k in zip(DEFAULT_CONV_CHANNELS, DEFAULT_CONV_KERNELS):
        layers.append(Conv1D(init(out, dim, k), init(out), relu=True))
        dim = out
    for _ in range(DEFAULT_LSTM_LAYERS):
        h = DEFAULT_LSTM_HIDDEN
        layers.append(
            BiLSTM(
                init(4 * h, dim), init(4 * h, h), init(4 * h),
                init(4 * h, dim), init(4 * h, h), init(4 * h),
            )
        )
        dim = 2 * h
    layers.append(Dense(init(len(CATEGORIES), dim), init(len(CATEGORIES))))
    return StrokeModel(categories=CATEGORIES, layers=layers)


def as_recognizer(model: StrokeModel):
    """Adapt a model to the live-recognizer interface (Sketch -> top-3)."""
    from .classify import prediction_from_confidences
    from .strokes import delta_encode, normalize, resample

    if tuple(model.categories) != CATEGORIES:
        raise ModelFormatError("model category list does not match the recognizer vocabulary")

    def recognize(sketch):
        steps = delta_encode(resample(normalize(sketch)))
        return prediction_from_confidences(model.predict(steps))

    return recognize
