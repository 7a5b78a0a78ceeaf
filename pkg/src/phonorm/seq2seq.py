"""Character-level encoder-decoder for first-degree normalization.

A stacked LSTM encoder reads the (pre-normalized) noisy word one character at
a time; the final hidden and cell states of each encoder layer seed the
matching decoder layer, which then emits the normalized form character by
character under teacher forcing during training and greedy argmax decoding at
inference time.

Everything is plain numpy in double precision with hand-derived gradients, so
training is deterministic for a fixed seed: identical inputs produce
bit-identical parameters, checkpoints and decoded strings.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .charcodec import (
    SOURCE,
    TARGET,
    Alphabet,
    build_alphabet,
    encode,
    to_one_hot,
)
from .lexicon import ParallelLexicon
from .prenorm import prenormalize

CHECKPOINT_MAGIC = b"phonorm-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    """Raised when a checkpoint file cannot be read back."""


# ---------------------------------------------------------------------------
# parameters


@dataclass(eq=False)
class LstmLayerParams:
    """One LSTM layer: gates stacked along the last axis as [i, f, g, o]."""

    w_x: np.ndarray  # (input_dim, 4 * hidden_dim)
    w_h: np.ndarray  # (hidden_dim, 4 * hidden_dim)
    b: np.ndarray  # (4 * hidden_dim,)

    @property
    def hidden_dim(self) -> int:
        return self.w_h.shape[0]

    @property
    def input_dim(self) -> int:
        return self.w_x.shape[0]


@dataclass(eq=False)
class ModelParams:
    """All trainable tensors plus the codec state needed to run the model."""

    source_alphabet: Alphabet
    target_alphabet: Alphabet
    max_len: int
    hidden_dim: int
    num_layers: int
    encoder: tuple[LstmLayerParams, ...]
    decoder: tuple[LstmLayerParams, ...]
    w_out: np.ndarray  # (hidden_dim, target_size)
    b_out: np.ndarray  # (target_size,)

    def named_tensors(self) -> dict[str, np.ndarray]:
        """Live views of every trainable array, in a fixed canonical order."""
        out: dict[str, np.ndarray] = {}
        for tag, layers in (("enc", self.encoder), ("dec", self.decoder)):
            for index, layer in enumerate(layers):
                out[f"{tag}{index}.w_x"] = layer.w_x
                out[f"{tag}{index}.w_h"] = layer.w_h
                out[f"{tag}{index}.b"] = layer.b
        out["out.w"] = self.w_out
        out["out.b"] = self.b_out
        return out


def _expected_shapes(
    source_size: int, target_size: int, hidden_dim: int, num_layers: int
) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {}
    for tag, in_dim in (("enc", source_size), ("dec", target_size)):
        for index in range(num_layers):
            first = in_dim if index == 0 else hidden_dim
            shapes[f"{tag}{index}.w_x"] = (first, 4 * hidden_dim)
            shapes[f"{tag}{index}.w_h"] = (hidden_dim, 4 * hidden_dim)
            shapes[f"{tag}{index}.b"] = (4 * hidden_dim,)
    shapes["out.w"] = (hidden_dim, target_size)
    shapes["out.b"] = (target_size,)
    return shapes


def init_model_params(
    source_alphabet: Alphabet,
    target_alphabet: Alphabet,
    max_len: int,
    hidden_dim: int,
    num_layers: int,
    rng: np.random.Generator,
    init_scale: float = 0.08,
) -> ModelParams:
    """Draw every tensor uniformly from [-init_scale, init_scale]."""
    if num_layers < 1:
        raise ValueError("need at least one layer")
    if max_len < 1:
        raise ValueError("max_len must be positive")
    shapes = _expected_shapes(source_alphabet.size, target_alphabet.size, hidden_dim, num_layers)
    tensors = {name: rng.uniform(-init_scale, init_scale, size=shape) for name, shape in shapes.items()}

    def layer(tag: str, index: int) -> LstmLayerParams:
        return LstmLayerParams(
            w_x=tensors[f"{tag}{index}.w_x"],
            w_h=tensors[f"{tag}{index}.w_h"],
            b=tensors[f"{tag}{index}.b"],
        )

    return ModelParams(
        source_alphabet=source_alphabet,
        target_alphabet=target_alphabet,
        max_len=max_len,
        hidden_dim=hidden_dim,
        num_layers=num_layers,
        encoder=tuple(layer("enc", i) for i in range(num_layers)),
        decoder=tuple(layer("dec", i) for i in range(num_layers)),
        w_out=tensors["out.w"],
        b_out=tensors["out.b"],
    )


# ---------------------------------------------------------------------------
# forward primitives


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def lstm_step(
    x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray, params: LstmLayerParams
) -> tuple[np.ndarray, np.ndarray, tuple]:
    """Advance one time step for a batch: returns (h, c, cache)."""
    hdim = params.hidden_dim
    z = x @ params.w_x + h_prev @ params.w_h + params.b
    i = _sigmoid(z[:, :hdim])
    f = _sigmoid(z[:, hdim : 2 * hdim])
    g = np.tanh(z[:, 2 * hdim : 3 * hdim])
    o = _sigmoid(z[:, 3 * hdim :])
    c = f * c_prev + i * g
    tc = np.tanh(c)
    h = o * tc
    return h, c, (x, h_prev, c_prev, i, f, g, o, tc)


def _lstm_layer_forward(
    x_seq: np.ndarray, params: LstmLayerParams, h0: np.ndarray, c0: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list]:
    batch, steps, _ = x_seq.shape
    h_seq = np.empty((batch, steps, params.hidden_dim))
    h, c = h0, c0
    caches = []
    for t in range(steps):
        h, c, cache = lstm_step(x_seq[:, t, :], h, c, params)
        h_seq[:, t, :] = h
        caches.append(cache)
    return h_seq, h, c, caches


def _lstm_layer_backward(
    caches: list,
    d_h_seq: np.ndarray,
    d_h_final: np.ndarray,
    d_c_final: np.ndarray,
    params: LstmLayerParams,
) -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], np.ndarray, np.ndarray, np.ndarray]:
    """Back-propagate one layer across time.

    d_h_seq carries the gradient flowing into every per-step output h_t from
    whatever consumed it (the layer above or the output projection);
    d_h_final / d_c_final carry extra gradient on the last states (used when
    they seeded a decoder layer). Returns the parameter gradients, the
    gradient w.r.t. the input sequence and the gradients w.r.t. the initial
    states.
    """
    batch, steps, _ = d_h_seq.shape
    dw_x = np.zeros_like(params.w_x)
    dw_h = np.zeros_like(params.w_h)
    db = np.zeros_like(params.b)
    d_x_seq = np.empty((batch, steps, params.input_dim))
    dh_next = d_h_final.copy()
    dc_next = d_c_final.copy()
    for t in reversed(range(steps)):
        x, h_prev, c_prev, i, f, g, o, tc = caches[t]
        dh = d_h_seq[:, t, :] + dh_next
        do = dh * tc
        dct = dc_next + dh * o * (1.0 - tc * tc)
        di = dct * g
        dg = dct * i
        df = dct * c_prev
        dc_next = dct * f
        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        dw_x += x.T @ dz
        dw_h += h_prev.T @ dz
        db += dz.sum(axis=0)
        d_x_seq[:, t, :] = dz @ params.w_x.T
        dh_next = dz @ params.w_h.T
    return (dw_x, dw_h, db), d_x_seq, dh_next, dc_next


def encode_sequence(
    src_one_hot: np.ndarray, params: ModelParams
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Run the encoder over a one-hot batch; returns per-layer final (h, c)."""
    batch = src_one_hot.shape[0]
    states = []
    x = src_one_hot
    for layer in params.encoder:
        h0 = np.zeros((batch, params.hidden_dim))
        c0 = np.zeros((batch, params.hidden_dim))
        x, h, c, _ = _lstm_layer_forward(x, layer, h0, c0)
        states.append((h, c))
    return states


def decode_step(
    x: np.ndarray, states: Sequence[tuple[np.ndarray, np.ndarray]], params: ModelParams
) -> tuple[np.ndarray, list[tuple[np.ndarray, np.ndarray]]]:
    """Advance the decoder one character.

    x is the one-hot of the previously emitted symbol, shape
    (batch, target_size); states holds (h, c) per layer. Returns the softmax
    distribution over the next symbol and the advanced states.
    """
    new_states = []
    inp = x
    for layer, (h, c) in zip(params.decoder, states):
        h, c, _ = lstm_step(inp, h, c, layer)
        new_states.append((h, c))
        inp = h
    probs = _softmax(inp @ params.w_out + params.b_out)
    return probs, new_states


# ---------------------------------------------------------------------------
# batches, loss and gradients


@dataclass(eq=False)
class Batch:
    """Teacher-forcing views of a group of (source, target) pairs.

    dec_in is dec_tgt shifted right by one (start marker first); mask is True
    exactly on the real target symbols (characters plus the end marker), so
    padded positions contribute nothing to loss or gradients.
    """

    src: np.ndarray  # (batch, max_len, source_size) one-hot
    dec_in: np.ndarray  # (batch, max_len + 1, target_size) one-hot
    dec_tgt: np.ndarray  # (batch, max_len + 1) int indices
    mask: np.ndarray  # (batch, max_len + 1) bool

    @property
    def size(self) -> int:
        return self.src.shape[0]


def prepare_batch(
    pairs: Sequence[tuple[str, str]],
    source_alphabet: Alphabet,
    target_alphabet: Alphabet,
    max_len: int,
) -> Batch:
    """Encode already pre-normalized (source, target) pairs for training."""
    if not pairs:
        raise ValueError("cannot build an empty batch")
    src_rows = []
    dec_in_rows = []
    dec_tgt_rows = []
    for source, target in pairs:
        src = encode(source, source_alphabet, max_len)
        tgt = encode(target, target_alphabet, max_len)
        src_rows.append(to_one_hot(src, source_alphabet))
        full = tgt.indices  # (start, chars..., end, pads...), length max_len + 2
        dec_in_rows.append(full[:-1])
        dec_tgt_rows.append(full[1:])
    dec_in_idx = np.stack(dec_in_rows)
    eye = np.eye(target_alphabet.size)
    dec_tgt = np.stack(dec_tgt_rows)
    return Batch(
        src=np.stack(src_rows),
        dec_in=eye[dec_in_idx],
        dec_tgt=dec_tgt,
        mask=dec_tgt != target_alphabet.pad_index,
    )


def _forward(params: ModelParams, batch: Batch):
    batch_size = batch.size
    zeros = lambda: np.zeros((batch_size, params.hidden_dim))  # noqa: E731
    enc_caches = []
    enc_finals = []
    x = batch.src
    for layer in params.encoder:
        x, h, c, caches = _lstm_layer_forward(x, layer, zeros(), zeros())
        enc_caches.append(caches)
        enc_finals.append((h, c))
    x = batch.dec_in
    dec_caches = []
    for layer, (h0, c0) in zip(params.decoder, enc_finals):
        x, _, _, caches = _lstm_layer_forward(x, layer, h0, c0)
        dec_caches.append(caches)
    top = x  # (batch, steps, hidden_dim)
    probs = _softmax(top @ params.w_out + params.b_out)
    return enc_caches, dec_caches, top, probs


@dataclass(eq=False)
class BatchMetrics:
    """Teacher-forced metrics over one batch (all masked-position based)."""

    loss: float
    token_correct: int
    token_total: int
    seq_correct: int
    seq_total: int


def _masked_metrics(probs: np.ndarray, batch: Batch) -> BatchMetrics:
    rows, cols = np.nonzero(batch.mask)
    picked = probs[rows, cols, batch.dec_tgt[rows, cols]]
    total = rows.size
    loss = float(-np.log(np.maximum(picked, 1e-300)).sum() / total)
    hit = probs.argmax(axis=2) == batch.dec_tgt
    correct = int(hit[rows, cols].sum())
    seq_correct = int((hit | ~batch.mask).all(axis=1).sum())
    return BatchMetrics(
        loss=loss,
        token_correct=correct,
        token_total=total,
        seq_correct=seq_correct,
        seq_total=batch.size,
    )


def batch_loss(params: ModelParams, batch: Batch) -> BatchMetrics:
    """Forward-only teacher-forced metrics for a batch."""
    _, _, _, probs = _forward(params, batch)
    return _masked_metrics(probs, batch)


@dataclass(eq=False)
class BatchResult:
    loss: float
    grads: dict[str, np.ndarray]
    metrics: BatchMetrics


def loss_and_gradients(params: ModelParams, batch: Batch) -> BatchResult:
    """Mean masked cross-entropy over the batch plus gradients for every tensor.

    The loss averages -log p(target symbol) over real (unmasked) target
    positions only; padded positions are excluded from both the loss and the
    gradient even though the network physically steps through them.
    """
    enc_caches, dec_caches, top, probs = _forward(params, batch)
    metrics = _masked_metrics(probs, batch)

    rows, cols = np.nonzero(batch.mask)
    dlogits = probs.copy()
    dlogits[rows, cols, batch.dec_tgt[rows, cols]] -= 1.0
    dlogits *= batch.mask[:, :, None] / metrics.token_total

    grads: dict[str, np.ndarray] = {
        "out.w": np.einsum("bth,btv->hv", top, dlogits),
        "out.b": dlogits.sum(axis=(0, 1)),
    }

    batch_size = batch.size
    zeros = lambda: np.zeros((batch_size, params.hidden_dim))  # noqa: E731

    d_above = dlogits @ params.w_out.T
    d_init: list[tuple[np.ndarray, np.ndarray]] = [None] * params.num_layers  # type: ignore[list-item]
    for index in reversed(range(params.num_layers)):
        (dw_x, dw_h, db), d_above, dh0, dc0 = _lstm_layer_backward(
            dec_caches[index], d_above, zeros(), zeros(), params.decoder[index]
        )
        grads[f"dec{index}.w_x"] = dw_x
        grads[f"dec{index}.w_h"] = dw_h
        grads[f"dec{index}.b"] = db
        d_init[index] = (dh0, dc0)

    steps = batch.src.shape[1]
    d_above = np.zeros((batch_size, steps, params.hidden_dim))
    for index in reversed(range(params.num_layers)):
        dh_fin, dc_fin = d_init[index]
        (dw_x, dw_h, db), d_above, _, _ = _lstm_layer_backward(
            enc_caches[index], d_above, dh_fin, dc_fin, params.encoder[index]
        )
        grads[f"enc{index}.w_x"] = dw_x
        grads[f"enc{index}.w_h"] = dw_h
        grads[f"enc{index}.b"] = db

    return BatchResult(loss=metrics.loss, grads=grads, metrics=metrics)


# ---------------------------------------------------------------------------
# training


@dataclass(frozen=True)
class TrainingConfig:
    hidden_dim: int = 128
    num_layers: int = 2
    batch_size: int = 64
    epochs: int = 100
    learning_rate: float = 0.001
    rho: float = 0.9
    epsilon: float = 1e-8
    init_scale: float = 0.08
    validation_fraction: float = 0.1
    rng_seed: int = 0


@dataclass(frozen=True)
class EpochRecord:
    """Teacher-forced metrics after one epoch.

    char accuracy counts argmax hits on real (non-pad) target positions;
    exact accuracy counts sequences with every real position correct.
    """

    epoch: int
    train_loss: float
    train_char_accuracy: float
    train_exact_accuracy: float
    val_loss: float | None
    val_char_accuracy: float | None
    val_exact_accuracy: float | None


_TRACE_COLUMNS = (
    "epoch",
    "train_loss",
    "train_char_accuracy",
    "train_exact_accuracy",
    "val_loss",
    "val_char_accuracy",
    "val_exact_accuracy",
)


@dataclass(frozen=True)
class TrainingTrace:
    records: tuple[EpochRecord, ...]

    @property
    def final(self) -> EpochRecord:
        return self.records[-1]

    def to_tsv(self) -> str:
        def fmt(value) -> str:
            return "" if value is None else repr(value)

        lines = ["\t".join(_TRACE_COLUMNS)]
        for rec in self.records:
            lines.append("\t".join(fmt(getattr(rec, col)) for col in _TRACE_COLUMNS))
        return "\n".join(lines) + "\n"


def _batches(count: int, batch_size: int) -> Iterable[tuple[int, int]]:
    for start in range(0, count, batch_size):
        yield start, min(start + batch_size, count)


def train(
    lexicon: ParallelLexicon,
    config: TrainingConfig = TrainingConfig(),
    on_epoch: Callable[[EpochRecord], None] | None = None,
) -> tuple[ModelParams, TrainingTrace]:
    """Fit the encoder-decoder on a parallel lexicon.

    Sources are pre-normalized before anything else, mirroring what the
    normalization pipeline feeds the model at inference time. Alphabets and
    the padded length are derived from the (pre-normalized) training data.
    Optimization is rmsprop on mini-batches; shuffling, the validation split
    and the initial weights all come from one seeded generator, so a given
    (lexicon, config) always yields the same model.
    """
    pairs = [(prenormalize(src), tgt) for src, tgt in lexicon.entries]
    if not pairs:
        raise ValueError("training lexicon is empty")
    for src, tgt in pairs:
        if not src or not tgt:
            raise ValueError("training pairs must be non-empty after pre-normalization")

    source_alphabet = build_alphabet((s for s, _ in pairs), SOURCE)
    target_alphabet = build_alphabet((t for _, t in pairs), TARGET)
    max_len = max(max(len(s), len(t)) for s, t in pairs)

    rng = np.random.default_rng(config.rng_seed)
    params = init_model_params(
        source_alphabet,
        target_alphabet,
        max_len,
        config.hidden_dim,
        config.num_layers,
        rng,
        config.init_scale,
    )

    perm = rng.permutation(len(pairs))
    n_val = int(round(len(pairs) * config.validation_fraction))
    if config.validation_fraction > 0 and len(pairs) - n_val < 1:
        raise ValueError("validation split leaves no training data")
    val_pairs = [pairs[i] for i in perm[:n_val]]
    train_pairs = [pairs[i] for i in perm[n_val:]]

    val_batch = (
        prepare_batch(val_pairs, source_alphabet, target_alphabet, max_len) if val_pairs else None
    )

    tensors = params.named_tensors()
    rms_cache = {name: np.zeros_like(arr) for name, arr in tensors.items()}

    records = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(train_pairs))
        nll_sum = 0.0
        tok_hit = tok_n = seq_hit = seq_n = 0
        for start, stop in _batches(len(train_pairs), config.batch_size):
            chunk = [train_pairs[i] for i in order[start:stop]]
            batch = prepare_batch(chunk, source_alphabet, target_alphabet, max_len)
            result = loss_and_gradients(params, batch)
            m = result.metrics
            nll_sum += m.loss * m.token_total
            tok_hit += m.token_correct
            tok_n += m.token_total
            seq_hit += m.seq_correct
            seq_n += m.seq_total
            for name, tensor in tensors.items():
                grad = result.grads[name]
                cache = rms_cache[name]
                cache *= config.rho
                cache += (1.0 - config.rho) * grad * grad
                tensor -= config.learning_rate * grad / (np.sqrt(cache) + config.epsilon)
        if val_batch is not None:
            vm = batch_loss(params, val_batch)
            val_loss = vm.loss
            val_char = vm.token_correct / vm.token_total
            val_exact = vm.seq_correct / vm.seq_total
        else:
            val_loss = val_char = val_exact = None
        record = EpochRecord(
            epoch=epoch,
            train_loss=nll_sum / tok_n,
            train_char_accuracy=tok_hit / tok_n,
            train_exact_accuracy=seq_hit / seq_n,
            val_loss=val_loss,
            val_char_accuracy=val_char,
            val_exact_accuracy=val_exact,
        )
        records.append(record)
        if on_epoch is not None:
            on_epoch(record)
    return params, TrainingTrace(records=tuple(records))


# ---------------------------------------------------------------------------
# inference


def infer(params: ModelParams, word: str) -> str:
    """Greedily decode the normalized form of one (pre-normalized) word.

    Feeds the start marker, then repeatedly takes the argmax symbol (lowest
    index on ties) until the end marker or the step budget; emitted content is
    capped at max_len characters so the result always re-encodes.
    """
    src = encode(word, params.source_alphabet, params.max_len)
    states = encode_sequence(to_one_hot(src, params.source_alphabet)[None, :, :], params)
    target = params.target_alphabet
    x = np.zeros((1, target.size))
    x[0, target.start_index] = 1.0
    out: list[str] = []
    for _ in range(params.max_len + 2):
        probs, states = decode_step(x, states, params)
        idx = int(np.argmax(probs[0]))
        if idx == target.end_index:
            break
        x = np.zeros((1, target.size))
        x[0, idx] = 1.0
        if target.is_content(idx):
            out.append(target.char_at(idx))
            if len(out) >= params.max_len:
                break
    return "".join(out)


# ---------------------------------------------------------------------------
# checkpoints


def save_checkpoint(path, params: ModelParams) -> None:
    """Write a self-contained binary checkpoint.

    Layout: magic line, little-endian uint64 header length, compact ASCII
    JSON header (dims, alphabets and a tensor manifest), then the raw
    little-endian float64 bytes of every tensor in manifest order.
    """
    tensors = params.named_tensors()
    header = {
        "version": CHECKPOINT_VERSION,
        "hidden_dim": params.hidden_dim,
        "num_layers": params.num_layers,
        "max_len": params.max_len,
        "source_alphabet": "".join(params.source_alphabet.content),
        "target_alphabet": "".join(params.target_alphabet.content),
        "tensors": [[name, list(arr.shape)] for name, arr in tensors.items()],
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("ascii")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC + b"\n")
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for arr in tensors.values():
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_checkpoint(path) -> ModelParams:
    """Read back a checkpoint written by save_checkpoint."""
    data = Path(path).read_bytes()
    prefix = CHECKPOINT_MAGIC + b"\n"
    if not data.startswith(prefix):
        raise CheckpointError(f"{path}: not a model checkpoint")
    offset = len(prefix)
    if len(data) < offset + 8:
        raise CheckpointError(f"{path}: truncated header")
    (header_len,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    if len(data) < offset + header_len:
        raise CheckpointError(f"{path}: truncated header")
    try:
        header = json.loads(data[offset : offset + header_len].decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: unreadable header ({exc})") from exc
    offset += header_len

    version = header.get("version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint version {version!r} (expected {CHECKPOINT_VERSION})"
        )
    try:
        hidden_dim = int(header["hidden_dim"])
        num_layers = int(header["num_layers"])
        max_len = int(header["max_len"])
        source_alphabet = Alphabet(side=SOURCE, content=tuple(header["source_alphabet"]))
        target_alphabet = Alphabet(side=TARGET, content=tuple(header["target_alphabet"]))
        manifest = [(str(name), tuple(int(n) for n in shape)) for name, shape in header["tensors"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"{path}: malformed header ({exc})") from exc

    expected = _expected_shapes(source_alphabet.size, target_alphabet.size, hidden_dim, num_layers)
    if [name for name, _ in manifest] != list(expected):
        raise CheckpointError(f"{path}: tensor manifest does not match the declared dimensions")
    for name, shape in manifest:
        if shape != expected[name]:
            raise CheckpointError(
                f"{path}: tensor {name} has shape {shape}, expected {expected[name]}"
            )

    tensors: dict[str, np.ndarray] = {}
    for name, shape in manifest:
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * 8
        if len(data) < offset + nbytes:
            raise CheckpointError(f"{path}: truncated tensor data for {name}")
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=offset)
        tensors[name] = flat.reshape(shape).astype(np.float64)
        offset += nbytes
    if offset != len(data):
        raise CheckpointError(f"{path}: {len(data) - offset} trailing bytes after tensor data")

    def layer(tag: str, index: int) -> LstmLayerParams:
        return LstmLayerParams(
            w_x=tensors[f"{tag}{index}.w_x"],
            w_h=tensors[f"{tag}{index}.w_h"],
            b=tensors[f"{tag}{index}.b"],
        )

    return ModelParams(
        source_alphabet=source_alphabet,
        target_alphabet=target_alphabet,
        max_len=max_len,
        hidden_dim=hidden_dim,
        num_layers=num_layers,
        encoder=tuple(layer("enc", i) for i in range(num_layers)),
        decoder=tuple(layer("dec", i) for i in range(num_layers)),
        w_out=tensors["out.w"],
        b_out=tensors["out.b"],
    )
