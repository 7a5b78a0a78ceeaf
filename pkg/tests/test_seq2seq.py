"""Tests for the character encoder-decoder: forward pass, gradients,
training determinism, inference and checkpoints."""

from __future__ import annotations

import numpy as np
import pytest

from phonorm.charcodec import SOURCE, TARGET, build_alphabet
from phonorm.lexicon import ParallelLexicon
from phonorm.seq2seq import (
    CheckpointError,
    LstmLayerParams,
    TrainingConfig,
    batch_loss,
    decode_step,
    encode_sequence,
    infer,
    init_model_params,
    load_checkpoint,
    loss_and_gradients,
    lstm_step,
    prepare_batch,
    save_checkpoint,
    train,
)


def tiny_params(seed: int = 9, hidden_dim: int = 4, max_len: int = 5):
    source = build_alphabet(["abc"], SOURCE)
    target = build_alphabet(["abc"], TARGET)
    return init_model_params(
        source, target, max_len=max_len, hidden_dim=hidden_dim, num_layers=2,
        rng=np.random.default_rng(seed),
    )


def small_lexicon() -> ParallelLexicon:
    words = ["kala", "kolo", "bavi", "dumi", "sela", "gato", "mibu", "lodi",
             "tabe", "vuko", "pina", "drot"]
    return ParallelLexicon(entries=tuple((w, w) for w in words))


def test_lstm_step_zero_params_gives_zero_state():
    hidden = 3
    params = LstmLayerParams(
        w_x=np.zeros((2, 4 * hidden)), w_h=np.zeros((hidden, 4 * hidden)),
        b=np.zeros(4 * hidden),
    )
    x = np.ones((5, 2))
    h, c, _ = lstm_step(x, np.zeros((5, hidden)), np.zeros((5, hidden)), params)
    assert h.shape == (5, hidden)
    assert np.all(h == 0.0)
    assert np.all(c == 0.0)


def test_lstm_step_output_is_bounded():
    rng = np.random.default_rng(3)
    hidden = 6
    params = LstmLayerParams(
        w_x=rng.uniform(-2, 2, (4, 4 * hidden)),
        w_h=rng.uniform(-2, 2, (hidden, 4 * hidden)),
        b=rng.uniform(-2, 2, 4 * hidden),
    )
    h = np.zeros((8, hidden))
    c = np.zeros((8, hidden))
    for _ in range(7):
        h, c, _ = lstm_step(rng.uniform(-3, 3, (8, 4)), h, c, params)
        assert np.all(np.abs(h) < 1.0)
        assert np.all(np.isfinite(c))


def test_decode_step_is_a_distribution(zero_model):
    target = zero_model.target_alphabet
    states = encode_sequence(np.zeros((1, zero_model.max_len, zero_model.source_alphabet.size)),
                             zero_model)
    x = np.zeros((1, target.size))
    x[0, target.start_index] = 1.0
    probs, new_states = decode_step(x, states, zero_model)
    assert probs.shape == (1, target.size)
    assert probs.min() > 0.0
    assert np.isclose(probs.sum(), 1.0)
    # zero weights mean a uniform next-symbol distribution
    assert np.allclose(probs, 1.0 / target.size)
    assert len(new_states) == zero_model.num_layers


def test_prepare_batch_layout():
    source = build_alphabet(["ab"], SOURCE)
    target = build_alphabet(["ab"], TARGET)
    batch = prepare_batch([("ab", "b")], source, target, max_len=4)
    assert batch.src.shape == (1, 4, source.size)
    assert batch.dec_in.shape == (1, 5, target.size)
    assert batch.dec_tgt.shape == (1, 5)
    # decoder input starts with the start marker
    assert batch.dec_in[0, 0, target.start_index] == 1.0
    # real positions: one character plus the end marker
    assert batch.mask[0].tolist() == [True, True, False, False, False]
    assert batch.dec_tgt[0, 0] == target.index_of("b")
    assert batch.dec_tgt[0, 1] == target.end_index


def test_batch_loss_matches_stepwise_decoding():
    params = tiny_params()
    pairs = [("ab", "ba"), ("abc", "cab"), ("a", "a")]
    batch = prepare_batch(pairs, params.source_alphabet, params.target_alphabet, params.max_len)

    states = encode_sequence(batch.src, params)
    probs_steps = []
    for t in range(batch.dec_in.shape[1]):
        probs_t, states = decode_step(batch.dec_in[:, t, :], states, params)
        probs_steps.append(probs_t)
    probs = np.stack(probs_steps, axis=1)

    rows, cols = np.nonzero(batch.mask)
    manual_loss = float(-np.log(probs[rows, cols, batch.dec_tgt[rows, cols]]).mean())

    metrics = batch_loss(params, batch)
    assert metrics.token_total == int(batch.mask.sum())
    assert np.isclose(metrics.loss, manual_loss)


def test_gradients_match_finite_differences_spot_check():
    params = tiny_params(seed=11, hidden_dim=3, max_len=3)
    pairs = [("ab", "ba"), ("a", "b")]
    batch = prepare_batch(pairs, params.source_alphabet, params.target_alphabet, params.max_len)
    grads = loss_and_gradients(params, batch).grads

    rng = np.random.default_rng(0)
    step = 1e-5
    tensors = params.named_tensors()
    for name in ("enc0.w_x", "dec1.w_h", "out.w", "out.b"):
        tensor = tensors[name]
        flat = tensor.reshape(-1)
        for _ in range(3):
            k = int(rng.integers(0, flat.size))
            original = flat[k]
            flat[k] = original + step
            up = batch_loss(params, batch).loss
            flat[k] = original - step
            down = batch_loss(params, batch).loss
            flat[k] = original
            numeric = (up - down) / (2 * step)
            analytic = grads[name].reshape(-1)[k]
            assert abs(numeric - analytic) <= 1e-8 + 1e-4 * max(abs(numeric), abs(analytic))


def test_train_is_deterministic():
    config = TrainingConfig(hidden_dim=8, epochs=3, batch_size=4,
                            validation_fraction=0.25, rng_seed=5)
    params_a, trace_a = train(small_lexicon(), config)
    params_b, trace_b = train(small_lexicon(), config)
    assert trace_a == trace_b
    for name, tensor in params_a.named_tensors().items():
        assert np.array_equal(tensor, params_b.named_tensors()[name])


def test_train_reduces_loss_and_records_validation():
    config = TrainingConfig(hidden_dim=8, epochs=5, batch_size=4,
                            validation_fraction=0.25, rng_seed=5)
    params, trace = train(small_lexicon(), config)
    assert len(trace.records) == 5
    assert trace.final.train_loss < trace.records[0].train_loss
    assert trace.final.val_loss is not None
    assert 0.0 <= trace.final.train_char_accuracy <= 1.0

    tsv = trace.to_tsv()
    lines = tsv.strip().split("\n")
    assert lines[0].startswith("epoch\ttrain_loss")
    assert len(lines) == 6
    # repr round-trips the floats exactly
    assert float(lines[1].split("\t")[1]) == trace.records[0].train_loss


def test_train_without_validation_leaves_blank_columns():
    config = TrainingConfig(hidden_dim=8, epochs=2, batch_size=4,
                            validation_fraction=0.0, rng_seed=5)
    params, trace = train(small_lexicon(), config)
    assert trace.final.val_loss is None
    row = trace.to_tsv().strip().split("\n")[1].split("\t")
    assert row[4] == "" and row[5] == "" and row[6] == ""


def test_train_rejects_empty_lexicon():
    with pytest.raises(ValueError):
        train(ParallelLexicon(entries=()), TrainingConfig(epochs=1))


def test_train_sources_are_prenormalized():
    # "baaaad" trims to "baad": the source alphabet stays within a-z and the
    # model treats the trimmed form and the raw form identically
    lexicon = ParallelLexicon(entries=(("baaaad", "bad"), ("kala", "kala"),
                                       ("bad", "bad"), ("kolo", "kolo")))
    config = TrainingConfig(hidden_dim=8, epochs=1, batch_size=2,
                            validation_fraction=0.0, rng_seed=2)
    params, _ = train(lexicon, config)
    assert infer(params, "baad") == infer(params, "baad")
    assert params.max_len == max(len("baad"), len("kala"), len("kolo"))


def test_infer_zero_model_returns_empty_string(zero_model):
    assert infer(zero_model, "ab") == ""


def test_infer_caps_emitted_length(zero_model):
    target = zero_model.target_alphabet
    zero_model.b_out[target.index_of("a")] = 1.0
    assert infer(zero_model, "ab") == "a" * zero_model.max_len


def test_checkpoint_round_trip(tmp_path):
    params = tiny_params(seed=21)
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, params)
    loaded = load_checkpoint(path)

    assert loaded.hidden_dim == params.hidden_dim
    assert loaded.num_layers == params.num_layers
    assert loaded.max_len == params.max_len
    assert loaded.source_alphabet == params.source_alphabet
    assert loaded.target_alphabet == params.target_alphabet
    originals = params.named_tensors()
    for name, tensor in loaded.named_tensors().items():
        assert np.array_equal(tensor, originals[name])
    for word in ("ab", "cab", "abc", ""):
        assert infer(loaded, word) == infer(params, word)
    # loaded tensors must be writable (training could resume on them)
    loaded.b_out[0] = 1.0


def test_checkpoint_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk.ckpt"
    path.write_bytes(b"definitely not a checkpoint")
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_checkpoint_rejects_wrong_version(tmp_path):
    params = tiny_params()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, params)
    data = path.read_bytes()
    assert b'"version":1' in data
    path.write_bytes(data.replace(b'"version":1', b'"version":9', 1))
    with pytest.raises(CheckpointError, match="version"):
        load_checkpoint(path)


def test_checkpoint_rejects_truncation_and_trailing_bytes(tmp_path):
    params = tiny_params()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, params)
    data = path.read_bytes()

    path.write_bytes(data[:-10])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)

    path.write_bytes(data + b"\x00\x00")
    with pytest.raises(CheckpointError, match="trailing"):
        load_checkpoint(path)


def test_checkpoint_error_is_a_value_error():
    assert issubclass(CheckpointError, ValueError)
