import numpy as np
import pytest

from evokit.core import TaskState, PolicyState
from evokit.policies import (
    CONVNET_PARAM_COUNT,
    ConvNetPolicy,
    IdentityPolicy,
    LSTMPolicy,
    MLPPolicy,
    Seq2SeqPolicy,
    conv2d_same,
    lstm_cell,
    mlp_layout,
)
from evokit.rng import new_key, normal


def _state(obs):
    return TaskState(obs=np.asarray(obs, dtype=np.float32))


# ---------------------------------------------------------------------------
# parameter counts and layout
# ---------------------------------------------------------------------------


def test_param_count_mlp():
    assert mlp_layout([5, 16, 2]).total == 5 * 16 + 16 + 16 * 2 + 2  # 130
    assert mlp_layout([3, 1]).total == 4


def test_param_count_convnet():
    assert ConvNetPolicy().num_params == CONVNET_PARAM_COUNT == 9098


def test_param_count_rejects_empty_spec():
    with pytest.raises(ValueError):
        mlp_layout([5])
    with pytest.raises(ValueError):
        mlp_layout([])


def test_layout_flatten_roundtrip():
    layout = mlp_layout([4, 8, 3])
    rng = np.random.default_rng(0)
    theta = rng.standard_normal((6, layout.total)).astype(np.float32)
    blocks = layout.unflatten(theta)
    assert np.array_equal(layout.flatten(blocks), theta)


def test_layout_offsets_are_contiguous():
    layout = mlp_layout([5, 16, 2])
    expected_offset = 0
    for _, shape, offset in layout.entries:
        assert offset == expected_offset
        expected_offset += int(np.prod(shape))
    assert expected_offset == layout.total


# ---------------------------------------------------------------------------
# MLP
# ---------------------------------------------------------------------------


def test_mlp_zero_params_zero_actions():
    policy = MLPPolicy([5, 16, 2])
    obs = normal(new_key(1), (3, 2, 5))
    actions, _ = policy.get_actions(_state(obs), np.zeros((3, policy.num_params), np.float32), PolicyState())
    assert actions.shape == (3, 2, 2)
    assert np.array_equal(actions, np.zeros_like(actions))


def test_mlp_hand_value_single_linear():
    # [1]-layer net with identity output: W=2, b=1 on obs 3 -> 7
    policy = MLPPolicy([1, 1], output_activation="identity")
    params = np.array([[2.0, 1.0]], dtype=np.float32)
    obs = np.full((1, 1, 1), 3.0, dtype=np.float32)
    actions, _ = policy.get_actions(_state(obs), params, PolicyState())
    assert actions[0, 0, 0] == 7.0


def test_mlp_batched_equals_member_loop_bitwise():
    policy = MLPPolicy([6, 32, 3])
    params = normal(new_key(5), (8, policy.num_params))
    obs = normal(new_key(6), (1, 4, 6))
    obs_full = np.broadcast_to(obs, (8, 4, 6))
    batched, _ = policy.get_actions(_state(obs_full), params, PolicyState())
    for i in range(8):
        single, _ = policy.get_actions(
            TaskState(obs=np.ascontiguousarray(obs_full[i : i + 1])),
            params[i : i + 1],
            PolicyState(),
        )
        assert np.array_equal(batched[i], single[0])


def test_mlp_member_isolation():
    policy = MLPPolicy([4, 8, 2])
    params = normal(new_key(7), (5, policy.num_params))
    obs = np.broadcast_to(normal(new_key(8), (1, 3, 4)), (5, 3, 4))
    base, _ = policy.get_actions(_state(obs), params, PolicyState())
    modified = params.copy()
    modified[2] = 0.0
    out, _ = policy.get_actions(_state(obs), modified, PolicyState())
    changed = np.any(out != base, axis=(1, 2))
    assert changed[2]
    assert not changed[0] and not changed[1] and not changed[3] and not changed[4]


def test_mlp_permuting_members_permutes_actions():
    policy = MLPPolicy([3, 5, 2])
    params = normal(new_key(9), (6, policy.num_params))
    obs = np.broadcast_to(normal(new_key(10), (1, 2, 3)), (6, 2, 3))
    base, _ = policy.get_actions(_state(obs), params, PolicyState())
    perm = np.array([3, 1, 5, 0, 2, 4])
    permuted, _ = policy.get_actions(_state(obs), params[perm], PolicyState())
    assert np.array_equal(permuted, base[perm])


def test_mlp_tanh_output_bounded():
    policy = MLPPolicy([4, 8, 3])
    params = 100.0 * normal(new_key(11), (4, policy.num_params))
    obs = 10.0 * normal(new_key(12), (4, 2, 4))
    actions, _ = policy.get_actions(_state(obs), params, PolicyState())
    assert np.all(actions >= -1.0) and np.all(actions <= 1.0)


def test_mlp_shape_errors():
    policy = MLPPolicy([4, 8, 2])
    with pytest.raises(ValueError):
        policy.get_actions(
            _state(np.zeros((2, 1, 3))), np.zeros((2, policy.num_params), np.float32), PolicyState()
        )
    with pytest.raises(ValueError):
        policy.get_actions(
            _state(np.zeros((3, 1, 4))), np.zeros((2, policy.num_params), np.float32), PolicyState()
        )


# ---------------------------------------------------------------------------
# LSTM
# ---------------------------------------------------------------------------


def test_lstm_cell_zero_params_zero_state():
    x = np.zeros((2, 3, 4), dtype=np.float32)
    h = np.zeros((2, 3, 5), dtype=np.float32)
    c = np.zeros((2, 3, 5), dtype=np.float32)
    w = np.zeros((2, 20, 9), dtype=np.float32)
    b = np.zeros((2, 20), dtype=np.float32)
    h2, c2 = lstm_cell(x, h, c, w, b)
    assert np.array_equal(h2, np.zeros_like(h))
    assert np.array_equal(c2, np.zeros_like(c))


def test_lstm_cell_hand_value_unit_cell():
    # 1-unit cell, params all 1, x = 0: i=f=o=sigmoid(1), g=tanh(1)
    x = np.zeros((1, 1, 1), dtype=np.float32)
    h = np.zeros((1, 1, 1), dtype=np.float32)
    c = np.zeros((1, 1, 1), dtype=np.float32)
    w = np.ones((1, 4, 2), dtype=np.float32)
    b = np.ones((1, 4), dtype=np.float32)
    h2, c2 = lstm_cell(x, h, c, w, b)
    sig1 = 1.0 / (1.0 + np.exp(-1.0))
    tanh1 = np.tanh(1.0)
    assert np.isclose(c2[0, 0, 0], sig1 * tanh1, atol=1e-6)
    assert np.isclose(h2[0, 0, 0], sig1 * np.tanh(sig1 * tanh1), atol=1e-6)


def test_lstm_cell_state_growth_bounded():
    # |c'| <= |c| + 1 elementwise (gates in (0,1), g in (-1,1))
    rng = np.random.default_rng(3)
    x = rng.standard_normal((2, 4, 3)).astype(np.float32) * 5
    h = rng.standard_normal((2, 4, 6)).astype(np.float32)
    c = rng.standard_normal((2, 4, 6)).astype(np.float32) * 3
    w = rng.standard_normal((2, 24, 9)).astype(np.float32) * 2
    b = rng.standard_normal((2, 24)).astype(np.float32)
    _, c2 = lstm_cell(x, h, c, w, b)
    assert np.all(np.abs(c2) <= np.abs(c) + 1.0 + 1e-6)


def test_lstm_policy_reset_shapes_and_zeros():
    policy = LSTMPolicy(input_dim=4, hidden_dim=8, output_dim=2)
    state = _state(np.zeros((2, 3, 4), dtype=np.float32))
    p_state = policy.reset(state)
    assert p_state.h.shape == (2, 3, 8)
    assert p_state.c.shape == (2, 3, 8)
    assert not p_state.h.any() and not p_state.c.any()
    p_state2 = policy.reset(state)
    assert np.array_equal(p_state.h, p_state2.h)


def test_lstm_policy_batched_equals_loop():
    policy = LSTMPolicy(input_dim=3, hidden_dim=4, output_dim=2)
    params = normal(new_key(13), (5, policy.num_params))
    obs = np.broadcast_to(normal(new_key(14), (1, 2, 3)), (5, 2, 3))
    state = _state(obs)
    p_state = policy.reset(state)
    batched, batched_next = policy.get_actions(state, params, p_state)
    for i in range(5):
        sub_state = TaskState(obs=np.ascontiguousarray(obs[i : i + 1]))
        sub_p = policy.reset(sub_state)
        single, single_next = policy.get_actions(sub_state, params[i : i + 1], sub_p)
        assert np.array_equal(batched[i], single[0])
        assert np.array_equal(batched_next.h[i], single_next.h[0])


# ---------------------------------------------------------------------------
# ConvNet
# ---------------------------------------------------------------------------


def test_conv2d_same_hand_value():
    # all-ones 3x3 image, all-ones 3x3 kernel, same pad: center sees all 9
    img = np.ones((1, 3, 3, 1), dtype=np.float32)
    w = np.ones((3, 3, 1, 1), dtype=np.float32)
    b = np.zeros(1, dtype=np.float32)
    out = conv2d_same(img, w, b)
    assert out.shape == (1, 3, 3, 1)
    assert out[0, 1, 1, 0] == 9.0
    assert out[0, 0, 0, 0] == 4.0  # corner sees a 2x2 patch


def test_convnet_zero_params_zero_logits():
    policy = ConvNetPolicy()
    obs = np.broadcast_to(normal(new_key(15), (1, 2, 28, 28)), (3, 2, 28, 28))
    logits, _ = policy.get_actions(_state(obs), np.zeros((3, 9098), np.float32), PolicyState())
    assert logits.shape == (3, 2, 10)
    assert np.array_equal(logits, np.zeros_like(logits))
    assert np.all(logits.argmax(axis=-1) == 0)  # argmax tie-break to class 0


def test_convnet_batched_equals_loop_bitwise():
    policy = ConvNetPolicy()
    params = 0.3 * normal(new_key(16), (4, 9098))
    obs = np.broadcast_to(normal(new_key(17), (1, 2, 28, 28)), (4, 2, 28, 28))
    batched, _ = policy.get_actions(_state(obs), params, PolicyState())
    for i in range(4):
        single, _ = policy.get_actions(
            TaskState(obs=np.ascontiguousarray(obs[i : i + 1])),
            params[i : i + 1],
            PolicyState(),
        )
        assert np.array_equal(batched[i], single[0])


def test_convnet_rejects_bad_shapes():
    policy = ConvNetPolicy()
    with pytest.raises(ValueError):
        policy.get_actions(
            _state(np.zeros((2, 1, 27, 28))), np.zeros((2, 9098), np.float32), PolicyState()
        )
    with pytest.raises(ValueError):
        policy.get_actions(
            _state(np.zeros((2, 1, 28, 28))), np.zeros((2, 100), np.float32), PolicyState()
        )


# ---------------------------------------------------------------------------
# seq2seq
# ---------------------------------------------------------------------------


def test_seq2seq_deterministic_and_digits_only():
    policy = Seq2SeqPolicy(answer_len=3, hidden_dim=8)
    params = normal(new_key(18), (2, policy.num_params))
    query = np.array([1, 2, 10, 3, 4, 11], dtype=np.float32)  # "12+34="
    obs = np.broadcast_to(query, (2, 1, 4, 6))
    a1, _ = policy.get_actions(_state(obs), params, PolicyState())
    a2, _ = policy.get_actions(_state(obs), params, PolicyState())
    assert np.array_equal(a1, a2)
    assert a1.shape == (2, 1, 4, 3)
    assert np.all(a1 >= 0) and np.all(a1 <= 9)
    assert np.array_equal(a1, np.round(a1))


def test_seq2seq_rejects_out_of_vocab():
    policy = Seq2SeqPolicy(answer_len=3, hidden_dim=8)
    params = np.zeros((1, policy.num_params), dtype=np.float32)
    obs = np.full((1, 1, 1, 6), 12.0, dtype=np.float32)  # token 12 is out of vocab
    with pytest.raises(ValueError):
        policy.get_actions(_state(obs), params, PolicyState())


def test_seq2seq_member_isolation():
    policy = Seq2SeqPolicy(answer_len=2, hidden_dim=8)
    params = normal(new_key(19), (3, policy.num_params))
    obs = np.broadcast_to(
        np.array([5, 10, 7, 11], dtype=np.float32), (3, 1, 2, 4)
    )
    base, _ = policy.get_actions(_state(obs), params, PolicyState())
    modified = params.copy()
    modified[1] = normal(new_key(20), (policy.num_params,))
    out, _ = policy.get_actions(_state(obs), modified, PolicyState())
    assert np.array_equal(out[0], base[0])
    assert np.array_equal(out[2], base[2])


# ---------------------------------------------------------------------------
# identity
# ---------------------------------------------------------------------------


def test_identity_policy_returns_params():
    policy = IdentityPolicy(4)
    params = normal(new_key(21), (3, 4))
    obs = np.zeros((3, 2, 1), dtype=np.float32)
    actions, _ = policy.get_actions(_state(obs), params, PolicyState())
    assert actions.shape == (3, 2, 4)
    assert np.array_equal(actions[:, 0, :], params)
    assert np.array_equal(actions[:, 1, :], params)
