import struct

import numpy as np
import pytest

from evokit.core import FormatError, TaskState
from evokit.rng import new_key, split, uniform
from evokit.tasks import (
    AdditionTask,
    CartPoleSwingUp,
    MnistTask,
    PaintTask,
    SphereTask,
    WaterWorld,
    cartpole_energy,
    load_idx_images,
    load_idx_labels,
    load_mnist,
    make_addition_batch,
    render_triangles,
)
from evokit.tasks.cartpole import CartPoleRecord, _observe
from evokit.tasks.mnist import MnistBatch
from evokit.tasks.waterworld import SENSOR_RANGE, WaterWorldRecord

# ---------------------------------------------------------------------------
# cart-pole
# ---------------------------------------------------------------------------


def _rest_record(theta, x=0.0):
    z = np.zeros((1, 1), dtype=np.float32)
    return CartPoleRecord(
        x=z + x,
        x_dot=z.copy(),
        theta=z + theta,
        theta_dot=z.copy(),
        t=np.zeros((1, 1), dtype=np.int32),
        done=np.zeros((1, 1), dtype=bool),
    )


def _zero_action(p=1, b=1):
    return np.zeros((p, b, 1), dtype=np.float32)


def test_cartpole_easy_reset_ranges():
    task = CartPoleSwingUp()
    keys = split(new_key(1), 1000)
    state = task.reset(keys, 1)
    r = state.extra
    assert np.all(np.abs(r.theta - np.pi) <= 0.1 + 1e-6)
    assert np.all(np.abs(r.x) <= 0.1 + 1e-6)
    assert np.all(np.abs(r.x_dot) <= 0.1 + 1e-6)
    assert np.all(np.abs(r.theta_dot) <= 0.1 + 1e-6)


def test_cartpole_hard_reset_covers_both_theta_signs():
    task = CartPoleSwingUp(hard=True)
    keys = split(new_key(2), 1000)
    r = task.reset(keys, 1).extra
    assert np.all(np.abs(r.theta) <= np.pi + 1e-6)
    assert (r.theta > 0.5).any() and (r.theta < -0.5).any()
    assert np.all(np.abs(r.x) <= 1.0 + 1e-6)
    assert np.all(np.abs(r.x_dot) <= 0.5 + 1e-6)


def test_cartpole_reset_deterministic_and_shared_lanes():
    task = CartPoleSwingUp()
    keys = split(new_key(3), 2)
    s1 = task.reset(keys, 8)
    s2 = task.reset(keys, 8)
    assert np.array_equal(s1.obs, s2.obs)
    # every member sees the same lane initialisations
    for i in range(8):
        assert np.array_equal(s1.obs[i], s1.obs[0])
    assert s1.obs.shape == (8, 2, 5)


def test_cartpole_reset_rejects_empty_keys():
    with pytest.raises(ValueError):
        CartPoleSwingUp().reset([], 4)


def test_cartpole_upright_equilibrium():
    task = CartPoleSwingUp()
    state = TaskState(obs=_observe(_rest_record(0.0)), extra=_rest_record(0.0))
    out = task.step(state, _zero_action())
    r = out.state.extra
    assert out.reward[0, 0] == 1.0
    assert r.x[0, 0] == 0.0 and r.x_dot[0, 0] == 0.0
    assert r.theta[0, 0] == 0.0 and r.theta_dot[0, 0] == 0.0


def test_cartpole_hanging_equilibrium():
    task = CartPoleSwingUp()
    rec = _rest_record(np.pi)
    state = TaskState(obs=_observe(rec), extra=rec)
    out = task.step(state, _zero_action())
    assert abs(out.reward[0, 0]) < 1e-6
    assert abs(out.state.extra.theta[0, 0] - np.pi) < 1e-6


def test_cartpole_hand_computed_acceleration():
    # theta = pi/2 at rest, zero force: theta_dot' = dt * 9.8 / (0.5 * 4/3)
    task = CartPoleSwingUp()
    rec = _rest_record(np.pi / 2)
    state = TaskState(obs=_observe(rec), extra=rec)
    out = task.step(state, _zero_action())
    assert np.isclose(out.state.extra.theta_dot[0, 0], 0.01 * 14.7, rtol=1e-5)


def test_cartpole_track_violation_gives_zero_reward_and_freezes():
    task = CartPoleSwingUp()
    rec = _rest_record(0.0, x=2.399)
    rec = CartPoleRecord(
        x=rec.x, x_dot=rec.x_dot + 1.0, theta=rec.theta, theta_dot=rec.theta_dot,
        t=rec.t, done=rec.done,
    )
    state = TaskState(obs=_observe(rec), extra=rec)
    out = task.step(state, _zero_action())
    assert out.done[0, 0]
    assert out.reward[0, 0] == 0.0
    frozen_x = out.state.extra.x[0, 0]
    out2 = task.step(out.state, _zero_action())
    assert out2.reward[0, 0] == 0.0
    assert out2.state.extra.x[0, 0] == frozen_x
    assert out2.state.extra.t[0, 0] == out.state.extra.t[0, 0]


def test_cartpole_truncation_keeps_final_reward():
    # reaching the step cap ends the lane but still pays the final reward
    task = CartPoleSwingUp()
    rec = _rest_record(0.0)
    rec = CartPoleRecord(
        x=rec.x, x_dot=rec.x_dot, theta=rec.theta, theta_dot=rec.theta_dot,
        t=np.full((1, 1), 999, dtype=np.int32), done=rec.done,
    )
    state = TaskState(obs=_observe(rec), extra=rec)
    out = task.step(state, _zero_action())
    assert out.done[0, 0]
    assert out.reward[0, 0] == 1.0


def test_cartpole_step_is_pure():
    task = CartPoleSwingUp()
    state = task.reset(split(new_key(4), 3), 2)
    actions = uniform(new_key(5), (2, 3, 1), -1.0, 1.0)
    o1 = task.step(state, actions)
    o2 = task.step(state, actions)
    assert np.array_equal(o1.state.obs, o2.state.obs)
    assert np.array_equal(o1.reward, o2.reward)


def test_cartpole_energy_drift_under_one_percent():
    # zero force from easy inits: semi-implicit Euler holds energy to < 1%
    task = CartPoleSwingUp()
    keys = split(new_key(6), 16)
    state = task.reset(keys, 1)
    e0 = cartpole_energy(state.extra)
    for _ in range(100):
        state = task.step(state, _zero_action(1, 16)).state
    e1 = cartpole_energy(state.extra)
    assert np.max(np.abs((e1 - e0) / e0)) < 0.01


def test_cartpole_action_shape_error():
    task = CartPoleSwingUp()
    state = task.reset(split(new_key(7), 2), 3)
    with pytest.raises(ValueError):
        task.step(state, np.zeros((3, 2, 2), dtype=np.float32))


# ---------------------------------------------------------------------------
# water world
# ---------------------------------------------------------------------------


def _agent_record(task, agent_pos, item_pos=None, item_vel=None, t=0):
    p, b = 1, 1
    n = task.n_items
    if item_pos is None:
        item_pos = np.full((p, b, n, 2), 5.0, dtype=np.float32)  # far outside
        item_pos = np.clip(item_pos, 0, 1)
    if item_vel is None:
        item_vel = np.zeros((p, b, n, 2), dtype=np.float32)
    return WaterWorldRecord(
        agent_pos=np.array(agent_pos, dtype=np.float32).reshape(1, 1, 2),
        agent_vel=np.zeros((1, 1, 2), dtype=np.float32),
        item_pos=np.asarray(item_pos, dtype=np.float32),
        item_vel=np.asarray(item_vel, dtype=np.float32),
        t=t,
        lane_keys=(new_key(0),),
    )


def test_waterworld_empty_arena_sensors_read_one():
    task = WaterWorld(n_food=0, n_poison=0)
    rec = _agent_record(task, [0.5, 0.5])
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)
    out = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    obs = out.state.obs[0, 0]
    assert np.all(obs[0:16] == 1.0)  # food channel
    assert np.all(obs[16:32] == 1.0)  # poison channel
    assert np.all(obs[32:48] == 1.0)  # walls beyond sensor range from center
    assert task.obs_dim == 50


def test_waterworld_wall_ray_hand_value():
    # agent at (0.5, 0.1): the downward ray (index 12) reads 0.1 / 0.21
    task = WaterWorld(n_food=0, n_poison=0)
    rec = _agent_record(task, [0.5, 0.1])
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)
    out = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    wall = out.state.obs[0, 0, 32:48]
    assert np.isclose(wall[12], 0.1 / SENSOR_RANGE, atol=1e-5)


def test_waterworld_obs_dims_and_ranges():
    task = WaterWorld()
    assert task.obs_dim == 50
    assert WaterWorld(multi_agent=True).obs_dim == 66
    keys = split(new_key(8), 2)
    state = task.reset(keys, 4)
    assert state.obs.shape == (4, 2, 50)
    rays = state.obs[..., :48]
    assert np.all(rays >= 0.0) and np.all(rays <= 1.0)


def test_waterworld_no_contact_zero_reward():
    task = WaterWorld(n_food=1, n_poison=1)
    item_pos = np.array([[[[0.9, 0.9], [0.1, 0.1]]]], dtype=np.float32)
    rec = _agent_record(task, [0.5, 0.5], item_pos=item_pos)
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)
    out = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    assert out.reward[0, 0] == 0.0


def test_waterworld_item_count_conserved_and_positions_bounded():
    task = WaterWorld(n_food=5, n_poison=3)
    state = task.reset(split(new_key(9), 2), 3)
    n_items = state.extra.item_pos.shape[2]
    for step in range(50):
        actions = uniform(new_key(step), (3, 2, 2), -1.0, 1.0)
        state = task.step(state, actions).state
        assert state.extra.item_pos.shape[2] == n_items == 8
        assert np.all(state.extra.item_pos >= 0.0)
        assert np.all(state.extra.item_pos <= 1.0)
        assert np.all(state.extra.agent_pos >= 0.0)
        assert np.all(state.extra.agent_pos <= 1.0)


def test_waterworld_scripted_drive_eats_food():
    # one stationary food item 0.1 to the right; drive straight at it
    task = WaterWorld(n_food=1, n_poison=0)
    item_pos = np.array([[[[0.6, 0.5]]]], dtype=np.float32)
    rec = _agent_record(task, [0.5, 0.5], item_pos=item_pos)
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)

    # independent oracle: integrate the velocity recursion to find the
    # first step at which the gap falls below the contact distance
    v = 0.0
    gap = 0.1
    expected_step = None
    for step in range(1, 100):
        v = min(0.95 * v + 0.002, 0.01)
        gap -= v
        if gap < 0.046:
            expected_step = step
            break

    total = 0.0
    eaten_at = None
    action = np.array([[[1.0, 0.0]]], dtype=np.float32)
    for step in range(1, 100):
        out = task.step(state, action)
        state = out.state
        total += float(out.reward[0, 0])
        if out.reward[0, 0] > 0 and eaten_at is None:
            eaten_at = step
            break
    assert eaten_at == expected_step
    assert total == 1.0


def test_waterworld_poison_gives_negative_reward():
    task = WaterWorld(n_food=0, n_poison=1)
    item_pos = np.array([[[[0.52, 0.5]]]], dtype=np.float32)  # already in contact
    rec = _agent_record(task, [0.5, 0.5], item_pos=item_pos)
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)
    out = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    assert out.reward[0, 0] == -1.0


def test_waterworld_respawn_is_deterministic():
    task = WaterWorld(n_food=1, n_poison=0)
    item_pos = np.array([[[[0.52, 0.5]]]], dtype=np.float32)
    rec = _agent_record(task, [0.5, 0.5], item_pos=item_pos)
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)
    a = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    b = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    assert np.array_equal(a.state.extra.item_pos, b.state.extra.item_pos)
    # respawned somewhere else in the unit square
    assert not np.array_equal(a.state.extra.item_pos[0, 0, 0], item_pos[0, 0, 0])


def test_waterworld_episode_ends_at_cap():
    task = WaterWorld(n_food=1, n_poison=0)
    rec = _agent_record(task, [0.5, 0.5], t=499)
    state = TaskState(obs=np.zeros((1, 1, task.obs_dim), np.float32), extra=rec)
    out = task.step(state, np.zeros((1, 1, 2), dtype=np.float32))
    assert out.done.all()
    out2 = task.step(out.state, np.zeros((1, 1, 2), dtype=np.float32))
    assert out2.reward[0, 0] == 0.0
    assert np.array_equal(out2.state.extra.agent_pos, out.state.extra.agent_pos)


def test_waterworld_multi_agent_shared_arena():
    task = WaterWorld(n_food=4, n_poison=2, multi_agent=True, n_agents=6)
    state = task.reset([new_key(10)], 6)
    assert state.obs.shape == (6, 1, 66)
    assert state.extra.item_pos.shape == (1, 1, 6, 2)
    # identical spawn point: pair fitness differences reflect parameters
    agents = state.extra.agent_pos[:, 0, :]
    assert np.array_equal(agents, np.full((6, 2), 0.5, dtype=np.float32))
    actions = uniform(new_key(11), (6, 1, 2), -1.0, 1.0)
    out = task.step(state, actions)
    assert out.reward.shape == (6, 1)
    # agents that act differently end up at different positions
    out2 = task.step(out.state, actions)
    moved = out2.state.extra.agent_pos[:, 0, :]
    assert len({tuple(a) for a in moved.tolist()}) > 1


def test_waterworld_multi_agent_requires_single_lane():
    task = WaterWorld(multi_agent=True, n_agents=4)
    with pytest.raises(ValueError):
        task.reset(split(new_key(12), 2), 4)


def test_waterworld_multi_agent_population_must_match():
    task = WaterWorld(multi_agent=True, n_agents=4)
    with pytest.raises(ValueError):
        task.reset([new_key(13)], 8)


# ---------------------------------------------------------------------------
# IDX loading
# ---------------------------------------------------------------------------


def _idx_images_bytes(n=3, rows=28, cols=28, magic=2051):
    header = struct.pack(">iiii", magic, n, rows, cols)
    pixels = (np.arange(n * rows * cols) % 256).astype(np.uint8)
    return header + pixels.tobytes()


def _idx_labels_bytes(labels, magic=2049):
    header = struct.pack(">ii", magic, len(labels))
    return header + bytes(labels)


def test_idx_images_roundtrip(tmp_path):
    path = tmp_path / "images.idx"
    path.write_bytes(_idx_images_bytes(n=3))
    images = load_idx_images(str(path))
    assert images.shape == (3, 28, 28)
    assert images.dtype == np.float32
    assert np.isclose(images[0, 0, 1], 1.0 / 255.0)
    assert images.max() <= 1.0


def test_idx_labels_roundtrip(tmp_path):
    path = tmp_path / "labels.idx"
    path.write_bytes(_idx_labels_bytes([3, 1, 9]))
    labels = load_idx_labels(str(path))
    assert np.array_equal(labels, [3, 1, 9])


def test_idx_rejects_wrong_magic(tmp_path):
    img = tmp_path / "bad.idx"
    img.write_bytes(_idx_images_bytes(magic=2052))
    with pytest.raises(FormatError, match="magic"):
        load_idx_images(str(img))
    lbl = tmp_path / "badlabel.idx"
    lbl.write_bytes(_idx_labels_bytes([1], magic=2051))  # image magic on a label file
    with pytest.raises(FormatError, match="magic"):
        load_idx_labels(str(lbl))


def test_idx_rejects_truncated_file(tmp_path):
    path = tmp_path / "trunc.idx"
    path.write_bytes(_idx_images_bytes(n=3)[:-10])
    with pytest.raises(FormatError, match="payload"):
        load_idx_images(str(path))
    header_only = tmp_path / "header.idx"
    header_only.write_bytes(b"\x00\x00")
    with pytest.raises(FormatError, match="magic|truncated"):
        load_idx_images(str(header_only))


def test_idx_rejects_bad_dims(tmp_path):
    path = tmp_path / "dims.idx"
    path.write_bytes(_idx_images_bytes(rows=27))
    with pytest.raises(FormatError, match="dims"):
        load_idx_images(str(path))


def test_load_mnist_count_mismatch(tmp_path):
    img = tmp_path / "images.idx"
    img.write_bytes(_idx_images_bytes(n=3))
    lbl = tmp_path / "labels.idx"
    lbl.write_bytes(_idx_labels_bytes([1, 2]))
    with pytest.raises(FormatError, match="count mismatch"):
        load_mnist(str(img), str(lbl))


# ---------------------------------------------------------------------------
# MNIST task
# ---------------------------------------------------------------------------


def _toy_mnist(n=40):
    rng = np.random.default_rng(0)
    images = rng.random((n, 28, 28)).astype(np.float32)
    labels = (np.arange(n) % 10).astype(np.int64)
    return MnistBatch(images=images, labels=labels)


def test_mnist_task_perfect_logits_give_full_reward():
    task = MnistTask(_toy_mnist(), batch_size=32)
    state = task.reset(split(new_key(14), 2), 3)
    assert state.obs.shape == (3, 2, 32, 28, 28)
    labels = state.extra.labels
    logits = np.zeros((3, 2, 32, 10), dtype=np.float32)
    for j in range(2):
        for k in range(32):
            logits[:, j, k, labels[j, k]] = 1.0
    out = task.step(state, logits)
    assert np.all(out.reward == 1.0)
    assert out.done.all()


def test_mnist_task_zero_logits_reward_is_class0_frequency():
    task = MnistTask(_toy_mnist(), batch_size=16)
    state = task.reset([new_key(15)], 2)
    out = task.step(state, np.zeros((2, 1, 16, 10), dtype=np.float32))
    freq0 = (state.extra.labels[0] == 0).mean()
    assert np.allclose(out.reward, freq0)
    assert np.all(out.reward >= 0.0) and np.all(out.reward <= 1.0)


def test_mnist_task_lanes_shared_across_population():
    task = MnistTask(_toy_mnist(), batch_size=8)
    state = task.reset(split(new_key(16), 2), 5)
    assert state.obs.strides[0] == 0  # broadcast view: no per-member copy
    for i in range(5):
        assert np.array_equal(state.obs[i], state.obs[0])


# ---------------------------------------------------------------------------
# addition task
# ---------------------------------------------------------------------------


def test_make_addition_batch_hand_examples():
    # encode 12+34 and check the exact token layout
    q, a = make_addition_batch(new_key(17), 2, 5)
    assert q.shape == (5, 6) and a.shape == (5, 3)
    for row_q, row_a in zip(q, a):
        left = row_q[0] * 10 + row_q[1]
        right = row_q[3] * 10 + row_q[4]
        assert row_q[2] == 10 and row_q[5] == 11  # '+' and '='
        total = row_a[0] * 100 + row_a[1] * 10 + row_a[2]
        assert total == left + right


def test_addition_token_encoding_examples():
    from evokit.tasks.addition import _to_digits

    assert np.array_equal(_to_digits(np.array([46]), 3), [[0, 4, 6]])
    assert np.array_equal(_to_digits(np.array([198]), 3), [[1, 9, 8]])
    assert np.array_equal(_to_digits(np.array([0]), 3), [[0, 0, 0]])


def test_addition_batch_deterministic():
    q1, a1 = make_addition_batch(new_key(18), 2, 7)
    q2, a2 = make_addition_batch(new_key(18), 2, 7)
    assert np.array_equal(q1, q2) and np.array_equal(a1, a2)


def test_addition_rejects_bad_digits():
    with pytest.raises(ValueError):
        make_addition_batch(new_key(0), 0, 4)


def test_addition_task_train_reward_is_token_accuracy():
    task = AdditionTask(digits=2, batch_size=4)
    state = task.reset([new_key(19)], 2)
    answers = state.extra.answers  # 1 x 4 x 3
    perfect = np.broadcast_to(answers[None].astype(np.float32), (2, 1, 4, 3)).copy()
    out = task.step(state, perfect)
    assert np.all(out.reward == 1.0)
    # corrupt one token of one problem for member 0: 11 of 12 tokens right
    wrong = perfect.copy()
    wrong[0, 0, 0, 0] = (wrong[0, 0, 0, 0] + 1) % 10
    out = task.step(state, wrong)
    assert np.isclose(out.reward[0, 0], 11.0 / 12.0)
    assert np.all(out.reward[1] == 1.0)


def test_addition_task_test_reward_is_exact_match():
    task = AdditionTask(digits=2, batch_size=4, test=True)
    state = task.reset([new_key(20)], 1)
    answers = state.extra.answers
    pred = np.broadcast_to(answers[None].astype(np.float32), (1, 1, 4, 3)).copy()
    pred[0, 0, 2, 1] = (pred[0, 0, 2, 1] + 1) % 10  # one sequence wrong
    out = task.step(state, pred)
    assert np.isclose(out.reward[0, 0], 3.0 / 4.0)


# ---------------------------------------------------------------------------
# paint
# ---------------------------------------------------------------------------


def test_render_all_alpha_zero_is_white():
    genome = np.zeros(500, dtype=np.float32)
    genome[0::10] = 0.5  # random-ish vertices, alpha stays 0
    img = render_triangles(genome, 16, 16)
    assert np.array_equal(img, np.ones((16, 16, 3), dtype=np.float32))


def test_render_opaque_triangle_paints_exactly():
    # one huge opaque black triangle covering the whole canvas
    genome = np.zeros(10, dtype=np.float32)
    genome[0:6] = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0]
    genome[9] = 1.0  # alpha
    # vertices (0,0), (w,0), (0,h) cover only the upper-left half; use a
    # second check with a triangle big enough for full coverage
    big = np.zeros(10, dtype=np.float32)
    big[0:6] = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0]
    big[9] = 1.0
    img = render_triangles(genome, 8, 8)
    # half-plane membership at pixel centers: the diagonal half is black
    assert img[0, 0].tolist() == [0.0, 0.0, 0.0]
    assert img[7, 7].tolist() == [1.0, 1.0, 1.0]


def test_render_pixels_stay_in_range():
    genome = uniform(new_key(21), (500,), 0.0, 1.0)
    img = render_triangles(genome, 32, 32)
    assert np.all(img >= 0.0) and np.all(img <= 1.0)


def test_render_degenerate_triangle_is_noop():
    genome = np.zeros(10, dtype=np.float32)
    genome[0:6] = [0.5, 0.5, 0.5, 0.5, 0.5, 0.5]  # zero area
    genome[6:10] = [0.0, 0.0, 0.0, 1.0]
    img = render_triangles(genome, 8, 8)
    assert np.array_equal(img, np.ones((8, 8, 3), dtype=np.float32))


def test_paint_task_fitness_is_negative_mse_with_loop_oracle():
    target = uniform(new_key(22), (8, 8, 3), 0.0, 1.0)
    task = PaintTask(target, n_triangles=3)
    state = task.reset([new_key(23)], 2)
    genomes = uniform(new_key(24), (2, 1, 30), 0.0, 1.0)
    out = task.step(state, genomes)
    assert out.done.all()
    for i in range(2):
        img = render_triangles(genomes[i, 0], 8, 8)
        # independent scalar-loop MSE oracle
        total = 0.0
        for y in range(8):
            for x in range(8):
                for ch in range(3):
                    diff = float(img[y, x, ch]) - float(target[y, x, ch])
                    total += diff * diff
        mse = total / (8 * 8 * 3)
        assert np.isclose(out.reward[i, 0], -mse, rtol=1e-5)


def test_paint_all_alpha_zero_fitness_is_white_mse():
    target = np.zeros((4, 4, 3), dtype=np.float32)
    task = PaintTask(target, n_triangles=2)
    state = task.reset([new_key(25)], 1)
    out = task.step(state, np.zeros((1, 1, 20), dtype=np.float32))
    assert np.isclose(out.reward[0, 0], -1.0)  # white canvas vs black target


# ---------------------------------------------------------------------------
# sphere
# ---------------------------------------------------------------------------


def test_sphere_task_rewards_distance():
    task = SphereTask(dim=3, center=np.array([1.0, 0.0, -1.0], dtype=np.float32))
    state = task.reset([new_key(26)], 2)
    actions = np.zeros((2, 1, 3), dtype=np.float32)
    actions[1, 0] = [1.0, 0.0, -1.0]
    out = task.step(state, actions)
    assert np.isclose(out.reward[0, 0], -2.0)
    assert out.reward[1, 0] == 0.0
    assert out.done.all()
