"""Command-line front end.

Commands:
  train <config>                         run training per the config file
  test <config> <checkpoint>             evaluate a checkpoint, print mean score
  render <checkpoint> <task> <seed> <outdir>   export rollout frames as PPM

Every failure prints a single ``error: ...`` line to stderr and exits
nonzero. The NE_WORKERS environment variable overrides the evaluation
worker count (default: logical cores).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .checkpoint import load_checkpoint
from .config import build_algorithm, build_policy, build_task, parse_config
from .policies import IdentityPolicy, MLPPolicy
from .render import render_cartpole_frame, render_waterworld_frame, write_ppm
from .rng import new_key
from .tasks import CartPoleSwingUp, WaterWorld
from .tasks.paint import TRIANGLE_PARAMS, render_triangles
from .trainer import run_rollout, run_training, fixed_test_keys

RENDERABLE_TASKS = ("cartpole_easy", "cartpole_hard", "waterworld", "waterworld_ma", "paint")

_RENDER_AGENTS = 16  # population tiled from the checkpoint center in multi-agent mode
_PAINT_RENDER_SIZE = 128


def cmd_train(config_path: str) -> int:
    parsed = parse_config(config_path)
    task = build_task(parsed, test=False)
    test_task = build_task(parsed, test=True)
    policy = build_policy(parsed, task)
    algo = build_algorithm(parsed, policy.num_params)
    score = run_training(
        parsed.trainer, algo, policy, task, test_task, header_lines=parsed.echo_lines
    )
    print(f"final test score: {score!r}")
    return 0


def cmd_test(config_path: str, checkpoint_path: str) -> int:
    parsed = parse_config(config_path)
    task = build_task(parsed, test=True)
    policy = build_policy(parsed, task)
    ckpt = load_checkpoint(checkpoint_path)
    if ckpt.params.size != policy.num_params:
        raise ValueError(
            f"checkpoint has {ckpt.params.size} parameters but the configured "
            f"policy needs {policy.num_params}"
        )
    keys = fixed_test_keys(new_key(parsed.trainer.seed), parsed.trainer.n_test_rollouts)
    if task.multi_agent:
        params = np.tile(ckpt.params[None, :], (parsed.trainer.pop_size, 1))
        score = float(run_rollout(task, policy, params, keys).mean())
    else:
        score = float(run_rollout(task, policy, ckpt.params[None, :], keys)[0])
    print(f"mean test score: {score!r}")
    return 0


def _render_setup(task_name: str, params: np.ndarray):
    if task_name in ("cartpole_easy", "cartpole_hard"):
        task = CartPoleSwingUp(hard=task_name.endswith("hard"))
        policy = MLPPolicy([task.obs_dim, 64, 64, task.act_dim])
    elif task_name == "waterworld":
        task = WaterWorld()
        policy = MLPPolicy([task.obs_dim, 64, 64, task.act_dim])
    elif task_name == "waterworld_ma":
        task = WaterWorld(multi_agent=True, n_agents=_RENDER_AGENTS)
        policy = MLPPolicy([task.obs_dim, 64, 64, task.act_dim])
    else:
        raise AssertionError(task_name)
    if params.size != policy.num_params:
        raise ValueError(
            f"checkpoint has {params.size} parameters but the default {task_name} "
            f"policy needs {policy.num_params}"
        )
    return task, policy


def cmd_render(checkpoint_path: str, task_name: str, key_seed: int, out_dir: str) -> int:
    if task_name not in RENDERABLE_TASKS:
        raise ValueError(
            f"task {task_name!r} is not renderable; renderable tasks: "
            + ", ".join(RENDERABLE_TASKS)
        )
    ckpt = load_checkpoint(checkpoint_path)
    os.makedirs(out_dir, exist_ok=True)

    if task_name == "paint":
        if ckpt.params.size % TRIANGLE_PARAMS != 0:
            raise ValueError(
                f"paint checkpoint size {ckpt.params.size} is not a multiple of {TRIANGLE_PARAMS}"
            )
        image = render_triangles(ckpt.params, _PAINT_RENDER_SIZE, _PAINT_RENDER_SIZE)
        write_ppm(os.path.join(out_dir, "frame_000001.ppm"), image)
        print(f"wrote 1 frame to {out_dir}")
        return 0

    task, policy = _render_setup(task_name, ckpt.params)
    multi = task.multi_agent
    pop = _RENDER_AGENTS if multi else 1
    params = np.tile(ckpt.params[None, :], (pop, 1))
    keys = [new_key(key_seed)]
    state = task.reset(keys, pop)
    p_state = policy.reset(state)
    n_frames = 0
    for _ in range(task.max_steps):
        actions, p_state = policy.get_actions(state, params, p_state)
        state, _, done = task.step(state, actions)
        n_frames += 1
        frame_path = os.path.join(out_dir, f"frame_{n_frames:06d}.ppm")
        if task_name.startswith("cartpole"):
            frame = render_cartpole_frame(state.extra)
        else:
            frame = render_waterworld_frame(state.extra, task.n_food, multi_agent=multi)
        write_ppm(frame_path, frame)
        if done.all():
            break
    print(f"wrote {n_frames} frames to {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="evokit", description="Neuroevolution toolkit CLI")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="run training from a config file")
    p_train.add_argument("config")

    p_test = sub.add_parser("test", help="evaluate a checkpoint on the test keys")
    p_test.add_argument("config")
    p_test.add_argument("checkpoint")

    p_render = sub.add_parser("render", help="roll out a checkpoint and write PPM frames")
    p_render.add_argument("checkpoint")
    p_render.add_argument("task")
    p_render.add_argument("seed", type=int)
    p_render.add_argument("outdir")

    args = parser.parse_args(argv)
    try:
        if args.command == "train":
            return cmd_train(args.config)
        if args.command == "test":
            return cmd_test(args.config, args.checkpoint)
        if args.command == "render":
            return cmd_render(args.checkpoint, args.task, args.seed, args.outdir)
        raise AssertionError(args.command)
    except Exception as exc:  # noqa: BLE001 - single error line, nonzero exit
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
