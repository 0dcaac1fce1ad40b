"""Config-file parsing and component construction.

The format is plain UTF-8 text with ``#`` comments, four sections
(``[trainer]``, ``[algorithm]``, ``[policy]``, ``[task]``) and
``key = value`` lines. Keys are case-sensitive; unknown keys, duplicate
keys and type mismatches are rejected with the offending line numbers.
Optional keys take documented defaults, and the fully resolved
configuration is echoed into the training log header.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algo import PGPE, PgpeConfig, RandomSearch
from .core import NEAlgorithm, PolicyNetwork, VectorizedTask
from .policies import ConvNetPolicy, IdentityPolicy, LSTMPolicy, MLPPolicy, Seq2SeqPolicy
from .render import read_ppm
from .tasks import AdditionTask, CartPoleSwingUp, MnistTask, PaintTask, SphereTask, WaterWorld
from .tasks.mnist import MnistBatch, load_mnist
from .trainer import TrainerConfig

__all__ = ["ConfigError", "ParsedConfig", "parse_config", "build_task", "build_policy", "build_algorithm"]

_SECTIONS = ("trainer", "algorithm", "policy", "task")

TASK_NAMES = (
    "cartpole_easy",
    "cartpole_hard",
    "waterworld",
    "waterworld_ma",
    "mnist",
    "addition",
    "paint",
    "sphere",
)

# Default policy for each task when [policy] gives no name.
DEFAULT_POLICY = {
    "cartpole_easy": "mlp",
    "cartpole_hard": "mlp",
    "waterworld": "mlp",
    "waterworld_ma": "mlp",
    "mnist": "convnet",
    "addition": "seq2seq",
    "paint": "identity",
    "sphere": "identity",
}


class ConfigError(ValueError):
    """Invalid configuration file; message carries section/key/line detail."""


@dataclass
class ParsedConfig:
    trainer: TrainerConfig
    algorithm: dict
    policy: dict
    task: dict
    echo_lines: list[str] = field(default_factory=list)


def _read_sections(path: str) -> dict[str, dict[str, tuple[str, int]]]:
    with open(path, "r", encoding="utf-8") as f:
        lines = f.readlines()
    data: dict[str, dict[str, tuple[str, int]]] = {s: {} for s in _SECTIONS}
    current: str | None = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {line!r}")
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(
                    f"line {lineno}: unknown section [{name}]; expected one of "
                    + ", ".join(f"[{s}]" for s in _SECTIONS)
                )
            current = name
            continue
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any section")
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in data[current]:
            first_line = data[current][key][1]
            raise ConfigError(
                f"duplicate key {key!r} in [{current}] (lines {first_line} and {lineno})"
            )
        data[current][key] = (value, lineno)
    return data


def _convert(section: str, key: str, value: str, lineno: int, kind: str):
    try:
        if kind == "int":
            return int(value, 0)
        if kind == "float":
            return float(value)
        if kind == "str":
            return value
        if kind == "int_list":
            return [int(part.strip()) for part in value.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(
            f"[{section}] {key} (line {lineno}): expected {kind}, got {value!r}"
        ) from None
    raise AssertionError(kind)


def _apply_schema(
    section: str, raw: dict[str, tuple[str, int]], schema: dict[str, tuple[str, object]]
) -> dict:
    out = {}
    for key, (value, lineno) in raw.items():
        if key not in schema:
            known = ", ".join(sorted(schema))
            raise ConfigError(
                f"unknown key {key!r} in [{section}] (line {lineno}); known keys: {known}"
            )
        out[key] = _convert(section, key, value, lineno, schema[key][0])
    for key, (_, default) in schema.items():
        out.setdefault(key, default)
    return out


_TRAINER_SCHEMA = {
    "seed": ("int", None),
    "max_iters": ("int", 100),
    "pop_size": ("int", 64),
    "repeats": ("int", 1),
    "test_interval": ("int", 10),
    "n_test_rollouts": ("int", 16),
    "log_path": ("str", "train_log.csv"),
    "checkpoint_path": ("str", "model.ckpt"),
    "workers": ("int", 0),  # 0 = auto (NE_WORKERS env or logical cores)
}

_ALGO_SCHEMAS = {
    "pgpe": {
        "name": ("str", "pgpe"),
        "sigma_init": ("float", 0.1),
        "center_lr": ("float", 0.05),
        "sigma_lr": ("float", 0.03),
        "max_speed": ("float", 0.1),
        "momentum": ("float", 0.5),
        "sigma_max_change": ("float", 0.2),
        "shaping": ("str", "centered_rank"),
        "optimizer": ("str", "clipup"),
    },
    "random_search": {
        "name": ("str", "random_search"),
        "sigma_init": ("float", 0.1),
    },
}

_POLICY_SCHEMAS = {
    "mlp": {
        "name": ("str", "mlp"),
        "hidden_sizes": ("int_list", [64, 64]),
        "output_activation": ("str", "tanh"),
    },
    "lstm": {
        "name": ("str", "lstm"),
        "hidden_size": ("int", 64),
    },
    "convnet": {"name": ("str", "convnet")},
    "seq2seq": {
        "name": ("str", "seq2seq"),
        "hidden_size": ("int", 64),
    },
    "identity": {"name": ("str", "identity")},
}

_TASK_SCHEMAS = {
    "cartpole_easy": {"name": ("str", None)},
    "cartpole_hard": {"name": ("str", None)},
    "waterworld": {
        "name": ("str", None),
        "food_items": ("int", 20),
        "poison_items": ("int", 10),
    },
    "waterworld_ma": {
        "name": ("str", None),
        "food_items": ("int", 20),
        "poison_items": ("int", 10),
    },
    "mnist": {
        "name": ("str", None),
        "train_images": ("str", None),
        "train_labels": ("str", None),
        "test_images": ("str", None),
        "test_labels": ("str", None),
        "batch_size": ("int", 1024),
        "train_subset": ("int", 10000),
    },
    "addition": {
        "name": ("str", None),
        "digits": ("int", 2),
        "batch_size": ("int", 128),
    },
    "paint": {
        "name": ("str", None),
        "target": ("str", None),
        "triangles": ("int", 50),
    },
    "sphere": {
        "name": ("str", None),
        "dim": ("int", 100),
        "center": ("float", 0.0),
    },
}


def _resolve_name(section: str, raw: dict, schemas: dict, default: str | None) -> str:
    if "name" in raw:
        name = raw["name"][0]
    elif default is not None:
        name = default
    else:
        raise ConfigError(f"[{section}] name is required")
    if name not in schemas:
        known = ", ".join(sorted(schemas))
        raise ConfigError(f"[{section}] name: unknown value {name!r}; known: {known}")
    return name


def parse_config(path: str) -> ParsedConfig:
    """Parse and fully validate a config file; defaults applied."""
    raw = _read_sections(path)

    trainer_vals = _apply_schema("trainer", raw["trainer"], _TRAINER_SCHEMA)
    if trainer_vals["seed"] is None:
        raise ConfigError("[trainer] seed is required")

    task_name = _resolve_name("task", raw["task"], _TASK_SCHEMAS, None)
    task_vals = _apply_schema("task", raw["task"], _TASK_SCHEMAS[task_name])

    algo_name = _resolve_name("algorithm", raw["algorithm"], _ALGO_SCHEMAS, "pgpe")
    algo_vals = _apply_schema("algorithm", raw["algorithm"], _ALGO_SCHEMAS[algo_name])

    policy_name = _resolve_name("policy", raw["policy"], _POLICY_SCHEMAS, DEFAULT_POLICY[task_name])
    policy_vals = _apply_schema("policy", raw["policy"], _POLICY_SCHEMAS[policy_name])

    if algo_name == "pgpe" and trainer_vals["pop_size"] % 2 != 0:
        raise ConfigError(
            f"[trainer] pop_size must be even with the pgpe algorithm, got {trainer_vals['pop_size']}"
        )
    if task_name == "mnist":
        for key in ("train_images", "train_labels", "test_images", "test_labels"):
            if task_vals[key] is None:
                raise ConfigError(f"[task] {key} is required for the mnist task")
    if task_name == "paint" and task_vals["target"] is None:
        raise ConfigError("[task] target is required for the paint task")

    trainer = TrainerConfig(
        seed=trainer_vals["seed"],
        max_iters=trainer_vals["max_iters"],
        pop_size=trainer_vals["pop_size"],
        repeats=trainer_vals["repeats"],
        test_interval=trainer_vals["test_interval"],
        n_test_rollouts=trainer_vals["n_test_rollouts"],
        log_path=trainer_vals["log_path"],
        checkpoint_path=trainer_vals["checkpoint_path"],
        workers=trainer_vals["workers"] if trainer_vals["workers"] > 0 else None,
    )
    try:
        trainer.validate()
    except ValueError as exc:
        raise ConfigError(f"[trainer] {exc}") from None

    echo = []
    for section, vals, schema in (
        ("trainer", trainer_vals, _TRAINER_SCHEMA),
        ("algorithm", algo_vals, _ALGO_SCHEMAS[algo_name]),
        ("policy", policy_vals, _POLICY_SCHEMAS[policy_name]),
        ("task", task_vals, _TASK_SCHEMAS[task_name]),
    ):
        for key in schema:
            echo.append(f"{section}.{key} = {vals[key]}")

    return ParsedConfig(
        trainer=trainer,
        algorithm=algo_vals,
        policy=policy_vals,
        task=task_vals,
        echo_lines=echo,
    )


def build_task(parsed: ParsedConfig, test: bool = False) -> VectorizedTask:
    t = parsed.task
    name = t["name"]
    if name == "cartpole_easy":
        return CartPoleSwingUp(hard=False)
    if name == "cartpole_hard":
        return CartPoleSwingUp(hard=True)
    if name == "waterworld":
        return WaterWorld(n_food=t["food_items"], n_poison=t["poison_items"])
    if name == "waterworld_ma":
        return WaterWorld(
            n_food=t["food_items"],
            n_poison=t["poison_items"],
            multi_agent=True,
            n_agents=parsed.trainer.pop_size,
        )
    if name == "mnist":
        if test:
            data = load_mnist(t["test_images"], t["test_labels"])
        else:
            data = load_mnist(t["train_images"], t["train_labels"])
            subset = t["train_subset"]
            if subset > 0:
                data = MnistBatch(images=data.images[:subset], labels=data.labels[:subset])
        return MnistTask(data, batch_size=t["batch_size"])
    if name == "addition":
        return AdditionTask(digits=t["digits"], batch_size=t["batch_size"], test=test)
    if name == "paint":
        return PaintTask(read_ppm(t["target"]), n_triangles=t["triangles"])
    if name == "sphere":
        return SphereTask(dim=t["dim"], center=t["center"])
    raise ConfigError(f"[task] name: unknown value {name!r}")


def build_policy(parsed: ParsedConfig, task: VectorizedTask) -> PolicyNetwork:
    p = parsed.policy
    name = p["name"]
    if name == "mlp":
        layers = [task.obs_dim] + list(p["hidden_sizes"]) + [task.act_dim]
        return MLPPolicy(layers, output_activation=p["output_activation"])
    if name == "lstm":
        return LSTMPolicy(task.obs_dim, p["hidden_size"], task.act_dim)
    if name == "convnet":
        return ConvNetPolicy()
    if name == "seq2seq":
        if not isinstance(task, AdditionTask):
            raise ConfigError("[policy] seq2seq requires the addition task")
        return Seq2SeqPolicy(answer_len=task.answer_len, hidden_dim=p["hidden_size"])
    if name == "identity":
        return IdentityPolicy(task.act_dim)
    raise ConfigError(f"[policy] name: unknown value {name!r}")


def build_algorithm(parsed: ParsedConfig, num_params: int) -> NEAlgorithm:
    a = parsed.algorithm
    seed = parsed.trainer.seed
    if a["name"] == "pgpe":
        cfg = PgpeConfig(
            pop_size=parsed.trainer.pop_size,
            sigma_init=a["sigma_init"],
            center_lr=a["center_lr"],
            sigma_lr=a["sigma_lr"],
            max_speed=a["max_speed"],
            momentum=a["momentum"],
            sigma_max_change=a["sigma_max_change"],
            shaping=a["shaping"],
            optimizer=a["optimizer"],
        )
        try:
            cfg.validate()
        except ValueError as exc:
            raise ConfigError(f"[algorithm] {exc}") from None
        return PGPE(num_params, cfg, seed=seed)
    if a["name"] == "random_search":
        return RandomSearch(
            num_params,
            pop_size=parsed.trainer.pop_size,
            sigma_init=a["sigma_init"],
            seed=seed,
        )
    raise ConfigError(f"[algorithm] name: unknown value {a['name']!r}")
