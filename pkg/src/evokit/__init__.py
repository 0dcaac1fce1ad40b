"""evokit: a multi-core neuroevolution toolkit.

Three components wired by a trainer: an ask/tell algorithm (PGPE with
ClipUp by default), batched policy networks, and vectorized tasks whose
states carry explicit population and repeat axes. All randomness flows
through splittable counter-based keys, so training runs are reproducible
bit-for-bit across worker counts.
"""

from .algo import PGPE, PgpeConfig, RandomSearch
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .core import (
    FormatError,
    NEAlgorithm,
    PolicyNetwork,
    ProtocolError,
    StepResult,
    TaskState,
    PolicyState,
    VectorizedTask,
    batched_matmul,
)
from .rng import Key, fold_in, new_key, normal, split, uniform
from .trainer import (
    EvalPool,
    LogRecord,
    TrainerConfig,
    evaluate_population,
    keys_for_iteration,
    run_rollout,
    run_training,
    fixed_test_keys,
)

__version__ = "0.1.0"

__all__ = [
    "Key",
    "new_key",
    "split",
    "fold_in",
    "uniform",
    "normal",
    "TaskState",
    "PolicyState",
    "StepResult",
    "NEAlgorithm",
    "PolicyNetwork",
    "VectorizedTask",
    "ProtocolError",
    "FormatError",
    "batched_matmul",
    "PGPE",
    "PgpeConfig",
    "RandomSearch",
    "TrainerConfig",
    "LogRecord",
    "EvalPool",
    "run_training",
    "run_rollout",
    "evaluate_population",
    "keys_for_iteration",
    "fixed_test_keys",
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint",
    "__version__",
]
