from .optimizers import Adam, AdamState, ClipUp, Sgd, adam_step, clipup_step
from .pgpe import PGPE, PgpeConfig, RandomSearch, centered_ranks, pgpe_gradients

__all__ = [
    "PGPE",
    "PgpeConfig",
    "RandomSearch",
    "centered_ranks",
    "pgpe_gradients",
    "clipup_step",
    "adam_step",
    "AdamState",
    "ClipUp",
    "Adam",
    "Sgd",
]
