"""Parameters-as-actions policy.

Used by tasks whose genome is the solution itself (shape painting, the
synthetic quadratic task): each member's action is simply its parameter
row, repeated over the lane axis.
"""

from __future__ import annotations

import numpy as np

from ..core import PolicyNetwork, PolicyState, TaskState

__all__ = ["IdentityPolicy"]


class IdentityPolicy(PolicyNetwork):
    def __init__(self, dim: int):
        self.num_params = int(dim)

    def get_actions(self, t_state: TaskState, params, p_state: PolicyState):
        params = np.asarray(params, dtype=np.float32)
        if params.ndim != 2 or params.shape[1] != self.num_params:
            raise ValueError(f"params shape {params.shape} != (P, {self.num_params})")
        p, b = t_state.obs.shape[:2]
        if params.shape[0] != p:
            raise ValueError(f"obs population axis {p} != params rows {params.shape[0]}")
        actions = np.broadcast_to(params[:, None, :], (p, b, self.num_params))
        return actions, p_state
