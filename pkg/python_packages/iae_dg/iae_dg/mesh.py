""" uniform partitions of [0, T] into half-open intervals (t_n, t_n+1]
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

# times this many ulps of T away from a node are taken as the node
NODE_ULPS = 4


class MeshError(ValueError):
    """A mesh was requested with bad parameters, or evaluated outside [0, T]"""


@dataclass(frozen=True)
class Mesh:
    T: float
    N: int

    def __post_init__(self):
        if not self.T > 0:
            raise MeshError(f"T must be positive, not {self.T}")
        if int(self.N) != self.N or self.N < 2:
            raise MeshError(f"at least 2 intervals are needed, not {self.N}")

    @property
    def h(self) -> float:
        return self.step()

    def step(self, dtype=float):
        return dtype(self.T) / self.N

    def node(self, n, dtype=float):
        # T * n / N keeps t_N == T exactly
        return dtype(self.T) * n / self.N

    @property
    def nodes(self) -> np.ndarray:
        return self.T * np.arange(self.N + 1) / self.N

    def locate(self, t) -> Tuple[np.ndarray, np.ndarray]:
        """interval index n and local coordinate s with t = t_n + s h

        Nodes belong to the interval on their left (s = 1); t = 0 is taken
        from the first interval at s = 0. Times within a few ulps of a node
        count as that node.
        """
        t = np.asarray(t, dtype=float)
        tol = NODE_ULPS * np.spacing(self.T)
        if np.any(t < -tol) or np.any(t > self.T + tol):
            raise MeshError(f"evaluation outside [0, {self.T}]")
        nodes = self.nodes
        k = np.clip(np.rint(t / self.h).astype(int), 0, self.N)
        on_node = np.abs(t - nodes[k]) <= tol

        n = np.clip(np.searchsorted(nodes, t, side="left") - 1, 0, self.N - 1)
        n = np.where(on_node, np.maximum(k - 1, 0), n)
        s = np.clip((t - nodes[n]) / self.h, 0.0, 1.0)
        s = np.where(on_node, np.where(k == 0, 0.0, 1.0), s)
        return n, s
