from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class OpenMode(str, enum.Enum):
    NONE = "none"
    TWO = "two"  # bool open flag, separate boundary test
    TRI = "tri"  # 0 boundary / 1 closed / 2 open in one byte


class StopRule(str, enum.Enum):
    """When the D-iteration stops.

    ``MOVED``: stop after a cycle in which no diffusion moved ``epsilon`` or
    more into the history vector. This is the Gauss-Seidel max-change test
    applied to H, and is what reproduces the published cycle counts.

    ``DRAINED``: stop after a cycle with no diffusion at all, so every Free
    cell ends with ``F <= epsilon / delta``. Identical to ``MOVED`` at
    ``delta == 1``.
    """

    MOVED = "moved"
    DRAINED = "drained"


@dataclass(frozen=True)
class SolveConfig:
    epsilon: float = 0.1
    delta: float = 4.0
    open_mode: OpenMode = OpenMode.NONE
    max_cycles: int = 100_000
    stop_rule: StopRule = StopRule.MOVED

    def __post_init__(self):
        object.__setattr__(self, "open_mode", OpenMode(self.open_mode))
        object.__setattr__(self, "stop_rule", StopRule(self.stop_rule))
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.delta >= 1:
            raise ValueError(f"delta must be >= 1, got {self.delta}")
        if self.max_cycles < 1:
            raise ValueError(f"max_cycles must be >= 1, got {self.max_cycles}")

    @property
    def threshold(self) -> float:
        return self.epsilon / self.delta


@dataclass
class SolveReport:
    method: str
    cycles: int
    op_count: int
    dc_tests: int
    per_y_ops: np.ndarray = field(repr=False)
    final_field: np.ndarray = field(repr=False)
    wall_time: float
    converged: bool
    # DC tests per cycle; shows how much work the open gate skips
    dc_tests_per_cycle: list[int] = field(default_factory=list, repr=False)
