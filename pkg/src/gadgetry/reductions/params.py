"""Construction constants for the timed reductions.

The two-player and team compilers rely on delay lines and timers whose
lengths are fixed closed-form functions of the instance size.  This
module computes those constants in one place so the compilers, their
audits, and the tests all agree on the numbers.

``scale_factor`` divides the pure delay lengths (never the structural
counts such as forks per branch).  A factor above 1 keeps the tempo
margins but shrinks the systems enough to solve outright; the result is
flagged non-faithful because the adversarial timing arguments are only
proved at full length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping

from ..errors import PreconditionViolated


def _scaled(value: int, factor: int) -> int:
    if factor == 1 or value == 0:
        return value
    return max(1, value // factor)


@dataclass(frozen=True)
class ReductionParams:
    """Named construction constants of one compiled system.

    ``constants`` holds the full-size closed forms; ``scaled`` holds the
    values actually used to build (equal when ``scale_factor`` is 1).
    """

    problem: str
    constants: Mapping[str, int]
    scaled: Mapping[str, int]
    scale_factor: int = 1

    @property
    def faithful(self) -> bool:
        return self.scale_factor == 1

    def as_dict(self) -> Dict[str, object]:
        return {
            "problem": self.problem,
            "constants": dict(self.constants),
            "scaled": dict(self.scaled),
            "scale_factor": self.scale_factor,
            "faithful": self.faithful,
        }

    @staticmethod
    def _check_factor(scale_factor: int) -> None:
        if scale_factor < 1:
            raise PreconditionViolated("scale_factor must be at least 1")

    @classmethod
    def for_2cl(cls, num_edges: int, scale_factor: int = 1) -> "ReductionParams":
        """Timer repetitions for the two-player constraint-graph game.

        With n edges the black timer runs n+6 stages and the white
        timer 2n+12; each stage multiplies the minimal traversal count
        by 3 and adds 6, so the white budget squares the black one.
        """
        cls._check_factor(scale_factor)
        n = num_edges
        constants = {"n": n, "t_black": n + 6, "t_white": 2 * n + 12,
                     "delay_line": 4}
        scaled = dict(constants)
        scaled["t_black"] = _scaled(constants["t_black"], scale_factor)
        scaled["t_white"] = _scaled(constants["t_white"], scale_factor)
        return cls("2cl", constants, scaled, scale_factor)

    @classmethod
    def for_qbf(cls, num_vars: int, num_clauses: int,
                scale_factor: int = 1) -> "ReductionParams":
        """Delay lengths for the two-player formula game.

        Every clause branch is padded with ``fork_delay`` single-use
        paths on each side of its fork, so crossing one clause takes
        ``clause_cross`` moves; the losing player's consolation path is
        two moves longer than crossing every clause.
        """
        cls._check_factor(scale_factor)
        V, C = num_vars, num_clauses
        fork_delay = 9 * C + 3 * V
        cross = 2 * fork_delay + 1
        constants = {
            "V": V,
            "C": C,
            "fork_delay": fork_delay,
            "clause_cross": cross,
            "white_win": C * cross,
            "black_path": C * cross + 2,
        }
        d = _scaled(fork_delay, scale_factor)
        scaled_cross = 2 * d + 1
        scaled = {
            "V": V,
            "C": C,
            "fork_delay": d,
            "clause_cross": scaled_cross,
            "white_win": C * scaled_cross,
            "black_path": C * scaled_cross + 2,
        }
        return cls("qbf", constants, scaled, scale_factor)

    @classmethod
    def for_dqbf(cls, x1: int, x2: int, y1: int, y2: int, num_clauses: int,
                 scale_factor: int = 1) -> "ReductionParams":
        """Delay lengths for the three-robot team game.

        ``k`` is the move count to traverse one variable gadget (C
        forks per branch); the five delays stagger the three robots so
        each variable block is walked by exactly the right pair.
        """
        cls._check_factor(scale_factor)
        C = num_clauses
        V = x1 + x2 + y1 + y2
        k = 3 * C + 1
        constants = {
            "x1": x1, "x2": x2, "y1": y1, "y2": y2, "V": V, "C": C,
            "k": k,
            "d1": x1 * k + 1,
            "d2": max(0, x2 * k - 1),
            "d3": y1 * k,
            "d4": y2 * k,
            "clause_delay": V * k,
            "clause_cross": 6 * V * k + 1,
            "d5": C * (6 * V * k + 1) + 1,
        }
        scaled = dict(constants)
        for key in ("d1", "d2", "d3", "d4", "clause_delay"):
            scaled[key] = _scaled(constants[key], scale_factor)
        scaled["clause_cross"] = 6 * scaled["clause_delay"] + 1
        scaled["d5"] = C * scaled["clause_cross"] + 1
        return cls("dqbf", constants, scaled, scale_factor)
