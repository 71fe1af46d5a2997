"""Backward induction for the weighted last-success problem."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import IndexOutOfRange, Number, ProblemInstance, gt


class Decision(str, enum.Enum):
    STOP = "STOP"
    CONTINUE = "CONTINUE"


@dataclass(frozen=True)
class DpSolution:
    """Value functions and optimal stopping set of one instance.

    ``e_stop`` and ``e_keep`` both have length n+1 and are indexed 1-based.
    ``e_stop[0]`` is 0 (stopping "at 0" pays the auxiliary ``w_0 = 0``);
    ``e_keep[0]`` is the optimal expected profit.
    """

    e_stop: tuple[Number, ...]
    e_keep: tuple[Number, ...]
    stopping_set: tuple[int, ...]
    exact: bool = True

    @property
    def n(self) -> int:
        return len(self.e_stop) - 1

    @property
    def expected_profit(self) -> Number:
        return self.e_keep[0]

    @property
    def threshold(self) -> int:
        """Smallest index of the stopping set (never empty: n is always in it)."""
        return self.stopping_set[0]

    def is_suffix(self) -> bool:
        return self.stopping_set == tuple(range(self.threshold, self.n + 1))


def e_stop(inst: ProblemInstance, k: int) -> Number:
    """Expected payoff of stopping on a success at k: ``w_k * prod_{i>k}(1-p_i)``."""
    if not 1 <= k <= inst.n:
        raise IndexOutOfRange(f"index {k} outside 1..{inst.n}")
    return inst.payoff(k) * inst.survival_product(k + 1, inst.n)


def solve(inst: ProblemInstance) -> DpSolution:
    n = inst.n
    stop = [inst.zero] + [e_stop(inst, k) for k in range(1, n + 1)]
    keep = [inst.zero] * (n + 1)
    # The next trial is k+1 in both branches, so the weights are
    # p_{k+1} and 1 - p_{k+1}.
    for k in range(n - 1, -1, -1):
        p_next = inst.p[k]
        keep[k] = p_next * max(stop[k + 1], keep[k + 1]) + (1 - p_next) * keep[k + 1]
    stopping = tuple(k for k in range(1, n + 1) if gt(stop[k], keep[k], inst.exact))
    return DpSolution(tuple(stop), tuple(keep), stopping, inst.exact)


def advise(sol: DpSolution, k: int, observed_success: bool) -> Decision:
    if not 1 <= k <= sol.n:
        raise IndexOutOfRange(f"index {k} outside 1..{sol.n}")
    if observed_success and k in sol.stopping_set:
        return Decision.STOP
    return Decision.CONTINUE
