"""Deciding whether the optimal rule is a threshold rule.

A problem is *monotone* when its optimal stopping set is a contiguous
suffix ``{k*, ..., n}``.  The DP stopping set is the ground truth; the cheaper
criteria here only ever certify, they never refute.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import EPS_CMP, IndexOutOfRange, Number, ProblemInstance
from .dp import DpSolution, e_stop


class Certificate(str, enum.Enum):
    SUFFICIENT_PAYOFF_CONDITION = "SufficientPayoffCondition"
    SIGN_CHANGE_AT_MOST_ONCE = "SignChangeAtMostOnce"
    DP_SUFFIX_CHECK = "DpSuffixCheck"
    NOT_MONOTONE = "NotMonotone"


@dataclass(frozen=True)
class MonotonicityVerdict:
    monotone: bool
    certificate: Certificate
    # (first gap after the threshold, next stopping index after the gap)
    witness: tuple[int, int] | None = None


def ebar_keep_table(inst: ProblemInstance) -> list[Number]:
    """Values of "stop at the next success after k", for k = 0..n."""
    n = inst.n
    out = [inst.zero] * (n + 1)
    for k in range(n - 1, -1, -1):
        p_next = inst.p[k]
        out[k] = p_next * e_stop(inst, k + 1) + (1 - p_next) * out[k + 1]
    return out


def ebar_keep(inst: ProblemInstance, k: int) -> Number:
    if not 0 <= k <= inst.n:
        raise IndexOutOfRange(f"index {k} outside 0..{inst.n}")
    return ebar_keep_table(inst)[k]


def sufficient_condition(inst: ProblemInstance) -> bool:
    """``w_{k+1} >= (1 - p_{k+1}) w_k`` for every k < n."""
    return all(
        inst.payoff(k + 1) >= (1 - inst.prob(k + 1)) * inst.payoff(k)
        for k in range(1, inst.n)
    )


def myopic_differences(inst: ProblemInstance) -> list[Number]:
    """``e_stop(k) - ebar_keep(k)`` for k = 1..n (list index k-1)."""
    ebar = ebar_keep_table(inst)
    return [e_stop(inst, k) - ebar[k] for k in range(1, inst.n + 1)]


def _signs(diffs: list[Number], exact: bool) -> list[bool]:
    # ties (and float noise below EPS_CMP) count as "continue"
    if exact:
        return [d > 0 for d in diffs]
    return [d > 0 and abs(d) >= EPS_CMP for d in diffs]


def sign_changes(inst: ProblemInstance) -> int:
    signs = _signs(myopic_differences(inst), inst.exact)
    return sum(a != b for a, b in zip(signs, signs[1:]))


def certify(inst: ProblemInstance, sol: DpSolution) -> MonotonicityVerdict:
    """Classify the instance; ``sol`` must be ``solve(inst)``."""
    stopping = sol.stopping_set
    if not sol.is_suffix():
        members = set(stopping)
        gap = next(k for k in range(stopping[0], sol.n + 1) if k not in members)
        after = next(k for k in stopping if k > gap)
        return MonotonicityVerdict(False, Certificate.NOT_MONOTONE, (gap, after))
    if sufficient_condition(inst):
        return MonotonicityVerdict(True, Certificate.SUFFICIENT_PAYOFF_CONDITION)
    if sign_changes(inst) <= 1:
        return MonotonicityVerdict(True, Certificate.SIGN_CHANGE_AT_MOST_ONCE)
    return MonotonicityVerdict(True, Certificate.DP_SUFFIX_CHECK)
