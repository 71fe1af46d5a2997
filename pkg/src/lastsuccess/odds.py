"""The odds-sum threshold and its value, weighted and classic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import (
    ExtendedReal,
    IndexOutOfRange,
    LastSuccessError,
    Number,
    ProblemInstance,
    ge,
    odds_ratio,
    validate,
)


class DegenerateProbability(LastSuccessError, ValueError):
    pass


@dataclass(frozen=True)
class OddsResult:
    s: int
    degenerate: bool
    value: Number


def weighted_odds_suffix(inst: ProblemInstance, k: int) -> ExtendedReal:
    """``sum_{j=k}^{n} w_j p_j / (1 - p_j)``; infinite if some ``p_j = 1``."""
    total = ExtendedReal(inst.zero)
    for j in range(k, inst.n + 1):
        total = total + odds_ratio(inst.prob(j)).scale(inst.payoff(j))
    return total


def odds_index(inst: ProblemInstance) -> int:
    """Largest k whose weighted odds suffix sum reaches ``w_{k-1}`` (``w_0 = 0``).

    One backward pass; k = 1 always qualifies, so the scan terminates.
    """
    total = ExtendedReal(inst.zero)
    for k in range(inst.n, 0, -1):
        total = total + odds_ratio(inst.prob(k)).scale(inst.payoff(k))
        if ge(total, inst.payoff(k - 1), inst.exact):
            return k
    raise AssertionError("unreachable: k = 1 always satisfies the condition")


def odds_value(inst: ProblemInstance, s: int) -> Number:
    """Expected payoff of "stop on the first success from s onwards".

    The two usual branches are ``p_s < 1`` (product times odds sum) and
    ``p_s = 1`` (a stop at s is certain).  For an arbitrary s a later
    certain success j is also possible; the rule then always stops by j
    and only the stop at j can pay.
    """
    n = inst.n
    if not 1 <= s <= n:
        raise IndexOutOfRange(f"index {s} outside 1..{n}")
    certain = [j for j in range(s, n + 1) if inst.prob(j) == 1]
    if certain:
        j = certain[-1]
        return (
            inst.survival_product(s, j - 1)
            * inst.payoff(j)
            * inst.survival_product(j + 1, n)
        )
    terms = [inst.payoff(i) * inst.prob(i) / (1 - inst.prob(i)) for i in range(s, n + 1)]
    odds = sum(terms, inst.zero) if inst.exact else math.fsum(terms)
    return inst.survival_product(s, n) * odds


def solve_odds(inst: ProblemInstance) -> OddsResult:
    s = odds_index(inst)
    return OddsResult(s, inst.prob(s) == 1, odds_value(inst, s))


def classic_odds(p: Sequence[object]) -> OddsResult:
    """Bruss's odds theorem for the unweighted problem (all ``p_k < 1``).

    s is the largest k with ``sum_{j>=k} r_j >= 1`` (1 if no such k); the win
    probability is ``prod_{j>=s} q_j * sum_{i>=s} r_i``.
    """
    inst = validate(p, [1] * len(p))
    for k in range(1, inst.n + 1):
        if inst.prob(k) == 1:
            raise DegenerateProbability(f"p[{k}] = 1; use the weighted solver")
    r = [inst.prob(k) / (1 - inst.prob(k)) for k in range(1, inst.n + 1)]

    s, total = 1, inst.zero
    for k in range(inst.n, 0, -1):
        total += r[k - 1]
        if ge(total, inst.one, inst.exact):
            s = k
            break

    q_prod = inst.one
    for k in range(s, inst.n + 1):
        q_prod *= 1 - inst.prob(k)
    value = q_prod * sum(r[s - 1 :], inst.zero)
    return OddsResult(s, False, value)
