"""Exhaustive evaluation of stopping-set strategies on small instances.

A stopping-set strategy stops at the first success whose index lies in a
fixed set.  These routines are deliberately naive; they exist to check the
DP and the odds theorem, not to be fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .core import IndexOutOfRange, InstanceTooLarge, Number, ProblemInstance

MAX_BRUTE_FORCE_N = 22
MAX_PATH_ENUMERATION_N = 16


@dataclass(frozen=True)
class StopSetEvaluation:
    set: tuple[int, ...]
    value: Number


def _checked_set(inst: ProblemInstance, members: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(members)))
    for k in out:
        if not 1 <= k <= inst.n:
            raise IndexOutOfRange(f"set member {k} outside 1..{inst.n}")
    return out


def evaluate_stop_set(inst: ProblemInstance, members: Iterable[int]) -> Number:
    """Expected payoff of stopping at the first success inside ``members``.

    Closed form: the rule stops at k iff k succeeds and no earlier member
    did, and it is paid iff no later trial (member or not) succeeds.
    """
    members = _checked_set(inst, members)
    total = inst.zero
    none_before = inst.one
    for k in members:
        p = inst.prob(k)
        total += none_before * p * inst.payoff(k) * inst.survival_product(k + 1, inst.n)
        none_before *= 1 - p
    return total


def _mask_to_set(mask: int, n: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, n + 1) if mask >> (k - 1) & 1)


def all_stop_set_values(inst: ProblemInstance) -> list[Number]:
    """Values of all 2^n stopping sets, indexed by bitmask (bit k-1 is index k).

    Peeling off the smallest member m gives
    ``V(S) = p_m w_m Q(m+1..n) + (1 - p_m) V(S minus m)``, so each
    mask costs O(1) given the smaller ones.
    """
    n = inst.n
    head = [
        inst.prob(m) * inst.payoff(m) * inst.survival_product(m + 1, n)
        for m in range(1, n + 1)
    ]
    values = [inst.zero] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        m = low.bit_length()
        values[mask] = head[m - 1] + (1 - inst.prob(m)) * values[mask ^ low]
    return values


def brute_force_optimal(inst: ProblemInstance) -> StopSetEvaluation:
    """Best stopping set over all 2^n subsets.

    Ties go to the lexicographically smallest sorted index tuple.  Float-mode
    values are compared exactly, since this is an enumeration, not a decision.
    """
    n = inst.n
    if n > MAX_BRUTE_FORCE_N:
        raise InstanceTooLarge(f"n = {n} exceeds the brute-force limit {MAX_BRUTE_FORCE_N}")
    values = all_stop_set_values(inst)
    best_mask = 0
    best_set = ()
    for mask in range(1, 1 << n):
        v, b = values[mask], values[best_mask]
        if v > b or (v == b and _mask_to_set(mask, n) < best_set):
            best_mask, best_set = mask, _mask_to_set(mask, n)
    return StopSetEvaluation(best_set, values[best_mask])


def path_enumeration_value(inst: ProblemInstance, members: Iterable[int]) -> Number:
    """Expected payoff of a stopping-set rule by summing over all 2^n outcomes.

    Independent of :func:`evaluate_stop_set`: it replays the rule on every
    outcome vector and weights the realized payoff by its probability.
    """
    members = set(_checked_set(inst, members))
    n = inst.n
    if n > MAX_PATH_ENUMERATION_N:
        raise InstanceTooLarge(f"n = {n} exceeds the path-enumeration limit")
    total = inst.zero
    for outcome in itertools.product((0, 1), repeat=n):
        prob = inst.one
        for k, bit in enumerate(outcome, start=1):
            prob *= inst.prob(k) if bit else 1 - inst.prob(k)
        if not prob:
            continue
        stop = next((k for k in range(1, n + 1) if outcome[k - 1] and k in members), None)
        if stop is not None and not any(outcome[stop:]):
            total += prob * inst.payoff(stop)
    return total
