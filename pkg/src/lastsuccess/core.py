"""Problem instances, numeric modes and the survival-product table.

Every other module works on a :class:`ProblemInstance`.  Indices are
1-based throughout; index 0 is reserved for the auxiliary payoff
``w_0 = 0`` and for the value ``E_Keep(0)``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from typing import Iterable, Sequence, Union

Number = Union[Fraction, float]

#: Absolute tolerance for float-mode decision comparisons.
EPS_CMP = 1e-12


class LastSuccessError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LastSuccessError, ValueError):
    """An instance failed validation.  ``field`` names the offending input."""

    field: str = ""
    index: int | None = None

    def __init__(self, message: str, *, field: str = "", index: int | None = None):
        super().__init__(message)
        self.field = field
        self.index = index


class LengthMismatch(ValidationError):
    pass


class EmptyInstance(ValidationError):
    pass


class ProbabilityOutOfRange(ValidationError):
    pass


class NonPositivePayoff(ValidationError):
    pass


class InvalidNumber(ValidationError):
    """A value could not be parsed, or cannot be represented in the requested mode."""


class IndexOutOfRange(LastSuccessError, IndexError):
    pass


class InstanceTooLarge(LastSuccessError):
    pass


class NumericMode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


# ---------------------------------------------------------------------------
# Extended reals for odds ratios


@dataclass(frozen=True)
class ExtendedReal:
    """A finite value or positive infinity.

    Odds ratios ``p/(1-p)`` are infinite at ``p = 1``; keeping the infinity
    symbolic avoids ``inf * 0`` hazards in float mode and works unchanged for
    fractions, which have no infinity.
    """

    value: Number = Fraction(0)
    infinite: bool = False

    @classmethod
    def inf(cls) -> ExtendedReal:
        return cls(Fraction(0), True)

    def __add__(self, other: ExtendedReal | Number) -> ExtendedReal:
        if not isinstance(other, ExtendedReal):
            other = ExtendedReal(other)
        if self.infinite or other.infinite:
            return ExtendedReal.inf()
        return ExtendedReal(self.value + other.value)

    __radd__ = __add__

    def scale(self, factor: Number) -> ExtendedReal:
        """Multiply by a nonnegative factor.  ``inf * 0`` is taken as 0."""
        if self.infinite:
            return ExtendedReal.inf() if factor > 0 else ExtendedReal(factor * 0)
        return ExtendedReal(self.value * factor)

    def __ge__(self, other: Number) -> bool:
        if isinstance(other, ExtendedReal):
            if other.infinite:
                return self.infinite
            other = other.value
        return self.infinite or self.value >= other

    def __gt__(self, other: Number) -> bool:
        if isinstance(other, ExtendedReal):
            if other.infinite:
                return False
            other = other.value
        return self.infinite or self.value > other

    def finite(self) -> Number:
        if self.infinite:
            raise ValueError("value is infinite")
        return self.value

    def __str__(self) -> str:
        return "inf" if self.infinite else str(self.value)


def odds_ratio(p: Number) -> ExtendedReal:
    if p == 1:
        return ExtendedReal.inf()
    return ExtendedReal(p / (1 - p))


# ---------------------------------------------------------------------------
# Parsing and validation

_FRACTION_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def parse_number(raw: object) -> Number:
    """Parse a number or string.

    Integers, ``Fraction`` objects and strings like ``"3"`` or ``"a/b"`` give
    fractions; Python floats and decimal literals such as ``"0.25"`` give
    floats.
    """
    if isinstance(raw, bool):
        raise InvalidNumber(f"not a number: {raw!r}")
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return raw
    if isinstance(raw, str):
        text = raw.strip()
        if _FRACTION_RE.match(text):
            try:
                return Fraction(text.replace(" ", ""))
            except ZeroDivisionError:
                raise InvalidNumber(f"zero denominator in {raw!r}") from None
        try:
            return float(text)
        except ValueError:
            raise InvalidNumber(f"cannot parse {raw!r} as a number") from None
    raise InvalidNumber(f"unsupported value {raw!r}")


def infer_mode(values: Iterable[Number]) -> NumericMode:
    if all(isinstance(v, Fraction) for v in values):
        return NumericMode.EXACT
    return NumericMode.FLOAT


def _coerce(value: Number, mode: NumericMode, label: str, index: int) -> Number:
    if mode is NumericMode.FLOAT:
        return float(value)
    if not isinstance(value, Fraction):
        raise InvalidNumber(
            f"{label}[{index}] = {value!r} is not a fraction; exact mode needs "
            "integers or 'a/b' strings",
            field=label,
            index=index,
        )
    return value


def validate(
    raw_p: Sequence[object],
    raw_w: Sequence[object],
    mode: NumericMode | str | None = None,
) -> ProblemInstance:
    """Build a :class:`ProblemInstance`, raising a :class:`ValidationError` on bad input.

    When ``mode`` is None it is inferred: exact if every entry is a
    fraction, float otherwise.  Values are never clamped.
    """
    raw_p, raw_w = list(raw_p), list(raw_w)
    if len(raw_p) != len(raw_w):
        raise LengthMismatch(
            f"p has {len(raw_p)} entries but w has {len(raw_w)}", field="w"
        )
    if not raw_p:
        raise EmptyInstance("instance has no trials", field="p")

    p_vals, w_vals = [], []
    for label, raws, out in (("p", raw_p, p_vals), ("w", raw_w, w_vals)):
        for i, raw in enumerate(raws, start=1):
            try:
                out.append(parse_number(raw))
            except InvalidNumber as exc:
                raise InvalidNumber(f"{label}[{i}]: {exc}", field=label, index=i) from None

    if mode is None:
        mode = infer_mode(p_vals + w_vals)
    mode = NumericMode(mode)
    p_vals = [_coerce(v, mode, "p", i) for i, v in enumerate(p_vals, start=1)]
    w_vals = [_coerce(v, mode, "w", i) for i, v in enumerate(w_vals, start=1)]

    for i, v in enumerate(p_vals, start=1):
        # NaN fails both comparisons and lands here too
        if not (0 <= v <= 1):
            raise ProbabilityOutOfRange(
                f"p[{i}] = {v} is outside [0, 1]", field="p", index=i
            )
    for i, v in enumerate(w_vals, start=1):
        if not (v > 0) or (isinstance(v, float) and math.isinf(v)):
            raise NonPositivePayoff(
                f"w[{i}] = {v} is not a positive finite payoff", field="w", index=i
            )
    return ProblemInstance(tuple(p_vals), tuple(w_vals), mode)


# ---------------------------------------------------------------------------
# Instance


@dataclass(frozen=True)
class ProblemInstance:
    """A weighted last-success problem: success probabilities ``p`` and payoffs ``w``.

    ``p`` and ``w`` are stored as plain tuples; use :meth:`prob` and
    :meth:`payoff` for 1-based access.  Construct through :func:`validate`.
    """

    p: tuple[Number, ...]
    w: tuple[Number, ...]
    mode: NumericMode = NumericMode.EXACT

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def exact(self) -> bool:
        return self.mode is NumericMode.EXACT

    def prob(self, k: int) -> Number:
        self._check(k, 1)
        return self.p[k - 1]

    def payoff(self, k: int) -> Number:
        """Payoff for stopping at k; ``payoff(0)`` is the auxiliary 0."""
        self._check(k, 0)
        return self.w[k - 1] if k else self.zero

    @property
    def zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    @property
    def one(self) -> Number:
        return Fraction(1) if self.exact else 1.0

    def _check(self, k: int, lo: int) -> None:
        if not lo <= k <= self.n:
            raise IndexOutOfRange(f"index {k} outside {lo}..{self.n}")

    def scaled(self, factor: Number) -> ProblemInstance:
        """Same probabilities, every payoff multiplied by ``factor``."""
        return ProblemInstance(self.p, tuple(x * factor for x in self.w), self.mode)

    def with_mode(self, mode: NumericMode | str) -> ProblemInstance:
        return validate(self.p, self.w, mode)

    @cached_property
    def survival(self) -> SurvivalTable:
        return SurvivalTable(self)

    def survival_product(self, a: int, b: int) -> Number:
        return self.survival.product(a, b)


class SurvivalTable:
    """O(1) queries of ``prod_{i=a}^{b} (1 - p_i)`` after O(n) setup.

    Factors equal to zero (``p_i = 1``) are counted separately so the
    remaining factors can be divided out.  In float mode the nonzero factors
    are kept as prefix sums of ``log1p(-p_i)`` and exponentiated per query;
    in exact mode they are kept as prefix products of fractions.
    """

    def __init__(self, inst: ProblemInstance):
        self.n = inst.n
        self.exact = inst.exact
        zeros = [0]
        for p in inst.p:
            zeros.append(zeros[-1] + (p == 1))
        self._zeros = zeros
        if self.exact:
            factors = [(1 - p) if p != 1 else Fraction(1) for p in inst.p]
            self._prefix = list(accumulate(factors, lambda a, b: a * b, initial=Fraction(1)))
        else:
            logs = [math.log1p(-p) if p != 1 else 0.0 for p in inst.p]
            self._prefix = list(accumulate(logs, initial=0.0))

    def product(self, a: int, b: int) -> Number:
        if a < 1 or b > self.n:
            raise IndexOutOfRange(f"range {a}..{b} outside 1..{self.n}")
        if a > b:
            return Fraction(1) if self.exact else 1.0
        if self._zeros[b] - self._zeros[a - 1]:
            return Fraction(0) if self.exact else 0.0
        if self.exact:
            return self._prefix[b] / self._prefix[a - 1]
        return math.exp(self._prefix[b] - self._prefix[a - 1])


def survival_product(inst: ProblemInstance, a: int, b: int) -> Number:
    """``prod_{i=a}^{b} (1 - p_i)``; the empty range ``a > b`` gives 1."""
    return inst.survival.product(a, b)


# ---------------------------------------------------------------------------
# Mode-aware comparisons


def gt(a: Number, b: Number, exact: bool) -> bool:
    """Decision comparison ``a > b``; float mode requires a margin of EPS_CMP."""
    return a > b if exact else a > b + EPS_CMP


def ge(a: Number | ExtendedReal, b: Number, exact: bool) -> bool:
    if exact:
        return a >= b
    return a >= b - EPS_CMP


def format_number(x: Number) -> str:
    """Fractions print as ``a/b`` (or an integer), floats with repr precision."""
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))
