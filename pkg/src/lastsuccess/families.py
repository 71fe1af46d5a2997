"""Secretary-type families with closed-form thresholds and their asymptotics.

Four families are supported, by CLI name:

``duration``          p_k = 1/k, w_k = n - k + 1  (best-choice duration)
``minimal-duration``  p_k = 1/k, w_k = k
``uniform-small-p``   p_k = 1/n, w_k = k
``constant-p``        p_k = p,   w_k = n - k + 1
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    InstanceTooLarge,
    LastSuccessError,
    NumericMode,
    ProblemInstance,
    ge,
    validate,
)
from .odds import odds_index, odds_value

#: Largest n for which harmonic conditions are summed exactly.
EXACT_HARMONIC_MAX_N = 1000
DEFAULT_REPORT_CAP = 10**6


class UnsupportedFamily(LastSuccessError, ValueError):
    pass


class Family(str, enum.Enum):
    DURATION = "duration"
    MINIMAL_DURATION = "minimal-duration"
    UNIFORM_SMALL_P = "uniform-small-p"
    CONSTANT_P = "constant-p"


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    n: int
    p: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.family is Family.CONSTANT_P:
            if self.p is None:
                raise ValueError("constant-p needs a probability")
            p = self.p if isinstance(self.p, Fraction) else Fraction(str(self.p))
            if not 0 < p < 1:
                raise ValueError(f"constant-p needs 0 < p < 1, got {p}")
            object.__setattr__(self, "p", p)
        elif self.p is not None:
            raise ValueError(f"{self.family.value} takes no probability")

    @classmethod
    def duration(cls, n: int) -> FamilySpec:
        return cls(Family.DURATION, n)

    @classmethod
    def minimal_duration(cls, n: int) -> FamilySpec:
        return cls(Family.MINIMAL_DURATION, n)

    @classmethod
    def uniform_small_p(cls, n: int) -> FamilySpec:
        return cls(Family.UNIFORM_SMALL_P, n)

    @classmethod
    def constant_p(cls, n: int, p: Fraction | str | float) -> FamilySpec:
        return cls(Family.CONSTANT_P, n, Fraction(str(p)) if not isinstance(p, Fraction) else p)


def instantiate(spec: FamilySpec, mode: NumericMode | str = NumericMode.EXACT) -> ProblemInstance:
    n, ks = spec.n, range(1, spec.n + 1)
    if spec.family is Family.DURATION:
        p, w = [Fraction(1, k) for k in ks], [n - k + 1 for k in ks]
    elif spec.family is Family.MINIMAL_DURATION:
        p, w = [Fraction(1, k) for k in ks], list(ks)
    elif spec.family is Family.UNIFORM_SMALL_P:
        p, w = [Fraction(1, n)] * n, list(ks)
    else:
        p, w = [spec.p] * n, [n - k + 1 for k in ks]
    return validate(p, w, mode)


# ---------------------------------------------------------------------------
# Thresholds


def _harmonic_threshold(n: int, rhs) -> int:
    """Largest k >= 2 with ``sum_{i=k-1}^{n-1} 1/i >= rhs(k)``, else 1.

    k = 1 always qualifies (p_1 = 1 makes its odds sum infinite).
    """
    exact = n <= EXACT_HARMONIC_MAX_N
    total = Fraction(0) if exact else 0.0
    comp = 0.0
    for k in range(n, 1, -1):
        term = Fraction(1, k - 1) if exact else 1.0 / (k - 1)
        if exact:
            total += term
            value = total
        else:
            # Neumaier summation
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
            value = total + comp
        if ge(value, rhs(k), exact):
            return k
    return 1


def closed_form_threshold(spec: FamilySpec) -> int:
    """Optimal threshold from the family's own formula or harmonic condition.

    The uniform-small-p floor formula can exceed n for n = 1, so it is capped
    at n.
    """
    n = spec.n
    if spec.family is Family.DURATION:
        return _harmonic_threshold(n, lambda k: Fraction(2 * n - 2 * k + 3, n))
    if spec.family is Family.MINIMAL_DURATION:
        return _harmonic_threshold(n, lambda k: 2 * k - n - 2)
    if spec.family is Family.UNIFORM_SMALL_P:
        # floor((3 - 2n + sqrt(1 + 8n^2)) / 2) in integers: adding the
        # fractional part of the root never crosses the next multiple of 2
        root = math.isqrt(1 + 8 * n * n)
        return min((3 - 2 * n + root) // 2, n)
    p = spec.p
    if n > 2 * (1 - p) / p:
        return math.floor(3 + n - 2 / p)
    return 1


def closed_form_value(spec: FamilySpec, *, as_printed: bool = False) -> Fraction:
    """Expected profit of the constant-p family under its optimal threshold.

    With ``m = ceil(2/p) - 2`` trials left in the window the value is
    ``(1-p)^(m-1) p m (m+1) / 2``.  ``as_printed=True`` uses ``floor(2/p)``
    instead, which agrees only when ``2/p`` is an integer; it is kept for
    comparison.
    """
    if spec.family is not Family.CONSTANT_P:
        raise UnsupportedFamily(f"no closed-form value for {spec.family.value}")
    n, p = spec.n, spec.p
    if n > 2 * (1 - p) / p:
        c = math.floor(2 / p) if as_printed else math.ceil(2 / p)
        return (1 - p) ** (c - 3) * p * (c - 2) * (c - 1) / 2
    return n * (1 + n) * (1 - p) ** (n - 1) * p / 2


# ---------------------------------------------------------------------------
# Constants


def _rumor_equation(x: float) -> float:
    return 2 - 2 * x + math.log(x)


def rumor_constant(tol: float = 1e-12) -> float:
    """Root in (0, 1) of ``2 - 2x + log x = 0`` (x = 1 is the other root)."""
    lo, hi = 0.05, 0.5  # f(lo) < 0 < f(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _rumor_equation(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    # one Newton step to polish the last bits
    return x - _rumor_equation(x) / (1 / x - 2)


def lambert_w0(z: float, tol: float = 1e-15, max_iter: int = 100) -> float:
    """Principal branch of Lambert W for real ``z >= -1/e`` by Halley's method."""
    branch = -1 / math.e
    if z < branch:
        raise ValueError("lambert_w0 is real only for z >= -1/e")
    if z == branch:
        return -1.0
    if z < -0.25:
        q = math.sqrt(2 * (math.e * z + 1))
        w = -1 + q - q * q / 3
    else:
        w = math.log1p(z)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        step = f / (ew * (w + 1) - (w + 2) * f / (2 * w + 2))
        w -= step
        if abs(step) <= tol * (1 + abs(w)):
            break
    return w


def rumor_constant_lambert() -> float:
    """The same constant as ``-W0(-2 e^-2) / 2``."""
    return -0.5 * lambert_w0(-2 * math.exp(-2))


SQRT2_M1 = math.sqrt(2) - 1


def limits(family: Family | str) -> tuple[float, float] | None:
    """Limiting ``(s_n / n, E_n / n)`` for the three harmonic-type families."""
    family = Family(family)
    if family is Family.DURATION:
        theta = rumor_constant()
        return theta, theta * (1 - theta)
    if family is Family.MINIMAL_DURATION:
        return 0.5, 0.25
    if family is Family.UNIFORM_SMALL_P:
        return SQRT2_M1, SQRT2_M1 * math.exp(SQRT2_M1 - 1)
    return None


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    s: int
    s_ratio: float
    value: float
    value_ratio: float


def asymptotic_report(
    family: Family | str,
    n_grid: list[int],
    p: Fraction | None = None,
    cap: int = DEFAULT_REPORT_CAP,
) -> list[AsymptoticRow]:
    """Threshold and value along ``n_grid`` (float mode), ordered by n."""
    if list(n_grid) != sorted(n_grid):
        raise ValueError("n_grid must be ascending")
    rows = []
    for n in n_grid:
        if n > cap:
            raise InstanceTooLarge(f"n = {n} exceeds the report cap {cap}")
        inst = instantiate(FamilySpec(Family(family), n, p), NumericMode.FLOAT)
        s = odds_index(inst)
        value = float(odds_value(inst, s))
        rows.append(AsymptoticRow(n, s, s / n, value, value / n))
    return rows
