import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Optional, Sequence, Tuple, Union

from .errors import GlueChainError, InvalidArgumentError, MergePreconditionError

Rational = Union[int, Fraction]
SequenceOracle = Callable[[int], Hashable]


@dataclass(frozen=True)
class Interval:
    """The integers lo, lo+1, ..., hi (both ends included)."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise InvalidArgumentError(f"[{self.lo}, {self.hi}] is not an interval of naturals")

    @classmethod
    def ball(cls, center: Rational, radius: Rational) -> "Interval":
        """{y in N : |y - center| <= radius}, snapped to integer ends."""
        center, radius = Fraction(center), Fraction(radius)
        if radius < 0 or radius > center:
            raise InvalidArgumentError(f"radius {radius} must lie in [0, {center}]")
        lo, hi = math.ceil(center - radius), math.floor(center + radius)
        return cls(lo, hi)

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def intersection_size(self, other: "Interval") -> int:
        return max(0, min(self.hi, other.hi) - max(self.lo, other.lo) + 1)

    def intersection(self, other: "Interval") -> Optional["Interval"]:
        if self.intersection_size(other) == 0:
            return None
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def union(self, other: "Interval") -> "Interval":
        if other.lo > self.hi + 1 or self.lo > other.hi + 1:
            raise InvalidArgumentError(f"{self} and {other} neither overlap nor touch")
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))


@dataclass(frozen=True)
class IntervalClaim:
    """Claim that f_x == f_(x+period) whenever x and x+period lie in interval."""

    interval: Interval
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise InvalidArgumentError(f"local period must be positive, got {self.period}")


def check_local_period(f: SequenceOracle, claim: IntervalClaim) -> bool:
    interval, p = claim.interval, claim.period
    return all(f(x) == f(x + p) for x in range(interval.lo, interval.hi - p + 1))


def merge_claims(first: IntervalClaim, second: IntervalClaim) -> IntervalClaim:
    """
    Combine two verified claims whose intervals overlap in at least p+q points.

    The union inherits the first claim's period. Nothing about the sequence
    is inspected here; soundness rests on both inputs having been checked.

    Raises:
        MergePreconditionError: the overlap is smaller than p+q
    """
    required = first.period + second.period
    common = first.interval.intersection(second.interval)
    overlap = common.size if common is not None else 0
    if overlap < required:
        raise MergePreconditionError(overlap, required)
    return IntervalClaim(first.interval.union(second.interval), first.period)


def glue_chain(claims: Sequence[IntervalClaim]) -> IntervalClaim:
    """Left fold of merge_claims; the first claim's period covers the union."""
    if not claims:
        raise InvalidArgumentError("glue_chain needs at least one claim")
    glued = claims[0]
    for index in range(1, len(claims)):
        try:
            glued = merge_claims(glued, claims[index])
        except MergePreconditionError as e:
            raise GlueChainError(index, e) from e
    return glued


# A reported tail must repeat its period this many times.
MIN_PERIOD_REPEATS = 3


def minimal_ultimate_period(prefix: Sequence[Hashable]) -> Optional[Tuple[int, int]]:
    """
    Lexicographically least (preperiod, period) consistent with a finite prefix.

    Only tails spanning at least three full periods are considered; returns
    None when no such pair exists.
    """
    length = len(prefix)
    for preperiod in range(length):
        for period in range(1, (length - preperiod) // MIN_PERIOD_REPEATS + 1):
            if all(prefix[x] == prefix[x + period] for x in range(preperiod, length - period)):
                return preperiod, period
    return None
