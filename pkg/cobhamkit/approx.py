import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple, Union

from .errors import InvalidArgumentError, ResourceLimitError

logger = logging.getLogger(__name__)

DEFAULT_ITERATION_CAP = 1_000_000


def parse_fraction(text: Union[str, Fraction, int]) -> Fraction:
    """Parse an exact positive rational written as "p/q" or "p"."""
    if isinstance(text, (Fraction, int)):
        value = Fraction(text)
    else:
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidArgumentError(f"{text!r} is not a fraction p/q") from None
        if "." in text or "e" in text.lower():
            raise InvalidArgumentError(f"{text!r} must be written as p/q with integers")
    if value <= 0:
        raise InvalidArgumentError(f"{text} must be positive")
    return value


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ApproxPair:
    """Exponents with |a^m - b^n| <= eps * b^n."""

    m: int
    n: int
    a: int
    b: int
    eps: Fraction

    @property
    def difference(self) -> int:
        return self.a ** self.m - self.b ** self.n

    def verify(self) -> bool:
        # |a^m - b^n| * q <= p * b^n with eps = p/q
        return (
            self.m >= 1 and self.n >= 1
            and abs(self.difference) * self.eps.denominator <= self.eps.numerator * self.b ** self.n
        )


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise InvalidArgumentError(f"cannot factor {n}")
    factors: Dict[int, int] = {}
    divisor = 2
    while divisor * divisor <= n:
        while n % divisor == 0:
            factors[divisor] = factors.get(divisor, 0) + 1
            n //= divisor
        divisor += 1 if divisor == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _check_bases(a: int, b: int) -> None:
    if a < 2 or b < 2:
        raise InvalidArgumentError(f"bases must be at least 2, got {a} and {b}")


def dependence_exponents(a: int, b: int) -> Optional[Tuple[int, int]]:
    """
    Smallest positive (m, n) with a^m == b^n, or None for independent bases.

    a and b are dependent iff they have the same prime support and
    proportional exponent vectors.
    """
    _check_bases(a, b)
    fa, fb = factorize(a), factorize(b)
    if fa.keys() != fb.keys():
        return None
    prime = min(fa)
    common = gcd(fa[prime], fb[prime])
    m, n = fb[prime] // common, fa[prime] // common
    if all(fa[p] * m == fb[p] * n for p in fa):
        return m, n
    return None


def multiplicatively_independent(a: int, b: int) -> bool:
    return dependence_exponents(a, b) is None


def approx_powers(a: int, b: int, eps: Union[Fraction, str, int],
                  max_iterations: int = DEFAULT_ITERATION_CAP) -> ApproxPair:
    """
    Find m, n >= 1 with |a^m - b^n| <= eps * b^n by pigeonhole.

    With a' = a^k the least power of a that is at least b, every term
    a'^x / b^f_x lies in [1, b). The interval is cut into half-open cells
    of width eps; two terms in one cell give m = k(y - x), n = f_y - f_x.
    All comparisons are on integers.

    Args:
        a: First base, at least 2
        b: Second base, at least 2
        eps: Exact positive tolerance
        max_iterations: Number of terms scanned before giving up

    Returns:
        A verified ApproxPair

    Raises:
        ResourceLimitError: no verified pair within max_iterations terms
    """
    _check_bases(a, b)
    eps = parse_fraction(eps)
    p, q = eps.numerator, eps.denominator

    k, a_power = 1, a
    while a_power < b:
        k += 1
        a_power *= a

    # Term x is numerator / b^f with b^f <= numerator < b^(f+1).
    numerator, f, b_f = 1, 0, 1
    cells: Dict[int, Tuple[int, int]] = {}
    for x in range(max_iterations):
        if x:
            numerator *= a_power
            while numerator >= b_f * b:
                b_f *= b
                f += 1
        # floor((numerator / b^f - 1) / eps)
        cell = (numerator - b_f) * q // (p * b_f)
        earlier = cells.get(cell)
        if earlier is not None:
            x0, f0 = earlier
            pair = ApproxPair(m=k * (x - x0), n=f - f0, a=a, b=b, eps=eps)
            if pair.verify():
                logger.debug("approx_powers(%d, %d, %s): cells collided at terms %d and %d",
                             a, b, eps, x0, x)
                return pair
            logger.debug("candidate (%d, %d) failed the exact check, scanning on", pair.m, pair.n)
        cells[cell] = (x, f)

    raise ResourceLimitError("approx_powers terms", max_iterations)
