import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Sequence, Tuple

from .errors import InvalidArgumentError, ResourceLimitError, WindowOverflowError

if TYPE_CHECKING:
    from .dfao import Dfao

logger = logging.getLogger(__name__)

# Most significant digit first; the empty word represents 0.
Word = Tuple[int, ...]


@dataclass(frozen=True)
class DigitSet:
    """Contiguous digit alphabet {0, ..., max_digit} for a base."""

    base: int
    max_digit: int

    def __post_init__(self):
        if self.base < 2:
            raise InvalidArgumentError(f"base must be at least 2, got {self.base}")
        if self.max_digit < self.base - 1:
            raise InvalidArgumentError(
                f"digit set {{0..{self.max_digit}}} does not contain the canonical digits "
                f"{{0..{self.base - 1}}}"
            )

    @classmethod
    def canonical(cls, base: int) -> "DigitSet":
        return cls(base, base - 1)

    @classmethod
    def extended(cls, base: int) -> "DigitSet":
        """The set {0, ..., 2c} that writes every value in [0, 2c^n] with n digits."""
        return cls(base, 2 * base)

    @property
    def digits(self) -> Tuple[int, ...]:
        return tuple(range(self.max_digit + 1))

    @property
    def carry_bound(self) -> int:
        return -(-self.max_digit // (self.base - 1))

    @property
    def is_canonical(self) -> bool:
        return self.max_digit == self.base - 1


def _check_base(base: int) -> None:
    if base < 2:
        raise InvalidArgumentError(f"base must be at least 2, got {base}")


def eval_word(word: Sequence[int], base: int) -> int:
    """Value of a most-significant-first word; digits may exceed the base."""
    _check_base(base)
    value = 0
    for digit in word:
        value = value * base + digit
    return value


def canonical_repr(x: int, base: int) -> Word:
    """
    Canonical base representation of a natural number.

    Args:
        x: Natural number, arbitrary precision
        base: Numeration base, at least 2

    Returns:
        Digits over {0..base-1}, most significant first, without leading
        zeros. Zero maps to the empty word.
    """
    _check_base(base)
    if x < 0:
        raise InvalidArgumentError(f"cannot represent negative number {x}")
    digits: List[int] = []
    while x:
        x, digit = divmod(x, base)
        digits.append(digit)
    digits.reverse()
    return tuple(digits)


def window_capacity(base: int, length: int, max_digit: int) -> int:
    """Largest value a word of the given length over {0..max_digit} can take."""
    return max_digit * (base ** length - 1) // (base - 1)


def represent_in_window(z: int, base: int, n: int, digit_set: DigitSet) -> Word:
    """
    Write z as a word of exactly n digits over {0..2*base}.

    Greedy from the most significant position: each position takes the
    largest digit that leaves a residual the remaining positions can still
    hold.
    """
    _check_base(base)
    if digit_set.base != base or digit_set.max_digit != 2 * base:
        raise InvalidArgumentError(
            f"window representation needs the digit set {{0..{2 * base}}} for base {base}"
        )
    if n < 1:
        raise InvalidArgumentError(f"window length must be positive, got {n}")
    if z < 0 or z > 2 * base ** n:
        raise WindowOverflowError(f"{z} is outside the window [0, 2*{base}^{n}]")

    max_digit = digit_set.max_digit
    residual = z
    word: List[int] = []
    for remaining in range(n - 1, -1, -1):
        weight = base ** remaining
        digit = min(max_digit, residual // weight)
        residual -= digit * weight
        if residual > window_capacity(base, remaining, max_digit):
            raise WindowOverflowError(f"{z} does not fit in {n} digits over {{0..{max_digit}}}")
        word.append(digit)
    return tuple(word)


def lsd_digits(x: int, base: int) -> Word:
    """Canonical digits of x, least significant first."""
    return canonical_repr(x, base)[::-1]


def extend_digits(dfao: "Dfao", digit_set: DigitSet, state_cap: int = 1_000_000) -> "Dfao":
    """
    Build an automaton over a larger digit set that computes the same sequence.

    The input is reversed to read least significant digits first, then run
    in product with a carry channel: digit d with pending carry k feeds the
    canonical digit (d+k) mod base to the reversed machine and keeps carry
    (d+k) div base. A product state's output flushes its pending carry
    through the reversed machine. Reversing the product returns to most
    significant first.

    Args:
        dfao: Most-significant-first automaton over the canonical digits
        digit_set: Target digit set for the same base
        state_cap: Cap forwarded to both reversals

    Returns:
        Most-significant-first automaton over digit_set.digits
    """
    # dfao imports this module for canonical_repr
    from .dfao import Dfao, collapse_equivalent_states, reverse_reading

    base = dfao.base
    if digit_set.base != base:
        raise InvalidArgumentError(f"digit set is for base {digit_set.base}, automaton for base {base}")
    if dfao.lsd_first:
        raise InvalidArgumentError("extend_digits expects a most-significant-first automaton")
    if dfao.digits != tuple(range(base)):
        raise InvalidArgumentError("extend_digits expects an automaton over the canonical digits")
    if digit_set.is_canonical:
        return dfao

    reversed_dfao = collapse_equivalent_states(reverse_reading(dfao, state_cap))
    carry_bound = digit_set.carry_bound

    index: Dict[Tuple[int, int], int] = {(reversed_dfao.initial, 0): 0}
    pending: List[Tuple[int, int]] = [(reversed_dfao.initial, 0)]
    rows: List[List[int]] = []
    position = 0
    while position < len(pending):
        state, carry = pending[position]
        position += 1
        row = []
        for digit in digit_set.digits:
            total = digit + carry
            target = (reversed_dfao.step(state, total % base), total // base)
            if target[1] > carry_bound:
                raise AssertionError(f"carry {target[1]} exceeds bound {carry_bound}")
            if target not in index:
                if len(pending) >= state_cap:
                    raise ResourceLimitError("carry product states", state_cap)
                index[target] = len(pending)
                pending.append(target)
            row.append(index[target])
        rows.append(row)

    outputs = [
        reversed_dfao.outputs[reversed_dfao.run(lsd_digits(carry, base), start=state)]
        for state, carry in pending
    ]
    product = Dfao.from_rows(
        base=base,
        digits=digit_set.digits,
        rows=rows,
        initial=0,
        outputs=outputs,
        lsd_first=True,
    )
    logger.debug("carry product for base %d has %d states", base, product.state_count)

    extended = collapse_equivalent_states(reverse_reading(product, state_cap))
    logger.info(
        "extended base-%d automaton to digits 0..%d: %d -> %d states",
        base, digit_set.max_digit, dfao.state_count, extended.state_count,
    )
    return extended


def restrict_digits(dfao: "Dfao", digit_set: DigitSet) -> "Dfao":
    """Drop transitions on digits outside digit_set; canonical words are untouched."""
    from .dfao import Dfao

    if digit_set.base != dfao.base:
        raise InvalidArgumentError(f"digit set is for base {digit_set.base}, automaton for base {dfao.base}")
    kept = digit_set.digits
    missing = [digit for digit in kept if digit not in dfao.digits]
    if missing:
        raise InvalidArgumentError(f"digits {missing} are not in the automaton's alphabet")
    if kept == dfao.digits:
        return dfao

    transitions = {key: target for key, target in dfao.transitions.items() if key[1] <= digit_set.max_digit}
    return Dfao(
        base=dfao.base,
        digits=kept,
        state_count=dfao.state_count,
        initial=dfao.initial,
        transitions=transitions,
        outputs=dfao.outputs,
        lsd_first=dfao.lsd_first,
    )

