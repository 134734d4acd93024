import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import yaml

from .errors import (
    DfaoDefect,
    DfaoValidationError,
    InvalidArgumentError,
    InvalidDigitError,
    ResourceLimitError,
)
from .numeration import Word, canonical_repr

logger = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 1_000_000


@dataclass(frozen=True)
class Dfao:
    """
    Deterministic finite automaton with output over a digit alphabet.

    Most-significant-first automata must satisfy transition(initial, 0) ==
    initial so that leading zeros never change the output. Automata with
    lsd_first set read the least significant digit first and are exempt.
    """

    base: int
    digits: Tuple[int, ...]
    state_count: int
    initial: int
    transitions: Dict[Tuple[int, int], int] = field(repr=False)
    outputs: Tuple[str, ...]
    lsd_first: bool = False

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(sorted(set(self.digits))))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "transitions", dict(self.transitions))
        self._validate()

    def _validate(self) -> None:
        if self.base < 2:
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"base must be at least 2, got {self.base}")
        if any(digit < 0 for digit in self.digits):
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, "digits must be non-negative")
        if not set(range(self.base)) <= set(self.digits):
            raise DfaoValidationError(
                DfaoDefect.NONCANONICAL_DIGITS,
                f"digit set must contain 0..{self.base - 1}",
            )
        if self.state_count < 1:
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, "an automaton needs at least one state")
        if not 0 <= self.initial < self.state_count:
            raise DfaoValidationError(
                DfaoDefect.STATE_OUT_OF_RANGE,
                f"initial state {self.initial} is not in [0, {self.state_count})",
            )
        if len(self.outputs) != self.state_count:
            raise DfaoValidationError(
                DfaoDefect.BAD_OUTPUT_COUNT,
                f"expected {self.state_count} outputs, got {len(self.outputs)}",
            )

        alphabet = set(self.digits)
        for (state, digit), target in self.transitions.items():
            if not 0 <= state < self.state_count or not 0 <= target < self.state_count:
                raise DfaoValidationError(
                    DfaoDefect.STATE_OUT_OF_RANGE,
                    f"transition {state} --{digit}--> {target} leaves [0, {self.state_count})",
                )
            if digit not in alphabet:
                raise DfaoValidationError(
                    DfaoDefect.DIGIT_OUT_OF_ALPHABET,
                    f"transition on digit {digit} which is not in the alphabet",
                )
        if len(self.transitions) != self.state_count * len(self.digits):
            for state in range(self.state_count):
                for digit in self.digits:
                    if (state, digit) not in self.transitions:
                        raise DfaoValidationError(
                            DfaoDefect.MISSING_TRANSITION,
                            f"no transition for state {state} on digit {digit}",
                        )

        if not self.lsd_first and self.transitions[(self.initial, 0)] != self.initial:
            raise DfaoValidationError(
                DfaoDefect.LEADING_ZERO_UNSTABLE,
                f"initial state {self.initial} must loop on digit 0",
            )

    @classmethod
    def from_rows(cls, base: int, digits: Sequence[int], rows: Sequence[Sequence[int]],
                  initial: int, outputs: Sequence[str], lsd_first: bool = False) -> "Dfao":
        """Build from rows[state][i] = target on digits[i]."""
        transitions = {
            (state, digit): target
            for state, row in enumerate(rows)
            for digit, target in zip(digits, row)
        }
        return cls(
            base=base,
            digits=tuple(digits),
            state_count=len(rows),
            initial=initial,
            transitions=transitions,
            outputs=tuple(outputs),
            lsd_first=lsd_first,
        )

    @cached_property
    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        """columns[i][state] is the target of state on digits[i]."""
        return tuple(
            tuple(self.transitions[(state, digit)] for state in range(self.state_count))
            for digit in self.digits
        )

    @cached_property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(self.transitions[(state, digit)] for digit in self.digits)
            for state in range(self.state_count)
        )

    @property
    def is_canonical(self) -> bool:
        return self.digits == tuple(range(self.base))

    def step(self, state: int, digit: int) -> int:
        try:
            return self.transitions[(state, digit)]
        except KeyError:
            raise InvalidDigitError(0, digit) from None

    def run(self, word: Iterable[int], start: Optional[int] = None) -> int:
        """Fold the transition function over word, left to right."""
        state = self.initial if start is None else start
        transitions = self.transitions
        for position, digit in enumerate(word):
            try:
                state = transitions[(state, digit)]
            except KeyError:
                raise InvalidDigitError(position, digit) from None
        return state

    def reading_word(self, x: int) -> Word:
        """Canonical representation of x in the order this automaton reads it."""
        word = canonical_repr(x, self.base)
        return word[::-1] if self.lsd_first else word

    def canonical_state(self, x: int) -> int:
        return self.run(self.reading_word(x))

    def evaluate(self, x: int) -> str:
        return self.outputs[self.canonical_state(x)]


def run(dfao: Dfao, word: Sequence[int]) -> int:
    """State reached from the initial state after reading word."""
    return dfao.run(word)


def evaluate(dfao: Dfao, x: int) -> str:
    """The sequence value f_x computed by the automaton."""
    return dfao.evaluate(x)


def prefix(dfao: Dfao, count: int) -> List[str]:
    """The first count sequence values."""
    return [dfao.evaluate(x) for x in range(count)]


def _closure(dfao: Dfao, sources: Iterable[int], digits: Sequence[int]) -> Set[int]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        state = stack.pop()
        for digit in digits:
            target = dfao.transitions[(state, digit)]
            if target not in seen:
                seen.add(target)
                stack.append(target)
    return seen


def _reached_infinitely(dfao: Dfao, sources: Iterable[int], digits: Sequence[int]) -> Set[int]:
    """States reached by infinitely many words over digits that start at one of sources."""
    region = _closure(dfao, sources, digits)
    cyclic = [
        state for state in region
        if state in _closure(dfao, [dfao.transitions[(state, digit)] for digit in digits], digits)
    ]
    return _closure(dfao, cyclic, digits)


def infinite_canonical_states(dfao: Dfao) -> FrozenSet[int]:
    """
    States hit by the canonical representations of infinitely many naturals.

    Canonical representations are distinct words, so a state qualifies iff
    some canonical word reaching it passes through a cycle of canonical-digit
    transitions after its leading nonzero digit.
    """
    canonical = tuple(range(dfao.base))
    nonzero = canonical[1:]
    if not dfao.lsd_first:
        firsts = [dfao.transitions[(dfao.initial, digit)] for digit in nonzero]
        return frozenset(_reached_infinitely(dfao, firsts, canonical))

    # The leading digit is read last.
    bodies = _reached_infinitely(dfao, [dfao.initial], canonical)
    return frozenset(dfao.transitions[(state, digit)] for state in bodies for digit in nonzero)


def _stabilize_leading_zeros(rows: List[List[int]], outputs: List[str], initial: int,
                             zero_index: int) -> int:
    """Give the initial state a 0-self-loop, adding a fresh copy if needed; returns the initial."""
    if rows[initial][zero_index] == initial:
        return initial
    fresh = len(rows)
    row = list(rows[initial])
    row[zero_index] = fresh
    rows.append(row)
    outputs.append(outputs[initial])
    return fresh


def reverse_reading(dfao: Dfao, state_cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """
    Automaton reading words in the opposite digit order with the same outputs.

    States are the reachable maps s -> transition(s, v) for the suffix v read
    so far, starting from the identity; a map g outputs outputs[g(initial)].
    Reversing a least-significant-first automaton yields a most-significant-first
    one whose initial state is made stable under leading zeros.

    Raises:
        ResourceLimitError: more than state_cap maps are reachable
    """
    identity = tuple(range(dfao.state_count))
    index: Dict[Tuple[int, ...], int] = {identity: 0}
    maps: List[Tuple[int, ...]] = [identity]
    rows: List[List[int]] = []
    columns = dfao.columns

    position = 0
    while position < len(maps):
        current = maps[position]
        position += 1
        row = []
        for column in columns:
            composed = tuple(map(current.__getitem__, column))
            target = index.get(composed)
            if target is None:
                if len(maps) >= state_cap:
                    raise ResourceLimitError("reverse_reading states", state_cap)
                target = index[composed] = len(maps)
                maps.append(composed)
            row.append(target)
        rows.append(row)

    outputs = [dfao.outputs[current[dfao.initial]] for current in maps]
    initial = 0
    if dfao.lsd_first:
        initial = _stabilize_leading_zeros(rows, outputs, initial, dfao.digits.index(0))

    logger.debug("reversed %d-state automaton into %d states", dfao.state_count, len(rows))
    return Dfao.from_rows(
        base=dfao.base,
        digits=dfao.digits,
        rows=rows,
        initial=initial,
        outputs=outputs,
        lsd_first=not dfao.lsd_first,
    )


def collapse_equivalent_states(dfao: Dfao) -> Dfao:
    """
    Merge states with identical futures, dropping unreachable ones.

    Moore refinement: colour by output, then recolour by (colour, colours of
    successors) until the number of colours stops growing. Classes are
    numbered in breadth-first order from the initial state.
    """
    reachable = sorted(_closure(dfao, [dfao.initial], dfao.digits))
    rows = dfao.rows

    palette: Dict[Any, int] = {}
    colour = {state: palette.setdefault(dfao.outputs[state], len(palette)) for state in reachable}
    count = len(palette)
    while True:
        palette = {}
        refined = {
            state: palette.setdefault(
                (colour[state],) + tuple(colour[target] for target in rows[state]), len(palette)
            )
            for state in reachable
        }
        colour = refined
        if len(palette) == count:
            break
        count = len(palette)

    representative: Dict[int, int] = {}
    for state in reachable:
        representative.setdefault(colour[state], state)

    order = [colour[dfao.initial]]
    numbering = {colour[dfao.initial]: 0}
    position = 0
    while position < len(order):
        state = representative[order[position]]
        position += 1
        for target in rows[state]:
            if colour[target] not in numbering:
                numbering[colour[target]] = len(order)
                order.append(colour[target])

    new_rows = [
        [numbering[colour[target]] for target in rows[representative[klass]]]
        for klass in order
    ]
    outputs = [dfao.outputs[representative[klass]] for klass in order]
    return Dfao.from_rows(dfao.base, dfao.digits, new_rows, 0, outputs, dfao.lsd_first)


def build_periodic_dfao(preperiod: Sequence[str], period: Sequence[str], base: int) -> Dfao:
    """
    Automaton for the sequence preperiod followed by period repeated forever.

    States track (min(x, r), x mod q) under x -> x*base + d, where r and q are
    the preperiod and period lengths; the first component saturates at r.
    """
    if base < 2:
        raise InvalidArgumentError(f"base must be at least 2, got {base}")
    if not period:
        raise InvalidArgumentError("period must be non-empty")
    r, q = len(preperiod), len(period)

    def output(state: Tuple[int, int]) -> str:
        capped, residue = state
        if capped < r:
            return preperiod[capped]
        return period[(residue - r) % q]

    start = (0, 0)
    index = {start: 0}
    order = [start]
    rows: List[List[int]] = []
    position = 0
    while position < len(order):
        capped, residue = order[position]
        position += 1
        row = []
        for digit in range(base):
            target = (min(capped * base + digit, r), (residue * base + digit) % q)
            if target not in index:
                index[target] = len(order)
                order.append(target)
            row.append(index[target])
        rows.append(row)

    return Dfao.from_rows(base, range(base), rows, 0, [output(state) for state in order])


def _check_token(token: str) -> str:
    if not token or any(ch.isspace() for ch in token) or token.startswith("#"):
        raise DfaoValidationError(
            DfaoDefect.BAD_OUTPUT_TOKEN,
            f"output token {token!r} must be non-empty, whitespace-free and not start with '#'",
        )
    return token


def _parse_int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"expected an integer, got {token!r}", line_number) from None


def parse_dfao(text: str) -> Dfao:
    """
    Parse the line-oriented DFAO format.

    Recognised lines: base, digits (optional), order (optional, msd or lsd),
    states, initial, outputs and one trans line per (state, digit). Text
    after '#' is a comment.
    """
    header: Dict[str, Tuple[List[str], int]] = {}
    trans_lines: List[Tuple[List[str], int]] = []
    for line_number, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        keyword, values = tokens[0], tokens[1:]
        if keyword == "trans":
            if len(values) != 3:
                raise DfaoValidationError(DfaoDefect.BAD_HEADER, "trans needs <state> <digit> <target>", line_number)
            trans_lines.append((values, line_number))
        elif keyword in ("base", "digits", "states", "initial", "outputs", "order"):
            if keyword in header:
                raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"duplicate {keyword} line", line_number)
            header[keyword] = (values, line_number)
        else:
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"unknown keyword {keyword!r}", line_number)

    for required in ("base", "states", "initial", "outputs"):
        if required not in header:
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"missing {required} line")

    def single(keyword: str) -> int:
        values, line_number = header[keyword]
        if len(values) != 1:
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"{keyword} takes one value", line_number)
        return _parse_int(values[0], line_number)

    base = single("base")
    state_count = single("states")
    initial = single("initial")
    if "digits" in header:
        values, line_number = header["digits"]
        digits = [_parse_int(value, line_number) for value in values]
        if len(set(digits)) != len(digits):
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, "repeated digit in digits line", line_number)
    else:
        digits = list(range(base))
    lsd_first = False
    if "order" in header:
        values, line_number = header["order"]
        if values not in (["msd"], ["lsd"]):
            raise DfaoValidationError(DfaoDefect.BAD_HEADER, "order must be msd or lsd", line_number)
        lsd_first = values == ["lsd"]
    outputs = [_check_token(token) for token in header["outputs"][0]]

    alphabet = set(digits)
    transitions: Dict[Tuple[int, int], int] = {}
    for values, line_number in trans_lines:
        state, digit, target = (_parse_int(value, line_number) for value in values)
        if not 0 <= state < state_count or not 0 <= target < state_count:
            raise DfaoValidationError(
                DfaoDefect.STATE_OUT_OF_RANGE,
                f"state index out of range in transition {state} {digit} {target}",
                line_number,
            )
        if digit not in alphabet:
            raise DfaoValidationError(
                DfaoDefect.DIGIT_OUT_OF_ALPHABET, f"digit {digit} is not in the alphabet", line_number
            )
        if (state, digit) in transitions:
            raise DfaoValidationError(
                DfaoDefect.DUPLICATE_TRANSITION,
                f"duplicate transition for state {state} on digit {digit}",
                line_number,
            )
        transitions[(state, digit)] = target

    return Dfao(
        base=base,
        digits=tuple(digits),
        state_count=state_count,
        initial=initial,
        transitions=transitions,
        outputs=tuple(outputs),
        lsd_first=lsd_first,
    )


def format_dfao(dfao: Dfao) -> str:
    """Render the line-oriented .dfao text form."""
    lines = [f"base {dfao.base}"]
    if not dfao.is_canonical:
        lines.append("digits " + " ".join(str(digit) for digit in dfao.digits))
    if dfao.lsd_first:
        lines.append("order lsd")
    lines.append(f"states {dfao.state_count}")
    lines.append(f"initial {dfao.initial}")
    lines.append("outputs " + " ".join(_check_token(token) for token in dfao.outputs))
    for state in range(dfao.state_count):
        for digit in dfao.digits:
            lines.append(f"trans {state} {digit} {dfao.transitions[(state, digit)]}")
    return "\n".join(lines) + "\n"


def dfao_to_dict(dfao: Dfao) -> Dict[str, Any]:
    """Mapping form used for YAML and JSON files."""
    return {
        "base": dfao.base,
        "digits": list(dfao.digits),
        "order": "lsd" if dfao.lsd_first else "msd",
        "states": dfao.state_count,
        "initial": dfao.initial,
        "outputs": list(dfao.outputs),
        "transitions": [
            [state, digit, dfao.transitions[(state, digit)]]
            for state in range(dfao.state_count)
            for digit in dfao.digits
        ],
    }


def dfao_from_dict(data: Mapping[str, Any]) -> Dfao:
    """Inverse of dfao_to_dict; missing or mistyped keys are header defects."""
    try:
        base = int(data["base"])
        transitions: Dict[Tuple[int, int], int] = {}
        for state, digit, target in data.get("transitions", []):
            if (int(state), int(digit)) in transitions:
                raise DfaoValidationError(
                    DfaoDefect.DUPLICATE_TRANSITION,
                    f"duplicate transition for state {state} on digit {digit}",
                )
            transitions[(int(state), int(digit))] = int(target)
        return Dfao(
            base=base,
            digits=tuple(int(digit) for digit in data.get("digits", range(base))),
            state_count=int(data["states"]),
            initial=int(data["initial"]),
            transitions=transitions,
            outputs=tuple(_check_token(str(token)) for token in data["outputs"]),
            lsd_first=data.get("order", "msd") == "lsd",
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"malformed automaton mapping: {e}") from None


def load_dfao(path: Union[str, Path]) -> Dfao:
    """Load an automaton from a .dfao text file, or from YAML/JSON by suffix."""
    path = str(path)
    with open(path, "r", encoding="utf-8") as f:
        if path.endswith(".yaml") or path.endswith(".yml"):
            try:
                return dfao_from_dict(yaml.safe_load(f) or {})
            except yaml.YAMLError as e:
                raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"invalid YAML: {e}") from None
        if path.endswith(".json"):
            try:
                return dfao_from_dict(json.load(f))
            except json.JSONDecodeError as e:
                raise DfaoValidationError(DfaoDefect.BAD_HEADER, f"invalid JSON: {e}") from None
        return parse_dfao(f.read())


def save_dfao(dfao: Dfao, path: Union[str, Path]) -> None:
    """Write by suffix: YAML, JSON, otherwise the .dfao text form."""
    path = str(path)
    with open(path, "w", encoding="utf-8") as f:
        if path.endswith(".yaml") or path.endswith(".yml"):
            yaml.safe_dump(dfao_to_dict(dfao), f, default_flow_style=None, sort_keys=False)
        elif path.endswith(".json"):
            json.dump(dfao_to_dict(dfao), f, indent=2)
        else:
            f.write(format_dfao(dfao))
