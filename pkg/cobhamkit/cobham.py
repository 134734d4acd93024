"""
Eventual-periodicity certificates for sequences automatic in two bases.

Given automata for the same sequence in multiplicatively independent bases
a and b, extract() follows the constructive forward direction of Cobham's
theorem: pick state-sharing index pairs, find close powers a^m and b^n,
turn each pair into a local period on the intervals I_y, and read off the
period of the first interval of the glue chain.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from .approx import ApproxPair, approx_powers, format_fraction, multiplicatively_independent, parse_fraction
from .config import SearchConfig
from .dfao import Dfao, infinite_canonical_states
from .errors import (
    CertificateError,
    CertificateFormatError,
    DependentBasesError,
    InvalidArgumentError,
    ResourceLimitError,
    SequenceMismatchError,
)
from .numeration import DigitSet, extend_digits, represent_in_window, restrict_digits
from .periodicity import Interval, IntervalClaim, glue_chain

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StatePairWitness:
    """Distinct indices x, y sharing state s in base b and state t in base a."""

    s: int
    t: int
    x: int
    y: int

    def __post_init__(self):
        if self.x == self.y:
            raise InvalidArgumentError(f"witness indices must differ, got {self.x} twice")


@dataclass(frozen=True)
class ExtractionTrace:
    base_a: int
    base_b: int
    state_count_a: int
    state_count_b: int
    s_infinity: FrozenSet[int]
    witnesses: Dict[int, StatePairWitness]
    xi: int
    eps: Fraction
    approx: ApproxPair
    periods: Dict[int, int]
    x_start: int
    interval_radius_num: int = 2
    interval_radius_den: int = 3

    @property
    def a_power(self) -> int:
        return self.base_a ** self.approx.m

    @property
    def b_power(self) -> int:
        return self.base_b ** self.approx.n

    def interval(self, y: int) -> Interval:
        """I_y: the ball of radius (2/3) b^n around (y+1) b^n."""
        radius = Fraction(self.interval_radius_num * self.b_power, self.interval_radius_den)
        return Interval.ball((y + 1) * self.b_power, radius)


@dataclass(frozen=True)
class PeriodCertificate:
    """f_x == f_(x+period) for every x >= threshold."""

    threshold: int
    period: int
    trace: ExtractionTrace = field(repr=False)


@dataclass
class VerificationReport:
    passed: bool
    window_checked: int
    samples_checked: int
    counterexample: Optional[int] = None
    counterexample_values: Optional[Tuple[str, str]] = None

    def summary(self) -> str:
        if self.passed:
            return f"PASS: {self.window_checked} window and {self.samples_checked} sampled indices"
        left, right = self.counterexample_values
        return f"FAIL: f({self.counterexample}) = {left} but f(x + p) = {right}"


def check_same_sequence(dfao_a: Dfao, dfao_b: Dfao, bound: int) -> None:
    """Both automata must agree below bound; the theorem assumes equality everywhere."""
    for x in range(bound):
        left, right = dfao_a.evaluate(x), dfao_b.evaluate(x)
        if left != right:
            raise SequenceMismatchError(x, left, right)


def extended_automaton(dfao: Dfao, state_cap: int) -> Dfao:
    """The automaton over D_c = {0..2c} computing the same sequence."""
    canonical = restrict_digits(dfao, DigitSet.canonical(dfao.base))
    return extend_digits(canonical, DigitSet.extended(dfao.base), state_cap)


def find_witnesses(ext_a: Dfao, ext_b: Dfao, s_infinity: FrozenSet[int], cap: int) -> Dict[int, StatePairWitness]:
    """
    For each s in S_inf, the first collision of a (s, t) pair.

    Indices are scanned upwards; x is the first index with states (s, t) and
    y the first later index with the same pair.
    """
    first_seen: Dict[Tuple[int, int], int] = {}
    witnesses: Dict[int, StatePairWitness] = {}
    for index in range(cap):
        s = ext_b.canonical_state(index)
        if s not in s_infinity or s in witnesses:
            continue
        t = ext_a.canonical_state(index)
        earlier = first_seen.setdefault((s, t), index)
        if earlier != index:
            witnesses[s] = StatePairWitness(s=s, t=t, x=earlier, y=index)
            if len(witnesses) == len(s_infinity):
                return witnesses
    missing = sorted(s_infinity - witnesses.keys())
    logger.warning("no witness pair found for states %s", missing)
    raise ResourceLimitError(f"witness search (states {missing} unresolved)", cap)


def check_trace_arithmetic(trace: ExtractionTrace) -> None:
    """
    Re-check the exact inequalities a trace must satisfy.

    xi * 6 * |a^m - b^n| <= b^n, 5 b^n <= 6 a^m and 0 < 6 p_st <= b^n, with
    p_st = (x_st - y_st)(a^m - b^n).
    """
    a_power, b_power = trace.a_power, trace.b_power
    difference = a_power - b_power
    if not trace.s_infinity:
        raise CertificateError("S_inf is empty")
    if not trace.approx.verify():
        raise CertificateError(f"(m, n) = ({trace.approx.m}, {trace.approx.n}) misses the tolerance")
    if trace.xi * 6 * abs(difference) > b_power:
        raise CertificateError("xi * |a^m - b^n| exceeds b^n / 6")
    if 5 * b_power > 6 * a_power:
        raise CertificateError("a^m is below (5/6) b^n")
    if set(trace.witnesses) != set(trace.s_infinity) or set(trace.periods) != set(trace.s_infinity):
        raise CertificateError("witnesses and local periods must cover S_inf exactly")
    if trace.xi != max(max(w.x, w.y) for w in trace.witnesses.values()) + 1:
        raise CertificateError("xi is not one more than the largest witness index")
    for s, witness in trace.witnesses.items():
        period = trace.periods[s]
        if period != (witness.x - witness.y) * difference:
            raise CertificateError(f"local period of state {s} does not match its witness")
        if not 0 < 6 * period <= b_power:
            raise CertificateError(f"local period {period} of state {s} is outside (0, b^n / 6]")


def glue_certificate_chain(cert: PeriodCertificate, ext_b: Dfao, links: int) -> IntervalClaim:
    """Glue the claims (I_y, p_s(y)) for the first links indices y >= x_start."""
    trace = cert.trace
    claims = []
    for y in range(trace.x_start, trace.x_start + links):
        s = ext_b.canonical_state(y)
        if s not in trace.periods:
            raise CertificateError(f"index {y} has state {s}, which is not in S_inf")
        claims.append(IntervalClaim(trace.interval(y), trace.periods[s]))
    return glue_chain(claims)


def extract(dfao_a: Dfao, dfao_b: Dfao, config: Optional[SearchConfig] = None) -> PeriodCertificate:
    """
    Produce an eventual-periodicity certificate for the common sequence.

    Args:
        dfao_a: Automaton in base a
        dfao_b: Automaton in base b computing the same sequence
        config: Search caps; defaults when omitted

    Returns:
        PeriodCertificate with threshold N0, period p and the full trace

    Raises:
        DependentBasesError: a and b are multiplicatively dependent
        SequenceMismatchError: the automata disagree below config.sanity_bound
        ResourceLimitError: a witness, approximation or reversal cap was hit
    """
    config = config or SearchConfig()
    a, b = dfao_a.base, dfao_b.base
    if not multiplicatively_independent(a, b):
        raise DependentBasesError(a, b)
    check_same_sequence(dfao_a, dfao_b, config.sanity_bound)

    ext_a = extended_automaton(dfao_a, config.reverse_state_cap)
    ext_b = extended_automaton(dfao_b, config.reverse_state_cap)

    s_infinity = infinite_canonical_states(ext_b)
    logger.info("S_inf has %d of %d base-%d states", len(s_infinity), ext_b.state_count, b)

    witnesses = find_witnesses(ext_a, ext_b, s_infinity, config.witness_cap)
    xi = max(max(w.x, w.y) for w in witnesses.values()) + 1
    eps = Fraction(1, 6 * xi)
    pair = approx_powers(a, b, eps, config.approx_iteration_cap)
    logger.info("xi = %d, eps = %s, (m, n) = (%d, %d)", xi, format_fraction(eps), pair.m, pair.n)

    difference = pair.difference
    periods: Dict[int, int] = {}
    for s, witness in list(witnesses.items()):
        if (witness.x - witness.y) * difference < 0:
            witness = StatePairWitness(s=witness.s, t=witness.t, x=witness.y, y=witness.x)
            witnesses[s] = witness
        periods[s] = (witness.x - witness.y) * difference

    # Every index >= b^|S_b| has a canonical word longer than the state
    # count, so its run repeats a state and ends in S_inf.
    x_start = b ** ext_b.state_count
    trace = ExtractionTrace(
        base_a=a,
        base_b=b,
        state_count_a=ext_a.state_count,
        state_count_b=ext_b.state_count,
        s_infinity=s_infinity,
        witnesses=witnesses,
        xi=xi,
        eps=eps,
        approx=pair,
        periods=periods,
        x_start=x_start,
    )
    check_trace_arithmetic(trace)

    s_start = ext_b.canonical_state(x_start)
    if s_start not in periods:
        raise CertificateError(f"x_start lands in state {s_start}, outside S_inf")
    cert = PeriodCertificate(threshold=trace.interval(x_start).lo, period=periods[s_start], trace=trace)
    glue_certificate_chain(cert, ext_b, config.chain_links)
    logger.info("certificate: threshold has %d digits, period %d", len(str(cert.threshold)), cert.period)
    return cert


def verify_certificate(dfao: Dfao, cert: PeriodCertificate, window: int, samples: int,
                       seed: int = 0) -> VerificationReport:
    """
    Spot-check f_x == f_(x+p) beyond the threshold.

    Every x in [N0, N0 + window] is checked, then samples indices drawn
    with the given seed from [N0, N0 + 10 b^n]. The lowest failing index is
    reported.
    """
    if window < 0 or samples < 0:
        raise InvalidArgumentError("window and samples must be non-negative")
    start, p = cert.threshold, cert.period

    def failure(x: int) -> Optional[Tuple[str, str]]:
        left, right = dfao.evaluate(x), dfao.evaluate(x + p)
        return None if left == right else (left, right)

    for x in range(start, start + window + 1):
        values = failure(x)
        if values:
            return VerificationReport(False, x - start + 1, 0, x, values)

    rng = random.Random(seed)
    stop = start + 10 * cert.trace.b_power
    drawn = [rng.randint(start, stop) for _ in range(samples)]
    failures = [(x, values) for x in drawn for values in [failure(x)] if values]
    if failures:
        x, values = min(failures)
        return VerificationReport(False, window + 1, samples, x, values)
    return VerificationReport(True, window + 1, samples)


def teleport_check(dfao_ext: Dfao, s: int, x: int, y: int, n: int, trials: int, seed: int = 0) -> bool:
    """
    Check f(x c^n + z) == f(y c^n + z) for window suffixes z in [0, 2 c^n].

    Each z is written as an n-digit window word; the extended automaton must
    give the same output on canonical(x)+window as on the canonical
    representation of x c^n + z, and the same for y. When trials covers the
    whole window every z is checked.
    """
    c = dfao_ext.base
    digit_set = DigitSet.extended(c)
    if dfao_ext.lsd_first or 2 * c not in dfao_ext.digits:
        raise InvalidArgumentError(f"teleport_check needs a most-significant-first automaton over 0..{2 * c}")
    if n < 1:
        raise InvalidArgumentError(f"window length must be positive, got {n}")
    for index in (x, y):
        if dfao_ext.canonical_state(index) != s:
            raise InvalidArgumentError(f"index {index} does not reach state {s}")
    if x == y:
        return True

    top = 2 * c ** n
    if trials >= top + 1:
        window_values: Iterable[int] = range(top + 1)
    else:
        rng = random.Random(seed)
        window_values = [rng.randint(0, top) for _ in range(trials)]

    shift = c ** n
    for z in window_values:
        window = represent_in_window(z, c, n, digit_set)
        via_x = dfao_ext.outputs[dfao_ext.run(window, start=s)]
        if via_x != dfao_ext.evaluate(x * shift + z) or via_x != dfao_ext.evaluate(y * shift + z):
            logger.debug("teleport identity fails for x=%d y=%d z=%d", x, y, z)
            return False
    return True


def format_certificate(cert: PeriodCertificate) -> str:
    trace = cert.trace
    lines = [
        "# eventual periodicity certificate",
        f"threshold {cert.threshold}",
        f"period {cert.period}",
        f"bases {trace.base_a} {trace.base_b}",
        f"states {trace.state_count_a} {trace.state_count_b}",
        f"xi {trace.xi}",
        f"eps {format_fraction(trace.eps)}",
        f"approx {trace.approx.m} {trace.approx.n}",
        f"x_start {trace.x_start}",
        f"radius {trace.interval_radius_num}/{trace.interval_radius_den}",
        "s_infinity " + " ".join(str(s) for s in sorted(trace.s_infinity)),
    ]
    for s in sorted(trace.witnesses):
        witness = trace.witnesses[s]
        lines.append(f"witness {witness.s} {witness.t} {witness.x} {witness.y}")
    for s in sorted(trace.periods):
        lines.append(f"local_period {s} {trace.periods[s]}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> PeriodCertificate:
    """Parse and re-check a certificate produced by format_certificate."""
    fields: Dict[str, List[str]] = {}
    witnesses: Dict[int, StatePairWitness] = {}
    periods: Dict[int, int] = {}
    try:
        for line_number, raw in enumerate(text.splitlines(), 1):
            tokens = raw.split("#", 1)[0].split()
            if not tokens:
                continue
            keyword, values = tokens[0], tokens[1:]
            if keyword == "witness":
                s, t, x, y = (int(value) for value in values)
                witnesses[s] = StatePairWitness(s=s, t=t, x=x, y=y)
            elif keyword == "local_period":
                s, period = (int(value) for value in values)
                periods[s] = period
            elif keyword in fields:
                raise CertificateFormatError(f"line {line_number}: duplicate {keyword} line")
            else:
                fields[keyword] = values

        a, b = (int(value) for value in fields["bases"])
        count_a, count_b = (int(value) for value in fields["states"])
        m, n = (int(value) for value in fields["approx"])
        eps = parse_fraction(fields["eps"][0])
        radius_num, radius_den = (int(value) for value in fields["radius"][0].split("/"))
        trace = ExtractionTrace(
            base_a=a,
            base_b=b,
            state_count_a=count_a,
            state_count_b=count_b,
            s_infinity=frozenset(int(value) for value in fields["s_infinity"]),
            witnesses=witnesses,
            xi=int(fields["xi"][0]),
            eps=eps,
            approx=ApproxPair(m=m, n=n, a=a, b=b, eps=eps),
            periods=periods,
            x_start=int(fields["x_start"][0]),
            interval_radius_num=radius_num,
            interval_radius_den=radius_den,
        )
        cert = PeriodCertificate(
            threshold=int(fields["threshold"][0]),
            period=int(fields["period"][0]),
            trace=trace,
        )
    except KeyError as e:
        raise CertificateFormatError(f"certificate is missing the {e.args[0]} line") from None
    except (ValueError, IndexError) as e:
        raise CertificateFormatError(f"malformed certificate: {e}") from None

    if (radius_num, radius_den) != (2, 3):
        raise CertificateFormatError("only the 2/3 interval radius is supported")
    try:
        check_trace_arithmetic(trace)
    except CertificateError as e:
        raise CertificateFormatError(f"inconsistent trace: {e}") from None
    if cert.period not in periods.values():
        raise CertificateFormatError("certificate period is not one of the local periods")
    if cert.threshold != trace.interval(trace.x_start).lo:
        raise CertificateFormatError("threshold is not the lower end of I_x_start")
    return cert


def save_certificate(cert: PeriodCertificate, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_certificate(cert))


def load_certificate(path: Union[str, Path]) -> PeriodCertificate:
    with open(path, "r", encoding="utf-8") as f:
        return parse_certificate(f.read())
