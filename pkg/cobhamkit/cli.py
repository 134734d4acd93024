"""
Cobham toolkit command-line interface.

One subcommand per pipeline stage, reading automata in the .dfao text format
(or YAML/JSON by suffix). Exit codes: 0 success, 1 domain failure, 2 usage.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, field_validator

from .approx import approx_powers, dependence_exponents, format_fraction, parse_fraction
from .cobham import (
    extended_automaton,
    extract,
    load_certificate,
    save_certificate,
    teleport_check,
    verify_certificate,
)
from .config import CobhamSettings, load_settings
from .dfao import build_periodic_dfao, collapse_equivalent_states, format_dfao, load_dfao, prefix, reverse_reading
from .errors import CobhamError
from .numeration import DigitSet, extend_digits, restrict_digits

logger = logging.getLogger(__name__)


# ANSI Color codes for terminal output
class Colors:
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def _paint(text: str, color: str) -> str:
    # Piped output stays plain so repeated runs are byte-identical.
    if sys.stdout.isatty():
        return f"{color}{text}{Colors.ENDC}"
    return text


class CliConfig(BaseModel):
    """Validated numeric flags of one invocation."""

    subcommand: str
    paths: List[str] = Field(default_factory=list)
    eps: Optional[str] = None
    window: int = Field(default=1000, ge=0)
    samples: int = Field(default=1000, ge=0)
    seed: int = 0
    witness_cap: int = Field(default=1_000_000, gt=0)
    trials: int = Field(default=1000, gt=0)

    @field_validator("eps")
    @classmethod
    def _positive_fraction(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            parse_fraction(value)
        return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cobham", description="Cobham's theorem toolkit for automatic sequences")
    parser.add_argument("--config", help="settings file (YAML or JSON)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log pipeline progress on stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eval", help="print f(X)")
    p.add_argument("file")
    p.add_argument("x", type=int)

    p = sub.add_parser("prefix", help="print f(0..COUNT-1), one per line")
    p.add_argument("file")
    p.add_argument("count", type=int)

    p = sub.add_parser("indep", help="test multiplicative independence")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)

    p = sub.add_parser("approx", help="find m, n with |a^m - b^n| <= eps b^n")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("eps", help="tolerance written p/q")

    p = sub.add_parser("extend", help="extend an automaton to digits 0..MAXDIGIT")
    p.add_argument("file")
    p.add_argument("max_digit", type=int)
    p.add_argument("-o", "--output")

    p = sub.add_parser("reverse", help="reverse the reading direction")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = sub.add_parser("mkperiodic", help="build the automaton of pre (per)^omega")
    p.add_argument("base", type=int)
    p.add_argument("--pre", default="", help="space-separated preperiod tokens")
    p.add_argument("--per", required=True, help="space-separated period tokens")
    p.add_argument("-o", "--output")

    p = sub.add_parser("extract", help="extract an eventual-periodicity certificate")
    p.add_argument("--a", required=True, dest="file_a")
    p.add_argument("--b", required=True, dest="file_b")
    p.add_argument("--verify", type=int, dest="window", help="also verify on this window")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--witness-cap", type=int)
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify", help="spot-check a certificate")
    p.add_argument("--dfao", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("teleport", help="check f(x c^n + z) == f(y c^n + z) over the digit window")
    p.add_argument("--dfao", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    return parser


def _cli_config(args: argparse.Namespace, settings: CobhamSettings) -> CliConfig:
    def flag(name: str, default):
        value = getattr(args, name, None)
        return default if value is None else value

    return CliConfig(
        subcommand=args.subcommand,
        paths=[getattr(args, name) for name in ("file", "file_a", "file_b", "dfao", "cert") if getattr(args, name, None)],
        eps=getattr(args, "eps", None),
        window=flag("window", settings.verify_window),
        samples=flag("samples", settings.verify_samples),
        seed=flag("seed", settings.seed),
        witness_cap=flag("witness_cap", settings.search.witness_cap),
        trials=flag("trials", 1000),
    )


def _emit_dfao(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Print f_x for one index."""
    print(load_dfao(args.file).evaluate(args.x))
    return 0


def cmd_prefix(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Print f_0 .. f_(count-1), one per line."""
    for token in prefix(load_dfao(args.file), args.count):
        print(token)
    return 0


def cmd_indep(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Report whether two bases are multiplicatively dependent."""
    exponents = dependence_exponents(args.a, args.b)
    if exponents is None:
        print(_paint("independent", Colors.OKGREEN))
    else:
        m, n = exponents
        print(f"{_paint('dependent', Colors.WARNING)}: {args.a}^{m} = {args.b}^{n}")
    return 0


def cmd_approx(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Print exponents m, n with a^m close to b^n."""
    pair = approx_powers(args.a, args.b, parse_fraction(config.eps), settings.search.approx_iteration_cap)
    print(f"m {pair.m}")
    print(f"n {pair.n}")
    print(f"difference {pair.difference}")
    print(f"bound {format_fraction(pair.eps)} * {args.b}^{pair.n}")
    return 0


def cmd_extend(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Write the automaton rebuilt over digits 0..max_digit."""
    dfao = load_dfao(args.file)
    canonical = restrict_digits(dfao, DigitSet.canonical(dfao.base))
    extended = extend_digits(canonical, DigitSet(dfao.base, args.max_digit), settings.search.reverse_state_cap)
    _emit_dfao(format_dfao(extended), args.output)
    return 0


def cmd_reverse(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Write the least-significant-first automaton."""
    reversed_dfao = reverse_reading(load_dfao(args.file), settings.search.reverse_state_cap)
    _emit_dfao(format_dfao(collapse_equivalent_states(reversed_dfao)), args.output)
    return 0


def cmd_mkperiodic(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Write an automaton for an ultimately periodic table."""
    dfao = build_periodic_dfao(args.pre.split(), args.per.split(), args.base)
    _emit_dfao(format_dfao(dfao), args.output)
    return 0


def _print_report(report) -> int:
    """Print a colored verification summary; exit code 1 on failure."""
    color = Colors.OKGREEN if report.passed else Colors.FAIL
    status, _, detail = report.summary().partition(":")
    print(f"{_paint(status, color)}:{detail}")
    return 0 if report.passed else 1


def cmd_extract(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Extract a certificate and optionally verify it."""
    dfao_a, dfao_b = load_dfao(args.file_a), load_dfao(args.file_b)
    search = settings.search.model_copy(update={"witness_cap": config.witness_cap})
    cert = extract(dfao_a, dfao_b, search)
    trace = cert.trace

    print(f"threshold {cert.threshold}")
    print(f"period {cert.period}")
    print(f"bases {trace.base_a} {trace.base_b}")
    print(f"extended states {trace.state_count_a} {trace.state_count_b}")
    print("s_infinity " + " ".join(str(s) for s in sorted(trace.s_infinity)))
    print(f"xi {trace.xi}")
    print(f"eps {format_fraction(trace.eps)}")
    print(f"approx {trace.approx.m} {trace.approx.n} difference {trace.approx.difference}")
    print(f"x_start {trace.x_start}")
    if args.output:
        save_certificate(cert, args.output)

    if args.window is not None:
        return _print_report(verify_certificate(dfao_a, cert, config.window, config.samples, config.seed))
    return 0


def cmd_verify(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Check a saved certificate against an automaton."""
    dfao = load_dfao(args.dfao)
    cert = load_certificate(args.cert)
    return _print_report(verify_certificate(dfao, cert, config.window, config.samples, config.seed))


def cmd_teleport(args, config: CliConfig, settings: CobhamSettings) -> int:
    """Check the teleport identity for one index pair."""
    dfao = load_dfao(args.dfao)
    if max(dfao.digits) < 2 * dfao.base:
        dfao = extended_automaton(dfao, settings.search.reverse_state_cap)
    s = dfao.canonical_state(args.x)
    passed = teleport_check(dfao, s, args.x, args.y, args.n, config.trials, config.seed)
    if passed:
        print(f"{_paint('PASS', Colors.OKGREEN)}: state {s} window n={args.n}")
        return 0
    print(f"{_paint('FAIL', Colors.FAIL)}: state {s} window n={args.n}")
    return 1


COMMANDS = {
    "eval": cmd_eval,
    "prefix": cmd_prefix,
    "indep": cmd_indep,
    "approx": cmd_approx,
    "extend": cmd_extend,
    "reverse": cmd_reverse,
    "mkperiodic": cmd_mkperiodic,
    "extract": cmd_extract,
    "verify": cmd_verify,
    "teleport": cmd_teleport,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        settings = load_settings(args.config)
    except CobhamError as e:
        print(f"cobham: {e}", file=sys.stderr)
        return 1

    logging.basicConfig(
        level=logging.INFO if args.verbose else settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _cli_config(args, settings)
    except (ValidationError, CobhamError) as e:
        message = e.errors()[0]["msg"] if isinstance(e, ValidationError) else str(e)
        print(f"cobham {args.subcommand}: error: {message}", file=sys.stderr)
        return 2

    try:
        return COMMANDS[args.subcommand](args, config, settings)
    except (CobhamError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"cobham {args.subcommand}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
