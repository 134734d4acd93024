"""Cobham's theorem toolkit: automata, digit extension and periodicity certificates."""

from .approx import ApproxPair, approx_powers, dependence_exponents, multiplicatively_independent
from .cobham import (
    ExtractionTrace,
    PeriodCertificate,
    StatePairWitness,
    VerificationReport,
    extract,
    teleport_check,
    verify_certificate,
)
from .config import CobhamSettings, SearchConfig, load_settings
from .dfao import (
    Dfao,
    build_periodic_dfao,
    collapse_equivalent_states,
    evaluate,
    infinite_canonical_states,
    load_dfao,
    parse_dfao,
    reverse_reading,
    run,
    save_dfao,
)
from .errors import CobhamError
from .numeration import DigitSet, canonical_repr, eval_word, extend_digits, represent_in_window
from .periodicity import Interval, IntervalClaim, check_local_period, glue_chain, merge_claims

__version__ = "0.1.0"
