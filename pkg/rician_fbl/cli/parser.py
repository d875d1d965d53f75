"""
Command-line parsing.

Flags override the values of the selected figure preset; anything neither
preset nor flag sets keeps the CliConfig default.
"""

import argparse
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from ..bounds.models import BoundKind
from ..core.config import PRESETS, get_preset
from ..core.exceptions import UsageError
from ..engine.models import ALL_DIVISORS
from .models import CliConfig

logger = logging.getLogger(__name__)


def _comma_list(convert: Callable[[str], Any], what: str) -> Callable[[str], List[Any]]:
    def parse_list(text: str) -> List[Any]:
        items = [item.strip() for item in text.split(",") if item.strip()]
        if not items:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list of {what}")
        try:
            return [convert(item) for item in items]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list of {what}, got '{text}'") from None

    return parse_list


def _ell_list(text: str):
    if text.strip().lower() == ALL_DIVISORS:
        return ALL_DIVISORS
    return _comma_list(int, "integers or 'all'")(text)


def _bound_list(text: str) -> List[str]:
    names = _comma_list(str, "bound names")(text)
    try:
        return [BoundKind.parse(name).value for name in names]
    except UsageError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rician-fbl",
        description="Finite-blocklength achievability and converse bounds for SISO Rician block-fading channels",
        epilog="Rates are written in bits per channel use. Exit codes: 0 success, 1 I/O or compute failure, 2 usage error.",
    )
    parser.add_argument("--preset", choices=sorted(PRESETS) + ["none"], default="none", help="figure preset supplying defaults for every sweep flag")
    parser.add_argument("--n", dest="n_total", type=int, help="total blocklength n = n_c * ell")
    parser.add_argument("--ell", dest="ell_values", type=_ell_list, help="diversity branches: comma list of divisors of n, or 'all'")
    parser.add_argument("--kappa", dest="kappa_values", type=_comma_list(float, "numbers"), help="Rician factors (comma list)")
    parser.add_argument("--rho-db", dest="rho_db", type=float, help="SNR in dB")
    parser.add_argument("--epsilon", type=float, help="target average error probability")
    parser.add_argument("--np", dest="np_values", type=_comma_list(int, "integers"), help="pilot symbols per coherence block (comma list)")
    parser.add_argument("--bound", dest="bounds", type=_bound_list, help=f"bounds to evaluate: {', '.join(k.value for k in BoundKind)}")
    parser.add_argument("--samples", type=int, help="Monte-Carlo samples per parameter point")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--out", default=None, help="output path, '-' for standard output")
    parser.add_argument("--format", choices=["csv", "tsv"], default=None, help="output format")
    parser.add_argument("--tolerance", type=float, help="relative tolerance of the output-density integral")
    parser.add_argument("-v", "--verbose", dest="verbosity", action="count", default=0, help="more logging (repeat for debug)")
    parser.add_argument("--workers", type=int, help="worker threads for sample generation (results do not depend on it)")
    parser.add_argument("--log-file", dest="log_file", help="also write logs to this rotating file")
    return parser


_PRESET_FIELDS = ("n_total", "ell_values", "kappa_values", "rho_db", "epsilon", "np_values", "bounds")


def parse(argv: Optional[Sequence[str]] = None) -> CliConfig:
    """
    Build a CliConfig from command-line arguments.

    Unknown flags and malformed values make argparse exit with status 2.

    Raises:
        UsageError: contradictory or inconsistent settings, including an ell
            that does not divide n.
    """
    args = build_parser().parse_args(argv)

    values: Dict[str, Any] = {"preset": args.preset}
    if args.preset != "none":
        preset = get_preset(args.preset)
        for name in _PRESET_FIELDS:
            value = getattr(preset, name)
            values[name] = list(value) if isinstance(value, list) else value

    for name in ("n_total", "ell_values", "kappa_values", "rho_db", "epsilon", "np_values", "bounds", "samples", "seed", "out", "format", "tolerance", "workers", "log_file"):
        value = getattr(args, name)
        if value is not None:
            values[name] = value
    values["verbosity"] = args.verbosity

    try:
        config = CliConfig(**values)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors())
        raise UsageError(problems) from None

    config.to_sweep_spec()
    logger.debug(f"Parsed command line: {config.model_dump()}")
    return config
