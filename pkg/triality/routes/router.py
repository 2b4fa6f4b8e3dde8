"""
Command router - groups the verbs of one CLI noun and shares report output

Each routes module creates a CommandRouter for its noun and registers verbs
with the command decorator; app.py mounts every router on the argparse tree.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from triality.models.schemas import Report
from triality.services import suite_service
from triality.utils.constants import CheckStatus, ExitCodes
from triality.utils.errors import TrialityError
from triality.utils.helpers import setup_logger

# Setup logging
logger = setup_logger(__name__)

Handler = Callable[[argparse.Namespace], int]
ArgSpec = Tuple[Tuple[str, ...], Dict[str, Any]]

# Options forwarded from parsed flags to the check runners
FORWARDED = ("seed", "degree", "samples", "points", "params", "corrupt")


def arg(*flags: str, **kwargs: Any) -> ArgSpec:
    return flags, kwargs


def add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")
    parser.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    parser.add_argument("--degree", type=int, default=None, help="PBW degree for enveloping-algebra checks")
    parser.add_argument("--samples", type=int, default=None, help="sample count for sampled checks")
    parser.add_argument("--max-order", type=int, default=None, dest="max_order", help="loop order cap")


class CommandRouter:
    """Verbs of one noun; a verb named None is the noun itself"""

    def __init__(self, noun: str, help: str):
        self.noun = noun
        self.help = help
        self.commands: List[Tuple[Optional[str], str, Sequence[ArgSpec], Handler]] = []

    def command(self, verb: Optional[str], help: str, args: Sequence[ArgSpec] = ()) -> Callable[[Handler], Handler]:
        def decorator(fn: Handler) -> Handler:
            self.commands.append((verb, help, args, fn))
            return fn
        return decorator

    def mount(self, subparsers) -> None:
        noun_parser = subparsers.add_parser(self.noun, help=self.help, description=self.help)
        roots = [c for c in self.commands if c[0] is None]
        if roots:
            _, _, specs, fn = roots[0]
            self._configure(noun_parser, specs, fn)
            return
        verbs = noun_parser.add_subparsers(dest="verb", metavar="<verb>")
        verbs.required = True
        for verb, help, specs, fn in self.commands:
            parser = verbs.add_parser(verb, help=help, description=help)
            self._configure(parser, specs, fn)

    @staticmethod
    def _configure(parser: argparse.ArgumentParser, specs: Sequence[ArgSpec], fn: Handler) -> None:
        for flags, kwargs in specs:
            parser.add_argument(*flags, **kwargs)
        add_common_flags(parser)
        parser.set_defaults(handler=fn)


def options_from(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: getattr(args, key) for key in FORWARDED if getattr(args, key, None) is not None}


def print_report(report: Report, as_json: bool) -> None:
    if as_json:
        print(report.model_dump_json(indent=2))
        return
    print(f"{report.check}: {report.status} ({report.timing_seconds:.2f}s)")
    if report.witness:
        print(f"  witness: {json.dumps(report.witness)}")
    if report.status == CheckStatus.ERROR:
        print(f"  error: {report.details.get('error')}")
    for key, value in report.counts.items():
        print(f"  {key}: {value}")


def run_and_emit(check: str, inputs: Sequence[str], args: argparse.Namespace, **extra: Any) -> int:
    """Run a named check and print its report; the exit code follows the status"""
    options = {**options_from(args), **extra}
    report = suite_service.run_check(check, [Path(p) for p in inputs], options)
    print_report(report, args.json)
    return suite_service.exit_code([report])


def emit_json(payload: Any, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def guarded(fn: Handler) -> Handler:
    """Input and IO errors in non-check commands become exit code 2"""
    def wrapper(args: argparse.Namespace) -> int:
        try:
            return fn(args)
        except (TrialityError, OSError) as e:
            logger.error(f"{fn.__name__}: {e}")
            if getattr(args, "json", False):
                print(json.dumps({"status": CheckStatus.ERROR, "error": str(e)}))
            else:
                print(f"error: {e}", file=sys.stderr)
            return ExitCodes.USAGE_ERROR
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper
