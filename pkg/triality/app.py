"""
triality - Main command-line application

Exact verification of groups with triality, Moufang loops, Hopf algebras with
triality and Moufang-Hopf algebras:

- **Loops**: Moufang identities, Doro relations, Chein loops and O16
- **Groups with triality**: the triality predicate, M(G), Z_S(G), Atp embedding
- **Autotopies**: Atp(Q), PsAut(Q), W(Q) and the isomorphism between them
- **Algebras**: Cayley algebras, o(O,n), Malcev algebras and Lie(O0)
- **Hopf algebras**: group, loop and enveloping algebras, MH(H), Doro(U)
- **Convolution**: Mor(C, FQ) and Atp_C(FQ) for group-like coalgebras

Every check prints a report; `--json` gives the machine-readable form.
Exit codes: 0 all pass, 1 any fail, 2 usage or input error.
"""

import argparse
import sys
from typing import List, Optional

from triality import __version__
from triality.config import Config, config
from triality.routes import ROUTERS
from triality.utils.constants import ExitCodes
from triality.utils.helpers import setup_logger

# Setup logging
logger = setup_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triality",
        description="Exact verification toolkit for groups with triality and Moufang-Hopf algebras",
    )
    parser.add_argument("--version", action="version", version=f"triality {__version__}")
    nouns = parser.add_subparsers(dest="noun", metavar="<noun>")
    nouns.required = True
    for router in ROUTERS:
        router.mount(nouns)
    return parser


def apply_overrides(args: argparse.Namespace) -> None:
    """Flags override the environment for this run"""
    if args.seed is not None:
        Config.SEED = args.seed
    if args.samples is not None:
        Config.SAMPLES = args.samples
        Config.CONV_SAMPLES = args.samples
    if args.degree is not None:
        Config.DEGREE = args.degree
    if args.max_order is not None:
        Config.MAX_LOOP_ORDER = args.max_order


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ExitCodes.SUCCESS if e.code == 0 else ExitCodes.USAGE_ERROR

    apply_overrides(args)
    problems = config.validate()
    if problems:
        for problem in problems:
            logger.error(f"Configuration: {problem}")
        return ExitCodes.USAGE_ERROR

    logger.debug(f"triality {__version__}: {args.noun} {getattr(args, 'verb', '') or ''}")
    try:
        return args.handler(args)
    except Exception as e:
        logger.error(f"Unhandled error in {args.noun}: {e}")
        return ExitCodes.USAGE_ERROR


if __name__ == '__main__':
    sys.exit(main())
