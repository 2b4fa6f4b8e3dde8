"""
Lie Routes - CLI verbs for Lie algebras with triality
"""

import argparse

from triality.routes.router import CommandRouter, arg, run_and_emit

router = CommandRouter("lie", help="Lie algebras with triality given by structure constants")


@router.command("triality-check", help="automorphisms, S3 relations, triality identity, E(1) criterion",
                args=[arg("file")])
def triality_check(args: argparse.Namespace) -> int:
    return run_and_emit("lie.triality-check", [args.file], args)
