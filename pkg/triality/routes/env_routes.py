"""
Env Routes - CLI verbs for universal enveloping algebras
"""

import argparse

from triality.routes.router import CommandRouter, arg, run_and_emit

router = CommandRouter("env", help="U(g) by PBW: Hopf triality, the action identity, MH(U(Lie(O0)))")


@router.command("triality-check", help="Hopf triality of U(g) up to a PBW degree", args=[arg("liefile")])
def triality_check(args: argparse.Namespace) -> int:
    return run_and_emit("env.triality-check", [args.liefile], args)


@router.command("action-check", help="the action identity on g for PBW monomials", args=[arg("liefile")])
def action_check(args: argparse.Namespace) -> int:
    return run_and_emit("env.action-check", [args.liefile], args)


@router.command("mh", help="the circle-word slice of MH(U(Lie(O0)))", args=[
    arg("--malcev", default="o0", choices=["o0"], help="Malcev algebra (only O0)"),
    arg("--params", default="-1,-1,-1", help="Cayley parameters a,b,c"),
])
def mh(args: argparse.Namespace) -> int:
    return run_and_emit("env.mh", [], args)
