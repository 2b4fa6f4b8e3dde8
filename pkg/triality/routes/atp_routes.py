"""
Atp Routes - CLI verbs for autotopy groups, pseudoautomorphisms and W(Q)
"""

import argparse

from triality.routes.router import CommandRouter, arg, run_and_emit

router = CommandRouter("atp", help="Atp(Q) with triality, M(Atp(Q)), PsAut(Q) and psi: Atp(Q) -> W(Q)")


@router.command("compute", help="enumerate Atp(Q) and check its triality", args=[arg("loopfile")])
def compute(args: argparse.Namespace) -> int:
    return run_and_emit("atp.compute", [args.loopfile], args)


@router.command("mloop", help="M(Atp(Q)) is isomorphic to Q", args=[arg("loopfile")])
def mloop(args: argparse.Namespace) -> int:
    return run_and_emit("atp.mloop", [args.loopfile], args)


@router.command("psi", help="W(Q) and the isomorphism psi", args=[arg("loopfile")])
def psi(args: argparse.Namespace) -> int:
    return run_and_emit("atp.psi", [args.loopfile], args)


@router.command("psaut", help="PsAut(Q) by two independent computations", args=[arg("loopfile")])
def psaut(args: argparse.Namespace) -> int:
    return run_and_emit("atp.psaut", [args.loopfile], args)
