"""
Corpus Routes - generating the bundled corpus
"""

import argparse

from triality.config import config
from triality.routes.router import CommandRouter, arg, guarded
from triality.services.corpus_service import gen_corpus
from triality.utils.constants import ExitCodes

router = CommandRouter("corpus", help="the bundled corpus of loops, groups and algebras")


@router.command("gen", help="write every bundled structure and the suite manifest", args=[
    arg("outdir", nargs="?", default=None, help="output directory (default TRIALITY_CORPUS)"),
])
@guarded
def gen(args: argparse.Namespace) -> int:
    written = gen_corpus(args.outdir or config.CORPUS_DIR)
    for path in written:
        print(path)
    return ExitCodes.SUCCESS
