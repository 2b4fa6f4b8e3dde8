"""
Suite Routes - running a manifest of checks
"""

import argparse
import json
from pathlib import Path

from triality.config import config
from triality.routes.router import CommandRouter, arg, guarded, options_from
from triality.services.suite_service import run_suite, suite_exit_code

router = CommandRouter("suite", help="run a manifest of checks and write reports")


@router.command("run", help="run every manifest entry; writes one report per check and summary.json", args=[
    arg("manifest"),
    arg("--reports", help="report directory (default TRIALITY_REPORT_DIR)"),
])
@guarded
def run(args: argparse.Namespace) -> int:
    report_dir = Path(args.reports) if args.reports else config.report_dir()
    overrides = {k: v for k, v in options_from(args).items() if k in ("seed", "samples", "degree")}
    summary, _ = run_suite(Path(args.manifest), report_dir, overrides)
    if args.json:
        print(summary.model_dump_json(indent=2))
    else:
        for entry in summary.entries:
            print(f"{entry.status:14} {entry.check} {' '.join(entry.inputs)}")
        print(json.dumps({"passed": summary.passed, "expected_failures": summary.expected_failures,
                          "failed": summary.failed, "errors": summary.errors}))
    return suite_exit_code(summary)
