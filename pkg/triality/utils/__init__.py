"""
Utilities module for the triality toolkit

This module contains helper functions, constants, and the exception hierarchy.
"""

from .constants import Messages, ExitCodes, CheckStatus, Limits, CorpusFiles
from .helpers import (
    setup_logger,
    CheckResult,
    check_passed,
    check_failed,
    check_bool,
    merge_results,
    format_rational,
    parse_rational,
    one_based,
    jsonable,
    bytes_digest,
    text_digest,
)

__all__ = [
    # Constants
    'Messages',
    'ExitCodes',
    'CheckStatus',
    'Limits',
    'CorpusFiles',

    # Helper functions
    'setup_logger',
    'CheckResult',
    'check_passed',
    'check_failed',
    'check_bool',
    'merge_results',
    'format_rational',
    'parse_rational',
    'one_based',
    'jsonable',
    'bytes_digest',
    'text_digest',
]
