"""
Constants for the triality toolkit
"""


# Report and log messages
class Messages:
    CHECK_FAILED = "check failed"
    UNKNOWN_FORMAT = "unrecognised input format"
    UNIT_NOT_FIRST = "unit element must be index 1"
    NO_UNIT = "table has no two-sided unit"
    EMPTY_TABLE = "table is empty"


# Process exit codes
class ExitCodes:
    SUCCESS = 0
    FAILURE = 1
    USAGE_ERROR = 2


# Report status values
class CheckStatus:
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"
    EXPECTED_FAIL = "expected-fail"


# Structural constants of the corpus
class Limits:
    DORO_FAMILIES = 12
    OCTONION_DIM = 8
    TRACELESS_DIM = 7
    DER_DIM = 14
    ORTHO_DIM = 28
    MAX_PBW_DEGREE = 3
    SMALL_LIE_DIM = 9


# Corpus file names
class CorpusFiles:
    CHEIN12 = "chein12.loop"
    O16 = "o16.loop"
    NONMOUFANG5 = "nonmoufang5.loop"
    S3_WREATH = "s3wreath.json"
    C4_INVERSION = "c4inv.json"
    CAYLEY = "cayley.json"
    ORTHO = "oon.json"
    MANIFEST = "manifest.json"
