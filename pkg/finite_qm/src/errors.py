"""
Error root for the finite-qm package.

Each module declares its own exception family at the bottom of the module;
all of them derive from FiniteQMError so the CLI can map any failure to an
exit code without knowing where it came from.

Exit codes:
    0  success
    1  input / validation error (default for every FiniteQMError)
    2  incommensurable spectrum
    3  enumeration cap exceeded
"""

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCOMMENSURABLE = 2
EXIT_CAP_EXCEEDED = 3


class FiniteQMError(Exception):
    """Base exception for finite-qm errors."""
    exit_code: int = EXIT_INPUT_ERROR
