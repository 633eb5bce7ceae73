"""Exceptions shared across the pipeline."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; upstream results cannot be trusted.

    Raised when two independent computations of the same quantity
    disagree (discriminants, condition implications, certificate
    re-verification).  The command line maps this to its own exit code
    because it signals a bug or a corrupted run, never bad user input.
    """
