"""Exception types shared across the library.

The CLI maps these onto its exit-code contract (see cli.py), so raising the
right class matters more than the message text.
"""


class FermatLabError(Exception):
    """Base class for all library-specific errors."""


class IndexOutOfRangeError(FermatLabError, ValueError):
    """Fermat index n is negative or exceeds the configured maximum."""


class IndexBelowTwoError(FermatLabError, ValueError):
    """Operation needs n >= 2 so that (F_n - 1)/4 is an integer power of two."""


class ModulusMismatchError(FermatLabError, ValueError):
    """Two residues with different Fermat indices were combined."""


class NonAdmissibleBaseError(FermatLabError, ValueError):
    """Pepin run requested with a base outside the admissible set, no override."""


class BaseNotCoprimeError(FermatLabError, ValueError):
    """gcd(base, F_n) != 1.

    The gcd is itself a nontrivial factor of F_n, so it is carried on the
    exception rather than discarded.
    """

    def __init__(self, message: str, gcd: int):
        super().__init__(message)
        self.gcd = gcd


class TheoremViolationError(FermatLabError):
    """A congruence law the library treats as ground truth failed to hold.

    This cannot fire on correct arithmetic; if it does, either the arithmetic
    is broken or something genuinely remarkable happened, and the transcript
    carries every residue needed to reproduce the event.
    """

    def __init__(self, message: str, violations, transcript):
        super().__init__(message)
        self.violations = tuple(violations)
        self.transcript = dict(transcript)


class CheckpointError(FermatLabError):
    """Checkpoint file is unreadable, tampered with, or inconsistent."""


class NotADivisorError(FermatLabError, ValueError):
    """Divisor-structure validation called on a candidate that does not divide."""
