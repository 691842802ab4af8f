"""Typed failure modes.

Every error that aborts a verification run carries enough context to
reproduce the failing computation.  Certificate failures are distinct from
precision failures: the former indicate a convention or data bug, the
latter are recoverable by escalation.
"""


class HvError(Exception):
    pass


# exact linear algebra
class InconsistentSystem(HvError):
    pass


class PrecisionExhausted(HvError):
    """A Z/p^K pivot had valuation >= K."""


# log table
class NotPrime(HvError):
    pass


# local Eisenstein algebra
class NotDistinguished(HvError):
    """Minimal polynomial of eta fails distinguishedness."""


class ChainTooShort(HvError):
    pass


class NotGenerator(HvError):
    pass


class TheoremViolation(HvError):
    """Regression tripwire: a proved identity failed on actual data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


# supersingular module
class NoModularPolynomial(HvError):
    pass


class BasisMismatch(HvError):
    pass


class NotInert(HvError):
    pass


class RoundingUncertain(HvError):
    """Integer recognition margin too small after escalation cap."""


class CharacterOrderMismatch(HvError):
    pass


# weight-2 forms
class RankDeficient(HvError):
    pass


class NotInSpan(HvError):
    pass


class CoefficientOutOfReach(HvError):
    """Requested Hecke coefficient needs an unavailable T_ell table."""


# modular symbols
class NotInGamma0(HvError):
    pass


class EigenCertificateFailed(HvError):
    pass


class NoSquareRoot(HvError):
    pass


class WrongUnitNorm(HvError):
    pass


class SignatureMismatch(HvError):
    pass


class PrecisionTarget(HvError):
    pass


# dihedral side
class NotFundamental(HvError):
    pass


class NotCuspidal(HvError):
    pass


class RecognitionFailed(HvError):
    pass


class BadWqMatrix(HvError):
    pass


class CertificateFailed(HvError):
    """Traced series failed the exact-space membership certificate."""


# L-values
class InsufficientCoefficients(HvError):
    pass


class CalibrationDrift(HvError):
    pass


class ZeroDenominator(HvError):
    pass


class InconsistentAcrossLevels(HvError):
    pass


# orchestration
class InconsistentResidues(HvError):
    pass


class InsufficientRuns(HvError):
    pass


class InstanceRejected(HvError):
    pass
