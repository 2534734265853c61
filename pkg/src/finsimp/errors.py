"""Exception taxonomy shared across the package.

Two top-level families matter for the CLI exit-code contract: bad input
(exit 1) versus a falsified certified claim (exit 2).
"""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class HypothesisError(InputError):
    """An operation was invoked outside its stated hypotheses.

    Raised instead of guessing (e.g. attaching a diagram to a complex that
    does not contain the diagram's boundary image).
    """


class CertificateError(RuntimeError):
    """A machine-checked claim failed to verify.

    Carries an optional ``witness`` payload describing the violating
    configuration so callers can report it verbatim.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class StaircaseDefectError(CertificateError):
    """A staircase completion failed the equal-defect sweep over shuffles."""


class MatchingError(CertificateError):
    """The inner-face matching on over-defect strings failed an invariant."""


class OrderAuditError(CertificateError):
    """The precedence-order audit found a face that sorts after its host."""


class DualConstructionError(CertificateError):
    """Two independent constructions of the same object disagree."""
