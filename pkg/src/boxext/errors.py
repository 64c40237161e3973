"""Exception types shared across the package."""


class BoxextError(Exception):
    """Base class for all package-specific errors."""


class HypothesisViolation(BoxextError):
    """An input fails the documented preconditions of an extension routine.

    Carries the offending report so callers (and the CLI) can name the
    violated hypotheses.
    """

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.violations))


class InternalInvariantError(BoxextError):
    """A state the construction proofs rule out was reached; this is a bug
    signal, never a user error."""
