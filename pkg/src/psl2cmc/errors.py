"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point, jet, or field left the model's domain (y > 0, f > 0)."""


class DegeneracyError(ArithmeticError):
    """A computed quantity is degenerate or non-finite (e.g. det <= 0)."""


class AssemblyError(RuntimeError):
    """Linear-system assembly failed; carries the offending node."""


class SolveError(RuntimeError):
    """Linear solve or fixed-point iteration failed.

    For iteration failures the partially filled report is attached as
    ``.report`` so callers can still write diagnostics.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
