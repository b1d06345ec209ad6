"""Exception taxonomy shared by all modules.

Validation problems (bad arguments, out-of-domain evaluation points,
inconsistent configurations) raise ``InvalidArgumentError`` or
``DomainError``; algorithmic breakdowns (non-convergence, non-integral
winding numbers) raise ``NumericalFailureError``.  The CLI maps the
former family to exit code 2 and the latter to exit code 3.
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class DomainError(InvalidArgumentError):
    """Evaluation requested outside the branch's validity region."""


class BoundaryTooCloseError(InvalidArgumentError):
    """A root lies too close to a counting contour for safe quadrature."""


class NumericalFailureError(RuntimeError):
    """An iterative procedure failed to converge or certify."""


class SpuriousRootError(NumericalFailureError):
    """Newton collapsed onto the removable root at the origin."""
