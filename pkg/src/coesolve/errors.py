"""Exception taxonomy shared by all modules.

Every failure mode that callers are expected to branch on gets its own
class; the CLI maps them onto exit codes (config 2, numerical 3,
admissibility 4).
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class UnsupportedKernelError(InvalidArgumentError):
    """Kernel kind outside the supported enumeration."""


class DegenerateSymbolError(ArithmeticError):
    """The symbol denominator mu_hat(xi) + nu fell below the safe floor."""


class SymbolBlowupError(ArithmeticError):
    """A multiplier symbol evaluated to a non-finite value."""

    def __init__(self, message, h=None, xi=None):
        super().__init__(message)
        self.h = h
        self.xi = xi


class ConditionNotCheckedError(RuntimeError):
    """A solve was requested before the admissibility check ran and passed."""


class AdmissibilityError(ConditionNotCheckedError):
    """The admissibility check ran and at least one clause failed."""


class SingularResolventError(ArithmeticError):
    """A shifted-operator solve hit a (numerically) singular matrix."""


class DegenerateSampleError(RuntimeError):
    """Every sampled tuple of a statistical estimate had to be discarded."""


class DegenerateBoundaryError(InvalidArgumentError):
    """Two-point boundary conditions with vanishing nondegeneracy determinant."""


class BlowUpError(ArithmeticError):
    """A linear evolution produced non-finite values (linear runs must not)."""


class ConfigError(ValueError):
    """A scenario configuration failed schema validation.

    ``path`` locates the offending key, dotted from the document root.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
