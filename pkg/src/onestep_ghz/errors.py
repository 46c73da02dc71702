"""Exception hierarchy shared by every module of the package."""


class OneStepError(Exception):
    """Base class for all package errors."""


class ShapeError(OneStepError, ValueError):
    """Arity or length mismatch between states, bitstrings or party indices."""


class InvalidArityError(ShapeError):
    """Fewer than two parties."""


class StageOrderError(OneStepError, RuntimeError):
    """An element was applied to a photon that is not at the expected stage."""


class MissingDOFError(StageOrderError):
    """The photon lacks the degree of freedom the element acts on."""


class FactorizationError(OneStepError, ValueError):
    """The state does not factor into polarization times a fixed label pattern."""


class NotGhzBasisError(OneStepError, ValueError):
    """A polarization state is not a member of the GHZ basis."""


class InvalidInputError(OneStepError, ValueError):
    """Probability tables that violate their invariants."""


class ConfigError(OneStepError, ValueError):
    """Experiment configuration failed validation.

    ``path`` is the dotted location of the offending field.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


class OracleMismatchError(OneStepError, AssertionError):
    """Sparse engine and dense oracle disagree."""
