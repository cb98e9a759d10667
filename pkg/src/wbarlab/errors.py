"""Exception types shared across the library."""


class CompositionError(ValueError):
    """Two ordinal maps (or morphisms built from them) do not compose."""


class InsufficientTruncation(RuntimeError):
    """An operation needs simplex data beyond the stored truncation degree."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured size budget."""


class CapExceeded(RuntimeError):
    """A chain or ordinal exceeds the cap of a capped construction."""


class FactorizationFailure(RuntimeError):
    """A map fails to factor through the requested subcomplex."""


class NotSimplicial(RuntimeError):
    """A purported simplicial map fails a structure-map equation.

    Carries the offending datum in ``witness``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class VerificationFailure(AssertionError):
    """An exhaustive identity check found a counterexample.

    Carries the offending datum in ``witness``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
