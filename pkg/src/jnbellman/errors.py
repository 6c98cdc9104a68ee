class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class LemmaViolation(RuntimeError):
    """A bracket that the construction guarantees failed to bracket a root.

    Raised instead of silently returning garbage; the message names the
    violated hypothesis.
    """
