"""Exception hierarchy shared by every module."""


class SpecificationError(ValueError):
    """Input violates a documented invariant (malformed spec, bad precondition)."""


class CapabilityError(RuntimeError):
    """Request is well formed but outside what this build can handle."""


class EnumerationOverflow(RuntimeError):
    """More objects exist than the caller's cap allows."""


class TheoremInapplicable(CapabilityError):
    """Size threshold of a constructive theorem is not met."""


class TheoremAlarm(AssertionError):
    """A proven statement failed on a concrete instance.

    Raising this means either a bug or a counterexample; the CLI maps it to
    exit code 3.
    """
