"""Exception hierarchy shared by all modules."""


class ClassPowerError(Exception):
    """Base class for operational errors raised by this package."""


class CapExceeded(ClassPowerError):
    pass


class DegreeMismatch(ClassPowerError):
    pass


class NotNormal(ClassPowerError):
    pass


class PresentationError(ClassPowerError):
    """A presentation could not be realized with its declared order."""


class SeriesBoundExceeded(ClassPowerError):
    """A derived or lower central series did not stabilize within the step bound."""


class DegenerateSpectrum(ClassPowerError):
    pass


class ValidationFailed(ClassPowerError):
    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        self.detail = detail
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class ParseError(ClassPowerError):
    pass


class MissingPowerMap(ClassPowerError):
    def __init__(self, prime):
        self.prime = prime
        super().__init__(f"no power map for prime {prime}")


class NonIntegral(ClassPowerError):
    def __init__(self, name, value, residual):
        self.name = name
        self.value = value
        self.residual = residual
        super().__init__(f"{name} = {value!r} is not integral (residual {residual:.3g})")


class CatalogueError(ClassPowerError):
    """An expected fact of a catalogue entry does not hold."""

    def __init__(self, entry, fact, expected, actual):
        self.entry = entry
        self.fact = fact
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"{entry}: fact {fact} expected {expected!r}, got {actual!r}"
        )
