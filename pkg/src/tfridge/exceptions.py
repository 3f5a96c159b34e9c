"""Exception hierarchy shared by all tfridge modules."""


class TFRidgeError(Exception):
    """Base class for every error raised by tfridge."""


class ValidationError(TFRidgeError, ValueError):
    """Input violates a construction contract."""


class NonPositiveStep(ValidationError):
    pass


class TooFewSamples(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    pass


class NonUniformGrid(ValidationError):
    pass


class InvalidParameter(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ScaleTooSmall(ValidationError):
    pass


class AtomExceedsGrid(ValidationError):
    pass


class BandOutOfRange(ValidationError):
    pass


class TooFewVoices(ValidationError):
    pass


class BadThreshold(ValidationError):
    pass


class FrequencyOutOfBand(ValidationError):
    pass


class WindowTooShort(ValidationError):
    pass


class ConfigError(ValidationError):
    """Malformed run configuration (unknown keys, missing source, ...)."""


class NumericalError(TFRidgeError, ArithmeticError):
    """A numerical procedure failed to meet its accuracy contract."""


class TruncationNotConverged(NumericalError):
    pass


class StepUnstable(NumericalError):
    pass


class FitDiverged(NumericalError):
    pass
