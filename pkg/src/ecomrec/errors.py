"""Exception hierarchy shared by every stage of the pipeline."""


class EcomrecError(Exception):
    """Base class for all errors raised by this package."""


# core data
class EmptyColumn(EcomrecError, ValueError):
    pass


class SchemaMismatch(EcomrecError, ValueError):
    pass


class ParseError(EcomrecError, ValueError):
    pass


class UnseenCategory(EcomrecError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DegenerateTarget(EcomrecError, ValueError):
    pass


class TooFewRows(EcomrecError, ValueError):
    pass


# ingest
class EmptyInput(EcomrecError, ValueError):
    pass


class RaggedRow(EcomrecError, ValueError):
    def __init__(self, line, expected=None, got=None):
        self.line = line
        msg = f"ragged row at line {line}"
        if expected is not None:
            msg += f": expected {expected} fields, got {got}"
        super().__init__(msg)


class BadQuoting(EcomrecError, ValueError):
    def __init__(self, line, detail=""):
        self.line = line
        super().__init__(f"bad quoting at line {line}" + (f": {detail}" if detail else ""))


class BadConfig(EcomrecError, ValueError):
    pass


# numerics / models
class DegenerateInput(EcomrecError, ValueError):
    pass


class ZeroVarianceAllColumns(EcomrecError, ValueError):
    pass


class DimensionMismatch(EcomrecError, ValueError):
    pass


class SingleClass(EcomrecError, ValueError):
    pass


class NonFiniteLoss(EcomrecError, FloatingPointError):
    pass


class EmptySet(EcomrecError, ValueError):
    pass


class BadPartition(EcomrecError, ValueError):
    pass


class BadHyperparameters(EcomrecError, ValueError):
    pass


class ModelFormatError(EcomrecError, ValueError):
    """Serialized model has an unknown kind tag, version, or layout."""


# metrics
class LengthMismatch(EcomrecError, ValueError):
    pass


class ConstantTruth(EcomrecError, ValueError):
    pass


class StageError(EcomrecError):
    """Wraps a failure with the name of the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
