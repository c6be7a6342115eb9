"""Exception types raised across the package."""


class YBError(Exception):
    """Base class for all errors raised by ybmaps."""


class DivisionByZero(YBError, ZeroDivisionError):
    pass


class SingularLocusError(YBError, ZeroDivisionError):
    """A map or expression was evaluated where one of its denominators vanishes."""

    def __init__(self, guard: str, message: str | None = None):
        self.guard = guard
        super().__init__(message or f"singular locus: {guard} = 0")


class UnknownNameError(YBError, KeyError):
    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind}: {name!r}")

    def __str__(self):
        return self.args[0]


class SizeMismatchError(YBError, ValueError):
    pass


class ArityError(YBError, ValueError):
    pass


class ComplexRootsError(YBError, ValueError):
    pass


class DegenerateConstraintError(YBError, ValueError):
    pass


class SamplingExhaustedError(YBError, RuntimeError):
    pass


class NearSingularAbort(YBError, RuntimeError):
    """Orbit iteration stopped before reaching a guard locus (or overflowing)."""

    def __init__(self, step: int, reason: str, records=None):
        self.step = step
        self.reason = reason
        self.records = records or []
        super().__init__(f"orbit aborted after step {step}: {reason}")
