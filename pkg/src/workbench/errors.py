"""Exception hierarchy. Every error the library raises is a WorkbenchError."""


class WorkbenchError(Exception):
    pass


class NonLocallyFinite(WorkbenchError):
    pass


class InvalidMetric(WorkbenchError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class EmptySet(WorkbenchError):
    pass


class LimitExceeded(WorkbenchError):
    pass


class SupplierExhausted(WorkbenchError):
    pass


class InvalidEpsilon(WorkbenchError):
    pass


class BudgetExhausted(WorkbenchError):
    pass


class CarrierEscape(WorkbenchError):
    pass


class FieldMismatch(WorkbenchError):
    pass


class BackendMismatch(WorkbenchError):
    pass


class ZeroSubspace(WorkbenchError):
    pass


class SizeCap(WorkbenchError):
    pass


class NonUnitalBackend(WorkbenchError):
    pass


class MarginTooSmall(WorkbenchError):
    pass


class NotAnIdeal(WorkbenchError):
    def __init__(self, message, generator=None):
        super().__init__(message)
        self.generator = generator


class ValidationFailed(WorkbenchError):
    pass


class BreakingVerticesPresent(WorkbenchError):
    pass


class EmptyGraph(WorkbenchError):
    pass


class NotNonExclusive(WorkbenchError):
    pass


class InfiniteEmitterUnsupported(WorkbenchError):
    pass


class NotConstructibleHere(WorkbenchError):
    pass


class OutOfWindow(WorkbenchError):
    pass


class WindowTooSmall(WorkbenchError):
    pass


class UnknownFixture(WorkbenchError):
    pass


class CapExceeded(WorkbenchError):
    pass
