"""Exception hierarchy shared by every module."""


class TypeFrameError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(TypeFrameError, ValueError):
    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownAtom(TypeFrameError, ValueError):
    pass


class ThresholdOutOfRange(TypeFrameError, ValueError):
    pass


class ThresholdNotInSet(TypeFrameError, ValueError):
    pass


class AgentOutOfRange(TypeFrameError, ValueError):
    pass


class BudgetExceeded(TypeFrameError):
    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"search space of {needed} exceeds budget {budget}")


class SpaceMismatch(TypeFrameError, ValueError):
    pass


class PointNotInCarrier(TypeFrameError, KeyError):
    pass


class NonMeasurableMap(TypeFrameError, ValueError):
    pass


class FactorIndexOutOfRange(TypeFrameError, IndexError):
    pass


class VocabMismatch(TypeFrameError, ValueError):
    pass


class StateSpaceMismatch(TypeFrameError, ValueError):
    pass


class ArityMismatch(TypeFrameError, ValueError):
    pass


class NonUniqueBeliefExtension(TypeFrameError):
    """Two witnesses of one type class induce different belief measures.

    Only possible when the threshold set is not dense; ``candidates`` holds
    the two competing measures.
    """

    def __init__(self, agent, type_point, candidates):
        self.agent = agent
        self.type_point = type_point
        self.candidates = tuple(candidates)
        super().__init__(
            f"agent {agent}, type {type_point!r}: belief measure is not determined "
            f"by the threshold set ({len(self.candidates)} distinct candidates)"
        )


class NonDenseThresholds(TypeFrameError, ValueError):
    pass


class NonSingletonStateAlgebra(TypeFrameError, ValueError):
    pass


class SchemaError(TypeFrameError, ValueError):
    pass
