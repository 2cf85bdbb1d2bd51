"""Exception hierarchy shared by all fictplay modules."""


class FictPlayError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(FictPlayError, ValueError):
    pass


class EmptyHistoryError(FictPlayError, ValueError):
    pass


class DesyncError(FictPlayError, ValueError):
    """Row and column histories cover a different number of rounds."""


class ConstructionError(FictPlayError, ValueError):
    pass


class StructureError(FictPlayError, ValueError):
    pass


class UnsupportedError(FictPlayError):
    pass


class TieStateError(FictPlayError):
    """An argmax set is not a singleton, so no closed-form jump applies."""


class DivergenceNotice(FictPlayError):
    """The current profile is absorbing and no horizon was given."""


class PersistentTieError(FictPlayError):
    def __init__(self, round_: int, row_ties: tuple[int, ...], col_ties: tuple[int, ...]):
        super().__init__(
            f"tie persisted past the budget at round {round_}: "
            f"rows {list(row_ties)}, cols {list(col_ties)}"
        )
        self.round = round_
        self.row_ties = row_ties
        self.col_ties = col_ties


class NotReached(FictPlayError):
    def __init__(self, cap: int):
        super().__init__(f"target not reached within {cap} rounds")
        self.cap = cap


class LemmaViolation(FictPlayError):
    """A sampled profile contradicts the unique approximate equilibrium claim."""


class DomainError(FictPlayError, ValueError):
    pass


class PreconditionError(FictPlayError, ValueError):
    pass


class MissingDataError(FictPlayError, ValueError):
    pass


class UsageError(FictPlayError, ValueError):
    pass
