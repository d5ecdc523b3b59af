"""Exception hierarchy shared by all modules."""


class LatticeError(Exception):
    """Base class for every error raised by torslat."""


class CycleError(LatticeError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"cover relation contains a directed cycle: {self.cycle}")


class NotReducedError(LatticeError):
    def __init__(self, cover, via):
        self.cover = cover
        self.via = via
        super().__init__(f"cover {cover} is implied through {via}")


class NotLatticeError(LatticeError):
    def __init__(self, pair, kind, candidates=()):
        self.pair = pair
        self.kind = kind
        self.candidates = list(candidates)
        super().__init__(
            f"elements {pair} have no unique {kind} (candidates: {self.candidates})")


class NotComparableError(LatticeError):
    pass


class NotPolygonalError(LatticeError):
    pass


class SizeLimitError(LatticeError):
    pass


class NotExactlyRealizableError(LatticeError):
    """A generated congruence contracted an arrow whose label was meant to survive."""

    def __init__(self, spilled, congruence=None):
        self.spilled = sorted(spilled, key=repr)
        self.congruence = congruence
        super().__init__(f"forcing spilled onto surviving labels: {self.spilled}")


class CrossValidationError(LatticeError):
    """Two independent computations of the same object disagree."""

    def __init__(self, what, diff):
        self.what = what
        self.diff = diff
        super().__init__(f"{what}: {diff}")


class NotDescentError(LatticeError):
    pass


class InjectivityError(LatticeError):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(f"ideals {first} and {second} give the same congruence")


class ParseError(LatticeError):
    pass


class ValidationError(LatticeError):
    pass
