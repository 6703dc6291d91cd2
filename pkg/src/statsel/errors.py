"""Exception hierarchy.

Everything raised on purpose derives from :class:`StatselError`, so the CLI can
turn any of them into a one-line diagnostic.
"""


class StatselError(Exception):
    """Base class for all library errors."""


# -- spec language -----------------------------------------------------------

class SpecError(StatselError):
    pass


class SpecSyntaxError(SpecError):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class MissingSection(SpecError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing section: {name}")


class DuplicateVariable(SpecError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"variable declared more than once: {name}")


class UnknownVariable(SpecError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown variable: {name}")


class UnknownCategory(SpecError):
    def __init__(self, category, variable=None):
        self.category = category
        self.variable = variable
        where = f" of {variable}" if variable else ""
        super().__init__(f"unknown category{where}: {category}")


class UnsupportedForm(SpecError):
    pass


class RoleConflict(SpecError):
    pass


class WithinWithoutKey(SpecError):
    pass


class InvalidAlpha(SpecError):
    pass


class InvalidAssumption(SpecError):
    pass


class InvalidDeclaration(SpecError):
    """A variable declaration violates its own invariants (categories, range)."""


class HypothesisRoleError(SpecError):
    """The hypothesis names variables in roles the design does not give them."""


class IncompleteDesign(SpecError):
    """The design names no dependent or no independent variable."""


# -- data ------------------------------------------------------------------------

class DataError(StatselError):
    pass


class MissingColumn(DataError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"column not found in data: {name}")


class TypeMismatch(DataError):
    def __init__(self, row, column, cell):
        self.row, self.column, self.cell = row, column, cell
        super().__init__(f"row {row}, column {column}: cannot parse {cell!r} as a number")


class CategoryViolation(DataError):
    def __init__(self, row, column, cell):
        self.row, self.column, self.cell = row, column, cell
        super().__init__(f"row {row}, column {column}: {cell!r} is not a declared category")


class RangeViolation(DataError):
    def __init__(self, row, column, cell):
        self.row, self.column, self.cell = row, column, cell
        super().__init__(f"row {row}, column {column}: {cell!r} is outside the declared range")


class EmptyGroup(DataError):
    def __init__(self, category):
        self.category = category
        super().__init__(f"no observations for category {category!r}")


class DuplicateCell(DataError):
    def __init__(self, unit, condition):
        self.unit, self.condition = unit, condition
        super().__init__(f"unit {unit!r} has more than one value for condition {condition!r}")


class NoCompleteUnits(DataError):
    pass


# -- statistics ------------------------------------------------------------------

class StatsError(StatselError):
    pass


class DomainError(StatsError, ValueError):
    pass


class InsufficientData(StatsError):
    def __init__(self, min_n, got=None, what="sample"):
        self.min_n = min_n
        self.got = got
        extra = f", got {got}" if got is not None else ""
        super().__init__(f"{what} needs at least {min_n} observations{extra}")


class DegenerateSample(StatsError):
    pass


class AllZeroDifferences(StatsError):
    pass


class NotTwoByTwo(StatsError):
    pass


class ZeroMargin(StatsError):
    pass


class EmptyCell(StatsError):
    pass
