"""Exception hierarchy shared by every module."""


class OntoDPError(Exception):
    pass


class ParseError(OntoDPError, ValueError):
    """A fixture file failed to parse. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.message = message
        self.line = line
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.path or "<input>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.message}"


class SchemaError(OntoDPError, ValueError):
    """The schema itself is inconsistent."""


class SchemaViolation(OntoDPError):
    """A graph uses a predicate the schema does not declare."""


class RuleError(OntoDPError, ValueError):
    """A rule or query is malformed (e.g. unsafe head variable)."""


class BudgetExceeded(OntoDPError):
    pass


class FixpointBudgetExceeded(BudgetExceeded):
    pass


class AntecedentBudgetExceeded(BudgetExceeded):
    pass


class NotSaturated(OntoDPError):
    pass


class InvalidEpsilon(OntoDPError, ValueError):
    pass


class DegenerateGame(OntoDPError):
    pass
