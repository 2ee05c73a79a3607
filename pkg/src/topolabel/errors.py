"""Exception hierarchy shared by every module."""


class TopoLabelError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(TopoLabelError, ValueError):
    pass


class InvalidRadius(TopoLabelError, ValueError):
    pass


class InvalidFiltration(TopoLabelError, ValueError):
    pass


class InfiniteCoordinate(TopoLabelError, ValueError):
    pass


class InvalidOrder(TopoLabelError, ValueError):
    pass


class DimensionMismatch(TopoLabelError, ValueError):
    pass


class ClassTooSmall(TopoLabelError, ValueError):
    pass


class IngestError(TopoLabelError, ValueError):
    """Raised on malformed CSV input; carries the offending row/column."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column
