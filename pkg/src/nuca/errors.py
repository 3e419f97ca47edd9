"""Exception hierarchy shared by every module."""

from __future__ import annotations

DEFAULT_CAP = 2**26


class NucaError(Exception):
    pass


class ContractError(NucaError, ValueError):
    """An operation was called outside its precondition."""


class EnumerationCapExceeded(NucaError):
    def __init__(self, what: str, required: int, cap: int):
        self.what = what
        self.required = required
        self.cap = cap
        super().__init__(f"{what} needs {required} evaluations, cap is {cap}")


class UnsupportedClosedForm(NucaError):
    """The closed-form stepper cannot describe the image; use evolve_cell."""


class ParseError(NucaError):
    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.lineno = lineno
        self.source = source
        where = source or "<input>"
        if lineno is not None:
            where = f"{where}:{lineno}"
        super().__init__(f"{where}: {message}")


def check_cap(what: str, required: int, cap: int | None) -> None:
    if cap is None:
        cap = DEFAULT_CAP
    if required > cap:
        raise EnumerationCapExceeded(what, required, cap)
