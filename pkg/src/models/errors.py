"""Exceptions raised by the simulation engines and the scenario layer.

The CLI maps them to exit codes:
 - ScenarioError, InvalidRangeError -> 2
 - NumericalContractError -> 3
 - any other HomDipError -> 1
"""


class HomDipError(Exception):
    pass


class InvalidRangeError(HomDipError, ValueError):
    pass


class AliasingError(HomDipError, ValueError):
    pass


class GridMismatchError(HomDipError, ValueError):
    pass


class DegenerateSamplesError(HomDipError, ValueError):
    pass


class PhotonNumberError(HomDipError, ValueError):
    pass


class NumericalContractError(HomDipError, ArithmeticError):
    pass


class ScenarioError(HomDipError, ValueError):
    """Parse or validation failure in a scenario document."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None) -> None:
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f'line {line}')
        if field is not None:
            location.append(f'field {field!r}')
        super().__init__(f'{message} ({", ".join(location)})' if location else message)
