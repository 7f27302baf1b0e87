"""
This module defines errors specific to the power minimization toolkit.
Infeasibility is not an error; it is reported as a status.
"""
from typing import Union
from pathlib import Path


class DimensionMismatchError(ValueError):
    """
    Problem caused by inconsistent numbers of users, rows or elements.
    """


class DegenerateChannelError(ArithmeticError):
    """
    Problem caused by a user whose direct gain vanishes, so it cannot be served.
    """

    def __init__(self, user: int, gain: float):
        super().__init__(f'Direct gain of user {user} is degenerate: {gain}')
        self.user = user
        self.gain = gain


class DegenerateRecoveryError(ArithmeticError):
    """
    Problem caused by a vanishing recovered direction in the dual method.
    """

    def __init__(self, user: int):
        super().__init__(f'Recovered direction of user {user} is the zero vector.')
        self.user = user


class SolverError(RuntimeError):
    """
    Problem caused by the conic back end.
    """


class ConfigurationError(ValueError):
    """
    Problem caused by an experiment configuration file. Anchored at a line.
    """

    def __init__(self, path: Union[str, Path], line: int, reason: str):
        super().__init__(f'{path}:{line}: {reason}')
        self.path = str(path)
        self.line = line
        self.reason = reason


class SummaryError(ValueError):
    """
    Problem caused by a result file that cannot be summarized.
    """
