"""
Exception hierarchy for the Ex-Ante IM toolkit
"""


class ExAnteIMError(Exception):
    """Base class for all toolkit errors"""


class InvalidInputError(ExAnteIMError, ValueError):
    """An argument violates an operation's precondition"""


class InstanceTooLargeError(ExAnteIMError):
    """Exact enumeration was asked for an instance beyond its size guard"""

    def __init__(self, n: int, steps: int, max_nodes: int, max_steps: int):
        self.n = n
        self.steps = steps
        super().__init__(
            f"exact_sigma supports n <= {max_nodes} and at most {max_steps} "
            f"step transitions, got n={n} and {steps}"
        )


class DatasetParseError(ExAnteIMError):
    """A dataset file could not be read or parsed"""


class IncompatibleSpecError(ExAnteIMError, ValueError):
    """An experiment spec cannot run against the loaded network"""
