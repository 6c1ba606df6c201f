from typing import Optional


class ConfigError(ValueError):
    """Invalid job configuration. Maps to exit status 2 in the CLI."""

    def __init__(
        self, message: str, key: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        self.key = key
        self.line = line
        where = ""
        if key is not None:
            where += f" (key '{key}'"
            where += f", line {line})" if line is not None else ")"
        super().__init__(f"{message}{where}")


class DomainError(ValueError):
    """Evaluation outside the domain of an operator or formula (poles, normalization zeros, non-generic input)."""


class StructureError(RuntimeError):
    """A structural invariant was violated by construction."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not reach the requested accuracy."""
