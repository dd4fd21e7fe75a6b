"""Central registry of theorem checks used by the command line."""

from typing import Callable, Dict, NamedTuple, Optional, Tuple


class CheckSpec(NamedTuple):
    """How to call one check.

    ``inputs`` are the body roles the check takes positionally, in order;
    ``sample_arg`` names the keyword that receives the sample count of the
    check's outer loop (apexes, tangent planes, ...), if any.
    """

    id: str
    func: Callable
    inputs: Tuple[str, ...]
    sample_arg: Optional[str] = None
    description: str = ""


class CheckRegistry:
    """Map a check id to its :class:`CheckSpec`."""

    def __init__(self):
        self._checks: Dict[str, CheckSpec] = {}

    def register(self, check_id, func, inputs, sample_arg=None, description=""):
        """Register ``func`` under ``check_id``.

        Raises ``ValueError`` if ``check_id`` is already present or
        ``TypeError`` if ``func`` is not callable.
        """

        if not callable(func):
            raise TypeError("func must be callable")
        if check_id in self._checks:
            raise ValueError(f"Check '{check_id}' is already registered")
        self._checks[check_id] = CheckSpec(check_id, func, tuple(inputs), sample_arg, description)

    def get(self, check_id):
        """Return the spec registered under ``check_id`` if any."""

        return self._checks.get(check_id)

    def all(self):
        return dict(self._checks)

    def ids(self):
        return sorted(self._checks)


# Global registry instance used throughout the project.
check_registry = CheckRegistry()


__all__ = ["CheckRegistry", "CheckSpec", "check_registry"]
