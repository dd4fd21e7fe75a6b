"""Central registry of body kinds used by the body spec parser."""

from typing import Callable, Dict

from .base import ConvexBody


class BodyRegistry:
    """Map a body spec ``kind`` to its body class and parser.

    A parser takes the decoded document mapping and a dotted field prefix
    (used to name nested fields in errors) and returns a body.
    """

    def __init__(self):
        self._classes: Dict[str, type] = {}
        self._parsers: Dict[str, Callable] = {}

    def register(self, kind, body_class, parser):
        """Register ``body_class`` and ``parser`` under ``kind``.

        Raises ``ValueError`` if ``kind`` is already present or ``TypeError``
        if ``body_class`` is not a ``ConvexBody`` subclass.
        """

        if not (isinstance(body_class, type) and issubclass(body_class, ConvexBody)):
            raise TypeError("body_class must subclass ConvexBody")
        if kind in self._classes:
            raise ValueError(f"Body kind '{kind}' is already registered")
        self._classes[kind] = body_class
        self._parsers[kind] = parser

    def get(self, kind):
        """Return the body class registered under ``kind`` if any."""

        return self._classes.get(kind)

    def parser(self, kind):
        return self._parsers.get(kind)

    def all(self):
        return dict(self._classes)


# Global registry instance used throughout the project.
body_registry = BodyRegistry()


__all__ = ["BodyRegistry", "body_registry"]
