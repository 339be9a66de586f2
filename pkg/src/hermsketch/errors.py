class SketchError(ValueError):
    """Invalid data or an invalid query against a sketch."""


class EmptySketchError(SketchError):
    """The sketch has too few observations for the requested query."""


class IncompatibleSketchError(SketchError):
    """Sketches cannot be combined (different order, flags or modes)."""
