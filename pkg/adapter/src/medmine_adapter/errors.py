"""Adapter error hierarchy."""


class AdapterError(Exception):
    """Base class for every error the adapter raises on purpose."""


class FormatError(AdapterError):
    """An input file does not satisfy its contract."""

    def __init__(self, path: str, line_no: int | None, message: str):
        self.path = path
        self.line_no = line_no
        where = f"{path}:{line_no}" if line_no else str(path)
        super().__init__(f"{where}: {message}")


class CheckpointError(AdapterError):
    """A checkpoint directory is missing, incomplete, or inconsistent."""


class ResourceError(AdapterError):
    """A required model backend or resource is unavailable."""
