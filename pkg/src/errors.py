"""
Exception hierarchy shared by every sub-package.

The CLI maps InputError and ConfigError to exit code 1.
"""

from typing import Optional


class AttentionError(Exception):
    """Base class for all analysis errors"""


class ConfigError(AttentionError):
    """Invalid run configuration or bundled data file"""


# ==================== INPUT ====================

class InputError(AttentionError):
    """Problem with the input dataset"""


class FileUnreadable(InputError):
    def __init__(self, path, reason: str = ""):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"cannot read {self.path}: {reason}" if reason else f"cannot read {self.path}")


class SchemaViolation(InputError):
    def __init__(self, row: int, field: str, reason: str, source: Optional[str] = None):
        self.row = row
        self.field = field
        self.reason = reason
        self.source = source
        where = f"{source} " if source else ""
        super().__init__(f"{where}row {row}: field '{field}': {reason}")


class DuplicateEventId(InputError):
    def __init__(self, event_id: str, row: Optional[int] = None):
        self.event_id = event_id
        self.row = row
        suffix = f" (row {row})" if row is not None else ""
        super().__init__(f"duplicate event_id '{event_id}'{suffix}")


class EmptyDataset(InputError):
    def __init__(self, what: str = "dataset has no events"):
        super().__init__(what)


class InvalidDataset(InputError):
    """Validation found fatal diagnostics"""
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        super().__init__(f"{len(self.diagnostics)} fatal diagnostic(s), first: {first.code} {first.record}: {first.message}")


class EmptyWindow(InputError):
    def __init__(self, start, end):
        self.start = start
        self.end = end
        super().__init__(f"no events in window [{start}, {end})")


# ==================== GRAPH ====================

class GraphError(AttentionError):
    """Problem with an interaction graph"""


class EmptyGraph(GraphError):
    def __init__(self):
        super().__init__("graph has no nodes")


class NoEdges(GraphError):
    def __init__(self):
        super().__init__("graph has no edges")


class UnknownFormat(GraphError):
    def __init__(self, fmt: str, allowed):
        self.fmt = fmt
        super().__init__(f"unknown format '{fmt}' (expected one of: {', '.join(allowed)})")


# ==================== LAYOUT ====================

class LayoutError(AttentionError):
    """Problem running the layout engine"""


class NoNodes(LayoutError):
    def __init__(self):
        super().__init__("layout needs at least one node")


class DegenerateGeometry(LayoutError):
    def __init__(self, first: str, second: str):
        self.first = first
        self.second = second
        super().__init__(f"nodes '{first}' and '{second}' occupy the same position")
