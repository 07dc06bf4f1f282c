"""Exception types shared across the package.

Every error raised on bad input derives from TdtError so the CLI can map
them to a single "input error" exit code.
"""


class TdtError(Exception):
    """Base class for all tdtopo errors."""


class OutOfExtent(TdtError):
    """A lattice position (or its required neighbor) falls outside a frame."""


class EmptySubimage(TdtError):
    """An operation that requires a nonempty subimage received an empty one."""


class PartialMap(TdtError):
    """A lattice map is undefined somewhere on its required domain."""


class NotACycle(TdtError):
    """Vertex list does not form a simple closed chain."""


class DegenerateCycle(TdtError):
    """A syntactically valid cycle enclosing no cells."""


class LastFrame(TdtError):
    """Segmentation requested at the final frame, which has no successor."""


class NeverPresent(TdtError):
    """A tracked region with no nonempty slice has no lifespan."""


class NotFullSpan(TdtError):
    """A tracked region is absent somewhere on the interval an operation needs."""


class OverlappingBins(TdtError):
    """Persistence value bins must be pairwise disjoint."""


class MixedDimensions(TdtError):
    """Frames of one video must share width and height."""


class UnsupportedFormat(TdtError):
    """Input file is not 8-bit grayscale PGM (P5) or grayscale PNG."""


class EmptyInput(TdtError):
    """No frames found."""


class ShapeOutOfExtent(TdtError):
    """A scene shape is placed (partly) outside the frame extent."""


class EmptyDiagram(TdtError):
    """Cannot render a persistence diagram with no intervals."""
