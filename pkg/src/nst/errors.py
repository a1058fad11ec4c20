"""Exception hierarchy.  Every error raised on purpose by the package derives
from :class:`NstError`, which carries a short machine-readable ``kind``."""
from __future__ import annotations


class NstError(Exception):
    kind = "error"

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class FormatError(NstError):
    kind = "syntax"


class GluingError(NstError):
    kind = "gluing"


class OrientationError(NstError):
    kind = "orientation"


class IndexRangeError(NstError):
    kind = "index-range"


class InvalidTriangulation(NstError):
    """The gluings do not describe a 3-manifold (possibly with ideal vertices)."""
    kind = "invalid-triangulation"


class NotApplicable(NstError):
    """A move or operation whose preconditions fail at the given location."""
    kind = "not-applicable"


class PreconditionError(NstError):
    kind = "precondition"


class NotAdmissible(NstError):
    kind = "not-admissible"


class NotInKernel(NstError):
    kind = "not-in-kernel"


class NotSpun(NstError):
    kind = "not-spun"


class DimensionGuard(NstError):
    kind = "dimension-guard"
