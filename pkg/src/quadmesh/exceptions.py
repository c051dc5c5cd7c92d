class QuadmeshError(Exception):
    """Base class for all errors raised by quadmesh."""


class DegenerateSurface(QuadmeshError, ValueError):
    """The quadratic is semidefinite or linear (ac - b^2 = 0)."""


class DegenerateTriangle(QuadmeshError, ValueError):
    pass


class InvalidTolerance(QuadmeshError, ValueError):
    pass


class InvalidShapeParam(QuadmeshError, ValueError):
    pass


class EmptyRegion(QuadmeshError, ValueError):
    pass


class SearchBudgetExceeded(QuadmeshError, RuntimeError):
    pass


class MeshFormatError(QuadmeshError, ValueError):
    pass
