"""Exception types shared across the package."""


class RealizationError(Exception):
    """Base class for all tsrealize errors."""


class AsymmetricMatrix(RealizationError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"matrix is not symmetric at ({x}, {y})")


class NonzeroDiagonal(RealizationError):
    def __init__(self, x):
        self.label = x
        super().__init__(f"nonzero diagonal entry at {x}")


class TriangleViolation(RealizationError):
    def __init__(self, x, y, z):
        self.triple = (x, y, z)
        super().__init__(f"triangle inequality violated: d({x},{z}) > d({x},{y}) + d({y},{z})")


class ZeroOffDiagonal(RealizationError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"zero distance between distinct elements {x} and {y}")


class GroundSetMismatch(RealizationError):
    pass


class UnknownLabel(RealizationError):
    def __init__(self, x):
        self.label = x
        super().__init__(f"unknown label {x!r}")


class DisconnectedGraph(RealizationError):
    pass


class UnlabeledElement(RealizationError):
    def __init__(self, x):
        self.label = x
        super().__init__(f"element {x!r} has no vertex in the graph labeling")


class NotInPolyhedron(RealizationError):
    def __init__(self, x, y, value, bound):
        self.constraint = (x, y)
        self.value = value
        self.bound = bound
        super().__init__(
            f"point violates constraint f({x}) + f({y}) >= D({x},{y}): {value} < {bound}"
        )


class NotAVertex(RealizationError):
    pass


class NotInTightSpan(RealizationError):
    pass


class StepFailure(RealizationError):
    """No geodesic neighbor found during a simplex step; never masked."""

    def __init__(self, vertex, target):
        self.vertex = vertex
        self.target = target
        super().__init__(f"no geodesic neighbor from {vertex} toward k_{target}")


class GenerationStall(RealizationError):
    pass


class NotARealization(RealizationError):
    pass


class MissingVariable(RealizationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"assignment is missing variable {name!r}")


class InstanceTooLarge(RealizationError):
    pass


class ParseError(RealizationError):
    """Malformed instance or graph file."""
