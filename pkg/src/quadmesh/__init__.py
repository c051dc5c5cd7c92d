"""Optimal-density piecewise-linear approximation of bivariate quadratics.

Triangles are sized so the vertical (L-infinity) distance between the
triangle mesh and the graph of f = a x^2 + 2 b x y + c y^2 + d x + e y + g
stays within a budget ``eps`` while covering as much area as possible.
"""

from .estimator import PiecewiseLinearApproximator
from .exceptions import (
    DegenerateSurface,
    DegenerateTriangle,
    EmptyRegion,
    InvalidShapeParam,
    InvalidTolerance,
    MeshFormatError,
    QuadmeshError,
    SearchBudgetExceeded,
)
from .meshio import format_obj, format_off, read_mesh, write_mesh
from .optimal import (
    DENSITY_CONSTANTS,
    Mode,
    OptimalResult,
    convex_optimal,
    mirror,
    optimal_for,
    saddle_interpolating,
    saddle_offset,
    saddle_ruled,
    theoretical_density,
)
from .oracle import (
    SearchConfig,
    SearchOutcome,
    oracle_convex,
    oracle_dz_profile,
    oracle_max_area_interpolating,
    oracle_max_area_offset,
)
from .quadratic import (
    NormalForm,
    QuadraticSurface,
    SurfaceClass,
    SurfaceTransform,
    classify,
    graph_automorphism,
    normalize,
)
from .tiling import DensityReport, MeshPatch, Region, measure, tile_region, vertex_density
from .vertical_error import (
    ApproxTriangle,
    ErrorWitness,
    WitnessKind,
    chord_error,
    chord_error_offset,
    sampled_triangle_error,
    triangle_error,
)

__version__ = "0.1.0"
