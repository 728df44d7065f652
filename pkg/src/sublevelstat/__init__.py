"""Sublevel-set persistence and sup-norm kernel regression on manifolds."""

from .bottleneck import MatchingInstance, bottleneck_all_degrees, bottleneck_distance
from .complexes import (
    Chain,
    SimplicialComplex,
    SparseColumns,
    betti_numbers,
    boundary,
    boundary_matrix,
    complex_from_mesh,
)
from .errors import FormatError, InvalidInputError
from .estimator import (
    DesignSample,
    EstimatorConfig,
    EstimatorModel,
    bandwidth_kappa,
    center_count_m,
    constant_c0,
    evaluate,
    fit,
    holder_check,
    kernel_weight,
    predict,
    rate_psi,
    sup_norm_error,
)
from .filtration import (
    Filtration,
    VertexField,
    lower_star,
    lower_star_filtration,
    read_field,
    sublevel_complex,
    write_field,
)
from .manifolds import (
    Disk,
    Manifold,
    Sphere,
    Torus,
    equidistance_ratio,
    equidistant_points,
    geodesic_distance,
    sphere_surface_volume,
    volume,
)
from .meshing import Mesh, mesh_hash, read_mesh, triangulate, write_mesh
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    compute_persistence,
    euler_morse_check,
    multiplicity,
    persistent_betti,
    read_diagram,
    write_diagram,
)
from .synth import (
    BumpMixture,
    BumpSpec,
    ConstantFn,
    FunctionSpec,
    TwoBump,
    UnimodalRadial,
    add_noise,
    eval_function,
    eval_function_many,
    read_function,
    sample_design,
    write_function,
)

__version__ = "0.1.0"
