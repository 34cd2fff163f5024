"""Origin-centric affine dimensionality reduction.

Pipeline: choose a centering (origin), convert the scatter to its whitened
canonical form via the centered SVD, then search for the rank-q affine image
whose pairwise squared-distance matrix best matches the original's.  A PCA
baseline, a hull-peeling affine median, and plot/report emission round out
the toolkit; see the `cli` module or the `affinedim` command for the
end-to-end paths.
"""

from .baselines import (EqualVarianceWitness, PcaResult, SwarmStats, VariableAxes,
                        equal_variance_witness, pca, standardize, swarm_stats,
                        variable_axes)
from .canonical import (CanonicalForm, canonical_form, dedup_weighted, projector,
                        simplex_h)
from .centering import (MedianResult, affine_median_gamma, center,
                        hull_vertex_flags, mean_gamma, point_gamma, validate_gamma)
from .errors import (AffineDimError, DegenerateInputError, InputError,
                     InternalError, LoadError, SearchError)
from .geometry import (Configuration, as_configuration, association_matrix,
                       augment_origin, coincident_groups, origin_sq_distances,
                       reconstruct_d2, squared_distances)
from .objective import (ObjectiveValue, gradient_norm2, norm2_closed,
                        norm2_direct, rho, value_and_gradient)
from .optimizer import (LocalMinimum, ReductionResult, SearchOptions,
                        angle_starts, canonicalize_b, local_minimize,
                        random_starts, reduce)

__version__ = "0.1.0"

__all__ = [
    "AffineDimError", "CanonicalForm", "Configuration", "DegenerateInputError",
    "EqualVarianceWitness", "InputError", "InternalError", "LoadError",
    "LocalMinimum", "MedianResult", "ObjectiveValue", "PcaResult",
    "ReductionResult", "SearchError", "SearchOptions", "SwarmStats",
    "VariableAxes", "affine_median_gamma", "angle_starts", "as_configuration",
    "association_matrix", "augment_origin", "canonical_form", "canonicalize_b",
    "center", "coincident_groups", "dedup_weighted", "equal_variance_witness",
    "gradient_norm2", "hull_vertex_flags", "local_minimize", "mean_gamma",
    "norm2_closed", "norm2_direct", "origin_sq_distances", "pca",
    "point_gamma", "projector", "random_starts", "reconstruct_d2", "reduce",
    "rho", "simplex_h", "squared_distances", "standardize", "swarm_stats",
    "validate_gamma", "value_and_gradient", "variable_axes",
]
