"""Exact transversality combinatorics and conic reductions for U(2)-actions
on projective spaces of representations, plus numeric checks of the
underlying moment-map identities."""

from .errors import U2Error
from .rep import (
    IndexPair,
    RepDescriptor,
    Summand,
    from_json,
    index_set,
    is_generic,
    is_uniform,
    moment_never_zero,
    validate,
)
from .geometry import (
    Polygon2,
    RayDir,
    Verdict,
    Wedge,
    critical_rays,
    moment_polytope,
    phi_transverse,
    psi_transverse,
    ray_meets_image,
    segment_Jkl,
    wedge_of,
    wedges,
)
from .reduction import (
    PlainWPS,
    SegreQuotient,
    betti_conic_reduction,
    betti_product_P1,
    betti_wps,
    classify,
    isotopy_endpoints,
    mu_k_weights,
    n_weight,
    partition,
    quotient_weights_uniform,
    segre_generators,
    wedge_partition_constant,
    weight_vectors,
)
from .verify import PropertyReport, SampleConfig, run_suite

__version__ = "0.1.0"
