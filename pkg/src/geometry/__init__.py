"""Convex bodies, ellipsoids, slices and orbit spaces"""

from .body import (
    vertices,
    facets,
    to_v_rep,
    to_h_rep,
    support,
    support_function,
    gauge,
    contains,
    outer_radius,
    inner_radius,
    polar,
    act,
    scale,
    hausdorff,
)
from .ellipsoid import (
    mvee_centered,
    john,
    lowner,
    containment_bounds,
    lowner_bounds,
    ellipsoid_distance,
)
from .slicing import (
    polar_decompose,
    slicing_map_john,
    slicing_map_lowner,
    john_position,
    lowner_position,
    in_john_slice,
    in_lowner_slice,
    slice_from_map,
    check_slice_axioms,
    extend_equivariant,
    vector_action,
    quadratic_form_action,
    pd_action,
)
from .demo_action import (
    demo_act,
    demo_slicing_map,
    transporter,
    is_small,
    action_image_is_open_at,
    orbit_map_open_proxy,
    remark_table,
    remark_envelopes,
)
from .orbit import (
    quotient_distance,
    bm_distance,
    gl_orbit_distance_oracle,
    pairwise_distances,
    canonical_representative,
    cross_section_from_slice,
    extend_from_cross_section,
    slice_net,
    net_profile,
)

__all__ = [
    "vertices",
    "facets",
    "to_v_rep",
    "to_h_rep",
    "support",
    "support_function",
    "gauge",
    "contains",
    "outer_radius",
    "inner_radius",
    "polar",
    "act",
    "scale",
    "hausdorff",
    "mvee_centered",
    "john",
    "lowner",
    "containment_bounds",
    "lowner_bounds",
    "ellipsoid_distance",
    "polar_decompose",
    "slicing_map_john",
    "slicing_map_lowner",
    "john_position",
    "lowner_position",
    "in_john_slice",
    "in_lowner_slice",
    "slice_from_map",
    "check_slice_axioms",
    "extend_equivariant",
    "vector_action",
    "quadratic_form_action",
    "pd_action",
    "demo_act",
    "demo_slicing_map",
    "transporter",
    "is_small",
    "action_image_is_open_at",
    "orbit_map_open_proxy",
    "remark_table",
    "remark_envelopes",
    "quotient_distance",
    "bm_distance",
    "gl_orbit_distance_oracle",
    "pairwise_distances",
    "canonical_representative",
    "cross_section_from_slice",
    "extend_from_cross_section",
    "slice_net",
    "net_profile",
]
