"""Exact enumeration and verification toolkit for lattice trees and bond
animals on Z^d: counts, mean-field comparison counts, the cut transform,
and growth-constant asymptotics.
"""

from .asymptotics import (
    GrowthEstimate,
    SeriesValue,
    alpha_series,
    g1_diagnostic,
    growth_estimates,
    one_point_partial,
    penrose_bounds,
    tau_series,
    z0,
)
from .cuttree import (
    CutTree,
    count_cut_trees,
    cut_tree,
    degrees,
    nu_product,
    nu_recursive,
    reconstruct,
)
from .enumeration import (
    BondSubgraph,
    CountTable,
    count_animals,
    count_trees,
    count_up_to,
    cycles,
    enumerate_subgraphs,
)
from .errors import (
    BudgetExceededError,
    CacheIntegrityError,
    IdentityError,
    InvalidCutTreeError,
    LatgrowError,
    SpecParseError,
)
from .lattice import (
    Bond,
    End,
    Family,
    HalfBond,
    LatticeSpec,
    Site,
    bond_compare,
    degree,
    make_bond,
    neighbors,
    parse_spec,
)
from .meanfield import (
    MeanFieldConfig,
    enumerate_maps,
    image,
    maps_onto_cuttree,
    maps_onto_tree,
    matching_configs,
    tn_over_Kn,
    tn_sandwich,
)
from .planetree import (
    PlaneTree,
    enumerate_plane_trees,
    f_count,
    f_partial_sum,
    gw_probability,
    w_sum,
    w_sum_by_enumeration,
    weight,
)

__version__ = "0.1.0"
