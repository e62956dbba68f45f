"""Tolerant sublinear testing of bounded graph arboricity.

Library layout:

- ``graph``: the query-model oracle (degree / i-th neighbor) with counting.
- ``assign``: the deterministic peeling decomposition and forest certificate.
- ``activity``: the randomized local test for surviving the peeling.
- ``samplers``: near-uniform edge sampling and edge-count estimation.
- ``tester``: the composed tolerant tester and its variants.
- ``exact``: matroid-union oracles for arboricity and distance.
- ``generators`` / ``bench``: fixture families, trial runner, reports.
"""

from .activity import ActivityVerdict, SampleSchedule, is_active, sample_schedule
from .assign import (ActivityTrace, ForestDecomposition, PeelBoundsReport,
                     assign_edges, forest_decomposition, peel, verify_peel_bounds)
from .exact import (DistanceReport, brute_force_arboricity_small,
                    distance_to_arboricity, exact_activity_membership,
                    exact_arboricity, max_forest_union)
from .generators import InstanceDescriptor, certify, gen_instance
from .graph import (OUT_OF_RANGE, GraphFormatError, QueryGraph, QuerySession,
                    load_graph, parse_edge_list, read_graph_file, write_graph_file)
from .ratio import as_fraction, peel_iterations
from .samplers import (EdgeCountError, EdgeEstimate, estimate_edge_count,
                       sample_edge_almost_uniform)
from .tester import (FEW, MANY, NO, YES, DegreeContractError, TesterConfig,
                     Verdict, estimate_high_edges, estimate_remaining_low_edges,
                     is_bounded_arboricity, is_high_degree, test_variant)

__version__ = "0.1.0"
