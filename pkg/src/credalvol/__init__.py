"""Credal sets as polytopes in the probability simplex, and their volume."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .simplex import (
    CredalPolytope, Chart, Event, Grouping, contains, distance_to_point, homothety,
    make_credal_polytope, marginalize, probability_vector, simplex, singleton, strong_product,
)
from .volume import VolumeResult, simplex_volume, volume, volume_exact, volume_fixed_dim, volume_mc
from .measures import (
    event_envelope, generalized_hartley, imprecision_width, lower_probabilities, max_entropy,
    maximize_entropy, mobius_mass, shannon_entropy, upper_probabilities,
)
from .axioms import (
    AxiomConfig, AxiomReport, check_axioms, check_continuity, check_probability_consistency,
    check_subadditivity, continuity_counterexample,
)
from .packing import (
    c_star, carl_pajor_experiment, erode, greedy_packing, hausdorff_distance,
    theorem1_experiment, theorem1_sweep,
)
from .lift import EmbeddingSpec, lift_probability_set, relative_volume_variation
from .experiments import IdmState, idm_credal_set, idm_curve, prior_shrinkage
