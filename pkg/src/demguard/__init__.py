"""Security bounds for BB84 with bit- and basis-dependent detector flaws.

Attack key rates (upper bounds on what can be secure), proof-side key rates
(lower bounds), mismatch-parameter extraction from receiver models, and
independent numerical oracles for all of them.
"""

__version__ = "0.1.0"

from .attacks import (  # noqa: E402
    AttackReport,
    attack_boundary,
    attack_crossover,
    attack_region,
    combined_attack,
    faked_states_qber,
    improved_attack_rate,
    optimal_success_probability,
    timeshift_mutual_info,
)
from .keyrates import (  # noqa: E402
    RateInputs,
    RateReport,
    error_amplification_bound,
    koashi_rate,
    proof_boundary,
    proof_region,
    secure_rate,
    simplified_rate,
    single_photon_eve_rate,
)
from .mathcore import binary_entropy, binary_entropy_inverse, find_root  # noqa: E402
