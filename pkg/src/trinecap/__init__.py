"""Super-additive classical capacity of trine qubit letters.

Single-letter capacity, the repeated-letter pair code and its collective
decoder (gate and optical forms), a photon-counting simulator, and
random-coding error exponents for hybrid and all-classical coding.
"""

from .circuit import (
    EquivalenceError,
    EquivalenceReport,
    GateStep,
    build_collective_circuit,
    circuit_channel,
    separable_decoder_channel,
    verify_circuit_equivalence,
)
from .coding import (
    BlocklengthResult,
    ExponentResult,
    decoding_complexity,
    error_exponent,
    required_blocklength,
    scheme_exponent,
)
from .experiment import (
    CountRecord,
    EstimationError,
    NoiseConfig,
    estimate_channel,
    noisy_channel,
    run_sweep_experiment,
    separable_c1,
    simulate_counts,
)
from .measure import (
    CapacityResult,
    ChannelModel,
    LetterEnsemble,
    accessible_information,
    blahut_arimoto,
    channel_matrix,
    helstrom_error,
    minimum_error_probability,
    mutual_information,
    optimize_c1,
    square_root_measurement,
    trine_ensemble,
)
from .optics import OpticalElement, decode_optical, encode_optical
from .pwcode import DecodingBasis, GainRecord, codewords, decoding_basis, pair_channel, superadditive_gain
from .qstate import PovmSet, StateVector, UnitaryOp, q_gate, rotation_y, tensor_product, trine_state

__version__ = "0.1.0"
