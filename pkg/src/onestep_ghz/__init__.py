"""Exact simulation of one-step GHZ polarization error correction with
spatial or frequency hyperentanglement."""
from .elements import (
    ElementKind,
    ElementOp,
    apply_fs,
    apply_hwp,
    apply_pauli_x,
    apply_pauli_z,
    apply_pbs,
    apply_wdm,
    frequency_pipeline,
    run_pipeline,
    spatial_pipeline,
)
from .errors import (
    ConfigError,
    FactorizationError,
    InvalidArityError,
    InvalidInputError,
    MissingDOFError,
    NotGhzBasisError,
    OneStepError,
    OracleMismatchError,
    ShapeError,
    StageOrderError,
)
from .noise import (
    GhzMixture,
    PauliChannel,
    apply_noise_sample,
    apply_pauli_string,
    classify_ghz,
    pauli_to_ghz_mixture,
    sample_ghz,
    sample_pauli_string,
)
from .protocol import (
    ProtocolOutcome,
    enumerate_ports,
    enumerate_protocol,
    infer_corrections,
    measure_ports,
    port_distribution,
    run_frequency_protocol,
    run_protocol,
    run_spatial_protocol,
)
from .state import (
    Freq,
    GhzPolState,
    PhotonLabel,
    Sign,
    SparseKet,
    Spatial,
    all_ghz_states,
    attach_frequency_entanglement,
    attach_spatial_entanglement,
    equal_up_to_phase,
    fidelity_to_ghz_plus,
    inner_product,
    make_ghz,
)

__version__ = "0.1.0"
