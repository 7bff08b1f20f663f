"""Mixed-state geometric phases on a purified qubit, simulated end to end.

The Sjoqvist and Uhlmann phases of a diagonal qubit state arise from two
choices of ancilla evolution acting on the same purification. This package
builds both constructions, evaluates their closed forms, runs the three-qubit
interferometer that reads them out, and pushes the result through a simulated
NMR acquisition chain (FID, Fourier transform, windowed integration).
"""

__version__ = "0.1.0"

from .linalg import kron, su2_exp, expm_hermitian, partial_trace
from .spin import FieldSpec, Propagator, system_field, propagator
from .purification import (
    MixedQubit,
    PurifiedState,
    AmplitudeOperator,
    purify,
    amplitude_operator,
    pure_transport_residual,
    uhlmann_parallel_residual,
)
from .phases import (
    AncillaScheme,
    make_scheme,
    PhaseResult,
    sjoqvist_ancilla,
    uhlmann_ancilla,
    interference_amplitude,
    phase_of,
    scheme_phase,
    uhlmann_closed_form,
    sjoqvist_closed_form,
)
from .circuit import PseudoPureConfig, Register3, run_interferometer, run_pseudo_pure, probe_readout
from .nmr import NMRExperiment, SpinSystem, AcquisitionConfig, FID, Spectrum, acquire_fid, dft, extract_phase
from .config import Config, load_config

__all__ = [name for name in dir() if not name.startswith("_")]
