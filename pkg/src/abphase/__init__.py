"""Aharonov-Bohm phase-plate simulations.

Closed-form AB phases from the local de Broglie wavelength picture, loop
integrals of the vector potential in two gauges, two-slit fringe patterns
with shift extraction, and a split-step wavepacket oracle.
"""
__version__ = "0.1.0"

from .constants import CONSTANTS, PhysicalConstants, UnitScale, from_internal, to_internal
from .errors import (
    ABPhaseError,
    ClippedSupportError,
    ConfigurationError,
    DegenerateStateError,
    IncompleteRunError,
    LowContrastError,
    PreconditionError,
    SingularPointError,
    UnitError,
)
from .fields import (
    GaugeChoice,
    SolenoidSpec,
    apply_gauge,
    magnetic_field,
    string_gauge_function,
    vector_potential,
)
from .fringes import (
    FringePattern,
    SlitGeometry,
    envelope_centroid,
    extract_fringe_shift,
    fringe_shift_prediction,
    two_slit_pattern,
)
from .phase import (
    CircularPath,
    ElectronState,
    PhasePlateModel,
    PolylinePath,
    ab_phase_loop,
    de_broglie_wavelength,
    delta_n_q,
    path_phase,
    phase_plate_delta_phi,
    phase_plate_model,
    quantum_refractive_index,
    winding_number,
)
from .schrodinger import (
    ApparatusMask,
    GridSpec,
    Wavepacket,
    arrival_time_delay,
    desk_experiment,
    initialize_packet,
    run_experiment,
    step,
)
