"""graysol: gray kinks and Bogoliubov packets on a ring condensate.

Analytic scattering theory (exact mode functions, transmission phase,
packet advance, second-order back-action) plus split-step numerics to
test it: tuned periodic rings, mode-exact initial states, conservative
evolution, and position measurements.
"""

from .analytic import ModeQuantities, SolitonParams, ZeroModePair, \
    dispersion, dressing_phase_step, excited_number_ratio, \
    excited_numbers, group_velocity, mode_functions, mode_quantities, \
    packet_advance, phase_shift_theta, soliton_profile, \
    soliton_shift_prediction, uniform_modes, zero_modes
from .errors import GraysolError
from .evolve import SeamGuard, WaveField, evolve, load_checkpoint, \
    observables, save_checkpoint
from .measure import fit_soliton_position, measure_packet_advance, \
    measure_soliton_shift, packet_centroid, winding_number
from .ring import RingGeometry, discrete_wavenumbers, tune_ring
from .synthesis import PacketSpec, build_initial_state, build_packet, \
    compensation_pulse

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GraysolError",
    "SolitonParams", "ModeQuantities", "ZeroModePair",
    "soliton_profile", "dispersion", "group_velocity", "phase_shift_theta",
    "packet_advance", "mode_functions", "uniform_modes", "zero_modes",
    "excited_numbers", "excited_number_ratio", "dressing_phase_step",
    "soliton_shift_prediction", "mode_quantities",
    "RingGeometry", "tune_ring", "discrete_wavenumbers",
    "PacketSpec", "build_packet", "build_initial_state",
    "compensation_pulse",
    "WaveField", "SeamGuard", "evolve", "observables",
    "save_checkpoint", "load_checkpoint",
    "fit_soliton_position", "packet_centroid", "measure_packet_advance",
    "measure_soliton_shift", "winding_number",
]
