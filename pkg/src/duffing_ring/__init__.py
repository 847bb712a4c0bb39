"""Driven cycle-graph oscillator lab.

A ring of N coupled oscillators driven at a single node, simulated in its
linear regime (decoupled eigenmode channels) and its Duffing regime (cubic
mode mixing), with spectral readouts and the folded peak-position shape
observable phi0.
"""

from .substrate import RingSubstrate, build_substrate, mode_frequencies
from .dynamics import (
    RegimeParams,
    CouplingTensorView,
    node_rhs,
    mode_rhs_linear,
    selection_rule,
    reachable_wavenumbers,
    cubic_mode_force,
)
from .integrators import IntegratorConfig, Trajectory, IntegrationError, integrate
from .drives import (
    PureTone,
    Chirp,
    GaussianBurst,
    FMTone,
    TwoTone,
    NoiseOnly,
    NoiseSpec,
    SampledNoise,
    eval_drive,
    make_noise,
    eval_noise,
    two_tone_rms_nominal,
)
from .readout import (
    ModeTrajectory,
    SteadyStateWindow,
    HarmonicEnergies,
    project_modes,
    hilbert_envelope,
    reservoir_features,
    steady_window,
    harmonic_energies,
    fft_baseline_features,
)

__version__ = "0.1.0"
