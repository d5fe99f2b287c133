"""Giant-atom waveguide scattering with a quasi-direct background channel."""
from .analysis import relaxation_time, sweep_spectrum, switch_frequencies_ioa, switch_frequencies_mioa
from .errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    DomainError,
    FlatObjectiveError,
    GiantAtomError,
    NumericError,
    SingularityError,
)
from .fitting import FitProblem, FitResult, FreeParam, Spectrum, fit, model_transmission, synth_spectrum
from .scatter import (
    Cavity,
    CouplingMode,
    CouplingPoint,
    Direct,
    GiantAtomConfig,
    Medium,
    cavity_to_mu_phi,
    effective_coupling,
    quasi_direct_response,
    reflection_factor,
    scattering_amplitude,
    transmission,
    wavevector,
)

__version__ = "0.1.0"
