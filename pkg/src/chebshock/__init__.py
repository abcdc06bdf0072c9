"""Chebyshev pseudospectral shock detection and Gibbs-oscillation removal.

Decomposes 1D fields in a Chebyshev basis, classifies each field as
smooth, resolution-limited or genuinely discontinuous, locates the
discontinuities, and removes Gibbs oscillations with adaptive one- or
two-sided mollifiers.  Ships with a filtered inviscid Burgers solver and
a CLI pipeline tying the pieces together.
"""

from ._kernels import BACKEND
from .burgers import (
    FilterMatrix,
    InstabilityError,
    RunResult,
    SimulationConfig,
    SolverState,
    build_filter,
    gaussian_ic,
    run_simulation,
)
from .edges import (
    ConcentrationFactor,
    DetectionConfig,
    Edge,
    EdgeReport,
    Label,
    MinmodProfile,
    SlopeFit,
    build_concentration_factors,
    classify_smoothness,
    find_peaks,
    jump_approx,
    minmod_combine,
    minmod_profile,
    reject_spurious,
    resolve_thresholds,
    smooth_minmod,
)
from .mollify import (
    MollifierKind,
    MollifierSpec,
    MollifyError,
    build_kernel,
    mollify_at,
)
from .pipeline import (
    ConfigError,
    ProcessedSnapshot,
    Treatment,
    load_config,
    postprocess_snapshot,
    run_pipeline,
    write_outputs,
)
from .spectral import (
    ChebyshevGrid,
    DownsampleMap,
    SpectralField,
    SpectralOperators,
    analyze,
    build_grid,
    build_operators,
    downsample,
    synthesize,
)

__version__ = "0.1.0"
