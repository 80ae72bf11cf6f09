"""gztoda: Gelfand-Zetlin difference-operator representations of gl(N) and
Mellin-Barnes evaluation of open-Toda-chain and hyperbolic-Sutherland wave
functions, with every implemented identity verified numerically against
independent oracles."""

from .core import (
    CachedGzFunction,
    GzFunction,
    GzOperator,
    GzPattern,
    HBar,
    commutator,
    compose,
    eval_shifted,
    random_pattern,
    random_polynomial,
)
from .glrep import (
    generator,
    level_kernel,
    rho_vector,
    sutherland_vector,
    whittaker_vector,
)
from .models import (
    SpectralParams,
    SutherlandEvaluator,
    TodaEvaluator,
    WaveSample,
    sutherland_n2_oracle,
    sutherland_wavefunction,
    toda_n2_oracle,
    toda_wavefunction,
)
from .quad import ContourSpec, decay_bound, default_contour, line_integral, nested_integral, pairing
from .specfun import gauss_2f1, harish_chandra_c, legendre_p, log_gamma, macdonald_k
from .yangian import casimir_poly, drinfeld_triple, qism_triple

__version__ = "0.1.0"

__all__ = [
    "HBar",
    "GzPattern",
    "GzFunction",
    "CachedGzFunction",
    "GzOperator",
    "compose",
    "commutator",
    "eval_shifted",
    "random_pattern",
    "random_polynomial",
    "generator",
    "rho_vector",
    "level_kernel",
    "whittaker_vector",
    "sutherland_vector",
    "casimir_poly",
    "drinfeld_triple",
    "qism_triple",
    "ContourSpec",
    "default_contour",
    "line_integral",
    "nested_integral",
    "pairing",
    "decay_bound",
    "log_gamma",
    "macdonald_k",
    "gauss_2f1",
    "legendre_p",
    "harish_chandra_c",
    "SpectralParams",
    "WaveSample",
    "TodaEvaluator",
    "SutherlandEvaluator",
    "toda_wavefunction",
    "sutherland_wavefunction",
    "toda_n2_oracle",
    "sutherland_n2_oracle",
    "__version__",
]
