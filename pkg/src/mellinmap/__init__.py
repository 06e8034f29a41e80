"""DGLAP evolution of the toy anomalous dimension through complex maps of the Mellin plane.

Four independent evaluations of phi(x, u) = x I0(2 sqrt(ln u ln(1/x))):

* :func:`invert_direct` - trapezoid rule along a vertical Mellin contour
* :func:`invert_mapped` - the mapped contour collapsed onto a branch cut
* :func:`eval_dual` - residue series of the dual loop integral
* :func:`closed_form` - the power series of the Bessel function
"""

from .dual_representation import (
    DualSeriesConfig,
    dual_ode_residual,
    eval_dual,
    moment_ode_residual,
    residue_power_moment,
)
from .errors import (
    ContractError,
    DomainError,
    IntegrationError,
    IterationError,
    MellinMapError,
    PoleError,
    TruncationError,
)
from .evolution_engine import EvolutionSpec, dglap_residual_xspace, evolve_moment
from .kinematics import EvolutionPoint, MethodReport, closed_form, oracle_report
from .mellin_inversion import (
    Contour,
    ContourKind,
    build_chebyshev_contour,
    build_vertical_contour,
    invert_direct,
    invert_mapped,
    map_jacobian,
    mellin_map,
)
from .moment_kernels import TOY_SPLITTING, chi, duality_residuals, gamma, mellin_of_splitting
from .running_coupling import CouplingModel, alpha
from .special_functions import LambertBranch, SeriesResult, bessel_i0, lambert_w, phi_series_signed

__version__ = "0.1.0"
