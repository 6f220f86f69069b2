"""Numerical laboratory for Einstein-type structures f Ric = Ddf + h g
on radially symmetric Riemannian manifolds."""

from .errors import *  # noqa: F401,F403
from .fields import RadialScalarField
from .frame import (Ansatz, FramePointCurvature, WarpedProductMetric, frame_curvature,
                    hessian_laplacian_radial, ricci_conformal_radial, ricci_warped)
from .structure import (ConstantH, EinsteinTypeStructure, FunctionH, IdentityResidualReport,
                        PresetH)

__version__ = "0.1.0"
