"""Numerical ranges of bounded vector-valued functions on lp spaces.

The package computes, for a pair (Gamma, g, f) with values in a
finite-dimensional lp space and sup ||g|| = 1:

* the spatial range (values over exactly norming index/functional pairs),
* eps-slices and the approximated spatial range (their stable intersection),
* the intrinsic range (state functionals of the bounded-function space),

together with verification suites for the coincidence statements relating
them and a CLI for computing, verifying, demoing and plotting.
"""

from .errors import InputError, NormalizationError, NumrangeError
from .spaces import (SpaceSpec, DualityFace, dual_exponent, duality_face, near_norming,
                     norm, dual_norm, norming_functional, pairing, pnorm, sample_face,
                     sphere_sample)
from .pairs import (IndexedPair, GeneratedPair, OperatorSpec, SupCertificate, evaluate,
                    from_operator, make_finite_pair, make_generated_pair)
from .geometry import (Polygon, SupportPolygon, convex_hull, directed_hausdorff,
                       hausdorff, interval_polygon, polygon_from_supports)
from .ranges import (RangeCloud, approx_spatial_range, dyadic_schedule, eps_slice,
                     intrinsic_range, nested_sup_re, norm_derivative_support,
                     spatial_range, suggested_depth)
from .states import (AtomicState, conditional_gradient_support, extract_atom,
                     intrinsic_range_states, states_support_values)
from .fov import fov_support, fov_support_polygon, jacobi_eigvalsh
from .verify import (VerificationReport, compact_suite, demo_nonattained, demo_nonsmooth,
                     random_finite_pair, smooth_suite, verify_compact, verify_main,
                     verify_smooth)
from .problem import ProblemFile, parse_problem

__version__ = "0.1.0"
