"""Numerical verification engine for almost paracontact metric geometry.

Represents (phi, xi, eta, g) structures on concrete manifolds, computes the
derived tensors and adapted connections, and checks the defining identities
as seeded, tolerance-bounded property suites.
"""

from . import ad, calculus, connections, errors, fields, manifold  # noqa: F401
from . import paracontact, riemann, suites, transforms, zoo  # noqa: F401
from .fields import ScalarField, TensorField, evaluate, metric_contract
from .manifold import Manifold, Point
from .paracontact import (ClassificationReport, PacStructure,
                          build_compatible_metric, build_phi_basis, classify,
                          compute_h, covariant_derivative_phi_checks,
                          fundamental_form, nijenhuis_suite, p_tensor,
                          star_ricci, validate_structure)
from .riemann import (AffineConnection, codifferential, levi_civita,
                      ricci_scalar, riemann_curvature, sectional_curvature)
from .calculus import (exterior_derivative, interior_product, lie_bracket,
                       lie_derivative, wedge_1_2, wedge_interior)
from .connections import (TorsionConnection, canonical_connection,
                          connection_curvature, phi_forms, rho_t_dt,
                          skew_torsion_connection)
from .transforms import (GaugeData, d_homothetic, d_inner, d_laplacian,
                         einsteinize, eta_einstein_fit, gauge_transform,
                         sigma_preset, verify_laplacian_law, verify_w1_law)
from .suites import CheckReport, emit_report, run_suite
from .zoo import ZooEntry, get_entry, list_entries

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
