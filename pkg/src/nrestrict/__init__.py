"""Exact Newton-polyhedron invariants and restriction critical exponents."""

__version__ = "0.1.0"

from .poly import PuiseuxPoly, Rational  # noqa: F401
from .roots import RootRecord, UniPoly, squarefree_real_roots  # noqa: F401
from .geometry import (NewtonPolyhedron, Weight, h_l_of_edge,  # noqa: F401
                       newton_distance, newton_polyhedron, principal_face,
                       r_height, taylor_support)
from .adapted import (circle_vanishing_order, classify_singularity,  # noqa: F401
                      height, is_adapted, linear_height)
from .splitting import (RootJet, adapted_coordinates,  # noqa: F401
                        condition_r_check, fine_splitting_trace, select_l_pr)
from .exponents import (critical_exponent, h_f, h_r_tilde_sample,  # noqa: F401
                        knapp_certificate, knapp_certificates_all)
from .parser import InputExpr, parse_expression, render  # noqa: F401
from .errors import (AlgebraicRootHalt, InternalInvariantError,  # noqa: F401
                     NRestrictError, ParseError, QuadratureError)
