"""Heights of formal Brauer groups of abelian surfaces in characteristic p.

Witt vectors and Serre's map, sigma-linear algebra, Cartier-Manin matrices
of genus-2 curves checked against point counts, graded Dieudonne models,
one-dimensional formal group laws, and the cohomology dimension tables.
"""

from .census import CensusConfig, CensusReport, emit_report, enumerate_curves, run_census
from .curves import (EllipticCurve, Genus2Curve, OracleDisagreement, a_number, cartier_manin_matrix,
                     classify, classify_elliptic, count_points, l_polynomial, newton_slopes, p_rank)
from .dieudonne import h2_model, height_from_models, ker_F_dim, phi2, phi2_vanishes
from .fields import FieldElement, Poly, PrimeSpec, TruncatedRing, format_poly, parse_poly, prime_field
from .formalgroup import (FormalGroupLaw, additive_fgl, elliptic_fgl, height_of, multiplicative_fgl,
                          p_series)
from .semilinear import SigmaLinearMap, compose, kernel_dim, stable_rank
from .strata import INF, CaseType
from .tables import SurfaceType, consistency_check, dim_B, dim_dOmega, dim_Z, image_dims
from .witt import (WittVec, build_witt_table, serre_D, witt_add, witt_F, witt_mul, witt_R, witt_V)

__version__ = "0.1.0"
