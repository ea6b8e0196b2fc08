"""Noncommutative function algebras over the representation space of aff(1).

Exact PBW arithmetic in the enveloping algebra, open subsets of Omega with the
shift-constrained topology, locally polynomial sections and their sheaf maps,
triangular representation matrices, and numeric growth checks.
"""

from .domains import (CompactTuple, DiskUnion, DomainTuple, OmegaOpen,
                      RealCompactSet, RealOpenSet, RectUnion, base_open,
                      build_w_tuple, cover_compacts, exhaust, in_base,
                      omega_combine, omega_member, omega_validate,
                      region_combine, region_member, region_shift,
                      region_subset, tuple_condition_check)
from .errors import (DegreeError, FieldMismatchError, IncompatibleSectionsError,
                     InvalidOmegaError, NcSheafError, NotASubsetError,
                     OutOfDomainError, ParseError, PreconditionError,
                     RangeError, ShapeError, UnsupportedOperationError)
from .growth import (GrowthReport, GrowthThresholds, classify_growth,
                     fit_samples, growth_fit, norm_weighted, seminorm_cn,
                     sup_disk, tri_exp)
from .matrep import (LocalPoly, NumericTriMatrix, TriMatrixElement,
                     corner_recover, derived_series, pi_tilde, sigma_exact,
                     sigma_rep, strict_nilpotency_check, tri_mul,
                     triangular_basis)
from .sheaf import (Section, embed_u, glue, nc_mul, section_eval,
                    tau_restrict, unit_section, zero_section)
from .uea import (COMPLEX, REAL, GaussianRational, PBWElement, Polynomial,
                  pbw_bracket, pbw_mul, pbw_mul_oracle, poly_derivative,
                  poly_eval, poly_shift)

__version__ = "0.1.0"
