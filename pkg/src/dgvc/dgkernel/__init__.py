"""Concrete dg-manifolds: presentations, cohomology, tangent data and filtrations."""

from .algebra import Derivation, FreeGCAlgebra, Generator
from .cohomology import (ChainComplex, CohomologyGroup, Pi0Summary, cohomology, cohomology_group,
                         cohomology_table, pi0)
from .presentation import (DgBundlePresentation, DgManifoldPresentation, Diagnostic, affine_zero_locus,
                           derived_intersection, free_presentation, koszul_presentation)
from .tangent import (BoundednessReport, KSheafReport, TangentComplexAtPoint, ZeroOneVerdict,
                      boundedness_bound, is_zero_one_manifold, k_sheaf, tangent_complex_at,
                      virtual_dimension)
from .normal_cone import (DecomposabilityReport, DeltaReport, NormalConeData, decomposability_gr_check,
                          delta_map, filtration_compatible, gr_J, sym_power_ranks)
from .global_model import KoszulModel, PointRecord, derived_zero_locus, samuel_multiplicity
