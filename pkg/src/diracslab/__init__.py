"""Dirac modes in a slab between two planes in a uniform magnetic field.

Builds the 4x4 boundary matrix whose null vectors make the current J^z vanish
on both walls, evaluates the closed-form roots of its determinant for every
boundary-phase pattern, quantizes the longitudinal momentum and assembles
explicit modes.
"""
from .core import (FOUR_PHASE, ONE_PHASE, THREE_PHASE, TWO_PHASE, Family, PhaseConfig,
                   PhysicalParams, VariantId, all_variants, longitudinal_p, mobius_X,
                   polarization_ratios)
from .errors import (ConsistencyError, DegeneratePolynomialError, DiracSlabError, DomainError,
                     InvalidModeError, NotApplicableError, NotARootError,
                     SingularConfigurationError)
from .transverse import TransverseMode, eval_f, eval_g, energy_from_landau, hermite
from .boundary import (BoundaryMatrix, QuarticPoly, build_S, det_S, nullspace_A, numeric_roots,
                       quartic_from_samples, rank_S)
from .catalog import (RootEntry, RootKind, RootSet, biquadratic_coefficients, closed_form_roots,
                      is_k_kind, multiset_distance, verify_unit_modulus, vieta_check)
from .spectrum import (FixedEpsilon, LandauLevel, QuantizationProblem, SpectrumRow,
                       SpectrumTable, allowed_k, spectrum_sweep)
from .modes import (BoundaryReport, SlabMode, assemble_phi, boundary_residual, certify_mode,
                    current_Jz, null_space_modes, phase_condition_mismatch)

__version__ = "0.1.0"
