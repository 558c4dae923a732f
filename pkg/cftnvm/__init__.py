"""
cftnvm - exact finite-field harmonic analysis
Cyclotomic arithmetic, Gauss sums, compressed Fourier matrices and nonvanishing-minors decisions
"""

__version__ = "0.1.0"

from .characters import (
    AddCharacter,
    MultCharacter,
    Subgroup,
    SubgroupChar,
    annihilator,
    eval_additive,
    eval_multiplicative,
    extensions,
    restrict,
    subgroup_of_index,
)
from .config import Settings, get_settings, load_settings, override_settings, set_settings
from .cyclotomic import (
    CycMatrix,
    CycNum,
    complex_approx,
    cyclotomic_polynomial,
    det_exact,
    kernel_vector,
    root_of_unity,
)
from .errors import CftNvmError
from .finite_field import FieldElement, FieldSpec, build_field, discrete_log, elements, trace
from .nvm import (
    MinorWitness,
    NvmReport,
    chebotarev_check,
    known_criterion,
    nvm_brute,
    nvm_theorem_index3_nontrivial,
    scan_range,
    uncertainty_bound_holds,
    violation_witness,
)
from .transform import (
    CftMatrix,
    GaussSumSet,
    GroupAlgebraElement,
    TSums,
    cft_matrix,
    fourier_transform,
    gauss_set,
    gauss_sum,
    inverse_fourier,
    is_chi_symmetric,
    orbit_representatives,
    t_sums,
)

__all__ = [
    "__version__",
    "AddCharacter", "MultCharacter", "Subgroup", "SubgroupChar",
    "annihilator", "eval_additive", "eval_multiplicative", "extensions", "restrict",
    "subgroup_of_index",
    "Settings", "get_settings", "load_settings", "override_settings", "set_settings",
    "CycMatrix", "CycNum", "complex_approx", "cyclotomic_polynomial", "det_exact",
    "kernel_vector", "root_of_unity",
    "CftNvmError",
    "FieldElement", "FieldSpec", "build_field", "discrete_log", "elements", "trace",
    "MinorWitness", "NvmReport", "chebotarev_check", "known_criterion", "nvm_brute",
    "nvm_theorem_index3_nontrivial", "scan_range", "uncertainty_bound_holds",
    "violation_witness",
    "CftMatrix", "GaussSumSet", "GroupAlgebraElement", "TSums", "cft_matrix",
    "fourier_transform", "gauss_set", "gauss_sum", "inverse_fourier", "is_chi_symmetric",
    "orbit_representatives", "t_sums",
]
