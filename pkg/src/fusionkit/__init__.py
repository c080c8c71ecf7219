"""Quantum dimensions, fusion rules and Galois ledgers for rational vertex
operator algebras, computed from modular data."""
from .errors import CheckFailure, FusionKitError, InputError
from .galois import builtin_group, degree_ledger, enumerate_subgroups, galois_report, load_group
from .kernels import BACKEND
from .modular_data import (
    ModularDatum,
    build_affine_sl2,
    build_ising,
    build_lattice,
    build_minimal_model,
    builtin_lattice,
    min_weight_label,
    validate,
)
from .qdim import (
    affine_qdim_weyl,
    all_qdims,
    check_multiplicativity,
    classify_dimension,
    global_dimension,
    is_simple_current,
    qdim_from_smatrix,
)
from .qseries import (
    GradedSeries,
    LimitEstimate,
    all_limits,
    eta_quotient_series,
    lattice_theta_series,
    virasoro_c1_character,
)
from .spectral import ade_classify, bipartite_double, spectral_radius, verify_possible_values
from .verlinde import FusionTensor, check_fusion_axioms, fusion_from_smatrix, tensor_decompose

__version__ = "0.1.0"
