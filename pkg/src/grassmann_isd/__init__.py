"""Syndrome decoding in the Grassmann metric with codes from plabic graphs."""

__version__ = "0.1.0"

from .errors import (BudgetExceeded, DegenerateCode, GrassmannISDError, InvalidArgument,
                     Unsatisfiable, UnsupportedGraph)
from .field import GF2, GF2m, FqMatrix, OpCounter, kernel_basis, rank, rref
from .subspace import (SubspaceBasis, ball_volume, gaussian_binomial, gv_radius,
                       prange_success_probability, sphere_size, subspace_distance)
from .bounds import CATALOG, BoundQuery, evaluate_bound
from .plabic import (PlabicGraph, binarize, boundary_measurement, graph_to_tanner,
                     infer_k_from_dimension, load_golden, plucker_coordinates)
from .codes import LinearCode, build_grassmann_code, build_ldpc, build_plabic_code, lift_code
from .decoder import (DecodeOutcome, DecoderConfig, birthday_isd, correctness_transform,
                      plucker_decode, prange_isd, syndrome_check)
