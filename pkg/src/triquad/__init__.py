"""Exact unit groups and 2-class numbers of Q(sqrt2, sqrtp, sqrtq)."""

from .arith import PrimePair, is_perfect_square, is_prime, legendre_symbol
from .classnumber import (ClassNumberReport, h2_real_quadratic, kuroda_h2K,
                          subfield_h2_map)
from .errors import (InternalInconsistencyError, PrecisionExhaustedError,
                     ResourceGuardError, RootMissingError, TriquadError)
from .harness import Config, VerificationRecord, scan_pairs, verify_pair
from .octic import (Automorphism, OcticElem, TAU1, TAU2, TAU3,
                    apply_automorphism, embed_quadratic, norm_to_subfield,
                    octic_mul, real_embeddings, sign_vector, sqrt_exact,
                    sqrt_in_field)
from .quadratic import FundamentalUnit, QuadElem, fundamental_unit, quad_mul, quad_norm
from .theorems import (CaseTag, SqrtDecomposition, classify_pair,
                       decompose_sqrt_data, predict_h2K, unit_generators)
from .unit_lattice import (SquareClassSpace, UnitWord, rank_certificate,
                           saturate, square_class_dimension, word_embed)

__version__ = "0.1.0"
