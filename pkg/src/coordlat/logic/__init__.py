"""First-order logic of lattices: syntax, evaluation, Boolean products and
determining sequences."""

from .syntax import *  # noqa: F401,F403
from .evaluate import eval_finite, eval_m_lattice, truth_table  # noqa: F401
from .ba import FiniteBA, INF, ba_equiv_rank, ba_eval, ba_eval_regions, count_equivalent, ef_equivalent, rank_threshold  # noqa: F401
from .fv import DeterminingSequence, determining_sequence, isotonicity_check, phi_eval, render_phi  # noqa: F401
from .boolprod import (Clopen, FiniteProduct, boolean_value, canonical_embedding_eps,  # noqa: F401
                       check_boolean_product, elementary_submodel_report, validate_determining_sequence)
from .corpus import CORPUS  # noqa: F401
