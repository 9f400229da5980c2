"""Exact toolkit for dense translation orbits on weighted lp spaces.

The package evaluates weights exactly (powers of two with big-integer
exponents), estimates translation-operator norms, decides density
criteria by witness search with re-checkable certificates, and runs the
constructive assembly of candidate dense vectors with verified
approximation bounds.
"""

from .dyadic import Dyadic
from .groups import (CapExceeded, FreeGroup, Group, Lattice, disjoint,
                     group_from_name, reduce_syllables, set_product,
                     translate_set)
from .spaces import (FinSupFun, NormEstimate, NormValue, SpaceParams,
                     admissibility_report, left_right_functionals, translate,
                     translation_norm, weight_pnorm_on_set, weighted_norm)
from .weights import (CenteredSquaresWeight, DeclaredBound, ExpDecayWeight,
                      MarkedPowerWeight, MonoidRegionWeight, PointShellWeight,
                      PrefixParse, SearchBoundExceeded, TableWeight,
                      UnitWeight, Weight, WeightConstructionError,
                      double_power, monoid_factors, parse_sv_membership,
                      point_shell_weight, semigroup_generator, suffix_class,
                      v_region)

__version__ = "0.1.0"
