"""Gauge-transform computation of the integrated density of states for
``(-Delta)^w + B`` with almost-periodic pseudo-differential perturbations."""

from .params import ParameterError, ScaleParams
from .symbols import Frequency, FrequencySet, RadialTerm, Symbol, build_symbol, check_symmetry
from .cutoffs import CutoffFamily, partition_symbol
from .gauge import GaugeResult, gauge_recursion, w_support_check
from .geometry import ResonanceGeometry, check_condition_A, theta_closure
from .ids import GaugeIdsEngine, IdsResult, free_ids, ids_gauge
from .oracle import find_plateaus, ids_oracle_floquet
from .fitting import ExpansionFit, expansion_basis, fit_expansion
from .problems import cosine_potential, mathieu_potential

__version__ = "0.1.0"
