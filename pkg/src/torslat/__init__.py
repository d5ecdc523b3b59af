"""Finite lattice engine for weak orders, congruences, Cambrian quotients and type A bricks."""
from .congruence import (Congruence, QuotientLattice, algebraic_quotient, boundary_labels,
                         congruence_closure, enumerate_congruences, forcing, forcing_classes,
                         is_congruence, is_congruence_uniform, label_forcing_consistency,
                         polygon_forcing, quotient)
from .errors import *  # noqa: F401,F403
from .poset_core import (CheckResult, FiniteLattice, LabelledHasse, build_from_covers,
                         hasse_degree, interval, is_hasse_regular, is_polygonal,
                         is_semidistributive, join_irreducibles, meet_irreducibles, polygons)
from .weak_order import DoubleJI, Permutation, build_weak_order

__version__ = "0.1.0"
