"""Exact computations in twisted and orbifold Koszul algebras of diagonal Landau-Ginzburg orbifolds."""

from .clifford import CliffordElt, apply_to_basis, cliff_mul, group_act
from .cyclo import Cyclo, zeta
from .invariant import act_cochain, invariant_monomial_basis, invariant_part
from .koszul import (
    KoszulCochain,
    NotACocycle,
    TwistedCochain,
    class_equal,
    coboundary_solve,
    is_cocycle,
    koszul_diff,
    parse_cochain,
    parse_twisted,
)
from .kosproj import NotClosed, kos_project, kos_project_fast, pr_plus, pr_top, restrict_fix
from .lgmodel import GroupElt, NotInvariant, OrbifoldLG, example_model, load_model, validate
from .mf import MFMorphism, check_mf, delta_diff, hom_diff, is_closed
from .parsing import ParseError
from .poly import NotDivisible, Poly, parse_poly
from .product import cup, cup_class, cup_twisted, translate, twisted_class_equal
from .twist import eta, exp_eta, twist_tables

__version__ = "0.1.0"
