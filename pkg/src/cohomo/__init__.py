"""Exact cohomology of finite groups with coefficients in finitely presented modules."""
from .cochains import Cochain, TableTooLarge, coboundary, inflation, push_forward, restriction
from .cohomology import (
    CohomologyResult,
    classes_equal,
    cohomology,
    connecting,
    descend,
    hom_module,
    is_coboundary,
    residue,
    tate_cyclic,
)
from .groups import GroupTable, Subgroup
from .linalg import FinAbGroup, SNFResult, element_normal_form, smith_normal_form, solve_integer, subquotient
from .modules import GModule, ModuleMap, ShortExactSeq

__version__ = "0.1.0"
