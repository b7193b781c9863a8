"""Real root classification for singularities of parametric determinantal
varieties, with the saturation-method contrast application."""

from .poly import (MultiPoly, VarContext, MonomialOrder, PolyError,
                   ContextMismatch, NotAFactor, Q, lex_order, grevlex_order,
                   block_order, parse_poly, format_poly, poly_gcd,
                   squarefree_part)
from .matrix import (PolyMatrix, VectorField, jacobian, lie_bracket,
                     resultant, discriminant, solve_rational_linear,
                     LinearSolveError)
from .groebner import (IdealBasis, BudgetExceeded, groebner_basis,
                       normal_form, eliminate, elimination_order,
                       saturate_rabinowitsch, radical_membership,
                       radical_membership_mod, univariate_eliminant,
                       eliminate_by_interpolation, presolve_linear,
                       InconsistentSpecialization, DEFAULT_BUDGET)
from .detclass import (DetProblem, IncidenceSystem, ClassifyOutput, classify,
                       rank_exactly, critical_values, boundary_values,
                       lift_to_incidence, draw_u, sanity_warnings)
from .realcount import (RootCount, RootBox, CellSample, SturmSequence,
                        sturm_count, isolate_roots, solve_zero_dim,
                        simplest_between, cad2_samples, label_regions)
from . import contrast

__version__ = "0.1.0"
