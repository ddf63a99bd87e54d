"""Rigorous Gauss-Legendre integration of algebraic functions along segments."""

from .algebraic import (AlgebraicIntegrand, BivariateDefiningPolynomial, CriticalSet,
                        UnivariatePolynomial, branch_derivative, continue_branch,
                        discriminant_polynomial, poly_roots)
from .bounds import (disk_bound, fujiwara_root_bound, fujiwara_uniform_bound, proxy_bound,
                     taylor_variation_bound, uniform_coefficient_bounds)
from .errors import ConvergenceError, GeometryError, ParseError, RigError
from .quadrature import (Ellipse, gl_error_bound, heuristic_integrate, integrate_segment,
                         legendre_scheme, required_order)
from .strategies import (IntegrationReport, PlanConfig, ProxyModel, SegmentPlan, cost,
                         execute, integrate, plan_main, plan_reference)

__all__ = [
    "AlgebraicIntegrand", "BivariateDefiningPolynomial", "CriticalSet", "UnivariatePolynomial",
    "branch_derivative", "continue_branch", "discriminant_polynomial", "poly_roots",
    "disk_bound", "fujiwara_root_bound", "fujiwara_uniform_bound", "proxy_bound",
    "taylor_variation_bound", "uniform_coefficient_bounds",
    "ConvergenceError", "GeometryError", "ParseError", "RigError",
    "Ellipse", "gl_error_bound", "heuristic_integrate", "integrate_segment",
    "legendre_scheme", "required_order",
    "IntegrationReport", "PlanConfig", "ProxyModel", "SegmentPlan", "cost", "execute",
    "integrate", "plan_main", "plan_reference",
]
