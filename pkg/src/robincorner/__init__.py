"""Singular eigensolutions of the Laplace equation in a Dirichlet-Robin corner."""
from .errors import (ClosedFormBranchError, ConfigError, DivergentEnergyError, DomainError,
                     InconsistentSystemError, RobinCornerError, SingularityError,
                     TerminationMismatchError)
from .exactq import (IRRATIONAL, AngleSpec, Approach, Classification, CornerConfig,
                     DeclaredIrrational, EnergyVerdict, FractionForm, classify, fraction_form,
                     is_cos_zero, is_lambda_shift_zero, is_sin_zero, rho, suggest_rational)
from .series import (AsymptoticSeries, SeriesStatus, ShadowTerm, TriangularSystem, build_series,
                     build_system_direct, build_system_recursive, main_term, solve_triangular)
from .evaluation import (PointEval, RobinEigenvalue, abs_error, closed_form_series, eval_series,
                         eval_term, grad_term, harmonicity_check, lambda_robin, rel_error)
from .energy import EnergyResult, energy_finite, radial_antiderivative, series_energy, term_pair_energy
from .crack import CrackReport, crack_regime, traction

__version__ = "0.1.0"
