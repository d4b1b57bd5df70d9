"""Recurrence coefficients of generalized Jacobi weights and their 1/n asymptotics."""
from .errors import (AccuracyError, ConvergenceError, DomainError, GenJacError,
                     OrderError, PositivityError, PrecisionError, RangeError)
from .weight_model import ChebSeries, WeightSpec, eval_weight, log_h_series, validate
from .recurrence_oracle import RecurrenceTable, jacobi_closed_form, stieltjes

__version__ = "0.1.0"
