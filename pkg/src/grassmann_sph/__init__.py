"""Spherical functions on the complex Grassmannians SU(p+q)/S(U(p) x U(q)).

Evaluation of phi_lambda at arbitrary (including confluent) torus points,
decay-envelope sweeps, and L^2 / H^s series for convolution powers of
orbital measures.
"""

__version__ = "0.1.0"

from .jacobi import (JacobiParams, jacobi_derivative, jacobi_eval, normalized_jacobi,
                     normalized_jacobi_derivative)
from .space import (GrassmannianSpace, SphericalWeight, TorusPoint, casimir, classify_point,
                    degree_surrogate, enumerate_weights, identity_point, make_space,
                    point_from_nodes)
from .spherical import (CalibrationRecord, EvalRequest, EvalResult, c_pq, calibrate_constants,
                        eval_auto, eval_confluent, eval_generic, eval_minus_one_closed_form,
                        evaluate, get_calibration, oracle_exact, phi_batch)
from .bounds import BoundKind, RatioSweepReport, envelope, ratio_sweep, slope_estimate
from .series import SeriesReport, ThresholdRecord, k_min_search, series_sweep, thresholds
