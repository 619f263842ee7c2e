"""Tools for the average-distance problem in l_p spaces.

Exact and sampled evaluation of the sign-averaged functional phi, the
reduction of point configurations to (alpha, u) data, the two critical
exponents, and numeric certification suites for the supporting inequalities.
"""
from .certify import CertReport, run_all
from .constants import RootResult, p_zero, threshold_intro
from .lp_core import Configuration, LpVector, distance, norm, sample_configuration
from .phi_engine import PhiResult, f, f_sup, phi, phi_exact, phi_gradient, phi_mc
from .reduction import ReducedConfig, reduce, u_from_sigma

__version__ = "0.1.0"

__all__ = [
    "CertReport", "Configuration", "LpVector", "PhiResult", "ReducedConfig", "RootResult",
    "distance", "f", "f_sup", "norm", "p_zero", "phi", "phi_exact", "phi_gradient", "phi_mc",
    "reduce", "run_all", "sample_configuration", "threshold_intro", "u_from_sigma",
]
