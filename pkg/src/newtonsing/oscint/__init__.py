"""Oscillatory integrals J(xi) with polynomial phases and their decay rates."""
from .amplitude import (AmplitudeSpec, AnnulusAmplitude, BoxAmplitude, CollarAmplitude,
                        LocalizedAmplitude, amplitude_from_dict)
from .decay import (DecayFit, WorstCase, critical_points, decay_fit, degenerate_seeds,
                    gamma_condition_report, localize, predicted_gamma, s_grid, vdc_check,
                    worst_case_decay)
from .phase import FloatPolynomial
from .quadrature import QuadConfig, osc_integral
from .rescale import RescaleCheck, rescale_check, rescale_phase

__all__ = [
    "AmplitudeSpec", "AnnulusAmplitude", "BoxAmplitude", "CollarAmplitude", "LocalizedAmplitude",
    "amplitude_from_dict", "DecayFit", "WorstCase", "critical_points", "decay_fit",
    "degenerate_seeds", "gamma_condition_report", "localize", "predicted_gamma", "s_grid",
    "vdc_check", "worst_case_decay", "FloatPolynomial", "QuadConfig", "osc_integral",
    "RescaleCheck", "rescale_check", "rescale_phase",
]
