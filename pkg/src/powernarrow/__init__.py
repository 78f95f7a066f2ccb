"""Two-level pulsed-spectroscopy toolkit: line profiles, excitation
landscapes and power narrowing for Lorentzian-power pulse shapes."""

from .adiabatic import (AdiabaticDiagnostics, adiabatic_diagnostics, border_detuning,
                        eigensplitting, mixing_angle_rate, nonadiabatic_peak_time,
                        predicted_exponent, truncation_artifact)
from .dynamics import (PropagationResult, TwoLevelState, convergence_probe,
                       population_trajectory, propagate, propagate_sampled,
                       rabi_rect_oracle, rosen_zener_oracle,
                       transition_probabilities)
from .errors import (DegenerateSamplingError, InconclusiveError, NoRootError,
                     ResourceLimitError, SingularDetuningError, UnsupportedShapeError)
from .pulse import (HARDWARE_DT, HARDWARE_GRANULARITY, Gaussian, LorentzianPower,
                    PulseSpec, Rectangular, SampledPulse, Sech, ShapeFamily,
                    amplitude_for_area, cutoff_time, hardware_sample, pulse_area,
                    sample, shape_derivative, shape_value)
from .spectro import (CutoffStudyEntry, FwhmResult, Landscape, ScalingFit,
                      SpectralProfile, TruncationResidual, cutoff_study,
                      excitation_landscape, fit_scaling, fwhm, fwhm_for_area,
                      profile_for_area, rabi_slice, scaling_study,
                      spectral_profile, truncation_residual,
                      truncation_residual_slope)
from .units import mhz_to_radns, radns_to_mhz

__version__ = "0.1.0"
