"""Photoacoustic tomography reconstruction with angular deblurring.

Thin numpy-facing wrapper over the C++ core: spectral wave solver, finite-time
filtered backprojection, polar resampling, angular convolution kernels, the
noise model, and the earth-mover's-distance utilities.
"""

from ._core import (
    GridSpec,
    angular_convolve,
    angular_convolve_adjoint,
    emd,
    forward,
    forward_blurred,
    inverse,
    make_grid,
    make_kernel,
    psnr,
    sample_measurement_noise,
    sample_polar_noise,
    sharp_oracle,
    synth_vessel_phantom,
    to_cartesian,
    to_polar,
    wave_snapshot,
)

__all__ = [
    "GridSpec",
    "angular_convolve",
    "angular_convolve_adjoint",
    "emd",
    "forward",
    "forward_blurred",
    "inverse",
    "make_grid",
    "make_kernel",
    "psnr",
    "sample_measurement_noise",
    "sample_polar_noise",
    "sharp_oracle",
    "synth_vessel_phantom",
    "to_cartesian",
    "to_polar",
    "wave_snapshot",
]

__version__ = "0.1.0"
