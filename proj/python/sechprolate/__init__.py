"""SVD of the truncated Fourier transform on L2(cosh(b.)), bounds and extrapolation."""

from ._core import *  # noqa: F401,F403
from ._core import NumericalError, ResolutionError, UntrustedIndexError, __doc__, __version__  # noqa: F401
