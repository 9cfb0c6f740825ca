"""Ruelle operator toolkit.

Thin package wrapper around the compiled extension. In an installed wheel the
extension lives inside this package; in a plain build tree it sits in the
CMake binary directory, so fall back to a top-level import there.
"""

try:
    from ._rpfkit import (
        ToolkitError,
        entropy,
        input_digest,
        pressure,
        run,
        run_csv,
        spectral_radius,
        version,
    )
except ImportError:  # build-tree layout: extension beside, not inside, the package
    from _rpfkit import (
        ToolkitError,
        entropy,
        input_digest,
        pressure,
        run,
        run_csv,
        spectral_radius,
        version,
    )

__version__ = version()

__all__ = [
    "ToolkitError",
    "entropy",
    "input_digest",
    "pressure",
    "run",
    "run_csv",
    "spectral_radius",
    "version",
]
