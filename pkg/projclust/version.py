# projclust/version.py
"""Version information for projclust"""

import numpy as np

__version__ = "1.0.0"
__build__ = "2026.10.18"
__description__ = "Random projections for facility location and minimum spanning trees"

# Report layout version, bumped on any incompatible change to report fields
REPORT_SCHEMA = 1

# Every random draw goes through this pipeline; it is echoed into reports so
# a run can be reproduced bit-exactly on another machine.
PRNG_BIT_GENERATOR = "Philox4x64-10"
PRNG_NORMAL_TRANSFORM = "ziggurat"


def get_version():
    """Get the current version string"""
    return __version__


def get_generator_version():
    """Identifier of the PRNG + Gaussian transform used for every draw"""
    return f"numpy-{np.__version__}/{PRNG_BIT_GENERATOR}/{PRNG_NORMAL_TRANSFORM}"


def get_version_info():
    """Get detailed version information, as embedded in reports"""
    return {
        "version": __version__,
        "build": __build__,
        "description": __description__,
        "generator": get_generator_version(),
        "schema": REPORT_SCHEMA,
    }


def get_full_version():
    """Get full version string with build info"""
    return f"projclust v{__version__} (Build {__build__})"
