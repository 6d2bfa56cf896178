"""
powerstruct - exact power structures over pre-lambda rings and the generating
series built from them (Kapranov zeta, Hilbert schemes of points, wreath-product
orbifolds), with brute-force oracles for the core identities.
"""

# Package version
__version__ = "0.1.0"

from .logging_config import get_logger

# Create package-level logger; handlers are installed by the command line
logger = get_logger(__name__)
