"""
stratgrad/settings.py

Numerical defaults and environment overrides.
"""

import os

# Wolfe min-norm point: absolute optimality-gap tolerance (scaled by the
# largest squared generator norm)
MIN_NORM_TOL = 1e-10
MIN_NORM_MAX_ITERS = 1000

# Guards turning almost-sure termination into hard errors
MAX_INNER_ITERATIONS = 1_000_000
MAX_DIFFERENTIABLE_ROUNDS = 100
MAX_BACKTRACKS = 60

# Barcode memoization (entries keyed by vertex preorder)
CACHE_SIZE = int(os.environ.get("STRATGRAD_CACHE_SIZE", "10000"))

LOG_LEVEL = os.environ.get("STRATGRAD_LOG_LEVEL", "INFO")

OUTPUT_DIR = os.environ.get("STRATGRAD_OUTPUT_DIR", "runs")
