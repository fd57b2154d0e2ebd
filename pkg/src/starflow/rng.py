"""Counter-based random streams.

Every stochastic object in the package draws from a Philox generator keyed
by (seed, stream_id).  Philox is counter-based, so identical keys reproduce
identical draws bit-for-bit on any platform, and distinct stream ids give
statistically independent streams that can be generated in parallel.
"""

import numpy as np


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Return a Generator for the (seed, stream_id) stream."""
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream_id & (2**64 - 1)]))
