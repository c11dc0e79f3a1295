"""Deterministic random stream derivation.

All randomness in the package flows through Philox, a counter-based 64-bit
generator, keyed by SeedSequence((master_seed, index, ...)).  Two properties
matter downstream:

- replicate r of an experiment always uses derive_stream(seed, r), so results
  do not depend on scheduling or worker count;
- nested substreams (pair sampling inside a replicate, burn-in vs main run)
  extend the key tuple instead of consuming draws from the parent, so adding
  a consumer never shifts another consumer's draws.

Draw-count contracts are documented at each call site; the only primitive
consumed here is the generator itself.
"""

from __future__ import annotations

import numpy as np


def derive_stream(master_seed: int, *indices: int) -> np.random.Generator:
    """Return the Philox stream keyed by (master_seed, *indices).

    Distinct key tuples give statistically independent streams; equal tuples
    give bit-identical streams regardless of platform or call order.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((master_seed, *indices))))
