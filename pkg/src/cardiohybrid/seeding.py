"""Derive independent integer seeds from a root seed and task coordinates."""

import numpy as np


def derive_seed(seed: int, *keys: int) -> int:
    """Stable 32-bit seed for the task addressed by ``keys`` (fold, cell, ...).

    The value depends only on the arguments, never on scheduling order.
    """
    entropy = [int(seed)] + [int(k) for k in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])
