"""Periodic 1D fractal gradient noise for closed-contour generation.

The lattice wraps over the angular domain so sampled contours close without
a seam: radius(0) and radius(2*pi) come from the same gradients. Octave o
uses an integer lattice period round(base_frequency * lacunarity**o), which
keeps every octave exactly periodic for the default lacunarity of 2.
"""

from __future__ import annotations

import numpy as np


def _fade(t: np.ndarray) -> np.ndarray:
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def perlin_1d_periodic(n_points: int = 50, octaves: int = 6, persistence: float = 0.5,
                       lacunarity: float = 2.0, seed=0, base_frequency: int = 2) -> np.ndarray:
    """Smooth periodic noise sampled at n_points over one full turn, in [-1, 1].

    Single-octave 1D gradient noise is bounded by half its amplitude, so the
    octave sum is bounded by 0.5 * sum(persistence**o). The output is scaled
    down only when that bound exceeds 1, which keeps it inside [-1, 1] for
    any parameters without flattening the octave energy of the defaults.
    """
    if n_points < 3:
        raise ValueError(f"need at least 3 sample points, got {n_points}")
    if octaves < 1:
        raise ValueError(f"octaves must be >= 1, got {octaves}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    total = np.zeros(n_points, dtype=np.float64)
    amp_sum = 0.0
    amp = 1.0
    for octave in range(octaves):
        period = max(1, round(base_frequency * lacunarity**octave))
        grads = rng.uniform(-1.0, 1.0, period)
        xs = np.arange(n_points) * (period / n_points)
        x0 = np.floor(xs).astype(int)
        d0 = xs - x0
        g0 = grads[x0 % period]
        g1 = grads[(x0 + 1) % period]
        u = _fade(d0)
        total += amp * ((1.0 - u) * g0 * d0 + u * g1 * (d0 - 1.0))
        amp_sum += amp
        amp *= persistence
    return total / max(1.0, 0.5 * amp_sum)
