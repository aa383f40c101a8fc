"""Shared test helpers: quasi-random point sets and random profile pairs."""

import numpy as np

from gausym import Profile


def quasi_random_points(n: int, dim: int, low: float = -3.0, high: float = 3.0) -> np.ndarray:
    """Deterministic low-discrepancy points via the additive golden-ratio
    lattice, mapped into [low, high]^dim."""
    # generalized golden ratios: x^(dim+1) = x + 1
    g = 1.0
    for _ in range(32):
        g = (1.0 + g) ** (1.0 / (dim + 1))
    alphas = (1.0 / g) ** np.arange(1, dim + 1)
    k = np.arange(1, n + 1)[:, None]
    u = (0.5 + k * alphas[None, :]) % 1.0
    return low + (high - low) * u


def random_profile(rng: np.random.Generator, max_pieces: int = 64) -> Profile:
    k = int(rng.integers(4, max_pieces))
    widths = rng.dirichlet(np.ones(k))
    values = np.sort(rng.gamma(2.0, 1.0, size=k))[::-1]
    knots = np.concatenate(([0.0], np.cumsum(widths)))
    knots[-1] = 1.0
    return Profile(knots, values)


def averaged_profile(rng: np.random.Generator, h: Profile) -> Profile:
    """Block-average a decreasing profile over a random consecutive
    partition: the result is majorized by the original (averaging only
    flattens partial sums), with equal total integral."""
    k = h.num_pieces
    n_blocks = int(rng.integers(1, k + 1))
    cuts = np.sort(rng.choice(np.arange(1, k), size=min(n_blocks - 1, k - 1), replace=False))
    bounds = np.concatenate(([0], cuts, [k]))
    widths = h.widths
    new_vals = []
    new_widths = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        w = widths[lo:hi].sum()
        new_vals.append(float(np.sum(h.values[lo:hi] * widths[lo:hi]) / w))
        new_widths.append(w)
    knots = np.concatenate(([0.0], np.cumsum(new_widths)))
    knots[-1] = 1.0
    return Profile(knots, np.asarray(new_vals))


def majorized_pair(rng: np.random.Generator) -> tuple[Profile, Profile]:
    """(g, h) with g majorized by h: block averages scaled by u <= 1,
    with occasional identical pairs."""
    h = random_profile(rng)
    if rng.random() < 0.1:
        return h, h
    g = averaged_profile(rng, h)
    if rng.random() < 0.5:
        g = g.scaled(float(rng.uniform(0.75, 1.0)))
    return g, h
