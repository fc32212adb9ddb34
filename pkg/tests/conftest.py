"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from vtsearch import random_subroutine, stopping_profile


def span_residual(generators, vec):
    """Distance from vec to the span of a list of generators (least squares)."""
    m = np.stack([np.asarray(g, dtype=complex) for g in generators], axis=1)
    coef, *_ = np.linalg.lstsq(m, np.asarray(vec, dtype=complex), rcond=None)
    return float(np.linalg.norm(vec - m @ coef))


def moment_arrays(spec):
    """(E[T], E[T^2]) arrays across the inputs of a subroutine spec."""
    profiles = [stopping_profile(spec, i) for i in range(spec.num_inputs)]
    exp_t = np.array([p.moments()[0] for p in profiles])
    exp_t2 = np.array([p.moments()[1] for p in profiles])
    return exp_t, exp_t2


def late_halting_fractions(num_steps):
    """Halting fractions with an empty first cell, so T >= 2 almost surely."""
    fractions = np.zeros(num_steps)
    fractions[1:] = 1.0 / (num_steps - 1)
    return fractions


def spec_pair(seed, n=2, t_max=2, workspace=2):
    """A (marked, all-unmarked) pair of zero-error subroutines.

    Both use an empty first halting cell; the marked spec marks input 0.
    """
    fractions = late_halting_fractions(t_max)
    marked = random_subroutine(seed, n, t_max, workspace,
                               halting_fractions=fractions, marked=(0,))
    empty = random_subroutine(seed + 10_000, n, t_max, workspace,
                              halting_fractions=fractions, marked=())
    return marked, empty


@pytest.fixture(scope="session")
def small_pair():
    """Smallest nontrivial pair (instance dimension 504)."""
    return spec_pair(7)
