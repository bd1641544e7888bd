"""Shared fixtures: bundled data paths and frequently used forms."""

import math
import random
from pathlib import Path

import numpy as np
import pytest

from genusvar import rational
from genusvar.forms import QuadForm, e8_form, identity_form, load_genus

DATA = Path(__file__).resolve().parents[1] / "src" / "genusvar" / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def e8() -> QuadForm:
    return e8_form()


@pytest.fixture(scope="session")
def dim16_genus():
    return load_genus(DATA / "dim16.json")


@pytest.fixture(scope="session")
def dim9_genus():
    return load_genus(DATA / "dim9.json")


@pytest.fixture(scope="session")
def niemeier_genus():
    return load_genus(DATA / "niemeier24.json")


def random_unimodular(m: int, rng: random.Random, steps: int = 12):
    """Random integer matrix with determinant ±1 (products of shears/swaps)."""
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(steps):
        i, j = rng.randrange(m), rng.randrange(m)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(m):
            u[i][k] += c * u[j][k]
        if rng.random() < 0.3:
            a, b = rng.randrange(m), rng.randrange(m)
            if a != b:
                u[a], u[b] = u[b], u[a]
    return u


def conjugate(form: QuadForm, u) -> list:
    """u^T gram u as plain lists."""
    m = form.dim
    g = form.as_lists()
    gu = [[sum(g[i][k] * u[k][j] for k in range(m)) for j in range(m)]
          for i in range(m)]
    return [[sum(u[k][i] * gu[k][j] for k in range(m)) for j in range(m)]
            for i in range(m)]


def box_vectors(form: QuadForm, bound: int):
    """All nonzero x with x^T gram x <= bound, by exhaustive box sweep.

    The oracle for enumeration tests: every coordinate of a norm-bounded
    vector satisfies |x_i| <= sqrt(bound * (gram^-1)_ii), so sweeping the box
    is exhaustive.  Vectorized one slab per value of the first coordinate.
    """
    m = form.dim
    inv = rational.fraction_inverse(form.as_lists())
    caps = [int(math.isqrt(int(bound * inv[i][i]))) + 1 for i in range(m)]
    g = np.array(form.as_lists(), dtype=np.int64)
    axes = [np.arange(-c, c + 1, dtype=np.int64) for c in caps]
    grid = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, m - 1)
    out = []
    for x0 in axes[0]:
        pts = np.concatenate(
            [np.full((grid.shape[0], 1), x0, dtype=np.int64), grid], axis=1)
        norms = np.einsum("ij,jk,ik->i", pts, g, pts)
        keep = (norms > 0) & (norms <= bound)
        for v, n in zip(pts[keep], norms[keep]):
            out.append((tuple(int(c) for c in v), int(n)))
    return out
