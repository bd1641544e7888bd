"""Point-pair kernels on the norm-n quadric and the two sides of the variance.

The geometric side integrates the squared fluctuation of the kernel-smoothed
point count over the real quadric, class by class, and adds the exact
cross-class spread.  The spectral side expands the same kernel through its
spherical transform and sums h(k)^2 against the zonal pair sums.  The module
also carries the equidistribution statistics on the unit quadric (variance of
the smoothed count, empty-cap fractions, and rational-point witnesses).

Monte Carlo sampling is counter-based: fixed 65536-sample chunks, one Philox
stream per (seed, lane, chunk), reduced in chunk order, so reports are
byte-identical for a given seed no matter how work is partitioned.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    EmptySolutionSet,
    InputError,
    NoPoints,
    QuadratureFailure,
)
from .enumeration import norm_vectors, rep_count, short_vectors
from .forms import GenusData, QuadForm, identity_form
from .harmonics import harmonic_dimension, spectral_pair_sum, zonal_table
from .mass import is_prime

CHUNK = 65536
K_MAX_HARD = 240

_LANE_EQUIDIST = 1 << 20
_LANE_CAPS = (1 << 20) + 1
_LANE_WITNESS = (1 << 20) + 2


# ---------------------------------------------------------------------------
# kernel profiles


def bump_profile(s):
    """1 on [0,1], a smooth shoulder on (1,2), 0 beyond; C^1 at the kink."""
    s = np.abs(np.asarray(s, dtype=float))
    out = np.zeros_like(s)
    out[s <= 1.0] = 1.0
    mid = (s > 1.0) & (s < 2.0)
    if mid.any():
        u = s[mid] - 1.0
        out[mid] = np.exp(1.0 - 1.0 / (1.0 - u * u))
    return out


def flat_profile(s):
    """Constant 1; the trivial-kernel test hook."""
    return np.ones_like(np.asarray(s, dtype=float))


_PROFILES = {"bump": bump_profile, "flat": flat_profile}


def _weight_norm(m: int) -> float:
    return math.sqrt(math.pi) * math.gamma((m - 1) / 2) / math.gamma(m / 2)


_GL_CACHE: dict = {}


def _gl(npts: int):
    if npts not in _GL_CACHE:
        _GL_CACHE[npts] = np.polynomial.legendre.leggauss(npts)
    return _GL_CACHE[npts]


def _segments(m: int, n: int, r: float):
    t1 = 1.0 - r * r / (2.0 * n)
    t2 = 1.0 - 2.0 * r * r / n
    cuts = [0.0]
    for t in (t1, t2):
        if -1.0 < t < 1.0:
            cuts.append(math.acos(t))
    cuts.append(math.pi)
    return sorted(set(cuts))


def _transform_raw(m, n, r, profile_fn, k_hi, npts):
    """Weighted integrals <prof * P_k> and <prof^2> on the pairing variable.

    Integration runs in the angle variable (weight sin^{m-2}, no endpoint
    singularity for any m >= 2), split at the profile's two kinks.
    """
    cuts = _segments(m, n, r)
    base, basew = _gl(npts)
    thetas = []
    weights = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid, half = (a + b) / 2.0, (b - a) / 2.0
        thetas.append(mid + half * base)
        weights.append(half * basew)
    theta = np.concatenate(thetas)
    wgt = np.concatenate(weights) * np.sin(theta) ** (m - 2) / _weight_norm(m)
    s = 2.0 * math.sqrt(n) * np.sin(theta / 2.0) / r
    kappa = profile_fn(s)
    table = zonal_table(m, k_hi, np.cos(theta))
    raw = table @ (kappa * wgt)
    raw_sq = float((kappa * kappa) @ wgt)
    return raw, raw_sq


# ---------------------------------------------------------------------------
# kernel and transform


@dataclass(frozen=True)
class Kernel:
    """Normalized point-pair kernel K(x,y) = C * profile(|x-y|_A / r)."""

    form: QuadForm
    n: int
    r: float
    profile: str
    constant: float
    degenerate: bool

    def value_at_t(self, t):
        """Kernel value as a function of the normalized pairing <x,y>/n."""
        t = np.asarray(t, dtype=float)
        d = np.sqrt(2.0 * self.n * np.clip(1.0 - t, 0.0, None))
        return self.constant * _PROFILES[self.profile](d / self.r)

    def __call__(self, x, y) -> float:
        g = np.array(self.form.as_lists(), dtype=float)
        d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        return float(self.constant *
                     _PROFILES[self.profile]([math.sqrt(d @ g @ d) / self.r])[0])


def kernel_normalize(form: QuadForm, n: int, r: float, profile: str = "bump") -> Kernel:
    """Fix the constant so the kernel integrates to one over the quadric."""
    m = form.dim
    if m < 2:
        raise InputError("kernels need dimension >= 2")
    n = int(n)
    if n < 1 or not (r > 0):
        raise InputError("need n >= 1 and r > 0")
    if profile not in _PROFILES:
        raise InputError(f"unknown profile {profile!r}")
    degenerate = r * r >= n
    if profile == "flat":
        return Kernel(form=form, n=n, r=float(r), profile=profile,
                      constant=1.0, degenerate=degenerate)
    coarse, _ = _transform_raw(m, n, r, _PROFILES[profile], 0, 320)
    fine, _ = _transform_raw(m, n, r, _PROFILES[profile], 0, 640)
    residual = abs(float(fine[0]) - float(coarse[0]))
    if not fine[0] > 0 or residual > 1e-8 * max(1.0, float(fine[0])):
        raise QuadratureFailure(f"normalization residual {residual:g}")
    return Kernel(form=form, n=n, r=float(r), profile=profile,
                  constant=1.0 / float(fine[0]), degenerate=degenerate)


@dataclass(frozen=True)
class SphericalTransform:
    """Transform values h(k) of a normalized kernel, with a tail certificate.

    tail_bound is the h^2-mass sum_{k > k_max} h(k)^2 dim(H_k), obtained as
    the quadrature value of the kernel's squared norm minus the retained
    partial sum; downstream users multiply it by a bound on pair sums per
    harmonic dimension.
    """

    m: int
    n: int
    r: float
    profile: str
    h: np.ndarray
    k_max: int
    tail_bound: float
    kernel_sq: float
    stop_reason: str
    residual: float

    def tail_mass_at(self, k: int) -> float:
        dims = np.array([harmonic_dimension(self.m, j) for j in range(k + 1)])
        partial = float((self.h[:k + 1] ** 2) @ dims)
        return max(0.0, self.kernel_sq - partial)


def spherical_transform(form: QuadForm, n: int, r: float, k_max="auto",
                        profile: str = "bump") -> SphericalTransform:
    """Spherical transform of the normalized kernel, h(0) = 1 by construction."""
    m = form.dim
    if m < 2:
        raise InputError("transforms need dimension >= 2")
    n = int(n)
    if n < 1 or not (r > 0):
        raise InputError("need n >= 1 and r > 0")
    auto = isinstance(k_max, str)
    if auto and k_max != "auto":
        raise InputError(f"k_max must be an integer or 'auto', not {k_max!r}")
    if profile == "flat":
        k_hi = 0 if auto else int(k_max)
        h = np.zeros(k_hi + 1)
        h[0] = 1.0
        return SphericalTransform(m=m, n=n, r=float(r), profile=profile, h=h,
                                  k_max=k_hi, tail_bound=0.0, kernel_sq=1.0,
                                  stop_reason="trivial", residual=0.0)
    k_hi = K_MAX_HARD if auto else int(k_max)
    if k_hi < 0:
        raise InputError("k_max must be nonnegative")
    fn = _PROFILES[profile]
    coarse, sq_c = _transform_raw(m, n, r, fn, k_hi, 320)
    fine, sq_f = _transform_raw(m, n, r, fn, k_hi, 640)
    if not fine[0] > 0:
        raise QuadratureFailure("kernel mass integrated to zero")
    h_c = coarse / coarse[0]
    h = fine / fine[0]
    residual = float(max(np.abs(h - h_c).max(), abs(sq_f - sq_c)))
    if residual > 1e-9:
        raise QuadratureFailure(f"transform residual {residual:g}")
    kernel_sq = sq_f / float(fine[0]) ** 2
    stop = "requested"
    cut = k_hi
    if auto:
        stop = "hard_cap"
        run = 0
        for k in range(1, k_hi + 1):
            run = run + 1 if abs(h[k]) < 1e-12 else 0
            if run == 3:
                cut = k - 3
                stop = "threshold"
                break
    h = h[:cut + 1].copy()
    dims = np.array([harmonic_dimension(m, j) for j in range(cut + 1)])
    tail = max(0.0, kernel_sq - float((h * h) @ dims))
    return SphericalTransform(m=m, n=n, r=float(r), profile=profile, h=h,
                              k_max=cut, tail_bound=tail, kernel_sq=kernel_sq,
                              stop_reason=stop, residual=residual)


# ---------------------------------------------------------------------------
# sampling


def _whitener(form: QuadForm) -> np.ndarray:
    """T with x = T u mapping the round sphere to the quadric; u = L^T x."""
    a = np.array(form.as_lists(), dtype=float)
    low = np.linalg.cholesky(a)
    return np.linalg.inv(low).T


def _chunk_normals(seed: int, lane: int, chunk_idx: int, rows: int, cols: int):
    key = np.array([seed % (1 << 64), (lane * (1 << 44) + chunk_idx) % (1 << 64)],
                   dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.standard_normal((rows, cols))


def _unit_rows(g: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    return g / norms[:, None]


def sample_sphere(form: QuadForm, n: int, count: int, seed: int = 0,
                  task_count: int = 1) -> np.ndarray:
    """Points of the invariant measure on the norm-n quadric of the form."""
    m = form.dim
    if m < 2:
        raise InputError("sampling needs dimension >= 2")
    n = int(n)
    count = int(count)
    if n < 1 or count < 1:
        raise InputError("need n >= 1 and count >= 1")
    t = _whitener(form)
    out = np.empty((count, m))
    root = math.sqrt(n)
    for idx, lo in enumerate(range(0, count, CHUNK)):
        rows = min(CHUNK, count - lo)
        u = _unit_rows(_chunk_normals(seed, 0, idx, rows, m)) * root
        out[lo:lo + rows] = u @ t.T
    return out


# ---------------------------------------------------------------------------
# geometric side


@dataclass(frozen=True)
class GeometricSide:
    value: object
    mode: str
    cross_class: Fraction
    per_class: tuple
    stderr: float | None = None
    quadrature_bound: float | None = None
    samples: int | None = None
    seed: int | None = None
    task_count: int = 1


def _cross_class(genus: GenusData, n: int, budget=None):
    reps = [Fraction(rep_count(cls, n, budget=budget)) for cls in genus.classes]
    mean = sum(w * x for w, x in zip(genus.weights, reps))
    spread = sum(w * (x - mean) ** 2 for w, x in zip(genus.weights, reps))
    return reps, spread


def _pair_matrix(form: QuadForm, n: int, budget=None) -> np.ndarray:
    """Rows b_y = L^T y so that <x, y>_A = u . b_y in whitened coordinates."""
    vecs = short_vectors(form, n, budget=budget).vectors_norm(n)
    a = np.array(form.as_lists(), dtype=float)
    low = np.linalg.cholesky(a)
    return vecs.astype(float) @ low


def _smoothed_counts(u: np.ndarray, bmat: np.ndarray, kern: Kernel) -> np.ndarray:
    if bmat.shape[0] == 0:
        return np.zeros(u.shape[0])
    t = (u @ bmat.T) / kern.n
    return kern.value_at_t(t).sum(axis=1)


def _quad_class_variance(form, n, kern, center, budget=None):
    """Exact-measure integral of (smoothed count - center)^2 for m = 3.

    Product quadrature on the angle parametrization, doubled until stable;
    no harmonic expansion is involved.
    """
    bmat = _pair_matrix(form, n, budget)
    root = math.sqrt(n)
    value = None
    bound = math.inf
    nt, nphi = 128, 256
    while True:
        nodes, wts = _gl(nt)
        phi = (np.arange(nphi) + 0.5) * (2.0 * math.pi / nphi)
        sint = np.sqrt(np.clip(1.0 - nodes ** 2, 0.0, None))
        u = np.empty((nt * nphi, 3))
        u[:, 0] = (np.outer(sint, np.cos(phi))).ravel() * root
        u[:, 1] = (np.outer(sint, np.sin(phi))).ravel() * root
        u[:, 2] = np.repeat(nodes, nphi) * root
        f = _smoothed_counts(u, bmat, kern) - center
        mean_phi = (f * f).reshape(nt, nphi).mean(axis=1)
        new = float((wts @ mean_phi) / 2.0)
        if value is not None:
            bound = abs(new - value)
            if bound <= 1e-6 * max(1.0, abs(new)):
                return new, bound
            if nt >= 2048:
                raise QuadratureFailure(
                    f"angle quadrature stalled at residual {bound:g}")
        value = new
        nt, nphi = nt * 2, nphi * 2


def geometric_variance(genus: GenusData, n: int, r: float, mode: str = "auto",
                       samples: int = 100000, seed: int = 0, task_count: int = 1,
                       profile: str = "bump", budget=None) -> GeometricSide:
    """Weighted per-class variance of the smoothed count, plus class spread.

    Each class is centered at its own representation number; the exact
    rational spread of the class counts around the genus average is added on
    top.  The trivial profile short-circuits to the exact spread.
    """
    n = int(n)
    if n < 1:
        raise InputError("norm must be a positive integer")
    m = genus.dim
    reps, spread = _cross_class(genus, n, budget)
    if profile == "flat":
        return GeometricSide(value=spread, mode="exact", cross_class=spread,
                             per_class=tuple(Fraction(0) for _ in genus.classes),
                             quadrature_bound=0.0, seed=seed, task_count=task_count)
    if mode == "auto":
        mode = "quad" if m == 3 else "mc"
    if mode == "quad":
        if m != 3:
            raise InputError("quadrature mode is the dimension-3 path")
        total = float(spread)
        bound = 0.0
        per = []
        for w, cls, rep in zip(genus.weights, genus.classes, reps):
            kern = kernel_normalize(cls, n, r, profile)
            val, err = _quad_class_variance(cls, n, kern, float(rep), budget)
            per.append(val)
            total += float(w) * val
            bound += float(w) * err
        return GeometricSide(value=total, mode="quad", cross_class=spread,
                             per_class=tuple(per), quadrature_bound=bound,
                             seed=seed, task_count=task_count)
    if mode != "mc":
        raise InputError(f"unknown mode {mode!r}")
    samples = int(samples)
    if samples < 2:
        raise InputError("need at least two samples")
    total = float(spread)
    var_acc = 0.0
    per = []
    for lane, (w, cls, rep) in enumerate(zip(genus.weights, genus.classes, reps)):
        kern = kernel_normalize(cls, n, r, profile)
        bmat = _pair_matrix(cls, n, budget)
        root = math.sqrt(n)
        cnt = 0
        s1 = 0.0
        s2 = 0.0
        for idx, lo in enumerate(range(0, samples, CHUNK)):
            rows = min(CHUNK, samples - lo)
            u = _unit_rows(_chunk_normals(seed, lane, idx, rows, m)) * root
            f = _smoothed_counts(u, bmat, kern) - float(rep)
            y = f * f
            cnt += rows
            s1 += float(y.sum())
            s2 += float((y * y).sum())
        mean = s1 / cnt
        var_y = max(s2 / cnt - mean * mean, 0.0) * cnt / (cnt - 1)
        per.append(mean)
        total += float(w) * mean
        var_acc += (float(w) ** 2) * var_y / cnt
    return GeometricSide(value=total, mode="mc", cross_class=spread,
                         per_class=tuple(per), stderr=math.sqrt(var_acc),
                         samples=samples, seed=seed, task_count=task_count)


# ---------------------------------------------------------------------------
# spectral side


@dataclass(frozen=True)
class SpectralSide:
    value: object
    k_max: int
    tail_bound: float
    pair_zero: Fraction
    stop_reason: str


def spectral_variance(genus: GenusData, n: int, r: float, k_max="auto",
                      profile: str = "bump", budget=None) -> SpectralSide:
    """Sum of h(k)^2 times the zonal pair sums, with a rigorous tail bound."""
    n = int(n)
    if n < 1:
        raise InputError("norm must be a positive integer")
    pair0 = spectral_pair_sum(genus, 0, n, budget=budget)
    if profile == "flat":
        return SpectralSide(value=pair0, k_max=0, tail_bound=0.0,
                            pair_zero=pair0, stop_reason="trivial")
    st = spherical_transform(genus.classes[0], n, r, k_max=k_max, profile=profile)
    reps = [rep_count(cls, n, budget=budget) for cls in genus.classes]
    second = float(sum(w * Fraction(x) ** 2 for w, x in zip(genus.weights, reps)))
    mean_sq = float(sum(w * Fraction(x) for w, x in zip(genus.weights, reps))) ** 2
    total = float(pair0)
    auto = isinstance(k_max, str)
    effective = st.k_max
    run = 0
    for k in range(1, st.k_max + 1):
        term = float(st.h[k]) ** 2 * spectral_pair_sum(genus, k, n, budget=budget)
        total += term
        if auto:
            cap = float(st.h[k]) ** 2 * harmonic_dimension(st.m, k) * mean_sq
            run = run + 1 if cap < 1e-8 * max(total, 1e-300) else 0
            if run == 3:
                effective = k
                break
    tail = st.tail_mass_at(effective) * second
    return SpectralSide(value=total, k_max=effective, tail_bound=tail,
                        pair_zero=pair0, stop_reason=st.stop_reason)


@dataclass(frozen=True)
class VarianceReport:
    n: int
    r: float
    profile: str
    geometric: GeometricSide
    spectral: SpectralSide
    agreement_kind: str
    agreement: float
    rep_counts: tuple
    rep_average: Fraction
    local_average: float | None = None


def variance_report(genus: GenusData, n: int, r: float, mode: str = "auto",
                    samples: int = 100000, seed: int = 0, task_count: int = 1,
                    k_max="auto", profile: str = "bump", include_local: bool = False,
                    budget=None) -> VarianceReport:
    """Both sides of the variance identity, with an agreement statistic."""
    geo = geometric_variance(genus, n, r, mode=mode, samples=samples, seed=seed,
                             task_count=task_count, profile=profile, budget=budget)
    spec = spectral_variance(genus, n, r, k_max=k_max, profile=profile, budget=budget)
    reps = tuple(rep_count(cls, n, budget=budget) for cls in genus.classes)
    average = sum(w * Fraction(x) for w, x in zip(genus.weights, reps))
    gap = abs(float(geo.value) - float(spec.value))
    if geo.stderr is not None and geo.stderr > 0:
        kind, stat = "z_score", gap / geo.stderr
    else:
        kind = "relative_gap"
        stat = gap / max(abs(float(geo.value)), abs(float(spec.value)), 1e-300)
    local = None
    if include_local:
        from .mass import siegel_average
        local = siegel_average(genus, n, method="local").local
    return VarianceReport(n=n, r=float(r), profile=profile, geometric=geo,
                          spectral=spec, agreement_kind=kind, agreement=stat,
                          rep_counts=reps, rep_average=average, local_average=local)


# ---------------------------------------------------------------------------
# equidistribution statistics on the unit quadric


def _unit_points(form: QuadForm, n: int, budget=None):
    vecs = norm_vectors(form, int(n), budget=budget)
    if vecs.shape[0] == 0:
        raise EmptySolutionSet(f"norm {n} is not represented")
    a = np.array(form.as_lists(), dtype=float)
    low = np.linalg.cholesky(a)
    return vecs.astype(float) @ low / math.sqrt(n)


@dataclass(frozen=True)
class EquidistReport:
    n: int
    eta: float
    rep: int
    var: float
    normalized: float
    stderr: float
    samples: int
    seed: int
    task_count: int
    gcd_warning: bool
    degenerate: bool


def equidist_variance(form: QuadForm, n: int, eta: float, samples: int = 100000,
                      seed: int = 0, task_count: int = 1, budget=None) -> EquidistReport:
    """Variance of the eta-smoothed count over rescaled norm-n points."""
    m = form.dim
    n = int(n)
    samples = int(samples)
    if n < 1 or not (eta > 0) or samples < 2:
        raise InputError("need n >= 1, eta > 0 and samples >= 2")
    gcd_bad = math.gcd(n, 2 * form.det) != 1
    if gcd_bad:
        warnings.warn(f"gcd({n}, 2 det) != 1: points may be poorly spread",
                      stacklevel=2)
    upts = _unit_points(form, n, budget)
    rep = upts.shape[0]
    kern = kernel_normalize(form, 1, eta)
    tree = cKDTree(upts)
    prof = _PROFILES[kern.profile]
    cnt = 0
    s1 = 0.0
    s2 = 0.0
    chunk = 8192
    for idx, lo in enumerate(range(0, samples, chunk)):
        rows = min(chunk, samples - lo)
        u = _unit_rows(_chunk_normals(seed, _LANE_EQUIDIST, idx, rows, m))
        qtree = cKDTree(u)
        dmat = qtree.sparse_distance_matrix(tree, 2.0 * eta, output_type="coo_matrix")
        sums = np.zeros(rows)
        if dmat.nnz:
            np.add.at(sums, dmat.row, kern.constant * prof(dmat.data / eta))
        f = sums - rep
        y = f * f
        cnt += rows
        s1 += float(y.sum())
        s2 += float((y * y).sum())
    mean = s1 / cnt
    var_y = max(s2 / cnt - mean * mean, 0.0) * cnt / (cnt - 1)
    stderr = math.sqrt(var_y / cnt)
    return EquidistReport(n=n, eta=float(eta), rep=rep, var=mean,
                          normalized=mean * eta ** (m - 1) / rep, stderr=stderr,
                          samples=samples, seed=seed, task_count=task_count,
                          gcd_warning=gcd_bad, degenerate=kern.degenerate)


@dataclass(frozen=True)
class CapMissReport:
    n: int
    eta: float
    fraction: float
    samples: int
    seed: int
    nn_min: float
    nn_max: float


def cap_miss_fraction(form: QuadForm, n: int, eta: float, samples: int = 100000,
                      seed: int = 0, budget=None) -> CapMissReport:
    """Fraction of random unit-quadric points farther than eta from the set."""
    m = form.dim
    n = int(n)
    samples = int(samples)
    if n < 1 or not (eta > 0) or samples < 1:
        raise InputError("need n >= 1, eta > 0 and samples >= 1")
    upts = _unit_points(form, n, budget)
    tree = cKDTree(upts)
    misses = 0
    nn_min = math.inf
    nn_max = 0.0
    for idx, lo in enumerate(range(0, samples, CHUNK)):
        rows = min(CHUNK, samples - lo)
        u = _unit_rows(_chunk_normals(seed, _LANE_CAPS, idx, rows, m))
        dists, _ = tree.query(u, k=1)
        misses += int(np.count_nonzero(dists >= eta))
        nn_min = min(nn_min, float(dists.min()))
        nn_max = max(nn_max, float(dists.max()))
    return CapMissReport(n=n, eta=float(eta), fraction=misses / samples,
                         samples=samples, seed=seed, nn_min=nn_min, nn_max=nn_max)


@dataclass(frozen=True)
class DiophantineWitness:
    m: int
    p: int
    k: int
    x: tuple
    y: tuple
    height: int
    dist: float
    exponent: float | None
    gcd_reduced: bool
    warned: bool


def diophantine_witness(m: int, p: int, k: int, x=None, seed: int = 0,
                        budget=None) -> DiophantineWitness:
    """Nearest rational point y/p^k of the unit sphere to a target point.

    Integral points of norm p^{2k} project to height-p^k rational points of
    the unit sphere (lower height when y is divisible by p; the height is
    reduced accordingly).  The empirical exponent log H / log(1/dist) is the
    quantity whose concentration the approximation theory predicts.
    """
    m = int(m)
    p = int(p)
    k = int(k)
    if m < 2 or k < 1:
        raise InputError("need m >= 2 and k >= 1")
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    warned = p % 4 != 1
    if warned:
        warnings.warn(f"prime {p} is not 1 mod 4; the point set can be thin",
                      stacklevel=2)
    form = identity_form(m)
    target = p ** (2 * k)
    vecs = short_vectors(form, target, budget=budget).vectors_norm(target)
    if vecs.shape[0] == 0:
        raise NoPoints(f"norm {target} is not represented in dimension {m}")
    if x is None:
        x = _unit_rows(_chunk_normals(seed, _LANE_WITNESS, 0, 1, m))[0]
    x = np.asarray(x, dtype=float)
    if x.shape != (m,) or not np.linalg.norm(x) > 0:
        raise InputError("x must be a nonzero point of dimension m")
    x = x / np.linalg.norm(x)
    tree = cKDTree(vecs.astype(float) / p ** k)
    dist, idx = tree.query(x, k=1)
    y = [int(v) for v in vecs[int(idx)]]
    kk = k
    reduced = False
    while all(v % p == 0 for v in y):
        y = [v // p for v in y]
        kk -= 1
        reduced = True
    height = p ** kk
    dist = float(dist)
    if dist > 0 and 0 < dist < 1:
        exponent = math.log(height) / math.log(1.0 / dist)
    else:
        exponent = None
    return DiophantineWitness(m=m, p=p, k=k, x=tuple(float(v) for v in x),
                              y=tuple(y), height=height, dist=dist,
                              exponent=exponent, gcd_reduced=reduced, warned=warned)
