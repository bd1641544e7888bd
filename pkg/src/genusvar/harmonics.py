"""Harmonic polynomials for a positive definite form, and what they measure.

A polynomial p is harmonic with respect to the form A when the associated
Laplacian sum((A^{-1})_{ij} d_i d_j) annihilates it.  This module builds exact
bases of such polynomials, evaluates their genus-weighted sums over lattice
points of a fixed norm (Weyl sums), assembles the corresponding q-series with
exact rational coefficients, and provides the zonal (pairing-only) functions
and pair sums that the spectral side of the variance identity consumes.

Polynomials are plain dicts mapping exponent tuples to Fraction coefficients.
Everything that claims exactness is computed in integer or Fraction
arithmetic; floats appear only in zonal evaluation tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    AllZeroSeries,
    DimensionTooSmall,
    InputError,
)
from .enumeration import short_vectors
from .forms import GenusData, QuadForm
from .isometry import orbit_decompose

Poly = dict

_MOMENTS: dict = {}
_HISTOGRAMS: dict = {}
_ORBITS: dict = {}


def clear_caches():
    _MOMENTS.clear()
    _HISTOGRAMS.clear()
    _ORBITS.clear()


# ---------------------------------------------------------------------------
# polynomial arithmetic


def _as_poly(p, m: int) -> Poly:
    out = {}
    for beta, c in p.items():
        beta = tuple(int(e) for e in beta)
        if len(beta) != m:
            raise InputError(f"exponent tuple {beta} does not match dimension {m}")
        if any(e < 0 for e in beta):
            raise InputError(f"negative exponent in {beta}")
        c = Fraction(c)
        if c:
            out[beta] = out.get(beta, Fraction(0)) + c
    return {b: c for b, c in out.items() if c}


def poly_add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for b, c in q.items():
        s = out.get(b, Fraction(0)) + c
        if s:
            out[b] = s
        elif b in out:
            del out[b]
    return out


def poly_scale(p: Poly, c) -> Poly:
    c = Fraction(c)
    if not c:
        return {}
    return {b: v * c for b, v in p.items()}


def poly_mul(p: Poly, q: Poly) -> Poly:
    out = {}
    for b1, c1 in p.items():
        for b2, c2 in q.items():
            b = tuple(x + y for x, y in zip(b1, b2))
            s = out.get(b, Fraction(0)) + c1 * c2
            if s:
                out[b] = s
            elif b in out:
                del out[b]
    return out


def poly_eval(p: Poly, x):
    total = Fraction(0)
    xs = [Fraction(v) for v in x]
    for beta, c in p.items():
        term = c
        for xi, e in zip(xs, beta):
            if e:
                term *= xi ** e
        total += term
    return total


def poly_degree(p: Poly) -> int:
    return max((sum(b) for b in p), default=0)


def gram_poly(form: QuadForm) -> Poly:
    """The norm form x^T A x as a polynomial dict."""
    cache = form.__dict__.setdefault("_poly_cache", {})
    if "q" not in cache:
        m = form.dim
        out = {}
        for i in range(m):
            for j in range(m):
                b = [0] * m
                b[i] += 1
                b[j] += 1
                b = tuple(b)
                out[b] = out.get(b, Fraction(0)) + Fraction(form.gram[i][j])
        cache["q"] = {b: c for b, c in out.items() if c}
    return cache["q"]


def _gram_power(form: QuadForm, j: int) -> Poly:
    cache = form.__dict__.setdefault("_poly_cache", {})
    powers = cache.setdefault("qpow", {0: {tuple([0] * form.dim): Fraction(1)}})
    while j not in powers:
        top = max(powers)
        powers[top + 1] = poly_mul(powers[top], gram_poly(form))
    return powers[j]


def laplacian_apply(form: QuadForm, poly: Poly) -> Poly:
    """Apply sum((A^{-1})_{il} d_i d_l) to a polynomial, exactly."""
    m = form.dim
    p = _as_poly(poly, m)
    inv = form.inverse
    out = {}
    for beta, c in p.items():
        for i in range(m):
            if beta[i] == 0:
                continue
            for l in range(m):
                a = inv[i][l]
                if not a:
                    continue
                if i == l:
                    if beta[i] < 2:
                        continue
                    factor = beta[i] * (beta[i] - 1)
                else:
                    if beta[l] == 0:
                        continue
                    factor = beta[i] * beta[l]
                b = list(beta)
                b[i] -= 1
                b[l] -= 1
                b = tuple(b)
                s = out.get(b, Fraction(0)) + c * a * factor
                if s:
                    out[b] = s
                elif b in out:
                    del out[b]
    return out


def harmonic_dimension(m: int, k: int) -> int:
    """Dimension of the degree-k harmonic space in m variables."""
    if m < 1 or k < 0:
        raise InputError("need m >= 1 and k >= 0")
    if k == 0:
        return 1
    if k == 1:
        return m
    return math.comb(m + k - 1, k) - math.comb(m + k - 3, k - 2)


# ---------------------------------------------------------------------------
# harmonic projection


def _projection_coefficients(m: int, k: int, depth: int) -> tuple:
    cees = [Fraction(1)]
    for j in range(depth):
        denom = 2 * (j + 1) * (m + 2 * k - 2 * j - 4)
        cees.append(-cees[-1] / denom)
    return tuple(cees)


@dataclass(frozen=True)
class HarmonicElement:
    """A harmonic polynomial stored through its projection chain.

    The full polynomial is sum_j cees[j] * q^j * deltas[j] where q is the norm
    form and deltas[j] is the j-th Laplacian power of the seed.  When the seed
    is a power of a single linear form l(x) the chain closes on powers of l,
    and `axis` carries the linear form instead of expanded dicts; evaluation
    then reduces to one-dimensional power sums.
    """

    form: QuadForm
    degree: int
    cees: tuple
    deltas: tuple | None = None
    axis: tuple | None = None
    axis_kappa: tuple | None = None

    def expand(self) -> Poly:
        total = {}
        for j, c in enumerate(self.cees):
            piece = poly_scale(poly_mul(_gram_power(self.form, j), self._delta(j)), c)
            total = poly_add(total, piece)
        return total

    def _delta(self, j: int) -> Poly:
        if self.deltas is not None:
            return self.deltas[j]
        d = self.degree - 2 * j
        ell = {}
        m = self.form.dim
        for idx in _compositions(d, m):
            coeff = Fraction(math.factorial(d))
            ok = True
            for e, v in zip(idx, self.axis):
                if e and not v:
                    ok = False
                    break
                coeff = coeff / math.factorial(e) * (Fraction(v) ** e)
            if ok and coeff:
                ell[idx] = ell.get(idx, Fraction(0)) + coeff
        return {b: c * self.axis_kappa[j] for b, c in ell.items() if c * self.axis_kappa[j]}

    def eval_at(self, x):
        xs = [Fraction(v) for v in x]
        qx = Fraction(0)
        g = self.form.gram
        m = self.form.dim
        for i in range(m):
            for l in range(m):
                if g[i][l]:
                    qx += g[i][l] * xs[i] * xs[l]
        if self.axis is not None:
            ell = sum(a * xi for a, xi in zip(self.axis, xs))
            total = Fraction(0)
            for j, c in enumerate(self.cees):
                total += c * qx ** j * self.axis_kappa[j] * ell ** (self.degree - 2 * j)
            return total
        total = Fraction(0)
        for j, c in enumerate(self.cees):
            total += c * qx ** j * poly_eval(self.deltas[j], xs)
        return total

    def needed_exponents(self):
        if self.deltas is None:
            return ()
        out = set()
        for d in self.deltas:
            out.update(d)
        return tuple(out)

    def class_sum(self, vectors: np.ndarray, n: int, moments: dict | None = None):
        """Exact sum of the polynomial over rows of `vectors`, all of norm n."""
        if vectors.shape[0] == 0:
            return Fraction(0)
        if self.axis is not None:
            return self._axis_sum(vectors, n)
        if moments is None:
            moments = monomial_sums(vectors, self.needed_exponents())
        total = Fraction(0)
        for j, c in enumerate(self.cees):
            inner = Fraction(0)
            for beta, coeff in self.deltas[j].items():
                inner += coeff * moments[beta]
            total += c * Fraction(n) ** j * inner
        return total

    def _axis_sum(self, vectors: np.ndarray, n: int):
        den = math.lcm(*(Fraction(v).denominator for v in self.axis))
        w = np.array([int(Fraction(v) * den) for v in self.axis], dtype=np.int64)
        t = vectors @ w
        tmax = int(np.abs(t).max(initial=1))
        powers = {}
        for j in range(len(self.cees)):
            d = self.degree - 2 * j
            if d not in powers:
                if tmax ** max(d, 1) * t.shape[0] < 2 ** 62:
                    powers[d] = int((t.astype(np.int64) ** d).sum()) if d else t.shape[0]
                else:
                    powers[d] = int(sum(int(v) ** d for v in t))
        total = Fraction(0)
        for j, c in enumerate(self.cees):
            d = self.degree - 2 * j
            total += c * Fraction(n) ** j * self.axis_kappa[j] * Fraction(powers[d], den ** d)
        return total


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def harmonic_project(form: QuadForm, poly: Poly) -> HarmonicElement:
    """Project a homogeneous polynomial onto the harmonic component."""
    m = form.dim
    p = _as_poly(poly, m)
    if not p:
        raise InputError("cannot project the zero polynomial")
    degrees = {sum(b) for b in p}
    if len(degrees) != 1:
        raise InputError("projection needs a homogeneous polynomial")
    k = degrees.pop()
    deltas = [p]
    while deltas[-1] and sum(next(iter(deltas[-1]))) >= 2:
        nxt = laplacian_apply(form, deltas[-1])
        if not nxt:
            break
        deltas.append(nxt)
    cees = _projection_coefficients(m, k, len(deltas) - 1)
    return HarmonicElement(form=form, degree=k, cees=cees, deltas=tuple(deltas))


def directional_harmonic(form: QuadForm, k: int, direction) -> HarmonicElement:
    """Harmonic projection of l(x)^k for the linear form l = <direction, x>.

    The Laplacian chain of a pure power of a linear form stays on powers of
    the same form, so evaluation needs only one-dimensional power sums.
    """
    m = form.dim
    axis = tuple(Fraction(v) for v in direction)
    if len(axis) != m or not any(axis):
        raise InputError("direction must be a nonzero vector of the right dimension")
    if k < 0:
        raise InputError("degree must be nonnegative")
    inv = form.inverse
    lam = Fraction(0)
    for i in range(m):
        for j in range(m):
            if inv[i][j]:
                lam += axis[i] * inv[i][j] * axis[j]
    depth = k // 2
    kappa = [Fraction(1)]
    for j in range(depth):
        d = k - 2 * j
        kappa.append(kappa[-1] * lam * d * (d - 1))
    if k >= 2 and not lam:
        raise InputError("direction is isotropic for the inverse form")
    cees = _projection_coefficients(m, k, depth)
    return HarmonicElement(form=form, degree=k, cees=cees,
                           axis=axis, axis_kappa=tuple(kappa))


@dataclass(frozen=True)
class HarmonicBasis:
    """Basis of the degree-k harmonics of a form."""

    form: QuadForm
    degree: int
    basis: tuple
    dim: int
    monomials: tuple

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def coefficient_vectors(self):
        """Each basis element expanded over `monomials` (can be large)."""
        index = {b: i for i, b in enumerate(self.monomials)}
        out = []
        for el in self.basis:
            row = [Fraction(0)] * len(self.monomials)
            for b, c in el.expand().items():
                row[index[b]] = c
            out.append(row)
        return out


def harmonic_basis(form: QuadForm, k: int) -> HarmonicBasis:
    """Harmonic projections of the monomials x^a with a_m <= 1, |a| = k.

    Independence is a leading-term argument in the last variable (the form
    has a_mm > 0, so a relation would force a polynomial divisible by the
    norm form to have last-variable degree below 2).  The count matches the
    dimension formula, which is asserted.
    """
    m = form.dim
    if k < 0:
        raise InputError("degree must be nonnegative")
    seeds = [b for b in _compositions(k, m) if b[-1] <= 1] if m > 1 else \
        ([(k,)] if k <= 1 else [])
    elements = tuple(harmonic_project(form, {b: Fraction(1)}) for b in sorted(seeds))
    dim = harmonic_dimension(m, k)
    assert len(elements) == dim
    monomials = tuple(sorted(_compositions(k, m)))
    return HarmonicBasis(form=form, degree=k, basis=elements, dim=dim,
                         monomials=monomials)


# ---------------------------------------------------------------------------
# monomial power sums over vector sets


def _moment_parent(beta):
    i = next(idx for idx, e in enumerate(beta) if e)
    t = list(beta)
    t[i] -= 1
    return tuple(t), i


def monomial_sums(vectors: np.ndarray, betas) -> dict:
    """Exact sums sum_x x^beta over the rows of `vectors`, one per exponent.

    Shared lower-degree products are computed once (each monomial is its
    parent times one coordinate), chunked over rows.
    """
    m = vectors.shape[1] if vectors.ndim == 2 else 0
    need = {tuple(int(e) for e in b) for b in betas}
    zero = tuple([0] * m)
    closure = set()
    stack = [b for b in need if b != zero]
    while stack:
        b = stack.pop()
        if b in closure:
            continue
        closure.add(b)
        parent, _ = _moment_parent(b)
        if parent != zero and parent not in closure:
            stack.append(parent)
    order = sorted(closure, key=lambda b: (sum(b), b))
    totals = {b: 0 for b in closure}
    count = int(vectors.shape[0])
    totals[zero] = count
    if count and closure:
        amax = int(np.abs(vectors).max(initial=1))
        maxdeg = max(sum(b) for b in closure)
        big = max(amax, 1) ** maxdeg * count >= 2 ** 62
        chunk = 2048
        for lo in range(0, count, chunk):
            block = vectors[lo:lo + chunk]
            x = block.astype(object).T if big else block.astype(np.int64).T
            vals = {zero: None}
            for b in order:
                parent, i = _moment_parent(b)
                base = x[i] if parent == zero else vals[parent] * x[i]
                vals[b] = base
                totals[b] += int(base.sum())
    out = {zero: count} if zero in need else {}
    for b in need:
        if b != zero:
            out[b] = totals[b]
    return out


def _class_vectors(form: QuadForm, n: int, budget=None) -> np.ndarray:
    return short_vectors(form, n, budget=budget).vectors_norm(int(n))


def _class_moments(form: QuadForm, n: int, betas, budget=None) -> dict:
    key = (form.gram, int(n))
    cached = _MOMENTS.setdefault(key, {})
    missing = [b for b in betas if tuple(b) not in cached]
    if missing:
        vecs = _class_vectors(form, n, budget)
        cached.update(monomial_sums(vecs, missing))
    return cached


# ---------------------------------------------------------------------------
# zonal functions


def zonal_table(m: int, k_max: int, t) -> np.ndarray:
    """Values of the normalized zonal polynomials, rows k = 0..k_max.

    Normalized so the value at t = 1 is 1; for m = 2 this is cos(k arccos t),
    for m >= 3 a stable three-term recurrence on the Gegenbauer family.
    """
    if m < 2:
        raise DimensionTooSmall("zonal functions need dimension >= 2")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((k_max + 1, t.shape[0]), dtype=float)
    out[0] = 1.0
    if k_max == 0:
        return out
    if m == 2:
        theta = np.arccos(np.clip(t, -1.0, 1.0))
        for k in range(1, k_max + 1):
            out[k] = np.cos(k * theta)
        return out
    lam = (m - 2) / 2.0
    out[1] = t
    for k in range(2, k_max + 1):
        out[k] = (2 * (k + lam - 1) * t * out[k - 1] - (k - 1) * out[k - 2]) \
            / (k + 2 * lam - 1)
    return out


@dataclass(frozen=True)
class ZonalFunction:
    """Degree-k harmonic invariant under the stabilizer of the pole."""

    form: QuadForm
    degree: int
    pole: tuple

    def __call__(self, x) -> float:
        form = self.form
        e = np.asarray(self.pole, dtype=float)
        x = np.asarray(x, dtype=float)
        g = np.array(form.as_lists(), dtype=float)
        ne = float(e @ g @ e)
        nx = float(x @ g @ x)
        if ne <= 0 or nx <= 0:
            raise InputError("zonal evaluation needs nonzero points")
        t = float(e @ g @ x) / math.sqrt(ne * nx)
        return float(zonal_table(form.dim, self.degree, [t])[self.degree, 0])


def zonal(form: QuadForm, k: int, e, x) -> float:
    """Value at x of the degree-k zonal function with pole e."""
    return ZonalFunction(form=form, degree=int(k), pole=tuple(e))(x)


# ---------------------------------------------------------------------------
# Weyl sums


def _phi_list(genus: GenusData, phi):
    if isinstance(phi, (HarmonicElement, dict)):
        phis = [phi] * len(genus)
    else:
        phis = list(phi)
        if len(phis) != len(genus):
            raise InputError("need one harmonic per class")
    out = []
    for p, cls in zip(phis, genus.classes):
        if isinstance(p, HarmonicElement):
            if p.form.gram != cls.gram:
                raise InputError("harmonic element attached to a different form")
            out.append(p)
        else:
            out.append(_as_poly(p, cls.dim))
    return out


def _phi_degree(phi) -> int:
    if isinstance(phi, HarmonicElement):
        return phi.degree
    return poly_degree(phi)


def _phi_class_sum(phi, form: QuadForm, n: int, budget=None):
    if isinstance(phi, HarmonicElement):
        if phi.axis is not None:
            vecs = _class_vectors(form, n, budget)
            return phi.class_sum(vecs, n)
        moments = _class_moments(form, n, phi.needed_exponents(), budget)
        return _element_sum_from_moments(phi, moments, n)
    moments = _class_moments(form, n, list(phi), budget)
    total = Fraction(0)
    for beta, c in phi.items():
        total += c * moments[beta]
    return total


def _element_sum_from_moments(el: HarmonicElement, moments: dict, n: int):
    total = Fraction(0)
    for j, c in enumerate(el.cees):
        inner = Fraction(0)
        for beta, coeff in el.deltas[j].items():
            inner += coeff * moments[beta]
        total += c * Fraction(n) ** j * inner
    return total


def _class_orbits(form: QuadForm, n: int, budget=None):
    key = (form.gram, int(n))
    if key not in _ORBITS:
        _ORBITS[key] = orbit_decompose(form, n, budget=budget)
    return _ORBITS[key]


@dataclass(frozen=True)
class WeylSum:
    """Genus-weighted sum of a harmonic polynomial over norm-n points."""

    degree: int
    norm: int
    full: Fraction
    orbit: Fraction
    rescaled: float | None = None


def weyl_sum(genus: GenusData, phi, n: int, budget=None,
             rescale: bool = False) -> WeylSum:
    """Weighted sum over all classes, plus the same total assembled orbitwise.

    The full form sums the polynomial over every lattice point of norm n in
    every class, with the normalized class weights.  The orbit form groups
    each class's points into automorphism orbits and accumulates the
    group-summed value at each representative divided by its stabilizer
    order; the two agree identically and the agreement is asserted.
    """
    n = int(n)
    if n < 1:
        raise InputError("norm must be a positive integer")
    phis = _phi_list(genus, phi)
    degrees = {_phi_degree(p) for p in phis}
    if len(degrees) != 1:
        raise InputError("per-class harmonics must share one degree")
    k = degrees.pop()
    full = Fraction(0)
    orbit = Fraction(0)
    for w, cls, p in zip(genus.weights, genus.classes, phis):
        vecs = _class_vectors(cls, n, budget)
        if vecs.shape[0] == 0:
            continue
        full += w * _phi_class_sum(p, cls, n, budget)
        od = _class_orbits(cls, n, budget)
        cls_total = Fraction(0)
        for i, stab in enumerate(od.stabilizer_orders):
            members = od.orbit_vectors(i)
            if isinstance(p, HarmonicElement):
                member_sum = p.class_sum(members, n)
            else:
                mom = monomial_sums(members, list(p))
                member_sum = sum((c * mom[b] for b, c in p.items()), Fraction(0))
            group_value = stab * member_sum
            cls_total += Fraction(group_value, stab)
        orbit += w * cls_total
    assert full == orbit
    scaled = float(full) / n ** (k / 2) if rescale else None
    return WeylSum(degree=k, norm=n, full=full, orbit=orbit, rescaled=scaled)


# ---------------------------------------------------------------------------
# spectral pair sums


def _pair_histogram(form: QuadForm, n: int, budget=None) -> np.ndarray:
    """Counts of pairings <y, y'>_A = v over all ordered pairs of norm n."""
    key = (form.gram, int(n))
    if key not in _HISTOGRAMS:
        vecs = _class_vectors(form, n, budget).astype(np.int64)
        counts = np.zeros(2 * n + 1, dtype=np.int64)
        if vecs.shape[0]:
            g = np.array(form.as_lists(), dtype=np.int64)
            gv = vecs @ g
            chunk = max(1, (1 << 22) // max(vecs.shape[0], 1))
            for lo in range(0, vecs.shape[0], chunk):
                prods = gv[lo:lo + chunk] @ vecs.T
                counts += np.bincount((prods + n).ravel(), minlength=2 * n + 1)
        _HISTOGRAMS[key] = counts
    return _HISTOGRAMS[key]


def spectral_pair_sum(genus: GenusData, k: int, n: int, budget=None):
    """The degree-k building block of the spectral variance.

    For k = 0 this is the exact rational spread of the class representation
    numbers (weighted second moment minus the squared weighted mean).  For
    k >= 1 it is dim(H_k) times the weighted sum over classes of the zonal
    pair sum sum_{y,y'} P_k(<y,y'>/n), always nonnegative.
    """
    n = int(n)
    k = int(k)
    if n < 1:
        raise InputError("norm must be a positive integer")
    if k < 0:
        raise InputError("degree must be nonnegative")
    m = genus.dim
    if m < 2:
        raise DimensionTooSmall("pair sums need dimension >= 2")
    if k == 0:
        from .enumeration import rep_count
        reps = [Fraction(rep_count(cls, n, budget=budget)) for cls in genus.classes]
        mean = sum(w * r for w, r in zip(genus.weights, reps))
        second = sum(w * r * r for w, r in zip(genus.weights, reps))
        return second - mean * mean
    dk = harmonic_dimension(m, k)
    ts = np.arange(-n, n + 1, dtype=float) / n
    zvals = zonal_table(m, k, ts)[k]
    total = 0.0
    for w, cls in zip(genus.weights, genus.classes):
        hist = _pair_histogram(cls, n, budget)
        total += float(w) * dk * float(hist @ zvals)
    return max(total, 0.0)


# ---------------------------------------------------------------------------
# theta series


@dataclass(frozen=True)
class ThetaSeries:
    """q-expansion with exact rational coefficients indexed by the norm.

    `complete` records whether every index up to `precision` was computed
    (series assembled from sparse data keep it False so consistency checks
    skip unavailable indices instead of treating them as zeros).
    """

    weight: Fraction
    level: int
    degree: int
    precision: int
    coeffs: dict
    complete: bool = True

    def coefficient(self, n: int) -> Fraction:
        n = int(n)
        if n < 0 or n > self.precision:
            raise InputError(f"coefficient index {n} beyond precision {self.precision}")
        if n in self.coeffs:
            return self.coeffs[n]
        if self.complete:
            return Fraction(0)
        raise InputError(f"coefficient {n} not available in a sparse series")

    def available(self, n: int) -> bool:
        return 0 <= n <= self.precision and (self.complete or n in self.coeffs)


def harmonic_theta(form: QuadForm, phi, q_precision: int, budget=None) -> ThetaSeries:
    """Exact coefficients a(n) = sum over norm-n points of the harmonic."""
    q_precision = int(q_precision)
    if q_precision < 1:
        raise InputError("precision must be a positive integer")
    if phi is None:
        phi = {tuple([0] * form.dim): Fraction(1)}
    if not isinstance(phi, HarmonicElement):
        phi = _as_poly(phi, form.dim)
    k = _phi_degree(phi)
    if isinstance(phi, HarmonicElement):
        a0 = phi.eval_at([0] * form.dim)
    else:
        a0 = phi.get(tuple([0] * form.dim), Fraction(0))
    sv = short_vectors(form, q_precision, budget=budget)
    coeffs = {0: a0}
    for n in range(1, q_precision + 1):
        vecs = sv.vectors_norm(n)
        if vecs.shape[0] == 0:
            coeffs[n] = Fraction(0)
            continue
        if isinstance(phi, HarmonicElement):
            coeffs[n] = phi.class_sum(vecs, n)
        else:
            moments = monomial_sums(vecs, list(phi))
            coeffs[n] = sum((c * moments[b] for b, c in phi.items()), Fraction(0))
    weight = Fraction(form.dim, 2) + k
    return ThetaSeries(weight=weight, level=form.level, degree=k,
                       precision=q_precision, coeffs=coeffs, complete=True)


# ---------------------------------------------------------------------------
# Hecke checks


def _divisor_count(n: int) -> int:
    count = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            count *= e + 1
        d += 1
    if n > 1:
        count *= 2
    return count


def _small_primes(bound: int):
    out = []
    for p in range(2, bound + 1):
        if all(p % q for q in out):
            out.append(p)
    return out


@dataclass(frozen=True)
class HeckeReport:
    """Multiplicativity and coefficient-growth audit of a q-series."""

    n0: int
    non_cuspidal: bool
    weight: Fraction
    level: int
    multiplicative_pairs: tuple
    multiplicativity_ok: bool
    ramanujan_checked: tuple
    ramanujan_ok: bool


def hecke_eigen_check(series: ThetaSeries, weight=None, level=None) -> HeckeReport:
    """Check a(p)a(q) = a(n0)a(pq) in the n0-normalized index, plus growth.

    n0 is the first nonzero index >= 1 (even forms have support on even
    norms, so n0 absorbs the stride); a nonzero constant term is reported as
    non-cuspidal.  The growth audit compares normalized coefficients against
    d(n) * n^((weight-1)/2), exactly when the exponent is an integer.
    """
    weight = series.weight if weight is None else Fraction(weight)
    level = series.level if level is None else int(level)
    n0 = 0
    for n in range(1, series.precision + 1):
        if series.available(n) and series.coefficient(n):
            n0 = n
            break
    if not n0:
        raise AllZeroSeries("no nonzero coefficient at any positive index")
    a0 = series.coefficient(n0)
    non_cuspidal = series.available(0) and bool(series.coefficient(0))
    top = series.precision // n0

    def b(j):
        idx = j * n0
        if not series.available(idx):
            return None
        return series.coefficient(idx) / a0

    pairs = []
    ok_all = True
    for p in _small_primes(top):
        for q in _small_primes(top):
            if q <= p or p * q > top or math.gcd(p * q, level) != 1:
                continue
            bp, bq, bpq = b(p), b(q), b(p * q)
            if bp is None or bq is None or bpq is None:
                continue
            ok = bp * bq == bpq
            pairs.append((p, q, ok))
            ok_all = ok_all and ok
    ram = []
    ram_ok = True
    expo = weight - 1
    for j in range(1, top + 1):
        if math.gcd(j, level) != 1:
            continue
        bj = b(j)
        if bj is None or j == 1:
            continue
        lhs = bj * bj
        dj = _divisor_count(j)
        if expo.denominator == 1:
            ok = lhs <= Fraction(dj * dj) * Fraction(j) ** int(expo)
        else:
            ok = float(lhs) <= dj * dj * float(j) ** float(expo) * (1 + 1e-12)
        ram.append((j, ok))
        ram_ok = ram_ok and ok
    return HeckeReport(n0=n0, non_cuspidal=non_cuspidal, weight=weight,
                       level=level, multiplicative_pairs=tuple(pairs),
                       multiplicativity_ok=ok_all, ramanujan_checked=tuple(ram),
                       ramanujan_ok=ram_ok)
