"""Local representation densities and genus-level representation averages.

The local density sigma_p of (A, N) is the stabilized value of

    #{x mod p^k : x^T A x = N mod p^k} / p^{k(m-1)}.

It is computed exactly: the form is split p-adically into 1x1 and 2x2 Jordan
blocks by symmetric congruence over Z_p, each block's value distribution mod
p^k is tabulated, and the distributions are combined by exact cyclic
convolution (big-integer safe).  The archimedean density and the product over
all places reproduce the genus average Sum_i w_i R_i(N), which this module
also computes directly from enumeration so the two routes can be compared.

Also here: representation probabilities under the mass measure, the exact
even-unimodular mass constant (used to validate shipped automorphism orders),
and the sharp-threshold numerics for representation by unimodular genera of
large dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .enumeration import rep_count
from .errors import InputError, NotStabilized, UnsupportedN
from .forms import GenusData, QuadForm

# ---------------------------------------------------------------------------
# small number-theory helpers


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i:: i] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the full extension of the Jacobi symbol."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -k
    # n odd and positive from here: Jacobi with quadratic reciprocity
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def _legendre(t: int, p: int) -> int:
    t %= p
    if t == 0:
        return 0
    r = pow(t, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def squarefree_part(t: int) -> int:
    """Largest squarefree s with t = s * (square), sign preserved."""
    if t == 0:
        raise ValueError("0 has no squarefree part")
    sign = -1 if t < 0 else 1
    t = abs(t)
    s = 1
    d = 2
    while d * d <= t:
        if t % d == 0:
            e = 0
            while t % d == 0:
                t //= d
                e += 1
            if e % 2:
                s *= d
        d += 1 if d == 2 else 2
    return sign * s * t


def fundamental_discriminant(t: int) -> int:
    """Discriminant of Q(sqrt(t)); requires t not a perfect square."""
    s = squarefree_part(t)
    if s == 1:
        raise ValueError("t is a perfect square; the field is Q")
    return s if s % 4 == 1 else 4 * s


def dirichlet_l_one(d0: int) -> float:
    """L(1, chi) for the real odd primitive character chi = (d0|.), d0 < 0.

    Finite character sum: L(1, chi) = -(pi / q^{3/2}) * sum_{a<q} chi(a) a.
    """
    if d0 >= 0:
        raise ValueError("only imaginary discriminants carry an odd character")
    q = -d0
    total = sum(kronecker(d0, a) * a for a in range(1, q))
    val = -(math.pi / q ** 1.5) * total
    assert val > 0.0
    return val


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0 .. B_n, exact (B_1 = -1/2 convention)."""
    b = [Fraction(1)]
    for mm in range(1, n + 1):
        acc = Fraction(0)
        for k in range(mm):
            acc += math.comb(mm + 1, k) * b[k]
        b.append(-acc / (mm + 1))
    return b


# ---------------------------------------------------------------------------
# p-adic Jordan splitting and exact counting mod p^k


def _vp(x: Fraction, p: int):
    if x == 0:
        return math.inf
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _drop(a, kill):
    keep = [i for i in range(len(a)) if i not in kill]
    return [[a[i][j] for j in keep] for i in keep]


def jordan_blocks(form: QuadForm, p: int) -> list[list[list[Fraction]]]:
    """Split the form over Z_p into 1x1 and 2x2 blocks (symmetric congruence).

    The returned blocks B satisfy: the original form is GL(Z_p)-congruent to
    their direct sum, so solution counts mod p^k agree.  Entries are
    p-integral rationals.  2x2 blocks only occur at p = 2.
    """
    cache = form.__dict__.setdefault("_jordan_cache", {})
    if p in cache:
        return cache[p]
    a = [[Fraction(x) for x in row] for row in form.as_lists()]
    blocks: list[list[list[Fraction]]] = []
    while a:
        mm = len(a)
        best = None
        bi = bj = -1
        for i in range(mm):
            for j in range(i, mm):
                if a[i][j]:
                    v = _vp(a[i][j], p)
                    if best is None or v < best:
                        best, bi, bj = v, i, j
        assert best is not None, "positive definite block became zero"
        diag = next((i for i in range(mm)
                     if a[i][i] and _vp(a[i][i], p) == best), None)
        if diag is None and p != 2:
            # push the minimal valuation onto the diagonal; one of the two
            # signs must work because their difference 4*a_ij has valuation
            # exactly `best` when p is odd
            i, j = bi, bj
            for sgn in (1, -1):
                cand = a[i][i] + 2 * sgn * a[i][j] + a[j][j]
                if cand and _vp(cand, p) == best:
                    for u in range(mm):
                        a[i][u] += sgn * a[j][u]
                    for u in range(mm):
                        a[u][i] += sgn * a[u][j]
                    diag = i
                    break
            assert diag is not None
        if diag is not None:
            i = diag
            piv = a[i][i]
            for t in range(mm):
                if t == i or a[t][i] == 0:
                    continue
                c = a[t][i] / piv
                for u in range(mm):
                    a[t][u] -= c * a[i][u]
                for u in range(mm):
                    a[u][t] -= c * a[u][i]
            blocks.append([[piv]])
            a = _drop(a, {i})
        else:
            # p = 2 with the minimal valuation only off-diagonal: the 2x2
            # block is unimodular (times 2^best) and can serve as a pivot
            i, j = bi, bj
            pm = [[a[i][i], a[i][j]], [a[i][j], a[j][j]]]
            det = pm[0][0] * pm[1][1] - pm[0][1] * pm[0][1]
            for t in range(mm):
                if t in (i, j) or (a[t][i] == 0 and a[t][j] == 0):
                    continue
                c1 = (a[t][i] * pm[1][1] - a[t][j] * pm[0][1]) / det
                c2 = (a[t][j] * pm[0][0] - a[t][i] * pm[0][1]) / det
                for u in range(mm):
                    a[t][u] -= c1 * a[i][u] + c2 * a[j][u]
                for u in range(mm):
                    a[u][t] -= c1 * a[u][i] + c2 * a[u][j]
            blocks.append(pm)
            a = _drop(a, {i, j})
    for blk in blocks:
        for row in blk:
            for x in row:
                assert _vp(x, p) >= 0, "Jordan entry not p-integral"
    cache[p] = blocks
    return blocks


def _entry_mod(x: Fraction, q: int) -> int:
    num, den = x.numerator, x.denominator
    return (num % q) * pow(den % q, -1, q) % q


_DIST_CHUNK = 512


def _block_distribution(block, q: int) -> list[int]:
    """Value counts of one Jordan block over (Z/q)^dim, as Python ints."""
    if len(block) == 1:
        c = _entry_mod(block[0][0], q)
        x = np.arange(q, dtype=np.int64)
        vals = (c * x % q) * x % q
        return [int(v) for v in np.bincount(vals, minlength=q)]
    aa = _entry_mod(block[0][0], q)
    bb = _entry_mod(block[0][1], q)
    dd = _entry_mod(block[1][1], q)
    y = np.arange(q, dtype=np.int64)
    ay2 = dd * y % q * y % q
    counts = np.zeros(q, dtype=np.int64)
    for start in range(0, q, _DIST_CHUNK):
        x = np.arange(start, min(start + _DIST_CHUNK, q), dtype=np.int64)
        head = (aa * x % q * x % q)[:, None]
        cross = (2 * bb % q * x % q)[:, None] * y[None, :] % q
        vals = (head + cross + ay2[None, :]) % q
        counts += np.bincount(vals.ravel(), minlength=q)
    return [int(v) for v in counts]


def _cyclic_convolve(a: list[int], b: list[int], q: int) -> list[int]:
    """Exact cyclic convolution via Kronecker packing into big integers."""
    bound = min(sum(a) * max(b), sum(b) * max(a)) + 1
    nbytes = max(1, (bound.bit_length() + 8) // 8)
    pa = b"".join(x.to_bytes(nbytes, "little") for x in a)
    pb = b"".join(x.to_bytes(nbytes, "little") for x in b)
    prod = int.from_bytes(pa, "little") * int.from_bytes(pb, "little")
    raw = prod.to_bytes(2 * q * nbytes, "little")
    out = []
    for i in range(q):
        lo = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little")
        hi = int.from_bytes(raw[(i + q) * nbytes:(i + q + 1) * nbytes],
                            "little")
        out.append(lo + hi)
    return out


# moduli above this would need distribution tables too large to build
_MAX_MODULUS = 1 << 22


def count_mod(form: QuadForm, n: int, p: int, k: int) -> int:
    """Exact #{x mod p^k : x^T A x = n mod p^k}."""
    q = p ** k
    if q > _MAX_MODULUS:
        raise InputError(f"modulus {p}^{k} too large to tabulate")
    dist = None
    for block in jordan_blocks(form, p):
        d = _block_distribution(block, q)
        dist = d if dist is None else _cyclic_convolve(dist, d, q)
    return dist[n % q]


def brute_count_mod(form: QuadForm, n: int, p: int, k: int) -> int:
    """Plain brute force over (Z/p^k)^m; exponential, for cross-checks."""
    q = p ** k
    m = form.dim
    total = q ** m
    g = np.array(form.as_lists(), dtype=np.int64)
    target = n % q
    count = 0
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        x = np.empty((idx.shape[0], m), dtype=np.int64)
        rem = idx
        for j in range(m):
            x[:, j] = rem % q
            rem = rem // q
        vals = np.einsum("ij,jk,ik->i", x, g, x) % q
        count += int((vals == target).sum())
    return count


# ---------------------------------------------------------------------------
# local densities


@dataclass(frozen=True)
class LocalDensity:
    p: int
    value: Fraction
    stabilized_at: int


def default_k_max(p: int) -> int:
    return 12 if p == 2 else 6


def local_density(form: QuadForm, n: int, p: int, k_max: int | None = None,
                  cross_check: bool = True) -> LocalDensity:
    """Stabilized density of solutions of x^T A x = n over Z_p.

    Densities delta_k = count(p^k) / p^{k(m-1)} are scanned upward; the
    reported value is the first delta_k that repeats (with one extra
    confirming exponent when the cap allows).  Counts at tiny moduli are
    cross-checked against plain brute force unless disabled.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if n < 1:
        raise UnsupportedN(f"target {n} must be a positive integer")
    if k_max is None:
        k_max = default_k_max(p)
    if k_max < 2:
        raise InputError("k_max must be at least 2")
    m = form.dim
    while p ** k_max > _MAX_MODULUS and k_max > 2:
        k_max -= 1

    deltas: list[Fraction] = []

    def delta(k: int) -> Fraction:
        while len(deltas) < k:
            kk = len(deltas) + 1
            cnt = count_mod(form, n, p, kk)
            if cross_check and p ** (kk * m) <= 300_000:
                assert cnt == brute_count_mod(form, n, p, kk)
            deltas.append(Fraction(cnt, p ** (kk * (m - 1))))
        return deltas[k - 1]

    for k0 in range(1, k_max):
        if delta(k0) != delta(k0 + 1):
            continue
        if k0 + 2 <= k_max and delta(k0) != delta(k0 + 2):
            continue
        return LocalDensity(p=p, value=delta(k0), stabilized_at=k0)
    raise NotStabilized(
        f"density of ({n}, p={p}) still moving at k_max={k_max}",
        k_max=k_max, last_values=(delta(k_max - 1), delta(k_max)))


def sigma_good(m: int, det: int, n: int, p: int) -> Fraction:
    """Closed-form local density at a prime with p coprime to 2*det*n."""
    assert p % 2 == 1 and det % p != 0 and n % p != 0
    if m % 2 == 1:
        e = (m - 1) // 2
        t = (-1) ** e * n * det
        return Fraction(1) + Fraction(_legendre(t, p), p ** e)
    e = m // 2
    t = (-1) ** e * det
    return Fraction(1) - Fraction(_legendre(t, p), p ** e)


def archimedean_density(form: QuadForm, n: int) -> float:
    """Real-place density: pi^{m/2}/Gamma(m/2) * det^{-1/2} * n^{(m-2)/2}."""
    if not isinstance(n, int) or n < 1:
        raise UnsupportedN(f"target {n!r} must be a positive integer")
    m = form.dim
    return (math.pi ** (m / 2) / math.gamma(m / 2)
            / math.sqrt(form.det) * float(n) ** ((m - 2) / 2))


# ---------------------------------------------------------------------------
# genus averages


@dataclass(frozen=True)
class SiegelReport:
    n: int
    method: str
    enumerated: Fraction | None
    local: float | None
    tail_bound: float
    rel_gap: float | None
    densities: tuple[LocalDensity, ...]


def _local_product(genus: GenusData, n: int, prime_cap: int) -> tuple[float, float, tuple[LocalDensity, ...]]:
    rep = genus.classes[0]
    m = genus.dim
    det = genus.det
    if m < 3:
        # the good-prime product is only conditionally convergent for binary
        # forms, so the truncated-tail bound below does not apply
        raise InputError("the local product needs dimension at least 3; "
                         "use method='enumerate' for binary genera")
    bad = sorted({p for p in primes_upto(max(2 * det * n, 2))
                  if (2 * det * n) % p == 0})
    densities = tuple(local_density(rep, n, p) for p in bad)
    finite = Fraction(1)
    for d in densities:
        finite *= d.value

    if m == 3:
        # tail over good primes, exactly:
        #   prod (1 + chi(p)/p) = [zeta(2) L(1,chi)^{-1}]^{-1} corrected at
        # the bad primes, chi the quadratic character of Q(sqrt(-n*det))
        t = -n * det
        sq = squarefree_part(t)
        if sq == 1:
            raise InputError("degenerate character (square discriminant)")
        d0 = fundamental_discriminant(t)
        tail = 6.0 / math.pi ** 2 * dirichlet_l_one(d0)
        for p in bad:
            tail /= 1.0 - 1.0 / p ** 2
            tail *= 1.0 - kronecker(d0, p) / p
        tail_bound = abs(tail) * 1e-12  # exact identity, float rounding only
    else:
        e = (m - 1) // 2 if m % 2 == 1 else m // 2
        tail = 1.0
        for p in primes_upto(prime_cap):
            if p in bad or p == 2:
                continue
            tail *= float(sigma_good(m, det, n, p))
        log_rem = 2.0 * prime_cap ** (1 - e) / (e - 1)
        tail_bound = abs(tail) * (math.exp(log_rem) - 1.0)

    value = archimedean_density(rep, n) * float(finite) * tail
    return value, tail_bound, densities


def siegel_average(genus: GenusData, n: int, method: str = "both",
                   prime_cap: int = 10_000, budget=None) -> SiegelReport:
    """Genus average of representation numbers, by both available routes.

    "enumerate" sums w_i R_i(n) exactly; "local" multiplies the archimedean
    density by every p-adic density (explicit at primes dividing 2*det*n,
    closed-form for the rest); "both" runs both and reports the relative gap.
    """
    if method not in ("enumerate", "local", "both"):
        raise InputError(f"unknown method {method!r}")
    enumerated = None
    local = None
    tail_bound = 0.0
    densities: tuple[LocalDensity, ...] = ()
    if method in ("enumerate", "both"):
        enumerated = Fraction(0)
        for w, cls in zip(genus.weights, genus.classes):
            enumerated += w * rep_count(cls, n, budget=budget)
    if method in ("local", "both"):
        local, tail_bound, densities = _local_product(genus, n, prime_cap)
    rel_gap = None
    if enumerated is not None and local is not None:
        e = float(enumerated)
        rel_gap = 0.0 if e == local == 0.0 else abs(e - local) / max(abs(e), abs(local))
    return SiegelReport(n=n, method=method, enumerated=enumerated,
                        local=local, tail_bound=tail_bound, rel_gap=rel_gap,
                        densities=densities)


def mass_probability(genus: GenusData, n: int, budget=None) -> Fraction:
    """Mass of the classes representing n: sum of w_i with R_i(n) > 0."""
    total = Fraction(0)
    for w, cls in zip(genus.weights, genus.classes):
        if rep_count(cls, n, budget=budget) > 0:
            total += w
    return total


def even_unimodular_mass(m: int) -> Fraction:
    """Exact mass sum_i 1/|O_i| of the even unimodular genus in dimension m."""
    if m % 8 != 0 or m < 8:
        raise InputError("even unimodular forms need dimension 0 mod 8")
    half = m // 2
    bern = bernoulli_numbers(2 * half - 2)
    mass = abs(bern[half]) / m
    for j in range(1, half):
        mass *= abs(bern[2 * j]) / (4 * j)
    return mass


# ---------------------------------------------------------------------------
# sharp-threshold numerics for large even dimension


@dataclass(frozen=True)
class CutoffReport:
    m: int
    t: float
    lower_threshold: dict[str, float]
    upper_threshold: dict[str, float]
    constant: int
    ratio_main_term: float
    ratio_deviation: float
    cutoff_n: int
    main_term_at_cutoff: float


def siegel_main_term(m: int, n: int) -> float:
    """Leading term m n^{m/2-1} pi^{m/2} / Gamma(m/2+1) of the genus average
    for unimodular forms of large dimension (log-gamma arithmetic)."""
    log_val = (math.log(m) + (m / 2 - 1) * math.log(n)
               + (m / 2) * math.log(math.pi) - math.lgamma(m / 2 + 1))
    return math.exp(log_val)


def cutoff_thresholds(m: int, t: float = 1.0) -> CutoffReport:
    """Threshold window of the representation cutoff near N = m/(2 pi e).

    Below lower_threshold the mass probability of representing the target is
    at most 5113^-t; above upper_threshold it is at least 1 - 5113^-t.
    The "odd" entries apply to odd targets q of odd unimodular genera, the
    "even" entries to even targets 2q of even unimodular genera.
    """
    if m < 4:
        raise InputError("thresholds need dimension at least 4")
    if m % 2 != 0:
        raise InputError("thresholds are stated for even dimension")
    tpe = 2 * math.pi * math.e
    logm = math.log(m)
    lower = {
        "odd": m / tpe + 0.5 / tpe * logm - t - 1,
        "even": m / tpe + 1.0 / tpe * logm - t - 1,
    }
    upper = {
        "odd": m / tpe + 3.2 / tpe * logm + t,
        "even": m / tpe + 5.2 / tpe * logm + t,
    }
    constant = math.floor(math.exp(math.pi * math.e))
    ratio = math.exp((m / 2 - 1) * math.log1p(2 * tpe / m))
    deviation = abs(ratio / math.exp(tpe) - 1.0)
    cutoff_n = math.floor(m / tpe + logm / tpe - 1)
    return CutoffReport(
        m=m, t=t, lower_threshold=lower, upper_threshold=upper,
        constant=constant, ratio_main_term=ratio, ratio_deviation=deviation,
        cutoff_n=cutoff_n, main_term_at_cutoff=siegel_main_term(m, cutoff_n))
