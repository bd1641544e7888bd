#!/usr/bin/env python3
"""Build the shipped lattice datasets in src/genusvar/data/.

Even unimodular lattices in dimensions 16 and 24 are assembled from root
lattices and glue codes: a self-dual isotropic subgroup of the discriminant
group of the root-lattice block sum.  Every assembled lattice is verified
structurally (even, determinant 1, root count 24h for the dimension-24 list)
and the automorphism orders are validated against the exact mass constant
before anything is written, so a wrong glue word or group factor cannot
survive to the output files.

Automorphism orders are |W| * g: the product of the component reflection
group orders times the index g of the reflection group, computed here as the
order of the stabilizer of the glue code inside the diagram symmetry group
(graph flips of each component plus permutations of equal components).  The
three cases whose diagram groups are too large to enumerate (the two Golay
glues and the rootless lattice) use the classical sporadic group orders,
which the final mass identity then confirms.
"""

from __future__ import annotations

import itertools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from genusvar import rational
from genusvar.enumeration import short_vectors
from genusvar.forms import QuadForm, direct_sum, e8_form, identity_form, validate_form
from genusvar.mass import even_unimodular_mass

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "genusvar" / "data"

FACT = [1]
for _i in range(1, 30):
    FACT.append(FACT[-1] * _i)


# ---------------------------------------------------------------------------
# root-system components


class Component:
    """One irreducible root-lattice factor with its discriminant labels.

    Labels: A_n uses 0..n (the cyclic discriminant group); D_n uses
    0, 1, 2, 3 for 0, v, s, c; E6 uses 0, 1, 2; E7 uses 0, 1; E8 only 0.
    """

    def __init__(self, kind: str, n: int):
        self.kind = kind
        self.n = n
        self.gram = _cartan(kind, n)
        self.inv = rational.fraction_inverse(self.gram)
        if kind == "A":
            self.h = n + 1
            self.weyl = FACT[n + 1]
            self.det = n + 1
            self.labels = n + 1
            self.qtab = [Fraction(j * (n + 1 - j), n + 1) for j in range(n + 1)]
        elif kind == "D":
            self.h = 2 * n - 2
            self.weyl = 2 ** (n - 1) * FACT[n]
            self.det = 4
            self.labels = 4
            self.qtab = [Fraction(0), Fraction(1), Fraction(n, 4), Fraction(n, 4)]
        elif kind == "E" and n == 6:
            self.h, self.weyl, self.det, self.labels = 12, 51840, 3, 3
            self.qtab = [Fraction(0), Fraction(4, 3), Fraction(4, 3)]
        elif kind == "E" and n == 7:
            self.h, self.weyl, self.det, self.labels = 18, 2903040, 2, 2
            self.qtab = [Fraction(0), Fraction(3, 2)]
        elif kind == "E" and n == 8:
            self.h, self.weyl, self.det, self.labels = 30, 696729600, 1, 1
            self.qtab = [Fraction(0)]
        else:
            raise ValueError(f"unknown component {kind}{n}")
        self._check_layout()

    def _check_layout(self):
        """The label coefficient vectors must have the advertised norms."""
        for lab in range(self.labels):
            vec = self.coeff(lab)
            norm = sum(vec[i] * self.gram[i][j] * vec[j]
                       for i in range(self.n) for j in range(self.n))
            want = self.qtab[lab]
            assert (norm - want) % 2 == 0, (self.kind, self.n, lab, norm, want)

    def coeff(self, label: int) -> tuple[Fraction, ...]:
        """Reduced (mod 1) coefficient row of the label's glue vector."""
        n = self.n
        if label == 0:
            return tuple(Fraction(0) for _ in range(n))
        if self.kind == "A":
            row = self.inv[label - 1]
        elif self.kind == "D":
            row = self.inv[{1: 0, 2: n - 1, 3: n - 2}[label]]
        elif self.kind == "E" and self.n == 6:
            base = self._fractional_row()
            row = base if label == 1 else [2 * x for x in base]
        elif self.kind == "E" and self.n == 7:
            row = self._fractional_row()
        else:
            raise ValueError("E8 has no nonzero labels")
        return tuple(x % 1 for x in row)

    def _fractional_row(self):
        for row in self.inv:
            if any(x.denominator > 1 for x in row):
                return row
        raise AssertionError("no glue class found")

    def add(self, a: int, b: int) -> int:
        if self.kind == "A":
            return (a + b) % (self.n + 1)
        if self.kind == "D":
            if self.n % 2 == 0:
                return a ^ b
            to4 = {0: 0, 1: 2, 2: 1, 3: 3}
            from4 = {0: 0, 2: 1, 1: 2, 3: 3}
            return from4[(to4[a] + to4[b]) % 4]
        if self.kind == "E" and self.n == 6:
            return (a + b) % 3
        if self.kind == "E" and self.n == 7:
            return (a + b) % 2
        return 0

    def flips(self) -> list[dict]:
        """Label maps of the component's diagram symmetries (generators)."""
        if self.kind == "A" and self.n >= 2:
            return [{j: (self.n + 1 - j) % (self.n + 1) for j in range(self.n + 1)}]
        if self.kind == "D" and self.n == 4:
            return [{0: 0, 1: 1, 2: 3, 3: 2}, {0: 0, 1: 2, 2: 3, 3: 1}]
        if self.kind == "D":
            return [{0: 0, 1: 1, 2: 3, 3: 2}]
        if self.kind == "E" and self.n == 6:
            return [{0: 0, 1: 2, 2: 1}]
        return []

    def flip_group_order(self) -> int:
        if self.kind == "A":
            return 2 if self.n >= 2 else 1
        if self.kind == "D":
            return 6 if self.n == 4 else 2
        return 2 if (self.kind, self.n) == ("E", 6) else 1


def _cartan(kind: str, n: int):
    """Gram rows: chain 0..k plus, for D/E, extra nodes off the chain."""
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2

    def edge(i, j):
        g[i][j] = g[j][i] = -1

    if kind == "A":
        for i in range(n - 1):
            edge(i, i + 1)
    elif kind == "D":
        for i in range(n - 3):
            edge(i, i + 1)
        edge(n - 3, n - 2)
        edge(n - 3, n - 1)
    elif kind == "E":
        for i in range(n - 2):
            edge(i, i + 1)
        edge(2, n - 1)
    return g


# ---------------------------------------------------------------------------
# glue codes


def close_words(comps: list[Component], gens: list[tuple]) -> frozenset:
    zero = tuple(0 for _ in comps)
    seen = {zero}
    frontier = [zero]
    while frontier:
        w = frontier.pop()
        for gen in gens:
            img = tuple(c.add(a, b) for c, a, b in zip(comps, w, gen))
            if img not in seen:
                seen.add(img)
                frontier.append(img)
    return frozenset(seen)


def word_norm(comps, word) -> Fraction:
    return sum((c.qtab[l] for c, l in zip(comps, word)), Fraction(0))


def _is_even(x: Fraction) -> bool:
    return x.denominator == 1 and x.numerator % 2 == 0


def _glue_ok(comps, w) -> bool:
    """Even minimal coset norm, and at least 4 so no roots are added.

    word_norm is exactly the least norm in the coset because the minimum
    splits over the components and each label norm is the least in its class.
    """
    q = word_norm(comps, w)
    if not _is_even(q):
        return False
    return q == 0 or q >= 4


def search_code(comps: list[Component], target: int) -> frozenset:
    """Find a self-dual isotropic glue code by canonical DFS.

    Candidates are discriminant elements with even coset norm at least 4; a
    generator is added only if it is the lexicographically least new element
    it brings in, so each subgroup is visited once.
    """
    sizes = [c.labels for c in comps]
    if _prod(sizes) > 200000:
        raise RuntimeError("discriminant group too large to search")
    elements = [w for w in itertools.product(*[range(s) for s in sizes])
                if _glue_ok(comps, w)]
    elements.sort()

    def pairs_ok(x, y):
        s = tuple(c.add(a, b) for c, a, b in zip(comps, x, y))
        b2 = word_norm(comps, s) - word_norm(comps, x) - word_norm(comps, y)
        return b2 % 2 == 0

    hits: list[frozenset] = []

    def dfs(code: frozenset, gens: list, start: int):
        if hits:
            return
        if len(code) == target:
            hits.append(code)
            return
        for idx in range(start, len(elements)):
            g = elements[idx]
            if g in code:
                continue
            if not all(pairs_ok(g, h) for h in gens):
                continue
            new = close_words(comps, gens + [g])
            if len(new) > target or target % len(new) != 0:
                continue
            fresh = sorted(new - code)
            if fresh[0] != g:
                continue
            if not all(_glue_ok(comps, w) for w in fresh):
                continue
            dfs(new, gens + [g], idx + 1)
            if hits:
                return

    dfs(frozenset({tuple(0 for _ in comps)}), [], 0)
    if not hits:
        raise RuntimeError("no self-dual isotropic code found")
    return hits[0]


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


# ---------------------------------------------------------------------------
# lattice assembly


def assemble(comps: list[Component], gen_words: list[tuple]) -> QuadForm:
    """Integral Gram of the root-block lattice extended by the glue words."""
    dims = [c.n for c in comps]
    m = sum(dims)
    gram = [[0] * m for _ in range(m)]
    off = 0
    for c in comps:
        for i in range(c.n):
            for j in range(c.n):
                gram[off + i][off + j] = c.gram[i][j]
        off += c.n

    rows: list[list[Fraction]] = [[Fraction(int(i == j)) for j in range(m)]
                                  for i in range(m)]
    for word in gen_words:
        vec: list[Fraction] = []
        for c, lab in zip(comps, word):
            vec.extend(c.coeff(lab))
        rows.append(vec)

    den = 1
    for row in rows:
        for x in row:
            den = rational.lcm(den, x.denominator)
    int_rows = [[int(x * den) for x in row] for row in rows]
    basis = rational.hnf(int_rows)
    assert len(basis) == m, "glue rows did not span a rank-m lattice"

    out = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        bi = [Fraction(x, den) for x in basis[i]]
        gb = [sum(bi[k] * gram[k][j] for k in range(m)) for j in range(m)]
        for j in range(m):
            bj = [Fraction(x, den) for x in basis[j]]
            out[i][j] = sum(gb[k] * bj[k] for k in range(m))
    for i in range(m):
        for j in range(m):
            assert out[i][j].denominator == 1, "glued Gram is not integral"
    reduced, _ = rational.lll_reduce_gram([[int(x) for x in row] for row in out])
    return validate_form(reduced)


# ---------------------------------------------------------------------------
# diagram stabilizer


def diagram_group_order(comps: list[Component]) -> int:
    order = 1
    for c in comps:
        order *= c.flip_group_order()
    by_type: dict = {}
    for c in comps:
        by_type.setdefault((c.kind, c.n), 0)
        by_type[(c.kind, c.n)] += 1
    for count in by_type.values():
        order *= FACT[count]
    return order


def diagram_generators(comps: list[Component]):
    """Generators acting on label words: (slot flips, equal-slot swaps)."""
    gens = []
    for i, c in enumerate(comps):
        for fl in c.flips():
            gens.append(("flip", i, fl))
    for i in range(len(comps) - 1):
        if (comps[i].kind, comps[i].n) == (comps[i + 1].kind, comps[i + 1].n):
            gens.append(("swap", i, i + 1))
    return gens


def apply_gen(gen, word: tuple) -> tuple:
    kind = gen[0]
    w = list(word)
    if kind == "flip":
        _, i, fl = gen
        w[i] = fl[w[i]]
    else:
        _, i, j = gen
        w[i], w[j] = w[j], w[i]
    return tuple(w)


def stabilizer_index_g(comps: list[Component], code: frozenset,
                       cap: int = 3 * 10 ** 6) -> int:
    """g = |diagram group| / |orbit of the code| by breadth-first search."""
    total = diagram_group_order(comps)
    gens = diagram_generators(comps)
    seed = frozenset(code)
    seen = {seed}
    frontier = [seed]
    while frontier:
        cur = frontier.pop()
        for gen in gens:
            img = frozenset(apply_gen(gen, w) for w in cur)
            if img not in seen:
                if len(seen) >= cap:
                    raise RuntimeError("code orbit exceeded the search cap")
                seen.add(img)
                frontier.append(img)
    orbit = len(seen)
    assert total % orbit == 0, (total, orbit)
    return total // orbit


# ---------------------------------------------------------------------------
# special codes


def _cyclic_extended_rows(n: int, gcoeffs: list[int], p: int,
                          ext_sign: int) -> list[list[int]]:
    """Generator rows of a cyclic code of length n extended by a sum check."""
    k = n - (len(gcoeffs) - 1)
    rows = []
    for i in range(k):
        row = [0] * n
        for d, c in enumerate(gcoeffs):
            row[i + d] = c % p
        row.append((ext_sign * sum(row)) % p)
        rows.append(row)
    return rows


def _weight_distribution(rows: list[list[int]], p: int) -> dict[int, int]:
    n = len(rows[0])
    dist: dict[int, int] = {}
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        word = [0] * n
        for c, row in zip(coeffs, rows):
            if c:
                word = [(w + c * r) % p for w, r in zip(word, row)]
        w = sum(1 for x in word if x)
        dist[w] = dist.get(w, 0) + 1
    return dist


def binary_golay_rows() -> list[list[int]]:
    """The extended binary self-dual [24,12,8] code, built from the length-23
    cyclic code with generator 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11 and an
    overall parity bit; the weight distribution is checked exactly."""
    g = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]
    rows = _cyclic_extended_rows(23, g, 2, 1)
    dist = _weight_distribution(rows, 2)
    assert dist == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}, dist
    return rows


def ternary_golay_rows() -> list[list[int]]:
    """The extended ternary self-dual [12,6,6] code, built from the length-11
    cyclic code with generator 2 + x^2 + 2x^3 + x^4 + x^5 and a negated sum
    check digit; the weight distribution is checked exactly."""
    g = [2, 0, 1, 2, 1, 1]
    rows = _cyclic_extended_rows(11, g, 3, -1)
    dist = _weight_distribution(rows, 3)
    assert dist == {0: 1, 6: 264, 9: 440, 12: 24}, dist
    return rows


def hexacode_generator_words() -> list[tuple]:
    """Additive generators of the [6,3] self-dual code over the Klein labels.

    Words are (a, b, c, f(1), f(w), f(w^2)) for f(x) = a x^2 + b x + c over
    the four-element field, carried on labels 0, 1, 2, 3 = 0, 1, w, w^2.
    The code is linear over the field, so six generators span it additively.
    """
    mul = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]

    def f_eval(a, b, c, x):
        return mul[a][mul[x][x]] ^ mul[b][x] ^ c

    gens = []
    for a, b, c in [(1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 2, 0),
                    (0, 0, 1), (0, 0, 2)]:
        gens.append((a, b, c, f_eval(a, b, c, 1), f_eval(a, b, c, 2),
                     f_eval(a, b, c, 3)))
    return gens


# ---------------------------------------------------------------------------
# the dimension-24 table

M24_ORDER = 244823040
M12_ORDER = 95040
CO0_ORDER = 2 ** 22 * 3 ** 9 * 5 ** 4 * 7 ** 2 * 11 * 13 * 23

NIEMEIER_TABLE = [
    ("D24", [("D", 24)], [(2,)], None),
    ("D16E8", [("D", 16), ("E", 8)], [(2, 0)], None),
    ("E8^3", [("E", 8)] * 3, [], None),
    ("A24", [("A", 24)], [(5,)], None),
    ("D12^2", [("D", 12)] * 2, [(2, 1), (1, 2)], None),
    ("A17E7", [("A", 17), ("E", 7)], [(3, 1)], None),
    ("D10E7^2", [("D", 10), ("E", 7), ("E", 7)], [(2, 1, 0), (3, 0, 1)], None),
    ("A15D9", [("A", 15), ("D", 9)], [(2, 2)], None),
    ("D8^3", [("D", 8)] * 3, [(2, 1, 1), (1, 2, 1), (1, 1, 2)], None),
    ("A12^2", [("A", 12)] * 2, [(1, 5)], None),
    ("A11D7E6", [("A", 11), ("D", 7), ("E", 6)], [(1, 2, 1)], None),
    ("E6^4", [("E", 6)] * 4, [(1, 1, 1, 0), (0, 1, 2, 1)], None),
    ("A9^2D6", [("A", 9), ("A", 9), ("D", 6)], [(2, 4, 0), (5, 0, 2), (0, 5, 3)], None),
    ("D6^4", [("D", 6)] * 4, "search", None),
    ("A8^3", [("A", 8)] * 3, [(1, 1, 4), (4, 1, 1)], None),
    ("A7^2D5^2", [("A", 7), ("A", 7), ("D", 5), ("D", 5)],
     [(1, 1, 2, 1), (7, 1, 1, 2)], None),
    ("A6^4", [("A", 6)] * 4, "search", None),
    ("A5^4D4", [("A", 5)] * 4 + [("D", 4)], "search", None),
    ("D4^6", [("D", 4)] * 6, hexacode_generator_words(), None),
    ("A4^6", [("A", 4)] * 6, "search", None),
    ("A3^8", [("A", 3)] * 8, "search", None),
    ("A2^12", [("A", 2)] * 12, "golay3", M12_ORDER * 2),
    ("A1^24", [("A", 1)] * 24, "golay2", M24_ORDER),
]


def build_niemeier_entry(name, comp_spec, glue, g_override):
    comps = [Component(k, n) for k, n in comp_spec]
    dets = _prod(c.det for c in comps)
    target = math.isqrt(dets)
    assert target * target == dets, name

    if glue == "golay2":
        gen_words = [tuple(r) for r in binary_golay_rows()]
    elif glue == "golay3":
        gen_words = [tuple(r) for r in ternary_golay_rows()]
    elif glue == "search":
        code = search_code(comps, target)
        gen_words = _minimal_generators(comps, code, target)
    else:
        gen_words = [tuple(w) for w in glue]

    code = close_words(comps, gen_words)
    assert len(code) == target, (name, len(code), target)
    for w in code:
        assert _is_even(word_norm(comps, w)), (name, w)

    form = assemble(comps, gen_words)
    assert form.dim == 24 and form.det == 1 and form.parity == "even", name
    h = comps[0].h
    assert all(c.h == h for c in comps), name
    roots = short_vectors(form, 2).count_norm(2)
    assert roots == 24 * h, (name, roots, 24 * h)

    weyl = _prod(c.weyl for c in comps)
    if g_override is not None:
        g = g_override
    else:
        g = stabilizer_index_g(comps, code)
    return form, weyl * g, roots


def _minimal_generators(comps, code, target) -> list[tuple]:
    """Greedy generating subset of a found code."""
    gens: list[tuple] = []
    have = close_words(comps, gens)
    for w in sorted(code):
        if w not in have:
            gens.append(w)
            have = close_words(comps, gens)
            if len(have) == target:
                break
    return gens


# ---------------------------------------------------------------------------
# the rootless dimension-24 lattice


def build_rootless() -> QuadForm:
    """Index-2 neighbor of the binary-Golay lattice with no norm-2 vectors."""
    rows22 = [[2 * int(i == j) for j in range(24)] for i in range(24)]
    grows = [r[:] for r in binary_golay_rows()]
    base = rational.hnf(rows22 + grows)          # x-rows of the even lattice
    assert len(base) == 24

    xu = [-3] + [1] * 23
    pair = [sum(base[i][k] * xu[k] for k in range(24)) // 2 for i in range(24)]
    assert all((sum(base[i][k] * xu[k] for k in range(24))) % 2 == 0 for i in range(24))
    parity = [p % 2 for p in pair]
    assert any(parity), "neighbor vector pairs evenly with everything"
    piv = parity.index(1)

    sub_rows = []
    for i in range(24):
        if i == piv:
            sub_rows.append([2 * x for x in base[i]])
        elif parity[i]:
            sub_rows.append([a - b for a, b in zip(base[i], base[piv])])
        else:
            sub_rows.append(base[i][:])
    doubled = [[2 * x for x in row] for row in sub_rows] + [xu]
    basis = rational.hnf(doubled)
    assert len(basis) == 24

    gram = [[0] * 24 for _ in range(24)]
    for i in range(24):
        for j in range(24):
            s = sum(basis[i][k] * basis[j][k] for k in range(24))
            assert s % 8 == 0
            gram[i][j] = s // 8
    reduced, _ = rational.lll_reduce_gram(gram)
    form = validate_form(reduced)
    assert form.det == 1 and form.parity == "even"
    reps = short_vectors(form, 4)
    assert reps.count_norm(2) == 0, "neighbor still has roots"
    assert reps.count_norm(4) == 196560
    return form


# ---------------------------------------------------------------------------
# writers


def entry(name: str, form: QuadForm, aut) -> dict:
    flat = [x for row in form.gram for x in row]
    return {"name": name, "dim": form.dim, "gram": flat, "aut_order": aut}


def build_dim16():
    e8e8 = direct_sum(e8_form(), e8_form())
    aut_e8e8 = 2 * 696729600 ** 2

    comps = [Component("D", 16)]
    code = close_words(comps, [(2,)])
    form = assemble(comps, [(2,)])
    assert form.det == 1 and form.parity == "even" and form.dim == 16
    assert short_vectors(form, 2).count_norm(2) == 480
    g = stabilizer_index_g(comps, code)
    aut_d16 = 2 ** 15 * FACT[16] * g

    identity = Fraction(1, aut_e8e8) + Fraction(1, aut_d16)
    assert identity == even_unimodular_mass(16), "dimension-16 mass identity failed"
    return [("E8E8", e8e8, aut_e8e8), ("D16plus", form, aut_d16)]


def build_unimodular():
    out = []
    for m in range(1, 10):
        out.append((f"I{m}", identity_form(m), 2 ** m * FACT[m]))
    out.append(("E8", e8_form(), 696729600))
    out.append(("E8I1", direct_sum(e8_form(), identity_form(1)), 2 * 696729600))
    return out


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)

    assert Fraction(1, 696729600) == even_unimodular_mass(8)

    print("building dimension-24 list ...")
    niemeier = []
    mass_sum = Fraction(0)
    for name, comp_spec, glue, g_override in NIEMEIER_TABLE:
        form, aut, roots = build_niemeier_entry(name, comp_spec, glue, g_override)
        print(f"  {name:10s} roots {roots:5d} aut {aut}")
        niemeier.append((name, form, aut))
        mass_sum += Fraction(1, aut)

    print("building rootless lattice ...")
    rootless = build_rootless()
    niemeier.append(("Leech", rootless, CO0_ORDER))
    mass_sum += Fraction(1, CO0_ORDER)

    want = even_unimodular_mass(24)
    assert mass_sum == want, f"mass identity failed: {mass_sum} != {want}"
    print("dimension-24 mass identity holds:", want)

    dim16 = build_dim16()
    print("dimension-16 mass identity holds")

    files = {
        "unimodular.json": build_unimodular(),
        "dim9.json": [("I9", identity_form(9), 2 ** 9 * FACT[9]),
                      ("E8I1", direct_sum(e8_form(), identity_form(1)),
                       2 * 696729600)],
        "e8.json": [("E8", e8_form(), 696729600)],
        "dim16.json": dim16,
        "niemeier24.json": niemeier,
    }
    for fname, entries in files.items():
        path = DATA_DIR / fname
        payload = [entry(n, f, a) for n, f, a in entries]
        path.write_text(json.dumps(payload) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
