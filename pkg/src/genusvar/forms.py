"""Quadratic form and genus containers.

A form is a positive definite symmetric integer Gram matrix; x^T A x is the
(classically doubled) norm, so even forms are those with all diagonal entries
even.  A genus is a finite list of class representatives with Siegel weights
w_i = (1/|O_i|) / sum_j (1/|O_j|) computed from the integral automorphism
group orders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from . import rational
from .errors import (
    EmptyGenus,
    InconsistentGenus,
    NotIntegral,
    NotPositiveDefinite,
    NotSymmetric,
    ParseError,
)

Gram = tuple[tuple[int, ...], ...]


def _freeze(matrix) -> Gram:
    return tuple(tuple(int(x) for x in row) for row in matrix)


@dataclass(frozen=True)
class QuadForm:
    """Immutable positive definite integral quadratic form."""

    gram: Gram

    @property
    def dim(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return rational.bareiss_det(self.gram)

    @cached_property
    def parity(self) -> str:
        """'even' iff every diagonal entry is even."""
        return "even" if all(self.gram[i][i] % 2 == 0 for i in range(self.dim)) else "odd"

    @cached_property
    def inverse(self):
        """A^{-1} as a Fraction matrix."""
        return rational.fraction_inverse(self.gram)

    @cached_property
    def level(self) -> int:
        """Least D > 0 such that D*A^{-1} is integral with even diagonal."""
        inv = self.inverse
        d = 1
        for row in inv:
            for x in row:
                d = rational.lcm(d, Fraction(x).denominator)
        if any((d * inv[i][i]) % 2 != 0 for i in range(self.dim)):
            d *= 2
        return d

    @cached_property
    def reduced(self) -> tuple[Gram, tuple[tuple[int, ...], ...]]:
        """LLL-reduced Gram G' together with U such that G' = U^T G U."""
        if self.dim == 1:
            return self.gram, ((1,),)
        g, u = rational.lll_reduce_gram([list(r) for r in self.gram])
        return _freeze(g), _freeze(u)

    def norm(self, x) -> int:
        """x^T A x for an integer vector."""
        g = self.gram
        return sum(x[i] * g[i][j] * x[j] for i in range(self.dim) for j in range(self.dim))

    def inner(self, x, y) -> int:
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(self.dim) for j in range(self.dim))

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def __repr__(self):
        return f"QuadForm(dim={self.dim}, det={self.det}, {self.parity})"


def validate_form(matrix) -> QuadForm:
    """Check symmetry, integrality and positive definiteness; freeze."""
    rows = list(matrix)
    m = len(rows)
    if m == 0:
        raise NotPositiveDefinite("empty matrix")
    for row in rows:
        if len(row) != m:
            raise NotSymmetric("matrix is not square")
        for x in row:
            if x != int(x):
                raise NotIntegral(f"non-integer entry {x!r}")
    g = _freeze(rows)
    for i in range(m):
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) != ({j},{i})")
    try:
        rational.ldl(g)
    except ValueError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    return QuadForm(g)


def direct_sum(*forms: QuadForm) -> QuadForm:
    blocks = [f.gram for f in forms]
    m = sum(len(b) for b in blocks)
    out = [[0] * m for _ in range(m)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return QuadForm(_freeze(out))


def identity_form(m: int) -> QuadForm:
    return QuadForm(_freeze(rational.identity_int(m)))


E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


def e8_form() -> QuadForm:
    return QuadForm(E8_GRAM)


@dataclass(frozen=True)
class GenusData:
    """A genus: class representatives, names, |O_i| orders, Siegel weights."""

    classes: tuple[QuadForm, ...]
    names: tuple[str, ...]
    aut_orders: tuple[int, ...]

    @cached_property
    def weights(self) -> tuple[Fraction, ...]:
        inv = [Fraction(1, o) for o in self.aut_orders]
        total = sum(inv)
        return tuple(x / total for x in inv)

    @cached_property
    def mass(self) -> Fraction:
        return sum(Fraction(1, o) for o in self.aut_orders)

    @property
    def dim(self) -> int:
        return self.classes[0].dim

    @property
    def det(self) -> int:
        return self.classes[0].det

    @property
    def parity(self) -> str:
        return self.classes[0].parity

    @property
    def level(self) -> int:
        return self.classes[0].level

    def __len__(self):
        return len(self.classes)

    def class_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError(f"no class named {name!r} in genus") from None


def genus_of_single(form: QuadForm, name: str = "A", aut_order: int | None = None) -> GenusData:
    """Wrap one form as a single-class genus, computing |O| if not given."""
    if aut_order is None:
        from .isometry import aut_order as _aut
        aut_order = _aut(form)
    return GenusData((form,), (name,), (int(aut_order),))


def read_form_entries(path) -> list[dict]:
    """Parse a form file: a JSON array of {name, dim, gram, aut_order} objects.

    gram is row-major with dim^2 integer entries; aut_order is an integer or
    the string "compute".  Returns entries with the gram wrapped as a
    validated QuadForm under the key "form".
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read form file {path}: {exc}") from None
    if not isinstance(raw, list):
        raise ParseError("form file must be a JSON array")
    out = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ParseError(f"entry {i} is not an object")
        try:
            name = str(entry["name"])
            dim = int(entry["dim"])
            flat = entry["gram"]
            aut = entry["aut_order"]
        except KeyError as exc:
            raise ParseError(f"entry {i} missing field {exc}") from None
        if not isinstance(flat, list) or len(flat) != dim * dim:
            raise ParseError(f"entry {i}: gram must have length dim^2 = {dim * dim}")
        rows = [flat[r * dim:(r + 1) * dim] for r in range(dim)]
        if aut != "compute":
            aut = int(aut)
            if aut <= 0:
                raise ParseError(f"entry {i}: aut_order must be positive")
        out.append({"name": name, "form": validate_form(rows), "aut_order": aut})
    return out


def load_form(path, name: str | None = None, compute_aut: bool = False):
    """Pick one form from a form file, by name or the first entry.

    Returns (name, form, aut_order); aut_order is None for a "compute" entry
    unless compute_aut is set.
    """
    entries = read_form_entries(path)
    if not entries:
        raise EmptyGenus(f"{path} contains no forms")
    if name is None:
        entry = entries[0]
    else:
        matches = [e for e in entries if e["name"] == name]
        if not matches:
            raise ParseError(f"no form named {name!r} in {path}")
        entry = matches[0]
    aut = entry["aut_order"]
    if aut == "compute":
        if compute_aut:
            from .isometry import aut_order as _aut
            aut = _aut(entry["form"])
        else:
            aut = None
    return entry["name"], entry["form"], aut


def load_genus(path, verify: bool = False, verify_dim_cap: int = 12) -> GenusData:
    """Read a genus JSON file (same schema as read_form_entries).

    Computed and provided orders are mixed freely; with verify=True, provided
    orders for dims <= verify_dim_cap are recomputed and must match.
    """
    from .isometry import aut_order as _aut

    entries = read_form_entries(path)
    if not entries:
        raise EmptyGenus(f"{path} contains no classes")

    classes, names, orders = [], [], []
    for entry in entries:
        name = entry["name"]
        form = entry["form"]
        aut = entry["aut_order"]
        if aut == "compute":
            aut = _aut(form)
        elif verify and form.dim <= verify_dim_cap:
            recomputed = _aut(form)
            if recomputed != aut:
                raise InconsistentGenus(
                    f"class {name}: provided aut_order {aut} != recomputed {recomputed}")
        classes.append(form)
        names.append(name)
        orders.append(aut)

    ref = classes[0]
    for name, form in zip(names, classes):
        if form.dim != ref.dim:
            raise InconsistentGenus(f"class {name}: dim {form.dim} != {ref.dim}")
        if form.det != ref.det:
            raise InconsistentGenus(f"class {name}: det {form.det} != {ref.det}")
        if form.parity != ref.parity:
            raise InconsistentGenus(f"class {name}: parity {form.parity} != {ref.parity}")
        if form.level != ref.level:
            raise InconsistentGenus(f"class {name}: level {form.level} != {ref.level}")
    return GenusData(tuple(classes), tuple(names), tuple(orders))
