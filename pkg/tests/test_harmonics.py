"""Harmonic polynomials, zonal functions, Weyl sums, and theta series.

Oracles: sympy for symbolic Laplacians, scipy for Gegenbauer values, direct
evaluation loops for class sums and pair sums, and the eta-product expansion
for the weight-12 cusp form used in the Hecke audit.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.special
import sympy

from genusvar.enumeration import short_vectors
from genusvar.errors import AllZeroSeries, DimensionTooSmall, InputError
from genusvar.forms import e8_form, genus_of_single, identity_form, validate_form
from genusvar.harmonics import (HarmonicElement, ThetaSeries,
                                directional_harmonic, gram_poly,
                                harmonic_basis, harmonic_dimension,
                                harmonic_project, harmonic_theta,
                                hecke_eigen_check, laplacian_apply,
                                monomial_sums, poly_eval, spectral_pair_sum,
                                weyl_sum, zonal, zonal_table)


def sympy_laplacian(form, poly):
    """Apply sum((A^-1)_il d_i d_l) symbolically."""
    m = form.dim
    xs = sympy.symbols(f"x0:{m}")
    inv = form.inverse
    expr = sympy.Integer(0)
    for beta, c in poly.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for x, e in zip(xs, beta):
            term *= x ** e
        expr += term
    out = sympy.Integer(0)
    for i in range(m):
        for l in range(m):
            a = inv[i][l]
            if a:
                out += sympy.Rational(a.numerator, a.denominator) * \
                    sympy.diff(expr, xs[i], xs[l])
    out = sympy.expand(out)
    res = {}
    for term in out.as_poly(*xs).terms() if out != 0 else []:
        beta, coeff = term
        res[tuple(int(b) for b in beta)] = Fraction(int(coeff.p), int(coeff.q))
    return res


def random_poly(rng, m, k, terms=4):
    out = {}
    for _ in range(terms):
        cuts = sorted(rng.randrange(m + 1) for _ in range(k))
        beta = [0] * m
        for c in cuts:
            beta[min(c, m - 1)] += 1
        out[tuple(beta)] = out.get(tuple(beta), Fraction(0)) + Fraction(
            rng.randrange(-5, 6), rng.randrange(1, 4))
    return {b: c for b, c in out.items() if c}


def test_harmonic_dimension_formula():
    for m in range(1, 9):
        assert harmonic_dimension(m, 0) == 1
        assert harmonic_dimension(m, 1) == m
    # classical values: spherical harmonics on S^2 have dimension 2k+1
    for k in range(2, 8):
        assert harmonic_dimension(3, k) == 2 * k + 1
    assert harmonic_dimension(4, 2) == 9
    assert harmonic_dimension(8, 2) == 35
    with pytest.raises(InputError):
        harmonic_dimension(0, 2)


def test_laplacian_matches_sympy():
    rng = random.Random(5)
    forms = [identity_form(3), validate_form([[2, 1, 0], [1, 2, 1], [0, 1, 4]])]
    for form in forms:
        for k in (2, 3, 4):
            poly = random_poly(rng, 3, k)
            if not poly:
                continue
            assert laplacian_apply(form, poly) == sympy_laplacian(form, poly)


def test_harmonic_project_annihilated():
    rng = random.Random(9)
    for form in (identity_form(3), identity_form(4),
                 validate_form([[2, 1], [1, 2]])):
        m = form.dim
        for k in (2, 3, 4):
            poly = random_poly(rng, m, k)
            if not poly:
                continue
            el = harmonic_project(form, poly)
            assert el.degree == k
            assert laplacian_apply(form, el.expand()) == {}


def test_harmonic_project_fixes_harmonics():
    # x0*x1 is already harmonic for the identity form
    el = harmonic_project(identity_form(3), {(1, 1, 0): Fraction(1)})
    assert el.expand() == {(1, 1, 0): Fraction(1)}


def test_directional_harmonic_matches_projection():
    for form in (identity_form(3), identity_form(4), e8_form()):
        m = form.dim
        for k in (2, 3, 4):
            d = directional_harmonic(form, k, [1] + [0] * (m - 1))
            seed = tuple([k] + [0] * (m - 1))
            ref = harmonic_project(form, {seed: Fraction(1)})
            assert d.expand() == ref.expand()
            assert laplacian_apply(form, d.expand()) == {}


def test_directional_harmonic_rejects_bad_directions():
    with pytest.raises(InputError):
        directional_harmonic(identity_form(3), 2, [0, 0, 0])
    with pytest.raises(InputError):
        directional_harmonic(identity_form(3), 2, [1, 0])


def test_eval_at_matches_expand():
    rng = random.Random(17)
    form = identity_form(4)
    poly = random_poly(rng, 4, 3)
    el = harmonic_project(form, poly)
    ax = directional_harmonic(form, 4, [1, 2, 0, -1])
    for _ in range(5):
        x = [Fraction(rng.randrange(-4, 5), rng.randrange(1, 3)) for _ in range(4)]
        assert el.eval_at(x) == poly_eval(el.expand(), x)
        assert ax.eval_at(x) == poly_eval(ax.expand(), x)


def test_class_sum_matches_pointwise():
    form = identity_form(4)
    sv = short_vectors(form, 6)
    basis = harmonic_basis(form, 3)
    ax = directional_harmonic(form, 3, [1, 1, 0, 0])
    for n in (2, 4, 6):
        vecs = sv.vectors_norm(n)
        for el in list(basis)[:4] + [ax]:
            direct = sum((el.eval_at(v) for v in vecs.tolist()), Fraction(0))
            assert el.class_sum(vecs, n) == direct


def test_harmonic_basis_dimensions_and_independence():
    cases = [(identity_form(3), 2), (identity_form(3), 4),
             (identity_form(4), 3), (validate_form([[2, 1], [1, 2]]), 5),
             (e8_form(), 2)]
    for form, k in cases:
        basis = harmonic_basis(form, k)
        assert len(basis) == harmonic_dimension(form.dim, k)
        rows = np.array([[float(c) for c in row]
                         for row in basis.coefficient_vectors()])
        assert np.linalg.matrix_rank(rows) == len(basis)
        for el in basis:
            assert laplacian_apply(form, el.expand()) == {}


def test_zonal_table_matches_scipy():
    ts = np.linspace(-1, 1, 21)
    for m in (3, 4, 5, 8):
        lam = (m - 2) / 2.0
        table = zonal_table(m, 6, ts)
        for k in range(7):
            ref = scipy.special.eval_gegenbauer(k, lam, ts) / \
                scipy.special.eval_gegenbauer(k, lam, 1.0)
            assert np.allclose(table[k], ref, atol=1e-12)


def test_zonal_table_dimension_two_is_chebyshev():
    ts = np.linspace(-1, 1, 9)
    table = zonal_table(2, 5, ts)
    for k in range(6):
        assert np.allclose(table[k], np.cos(k * np.arccos(ts)), atol=1e-12)
    with pytest.raises(DimensionTooSmall):
        zonal_table(1, 3, [0.5])


def test_zonal_normalization_at_pole():
    form = identity_form(5)
    e = (1, 0, 0, 0, 0)
    for k in range(5):
        assert abs(zonal(form, k, e, e) - 1.0) < 1e-12


def test_weyl_sum_single_class_oracle():
    genus = genus_of_single(identity_form(4))
    form = genus.classes[0]
    sv = short_vectors(form, 5)
    basis = harmonic_basis(form, 2)
    for n in (1, 2, 4, 5):
        vecs = sv.vectors_norm(n)
        for el in list(basis)[:3]:
            direct = sum((el.eval_at(v) for v in vecs.tolist()), Fraction(0))
            ws = weyl_sum(genus, el, n)
            assert ws.full == direct
            assert ws.orbit == ws.full
            assert ws.degree == 2 and ws.norm == n


def test_weyl_sum_rescaled():
    genus = genus_of_single(identity_form(4))
    el = harmonic_basis(genus.classes[0], 2).basis[0]
    ws = weyl_sum(genus, el, 4, rescale=True)
    assert ws.rescaled == pytest.approx(float(ws.full) / 4.0)
    assert weyl_sum(genus, el, 4).rescaled is None


def test_weyl_sum_input_checks():
    genus = genus_of_single(identity_form(4))
    with pytest.raises(InputError):
        weyl_sum(genus, harmonic_basis(genus.classes[0], 2).basis[0], 0)


def test_spectral_pair_sum_degree_zero_exact(dim9_genus, dim16_genus):
    from genusvar.enumeration import rep_count
    # identical representation numbers across the genus: zero spread
    assert spectral_pair_sum(dim16_genus, 0, 2) == 0
    reps = [Fraction(rep_count(c, 1)) for c in dim9_genus.classes]
    w = dim9_genus.weights
    mean = w[0] * reps[0] + w[1] * reps[1]
    expected = w[0] * reps[0] ** 2 + w[1] * reps[1] ** 2 - mean * mean
    got = spectral_pair_sum(dim9_genus, 0, 1)
    assert isinstance(got, Fraction)
    assert got == expected


def test_spectral_pair_sum_matches_direct_loop(e8):
    for genus, n, ks in ((genus_of_single(identity_form(4)), 2, (1, 2, 3, 4)),
                         (genus_of_single(e8), 2, (2,))):
        form = genus.classes[0]
        vecs = short_vectors(form, n).vectors_norm(n).astype(float)
        g = np.array(form.as_lists(), dtype=float)
        prods = vecs @ g @ vecs.T / n
        m = genus.dim
        for k in ks:
            table = zonal_table(m, k, prods.ravel())
            direct = harmonic_dimension(m, k) * table[k].sum()
            got = spectral_pair_sum(genus, k, n)
            assert got >= 0.0
            assert got == pytest.approx(max(direct, 0.0), abs=1e-7)


def test_spectral_pair_sum_input_checks(e8):
    genus = genus_of_single(e8)
    with pytest.raises(InputError):
        spectral_pair_sum(genus, -1, 2)
    with pytest.raises(InputError):
        spectral_pair_sum(genus, 2, 0)


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def test_harmonic_theta_e8_eisenstein(e8):
    theta = harmonic_theta(e8, None, 10)
    assert theta.weight == 4 and theta.level == 1 and theta.degree == 0
    assert theta.coefficient(0) == 1
    for n in range(1, 11):
        if n % 2:
            assert theta.coefficient(n) == 0
        else:
            assert theta.coefficient(n) == 240 * sigma3(n // 2)


def test_harmonic_theta_identity_form_squares():
    theta = harmonic_theta(identity_form(2), None, 25)
    # r2(n): 4 * (d_1(n) - d_3(n)); spot values
    assert theta.coefficient(1) == 4
    assert theta.coefficient(2) == 4
    assert theta.coefficient(3) == 0
    assert theta.coefficient(25) == 12
    assert theta.weight == 1


def eta_product_tau(precision):
    """Coefficients of q prod (1-q^j)^24 up to q^precision."""
    poly = [0] * (precision + 1)
    poly[0] = 1
    for j in range(1, precision + 1):
        base = list(poly)
        for _ in range(24):
            nxt = list(base)
            for i in range(j, precision + 1):
                nxt[i] -= base[i - j]
            base = nxt
        poly = base
    tau = {n: Fraction(poly[n - 1]) for n in range(1, precision + 1) if poly[n - 1]}
    return tau


def test_hecke_eigen_check_on_weight_twelve_cusp_form():
    tau = eta_product_tau(30)
    assert tau[1] == 1 and tau[2] == -24 and tau[3] == 252
    series = ThetaSeries(weight=Fraction(12), level=1, degree=0,
                         precision=30, coeffs=tau, complete=True)
    rep = hecke_eigen_check(series)
    assert rep.n0 == 1
    assert not rep.non_cuspidal
    assert rep.multiplicativity_ok
    checked = {(p, q) for p, q, ok in rep.multiplicative_pairs}
    assert {(2, 3), (2, 5), (3, 5)} <= checked
    assert rep.ramanujan_ok


def test_hecke_eigen_check_detects_tampering():
    tau = eta_product_tau(30)
    tau[6] += 1
    series = ThetaSeries(weight=Fraction(12), level=1, degree=0,
                         precision=30, coeffs=tau, complete=True)
    rep = hecke_eigen_check(series)
    assert not rep.multiplicativity_ok


def test_hecke_eigen_check_all_zero():
    series = ThetaSeries(weight=Fraction(2), level=1, degree=0,
                         precision=10, coeffs={}, complete=True)
    with pytest.raises(AllZeroSeries):
        hecke_eigen_check(series)


def test_sparse_series_coefficient_access():
    series = ThetaSeries(weight=Fraction(12), level=1, degree=8,
                         precision=20, coeffs={2: Fraction(5)}, complete=False)
    assert series.coefficient(2) == 5
    assert series.available(2) and not series.available(3)
    with pytest.raises(InputError):
        series.coefficient(3)
    with pytest.raises(InputError):
        series.coefficient(21)


def test_monomial_sums_exact():
    rng = random.Random(3)
    vecs = np.array([[rng.randrange(-6, 7) for _ in range(3)] for _ in range(40)],
                    dtype=np.int64)
    betas = [(2, 0, 0), (1, 1, 0), (0, 2, 1), (3, 1, 2), (0, 0, 0)]
    sums = monomial_sums(vecs, betas)
    for b in betas:
        direct = sum(int(v[0]) ** b[0] * int(v[1]) ** b[1] * int(v[2]) ** b[2]
                     for v in vecs)
        assert sums[b] == direct


def test_gram_poly_evaluates_to_norm():
    form = validate_form([[2, 1], [1, 4]])
    q = gram_poly(form)
    for x in ([1, 0], [2, -1], [3, 5]):
        direct = 2 * x[0] ** 2 + 2 * x[0] * x[1] + 4 * x[1] ** 2
        assert poly_eval(q, [Fraction(v) for v in x]) == direct
