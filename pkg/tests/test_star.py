import numpy as np
import pytest

from magweyl import (AntisymmetricForm, GridSymbol, PhaseGrid, PolySymbol,
                     left_xi, moyal_product, sharp_power, symmetrized_product)


def random_poly(rng, dim, max_degree=4):
    terms = {}
    for _ in range(rng.integers(2, 6)):
        idx = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=dim))
        while sum(idx) > max_degree:
            idx = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=dim))
        terms[idx] = complex(rng.standard_normal(), rng.standard_normal())
    return PolySymbol(dim, terms)


def random_form(rng, dim):
    m = rng.standard_normal((dim, dim))
    return AntisymmetricForm(dim, m - m.T)


def test_zero_form_is_pointwise(J2):
    x1 = PolySymbol.coordinate(2, 1)
    x2 = PolySymbol.coordinate(2, 2)
    p = moyal_product(x1, x2, AntisymmetricForm.zero(2))
    assert p.distance(x1 * x2) == 0.0


def test_first_correction(J2):
    x1 = PolySymbol.coordinate(2, 1)
    x2 = PolySymbol.coordinate(2, 2)
    p = moyal_product(x1, x2, J2)
    assert p.distance(x1 * x2 + 0.5j) < 1e-15
    q = moyal_product(x2, x1, J2)
    assert q.distance(x1 * x2 - 0.5j) < 1e-15


def test_identity_element(rng):
    A = random_form(rng, 3)
    f = random_poly(rng, 3)
    one = PolySymbol.constant(3, 1.0)
    assert moyal_product(f, one, A).distance(f) < 1e-14
    assert moyal_product(one, f, A).distance(f) < 1e-14


def test_associativity(rng):
    for _ in range(50):
        dim = int(rng.integers(2, 5))
        A = random_form(rng, dim)
        f, g, h = (random_poly(rng, dim) for _ in range(3))
        lhs = moyal_product(moyal_product(f, g, A), h, A)
        rhs = moyal_product(f, moyal_product(g, h, A), A)
        scale = max(1.0, f.max_abs_coeff() * g.max_abs_coeff() * h.max_abs_coeff())
        assert lhs.distance(rhs) / scale < 1e-10


def test_degree_bound(rng):
    A = random_form(rng, 3)
    f, g = random_poly(rng, 3), random_poly(rng, 3)
    assert moyal_product(f, g, A).degree <= f.degree + g.degree


def test_dimension_mismatch(J2):
    f = PolySymbol.coordinate(3, 1)
    with pytest.raises(ValueError):
        moyal_product(f, f, J2)


def test_left_xi_constant(J2):
    one = PolySymbol.constant(2, 1.0)
    out = left_xi(1, one, J2)
    assert out.distance(PolySymbol.coordinate(2, 1)) == 0.0


def test_left_xi_matches_moyal(rng):
    for _ in range(10):
        dim = int(rng.integers(2, 5))
        A = random_form(rng, dim)
        f = random_poly(rng, dim)
        axis = int(rng.integers(1, dim + 1))
        direct = left_xi(axis, f, A)
        via = moyal_product(PolySymbol.coordinate(dim, axis), f, A)
        assert direct.distance(via) < 1e-13


def test_left_xi_axis_range(J2):
    with pytest.raises(ValueError):
        left_xi(3, PolySymbol.constant(2, 1.0), J2)


def test_left_xi_grid_gaussian(J2):
    # frozen analytic oracle: xi_1 e^{-|xi|^2} + (i/2) d_2 e^{-|xi|^2}
    g = PhaseGrid(2, 8.0, 256)
    pts = g.points()
    gauss = np.exp(-np.sum(pts ** 2, axis=-1))
    f = GridSymbol(2, 8.0, 256, gauss)
    out = left_xi(1, f, J2)
    expect = pts[..., 0] * gauss + 0.5j * (-2.0 * pts[..., 1]) * gauss
    assert np.max(np.abs(out.values - expect)) < 1e-6


def test_left_xi_grid_matches_poly_route(J2):
    # polynomial-times-gaussian symbol: finite differences against the
    # exact derivative of the sampled function
    g = PhaseGrid(2, 8.0, 256)
    pts = g.points()
    s, p = pts[..., 0], pts[..., 1]
    vals = s * np.exp(-(s ** 2 + p ** 2) / 2.0)
    out = left_xi(2, GridSymbol(2, 8.0, 256, vals), J2)
    expect = p * vals + 0.5j * (-1.0) * (np.exp(-(s ** 2 + p ** 2) / 2.0)
                                         * (1.0 - s ** 2))
    assert np.max(np.abs(out.values - expect)) < 1e-6


def test_sharp_power_basics(rng):
    A = random_form(rng, 2)
    assert sharp_power((1, 0), A).distance(PolySymbol.coordinate(2, 1)) == 0.0
    # alpha = (2, 0): A(e1, e1) = 0 forces no correction
    x1 = PolySymbol.coordinate(2, 1)
    assert sharp_power((2, 0), A).distance(x1 * x1) < 1e-15


def test_sharp_power_pair(J2):
    x1 = PolySymbol.coordinate(2, 1)
    x2 = PolySymbol.coordinate(2, 2)
    p = sharp_power((1, 1), J2)
    assert p.distance(x1 * x2 + 0.5j) < 1e-15


def test_sharp_power_matches_factor_product(rng):
    # xi^{# alpha} equals the #-product of its linear factors, |alpha| <= 6
    for _ in range(8):
        dim = int(rng.integers(2, 5))
        A = random_form(rng, dim)
        alpha = tuple(int(v) for v in rng.integers(0, 3, size=dim))
        if sum(alpha) > 6:
            continue
        p = sharp_power(alpha, A)
        q = PolySymbol.constant(dim, 1.0)
        for axis in range(dim, 0, -1):
            for _ in range(alpha[axis - 1]):
                q = moyal_product(PolySymbol.coordinate(dim, axis), q, A)
        assert p.distance(q) < 1e-12
        # leading term is the plain monomial
        if sum(alpha):
            assert abs(p.coefficient(alpha) - 1.0) < 1e-14


def test_symmetrized_pair(J2):
    p = symmetrized_product([np.array([1.0, 0.0]), np.array([0.0, 1.0])], J2)
    x1x2 = PolySymbol.coordinate(2, 1) * PolySymbol.coordinate(2, 2)
    assert p.distance(x1x2) < 1e-15


def test_symmetrized_single_and_empty(rng):
    A = random_form(rng, 2)
    p = symmetrized_product([np.array([1.0, 0.0])], A)
    assert p.distance(PolySymbol.coordinate(2, 1)) == 0.0
    assert symmetrized_product([], A).distance(PolySymbol.constant(2, 1.0)) == 0.0


def test_symmetrized_random_triples(rng):
    for _ in range(10):
        A = random_form(rng, 4)
        vs = [rng.standard_normal(4) for _ in range(3)]
        sym = symmetrized_product(vs, A)
        mono = PolySymbol.constant(4, 1.0)
        for v in vs:
            mono = mono * PolySymbol.from_covector(v)
        assert sym.distance(mono) / max(1.0, mono.max_abs_coeff()) < 1e-12
