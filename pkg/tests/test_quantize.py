import numpy as np
import pytest

from magweyl import (AntisymmetricForm, GridSymbol, HermiteBasisSpec,
                     OperatorMatrix, PolySymbol, QuantizationWarning,
                     block_compare, hermite_table, moyal_product,
                     weyl_product_grid, weyl_quantize, wigner_symbol)
from magweyl.models import harmonic_hamiltonian
from magweyl.quantize import trusted_block_indices


def test_spec_rejects_small_halfwidth():
    # h_39 still has ~1e-5 of its mass beyond |x| = 10
    with pytest.raises(ValueError):
        HermiteBasisSpec(d=1, levels=40, halfwidth=10.0, npoints=512)
    HermiteBasisSpec(d=1, levels=40, halfwidth=12.0, npoints=512)


def test_hermite_table_closed_forms(spec16):
    T = hermite_table(spec16)
    x = spec16.axis()
    assert np.allclose(T[0], np.pi ** -0.25 * np.exp(-x * x / 2.0), atol=1e-14)
    # h_1 is odd: vanishes at the origin
    assert abs(T[1][spec16.npoints // 2]) < 1e-15


def test_hermite_orthonormality():
    spec = HermiteBasisSpec(d=1, levels=40, halfwidth=12.0, npoints=512)
    T = hermite_table(spec)
    gram = spec.spacing * (T @ T.T)
    assert np.max(np.abs(gram - np.eye(spec.levels))) < 1e-8


def test_quantize_constant_is_identity(spec16):
    one = PolySymbol.constant(2, 1.0)
    q = weyl_quantize(one, spec16)
    assert np.max(np.abs(q.entries - np.eye(spec16.levels))) < 1e-14


def test_quantize_harmonic_oscillator_exact(spec16):
    q = weyl_quantize(harmonic_hamiltonian(1), spec16)
    target = np.diag(np.arange(spec16.levels) + 0.5)
    # ladder path: exact on the whole truncation, including the top level
    assert np.max(np.abs(q.entries - target)) < 1e-12


def test_quantize_position_tridiagonal(spec16):
    q = weyl_quantize(PolySymbol.coordinate(2, 1), spec16).entries
    N = spec16.levels
    expect = np.zeros((N, N))
    for m in range(N - 1):
        expect[m, m + 1] = expect[m + 1, m] = np.sqrt((m + 1) / 2.0)
    assert np.max(np.abs(q - expect)) < 1e-14


def test_quantize_linearity_and_reality(spec16, rng):
    f = PolySymbol(2, {(2, 0): 1.3, (1, 1): -0.4, (0, 0): 0.7})
    g = PolySymbol(2, {(0, 2): 0.9, (1, 0): 2.0})
    a, b = 1.7, -0.6
    qa = weyl_quantize(f, spec16).entries
    qb = weyl_quantize(g, spec16).entries
    qc = weyl_quantize(a * f + b * g, spec16).entries
    assert np.max(np.abs(qc - (a * qa + b * qb))) < 1e-10
    assert weyl_quantize(f, spec16).is_hermitian(1e-10)


def test_grid_path_matches_ladder(spec24):
    # grid-sampled H: the DFT path must reproduce diag(m + 1/2) on the
    # trusted block (this anchor pins the cross-Wigner normalization)
    grid = spec24.grid()
    sym = GridSymbol(2, grid.halfwidth, grid.npoints, 0.5 * grid.radius2())
    with pytest.warns(QuantizationWarning):
        q = weyl_quantize(sym, spec24)
    target = np.diag(np.arange(spec24.levels) + 0.5)
    comp = block_compare(q, target, spec24)
    assert comp.max_abs_error < 1e-6
    assert q.is_hermitian(1e-8)


def test_grid_quantize_gaussian_projector(spec16):
    grid = spec16.grid()
    vals = 2.0 * np.exp(-grid.radius2())
    q = weyl_quantize(GridSymbol(2, grid.halfwidth, grid.npoints, vals), spec16)
    expect = np.zeros((spec16.levels, spec16.levels))
    expect[0, 0] = 1.0
    assert np.max(np.abs(q.entries - expect)) < 1e-10


def test_trace_rule(spec24):
    grid = spec24.grid()
    vals = np.exp(-grid.radius2() / 2.0)
    tr = np.trace(weyl_quantize(GridSymbol(2, grid.halfwidth, grid.npoints, vals),
                                spec24).entries).real
    integral = vals.sum() * grid.spacing ** 2 / (2.0 * np.pi)
    assert abs(tr - integral) / abs(integral) < 1e-4


def test_trace_rule_d2(spec_d2):
    grid = spec_d2.grid()
    vals = np.exp(-grid.radius2() / 2.0)
    tr = np.trace(weyl_quantize(GridSymbol(4, grid.halfwidth, grid.npoints, vals),
                                spec_d2).entries).real
    integral = vals.sum() * grid.spacing ** 4 / (2.0 * np.pi) ** 2
    assert abs(tr - integral) / abs(integral) < 1e-4


def test_wigner_rank_one_projector(spec16):
    mat = np.zeros((spec16.levels, spec16.levels), dtype=complex)
    mat[0, 0] = 1.0
    sym = wigner_symbol(OperatorMatrix(1, spec16.levels, mat), spec16)
    expect = 2.0 * np.exp(-spec16.grid().radius2())
    assert np.max(np.abs(sym.values - expect)) < 1e-10


def test_round_trip_gaussian_windowed(spec24):
    grid = spec24.grid()
    pts = grid.points()
    vals = np.exp(-np.sum(pts ** 2, axis=-1) / 2.0) * (1.0 + 0.3 * pts[..., 0]
                                                       + 0.2 * pts[..., 0] * pts[..., 1])
    sym = GridSymbol(2, grid.halfwidth, grid.npoints, vals)
    back = wigner_symbol(weyl_quantize(sym, spec24), spec24)
    mask = grid.radius2() <= (grid.halfwidth / 2.0) ** 2
    assert back.sup_distance(sym, mask=mask) < 1e-5


def test_wigner_of_identity_needs_window(spec24):
    # hard truncation leaves O(1) oscillation (the truncated-projector
    # symbol); the flat-top window brings it down to the 1e-3 scale
    raw = wigner_symbol(OperatorMatrix.identity(spec24), spec24, level_window=None)
    win = wigner_symbol(OperatorMatrix.identity(spec24), spec24)
    mask = spec24.grid().radius2() <= 9.0
    assert np.max(np.abs(raw.values - 1.0)[mask]) > 0.5
    assert np.max(np.abs(win.values - 1.0)[mask]) < 2e-2


def test_wigner_of_number_operator(spec24):
    # diag(m + 1/2) de-quantizes to H on the window-flat region; growing
    # entries are the worst case for the level window, so this is a few
    # percent at N = 24 (and improves with N)
    mat = np.diag(np.arange(spec24.levels) + 0.5).astype(complex)
    sym = wigner_symbol(OperatorMatrix(1, spec24.levels, mat), spec24)
    grid = spec24.grid()
    mask = grid.radius2() <= 9.0
    err = np.abs(sym.values - 0.5 * grid.radius2())
    assert np.max(err[mask]) < 0.1
    raw = wigner_symbol(OperatorMatrix(1, spec24.levels, mat), spec24,
                        level_window=None)
    assert np.max(np.abs(raw.values - 0.5 * grid.radius2())[mask]) > 1.0


def test_weyl_product_matches_star_product_on_polynomials(spec24, rng):
    # operator product against the closed-formula product, compared on
    # the trusted block where basis truncation cannot leak in
    J = AntisymmetricForm.standard(1)
    for _ in range(5):
        terms_f = {(int(a), int(b)): complex(rng.standard_normal())
                   for a, b in rng.integers(0, 3, size=(3, 2))}
        terms_g = {(int(a), int(b)): complex(rng.standard_normal())
                   for a, b in rng.integers(0, 3, size=(3, 2))}
        f, g = PolySymbol(2, terms_f), PolySymbol(2, terms_g)
        qf = weyl_quantize(f, spec24).entries
        qg = weyl_quantize(g, spec24).entries
        with pytest.warns(QuantizationWarning) if (f * g).degree > 4 else _nullcontext():
            qfg = weyl_quantize(moyal_product(f, g, J), spec24)
        comp = block_compare(qfg, qf @ qg, spec24)
        assert comp.block_levels == spec24.levels - 10
        assert comp.max_abs_error < 1e-5


def _nullcontext():
    import contextlib
    return contextlib.nullcontext()


def test_moyal_closed_form_for_hamiltonian_square():
    H = harmonic_hamiltonian(1)
    J = AntisymmetricForm.standard(1)
    prod = moyal_product(H, H, J)
    assert prod.distance(H * H - 0.25) < 1e-14


def test_weyl_product_grid_projector_idempotent(spec24):
    grid = spec24.grid()
    pi = GridSymbol(2, grid.halfwidth, grid.npoints, 2.0 * np.exp(-grid.radius2()))
    prod = weyl_product_grid(pi, pi, spec24)
    assert prod.sup_distance(pi) < 1e-10


def test_weyl_product_grid_constant(spec16):
    grid = spec16.grid()
    g = GridSymbol(2, grid.halfwidth, grid.npoints,
                   np.exp(-grid.radius2() / 2.0))
    with pytest.warns(QuantizationWarning):
        one = GridSymbol.constant(grid, 1.0)
        prod = weyl_product_grid(one, g, spec16)
    mask = grid.radius2() <= 4.0
    assert prod.sup_distance(g, mask=mask) < 1e-3


def test_degree_warning(spec16):
    x = PolySymbol.coordinate(2, 1)
    p = x * x * x * x * x  # degree 5
    with pytest.warns(QuantizationWarning):
        weyl_quantize(p, spec16)


def test_boundary_decay_warning(spec16):
    grid = spec16.grid()
    with pytest.warns(QuantizationWarning):
        weyl_quantize(GridSymbol.constant(grid, 1.0), spec16)


def test_trusted_block_indices_d2(spec_d2):
    sel = trusted_block_indices(spec_d2, margin=10)
    keep = spec_d2.levels - 10
    assert sel.size == keep ** 2
    assert np.all(sel % spec_d2.levels < keep)


def test_geometry_mismatch_raises(spec16):
    bad = GridSymbol(2, 4.0, spec16.npoints,
                     np.zeros((spec16.npoints, spec16.npoints)))
    with pytest.raises(ValueError):
        weyl_quantize(bad, spec16)
    with pytest.raises(ValueError):
        weyl_quantize(PolySymbol.constant(4, 1.0), spec16)
