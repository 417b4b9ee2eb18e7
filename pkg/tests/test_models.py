import numpy as np
import pytest

from magweyl import (AntisymmetricForm, FormulaDomainError, GridSymbol,
                     MetricForm, OperatorMatrix, PhaseGrid,
                     PoleProximityError, ProjectorQuery, ResolventQuery,
                     SymbolNotInvertibleError, WindowBoundaryError,
                     projector_symbol, residue_projector, resolvent_at,
                     resolvent_symbol, sharp_inverse, spectral_window_symbol,
                     spectrum_of_symbol, weyl_product_grid, weyl_quantize,
                     wigner_symbol)
from magweyl.models import harmonic_hamiltonian
from magweyl.quantize import block_compare


def test_query_validation():
    with pytest.raises(FormulaDomainError):
        ResolventQuery(d=1, z=1.5)
    with pytest.raises(PoleProximityError):
        ResolventQuery(d=1, z=0.5)
    with pytest.raises(PoleProximityError):
        ResolventQuery(d=2, z=1.0004)
    ResolventQuery(d=1, z=0.9 + 0.5j)  # right of d/2 is fine away from poles
    with pytest.raises(ValueError):
        ProjectorQuery(d=1, energy=1.0)
    assert ProjectorQuery(d=2, energy=3.0).rank == 3


def test_resolvent_origin_value():
    # spectral series sum 2 (-1)^m / (m + 1/2) = pi; equals the closed
    # form 2 arcsin(1) of the s-integral over its full range
    q = ResolventQuery(d=1, z=0.0)
    assert abs(resolvent_at(q, 0.0) - np.pi) < 1e-10


def test_resolvent_matches_diagonal_series():
    # R_{1,z}(xi) = sum_m (m + 1/2 - z)^{-1} V_mm(xi) pointwise
    z = -1.0
    q = ResolventQuery(d=1, z=z)
    r2 = 2.5
    from scipy.special import eval_laguerre
    series = sum(2.0 * (-1.0) ** m * np.exp(-r2) * eval_laguerre(m, 2.0 * r2)
                 / (m + 0.5 - z) for m in range(400))
    # slowly convergent; average consecutive partial sums for the tail
    series_to = np.cumsum([2.0 * (-1.0) ** m * np.exp(-r2) * eval_laguerre(m, 2.0 * r2)
                           / (m + 0.5 - z) for m in range(2001)])
    abel = 0.5 * (series_to[-1] + series_to[-2])
    assert abs(resolvent_at(q, r2) - abel) < 1e-3


def test_resolvent_leading_order_decay():
    # R ~ 1/H at large |xi|: ratio within 2% at |xi| = 6
    q = ResolventQuery(d=1, z=0.0)
    H = 0.5 * 36.0
    assert abs(resolvent_at(q, 36.0) * H - 1.0) < 0.02


def test_resolvent_matrix_oracle(spec24):
    z = -1.0
    grid = spec24.grid()
    sym = resolvent_symbol(ResolventQuery(d=1, z=z), grid)
    q = weyl_quantize(sym, spec24)
    target = np.diag(1.0 / (np.arange(spec24.levels) + 0.5 - z))
    comp = block_compare(q, target, spec24, margin=spec24.levels - 10)
    assert comp.block_levels == 10
    assert comp.max_abs_error < 1e-4


def test_resolvent_identity_on_block(spec24):
    # weyl_quantize(R_{d,z}) (diag(m + d/2) - z) acts as the identity on
    # the trusted block
    z = -1.0
    q = weyl_quantize(resolvent_symbol(ResolventQuery(1, z), spec24.grid()),
                      spec24)
    osc = np.diag(np.arange(spec24.levels) + 0.5) - z * np.eye(spec24.levels)
    prod = q.entries @ osc
    comp = block_compare(OperatorMatrix(1, spec24.levels, prod),
                         np.eye(spec24.levels), spec24)
    assert comp.max_abs_error < 1e-4


def test_resolvent_radial_invariance(spec16):
    sym = resolvent_symbol(ResolventQuery(d=1, z=-0.7), spec16.grid())
    v = sym.values
    # swap and parity generate the grid rotations; -R has no mirror image
    assert np.max(np.abs(v - v.T)) < 1e-10
    assert np.max(np.abs(v[1:, 1:] - v[1:, 1:][::-1, ::-1])) < 1e-10


def test_projector_closed_forms(spec16):
    grid = spec16.grid()
    p0 = projector_symbol(ProjectorQuery(1, 0.5), grid)
    assert np.max(np.abs(p0.values - 2.0 * np.exp(-grid.radius2()))) < 1e-13
    p1 = projector_symbol(ProjectorQuery(1, 2.5), grid).values
    assert np.max(np.abs(p1 - p1.T)) < 1e-12  # radial
    assert np.max(np.abs(p1[1:, 1:] - p1[1:, 1:][::-1, ::-1])) < 1e-12
    g2 = PhaseGrid(4, 6.0, 16)
    p2 = projector_symbol(ProjectorQuery(2, 1.0), g2)
    assert np.max(np.abs(p2.values - 4.0 * np.exp(-g2.radius2()))) < 1e-13


def test_projector_quantization_spectrum(spec16):
    q = weyl_quantize(projector_symbol(ProjectorQuery(1, 1.5), spec16.grid()),
                      spec16).entries
    evals, evecs = np.linalg.eigh(0.5 * (q + q.conj().T))
    assert np.sum(np.abs(evals - 1.0) < 1e-6) == 1
    assert np.sum(np.abs(evals) > 1e-6) == 1
    # the range is the second Hermite level
    top = evecs[:, np.argmax(evals)]
    assert abs(abs(top[1]) - 1.0) < 1e-6


def test_projector_orthogonality(spec16):
    grid = spec16.grid()
    qa = weyl_quantize(projector_symbol(ProjectorQuery(1, 0.5), grid), spec16).entries
    qb = weyl_quantize(projector_symbol(ProjectorQuery(1, 2.5), grid), spec16).entries
    assert np.max(np.abs(qa @ qb)) < 1e-6


def test_residue_reproduces_projector(spec16):
    grid = spec16.grid()
    res = residue_projector(1, 0.5, 0.2, 64, grid)
    ref = projector_symbol(ProjectorQuery(1, 0.5), grid)
    assert res.sup_distance(ref) < 1e-6
    assert res.meta["encloses_pole"]


def test_residue_d2(spec_d2):
    g2 = PhaseGrid(4, 6.0, 24)
    res = residue_projector(2, 1.0, 0.2, 64, g2)
    ref = projector_symbol(ProjectorQuery(2, 1.0), g2)
    assert res.sup_distance(ref) < 1e-6


def test_residue_empty_contour(spec16):
    out = residue_projector(1, 0.0, 0.2, 64, spec16.grid())
    assert np.max(np.abs(out.values)) < 1e-8
    assert not out.meta["encloses_pole"]


def test_residue_domain_errors(spec16):
    grid = spec16.grid()
    with pytest.raises(FormulaDomainError):
        residue_projector(1, 0.9, 0.2, 64, grid)  # contour crosses Re z = d
    with pytest.raises(PoleProximityError):
        residue_projector(1, 0.0, 0.4995, 64, grid)
    with pytest.raises(ValueError):
        residue_projector(1, 0.5, 0.8, 64, grid)  # encloses two poles


def test_spectrum_of_symbol_simple(eye2, J2):
    sp = spectrum_of_symbol(eye2, J2, [], 4.0)
    assert sp.values == ((0.5, 1), (1.5, 1), (2.5, 1), (3.5, 1))


def test_spectrum_of_symbol_isotropic_d2():
    G = MetricForm.identity(4)
    W = AntisymmetricForm.standard(2)
    sp = spectrum_of_symbol(G, W, [0.0], 4.0)
    assert sp.values == ((1.0, 1), (2.0, 2), (3.0, 3), (4.0, 4))


def test_spectrum_of_symbol_with_potential(eye2, J2):
    sp = spectrum_of_symbol(eye2, J2, [-0.1, 0.1], 2.0)
    assert np.allclose([v for v, _ in sp.values], [0.4, 0.6, 1.4, 1.6])
    assert all(m == 1 for _, m in sp.values)


def test_spectrum_merges_collisions():
    G = MetricForm.identity(2)
    W = AntisymmetricForm.standard(1)
    sp = spectrum_of_symbol(G, W, [0.0, 0.0], 1.0)
    assert sp.values == ((0.5, 2),)


def test_sharp_inverse_constant(spec16):
    from magweyl import PolySymbol
    inv = sharp_inverse(PolySymbol.constant(2, 2.0), spec16)
    assert np.max(np.abs(inv.values - 0.5)) < 1e-8


def test_sharp_inverse_matches_resolvent(spec24):
    z = -1.0
    H = harmonic_hamiltonian(1)
    inv = sharp_inverse(H - z, spec24)
    ref = resolvent_symbol(ResolventQuery(1, z), spec24.grid())
    mask = spec24.grid().radius2() <= (spec24.halfwidth / 2.0) ** 2
    assert inv.sup_distance(ref, mask=mask) < 1e-4


def test_sharp_inverse_left_inverse_property(spec24):
    H = harmonic_hamiltonian(1)
    inv = sharp_inverse(H + 1.0, spec24)
    grid = spec24.grid()
    with pytest.warns(Warning):
        prod = weyl_product_grid((H + 1.0).on_grid(grid), inv, spec24)
    mask = grid.radius2() <= 9.0  # window-flat part of the resolved region
    assert np.max(np.abs(prod.values - 1.0)[mask]) < 1e-2


def test_sharp_inverse_detects_pole(spec16):
    H = harmonic_hamiltonian(1)
    with pytest.raises(SymbolNotInvertibleError):
        sharp_inverse(H - 0.5, spec16)


def test_spectral_window_ground_state(spec16):
    sym = spectral_window_symbol(harmonic_hamiltonian(1), 0.0, 1.0, spec16)
    expect = 2.0 * np.exp(-spec16.grid().radius2())
    assert np.max(np.abs(sym.values - expect)) < 1e-10
    assert sym.meta["rank"] == 1


def test_spectral_window_additive(spec16):
    grid = spec16.grid()
    sym = spectral_window_symbol(harmonic_hamiltonian(1), 0.0, 2.0, spec16)
    ref = (projector_symbol(ProjectorQuery(1, 0.5), grid).values
           + projector_symbol(ProjectorQuery(1, 1.5), grid).values)
    assert np.max(np.abs(sym.values - ref)) < 1e-10


def test_spectral_window_empty(spec16):
    sym = spectral_window_symbol(harmonic_hamiltonian(1), -2.0, -1.0, spec16)
    assert np.max(np.abs(sym.values)) < 1e-12
    assert sym.meta["rank"] == 0


def test_spectral_window_idempotent(spec24):
    sym = spectral_window_symbol(harmonic_hamiltonian(1), 0.0, 2.0, spec24)
    prod = weyl_product_grid(sym, sym, spec24)
    assert prod.sup_distance(sym) < 1e-4


def test_spectral_window_boundary_guard(spec16):
    with pytest.raises(WindowBoundaryError):
        spectral_window_symbol(harmonic_hamiltonian(1), 0.0, 1.5, spec16)


def test_frame_independent_projector_profiles(rng):
    # pi_{d,E} evaluated through two frames of the same fiber data gives
    # identical grid values, because the normal-form energy is
    # frame-independent
    from magweyl import symplectic_frame
    m = rng.standard_normal((2, 2))
    W = AntisymmetricForm(2, m - m.T)
    g = rng.standard_normal((2, 2))
    G = MetricForm(2, g @ g.T + 2.0 * np.eye(2))
    f1 = symplectic_frame(G, W, rng=np.random.default_rng(11))
    f2 = symplectic_frame(G, W, rng=np.random.default_rng(12))
    xi = rng.standard_normal((300, 2))
    prof = lambda q: 2.0 * np.exp(-2.0 * q)  # pi_{1,1/2} as a function of energy
    assert np.max(np.abs(prof(f1.normal_form_energy(xi))
                         - prof(f2.normal_form_energy(xi)))) < 1e-8
