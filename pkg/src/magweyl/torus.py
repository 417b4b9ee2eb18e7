"""Magnetic Bochner Laplacian on a flat torus, Peierls-discretized.

Landau gauge on an N x N site lattice with spacing a = L/N: hops in +x
carry phase 1 except at the wrap, which carries the boundary twist
exp(-i k b L y); hops in +y from column i carry exp(i k b a x_i).
Every plaquette then encloses the same flux phi = 2 pi k c / N^2, and
the twist is single-valued exactly because k c is an integer (the
prequantization condition).

The assembled matrix is Delta_k + k V, so that spectrum(matrix)/k is
the spectrum of k^{-1} Delta_k + V (the energy scale at which the
scalar potential enters the cluster and band statements) and, for
V = 0, spectrum(matrix)/k^2 is the spectrum of k^{-2} Delta_k.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


class SolverError(RuntimeError):
    """Eigensolver failed to converge; never silently truncated."""


@dataclass(frozen=True)
class TorusModel:
    """Flat torus [0, L]^2 with uniform field strength b (curvature b dx^dy)."""

    side: float
    field: float = 1.0
    metric: str = "flat"

    def __post_init__(self):
        if self.side <= 0 or self.field <= 0:
            raise ValueError("side and field must be positive")
        c = self.field * self.side ** 2 / (2.0 * np.pi)
        if abs(c - round(c)) > 1e-9 or round(c) < 1:
            raise ValueError(
                f"flux {c} is not a positive integer: prequantization fails")

    @property
    def chern(self) -> int:
        return round(self.field * self.side ** 2 / (2.0 * np.pi))

    @classmethod
    def compatible(cls, chern: int, field: float = 1.0) -> "TorusModel":
        """b and the flat metric compatible: side = sqrt(2 pi c / b)."""
        if chern < 1:
            raise ValueError("chern number must be a positive integer")
        return cls(side=math.sqrt(2.0 * np.pi * chern / field), field=field)


@dataclass(frozen=True)
class PotentialSpec:
    """Real trigonometric potential sum_pq amp * exp(2 pi i (p x + q y)/L)."""

    modes: tuple

    def __post_init__(self):
        clean = []
        amps = {}
        for (p, q), amp in self.modes:
            key = (int(p), int(q))
            amps[key] = amps.get(key, 0.0 + 0.0j) + complex(amp)
        for (p, q), amp in amps.items():
            partner = amps.get((-p, -q), 0.0 + 0.0j)
            if abs(np.conj(amp) - partner) > 1e-12 * max(1.0, abs(amp)):
                raise ValueError(f"mode ({p},{q}) breaks realness: needs conjugate partner")
            clean.append(((p, q), amp))
        object.__setattr__(self, "modes", tuple(sorted(clean, key=lambda t: t[0])))

    @classmethod
    def cosine_x(cls, amplitude: float, harmonics: int = 1) -> "PotentialSpec":
        """amplitude * cos(2 pi p x / L)."""
        p = harmonics
        return cls((((p, 0), amplitude / 2.0), ((-p, 0), amplitude / 2.0)))

    @property
    def is_x_only(self) -> bool:
        return all(q == 0 for (_, q), _ in self.modes)

    def sample(self, x, y, side: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for (p, q), amp in self.modes:
            out = out + amp * np.exp(2j * np.pi * (p * x + q * y) / side)
        return out.real

    def oscillation(self, side: float, samples: int = 4096) -> tuple[float, float]:
        """(min, max) over the torus, on a fine sampling mesh."""
        t = np.linspace(0.0, side, samples, endpoint=False)
        if self.is_x_only:
            v = self.sample(t, 0.0, side)
        else:
            n = 512
            t = np.linspace(0.0, side, n, endpoint=False)
            xx, yy = np.meshgrid(t, t, indexing="ij")
            v = self.sample(xx, yy, side)
        return float(np.min(v)), float(np.max(v))


@dataclass(frozen=True)
class MagneticLatticeOperator:
    """Sparse Hermitian Peierls operator on the N^2-site torus lattice."""

    npoints: int
    power: int
    flux_per_plaquette: float
    spacing: float
    matrix: sp.csr_matrix = field(repr=False, compare=False)
    model: TorusModel = None
    potential: PotentialSpec | None = None

    @property
    def dim(self) -> int:
        return self.npoints ** 2

    @property
    def total_flux(self) -> float:
        return self.npoints ** 2 * self.flux_per_plaquette

    def hermiticity_defect(self) -> float:
        d = (self.matrix - self.matrix.conj().T).tocoo()
        return float(np.max(np.abs(d.data))) if d.nnz else 0.0

    def plaquette_phase_products(self) -> np.ndarray:
        """Product of the four hop phases around every plaquette.

        Traversal (i,j) -> (i,j+1) -> (i+1,j+1) -> (i+1,j) -> (i,j);
        gauge consistency means every product equals e^{-i phi}.
        """
        N = self.npoints
        t = -1.0 / (2.0 * self.spacing ** 2)
        M = self.matrix.tocsr()

        def hop(frm, to):
            return M[to, frm] / t

        out = np.empty((N, N), dtype=complex)
        site = lambda i, j: i + N * j
        for j in range(N):
            j2 = (j + 1) % N
            for i in range(N):
                i2 = (i + 1) % N
                out[i, j] = (hop(site(i, j), site(i, j2))
                             * hop(site(i, j2), site(i2, j2))
                             * hop(site(i2, j2), site(i2, j))
                             * hop(site(i2, j), site(i, j)))
        return out


def build_magnetic_laplacian(model: TorusModel, k: int, npoints: int,
                             potential: PotentialSpec | None = None) -> MagneticLatticeOperator:
    """Assemble the Peierls-discretized operator Delta_k + k V.

    5-point stencil: diagonal 2/a^2 (+ k V sampled at sites), off-diagonal
    -phase/(2 a^2).  Requires N^2 >= 20 k c so the flux per plaquette
    stays in the continuum-fidelity regime.
    """
    N = npoints
    if k < 0:
        raise ValueError("tensor power k must be nonnegative")
    kc = k * model.chern
    if k > 0 and N * N < 20 * kc:
        raise ValueError(f"lattice too coarse: N^2 = {N*N} < 20 k c = {20*kc}")
    L = model.side
    a = L / N
    kb = k * model.field
    t = -1.0 / (2.0 * a * a)
    site = lambda i, j: i + N * j

    diag = np.full(N * N, 2.0 / (a * a), dtype=complex)
    if potential is not None:
        xs = a * np.arange(N)
        vsamp = potential.sample(xs[:, None], xs[None, :], L)  # [i, j]
        diag += float(k) * vsamp.reshape(N * N, order="F")

    rows, cols, vals = [], [], []
    for j in range(N):
        y = j * a
        j2 = (j + 1) % N
        for i in range(N):
            s0 = site(i, j)
            i2 = (i + 1) % N
            ph = np.exp(-1j * kb * L * y) if i == N - 1 else 1.0 + 0.0j
            rows += [site(i2, j), s0]
            cols += [s0, site(i2, j)]
            vals += [t * ph, t * np.conj(ph)]
            ph = np.exp(1j * kb * a * (i * a))
            rows += [site(i, j2), s0]
            cols += [s0, site(i, j2)]
            vals += [t * ph, t * np.conj(ph)]
    H = sp.coo_matrix((vals, (rows, cols)), shape=(N * N, N * N)).tocsr()
    H = (H + sp.diags(diag)).tocsr()
    return MagneticLatticeOperator(npoints=N, power=k,
                                   flux_per_plaquette=2.0 * np.pi * kc / (N * N),
                                   spacing=a, matrix=H, model=model, potential=potential)


@dataclass(frozen=True)
class EigenResult:
    """Sorted eigenvalues of a lattice operator with scaling bookkeeping."""

    power: int
    raw: np.ndarray = field(repr=False)
    regime: str = "k1"
    count_requested: int = 0
    residual_norms: tuple = ()
    method: str = "dense"

    def __post_init__(self):
        r = np.array(self.raw, dtype=float)
        if np.any(np.diff(r) < -1e-12):
            raise ValueError("eigenvalues must be ascending")
        r.setflags(write=False)
        object.__setattr__(self, "raw", r)
        if self.regime not in ("k1", "k2", "raw"):
            raise ValueError("regime must be 'k1', 'k2' or 'raw'")

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.scaled(self.regime)

    def scaled(self, regime: str) -> np.ndarray:
        if regime == "raw" or self.power == 0:
            return self.raw
        if regime == "k1":
            return self.raw / self.power
        if regime == "k2":
            return self.raw / self.power ** 2
        raise ValueError(f"unknown regime {regime!r}")


def _sector_blocks(op: MagneticLatticeOperator):
    """Magnetic Bloch reduction in y for x-only potentials.

    The x-wrap twist shifts the y-momentum index by -k c (mod N), so the
    operator block-diagonalizes over orbits of n -> n - k c; each block
    is an N x len(orbit) chain.
    """
    N = op.npoints
    model, k = op.model, op.power
    a, L = op.spacing, op.model.side
    kb = k * model.field
    kc = k * model.chern
    t = -1.0 / (2.0 * a * a)
    vx = None
    if op.potential is not None:
        xs = a * np.arange(N)
        vx = float(k) * op.potential.sample(xs, 0.0, L)
    done = np.zeros(N, dtype=bool)
    for n0 in range(N):
        if done[n0]:
            continue
        orbit = [n0]
        done[n0] = True
        n = (n0 - kc) % N
        while n != n0:
            orbit.append(n)
            done[n] = True
            n = (n - kc) % N
        nb = len(orbit)
        dim = N * nb
        Hb = np.zeros((dim, dim), dtype=complex)
        for q, n in enumerate(orbit):
            th = 2.0 * np.pi * n / N
            base = q * N
            for i in range(N):
                r = base + i
                Hb[r, r] = 2.0 / (a * a) + 2.0 * t * np.cos(th - kb * a * (i * a))
                if vx is not None:
                    Hb[r, r] += vx[i]
                if i + 1 < N:
                    Hb[base + i + 1, r] += t
                    Hb[r, base + i + 1] += t
                else:
                    q2 = ((q + 1) % nb) * N
                    Hb[q2, r] += t
                    Hb[r, q2] += t
        yield orbit, Hb


def _sector_solve_all(op: MagneticLatticeOperator, want_vectors: int = 0):
    """All eigenvalues via dense sector diagonalization (x-only potentials)."""
    evs = []
    vecs = []
    N = op.npoints
    for orbit, Hb in _sector_blocks(op):
        if want_vectors:
            w, V = np.linalg.eigh(Hb)
            for col in range(min(want_vectors, w.size)):
                psi = np.zeros(N * N, dtype=complex)
                for q, n in enumerate(orbit):
                    phase = np.exp(2j * np.pi * n * np.arange(N) / N) / np.sqrt(N)
                    # psi(i, j) = e^{i theta j} u(i); site index i + N j
                    psi += np.kron(phase, V[q * N:(q + 1) * N, col])
                vecs.append((w[col], psi))
        else:
            w = np.linalg.eigvalsh(Hb)
        evs.append(w)
    return np.sort(np.concatenate(evs)), vecs


def solve_lowest(op: MagneticLatticeOperator, count: int, seed: int = 0,
                 regime: str = "k1", method: str = "auto",
                 residual_tol: float = 1e-8) -> EigenResult:
    """Smallest `count` eigenvalues with verified residual norms.

    method 'sparse' uses shift-invert Lanczos with a seeded start
    vector; 'sectors' uses the exact magnetic Bloch reduction (available
    when the potential depends on x only) and checks residuals on a
    sample of reconstructed eigenvectors.  'auto' picks sectors for
    large counts.
    """
    dim = op.dim
    if count < 1 or count > dim // 4:
        raise ValueError(f"count must be in [1, dim/4] = [1, {dim // 4}]")
    sectors_ok = op.potential is None or op.potential.is_x_only
    if method == "auto":
        method = "sectors" if (sectors_ok and count > 48) else "sparse"
    if method == "sectors":
        if not sectors_ok:
            raise ValueError("sector solve needs an x-only potential")
        allev, vecs = _sector_solve_all(op, want_vectors=2)
        res = []
        for lam, psi in sorted(vecs, key=lambda t: t[0])[:8]:
            res.append(float(np.linalg.norm(op.matrix @ psi - lam * psi)))
        raw = allev[:count]
        residuals = tuple(res)
    elif method == "sparse":
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        scale = 1.0 / (2.0 * op.spacing ** 2)
        try:
            vals, vecs = spla.eigsh(op.matrix, k=count, sigma=-1e-3 * scale,
                                    which="LM", v0=v0)
        except spla.ArpackNoConvergence as exc:
            raise SolverError(f"ARPACK did not converge: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        residuals = tuple(float(np.linalg.norm(op.matrix @ vecs[:, i] - vals[i] * vecs[:, i]))
                          for i in range(count))
        raw = vals
    else:
        raise ValueError(f"unknown method {method!r}")
    if residuals and max(residuals) > residual_tol:
        raise SolverError(f"residual norm {max(residuals):.2e} exceeds {residual_tol:.0e}")
    return EigenResult(power=op.power, raw=np.sort(raw), regime=regime,
                       count_requested=count, residual_norms=residuals, method=method)


def solve_all(op: MagneticLatticeOperator, regime: str = "k2") -> EigenResult:
    """Complete spectrum (sector reduction, or dense for small lattices)."""
    if op.potential is None or op.potential.is_x_only:
        allev, vecs = _sector_solve_all(op, want_vectors=1)
        res = tuple(float(np.linalg.norm(op.matrix @ psi - lam * psi))
                    for lam, psi in vecs[:4])
        method = "sectors"
    elif op.dim <= 4096:
        allev = np.sort(np.linalg.eigvalsh(op.matrix.toarray()))
        res = ()
        method = "dense"
    else:
        raise SolverError("full spectrum for y-dependent potentials needs dim <= 4096")
    return EigenResult(power=op.power, raw=allev, regime=regime,
                       count_requested=allev.size, residual_norms=res, method=method)


def exact_landau_reference(model: TorusModel, k: int, m_max: int):
    """Continuum Landau levels (b(m + 1/2), multiplicity k c), m <= m_max."""
    return tuple((model.field * (m + 0.5), k * model.chern) for m in range(m_max + 1))


def random_gauge_transform(op: MagneticLatticeOperator,
                           rng: np.random.Generator) -> MagneticLatticeOperator:
    """Conjugate by a random site-dependent phase; spectrum is unchanged."""
    phases = np.exp(2j * np.pi * rng.random(op.dim))
    U = sp.diags(phases)
    mat = (U.conj().T @ (op.matrix @ U)).tocsr()
    return MagneticLatticeOperator(npoints=op.npoints, power=op.power,
                                   flux_per_plaquette=op.flux_per_plaquette,
                                   spacing=op.spacing, matrix=mat,
                                   model=op.model, potential=op.potential)


def spectra_payload(op: MagneticLatticeOperator, results: dict,
                    timestamp: float | None = None) -> dict:
    """JSON-ready record of a solved operator (documented schema)."""
    payload = {
        "schema": "magweyl/spectra-v1",
        "model": {"side": op.model.side, "field": op.model.field,
                  "chern": op.model.chern, "metric": op.model.metric},
        "power": op.power,
        "npoints": op.npoints,
        "flux_per_plaquette": op.flux_per_plaquette,
        "potential": ([[list(pq), [amp.real, amp.imag]] for pq, amp in op.potential.modes]
                      if op.potential is not None else None),
        "results": {},
        "timestamp": timestamp if timestamp is not None else time.time(),
    }
    for name, res in results.items():
        payload["results"][name] = {
            "regime": res.regime,
            "raw": [float(v) for v in res.raw],
            "scaled_k1": [float(v) for v in res.scaled("k1")],
            "scaled_k2": [float(v) for v in res.scaled("k2")],
            "count_requested": res.count_requested,
            "residual_norms": [float(r) for r in res.residual_norms],
            "method": res.method,
        }
    return payload
