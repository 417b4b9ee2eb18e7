"""Weyl quantization in a truncated tensor Hermite basis.

Polynomial symbols are quantized exactly through the normal-ordered
ladder algebra, so stored matrix entries are those of the untruncated
operator.  Grid symbols go through cross-Wigner functions of Hermite
pairs, evaluated by a discrete Fourier transform over the momentum
variable; the normalization is pinned by the quantize(1) = identity
and quantize(H) = diag(m + d/2) anchors, not by convention.

De-quantization (`wigner_symbol`) multiplies the matrix by a smooth
flat-top window over the level index before transforming back.  A hard
basis cutoff leaves O(1) oscillatory artifacts for slowly decaying
operators (the Weyl symbol of the truncated identity oscillates
between 0 and 2 at the origin); the smooth cutoff suppresses them
superalgebraically in the resolved region.
"""

from __future__ import annotations

import functools
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .symbols import GridSymbol, PhaseGrid, PolySymbol


class QuantizationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HermiteBasisSpec:
    """Truncated Hermite basis: N levels per axis, M-point axis grid on [-R, R].

    Construction fails if the top basis function has more than `mass_tol`
    of its L^2 mass outside [-R, R]; everything downstream assumes the
    basis is resolved by the grid.
    """

    d: int
    levels: int
    halfwidth: float
    npoints: int
    mass_tol: float = 1e-10

    def __post_init__(self):
        if self.d < 1 or self.levels < 1 or self.npoints < 4 or self.halfwidth <= 0:
            raise ValueError("invalid basis spec")
        if self.d >= 2 and self.npoints > 64:
            raise ValueError("d >= 2 grids are capped at 64 points per axis")
        x = self.axis()
        top = _hermite_rows(self.levels, x)[-1]
        defect = abs(1.0 - self.spacing * float(np.sum(top * top)))
        if defect > self.mass_tol:
            raise ValueError(
                f"halfwidth {self.halfwidth} too small for {self.levels} levels: "
                f"boundary mass defect {defect:.2e} > {self.mass_tol:.0e}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.halfwidth / self.npoints

    @property
    def size(self) -> int:
        return self.levels ** self.d

    def axis(self) -> np.ndarray:
        return (np.arange(self.npoints) - self.npoints // 2) * self.spacing

    def grid(self) -> PhaseGrid:
        return PhaseGrid(2 * self.d, self.halfwidth, self.npoints)


def _hermite_rows(levels: int, x: np.ndarray) -> np.ndarray:
    T = np.zeros((levels, x.size))
    T[0] = np.pi ** (-0.25) * np.exp(-x * x / 2.0)
    if levels > 1:
        T[1] = np.sqrt(2.0) * x * T[0]
    for n in range(1, levels - 1):
        T[n + 1] = np.sqrt(2.0 / (n + 1.0)) * x * T[n] - np.sqrt(n / (n + 1.0)) * T[n - 1]
    return T


def hermite_table(spec: HermiteBasisSpec) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_{N-1} sampled on the axis grid.

    Stable three-term recurrence; rows are levels.  Under trapezoid
    quadrature the sampled functions are orthonormal to ~1e-8 or better
    whenever the spec invariant holds.
    """
    return _hermite_rows(spec.levels, spec.axis())


@dataclass(frozen=True)
class OperatorMatrix:
    """Operator in the truncated tensor Hermite basis (size N^d x N^d).

    The optional `hermitian` flag is validated against the entries at
    construction when set.
    """

    d: int
    levels: int
    entries: np.ndarray = field(repr=False)
    hermitian: bool | None = None
    meta: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        n = self.levels ** self.d
        if m.shape != (n, n):
            raise ValueError(f"entries must be {n}x{n}")
        if not np.all(np.isfinite(m)):
            raise ValueError("entries must be finite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if self.hermitian is not None:
            defect = float(np.max(np.abs(m - m.conj().T)))
            scale = max(1.0, float(np.max(np.abs(m))))
            if self.hermitian != (defect <= 1e-10 * scale):
                raise ValueError("hermitian flag inconsistent with entries")

    @classmethod
    def identity(cls, spec: HermiteBasisSpec) -> "OperatorMatrix":
        return cls(spec.d, spec.levels, np.eye(spec.size, dtype=complex))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return float(np.max(np.abs(self.entries - self.entries.conj().T))) <= tol

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if (self.d, self.levels) != (other.d, other.levels):
            raise ValueError("operator size mismatch")
        return OperatorMatrix(self.d, self.levels, self.entries @ other.entries)


# ---------------------------------------------------------------------------
# polynomial path: exact normal-ordered ladder algebra

def _ladder_mul(A: dict, B: dict) -> dict:
    # elements are sums of adag^p a^q; (adag^p a^q)(adag^r a^s)
    # = sum_j j! C(q,j) C(r,j) adag^{p+r-j} a^{q+s-j}
    out: dict = {}
    for (p, q), ca in A.items():
        for (r, s), cb in B.items():
            c0 = ca * cb
            for j in range(min(q, r) + 1):
                c = c0 * math.comb(q, j) * math.comb(r, j) * math.factorial(j)
                key = (p + r - j, q + s - j)
                out[key] = out.get(key, 0.0 + 0.0j) + c
    return {k: v for k, v in out.items() if v != 0}

_LADDER_S = {(1, 0): 1.0 / math.sqrt(2.0), (0, 1): 1.0 / math.sqrt(2.0)}
_LADDER_P = {(1, 0): 1j / math.sqrt(2.0), (0, 1): -1j / math.sqrt(2.0)}


@functools.lru_cache(maxsize=None)
def _axis_weyl_ladder(s_pow: int, p_pow: int) -> tuple:
    """Normal-ordered form of the Weyl ordering of s^a p^b on one axis."""
    seq = ("s",) * s_pow + ("p",) * p_pow
    arrangements = sorted(set(itertools.permutations(seq)))
    total: dict = {}
    for arr in arrangements:
        acc = {(0, 0): 1.0 + 0.0j}
        for sym in arr:
            acc = _ladder_mul(acc, _LADDER_S if sym == "s" else _LADDER_P)
        for k, v in acc.items():
            total[k] = total.get(k, 0.0 + 0.0j) + v
    w = 1.0 / len(arrangements)
    return tuple((k, w * v) for k, v in sorted(total.items()) if v != 0)


def _ladder_matrix(p: int, q: int, N: int) -> np.ndarray:
    # <m+p-q | adag^p a^q | m> = sqrt(m!/(m-q)!) sqrt((m+p-q)!/(m-q)!)
    out = np.zeros((N, N))
    for m in range(q, N):
        mp = m + p - q
        if 0 <= mp < N:
            v1 = math.prod(range(m - q + 1, m + 1))
            v2 = math.prod(range(m - q + 1, mp + 1))
            out[mp, m] = math.sqrt(v1) * math.sqrt(v2)
    return out


@functools.lru_cache(maxsize=None)
def _axis_weyl_matrix(s_pow: int, p_pow: int, N: int) -> np.ndarray:
    out = np.zeros((N, N), dtype=complex)
    for (p, q), c in _axis_weyl_ladder(s_pow, p_pow):
        out += c * _ladder_matrix(p, q, N)
    out.setflags(write=False)
    return out


def _quantize_poly(sym: PolySymbol, spec: HermiteBasisSpec) -> np.ndarray:
    if sym.degree > 4:
        warnings.warn(
            f"polynomial of degree {sym.degree}: ladder path stays exact but its "
            "cost grows combinatorially", QuantizationWarning, stacklevel=3)
    d, N = spec.d, spec.levels
    total = np.zeros((N ** d, N ** d), dtype=complex)
    for idx, c in sorted(sym.terms.items()):
        mat = _axis_weyl_matrix(idx[0], idx[d], N)
        for ax in range(1, d):
            mat = np.kron(mat, _axis_weyl_matrix(idx[ax], idx[d + ax], N))
        total += c * mat
    return total


# ---------------------------------------------------------------------------
# grid path: cross-Wigner tables by DFT over the momentum variable

@functools.lru_cache(maxsize=2)
def _axis_tables(levels: int, halfwidth: float, npoints: int):
    """Shifted Hermite products and the DFT phase matrix for one axis."""
    M = npoints
    h = 2.0 * halfwidth / M
    x = (np.arange(M) - M // 2) * h
    T = _hermite_rows(levels, x)
    base = np.arange(M)
    off = np.arange(M) - M // 2
    Tp = np.zeros((levels, M, M))
    Tm = np.zeros((levels, M, M))
    for sign, out in ((+1, Tp), (-1, Tm)):
        idx = base[:, None] + sign * off[None, :]
        valid = (idx >= 0) & (idx < M)
        iv = np.clip(idx, 0, M - 1)
        for i in range(levels):
            row = T[i][iv]
            row[~valid] = 0.0
            out[i] = row
    # E[b, m] = exp(i p_b u_m) with u_m = 2 h (m - M/2); p grid equals x grid
    E = np.exp(1j * np.outer(x, 2.0 * h * off))
    return Tp, Tm, E


def _tables(spec: HermiteBasisSpec):
    return _axis_tables(spec.levels, spec.halfwidth, spec.npoints)


@functools.lru_cache(maxsize=2)
def _cross_wigner_matrix(levels: int, halfwidth: float, npoints: int) -> np.ndarray:
    """W[(i,j), (a,b)]: one-axis cross-Wigner values, DFT normalization."""
    Tp, Tm, E = _axis_tables(levels, halfwidth, npoints)
    M = npoints
    h = 2.0 * halfwidth / M
    W = np.empty((levels * levels, M * M), dtype=complex)
    for a in range(M):
        G = np.einsum("im,jm->ijm", Tp[:, a, :], Tm[:, a, :]).reshape(levels ** 2, M)
        W[:, a * M:(a + 1) * M] = G @ E.T
    W *= (2.0 * h) / (2.0 * np.pi)
    return W


def _require_grid(a: GridSymbol, spec: HermiteBasisSpec):
    if a.dim != 2 * spec.d:
        raise ValueError(f"symbol dim {a.dim} != 2d = {2 * spec.d}")
    if a.npoints != spec.npoints or a.halfwidth != spec.halfwidth:
        raise ValueError("grid symbol geometry must match the basis spec")


def _quantize_grid(a: GridSymbol, spec: HermiteBasisSpec) -> np.ndarray:
    _require_grid(a, spec)
    N, M, h = spec.levels, spec.npoints, spec.spacing
    if spec.d == 1:
        Tp, Tm, E = _tables(spec)
        C = a.values @ E                       # [a, m]
        G = Tp * C[None, :, :]
        out = G.reshape(N, M * M) @ Tm.reshape(N, M * M).T
        return out * (h * h * 2.0 * h / (2.0 * np.pi))
    if spec.d == 2:
        W1 = _cross_wigner_matrix(N, spec.halfwidth, M)
        A2 = a.values.transpose(0, 2, 1, 3).reshape(M * M, M * M)
        B = A2 @ W1.T                          # [(a1,b1), (i2,j2)]
        out = W1 @ B                           # [(i1,j1), (i2,j2)]
        out = out.reshape(N, N, N, N).transpose(0, 2, 1, 3).reshape(N * N, N * N)
        return (h ** 4) * out
    raise NotImplementedError("grid quantization implemented for d = 1, 2")


def weyl_quantize(a, spec: HermiteBasisSpec) -> OperatorMatrix:
    """Weyl quantization of a symbol into the truncated Hermite basis.

    Polynomial symbols use the exact ladder-operator path (the stored
    entries are those of the untruncated operator); grid symbols must
    decay near the boundary and share the spec geometry.
    """
    if isinstance(a, PolySymbol):
        if a.dim != 2 * spec.d:
            raise ValueError(f"symbol dim {a.dim} != 2d = {2 * spec.d}")
        ent = _quantize_poly(a, spec)
    elif isinstance(a, GridSymbol):
        if a.boundary_decay() > 0.05:
            warnings.warn("grid symbol does not decay at the boundary; "
                          "matrix elements will carry truncation error",
                          QuantizationWarning, stacklevel=2)
        ent = _quantize_grid(a, spec)
    else:
        raise TypeError(f"unsupported symbol type {type(a).__name__}")
    scale = max(1.0, float(np.max(np.abs(ent))))
    herm = float(np.max(np.abs(ent - ent.conj().T))) <= 1e-10 * scale
    return OperatorMatrix(spec.d, spec.levels, ent, hermitian=herm)


def _flattop(levels: int, flat: float) -> np.ndarray:
    tau = np.clip((np.arange(levels) - flat * levels) / ((1.0 - flat) * levels), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        up = np.where(tau < 1.0, np.exp(-1.0 / np.maximum(1.0 - tau, 1e-300)), 0.0)
        dn = np.where(tau > 0.0, np.exp(-1.0 / np.maximum(tau, 1e-300)), 0.0)
    return up / (up + dn)


def level_weights(spec: HermiteBasisSpec, flat: float = 0.5) -> np.ndarray:
    """Tensorized flat-top window over the level index (1 below flat*N)."""
    w = _flattop(spec.levels, flat)
    out = w
    for _ in range(spec.d - 1):
        out = np.kron(out, w)
    return out


def wigner_symbol(op: OperatorMatrix, spec: HermiteBasisSpec,
                  level_window: float | None = 0.5) -> GridSymbol:
    """Weyl symbol of an operator matrix on the spec grid.

    `level_window` is the flat fraction of the smooth level cutoff
    applied before the transform (None disables it).  Values are
    trustworthy inside the resolved region |xi| <= R/2 for operators
    whose entries vary smoothly with the level index.
    """
    if (op.d, op.levels) != (spec.d, spec.levels):
        raise ValueError("operator does not match the basis spec")
    N, M, h = spec.levels, spec.npoints, spec.spacing
    mat = op.entries
    if level_window is not None:
        w = level_weights(spec, level_window)
        mat = (w[:, None] * mat) * w[None, :]
    if spec.d == 1:
        Tp, Tm, E = _tables(spec)
        Z = np.tensordot(mat, Tm, axes=(1, 0))     # [i, a, m]
        Y = np.sum(Tp * Z, axis=0)                 # [a, m]
        vals = 2.0 * h * (Y @ E.conj().T)          # [a, b]
    elif spec.d == 2:
        V1 = 2.0 * np.pi * _cross_wigner_matrix(N, spec.halfwidth, M).conj()
        mm = mat.reshape(N, N, N, N).transpose(0, 2, 1, 3).reshape(N * N, N * N)
        tmp = V1.T @ mm                             # [(a1,b1), (i2,j2)]
        vals = (tmp @ V1).reshape(M, M, M, M).transpose(0, 2, 1, 3)
    else:
        raise NotImplementedError("wigner_symbol implemented for d = 1, 2")
    return GridSymbol(2 * spec.d, spec.halfwidth, spec.npoints, vals)


def weyl_product_grid(a: GridSymbol, b: GridSymbol, spec: HermiteBasisSpec,
                      level_window: float | None = 0.5) -> GridSymbol:
    """Weyl product of two decaying grid symbols via operator composition."""
    qa = weyl_quantize(a, spec)
    qb = weyl_quantize(b, spec)
    return wigner_symbol(qa @ qb, spec, level_window=level_window)


# ---------------------------------------------------------------------------
# trusted-block bookkeeping

@dataclass(frozen=True)
class BlockComparison:
    """Comparison of two operators restricted to the trusted block."""

    block_levels: int
    max_abs_error: float
    ref_scale: float

    @property
    def relative_error(self) -> float:
        return self.max_abs_error / self.ref_scale if self.ref_scale else self.max_abs_error


def trusted_block_indices(spec: HermiteBasisSpec, margin: int = 10) -> np.ndarray:
    """Flat indices of tensor levels with every axis level < N - margin."""
    keep = max(1, spec.levels - margin)
    idx = np.arange(spec.levels ** spec.d)
    ok = np.ones(idx.shape, dtype=bool)
    rem = idx.copy()
    for _ in range(spec.d):
        ok &= (rem % spec.levels) < keep
        rem //= spec.levels
    return idx[ok]


def block_compare(A: OperatorMatrix, B, spec: HermiteBasisSpec,
                  margin: int = 10) -> BlockComparison:
    """Max-entry difference of two operators on the trusted block.

    Comparisons always exclude the top `margin` levels per axis, where
    basis truncation contaminates matrix products; the block size is
    part of the record.
    """
    bm = B.entries if isinstance(B, OperatorMatrix) else np.asarray(B)
    sel = trusted_block_indices(spec, margin)
    da = A.entries[np.ix_(sel, sel)]
    db = bm[np.ix_(sel, sel)]
    ref = float(np.max(np.abs(db))) or 1.0
    return BlockComparison(max(1, spec.levels - margin),
                           float(np.max(np.abs(da - db))), ref)
