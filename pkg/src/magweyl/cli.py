"""Command-line entry point: star-check, model-symbols, torus, all.

A single JSON config file drives every pipeline; flags override config
fields.  Results land in one subdirectory per config hash containing
inputs.json, spectra.json (when spectra are computed) and
report.{json,csv,svg}.  Exit codes: 0 pass, 1 tolerance failure,
2 usage/config error, 3 resource/convergence error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import copy
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import reports
from .forms import AntisymmetricForm, MetricForm
from .models import (PoleProximityError, ProjectorQuery, ResolventQuery,
                     SymbolNotInvertibleError, harmonic_hamiltonian,
                     projector_symbol, residue_projector, resolvent_at,
                     resolvent_symbol, sharp_inverse)
from .quantize import HermiteBasisSpec, block_compare, weyl_quantize
from .star import moyal_product, sharp_power, symmetrized_product
from .symbols import PolySymbol
from .torus import (PotentialSpec, SolverError, TorusModel,
                    build_magnetic_laplacian, exact_landau_reference,
                    solve_all, solve_lowest, spectra_payload)
from .verify import (band_containment, band_gaps, check_cluster_law,
                     check_weyl_law, detect_clusters, sigma_bands)

EXIT_PASS = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

DEFAULT_CONFIG = {
    "seed": 0,
    "out_dir": "out",
    "star": {
        "instances": 200,
        "max_dim": 4,
        "max_degree": 4,
        "tolerance": 1e-10,
    },
    "models": {
        "hermite_levels": 40,
        "halfwidth": 12.0,
        "npoints": 512,
        "quad_nodes": 64,
        "resolvent_z": [-1.0, 0.0],
        "block_size": 10,
        "matrix_tolerance": 1e-4,
        "projector_tolerance": 1e-6,
        "residue_tolerance": 1e-6,
        "inverse_tolerance": 1e-4,
        "d2_levels": 12,
        "d2_halfwidth": 7.5,
        "d2_npoints": 48,
    },
    "torus": {
        "field": 1.0,
        "chern": 1,
        "cluster_pairs": [[4, 64], [8, 64], [16, 64], [4, 128], [8, 128], [16, 128]],
        "cluster_levels": [0, 1, 2],
        "center_tolerance": 0.02,
        "weyl_pairs": [[8, 64], [16, 128], [24, 192]],
        "weyl_lambda": 1.0,
        "weyl_tolerance": 0.1,
        "potential": {"cos_x": 0.1},
        "band_pairs": [[16, 64], [16, 128]],
        "band_cutoff": 3.0,
        "band_margin": 0.05,
        "gap_minimum": 0.6,
    },
    "caps": {
        "max_lattice_dim": 262144,
        "max_hermite_levels": 128,
    },
}


class ConfigError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """A configured resource cap was exceeded."""


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    note: str = ""

    def row(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "passed": self.passed, "note": self.note}


def _leq(name, value, tol, note="") -> Check:
    return Check(name, float(value), float(tol), bool(value <= tol), note)


# fields replaced wholesale instead of deep-merged (their sub-schema is
# a union of shapes, e.g. null / {"cos_x": v} / {"modes": [...]})
_OPAQUE_FIELDS = {"torus.potential"}


def _merge(base: dict, override: dict, path="") -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config field {where!r}")
        if where in _OPAQUE_FIELDS:
            out[key] = copy.deepcopy(val)
        elif isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"config field {where!r} must be an object")
            out[key] = _merge(base[key], val, where)
        else:
            out[key] = val
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        user = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    return _merge(DEFAULT_CONFIG, user)


def config_hash(cfg: dict) -> str:
    payload = {k: v for k, v in cfg.items() if k != "out_dir"}
    return hashlib.sha256(reports.canonical_json(payload).encode()).hexdigest()[:16]


def _potential_from_config(spec) -> PotentialSpec | None:
    if spec is None:
        return None
    if "cos_x" in spec:
        return PotentialSpec.cosine_x(float(spec["cos_x"]))
    if "modes" in spec:
        return PotentialSpec(tuple(((int(p), int(q)), complex(re, im))
                                   for (p, q), (re, im) in spec["modes"]))
    raise ConfigError("potential must be null, {'cos_x': v} or {'modes': [...]}")


# ---------------------------------------------------------------------------
# star-check

def _random_poly(rng, dim, max_degree) -> PolySymbol:
    terms = {}
    for _ in range(rng.integers(2, 6)):
        idx = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=dim))
        while sum(idx) > max_degree:
            idx = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=dim))
        terms[idx] = complex(rng.standard_normal(), rng.standard_normal())
    return PolySymbol(dim, terms)


def _random_antisymmetric(rng, dim) -> AntisymmetricForm:
    m = rng.standard_normal((dim, dim))
    return AntisymmetricForm(dim, m - m.T)


def run_star_checks(cfg: dict, seed: int) -> list[Check]:
    scfg = cfg["star"]
    rng = np.random.default_rng(seed)
    tol = scfg["tolerance"]
    worst_assoc = 0.0
    worst_zero = 0.0
    worst_symm = 0.0
    worst_power = 0.0
    for _ in range(int(scfg["instances"])):
        dim = int(rng.integers(2, scfg["max_dim"] + 1))
        A = _random_antisymmetric(rng, dim)
        f, g, h = (_random_poly(rng, dim, scfg["max_degree"]) for _ in range(3))
        scale = max(1.0, f.max_abs_coeff() * g.max_abs_coeff() * h.max_abs_coeff())
        lhs = moyal_product(moyal_product(f, g, A), h, A)
        rhs = moyal_product(f, moyal_product(g, h, A), A)
        worst_assoc = max(worst_assoc, lhs.distance(rhs) / scale)
        # A = 0 must be the plain pointwise product
        zero = AntisymmetricForm.zero(dim)
        worst_zero = max(worst_zero, moyal_product(f, g, zero).distance(f * g))
        # symmetrization collapses to the plain monomial
        vs = [rng.standard_normal(dim) for _ in range(int(rng.integers(1, 4)))]
        sym = symmetrized_product(vs, A)
        mono = PolySymbol.constant(dim, 1.0)
        for v in vs:
            mono = mono * PolySymbol.from_covector(v)
        worst_symm = max(worst_symm, sym.distance(mono) / max(1.0, mono.max_abs_coeff()))
        # ordered sharp powers against explicit left multiplications
        alpha = tuple(int(v) for v in rng.integers(0, 3, size=dim))
        p = sharp_power(alpha, A)
        q = PolySymbol.constant(dim, 1.0)
        for axis in range(dim, 0, -1):
            for _ in range(alpha[axis - 1]):
                q = moyal_product(PolySymbol.coordinate(dim, axis), q, A)
        worst_power = max(worst_power, p.distance(q))
    return [
        _leq("star.associativity", worst_assoc, tol,
             f"{scfg['instances']} random triples"),
        _leq("star.pointwise_at_zero_form", worst_zero, 1e-12),
        _leq("star.symmetrization_identity", worst_symm, 1e-12),
        _leq("star.sharp_power_consistency", worst_power, 1e-12),
    ]


# ---------------------------------------------------------------------------
# model symbols

def _models_spec(cfg: dict) -> HermiteBasisSpec:
    mcfg = cfg["models"]
    levels = int(mcfg["hermite_levels"])
    if levels > cfg["caps"]["max_hermite_levels"]:
        raise ResourceLimitError(f"hermite levels {levels} over cap "
                                 f"{cfg['caps']['max_hermite_levels']}")
    return HermiteBasisSpec(d=1, levels=levels, halfwidth=float(mcfg["halfwidth"]),
                            npoints=int(mcfg["npoints"]))


def run_model_checks(cfg: dict) -> list[Check]:
    mcfg = cfg["models"]
    spec = _models_spec(cfg)
    grid = spec.grid()
    checks = []

    # pointwise anchor: R_{1,0}(0) = 2 arcsin(1) = pi, the closed form of
    # the s-integral over its full range [0, 2]
    q0 = ResolventQuery(d=1, z=complex(mcfg["resolvent_z"][1]),
                        quad_nodes=int(mcfg["quad_nodes"]))
    anchor = abs(resolvent_at(q0, 0.0) - np.pi)
    checks.append(_leq("models.resolvent_origin_anchor", anchor, 1e-8,
                       "closed form 2*arcsin(1)"))

    # matrix oracle: quantize(R_{1,z}) vs diag(1/(m + 1/2 - z))
    z = complex(mcfg["resolvent_z"][0])
    rq = ResolventQuery(d=1, z=z, quad_nodes=int(mcfg["quad_nodes"]))
    rsym = resolvent_symbol(rq, grid)
    qr = weyl_quantize(rsym, spec)
    target = np.diag(1.0 / (np.arange(spec.levels) + 0.5 - z))
    comp = block_compare(qr, target, spec, margin=spec.levels - int(mcfg["block_size"]))
    checks.append(_leq("models.resolvent_matrix_oracle", comp.max_abs_error,
                       mcfg["matrix_tolerance"], f"block {comp.block_levels}, z={z}"))

    # projector checks (d = 1 on the main spec, d = 2 on its own spec)
    spec2 = HermiteBasisSpec(d=2, levels=int(mcfg["d2_levels"]),
                             halfwidth=float(mcfg["d2_halfwidth"]),
                             npoints=int(mcfg["d2_npoints"]))
    for (d, m) in ((1, 0), (1, 1), (1, 2), (2, 0), (2, 1)):
        sp_d = spec if d == 1 else spec2
        pq = ProjectorQuery(d=d, energy=m + d / 2.0)
        proj = projector_symbol(pq, sp_d.grid())
        qp = weyl_quantize(proj, sp_d).entries
        idem = float(np.max(np.abs(qp @ qp - qp)))
        evals = np.linalg.eigvalsh(0.5 * (qp + qp.conj().T))
        rank = int(np.sum(np.abs(evals - 1.0) < 1e-4))
        checks.append(_leq(f"models.projector_idempotent_d{d}_m{m}", idem,
                           mcfg["projector_tolerance"]))
        checks.append(Check(f"models.projector_rank_d{d}_m{m}", rank, pq.rank,
                            rank == pq.rank, f"expected C(m+d-1,m) = {pq.rank}"))

    # residue identity at the first pole
    res = residue_projector(1, 0.5, 0.2, 64, grid)
    ref = projector_symbol(ProjectorQuery(1, 0.5), grid)
    checks.append(_leq("models.residue_identity", res.sup_distance(ref),
                       mcfg["residue_tolerance"], "contour r=0.2, 64 nodes"))
    empty = residue_projector(1, 0.0, 0.2, 64, grid)
    checks.append(_leq("models.residue_empty_contour",
                       float(np.max(np.abs(empty.values))), 1e-8))

    # sharp inverse vs the Mehler symbol
    H = harmonic_hamiltonian(1)
    inner = grid.radius2() <= (grid.halfwidth / 2.0) ** 2
    inv = sharp_inverse(H - z, spec)
    err = inv.sup_distance(rsym, mask=inner)
    checks.append(_leq("models.sharp_inverse_vs_mehler", err,
                       mcfg["inverse_tolerance"], f"|xi| <= R/2, z={z}"))
    try:
        sharp_inverse(H - 0.5, spec)
        checks.append(Check("models.sharp_inverse_pole_detected", 0.0, 1.0, False,
                            "H - 1/2 must be flagged singular"))
    except SymbolNotInvertibleError:
        checks.append(Check("models.sharp_inverse_pole_detected", 1.0, 1.0, True,
                            "H - 1/2 flagged singular"))
    return checks


# ---------------------------------------------------------------------------
# torus pipelines

def _solve_job(args) -> tuple:
    (side, field, k, npts, potential_modes, purpose, count, seed) = args
    model = TorusModel(side=side, field=field)
    pot = PotentialSpec(potential_modes) if potential_modes is not None else None
    op = build_magnetic_laplacian(model, k, npts, pot)
    if purpose == "full":
        res = solve_all(op)
    else:
        res = solve_lowest(op, count, seed=seed)
    return (purpose, k, npts), {
        "raw": [float(v) for v in res.raw],
        "residual_norms": [float(r) for r in res.residual_norms],
        "method": res.method,
        "count_requested": res.count_requested,
    }


def _torus_jobs(cfg: dict, seed: int) -> list[tuple]:
    tcfg = cfg["torus"]
    model = TorusModel.compatible(int(tcfg["chern"]), float(tcfg["field"]))
    cap = cfg["caps"]["max_lattice_dim"]
    pot = _potential_from_config(tcfg["potential"])
    jobs = []
    kc = model.chern
    for k, npts in tcfg["cluster_pairs"]:
        count = 3 * k * kc + 8
        jobs.append((model.side, model.field, int(k), int(npts), None,
                     "clusters", count, seed))
    for k, npts in tcfg["weyl_pairs"]:
        jobs.append((model.side, model.field, int(k), int(npts), None, "full", 0, seed))
    if pot is not None:
        for k, npts in tcfg["band_pairs"]:
            count = 3 * k * kc + 8
            jobs.append((model.side, model.field, int(k), int(npts), pot.modes,
                         "bands", count, seed))
    for job in jobs:
        if job[3] ** 2 > cap:
            raise ResourceLimitError(f"lattice dimension {job[3] ** 2} exceeds cap {cap}")
    return jobs


def _run_jobs(jobs: list, n_workers: int) -> dict:
    out = {}
    if n_workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=n_workers) as pool:
            for key, val in pool.map(_solve_job, jobs):
                out[key] = val
    else:
        for job in jobs:
            key, val = _solve_job(job)
            out[key] = val
    return out


def run_torus_checks(cfg: dict, spectra: dict) -> tuple[list[Check], dict]:
    tcfg = cfg["torus"]
    model = TorusModel.compatible(int(tcfg["chern"]), float(tcfg["field"]))
    pot = _potential_from_config(tcfg["potential"])
    checks = []
    extras = {"clusters": [], "weyl": [], "bands": []}

    if tcfg["cluster_pairs"]:
        cluster_spectra = {}
        for k, npts in tcfg["cluster_pairs"]:
            rec = spectra[("clusters", int(k), int(npts))]
            cluster_spectra[(int(k), int(npts))] = np.asarray(rec["raw"]) / k
        report = check_cluster_law(model, cluster_spectra, tcfg["cluster_levels"])
        worst_drift = max(r.relative_drift for r in report.rows)
        count_ok = all(r.measured_count == r.predicted_count for r in report.rows)
        checks.append(_leq("torus.cluster_center_drift", worst_drift,
                           tcfg["center_tolerance"]))
        checks.append(Check("torus.cluster_counts_exact", float(count_ok), 1.0,
                            count_ok, "count == k*c for every (k, m)"))
        # refinement: drift shrinks when N doubles at fixed k
        by_k = {}
        for r in report.rows:
            by_k.setdefault((r.power, r.level), {})[r.npoints] = r.relative_drift
        improving = all(d[n] >= d[n2] - 1e-12
                        for d in by_k.values()
                        for n in d for n2 in d if n2 > n)
        checks.append(Check("torus.cluster_drift_improves_with_N", float(improving),
                            1.0, improving, "N-doubling reduces drift"))
        extras["clusters"] = [r.__dict__ for r in report.rows]
        extras["cluster_fit"] = report.fit

    if tcfg["weyl_pairs"]:
        lam = float(tcfg["weyl_lambda"])
        weyl_spectra = {}
        for k, npts in tcfg["weyl_pairs"]:
            rec = spectra[("full", int(k), int(npts))]
            weyl_spectra[(int(k), int(npts))] = np.asarray(rec["raw"]) / k ** 2
        records = check_weyl_law(weyl_spectra, lam, model)
        mid = records[len(records) // 2]
        checks.append(_leq("torus.weyl_ratio_mid_k", abs(mid.ratio - 1.0),
                           tcfg["weyl_tolerance"], f"k={mid.power}"))
        devs = [abs(r.ratio - 1.0) for r in records]
        monotone = all(devs[i + 1] <= devs[i] + 1e-12 for i in range(len(devs) - 1))
        checks.append(Check("torus.weyl_ratio_converges", float(monotone), 1.0,
                            monotone, "deviation non-increasing in k"))
        extras["weyl"] = [r.__dict__ for r in records]

    if pot is not None and tcfg["band_pairs"]:
        bands = sigma_bands(model, pot, int(tcfg["band_cutoff"]) + 1)
        eps_by_n = {}
        for k, npts in tcfg["band_pairs"]:
            rec = spectra[("bands", int(k), int(npts))]
            scaled = np.asarray(rec["raw"]) / k
            below = scaled[scaled < float(tcfg["band_cutoff"])]
            eps_by_n[(k, npts)] = band_containment(below, bands)
            cl = detect_clusters(below, 0.25 * model.field)
            gaps = [cl.clusters[i + 1].lo - cl.clusters[i].hi
                    for i in range(len(cl.clusters) - 1)]
            extras["bands"].append({"k": k, "npoints": npts,
                                    "containment": eps_by_n[(k, npts)],
                                    "observed_gaps": gaps,
                                    "predicted_bands": bands,
                                    "predicted_gaps": band_gaps(bands)})
            if gaps:
                checks.append(Check(f"torus.gap_width_k{k}_N{npts}", min(gaps),
                                    tcfg["gap_minimum"],
                                    min(gaps) >= tcfg["gap_minimum"],
                                    "observed gap >= required minimum"))
        finest = max(eps_by_n, key=lambda t: t[1])
        checks.append(_leq("torus.band_containment", eps_by_n[finest],
                           tcfg["band_margin"], f"margin at N={finest[1]}"))
        shrinking = all(eps_by_n[a] >= eps_by_n[b] - 1e-12
                        for a in eps_by_n for b in eps_by_n
                        if a[0] == b[0] and b[1] > a[1])
        checks.append(Check("torus.band_margin_shrinks", float(shrinking), 1.0,
                            shrinking, "containment margin non-increasing under refinement"))
    return checks, extras


# ---------------------------------------------------------------------------
# commands

def _emit(cfg: dict, command: str, checks: list[Check], out_dir: Path,
          extras: dict | None = None, svg: str | None = None) -> Path:
    rows = [c.row() for c in checks]
    records = {
        "command": command,
        "config_hash": config_hash(cfg),
        "passed": all(c.passed for c in checks),
        "checks": rows,
    }
    if extras:
        records["details"] = extras
    reports.emit_report(records, out_dir, rows=rows,
                        columns=["name", "value", "tolerance", "passed", "note"],
                        svg=svg)
    return out_dir


def _print_checks(checks: list[Check]):
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name}: value={c.value:.6g} tolerance={c.tolerance:.6g} {c.note}")


def _cache_dir(cfg: dict, out_root: str) -> Path:
    return Path(out_root) / config_hash(cfg)


def cmd_star_check(cfg: dict, jobs: int, dry_run: bool) -> int:
    out = _cache_dir(cfg, cfg["out_dir"])
    if dry_run:
        print(f"plan: {cfg['star']['instances']} random star-product property "
              f"instances -> {out}")
        return EXIT_PASS
    checks = run_star_checks(cfg, int(cfg["seed"]))
    out.mkdir(parents=True, exist_ok=True)
    reports.write_json(out / "inputs.json", cfg)
    _emit(cfg, "star-check", checks, out)
    _print_checks(checks)
    return EXIT_PASS if all(c.passed for c in checks) else EXIT_TOLERANCE


def cmd_model_symbols(cfg: dict, jobs: int, dry_run: bool) -> int:
    out = _cache_dir(cfg, cfg["out_dir"])
    if dry_run:
        print(f"plan: resolvent/projector/residue/inverse checks at "
              f"N={cfg['models']['hermite_levels']} -> {out}")
        return EXIT_PASS
    checks = run_model_checks(cfg)
    out.mkdir(parents=True, exist_ok=True)
    reports.write_json(out / "inputs.json", cfg)
    _emit(cfg, "model-symbols", checks, out)
    _print_checks(checks)
    return EXIT_PASS if all(c.passed for c in checks) else EXIT_TOLERANCE


def _torus_spectra(cfg: dict, jobs: int, out: Path) -> dict:
    cache = out / "spectra.json"
    job_list = _torus_jobs(cfg, int(cfg["seed"]))
    if cache.exists():
        payload = json.loads(cache.read_text())
        if payload.get("config_hash") == config_hash(cfg):
            return {tuple(json.loads(k)): v for k, v in payload["spectra"].items()}
    solved = _run_jobs(job_list, jobs)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "schema": "magweyl/spectra-cache-v1",
        "config_hash": config_hash(cfg),
        "timestamp": float(os.environ.get("SOURCE_DATE_EPOCH", time.time())),
        "spectra": {json.dumps(list(k)): v for k, v in sorted(solved.items())},
    }
    cache.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return solved


def _weyl_svg(extras: dict) -> str:
    series = []
    if extras["weyl"]:
        ks = [r["power"] for r in extras["weyl"]]
        ratios = [r["ratio"] for r in extras["weyl"]]
        series = [{"label": "measured / predicted", "x": ks, "y": ratios,
                   "kind": "line"}]
    return reports.svg_plot(series, "eigenvalue counting ratio", "k",
                            "N_k / (k/2pi)^2 vol", reference_y=1.0)


def cmd_torus(cfg: dict, jobs: int, dry_run: bool) -> int:
    out = _cache_dir(cfg, cfg["out_dir"])
    job_list = _torus_jobs(cfg, int(cfg["seed"]))
    if dry_run:
        for purpose, k, npts in [(j[5], j[2], j[3]) for j in job_list]:
            print(f"plan: solve {purpose} spectrum at k={k}, N={npts}")
        print(f"plan: reports -> {out}")
        return EXIT_PASS
    spectra = _torus_spectra(cfg, jobs, out)
    checks, extras = run_torus_checks(cfg, spectra)
    reports.write_json(out / "inputs.json", cfg)
    _emit(cfg, "torus", checks, out, extras=extras, svg=_weyl_svg(extras))
    _print_checks(checks)
    return EXIT_PASS if all(c.passed for c in checks) else EXIT_TOLERANCE


def cmd_all(cfg: dict, jobs: int, dry_run: bool) -> int:
    out = _cache_dir(cfg, cfg["out_dir"])
    if dry_run:
        print("plan: star-check, model-symbols, torus")
        for job in _torus_jobs(cfg, int(cfg["seed"])):
            print(f"plan: solve {job[5]} spectrum at k={job[2]}, N={job[3]}")
        print(f"plan: reports -> {out}")
        return EXIT_PASS
    checks = run_star_checks(cfg, int(cfg["seed"]))
    checks += run_model_checks(cfg)
    spectra = _torus_spectra(cfg, jobs, out)
    torus_checks, extras = run_torus_checks(cfg, spectra)
    checks += torus_checks
    reports.write_json(out / "inputs.json", cfg)
    _emit(cfg, "all", checks, out, extras=extras, svg=_weyl_svg(extras))
    _print_checks(checks)
    n_fail = sum(not c.passed for c in checks)
    print(f"summary: {len(checks) - n_fail}/{len(checks)} checks passed")
    return EXIT_PASS if n_fail == 0 else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magweyl",
                                description="star-product calculus, model symbols, "
                                            "and magnetic torus spectra")
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--out", metavar="DIR", help="output directory root")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="worker processes for (k, N) solves")
    p.add_argument("--dry-run", action="store_true", help="print the plan, no compute")
    p.add_argument("--seed", type=int, metavar="S", help="override config seed")
    p.add_argument("command", choices=["star-check", "model-symbols", "torus", "all"])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_PASS
    try:
        cfg = load_config(args.config)
        if args.out is not None:
            cfg["out_dir"] = args.out
        if args.seed is not None:
            cfg["seed"] = args.seed
        dispatch = {
            "star-check": cmd_star_check,
            "model-symbols": cmd_model_symbols,
            "torus": cmd_torus,
            "all": cmd_all,
        }
        return dispatch[args.command](cfg, max(1, args.jobs), args.dry_run)
    except (ConfigError, PoleProximityError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ResourceLimitError, MemoryError) as exc:
        print(f"resource/convergence error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
