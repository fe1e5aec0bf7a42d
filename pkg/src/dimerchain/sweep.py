"""J2 sweeps at fixed J1, threshold bisection and mean-concurrence maximum."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .eigensolver import DEFAULT_SEED, METHODS, ground_state
from .entanglement import ConcurrenceReport, concurrence_report
from .hamiltonian import CouplingParams
from .spin_basis import validate_n_sites

CSV_COLUMNS = (
    "j2", "c12_signed", "c23_signed", "c12", "c23", "c_mean_signed", "c_mean",
    "e_gs", "gap", "energy_relation_residual", "degenerate",
)
FORMATS = ("csv", "json")
THRESHOLD_TOL = 1e-8
ARGMAX_TOL = 1e-7
_INVGOLD = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SweepConfig:
    n: int
    j1: float = 1.0
    j2_min: float = 0.0
    j2_max: float = 4.0
    steps: int = 81
    method: str = "auto"
    seed: int = DEFAULT_SEED
    output_format: str = "csv"
    output_path: str | None = None
    ratio: bool = False
    n_jobs: int = 1

    def __post_init__(self):
        validate_n_sites(self.n)
        if not math.isfinite(self.j1) or self.j1 <= 0:
            raise ValueError(f"j1 must be > 0 for a sweep, got {self.j1!r}")
        if not (math.isfinite(self.j2_min) and math.isfinite(self.j2_max)):
            raise ValueError("j2 range must be finite")
        if self.j2_min < 0 or self.j2_min >= self.j2_max:
            raise ValueError(f"need 0 <= j2_min < j2_max, got [{self.j2_min}, {self.j2_max}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.output_format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")

    def grid(self) -> np.ndarray:
        g = np.linspace(self.j2_min, self.j2_max, int(self.steps))
        return g * self.j1 if self.ratio else g


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[ConcurrenceReport]
    argmax_cmean: float | None = None
    thresholds: tuple[float | None, float | None] = (None, None)

    @property
    def j2(self) -> np.ndarray:
        return np.array([r.params.j2 for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([row_dict(r)[name] for r in self.rows], dtype=float)


def solve_point(n, j1, j2, method="auto", seed=DEFAULT_SEED) -> ConcurrenceReport:
    return concurrence_report(ground_state(CouplingParams(n, j1, j2), method, seed))


def _solve_indexed(args):
    i, n, j1, j2, method, seed = args
    return solve_point(n, j1, j2, method, seed + i)


def _signed(name, n, j1, method, seed):
    def f(j2):
        rep = solve_point(n, j1, j2, method, seed)
        if rep.degenerate:
            raise ValueError(f"degenerate ground state at j2={j2}")
        return getattr(rep, name)
    return f


def bisect_root(f, lo, hi, tol=THRESHOLD_TOL):
    """Root of ``f`` in [lo, hi] by bisection, or None without a sign change."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_threshold(n, j1, which, bracket, method="auto", seed=DEFAULT_SEED,
                   tol=THRESHOLD_TOL):
    """J2 at which the signed concurrence ``which`` ("c12" or "c23") crosses zero.

    Returns None when the signed concurrence does not change sign over
    ``bracket``.
    """
    if which not in ("c12", "c23"):
        raise ValueError(f"which must be 'c12' or 'c23', got {which!r}")
    lo, hi = sorted(map(float, bracket))
    if lo < 0:
        raise ValueError("bracket must lie in j2 >= 0")
    return bisect_root(_signed(f"{which}_signed", n, j1, method, seed), lo, hi, tol)


def golden_max(f, lo, hi, tol=ARGMAX_TOL):
    """Maximizer of a unimodal ``f`` on [lo, hi] by golden-section search."""
    a, b = lo, hi
    c = b - _INVGOLD * (b - a)
    d = a + _INVGOLD * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVGOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVGOLD * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _first_crossing(j2, values, rising):
    """First grid cell where ``values`` goes from <= 0 to > 0 (rising) or back."""
    for i in range(len(values) - 1):
        a, b = values[i], values[i + 1]
        if np.isnan(a) or np.isnan(b):
            continue
        if (rising and a <= 0 < b) or (not rising and a > 0 >= b):
            return j2[i], j2[i + 1]
    return None


def run_sweep(config: SweepConfig) -> SweepResult:
    """Solve every grid point, then refine the C_mean maximum and both thresholds.

    Degenerate points are kept as flagged rows and skipped by the refinement.
    """
    grid = config.grid()
    jobs = [(i, config.n, config.j1, float(j2), config.method, config.seed)
            for i, j2 in enumerate(grid)]
    if config.n_jobs > 1:
        with ProcessPoolExecutor(config.n_jobs) as pool:
            rows = list(pool.map(_solve_indexed, jobs))
    else:
        rows = [_solve_indexed(job) for job in jobs]
    result = SweepResult(config, rows)

    ok = [i for i, r in enumerate(rows) if not r.degenerate]
    if not ok:
        return result
    j2 = np.array([rows[i].params.j2 for i in ok])
    cmean = np.array([rows[i].c_mean_signed for i in ok])
    k = int(np.argmax(cmean))
    lo, hi = j2[max(k - 1, 0)], j2[min(k + 1, len(j2) - 1)]
    f = _signed("c_mean_signed", config.n, config.j1, config.method, config.seed)
    result.argmax_cmean = golden_max(f, lo, hi) if hi > lo else float(j2[k])

    thresholds = []
    for which, rising in (("c12", False), ("c23", True)):
        values = np.array([getattr(rows[i], f"{which}_signed") for i in ok])
        cell = _first_crossing(j2, values, rising)
        thresholds.append(None if cell is None else
                          find_threshold(config.n, config.j1, which, cell,
                                         config.method, config.seed))
    result.thresholds = tuple(thresholds)
    return result


def row_dict(report: ConcurrenceReport) -> dict:
    return {
        "j2": report.params.j2,
        "c12_signed": report.c12_signed,
        "c23_signed": report.c23_signed,
        "c12": report.c12,
        "c23": report.c23,
        "c_mean_signed": report.c_mean_signed,
        "c_mean": report.c_mean,
        "e_gs": report.energy,
        "gap": report.gap,
        "energy_relation_residual": report.energy_relation_residual,
        "degenerate": int(report.degenerate),
    }


def _fmt(value):
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def write_csv(result: SweepResult, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in result.rows:
        d = row_dict(report)
        writer.writerow([_fmt(d[c]) for c in CSV_COLUMNS])


def read_csv(stream) -> list[dict]:
    """Parse rows written by ``write_csv`` back into dictionaries."""
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [
        {k: (int(v) if k == "degenerate" else float(v)) for k, v in row.items()}
        for row in reader
    ]


def metadata(result: SweepResult) -> dict:
    cfg = result.config
    j2th_12, j2th_23 = result.thresholds
    return {
        "N": cfg.n,
        "J1": cfg.j1,
        "seed": cfg.seed,
        "method": cfg.method,
        "version": __version__,
        "argmax_cmean": result.argmax_cmean,
        "j2th_12": j2th_12,
        "j2th_23": j2th_23,
    }


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else str(value)
    return value


def write_json(result: SweepResult, stream) -> None:
    rows = [{k: _json_safe(v) for k, v in row_dict(r).items()} for r in result.rows]
    json.dump({"metadata": metadata(result), "rows": rows}, stream, indent=1)
    stream.write("\n")


def dumps(result: SweepResult, fmt: str = "csv") -> str:
    buf = io.StringIO()
    (write_csv if fmt == "csv" else write_json)(result, buf)
    return buf.getvalue()
