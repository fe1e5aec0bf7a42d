"""Built-in self-check: every numeric path against its independent reference."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import analytic4 as a4
from . import entanglement as ent
from . import hamiltonian as ham
from .eigensolver import DEFAULT_SEED, dense_ground, full_spectrum, ground_state, lanczos_ground
from .hamiltonian import CouplingParams
from .spin_basis import enumerate_sector, flip_permutation, sector_permutation, translate_bits

DENSE_VERIFY_CAP = 12
BRUTE_FORCE_CAP = 10


@dataclass(frozen=True)
class CheckResult:
    name: str
    n: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  N={self.n:<3d} {self.name:<28s} "
                f"max_dev={self.max_deviation:.3e}  tol={self.tolerance:.1e}")


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, n, deviations, tol):
        dev = float(np.max(np.abs(deviations))) if np.size(deviations) else 0.0
        self.checks.append(CheckResult(name, n, dev, tol))

    def format(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _analytic4(report, points):
    dev = {"analytic_spectrum": [], "analytic_ground_energy": [], "analytic_concurrence": [],
           "analytic_c_mean": []}
    for j1, j2 in points:
        p = CouplingParams(4, j1, j2)
        dev["analytic_spectrum"].append(
            full_spectrum(p).eigenvalues - a4.full_spectrum4(j1, j2).values())
        gs = ground_state(p)
        dev["analytic_ground_energy"].append(gs.energy - a4.ground_energy4(j1, j2))
        rep = ent.concurrence_report(gs)
        dev["analytic_concurrence"].append([rep.c12_signed - a4.c12_analytic(j1, j2),
                                            rep.c23_signed - a4.c23_analytic(j1, j2)])
        dev["analytic_c_mean"].append(rep.c_mean_signed - a4.c_mean_analytic(j1, j2))
    for name, values in dev.items():
        report.add(name, 4, np.concatenate([np.ravel(v) for v in values]), 1e-10)


def _symmetries(report, n, p):
    flip_dev, swap_dev = [], []
    for r in range(n + 1):
        sector = enumerate_sector(n, r)
        m = ham.dense_matrix(p, sector)
        mirror = enumerate_sector(n, n - r)
        f = flip_permutation(sector, mirror)
        flip_dev.append(np.ravel(ham.dense_matrix(p, mirror)[np.ix_(f, f)] - m))
        t = sector_permutation(sector, lambda s: translate_bits(s, n, 2))
        swap_dev.append(np.ravel(m[np.ix_(t, t)] - m))
    report.add("spin_flip_commutation", n, np.concatenate(flip_dev), 1e-12)
    report.add("pair_swap_commutation", n, np.concatenate(swap_dev), 1e-12)


def verify(n_list, seed: int = DEFAULT_SEED, points: int = 5) -> VerificationReport:
    """Run the verification bundle for each ring size in ``n_list``.

    Failures are recorded in the report, never raised.
    """
    rng = np.random.default_rng(seed)
    report = VerificationReport()
    for n in n_list:
        if n > DENSE_VERIFY_CAP:
            raise ValueError(f"verification uses dense oracles, N must be <= {DENSE_VERIFY_CAP}")
        grid = [(1.0, 1.0), (1.0, 0.0)] + [tuple(rng.uniform(0.05, 4.0, 2)) for _ in range(points)]
        if n == 4:
            _analytic4(report, grid)
        _symmetries(report, n, CouplingParams(n, *grid[2]))

        relation, wootters, pair, lanczos = [], [], [], []
        for j1, j2 in grid:
            p = CouplingParams(n, j1, j2)
            gs = ground_state(p, "dense")
            rep = ent.concurrence_report(gs)
            relation.append(rep.energy_relation_residual)
            for b in ham.bond_list(p):
                wootters.append(ent.wootters_concurrence(gs, b.site_a, b.site_b)
                                - max(0.0, ent.signed_concurrence(gs, b.site_a, b.site_b)))
            pair.append(ent.signed_concurrence(gs, 1, 2) - ent.signed_concurrence(gs, 3, 4))
            if n > 4:
                lz = lanczos_ground(p, gs.sector, seed)
                lanczos.append(lz.energy - gs.energy)
        report.add("energy_relation", n, relation, 1e-9)
        report.add("wootters_equivalence", n, wootters, 1e-9)
        report.add("pair_swap_expectation", n, pair, 1e-9)
        if lanczos:
            report.add("lanczos_vs_dense", n, lanczos, 1e-9)

        fh_params = CouplingParams(n, *grid[2])
        report.add("feynman_hellmann", n, [ent.feynman_hellmann_check(fh_params, 1e-5, "dense")],
                   1e-6)
        if n <= BRUTE_FORCE_CAP:
            p = CouplingParams(n, 1.0, 1.0)
            brute = np.linalg.eigvalsh(ham.full_space_hamiltonian(p))[0]
            report.add("ground_energy_bruteforce", n,
                       [dense_ground(p, enumerate_sector(n, n // 2)).energy - brute], 1e-10)
    return report
