"""Monte Carlo and deterministic experiments on polynomial lemniscates.

Random trials draw the zeros as i.i.d. equilibrium samples of a compact
set, count the sublevel components, and aggregate ratios count/degree.
Each trial owns an RNG stream derived from (seed, trial index), so the
results cannot depend on execution order and a run is reproducible
byte-for-byte from its config.  Trials whose counting margin is
ambiguous are excluded from the mean and reported separately; the
maximum observed ratio is re-verified against the grid counter before
it is reported as a witness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .constructions import ehp_polynomial, cluster_construction
from .lemniscate import (
    ComponentReport,
    count_by_critical_values,
    count_by_grid,
    isolated_component_test,
)
from .polycore import MonicPolynomial
from .potential import (
    CompactSetModel,
    capacity_estimate,
    equilibrium_sample,
    leja_points,
    set_from_json_dict,
    set_json_dict,
)
from .rootfind import critical_points

EXPERIMENT_KINDS = (
    "mean_ratio",
    "fekete_lemniscate",
    "cluster_lower_bound",
    "capacity_sweep",
    "ehp_census",
)

TRIALS_CSV_HEADER = "trial,seed,count,ratio,isolated_fraction,method,margin,ambiguous"
CENSUS_CSV_HEADER = "n,count,ambiguous,c_n,delta_n"


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run and where to put the artifacts."""

    kind: str
    K: CompactSetModel
    degree: int
    trials: int = 1
    seed: int = 0
    csv_path: str | None = None
    summary_path: str | None = None
    svg_path: str | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.degree < 2:
            raise ValueError("degree must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def config_json_dict(cfg: ExperimentConfig) -> dict:
    d = {
        "kind": cfg.kind,
        "set": set_json_dict(cfg.K),
        "degree": cfg.degree,
        "trials": cfg.trials,
        "seed": cfg.seed,
    }
    for key in ("csv_path", "summary_path", "svg_path"):
        value = getattr(cfg, key)
        if value is not None:
            d[key] = value
    return d


def config_from_json_dict(d: dict) -> ExperimentConfig:
    return ExperimentConfig(
        kind=d["kind"],
        K=set_from_json_dict(d["set"]),
        degree=int(d["degree"]),
        trials=int(d.get("trials", 1)),
        seed=int(d.get("seed", 0)),
        csv_path=d.get("csv_path"),
        summary_path=d.get("summary_path"),
        svg_path=d.get("svg_path"),
    )


@dataclass(frozen=True)
class TrialRecord:
    """One random-lemniscate trial: the count and its bookkeeping."""

    trial: int
    seed: int
    count: int
    ratio: float
    isolated_fraction: float
    method: str
    margin: float
    ambiguous: bool


@dataclass(frozen=True)
class TrialSummary:
    """Aggregate of a trial batch; ambiguous trials sit outside the stats.

    mean_ratio and standard_error are computed over the unambiguous
    records only.  max_ratio is the largest kept ratio and doubles as a
    lower-bound witness for the best achievable count at this degree:
    the witness polynomial is reproducible from witness_seed.
    """

    degree: int
    records: tuple[TrialRecord, ...]
    mean_ratio: float
    standard_error: float
    max_ratio: float
    witness_trial: int
    witness_seed: int

    def __post_init__(self):
        lo = 1.0 / self.degree
        for r in self.records:
            if not lo - 1e-15 <= r.ratio <= 1.0 + 1e-15:
                raise ValueError(
                    f"trial {r.trial} ratio {r.ratio} outside [1/n, 1]")

    @property
    def kept(self) -> tuple[TrialRecord, ...]:
        return tuple(r for r in self.records if not r.ambiguous)

    @property
    def ambiguous_trials(self) -> tuple[int, ...]:
        return tuple(r.trial for r in self.records if r.ambiguous)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.kept])


def trial_seed(seed: int, trial: int) -> int:
    """Derive the independent RNG stream for one trial."""
    return int(np.random.SeedSequence((seed, trial)).generate_state(1)[0])


def _sample_polynomial(K: CompactSetModel, n: int, seed: int) -> MonicPolynomial:
    return MonicPolynomial(equilibrium_sample(K, n, seed).points)


def random_lemniscate_trial(K: CompactSetModel, n: int,
                            seed: int) -> ComponentReport:
    """Draw n i.i.d. equilibrium zeros and count the sublevel components.

    Counting goes through the critical values; when the margin is
    ambiguous the grid counter takes over, but the report stays flagged
    ambiguous and keeps the critical-value margin so callers can filter.
    """
    p = _sample_polynomial(K, n, seed)
    cv = count_by_critical_values(p)
    if not cv.ambiguous:
        return cv
    gr = count_by_grid(p)
    return ComponentReport(gr.count, "grid", cv.margin, True)


def min_pairwise_distance(points) -> float:
    """Exact minimum distance over all pairs (quadratic, fine at desk scale)."""
    z = np.asarray(points, dtype=complex).ravel()
    if z.size < 2:
        raise ValueError("need at least two points")
    iu, ju = np.triu_indices(z.size, k=1)
    return float(np.min(np.abs(z[iu] - z[ju])))


def _nearest_neighbor_distances(z: np.ndarray) -> np.ndarray:
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    return np.min(d, axis=1)


def isolated_zero_fraction(p: MonicPolynomial) -> float:
    """Fraction of zeros each alone in its component, by the ring test.

    Each zero is probed on the circle of half its nearest-neighbor
    distance; a repeated zero shares a point with its twin and counts
    as not isolated outright.
    """
    nn = _nearest_neighbor_distances(p.zeros)
    hits = 0
    for j in range(p.degree):
        if nn[j] > 0.0 and isolated_component_test(p, j, 0.5 * nn[j]):
            hits += 1
    return hits / p.degree


def estimate_mean_component_ratio(cfg: ExperimentConfig) -> TrialSummary:
    """Run cfg.trials random-lemniscate trials and aggregate the ratios.

    The max-ratio trial is recomputed and re-counted by the grid before
    the summary is built; a mismatch means the reported witness would
    not be trustworthy, so it raises instead of shipping the number.
    """
    n = cfg.degree
    records = []
    for t in range(cfg.trials):
        ts = trial_seed(cfg.seed, t)
        p = _sample_polynomial(cfg.K, n, ts)
        cv = count_by_critical_values(p)
        if cv.ambiguous:
            rep = ComponentReport(count_by_grid(p).count, "grid",
                                  cv.margin, True)
        else:
            rep = cv
        records.append(TrialRecord(
            trial=t,
            seed=ts,
            count=rep.count,
            ratio=rep.count / n,
            isolated_fraction=isolated_zero_fraction(p),
            method=rep.method,
            margin=rep.margin,
            ambiguous=rep.ambiguous,
        ))

    kept = [r for r in records if not r.ambiguous]
    if not kept:
        raise RuntimeError("every trial was ambiguous; nothing to aggregate")
    ratios = np.array([r.ratio for r in kept])
    mean = float(np.mean(ratios))
    se = float(np.std(ratios, ddof=1) / math.sqrt(ratios.size)) \
        if ratios.size > 1 else 0.0

    best = max(kept, key=lambda r: r.ratio)
    witness = _sample_polynomial(cfg.K, n, best.seed)
    check = count_by_grid(witness)
    if check.count != best.count:
        raise RuntimeError(
            f"witness trial {best.trial} failed grid re-verification: "
            f"critical values gave {best.count}, grid gave {check.count}")

    return TrialSummary(
        degree=n,
        records=tuple(records),
        mean_ratio=mean,
        standard_error=se,
        max_ratio=best.ratio,
        witness_trial=best.trial,
        witness_seed=best.seed,
    )


@dataclass(frozen=True)
class FeketeLemniscateResult:
    """Greedy-extremal zeros: the count plus the growth certificates.

    derivative_log_abs[j] is log|p'(z_j)|, to be held against
    (n-1) * log(capacity); min_spacing against the 1/n^2 floor expected
    of extremal configurations on smooth sets.
    """

    report: ComponentReport
    capacity: float
    zeros: np.ndarray = field(repr=False)
    derivative_log_abs: np.ndarray = field(repr=False)
    derivative_log_bound: float
    min_spacing: float
    spacing_floor: float


def fekete_lemniscate_experiment(K: CompactSetModel,
                                 n: int) -> FeketeLemniscateResult:
    """Lemniscate of the degree-n Leja polynomial of a set with capacity > 1.

    Counts components (both counters must agree), tests every zero for
    isolation, and records log|p'| at each zero together with the
    capacity-power bound it is supposed to dominate.
    """
    if n < 2:
        raise ValueError("need degree >= 2")
    c_est = capacity_estimate(K, max(n, 8))
    if c_est <= 1.0:
        raise ValueError(
            f"capacity estimate {c_est:.4f} <= 1; growing lemniscates "
            "need a set of capacity above one")
    z = leja_points(K, n).points
    p = MonicPolynomial(z)
    cv = count_by_critical_values(p)
    gr = count_by_grid(p)
    if cv.count != gr.count and not cv.ambiguous:
        raise RuntimeError(
            f"counters disagree on the Leja polynomial: {cv.count} vs {gr.count}")
    report_count = gr.count if cv.ambiguous else cv.count

    nn = _nearest_neighbor_distances(z)
    isolated = tuple(
        bool(nn[j] > 0.0 and isolated_component_test(p, j, 0.5 * nn[j]))
        for j in range(n))
    report = ComponentReport(report_count, cv.method if not cv.ambiguous
                             else "grid", cv.margin, cv.ambiguous, isolated)

    # log|p'(z_j)| = sum_{k != j} log|z_j - z_k| for simple zeros
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, 1.0)
    dlog = np.sum(np.log(d), axis=1)

    return FeketeLemniscateResult(
        report=report,
        capacity=c_est,
        zeros=z,
        derivative_log_abs=dlog,
        derivative_log_bound=(n - 1) * math.log(c_est),
        min_spacing=min_pairwise_distance(z),
        spacing_floor=1.0 / n ** 2,
    )


@dataclass(frozen=True)
class CensusRow:
    n: int
    count: int
    ambiguous: bool
    c_n: float
    delta_n: float


def ehp_census(n_min: int = 3, n_max: int = 100,
               strict: bool = True) -> tuple[CensusRow, ...]:
    """Sweep the double-zero-at-1 family and tabulate count, c_n, delta_n.

    c_n is the smallest nonzero critical value; delta_n = c_n^(-1/n) is
    the shrink factor that renormalizes it to 1.  With strict=True the
    structural facts are asserted: count = n-1 wherever the margin is
    clean, c_n in (1, 32], delta_n in (0, 1) with an increasing trend.
    Violations are collected and raised together.
    """
    if not 3 <= n_min <= n_max <= 100:
        raise ValueError("census range must satisfy 3 <= n_min <= n_max <= 100")
    rows = []
    violations = []
    for n in range(n_min, n_max + 1):
        p = ehp_polynomial(n)
        rep = count_by_critical_values(p)
        cs = critical_points(p)
        finite = cs.log_values[np.isfinite(cs.log_values)]
        c_n = math.exp(float(np.min(finite)))
        delta = c_n ** (-1.0 / n)
        rows.append(CensusRow(n, rep.count, rep.ambiguous, c_n, delta))
        if not rep.ambiguous and rep.count != n - 1:
            violations.append(f"n={n}: count {rep.count} != {n - 1}")
        if not 1.0 < c_n <= 32.0:
            violations.append(f"n={n}: c_n {c_n:.6g} outside (1, 32]")
        if not 0.0 < delta < 1.0:
            violations.append(f"n={n}: delta_n {delta:.6g} outside (0, 1)")
    if len(rows) >= 3:
        ns = np.array([r.n for r in rows], dtype=float)
        ds = np.array([r.delta_n for r in rows])
        slope = np.polyfit(ns, ds, 1)[0]
        if slope <= 0:
            violations.append(f"delta_n trend slope {slope:.3g} is not increasing")
    if strict and violations:
        raise RuntimeError("census violations: " + "; ".join(violations))
    return tuple(rows)


def small_ball_spot_check(p: MonicPolynomial, decay_rate: float = 0.1,
                          resolution: int = 256, level: float = 1.0) -> bool:
    """Check the sublevel set clings to the zeros at exponential radius.

    Rasters {log|p| < log level} on the bounding square of the zeros and
    tests that every inside cell center sits within
    exp(-decay_rate * n) + one cell diagonal of some zero.  A raster
    check, not a proof; the padding absorbs discretization.
    """
    z = p.zeros
    n = p.degree
    lo, hi = np.min(z.real), np.max(z.real)
    lo2, hi2 = np.min(z.imag), np.max(z.imag)
    pad = 0.25 + 0.05 * max(hi - lo, hi2 - lo2)
    xs = np.linspace(lo - pad, hi + pad, resolution)
    ys = np.linspace(lo2 - pad, hi2 + pad, resolution)
    cell = math.hypot(xs[1] - xs[0], ys[1] - ys[0])
    radius = math.exp(-decay_rate * n) + cell
    log_level = math.log(level)
    for y in ys:
        row = xs + 1j * y
        inside = p.log_abs(row) < log_level
        if not inside.any():
            continue
        dist = np.min(np.abs(row[inside, None] - z[None, :]), axis=1)
        if np.any(dist > radius):
            return False
    return True


def cluster_lower_bound_experiment(cfg: ExperimentConfig) -> list[dict]:
    """Sweep the cluster fraction and record the component ratio of each.

    For fractions a in {0.1, ..., 0.9}: n1 = round(a * n) zeros pile on
    one boundary point of K, the rest are equilibrium samples; the count
    of the resulting lemniscate is a constructive lower bound for the
    best ratio at this degree.
    """
    from .potential import boundary_samples

    n = cfg.degree
    anchor = complex(boundary_samples(cfg.K, 64)[0])
    out = []
    for i, a in enumerate(np.linspace(0.1, 0.9, 9)):
        n1 = max(1, int(round(a * n)))
        n2 = n - n1
        if n2 < 0:
            continue
        p = cluster_construction(anchor, cfg.K, n1, n2,
                                 trial_seed(cfg.seed, i))
        rep = count_by_critical_values(p)
        out.append({
            "fraction": float(a),
            "n1": n1,
            "n2": n2,
            "count": rep.count,
            "ratio": rep.count / n,
            "ambiguous": rep.ambiguous,
        })
    return out


def capacity_sweep_experiment(cfg: ExperimentConfig) -> list[dict]:
    """Capacity estimates at doubling Leja counts up to cfg.degree."""
    out = []
    n = 8
    while n <= max(cfg.degree, 8):
        out.append({
            "n": n,
            "calibrated": capacity_estimate(cfg.K, n),
            "raw": capacity_estimate(cfg.K, n, calibrated=False),
        })
        n *= 2
    return out


def save_trials_csv(path, summary: TrialSummary) -> None:
    lines = [TRIALS_CSV_HEADER]
    for r in summary.records:
        lines.append(
            f"{r.trial},{r.seed},{r.count},{r.ratio:.12g},"
            f"{r.isolated_fraction:.12g},{r.method},{r.margin:.12g},"
            f"{str(r.ambiguous).lower()}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def save_summary_json(path, cfg: ExperimentConfig,
                      summary: TrialSummary) -> None:
    doc = {
        "config": config_json_dict(cfg),
        "degree": summary.degree,
        "trials": len(summary.records),
        "kept_trials": len(summary.kept),
        "ambiguous_trials": list(summary.ambiguous_trials),
        "mean_ratio": summary.mean_ratio,
        "standard_error": summary.standard_error,
        "max_ratio": summary.max_ratio,
        "witness_trial": summary.witness_trial,
        "witness_seed": summary.witness_seed,
        "mean_isolated_fraction": float(np.mean(
            [r.isolated_fraction for r in summary.kept])),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def census_csv(rows) -> str:
    lines = [CENSUS_CSV_HEADER]
    for r in rows:
        lines.append(f"{r.n},{r.count},{str(r.ambiguous).lower()},"
                     f"{r.c_n:.12g},{r.delta_n:.12g}")
    return "\n".join(lines) + "\n"
