"""Trial records, grouped summaries and their CSV forms."""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import astuple, dataclass, fields
from pathlib import Path

TRIAL_HEADER = ("experiment", "case", "group", "s", "m", "trial", "seed",
                "rel_l2", "rel_l1", "success", "iterations", "wall_ms")
SUMMARY_HEADER = ("experiment", "case", "group", "pooled", "s", "m", "n",
                  "mean_rel_l2", "mean_rel_l1", "success_rate", "wilson_lo", "wilson_hi")
POOLED = "all"


@dataclass(frozen=True)
class TrialRecord:
    experiment: str
    case: str
    group: str
    s: int
    m: int
    trial: int
    seed: int
    rel_l2: float
    rel_l1: float
    success: bool
    iterations: int
    wall_ms: float

    def sort_key(self):
        return (self.case, self.group, self.s, self.m, self.trial)


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    case: str
    group: str
    pooled: bool
    s: int
    m: int
    n: int
    mean_rel_l2: float
    mean_rel_l1: float
    success_rate: float
    wilson_lo: float
    wilson_hi: float


@dataclass
class SummaryTable:
    """Means and success rates keyed by ``(case, group, s, m)``.

    Rows with ``pooled=True`` merge every group of a case (the "all sets"
    series) and are not counted again in :meth:`total`.
    """

    experiment: str
    rows: list

    def get(self, case, group, s=None, m=None) -> SummaryRow:
        for r in self.rows:
            if r.case == case and r.group == group and (s is None or r.s == s) and (m is None or r.m == m):
                return r
        raise KeyError((case, group, s, m))

    def series(self, case, group):
        return [r for r in self.rows if r.case == case and r.group == group]

    def total(self) -> int:
        return sum(r.n for r in self.rows if not r.pooled)

    def keys(self):
        return sorted({(r.case, r.group) for r in self.rows})


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for ``k`` successes in ``n`` trials."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    den = 1.0 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


def _row(experiment, case, group, pooled, s, m, recs) -> SummaryRow:
    n = len(recs)
    k = sum(1 for r in recs if r.success)
    lo, hi = wilson_interval(k, n)
    # math.fsum keeps the means independent of summation order
    return SummaryRow(experiment, case, group, pooled, s, m, n,
                      math.fsum(r.rel_l2 for r in recs) / n, math.fsum(r.rel_l1 for r in recs) / n,
                      k / n, lo, hi)


def summarize(experiment: str, records, pooled_cases=()) -> SummaryTable:
    """Group records by ``(case, group, s, m)``.

    For each case in ``pooled_cases`` an extra pooled row per ``(s, m)``
    covers all of that case's groups.
    """
    by_key = defaultdict(list)
    pooled = defaultdict(list)
    for r in records:
        by_key[(r.case, r.group, r.s, r.m)].append(r)
        if r.case in pooled_cases:
            pooled[(r.case, r.s, r.m)].append(r)
    rows = [_row(experiment, c, g, False, s, m, v) for (c, g, s, m), v in sorted(by_key.items())]
    rows += [_row(experiment, c, POOLED, True, s, m, v) for (c, s, m), v in sorted(pooled.items())]
    rows.sort(key=lambda r: (r.case, r.group, r.s, r.m))
    return SummaryTable(experiment, rows)


# --- CSV ---------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _open(path, mode):
    path = Path(path)
    try:
        if "w" in mode:
            path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, mode, newline="")
    except OSError as exc:
        raise OSError(f"cannot open {path}: {exc}") from exc


def write_trials_csv(records, path) -> None:
    with _open(path, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRIAL_HEADER)
        for r in sorted(records, key=TrialRecord.sort_key):
            w.writerow([_fmt(v) for v in astuple(r)])


def read_trials_csv(path) -> list[TrialRecord]:
    with _open(path, "r") as fh:
        rd = csv.reader(fh)
        if tuple(next(rd)) != TRIAL_HEADER:
            raise ValueError(f"{path}: unexpected trial-record header")
        out = []
        for row in rd:
            e, c, g, s, m, t, seed, l2, l1, ok, it, ms = row
            out.append(TrialRecord(e, c, g, int(s), int(m), int(t), int(seed), float(l2), float(l1),
                                   ok == "1", int(it), float(ms)))
        return out


def emit_csv(table: SummaryTable, path) -> None:
    """Write a summary table; an empty table gives a header-only file."""
    with _open(path, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in table.rows:
            w.writerow([_fmt(v) for v in astuple(r)])


def read_summary_csv(path) -> SummaryTable:
    types = [f.type for f in fields(SummaryRow)]
    conv = {"str": str, "int": int, "float": float, "bool": lambda v: v == "1"}
    with _open(path, "r") as fh:
        rd = csv.reader(fh)
        if tuple(next(rd)) != SUMMARY_HEADER:
            raise ValueError(f"{path}: unexpected summary header")
        rows = [SummaryRow(*(conv[t](v) for t, v in zip(types, row))) for row in rd]
    experiment = rows[0].experiment if rows else ""
    return SummaryTable(experiment, rows)
