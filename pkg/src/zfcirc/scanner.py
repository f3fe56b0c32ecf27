"""Range scans: solve every canonical instance, aggregate bound tightness.

The JSON report is the source of truth; the CSV and the human table are
derived from it.  Rows never contain wall-clock data, so a single-threaded
re-run with the same configuration is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .circulant import CirculantSpec, format_spec, parse_spec
from .families import classify, mr_lower_bound, predict_z
from .isomorphism import connected_canonical_specs
from .linalg import rank, to_matrix
from .solver import Budget, bounds_report, solve_exact

_CSV_COLUMNS = [
    "spec", "n", "k", "connected",
    "lower_regular", "lower_bipartite", "lower_cycle",
    "upper_span", "upper_cycle", "best_lower", "best_upper",
    "z", "predicted_z", "families", "rank", "mr_bound",
]


@dataclass(frozen=True)
class ScanReport:
    config: dict
    rows: tuple[dict, ...]
    aggregates: dict

    def to_json(self) -> str:
        doc = {"config": self.config, "rows": list(self.rows), "aggregates": self.aggregates}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            flat = {col: row.get(col) for col in _CSV_COLUMNS}
            flat["families"] = ";".join(row["families"])
            writer.writerow({k: ("" if v is None else v) for k, v in flat.items()})
        return buf.getvalue()

    def to_table(self) -> str:
        headers = ["spec", "z", "best_lower", "best_upper", "predicted_z", "families", "rank", "mr_bound"]
        grid = [headers]
        for row in self.rows:
            grid.append([
                row["spec"], str(row["z"]), str(row["best_lower"]), str(row["best_upper"]),
                "-" if row["predicted_z"] is None else str(row["predicted_z"]),
                ",".join(row["families"]) or "-",
                str(row["rank"]), str(row["mr_bound"]),
            ])
        widths = [max(len(line[i]) for line in grid) for i in range(len(headers))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in grid]
        lines.insert(1, "  ".join("-" * w for w in widths))
        summary = self.aggregates
        lines.append("")
        lines.append(
            f"instances: {summary['instances']}  "
            f"z=best_lower: {summary['tight_best_lower']}  "
            f"z=best_upper: {summary['tight_best_upper']}"
        )
        return "\n".join(lines) + "\n"


def scan_row(spec_string: str, budget: Budget | None = None) -> dict:
    """All per-instance columns for one canonical spec."""
    spec = parse_spec(spec_string)
    bounds = bounds_report(spec)
    result = solve_exact(spec, budget=budget)
    z = result.z
    families = classify(spec)
    predicted = predict_z(spec)
    return {
        "spec": format_spec(spec),
        "n": spec.n,
        "k": spec.k,
        "connected": True,
        "lower_regular": bounds.lower_regular,
        "lower_bipartite": bounds.lower_bipartite,
        "lower_cycle": bounds.lower_cycle,
        "upper_span": bounds.upper_span,
        "upper_cycle": bounds.upper_cycle,
        "best_lower": bounds.best_lower,
        "best_upper": bounds.best_upper,
        "z": z,
        "witness": list(result.witness),
        "predicted_z": predicted,
        "families": [d.kind.value for d in families],
        "rank": rank(to_matrix(spec)),
        "mr_bound": mr_lower_bound(spec, z),
    }


def _aggregate(rows: list[dict]) -> dict:
    def tight(bound_key: str) -> int:
        return sum(1 for r in rows if r[bound_key] is not None and r["z"] == r[bound_key])

    applicable_cycle = sum(1 for r in rows if r["lower_cycle"] is not None)
    floor_rows = [r for r in rows if r["z"] == r["lower_bipartite"]]
    unmatched = [r["spec"] for r in floor_rows if not r["families"]]
    count = len(rows)
    return {
        "instances": count,
        "tight_lower_bipartite": tight("lower_bipartite"),
        "tight_lower_cycle": tight("lower_cycle"),
        "applicable_lower_cycle": applicable_cycle,
        "tight_upper_span": tight("upper_span"),
        "tight_upper_cycle": tight("upper_cycle"),
        "applicable_upper_cycle": sum(1 for r in rows if r["upper_cycle"] is not None),
        "tight_best_lower": tight("best_lower"),
        "tight_best_upper": tight("best_upper"),
        "fraction_tight_best_lower": (tight("best_lower") / count) if count else None,
        "fraction_tight_best_upper": (tight("best_upper") / count) if count else None,
        "floor_instances": len(floor_rows),
        "floor_unmatched_by_families": unmatched,
        "sandwich_violations": [
            r["spec"] for r in rows if not (r["best_lower"] <= r["z"] <= r["best_upper"])
        ],
    }


def run_scan(
    n_min: int,
    n_max: int,
    k_values: list[int],
    threads: int = 1,
    budget: Budget | None = None,
) -> ScanReport:
    """Solve every connected canonical representative in range.

    Rows are computed per spec (optionally by a process pool) and sorted by
    (n, k, spec) before aggregation, so worker count never changes content.
    """
    if n_min < 1 or n_max < n_min or not k_values:
        raise ValueError("scan range must be nonempty with positive n")
    spec_strings = []
    for n in range(n_min, n_max + 1):
        for k in sorted(set(k_values)):
            if k > n:
                continue
            for rep in connected_canonical_specs(n, k):
                spec_strings.append(format_spec(rep))
    if threads > 1:
        import multiprocessing as mp

        with mp.Pool(processes=threads) as pool:
            rows = pool.map(scan_row, spec_strings)
    else:
        rows = [scan_row(s, budget=budget) for s in spec_strings]
    rows.sort(key=lambda r: (r["n"], r["k"], r["spec"]))
    config = {
        "n_min": n_min,
        "n_max": n_max,
        "k_values": sorted(set(k_values)),
        "threads": threads,
    }
    return ScanReport(config=config, rows=tuple(rows), aggregates=_aggregate(rows))
