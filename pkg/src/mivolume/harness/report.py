"""CSV / JSON emission of experiment records, plus plot-ready data and figures."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

from .experiments import ExperimentRecord


def _sorted(records: Iterable) -> list:
    return sorted(records, key=lambda r: (r.instance_id, getattr(r, "quantity_name", "")))


def to_csv(records: Iterable, fields: Sequence[str] = ExperimentRecord.FIELDS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in _sorted(records):
        w.writerow(r.row())
    return buf.getvalue()


def to_json(records: Iterable) -> str:
    return json.dumps([r.row() for r in _sorted(records)], indent=2) + "\n"


def render(records: Iterable, fmt: str = "csv", fields: Sequence[str] = ExperimentRecord.FIELDS) -> str:
    records = list(records)
    if fmt == "csv":
        return to_csv(records, fields)
    if fmt == "json":
        return to_json(records)
    raise ValueError(f"unknown format {fmt!r}")


def read_records(path: str | Path) -> list[ExperimentRecord]:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        rows = json.loads(text)
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
    return [ExperimentRecord.from_row(r) for r in rows]


def plot_data(records: Iterable[ExperimentRecord], quantity: str = "worst_fraction") -> str:
    """Whitespace-separated blocks ``k measured bound``, one block per family, for gnuplot."""
    groups = defaultdict(list)
    for r in records:
        if r.quantity_name.endswith(quantity):
            family = r.instance_id.split("[")[0]
            groups[(family, r.n, r.d)].append(r)
    out = []
    for (family, n, d), rs in sorted(groups.items()):
        out.append(f"# {family} n={n} d={d}\n# k measured bound\n")
        for r in sorted(rs, key=lambda r: r.k_or_width):
            bound = "nan" if r.paper_bound is None else repr(r.paper_bound)
            out.append(f"{r.k_or_width!r} {r.measured!r} {bound}\n")
        out.append("\n\n")
    return "".join(out)


def plot_figure(records: Iterable[ExperimentRecord], path: str | Path, quantity: str = "worst_fraction") -> Path:
    """Fraction-vs-k figure; matplotlib is imported only here."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    groups = defaultdict(list)
    for r in records:
        if r.quantity_name.endswith(quantity):
            groups[(r.instance_id.split("[")[0], r.n, r.d)].append(r)
    fig, ax = plt.subplots(figsize=(6, 4))
    for (family, n, d), rs in sorted(groups.items()):
        rs = sorted(rs, key=lambda r: r.k_or_width)
        ax.plot([r.k_or_width for r in rs], [r.measured for r in rs], "o-", label=f"{family} n={n} d={d}")
    ax.axhline(1 / 2.718281828459045, color="grey", ls="--", lw=1, label="1/e")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("k (radius or projection length)")
    ax.set_ylabel("worst halfspace fraction")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
