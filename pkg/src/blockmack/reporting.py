"""Deterministic run reports and figure rendering.

Reports are byte-identical for identical (inputs, seed, version): the body
is tab-delimited text or sorted-key JSON with no timestamps.  Wall-clock
timings only appear at verbosity >= 2 and are excluded from the default
output.  Figures are written as PNG files next to the delimited output
when requested.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import __version__


@dataclass
class Section:
    title: str
    rows: list[tuple[str, str]]


@dataclass
class Report:
    command: str
    params: list[tuple[str, str]]
    inputs: list[tuple[str, str, str]]          # (label, path, sha256)
    sections: list[Section] = field(default_factory=list)
    verdicts: list[tuple[str, bool]] = field(default_factory=list)
    timings: list[tuple[str, float]] = field(default_factory=list)
    verbosity: int = 1

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.verdicts)

    def add(self, title: str, rows: list[tuple[str, object]]):
        self.sections.append(Section(title, [(k, str(v)) for k, v in rows]))

    def verdict(self, name: str, ok: bool):
        self.verdicts.append((name, bool(ok)))

    def to_text(self) -> str:
        lines = [f"blockmack\t{__version__}", f"command\t{self.command}"]
        for k, v in self.params:
            lines.append(f"param\t{k}\t{v}")
        for label, path, digest in self.inputs:
            lines.append(f"input\t{label}\t{os.path.basename(path)}\t{digest}")
        for sec in self.sections:
            lines.append(f"section\t{sec.title}")
            for k, v in sec.rows:
                lines.append(f"\t{k}\t{v}")
        for name, ok in self.verdicts:
            lines.append(f"verdict\t{name}\t{'pass' if ok else 'FAIL'}")
        lines.append(f"overall\t{'pass' if self.ok else 'FAIL'}")
        if self.verbosity >= 2:
            for name, secs in self.timings:
                lines.append(f"timing\t{name}\t{secs:.3f}s")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        obj = {
            "tool": "blockmack",
            "version": __version__,
            "command": self.command,
            "params": dict(self.params),
            "inputs": [{"label": l, "file": os.path.basename(p), "sha256": d}
                       for l, p, d in self.inputs],
            "sections": [{"title": s.title, "rows": dict(s.rows)}
                         for s in self.sections],
            "verdicts": {name: ok for name, ok in self.verdicts},
            "overall": self.ok,
        }
        if self.verbosity >= 2:
            obj["timings"] = {name: round(secs, 3)
                              for name, secs in self.timings}
        return json.dumps(obj, indent=1, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_text()


# ---------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------

def _finish(fig, path: str):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def yoshida_figure(tags, dim_e: int, path: str):
    """Bar chart of summand-class dimensions, colored by projectivity."""
    fig, ax = plt.subplots(figsize=(5, 3))
    dims = [t.dimension for t in tags]
    colors = ["#2a7fff" if t.projective else "#bbbbbb" for t in tags]
    ax.bar(range(len(dims)), dims, color=colors)
    ax.set_xticks(range(len(dims)))
    ax.set_xticklabels([f"c{i}" for i in range(len(dims))])
    ax.set_ylabel("dimension")
    ax.set_title(f"summand classes of X (dim E = {dim_e}); "
                 "blue = projective")
    _finish(fig, path)


def nilprobe_figure(report, path: str):
    fig, ax = plt.subplots(figsize=(5, 3))
    series = report.radical_series
    kp = report.kp_radical_series
    n = max(len(series), len(kp))
    xs = range(n)
    ax.plot(range(len(series)), series, "o-", label="basic block algebra")
    ax.plot(range(len(kp)), kp, "s--", label="k[defect group]")
    ax.set_xticks(list(xs))
    ax.set_xlabel("radical power")
    ax.set_ylabel("dimension")
    verdict = "consistent" if report.consistent else "inconsistent"
    ax.set_title(f"nilpotency probe: {verdict}")
    ax.legend()
    _finish(fig, path)


def transport_figure(matches, n_left: int, n_right: int, path: str):
    """The class correspondence as a bipartite incidence image."""
    import numpy as np
    fig, ax = plt.subplots(figsize=(4, 4))
    grid = np.zeros((n_left, n_right))
    for i, j in matches:
        grid[i, j] = 1.0
    ax.imshow(grid, cmap="Blues", vmin=0, vmax=1)
    ax.set_xlabel("classes of Y")
    ax.set_ylabel("classes of X")
    ax.set_xticks(range(n_right))
    ax.set_yticks(range(n_left))
    ax.set_title("add(X) <-> add(Y) correspondence")
    _finish(fig, path)
