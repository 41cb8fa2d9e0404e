"""Scheme-comparison reports: direct coding vs CM1..CM4 per sequence."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from statistics import mean

from .codec import Scheme, direct_baseline_bytes, encode
from .model import Frame, Sequence

SCHEMES = tuple(Scheme)
COLUMNS = (
    "name",
    "frames",
    "resolution",
    "per_frame",
    "skip",
    "source",
    "direct",
    "cm1",
    "cm2",
    "cm3",
    "cm4",
    "cm1_reduction",
    "cm2_reduction",
    "cm3_reduction",
    "cm4_reduction",
)


def resample(seq: Sequence, skip: int) -> Sequence:
    """Keep every ``(skip + 1)``-th frame starting at 0 and renumber from 0."""
    if skip < 0:
        raise ValueError("frame skip must be >= 0")
    kept = seq.frames[:: skip + 1]
    return Sequence(seq.width, seq.height, tuple(Frame(i, f.skeletons) for i, f in enumerate(kept)))


def reduction(size: int, direct: int) -> float:
    """Percent saved relative to direct coding; negative when larger."""
    return (1.0 - size / direct) * 100.0 if direct else 0.0


@dataclass(frozen=True)
class ReportRow:
    name: str
    frames: int
    width: int
    height: int
    min_per_frame: int
    max_per_frame: int
    skip: int
    source: str
    direct: int
    sizes: tuple[int, int, int, int]
    dual_eligible: int = 0

    @property
    def resolution(self) -> str:
        return f"{self.width}x{self.height}"

    @property
    def per_frame(self) -> str:
        if self.min_per_frame == self.max_per_frame:
            return str(self.min_per_frame)
        return f"{self.min_per_frame}-{self.max_per_frame}"

    @property
    def reductions(self) -> tuple[float, ...]:
        return tuple(reduction(s, self.direct) for s in self.sizes)


def build_row(name: str, seq: Sequence, skip: int = 0, source: str = "GT") -> ReportRow:
    """Code ``seq`` (resampled by ``skip``) with every scheme and collect sizes in bytes.

    ``frames`` and the per-frame count describe the input before resampling.
    """
    coded = resample(seq, skip)
    sizes = []
    dual = 0
    for scheme in SCHEMES:
        result = encode(coded, scheme)
        sizes.append(len(result.data))
        if scheme is Scheme.CM4:
            dual = sum(d.dual_eligible for frame in result.decisions for d in frame)
    counts = [len(f.skeletons) for f in seq.frames] or [0]
    return ReportRow(
        name=name,
        frames=len(seq.frames),
        width=seq.width,
        height=seq.height,
        min_per_frame=min(counts),
        max_per_frame=max(counts),
        skip=skip,
        source=source,
        direct=direct_baseline_bytes(coded),
        sizes=tuple(sizes),
        dual_eligible=dual,
    )


def average_reductions(rows: list[ReportRow]) -> tuple[float, ...]:
    return tuple(mean(r.reductions[i] for r in rows) for i in range(len(SCHEMES)))


def to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow(
            [r.name, r.frames, r.resolution, r.per_frame, r.skip, r.source, r.direct, *r.sizes]
            + [f"{x:.2f}" for x in r.reductions]
        )
    if rows:
        writer.writerow(["Average", "", "", "", "", "", "", "", "", "", ""] + [f"{x:.2f}" for x in average_reductions(rows)])
    return buf.getvalue()


def _pct(red: float) -> str:
    return f"{-red:.1f}%"


def to_markdown(rows: list[ReportRow]) -> str:
    """Comparison table; the smallest scheme size in each row is bold."""
    head = ["Seq.", "Frames", "Resolution", "#/Frame", "Frame Skip", "Source", "Direct (B)"]
    head += [f"{s.name} (B)" for s in SCHEMES]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        best = min(r.sizes)
        cells = []
        for size, red in zip(r.sizes, r.reductions):
            cell = f"{size} ({_pct(red)})"
            cells.append(f"**{cell}**" if size == best else cell)
        lines.append(
            "| "
            + " | ".join([r.name, str(r.frames), r.resolution, r.per_frame, str(r.skip), r.source, str(r.direct)] + cells)
            + " |"
        )
    if rows:
        avg = average_reductions(rows)
        best = max(avg)
        cells = [f"**{_pct(a)}**" if a == best else _pct(a) for a in avg]
        lines.append("| " + " | ".join(["Average", "", "", "", "", "", "-"] + cells) + " |")
    return "\n".join(lines) + "\n"
