"""Histogram CSV input, JSON run reports and SVG boundary plots."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from ssmodes.detection import DetectionConfig, ModeSet


class CsvError(ValueError):
    pass


def parse_histogram_csv(text: str) -> np.ndarray:
    """Parse ``count`` or ``bin,count`` lines; ``#`` comments and blanks are skipped."""
    counts: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) > 2:
            raise CsvError(f"line {lineno}: expected 'count' or 'bin,count', got {line!r}")
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise CsvError(f"line {lineno}: non-numeric token in {line!r}") from None
        if len(values) == 2:
            b = values[0]
            if b != int(b) or int(b) != len(counts):
                raise CsvError(f"out-of-order or missing bin at line {lineno}")
        count = values[-1]
        if not math.isfinite(count) or count < 0:
            raise CsvError(f"line {lineno}: count must be finite and nonnegative, got {fields[-1]}")
        counts.append(count)
    return np.array(counts, dtype=np.float64)


def _sig9(x):
    if x is None:
        return None
    x = float(x)
    return float(f"{x:.9g}") if math.isfinite(x) else None


@dataclass
class CurveRecord:
    position: int
    birth_step: int
    length: int
    meaningful: bool


@dataclass
class RunReport:
    input: str
    n_bins: int
    method: str
    epsilon: float | None
    threshold_T: float | None
    curves: list[CurveRecord]
    boundaries: list[int]
    modes: list[list[int]]
    runtime_ms: float
    config: dict = field(default_factory=dict)

    @classmethod
    def from_modes(cls, modes: ModeSet, cfg: DetectionConfig, source: str, runtime_ms: float) -> "RunReport":
        thr = modes.threshold
        curves = [CurveRecord(c.position, c.birth_step, c.length, bool(f))
                  for c, f in zip(modes.curves, modes.meaningful)]
        return cls(
            input=source,
            n_bins=modes.n_bins,
            method=cfg.method,
            epsilon=_sig9(thr.epsilon) if thr else None,
            threshold_T=_sig9(thr.T) if thr else None,
            curves=curves,
            boundaries=[int(b) for b in modes.boundaries],
            modes=[[int(a), int(b)] for a, b in modes.modes],
            runtime_ms=_sig9(runtime_ms),
            config=asdict(cfg),
        )

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "n_bins": self.n_bins,
            "method": self.method,
            "epsilon": self.epsilon,
            "threshold_T": self.threshold_T,
            "curves": [asdict(c) for c in self.curves],
            "boundaries": self.boundaries,
            "modes": self.modes,
            "runtime_ms": self.runtime_ms,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        d = dict(d)
        d["curves"] = [CurveRecord(**c) for c in d["curves"]]
        return cls(**d)


def write_report_json(report: RunReport) -> bytes:
    return (json.dumps(report.to_dict(), indent=2) + "\n").encode("utf-8")


def read_report_json(data: bytes | str) -> RunReport:
    return RunReport.from_dict(json.loads(data))


def render_svg_plot(h, modes: ModeSet, width: int = 800, height: int = 300, title: str = "") -> bytes:
    """Histogram polyline with one vertical line per boundary."""
    h = np.asarray(h, dtype=np.float64)
    left, right, top, bottom = 60, 20, 30, 40
    pw, ph = width - left - right, height - top - bottom
    top_val = float(h.max()) or 1.0
    xs = left + np.arange(h.size) * (pw / max(h.size - 1, 1))
    ys = top + ph - h / top_val * ph
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<g class="axes" stroke="black" stroke-width="1">'
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}"/></g>',
        f'<polyline class="histogram" fill="none" stroke="steelblue" stroke-width="1.2" points="{pts}"/>',
    ]
    for b in modes.boundaries:
        x = xs[b]
        lines.append(f'<line class="boundary" x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{top + ph}" '
                     f'stroke="crimson" stroke-width="1" stroke-dasharray="4,3"/>')
    lines += [
        f'<text x="{left + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" font-size="12">bin</text>',
        f'<text x="14" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {top + ph / 2:.1f})">count</text>',
        f'<text x="{left}" y="{top + ph + 14}" font-size="10" text-anchor="middle">0</text>',
        f'<text x="{left + pw}" y="{top + ph + 14}" font-size="10" text-anchor="middle">{h.size - 1}</text>',
        f'<text x="{left - 4}" y="{top + 4}" font-size="10" text-anchor="end">{top_val:.6g}</text>',
    ]
    if title:
        lines.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
