"""File emission: CSVs, gnuplot-style .dat twins, and minimal SVG charts.

All numeric output is printed with 12 significant digits so repeated runs
with the same configuration are byte-identical.  Undefined efficiencies are
written as "nan", never as a large float.  SVG charts are rendered from the
already-written numeric series and never feed back into them.
"""

import math

import numpy as np

from .analysis import cycle_efficiency, cycle_power
from .exceptions import OttoKilnError, UndefinedEfficiencyError


def fmt(value):
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    if value == 0:
        return "0"
    return format(value, ".12g")


def write_timeseries_csv(path, trace, csv_levels=8):
    """t, omega, U, S, stroke, total probability, first csv_levels populations."""
    k = min(csv_levels, trace.probs.shape[1]) if trace.probs.size else csv_levels
    header = ["t", "omega", "U", "S", "stroke", "p_sum"] + [f"P_{n}" for n in range(k)]
    rows = []
    for i in range(trace.times.shape[0]):
        p_sum = float(trace.probs[i].sum())
        if abs(p_sum - 1.0) > 1e-9:
            raise OttoKilnError(f"trace row {i} carries probability sum {p_sum!r}")
        row = [fmt(float(trace.times[i])), fmt(float(trace.omegas[i])),
               fmt(float(trace.energies[i])), fmt(float(trace.entropies[i])),
               trace.stroke_labels[i], fmt(p_sum)]
        row += [fmt(float(v)) for v in trace.probs[i, :k]]
        rows.append(row)
    _write_csv(path, header, rows)


def write_wide_timeseries_csv(path, trace):
    """Full-distribution twin of the time series (every ladder level)."""
    n = trace.probs.shape[1] if trace.probs.size else 0
    header = ["t", "omega", "U", "S", "stroke"] + [f"P_{level}" for level in range(n)]
    rows = []
    for i in range(trace.times.shape[0]):
        row = [fmt(float(trace.times[i])), fmt(float(trace.omegas[i])),
               fmt(float(trace.energies[i])), fmt(float(trace.entropies[i])),
               trace.stroke_labels[i]]
        row += [fmt(float(v)) for v in trace.probs[i]]
        rows.append(row)
    _write_csv(path, header, rows)


def write_cycles_csv(path, trace):
    header = ["cycle", "q_in", "q_out", "w_out", "w_in", "w_eff", "q_pump",
              "q_pump_gross", "efficiency", "power", "a_shift_tv"]
    rows = []
    for record, shift in zip(trace.records, trace.a_shift_tv):
        try:
            eff = cycle_efficiency(record)
        except UndefinedEfficiencyError:
            eff = math.nan
        rows.append([
            fmt(record.cycle_index + 1), fmt(record.q_in), fmt(record.q_out),
            fmt(record.w_out), fmt(record.w_in), fmt(record.w_eff),
            fmt(record.q_pump), fmt(record.q_pump_gross), fmt(eff),
            fmt(cycle_power(record, trace.cycle_time)), fmt(shift),
        ])
    _write_csv(path, header, rows)


def write_sweep_csv(path, points):
    header = ["t_h", "ratio", "efficiency", "power"]
    rows = [[fmt(p.t_h), fmt(p.ratio), fmt(p.efficiency), fmt(p.power)] for p in points]
    _write_csv(path, header, rows)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def write_dat(path, columns, series):
    """Whitespace-separated twin of a chart's series for gnuplot-style tools."""
    lines = ["# " + " ".join(columns)]
    for row in zip(*series):
        lines.append(" ".join(fmt(float(v)) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def write_svg_chart(path, x, y, title, x_label, y_label, width=720, height=420):
    """Single-polyline SVG chart; finite points only."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    x, y = x[keep], y[keep]
    if x.size < 2:
        raise OttoKilnError("an SVG chart needs at least two finite points")
    pad_l, pad_r, pad_t, pad_b = 72, 24, 36, 48
    plot_w, plot_h = width - pad_l - pad_r, height - pad_t - pad_b
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo, y_hi = float(y.min()), float(y.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(v):
        return pad_l + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v):
        return pad_t + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    points = " ".join(f"{sx(float(a)):.2f},{sy(float(b)):.2f}" for a, b in zip(x, y))
    tick_labels = []
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        tick_labels.append(
            f'<text x="{sx(xv):.2f}" y="{height - pad_b + 18}" text-anchor="middle" '
            f'font-size="11">{fmt(xv)}</text>'
        )
        tick_labels.append(
            f'<text x="{pad_l - 8}" y="{sy(yv) + 4:.2f}" text-anchor="end" '
            f'font-size="11">{fmt(yv)}</text>'
        )
    svg = f"""<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">
<rect width="{width}" height="{height}" fill="white"/>
<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">{title}</text>
<rect x="{pad_l}" y="{pad_t}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#999"/>
{chr(10).join(tick_labels)}
<text x="{pad_l + plot_w / 2}" y="{height - 12}" text-anchor="middle" font-size="12">{x_label}</text>
<text x="18" y="{pad_t + plot_h / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 18 {pad_t + plot_h / 2})">{y_label}</text>
<polyline points="{points}" fill="none" stroke="#1f6fb2" stroke-width="1.5"/>
</svg>
"""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(svg)
