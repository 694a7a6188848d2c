"""Static SVG line charts, emitted as deterministic text with no dependencies.

Good enough for offline CDF overlays: fixed canvas, linear axes, one polyline
per series, a legend, and the raw data embedded as comments so plots remain
self-describing.
"""

WIDTH = 720
HEIGHT = 480
MARGIN_L = 64
MARGIN_R = 24
MARGIN_T = 40
MARGIN_B = 56

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / count
    return [lo + i * step for i in range(count + 1)]


def line_chart(series, title: str, xlabel: str, ylabel: str) -> str:
    """Render [(label, [(x, y), ...]), ...] as an SVG document string."""
    if not series or any(not pts for _, pts in series):
        raise ValueError("every series needs at least one point")
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(0.0, min(ys)), max(1.0, max(ys))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return MARGIN_T + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<!-- series: {len(series)} -->",
    ]
    for label, pts in series:
        data = " ".join(f"{_fmt(float(x))}:{_fmt(float(y))}" for x, y in pts)
        out.append(f"<!-- data {label}: {data} -->")
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    out.append(
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>'
    )

    axis = MARGIN_T + plot_h
    out.append(
        f'<line x1="{MARGIN_L}" y1="{axis}" x2="{WIDTH - MARGIN_R}" y2="{axis}" stroke="black"/>'
    )
    out.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{axis}" stroke="black"/>'
    )
    for tx in _ticks(x_lo, x_hi, 8):
        out.append(
            f'<line x1="{_fmt(px(tx))}" y1="{axis}" x2="{_fmt(px(tx))}" y2="{axis + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(px(tx))}" y="{axis + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tx:g}</text>'
        )
    for ty in _ticks(y_lo, y_hi, 5):
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(py(ty))}" x2="{MARGIN_L}" y2="{_fmt(py(ty))}" stroke="black"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(py(ty) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{ty:g}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + plot_w // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN_T + plot_h // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {MARGIN_T + plot_h // 2})">{ylabel}</text>'
    )

    for idx, (label, pts) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for x, y in pts:
            out.append(
                f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="2.5" fill="{color}"/>'
            )
        ly = MARGIN_T + 12 + idx * 18
        lx = WIDTH - MARGIN_R - 150
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 30}" y="{ly}" font-family="sans-serif" font-size="12">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
