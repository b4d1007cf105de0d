"""Minimal hand-written SVG line plots (no plotting dependency).

Produces a fixed-size chart with axes, tick labels, an optional shaded
horizontal corridor (the phase acceptance band) and one or more polyline
series. Output is deterministic for identical input.
"""

_WIDTH, _HEIGHT = 720.0, 480.0
_ML, _MR, _MT, _MB = 70.0, 20.0, 30.0, 50.0


def _ticks(lo, hi, n=6):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    raw = span / max(n - 1, 1)
    mag = 10.0 ** int(f"{raw:e}".split("e")[1])
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if span / step <= n:
            break
    first = step * (int(lo / step) + (0 if lo % step == 0 else (1 if lo > 0 else 0)))
    while first < lo - 1e-12 * span:
        first += step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(round(t, 12))
        t += step
    return out or [lo, hi]


def line_plot(path, x, y, xlabel="", ylabel="", title="",
              corridor=None, markers=False):
    """Write an SVG line chart of y(x) to ``path``.

    corridor, when given as (lo, hi), shades the horizontal band between
    the two y values across the full x range.
    """
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    if not xs:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if corridor is not None:
        y_lo = min(y_lo, corridor[0])
        y_hi = max(y_hi, corridor[1])
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo -= pad
    y_hi += pad
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    pw = _WIDTH - _ML - _MR
    ph = _HEIGHT - _MT - _MB

    def px(v):
        return _ML + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return _MT + (y_hi - v) / (y_hi - y_lo) * ph

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:g}" '
        f'height="{_HEIGHT:g}" viewBox="0 0 {_WIDTH:g} {_HEIGHT:g}">')
    parts.append('<rect width="100%" height="100%" fill="white"/>')
    if corridor is not None:
        top, bot = py(corridor[1]), py(corridor[0])
        parts.append(f'<rect x="{_ML:.2f}" y="{top:.2f}" width="{pw:.2f}" '
                     f'height="{bot - top:.2f}" fill="#ffe9a8" opacity="0.8"/>')
    # axes and ticks
    parts.append(f'<rect x="{_ML:.2f}" y="{_MT:.2f}" width="{pw:.2f}" '
                 f'height="{ph:.2f}" fill="none" stroke="black"/>')
    for t in _ticks(x_lo, x_hi):
        parts.append(f'<line x1="{px(t):.2f}" y1="{_MT + ph:.2f}" '
                     f'x2="{px(t):.2f}" y2="{_MT + ph + 5:.2f}" stroke="black"/>')
        parts.append(f'<text x="{px(t):.2f}" y="{_MT + ph + 20:.2f}" '
                     f'font-size="12" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        parts.append(f'<line x1="{_ML - 5:.2f}" y1="{py(t):.2f}" '
                     f'x2="{_ML:.2f}" y2="{py(t):.2f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8:.2f}" y="{py(t) + 4:.2f}" '
                     f'font-size="12" text-anchor="end">{t:g}</text>')
    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f5fbf" '
                 'stroke-width="1.5"/>')
    if markers:
        for a, b in zip(xs, ys):
            parts.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="2.5" '
                         'fill="#1f5fbf"/>')
    if xlabel:
        parts.append(f'<text x="{_ML + pw / 2:.2f}" y="{_HEIGHT - 12:.2f}" '
                     f'font-size="14" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        cx, cy = 18.0, _MT + ph / 2
        parts.append(f'<text x="{cx:.2f}" y="{cy:.2f}" font-size="14" '
                     f'text-anchor="middle" transform="rotate(-90 {cx:g} '
                     f'{cy:g})">{ylabel}</text>')
    if title:
        parts.append(f'<text x="{_ML + pw / 2:.2f}" y="20" font-size="15" '
                     f'text-anchor="middle">{title}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
