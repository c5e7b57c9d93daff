"""Deterministic SVG renderings for the analytics outputs.

Hand-rolled SVG with a fixed palette, fixed element ordering, and fixed
two-decimal coordinate formatting: identical inputs always produce
byte-identical files. Bars carry class="bar" and heatmap cells
class="cell" so structure is checkable without an XML parser.
"""

from xml.sax.saxutils import escape

PALETTE = (
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b",
    "#b279a2", "#ff9da6", "#9d755d", "#8085e9", "#5c9ea0",
)

_FONT = 'font-family="Helvetica, Arial, sans-serif"'


def _num(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def _value_text(value) -> str:
    f = float(value)
    return str(int(f)) if f == int(f) else f"{f:.2f}"


def _header(width: float, height: float, title: str) -> list:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}">',
        f'<rect width="{_num(width)}" height="{_num(height)}" fill="#ffffff"/>',
        f'<text x="{_num(width / 2)}" y="24" {_FONT} font-size="16" '
        f'text-anchor="middle" fill="#202020">{escape(title)}</text>',
    ]


def bar_chart(labels, values, title: str, color: str = PALETTE[0]) -> str:
    """One bar per (label, value); the value is printed above each bar."""
    labels = [str(x) for x in labels]
    values = [float(v) for v in values]
    n = max(len(values), 1)
    bar_w, gap, margin_l, margin_t, plot_h = 46.0, 18.0, 60.0, 50.0, 240.0
    width = margin_l + n * (bar_w + gap) + 30.0
    height = margin_t + plot_h + 70.0
    top = max(max(values, default=0.0), 1e-9)
    parts = _header(width, height, title)
    base_y = margin_t + plot_h
    parts.append(f'<line x1="{_num(margin_l - 8)}" y1="{_num(base_y)}" '
                 f'x2="{_num(width - 20)}" y2="{_num(base_y)}" stroke="#404040"/>')
    for i, (label, value) in enumerate(zip(labels, values)):
        x = margin_l + i * (bar_w + gap)
        h = plot_h * value / top
        y = base_y - h
        parts.append(f'<rect class="bar" x="{_num(x)}" y="{_num(y)}" '
                     f'width="{_num(bar_w)}" height="{_num(h)}" fill="{color}"/>')
        parts.append(f'<text x="{_num(x + bar_w / 2)}" y="{_num(y - 5)}" {_FONT} '
                     f'font-size="11" text-anchor="middle" fill="#202020">'
                     f'{escape(_value_text(value))}</text>')
        parts.append(f'<text x="{_num(x + bar_w / 2)}" y="{_num(base_y + 16)}" {_FONT} '
                     f'font-size="11" text-anchor="middle" fill="#202020" '
                     f'transform="rotate(30 {_num(x + bar_w / 2)} {_num(base_y + 16)})">'
                     f'{escape(label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def grouped_bar_chart(group_names, series_names, matrix, title: str) -> str:
    """matrix[g][s] bars clustered by group, one palette color per series."""
    group_names = [str(x) for x in group_names]
    series_names = [str(x) for x in series_names]
    rows = [[float(v) for v in row] for row in matrix]
    n_groups, n_series = len(group_names), len(series_names)
    bar_w, gap_in, gap_out, margin_l, margin_t, plot_h = 14.0, 2.0, 26.0, 60.0, 50.0, 260.0
    group_w = n_series * (bar_w + gap_in)
    width = margin_l + n_groups * (group_w + gap_out) + 170.0
    height = margin_t + plot_h + 60.0
    top = max((v for row in rows for v in row), default=0.0)
    top = max(top, 1e-9)
    parts = _header(width, height, title)
    base_y = margin_t + plot_h
    parts.append(f'<line x1="{_num(margin_l - 8)}" y1="{_num(base_y)}" '
                 f'x2="{_num(width - 160)}" y2="{_num(base_y)}" stroke="#404040"/>')
    for g, (gname, row) in enumerate(zip(group_names, rows)):
        gx = margin_l + g * (group_w + gap_out)
        for s, value in enumerate(row):
            x = gx + s * (bar_w + gap_in)
            h = plot_h * value / top
            color = PALETTE[s % len(PALETTE)]
            parts.append(f'<rect class="bar" x="{_num(x)}" y="{_num(base_y - h)}" '
                         f'width="{_num(bar_w)}" height="{_num(h)}" fill="{color}"/>')
        parts.append(f'<text x="{_num(gx + group_w / 2)}" y="{_num(base_y + 16)}" {_FONT} '
                     f'font-size="11" text-anchor="middle" fill="#202020">{escape(gname)}</text>')
    legend_x = width - 150.0
    for s, sname in enumerate(series_names):
        ly = margin_t + s * 18.0
        parts.append(f'<rect x="{_num(legend_x)}" y="{_num(ly)}" width="12" height="12" '
                     f'fill="{PALETTE[s % len(PALETTE)]}"/>')
        parts.append(f'<text x="{_num(legend_x + 18)}" y="{_num(ly + 10)}" {_FONT} '
                     f'font-size="11" fill="#202020">{escape(sname)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap(labels, matrix, title: str) -> str:
    """Square color grid; one class="cell" rect per matrix entry, shaded
    from white to the palette blue by value / max."""
    labels = [str(x) for x in labels]
    rows = [[float(v) for v in row] for row in matrix]
    n = len(labels)
    cell, margin_l, margin_t = 34.0, 120.0, 60.0
    width = margin_l + n * cell + 40.0
    height = margin_t + n * cell + 110.0
    top = max((v for row in rows for v in row), default=0.0)
    top = max(top, 1e-9)
    parts = _header(width, height, title)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            frac = value / top
            r = int(round(255 - frac * (255 - 0x4c)))
            g = int(round(255 - frac * (255 - 0x78)))
            b = int(round(255 - frac * (255 - 0xa8)))
            x = margin_l + j * cell
            y = margin_t + i * cell
            parts.append(
                f'<rect class="cell" x="{_num(x)}" y="{_num(y)}" width="{_num(cell)}" '
                f'height="{_num(cell)}" fill="#{r:02x}{g:02x}{b:02x}" '
                f'stroke="#d0d0d0"><title>{escape(labels[i])} / {escape(labels[j])}: '
                f'{escape(_value_text(value))}</title></rect>')
    for i, label in enumerate(labels):
        parts.append(f'<text x="{_num(margin_l - 6)}" y="{_num(margin_t + i * cell + cell / 2 + 4)}" '
                     f'{_FONT} font-size="10" text-anchor="end" fill="#202020">{escape(label)}</text>')
        cx = margin_l + i * cell + cell / 2
        cy = margin_t + n * cell + 10
        parts.append(f'<text x="{_num(cx)}" y="{_num(cy)}" {_FONT} font-size="10" '
                     f'text-anchor="end" fill="#202020" '
                     f'transform="rotate(-45 {_num(cx)} {_num(cy)})">{escape(label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
