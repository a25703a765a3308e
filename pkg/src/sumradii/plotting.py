"""Static figures: solution drawings for 2D instances and ratio charts.

Everything renders through the Agg backend straight to files; nothing here
opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle, Polygon

from .metric import Ball, Instance


class NoCoordinates(ValueError):
    """The instance has no 2D coordinates to draw."""


def _hull(points):
    """Andrew's monotone chain; fine for the handful of points we draw."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                (ox, oy), (ax, ay) = out[-2], out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) > 0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def render_solution(inst: Instance, objects, guessed, path: str,
                    title: str | None = None) -> None:
    """Draw points plus final balls (circles) or clusters (hulls); guessed
    balls get a dashed stroke.  Output format follows the file suffix."""
    if inst.coords is None:
        raise NoCoordinates("instance has no coordinates")
    xy = [(float(a), float(b)) for a, b in inst.coords]
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_aspect("equal")
    for ball in guessed:
        cx, cy = xy[ball.center]
        ax.add_patch(Circle((cx, cy), float(ball.radius), fill=False,
                            linestyle="--", edgecolor="tab:red", linewidth=1.2))
    for obj in objects:
        if isinstance(obj, Ball):
            cx, cy = xy[obj.center]
            ax.add_patch(Circle((cx, cy), float(obj.radius), fill=False,
                                edgecolor="tab:blue", linewidth=1.4))
        else:
            pts = [xy[p] for p in obj]
            hull = _hull(pts)
            if len(hull) >= 3:
                ax.add_patch(Polygon(hull, closed=True, fill=False,
                                     edgecolor="tab:blue", linewidth=1.4))
            elif len(hull) == 2:
                (x0, y0), (x1, y1) = hull
                ax.plot([x0, x1], [y0, y1], color="tab:blue", linewidth=1.4)
    ax.scatter([p[0] for p in xy], [p[1] for p in xy], s=18, color="black",
               zorder=3)
    for i, (px, py) in enumerate(xy):
        ax.annotate(str(i), (px, py), textcoords="offset points",
                    xytext=(4, 4), fontsize=8)
    ax.autoscale_view()
    ax.margins(0.15)
    if title:
        ax.set_title(title)
    fig.savefig(path, metadata=_metadata(path))
    plt.close(fig)


def render_ratio_figure(rows, bounds: dict, path: str) -> None:
    """One panel per objective: ALG/OPT ratios as a strip with the proven
    bound as a horizontal line.  `rows` are dicts with "objective" and a
    float "ratio"; skipped rows (ratio None) are ignored."""
    objectives = [ob for ob in bounds if any(r["objective"] == ob for r in rows)]
    if not objectives:
        objectives = list(bounds)
    fig, axes = plt.subplots(1, len(objectives),
                             figsize=(4 * len(objectives), 4), squeeze=False)
    for ax, ob in zip(axes[0], objectives):
        ratios = [r["ratio"] for r in rows
                  if r["objective"] == ob and r["ratio"] is not None]
        ax.scatter(range(len(ratios)), ratios, s=12, alpha=0.6)
        bound = float(bounds[ob])
        ax.axhline(bound, color="tab:red", linestyle="--",
                   label=f"bound {bound:.3f}")
        ax.axhline(1.0, color="gray", linewidth=0.6)
        ax.set_title(ob)
        ax.set_xlabel("instance")
        ax.set_ylabel("ALG / OPT")
        ax.set_ylim(0, bound * 1.15)
        ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata=_metadata(path))
    plt.close(fig)


def _metadata(path: str):
    # SVG output embeds a timestamp unless told otherwise; strip it so
    # repeated renders are byte-identical.
    if path.endswith(".svg"):
        return {"Date": None}
    return None
