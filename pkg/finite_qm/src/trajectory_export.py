"""
Trajectory Export - CSV and SVG renderings of torus trajectories

CSV rows hold the free phases (k >= 1) of each point twice: as reduced
exact fractions of a turn and as decimals rounded to 12 places.

The SVG view is the two-torus of a D = 3 system drawn as the unit square
with opposite edges identified: the continuous straight-line flow as wrapped
segments and one dot per lattice step. Output bytes depend only on the
inputs (fixed SVG hash salt, no date metadata).
"""

import csv
import io
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import FiniteQMError
from .evolution import Trajectory
from .numkernel import format_rational

logger = logging.getLogger(__name__)

DECIMAL_PLACES = 12
SVG_HASH_SALT = "finite-qm-torus"

Point = Tuple[Fraction, Fraction]
Segment = Tuple[Point, Point]


def format_turns_decimal(value: Fraction, places: int = DECIMAL_PLACES) -> str:
    """Round an exact rational to `places` decimals (half to even) without floats."""
    scale = 10 ** places
    scaled = round(Fraction(value) * scale)
    sign = "-" if scaled < 0 else ""
    whole, rest = divmod(abs(scaled), scale)
    return f"{sign}{whole}.{rest:0{places}d}"


def _free_turns(trajectory: Trajectory) -> List[Tuple[int, Tuple[Fraction, ...]]]:
    if trajectory.includes_ground:
        return [(point.step, point.turns[1:]) for point in trajectory.points]
    return [(point.step, point.turns) for point in trajectory.points]


def trajectory_csv(trajectory: Trajectory) -> str:
    """Render `step,theta_1_frac,...,theta_1_dec,...` with one row per point."""
    rows = _free_turns(trajectory)
    free = len(rows[0][1]) if rows else 0

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["step"]
        + [f"theta_{k}_frac" for k in range(1, free + 1)]
        + [f"theta_{k}_dec" for k in range(1, free + 1)]
    )
    for n, turns in rows:
        writer.writerow(
            [n]
            + [format_rational(t) for t in turns]
            + [format_turns_decimal(t) for t in turns]
        )
    return buffer.getvalue()


def wrapped_line_segments(p1: int, p2: int) -> List[Segment]:
    """
    The line t -> (p1 * t, p2 * t) mod 1, t in [0, 1], cut at every wrap.

    Breakpoints are the exact times i / p1 and j / p2. Each segment is given
    by its endpoints in the closed unit square; consecutive segments meet on
    identified edges.

    Raises:
        ExportError: If either slope component is not positive
    """
    if p1 < 1 or p2 < 1:
        raise ExportError(f"wrapped line needs positive integer components, got ({p1}, {p2})")

    cuts = sorted(
        {Fraction(i, p1) for i in range(p1 + 1)} | {Fraction(j, p2) for j in range(p2 + 1)}
    )
    segments: List[Segment] = []
    for t0, t1 in zip(cuts, cuts[1:]):
        floor1 = math.floor(p1 * t0)
        floor2 = math.floor(p2 * t0)
        start = (p1 * t0 - floor1, p2 * t0 - floor2)
        end = (p1 * t1 - floor1, p2 * t1 - floor2)
        segments.append((start, end))
    return segments


def trajectory_svg(trajectory: Trajectory, p: Sequence[int]) -> str:
    """
    Draw a D = 3 trajectory on the unit square.

    Args:
        trajectory: Points of the orbit
        p: The full reduced integer vector (0, p1, p2)

    Raises:
        DimensionUnsupported: If the system does not have exactly two free phases
    """
    if len(p) != 3:
        raise DimensionUnsupported(f"SVG view needs D = 3, got D = {len(p)}")

    matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        for (x0, y0), (x1, y1) in wrapped_line_segments(p[1], p[2]):
            ax.plot([float(x0), float(x1)], [float(y0), float(y1)],
                    color="0.6", linewidth=0.8, zorder=1)

        points = _free_turns(trajectory)
        ax.scatter(
            [float(turns[0]) for _, turns in points],
            [float(turns[1]) for _, turns in points],
            s=14, color="black", zorder=2,
        )
        ax.plot([0, 1, 1, 0, 0], [0, 0, 1, 1, 0], color="black", linewidth=1.0)
        ax.set_xlim(-0.02, 1.02)
        ax.set_ylim(-0.02, 1.02)
        ax.set_aspect("equal")
        ax.set_xlabel("theta_1 (turns)")
        ax.set_ylabel("theta_2 (turns)")
        ax.set_title(f"p = ({p[1]}, {p[2]}), N = {trajectory.modulus}")

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)

    logger.debug(f"Rendered SVG torus with {len(trajectory)} lattice points")
    return buffer.getvalue()


# =============================================================================
# EXCEPTIONS
# =============================================================================

class ExportError(FiniteQMError, ValueError):
    """Base exception for export errors."""
    pass


class DimensionUnsupported(ExportError):
    """Raised when a rendering does not exist for the system's dimension."""
    pass
