"""
N-Growth Stats - How fast the lattice modulus grows with dimension

For each dimension D, draws `trials` sets of D - 1 distinct integers from
[1, bound] and records log10 of their lcm (the raw modulus of a spectrum
with those integer gaps) as well as log10 of the modulus after coprime
reduction. Reports min / median / max per D. Reproducible per seed.
"""

import logging
import math
from typing import Any, Dict, List, Sequence

import numpy as np

from .random_instances import coprime_reduce, make_rng, random_p_vector

logger = logging.getLogger(__name__)


# =============================================================================
# STATISTICS CALCULATION
# =============================================================================

def modulus_of(values: Sequence[int]) -> int:
    """lcm of the nonzero integers; 1 for an empty set."""
    return math.lcm(*values) if values else 1


def _summary(logs: List[float]) -> Dict[str, float]:
    return {
        "min": float(np.min(logs)),
        "median": float(np.median(logs)),
        "max": float(np.max(logs)),
    }


def calculate_stats(
    dims: Sequence[int],
    trials: int = 100,
    bound: int = 50,
    seed: int = 0,
) -> Dict[str, Any]:
    """
    Sample integer gap sets and summarize log10 N per dimension.

    One generator is seeded once and consumed in order of `dims`, so the
    same (dims, trials, bound, seed) always gives the same numbers.

    Returns:
        Stats dictionary with one row per dimension
    """
    rng = make_rng(seed)
    rows = []
    for dimension in dims:
        raw_logs: List[float] = []
        reduced_logs: List[float] = []
        for _ in range(trials):
            p = random_p_vector(rng, dimension, bound)
            raw_logs.append(math.log10(modulus_of(p)))
            reduced_logs.append(math.log10(modulus_of(coprime_reduce(p))))
        rows.append({
            "dimension": dimension,
            "raw": _summary(raw_logs),
            "reduced": _summary(reduced_logs),
        })
        logger.debug(f"D={dimension}: median log10 N = {rows[-1]['raw']['median']:.4f}")

    logger.info(f"N-growth study: {len(dims)} dimensions x {trials} trials, bound {bound}")
    return {"seed": seed, "trials": trials, "bound": bound, "rows": rows}


def format_stats_report(stats: Dict[str, Any]) -> str:
    """Format the study as a fixed-width table."""
    lines = []
    lines.append("=" * 66)
    lines.append(
        f"  N GROWTH (trials={stats['trials']}, bound={stats['bound']}, seed={stats['seed']})"
    )
    lines.append("=" * 66)
    lines.append("")
    lines.append("  log10 N of the sampled integers (raw lcm) | after coprime reduction")
    lines.append("-" * 66)
    lines.append(f"  {'D':>3}  {'min':>9} {'median':>9} {'max':>9}  | {'min':>9} {'median':>9} {'max':>9}")
    for row in stats["rows"]:
        raw, red = row["raw"], row["reduced"]
        lines.append(
            f"  {row['dimension']:>3}  {raw['min']:9.4f} {raw['median']:9.4f} {raw['max']:9.4f}"
            f"  | {red['min']:9.4f} {red['median']:9.4f} {red['max']:9.4f}"
        )
    lines.append("=" * 66)
    return "\n".join(lines) + "\n"
