"""
Commands - One function per CLI command

Each cmd_* takes a RunConfig and returns a CommandResult holding the exit
code and the report text. Nothing here prints or logs to stdout, so reports
are byte-identical across runs with the same inputs.

Exit codes:
    0  success
    1  input / validation error (raised as FiniteQMError and mapped by the CLI)
    2  incommensurable spectrum
    3  enumeration cap exceeded (the report still carries the algebraic verdict)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

from .config_loader import Command, InvalidConfig, OutputFormat, RunConfig
from .continuum import continuous_at, fidelity, max_lattice_deviation
from .errors import EXIT_CAP_EXCEEDED, EXIT_INCOMMENSURABLE, EXIT_OK, FiniteQMError
from .evolution import (
    CapExceeded,
    EqualityMode,
    distinct_states,
    minimal_period,
    ray_period,
    state_at,
    trajectory,
    verify_recurrence,
)
from .file_formats import bind_state, format_spectrum, read_spectrum, read_state
from .n_growth_stats import calculate_stats, format_stats_report
from .numkernel import format_rational
from .quantum_state import (
    DiscreteState,
    IntegerAmplitudes,
    born,
    born_eigen,
    phase_indices,
)
from .random_instances import make_rng, random_spectrum
from .spectrum import Incommensurable, ReducedSpectrum, component_cycles, reduce
from .trajectory_export import trajectory_csv, trajectory_svg

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    output: str


# =============================================================================
# INPUT HELPERS
# =============================================================================

def _require(path, flag: str):
    if path is None:
        raise InvalidConfig(f"{flag} is required for this command")
    return path


def _load_reduced(run: RunConfig) -> ReducedSpectrum:
    spectrum_file = read_spectrum(_require(run.spectrum_path, "--spectrum"))
    reduced = spectrum_file.reduced(run.tol, run.max_den)
    if isinstance(reduced, Incommensurable):
        raise IncommensurableSpectrum(reduced)
    return reduced


def _load_state(run: RunConfig, reduced: ReducedSpectrum) -> DiscreteState:
    state_file = read_state(_require(run.state_path, "--state"))
    return bind_state(state_file, reduced, run.tol, run.max_den)


def _tuple_text(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def _phase_text(m: int, modulus: int) -> str:
    return f"{m}/{modulus} turns"


def _spectrum_lines(reduced: ReducedSpectrum) -> List[str]:
    return [
        f"D = {reduced.dimension}",
        f"offset = {format_rational(reduced.offset)}",
        f"eps = {format_rational(reduced.unit_eps)}",
        f"p = {_tuple_text(reduced.p)}",
        f"N = {reduced.modulus_N}",
        f"T_recur = {format_rational(reduced.recur_turns)} turns",
        f"delta_t = {format_rational(reduced.step_turns)} turns",
    ]


def _report(lines: List[str], exit_code: int = EXIT_OK) -> CommandResult:
    return CommandResult(exit_code, "\n".join(lines) + "\n")


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_reduce(run: RunConfig) -> CommandResult:
    """Reduce a spectrum file; exit 2 with an INCOMMENSURABLE verdict when it has no lattice."""
    spectrum_file = read_spectrum(_require(run.spectrum_path, "--spectrum"))
    reduced = spectrum_file.reduced(run.tol, run.max_den)
    if isinstance(reduced, Incommensurable):
        return _report([reduced.describe()], EXIT_INCOMMENSURABLE)

    lines = _spectrum_lines(reduced)
    lines.append(f"component cycles = {_tuple_text(component_cycles(reduced))}")
    return _report(lines)


def cmd_evolve(run: RunConfig) -> CommandResult:
    """The state at --from (absolute) or at its own step plus --steps."""
    reduced = _load_reduced(run)
    state = _load_state(run, reduced)
    target = run.start if run.start is not None else state.step + (run.steps or 0)
    evolved = state_at(state, target)

    modulus = reduced.modulus_N
    lines = [
        f"step = {evolved.step}",
        f"N = {modulus}",
        f"amps = {_tuple_text(evolved.amps)}",
        f"norm_sq = {evolved.amplitudes.norm_sq}",
    ]
    for k, (amp, m) in enumerate(zip(evolved.amps, phase_indices(evolved))):
        lines.append(f"  k={k}: amp {amp}, phase {_phase_text(m, modulus)}")
    return _report(lines)


def cmd_period(run: RunConfig) -> CommandResult:
    """Modulus, minimal period, recurrence verdict and distinct-state counts."""
    reduced = _load_reduced(run)
    state = _load_state(run, reduced)
    period = minimal_period(state)
    exit_code = EXIT_OK

    lines = [
        f"N = {reduced.modulus_N}",
        f"N_eff = {period}",
        f"component cycles = {_tuple_text(component_cycles(reduced))}",
        f"ray period = {ray_period(state)}",
    ]

    try:
        verified = verify_recurrence(state, run.cap)
        lines.append(f"recurrence at N_eff = {'verified' if verified else 'FAILED'} (scanned)")
    except CapExceeded as e:
        held = "holds" if e.recurrence_holds else "FAILED"
        lines.append(f"recurrence at N_eff = {held} (minimality not scanned: N_eff > cap {e.cap})")
        exit_code = EXIT_CAP_EXCEEDED

    for mode in (EqualityMode.STRICT, EqualityMode.RAY):
        try:
            count = distinct_states(state, mode, run.cap, run.workers)
            lines.append(f"distinct states ({mode.value}) = {count}")
        except CapExceeded as e:
            lines.append(f"distinct states ({mode.value}) = not enumerated (N_eff > cap {e.cap})")
            exit_code = EXIT_CAP_EXCEEDED

    return _report(lines, exit_code)


def cmd_born(run: RunConfig) -> CommandResult:
    """Exact eigenbasis probabilities, plus the probability of --analysis when given."""
    reduced = _load_reduced(run)
    state = _load_state(run, reduced)

    lines = [f"step = {state.step}"]
    total = Fraction(0)
    for k in range(state.dimension):
        probability = born_eigen(state, k)
        total += probability
        lines.append(f"P(E_{k}) = {format_rational(probability)}")
    lines.append(f"sum = {format_rational(total)}")

    if run.analysis_path is not None:
        analysis = bind_state(read_state(run.analysis_path), reduced, run.tol, run.max_den)
        probability = born(state, analysis, run.precision)
        kind = "exact" if probability.is_exact else f"{run.precision}-bit interval"
        lines.append(f"P(analysis @ step {analysis.step}) = {probability.describe()} ({kind})")

    return _report(lines)


def cmd_fidelity(run: RunConfig) -> CommandResult:
    """Agreement of the lattice with continuous evolution over --count steps from --from."""
    reduced = _load_reduced(run)
    state = _load_state(run, reduced)
    start = run.start if run.start is not None else state.step
    sample = range(start, start + run.count)

    deviation = max_lattice_deviation(state.amplitudes, reduced, sample)
    half_time = (start + Fraction(1, 2)) * reduced.step_turns
    off_lattice = fidelity(state_at(state, start), continuous_at(state.amplitudes, reduced, half_time))

    return _report([
        f"steps = {start}..{start + run.count - 1}",
        f"max lattice deviation = {deviation:.3e}",
        f"fidelity at step {start} + 1/2 = {off_lattice:.12f}",
    ])


def cmd_torus(run: RunConfig) -> CommandResult:
    """Trajectory points as CSV (any D) or SVG (D = 3)."""
    if run.format is OutputFormat.TEXT:
        raise InvalidConfig("torus writes csv or svg, not text")
    reduced = _load_reduced(run)
    anchor = DiscreteState(IntegerAmplitudes.from_ints([1] * reduced.dimension), reduced, 0)
    points = trajectory(anchor, run.start or 0, run.count)

    if run.format is OutputFormat.SVG:
        return CommandResult(EXIT_OK, trajectory_svg(points, reduced.p))
    return CommandResult(EXIT_OK, trajectory_csv(points))


def cmd_randspec(run: RunConfig) -> CommandResult:
    """A seeded random commensurable spectrum in spectrum-file form."""
    spectrum = random_spectrum(make_rng(run.seed), run.dimension, run.bound, run.eps_bound)
    reduced = reduce(spectrum)
    comments = [
        f"random commensurable spectrum, seed {run.seed}",
        f"p = {_tuple_text(reduced.p)}, eps = {format_rational(reduced.unit_eps)}, N = {reduced.modulus_N}",
    ]
    return CommandResult(EXIT_OK, format_spectrum(spectrum.energies, comments))


def cmd_stats(run: RunConfig) -> CommandResult:
    """The N-growth study over --dims."""
    stats = calculate_stats(run.dims, run.trials, run.bound, run.seed)
    return CommandResult(EXIT_OK, format_stats_report(stats))


COMMANDS: Dict[Command, Callable[[RunConfig], CommandResult]] = {
    Command.REDUCE: cmd_reduce,
    Command.EVOLVE: cmd_evolve,
    Command.PERIOD: cmd_period,
    Command.BORN: cmd_born,
    Command.FIDELITY: cmd_fidelity,
    Command.TORUS: cmd_torus,
    Command.RANDSPEC: cmd_randspec,
    Command.STATS: cmd_stats,
}


def run_command(run: RunConfig) -> CommandResult:
    logger.debug(f"Running {run.command.value}")
    return COMMANDS[run.command](run)


# =============================================================================
# EXCEPTIONS
# =============================================================================

class IncommensurableSpectrum(FiniteQMError):
    """Raised when a command needs a lattice but the spectrum has none."""

    exit_code = EXIT_INCOMMENSURABLE

    def __init__(self, verdict: Incommensurable):
        super().__init__(verdict.describe())
        self.verdict = verdict
