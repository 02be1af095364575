"""
File Formats - Spectrum and state text files

Spectrum file (UTF-8):
    # comment lines and blank lines are ignored
    0
    4
    9
One eigenvalue per line in eigenvalue order. Exact lines use the rational
grammar (`num/den` or an integer). If any line is a decimal, the whole
spectrum is read as floats and goes through rationalization.

State file (UTF-8):
    amps:
    3/5
    4/5
    step: 0
Amplitudes before integerization, one per line after `amps:`; the optional
`step:` line (default 0) closes the block. A state file carries no spectrum;
it binds to one at load time.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .errors import FiniteQMError
from .numkernel import RationalLike, format_rational, is_rational_text, parse_rational
from .quantum_state import DiscreteState, integerize, rationalize_amplitudes
from .spectrum import EnergySpectrum, Incommensurable, ReducedSpectrum, reduce, reduce_floats

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


@dataclass(frozen=True)
class SpectrumFile:
    """Parsed spectrum: exact when every line was rational, decimal otherwise."""

    values: Tuple[Number, ...]
    exact: bool

    def reduced(self, tol: float, max_den: int) -> Union[ReducedSpectrum, Incommensurable]:
        if self.exact:
            return reduce(EnergySpectrum(tuple(self.values)))
        return reduce_floats(self.values, tol, max_den)


@dataclass(frozen=True)
class StateFile:
    """Parsed state: amplitudes (exact or decimal) and the starting step."""

    amplitudes: Tuple[Number, ...]
    step: int
    exact: bool


# =============================================================================
# PARSING
# =============================================================================

def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((number, line))
    return lines


def _parse_number(token: str, where: str) -> Tuple[Number, bool]:
    if is_rational_text(token):
        return parse_rational(token), True
    try:
        value = float(token)
    except ValueError:
        raise FileFormatError(f"{where}: not a number: {token!r}") from None
    if not math.isfinite(value):
        raise FileFormatError(f"{where}: value must be finite, got {token!r}")
    return value, False


def parse_spectrum_text(text: str, source: str = "<spectrum>") -> SpectrumFile:
    """
    Parse spectrum file contents.

    Raises:
        FileFormatError: On an unparseable line or an empty file
    """
    parsed = [_parse_number(line, f"{source}:{number}") for number, line in _content_lines(text)]
    if not parsed:
        raise FileFormatError(f"{source}: no energies found")

    exact = all(is_exact for _, is_exact in parsed)
    if exact:
        values = tuple(value for value, _ in parsed)
    else:
        values = tuple(float(value) for value, _ in parsed)
        logger.info(f"{source}: decimal energies, reading through rationalization")
    return SpectrumFile(values=values, exact=exact)


def parse_state_text(text: str, source: str = "<state>") -> StateFile:
    """
    Parse state file contents.

    Raises:
        FileFormatError: On a missing `amps:` header, a bad amplitude or step
            line, or content after the `step:` line
    """
    lines = _content_lines(text)
    if not lines or lines[0][1].lower() != "amps:":
        raise FileFormatError(f"{source}: state file must start with 'amps:'")

    amplitudes: List[Tuple[Number, bool]] = []
    step = 0
    seen_step = False
    for number, line in lines[1:]:
        where = f"{source}:{number}"
        if seen_step:
            raise FileFormatError(f"{where}: content after the step line")
        if line.lower().startswith("step:"):
            token = line.split(":", 1)[1].strip()
            try:
                step = int(token)
            except ValueError:
                raise FileFormatError(f"{where}: step must be an integer, got {token!r}") from None
            seen_step = True
            continue
        amplitudes.append(_parse_number(line, where))

    if not amplitudes:
        raise FileFormatError(f"{source}: no amplitudes after 'amps:'")

    exact = all(is_exact for _, is_exact in amplitudes)
    values = tuple(value if exact else float(value) for value, _ in amplitudes)
    return StateFile(amplitudes=values, step=step, exact=exact)


# =============================================================================
# LOADING
# =============================================================================

def read_spectrum(path: Union[str, Path]) -> SpectrumFile:
    path = Path(path)
    logger.info(f"Reading spectrum from {path}")
    return parse_spectrum_text(path.read_text(encoding="utf-8"), str(path))


def read_state(path: Union[str, Path]) -> StateFile:
    path = Path(path)
    logger.info(f"Reading state from {path}")
    return parse_state_text(path.read_text(encoding="utf-8"), str(path))


def bind_state(
    state_file: StateFile,
    spectrum: ReducedSpectrum,
    tol: float,
    max_den: int,
    step: Optional[int] = None,
) -> DiscreteState:
    """
    Integerize a parsed state and bind it to a reduced spectrum.

    Raises:
        FileFormatError: If decimal amplitudes have no common rational form
        AllZeroAmplitudes, DimensionMismatch: From state construction
    """
    if state_file.exact:
        amplitudes = integerize(state_file.amplitudes)
    else:
        amplitudes = rationalize_amplitudes(state_file.amplitudes, tol, max_den)
        if amplitudes is None:
            raise FileFormatError(
                f"decimal amplitudes are not commensurable within tol={tol} and max_den={max_den}"
            )
    return DiscreteState(amplitudes, spectrum, state_file.step if step is None else step)


# =============================================================================
# WRITING
# =============================================================================

def format_spectrum(energies: Sequence[RationalLike], comments: Sequence[str] = ()) -> str:
    header = "".join(f"# {comment}\n" for comment in comments)
    return header + "".join(f"{format_rational(e)}\n" for e in energies)


def format_state(alphas: Sequence[RationalLike], step: int = 0) -> str:
    body = "".join(f"{format_rational(a)}\n" for a in alphas)
    return f"amps:\n{body}step: {step}\n"


def write_spectrum(path: Union[str, Path], energies: Sequence[RationalLike], comments: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.write_text(format_spectrum(energies, comments), encoding="utf-8")
    logger.info(f"Wrote {len(energies)} energies to {path}")
    return path


def write_state(path: Union[str, Path], alphas: Sequence[RationalLike], step: int = 0) -> Path:
    path = Path(path)
    path.write_text(format_state(alphas, step), encoding="utf-8")
    logger.info(f"Wrote state with {len(alphas)} amplitudes to {path}")
    return path


# =============================================================================
# EXCEPTIONS
# =============================================================================

class FileFormatError(FiniteQMError, ValueError):
    """Raised when a spectrum or state file does not follow its grammar."""
    pass
