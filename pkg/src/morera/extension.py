"""Holomorphic extendability of a function from a single circle.

A function restricted to a circle extends holomorphically into the disc it
bounds iff its Fourier series on the circle has no negative-frequency
content.  Numerically we sample the trace at N equispaced angles, take the
discrete Fourier transform, and measure the energy in negative bins plus a
high-frequency aliasing guard.  The nonnegative part of the series doubles as
the extension itself, evaluated as a power series in (zeta - center)/radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidStateError, ParameterDomainError, SamplingError
from .geometry import Circle

# Relative negative-tail energy threshold below which a trace counts as
# holomorphically extendable.
DEFAULT_MORERA_TOL = 1e-8
# Default and maximum sample counts; doubling stops at the maximum and the
# analysis is then reported as inconclusive by the sweep layer.
DEFAULT_SAMPLES = 256
MAX_SAMPLES = 4096
# Absolute energy floor so that the zero function trivially passes.
ENERGY_FLOOR = 1e-30

Oracle = Callable[[complex], complex]


@dataclass(frozen=True)
class CircleTrace:
    """Samples of a function at N equispaced points of a circle.

    ``values[k]`` is the function at ``circle.center + circle.radius *
    exp(2j*pi*k/N)``.  N must be a power of two, at least 8.
    """

    circle: Circle
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        n = values.shape[0]
        if values.ndim != 1 or n < 8 or n & (n - 1):
            raise ParameterDomainError(f"sample count must be a power of two >= 8, got shape {values.shape}")

    @property
    def sample_count(self) -> int:
        return self.values.shape[0]

    @property
    def thetas(self) -> np.ndarray:
        n = self.sample_count
        return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class FourierData:
    """DFT of a circle trace, indexed k in [-N/2, N/2).

    ``coefficients[j]`` is the coefficient of frequency ``k_values[j]``;
    ``tail_energy_negative`` sums |c_k|^2 over k < 0 (the obstruction to a
    holomorphic extension) and ``tail_energy_high`` over |k| >= N/4 (an
    undersampling alarm).
    """

    circle: Circle
    coefficients: np.ndarray
    tail_energy_negative: float
    tail_energy_high: float

    @property
    def sample_count(self) -> int:
        return self.coefficients.shape[0]

    @property
    def k_values(self) -> np.ndarray:
        n = self.sample_count
        return np.arange(-(n // 2), n // 2)

    def coefficient(self, k: int) -> complex:
        n = self.sample_count
        if not -(n // 2) <= k < n // 2:
            raise ParameterDomainError(f"frequency {k} outside [-{n // 2}, {n // 2})")
        return complex(self.coefficients[k + n // 2])

    @property
    def total_energy(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))


@dataclass(frozen=True)
class ExtensionResult:
    """Outcome of the extendability test for one circle."""

    passes: bool
    negative_energy: float
    threshold_used: float
    aliasing_flag: bool


def oracle_values(f: Oracle, points: np.ndarray, check: bool = True) -> np.ndarray:
    """Evaluate an oracle on an arbitrary-shape point array.

    Tries one vectorized call with the full array first and falls back to a
    scalar loop for oracles that only accept single points.  With ``check``
    set, non-finite samples raise :class:`SamplingError`.
    """
    points = np.asarray(points, dtype=complex)
    values = None
    try:
        raw = np.asarray(f(points), dtype=complex)
        if raw.shape == points.shape:
            values = raw
        elif raw.shape == ():
            values = np.full(points.shape, complex(raw))
    except Exception:
        values = None
    if values is None:
        flat = np.array([complex(f(p)) for p in points.ravel()])
        values = flat.reshape(points.shape)
    if check:
        bad = ~np.isfinite(values.real) | ~np.isfinite(values.imag)
        if bad.any():
            j = np.unravel_index(int(np.argmax(bad)), values.shape)
            raise SamplingError(
                f"oracle returned non-finite value {values[j]} at point {points[j]}",
                value=complex(values[j]),
            )
    return values


def sample_circle(f: Oracle, circle: Circle, n: int) -> CircleTrace:
    """Sample ``f`` at ``n`` equispaced points of ``circle``.

    Non-finite samples raise :class:`SamplingError` carrying the offending
    angle.
    """
    n = int(n)
    if n < 8 or n & (n - 1):
        raise ParameterDomainError(f"sample count must be a power of two >= 8, got {n}")
    theta = 2.0 * np.pi * np.arange(n) / n
    points = circle.center + circle.radius * np.exp(1j * theta)
    values = oracle_values(f, points, check=False)
    bad = ~np.isfinite(values.real) | ~np.isfinite(values.imag)
    if bad.any():
        j = int(np.argmax(bad))
        raise SamplingError(
            f"oracle returned non-finite value {values[j]} at theta = {theta[j]} on {circle}",
            theta=float(theta[j]),
            value=complex(values[j]),
        )
    return CircleTrace(circle, values)


def analyze_trace(trace: CircleTrace) -> FourierData:
    """Fourier coefficients c_k = (1/N) sum_j values_j exp(-i k theta_j)."""
    n = trace.sample_count
    c = np.fft.fft(trace.values) / n
    # reorder from [0..N/2-1, -N/2..-1] to [-N/2 .. N/2-1]
    coeffs = np.concatenate([c[n // 2 :], c[: n // 2]])
    k = np.arange(-(n // 2), n // 2)
    energy = np.abs(coeffs) ** 2
    negative = float(np.sum(energy[k < 0]))
    high = float(np.sum(energy[np.abs(k) >= n // 4]))
    return FourierData(trace.circle, coeffs, negative, high)


def analyze_circle(f: Oracle, circle: Circle, n: int = DEFAULT_SAMPLES) -> FourierData:
    """Sample ``f`` on ``circle`` and Fourier-analyze the trace."""
    return analyze_trace(sample_circle(f, circle, n))


@lru_cache(maxsize=4096)
def _cached_analysis(f: Oracle, center: complex, radius: float, n: int) -> FourierData:
    return analyze_circle(f, Circle(center, radius), n)


def cached_analyze(f: Oracle, circle: Circle, n: int = DEFAULT_SAMPLES) -> FourierData:
    """Memoized :func:`analyze_circle` (same oracle object, circle and N)."""
    return _cached_analysis(f, circle.center, circle.radius, n)


def extension_test(data: FourierData, tol: float = DEFAULT_MORERA_TOL) -> ExtensionResult:
    """Decide extendability from the negative-tail energy of ``data``.

    Passes iff the negative-frequency energy is at most ``tol`` times the
    total energy (plus a tiny absolute floor) and the high-frequency aliasing
    guard stays below the same threshold.
    """
    if not tol > 0.0:
        raise ParameterDomainError(f"tolerance must be positive, got {tol}")
    threshold = tol * (data.total_energy + ENERGY_FLOOR)
    aliasing = data.tail_energy_high > threshold
    passes = data.tail_energy_negative <= threshold and not aliasing
    return ExtensionResult(passes, data.tail_energy_negative, threshold, aliasing)


def analyze_with_refinement(
    f: Oracle,
    circle: Circle,
    tol: float = DEFAULT_MORERA_TOL,
    n0: int = DEFAULT_SAMPLES,
    n_max: int = MAX_SAMPLES,
) -> tuple[FourierData, ExtensionResult, bool]:
    """Analyze a circle, doubling N while the aliasing guard trips.

    Returns the final data and test result plus an ``inconclusive`` flag that
    is set when the guard still trips at ``n_max`` samples.
    """
    n = int(n0)
    while True:
        data = cached_analyze(f, circle, n)
        result = extension_test(data, tol)
        if not result.aliasing_flag or n >= n_max:
            return data, result, result.aliasing_flag
        n *= 2


def evaluate_extension(
    data: FourierData,
    zeta: complex,
    result: ExtensionResult | None = None,
    tol: float = DEFAULT_MORERA_TOL,
) -> complex:
    """Value at ``zeta`` of the holomorphic extension encoded by ``data``.

    Sums the nonnegative-frequency series sum_{k>=0} c_k ((zeta - a)/r)^k,
    truncated at k = N/2 - 1.  ``zeta`` must lie in the closed disc; on the
    circle itself the series reproduces the trace up to the tail energy.
    Refuses to run when the extendability test failed.
    """
    if result is None:
        result = extension_test(data, tol)
    if not result.passes:
        raise InvalidStateError(
            f"extension evaluated on data that fails the extendability test "
            f"(negative energy {data.tail_energy_negative:.3e}) on {data.circle}"
        )
    circle = data.circle
    u = (complex(zeta) - circle.center) / circle.radius
    if abs(u) > 1.0 + 1e-12:
        raise DomainError(f"zeta = {zeta} outside the closed disc of {circle}")
    n = data.sample_count
    nonneg = data.coefficients[n // 2 :]
    # Horner evaluation of sum c_k u^k, highest degree first.
    acc = 0.0 + 0.0j
    for c in nonneg[::-1]:
        acc = acc * u + c
    return complex(acc)
