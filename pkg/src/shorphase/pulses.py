"""Two-level dynamics for a single resonant transition |k> <-> |p>.

A pulse of Rabi frequency Omega and duration tau rotates population between
the levels by the area alpha = Omega*tau/2. What distinguishes the modes is
the phase of the drive:

* COHERENT: the pulse is cut from a continuous reference oscillation at the
  transition frequency w_pk = E_p - E_k, with offset ``phase`` relative to
  it. The drive argument is w_pk*t + phase in absolute time, and the newborn
  level ends the pulse with its natural phase exp(-i*E_p*(t0+tau)).
* NONCOHERENT: the pulse phase is referenced to its own start, so the drive
  argument is w_pk*(t - t0) + phase. The newborn level then carries a history
  phase exp(-i*E_k*t0 - i*E_p*tau) instead of the natural one; the error
  relative to the coherent pulse is w_pk*t0.
* PHASE_CORRECTED: a non-coherent pulse whose start phase is chosen as
  phase + w_pk*t0, which cancels the history offset and reproduces the
  coherent result exactly. ``phase`` holds the desired coherent-pulse phase.
* SUDDEN: the limit of a strong square non-resonant drive, V -> inf and
  tau -> 0 with V*tau -> area: an instantaneous rotation that hands the
  parent's accumulated phase (plus a quarter turn) to the newborn level.

Closed forms cover pulses starting with all population in |k>; anything else
goes through the fixed-step integrator, which is also the numerical oracle
for the closed forms.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .statevec import wrap_phase


class PulseMode(enum.Enum):
    COHERENT = "coherent"
    NONCOHERENT = "noncoherent"
    PHASE_CORRECTED = "phase-corrected"
    SUDDEN = "sudden"


RESONANT_MODES = (PulseMode.COHERENT, PulseMode.NONCOHERENT, PulseMode.PHASE_CORRECTED)


@dataclass(frozen=True)
class TwoLevelSystem:
    """Energies of the two levels; the transition frequency is their difference."""

    e_k: float
    e_p: float

    def __post_init__(self):
        for name in ("e_k", "e_p"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def omega_pk(self) -> float:
        return self.e_p - self.e_k


@dataclass(frozen=True)
class PulseSpec:
    """One pulse: coupling strength, timing, phase, and mode.

    In the resonant modes the pulse area is rabi*tau/2 and ``area`` must be
    left unset; in SUDDEN mode only ``area`` matters. ``phase`` is wrapped
    into (-pi, pi] at construction.
    """

    mode: PulseMode
    rabi: float = 0.0
    t0: float = 0.0
    tau: float = 0.0
    phase: float = 0.0
    area: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", PulseMode(self.mode))
        for name in ("rabi", "t0", "tau", "phase"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "phase", wrap_phase(self.phase))
        if self.mode is PulseMode.SUDDEN:
            if self.area is None or not math.isfinite(float(self.area)):
                raise ValueError("sudden mode needs a finite pulse area")
            object.__setattr__(self, "area", float(self.area))
        else:
            if self.area is not None:
                raise ValueError("area is only meaningful in sudden mode; set rabi and tau")
            if self.rabi < 0.0:
                raise ValueError(f"rabi must be non-negative, got {self.rabi}")
            if self.tau < 0.0:
                raise ValueError(f"tau must be non-negative, got {self.tau}")

    @property
    def pulse_area(self) -> float:
        """Rotation angle between the levels: rabi*tau/2, or ``area`` when sudden."""
        if self.mode is PulseMode.SUDDEN:
            return self.area
        return 0.5 * self.rabi * self.tau


@dataclass(frozen=True)
class TwoLevelState:
    """Complex amplitudes of |k> and |p>."""

    c_k: complex
    c_p: complex

    def __post_init__(self):
        object.__setattr__(self, "c_k", complex(self.c_k))
        object.__setattr__(self, "c_p", complex(self.c_p))

    @property
    def probability(self) -> float:
        return abs(self.c_k) ** 2 + abs(self.c_p) ** 2


def natural_init(modulus: float, e_k: float, t0: float) -> TwoLevelState:
    """Population in |k> only, carrying its natural phase exp(-i*E_k*t0)."""
    return TwoLevelState(modulus * cmath.exp(-1j * e_k * t0), 0.0)


def _require_mode(pulse: PulseSpec, mode: PulseMode) -> None:
    if pulse.mode is not mode:
        raise ValueError(f"expected a {mode.value} pulse, got {pulse.mode.value}")


def _closed_form(sys: TwoLevelSystem, pulse: PulseSpec, phi_eff: float,
                 init: TwoLevelState) -> TwoLevelState:
    # Exact solution for C_p(t0) = 0 under drive argument w_pk*t + phi_eff.
    alpha = pulse.pulse_area
    c_k = init.c_k * math.cos(alpha) * cmath.exp(-1j * sys.e_k * pulse.tau)
    c_p = init.c_k * math.sin(alpha) * cmath.exp(
        1j * (0.5 * math.pi - phi_eff + sys.e_k * pulse.t0 - sys.e_p * (pulse.t0 + pulse.tau))
    )
    return TwoLevelState(c_k, c_p)


def evolve_coherent(sys: TwoLevelSystem, pulse: PulseSpec, init: TwoLevelState) -> TwoLevelState:
    """Reference-locked pulse; C_p(t0) != 0 falls back to the integrator.

    Starting from C_k(t0) = |C_k|*exp(-i*E_k*t0) the final amplitudes are
    |C_k|*cos(alpha)*exp(-i*E_k*(t0+tau)) and
    |C_k|*sin(alpha)*exp(i*(pi/2 - phase))*exp(-i*E_p*(t0+tau)):
    both levels leave the pulse with natural phases.
    """
    _require_mode(pulse, PulseMode.COHERENT)
    if init.c_p != 0:
        return integrate_ode(sys, pulse, init)
    return _closed_form(sys, pulse, pulse.phase, init)


def evolve_noncoherent(sys: TwoLevelSystem, pulse: PulseSpec, init: TwoLevelState) -> TwoLevelState:
    """Start-referenced pulse; ``pulse.phase`` is the phase at t0.

    C_k evolves as in the coherent case, but the newborn amplitude ends as
    |C_k|*sin(alpha)*exp(i*(pi/2 - phase))*exp(-i*E_k*t0 - i*E_p*tau): a
    history phase recording that |p> was born from |k> at t0.
    """
    _require_mode(pulse, PulseMode.NONCOHERENT)
    if init.c_p != 0:
        return integrate_ode(sys, pulse, init)
    return _closed_form(sys, pulse, pulse.phase - sys.omega_pk * pulse.t0, init)


def evolve_phase_corrected(sys: TwoLevelSystem, pulse: PulseSpec,
                           init: TwoLevelState) -> TwoLevelState:
    """Non-coherent pulse fired with start phase ``pulse.phase`` + w_pk*t0.

    The correction cancels the start-time offset, so the result equals the
    coherent pulse with the same ``phase`` exactly. Any start-time error
    delta shifts the newborn phase by w_pk*delta.
    """
    _require_mode(pulse, PulseMode.PHASE_CORRECTED)
    if init.c_p != 0:
        return integrate_ode(sys, pulse, init)
    return _closed_form(sys, pulse, pulse.phase, init)


def evolve_sudden(init: TwoLevelState, area: float) -> TwoLevelState:
    """Instantaneous strong-pulse rotation by ``area``; the clock does not advance.

    With no population in |p> beforehand this gives
    C_k*cos(area) and i*C_k*sin(area): the newborn level inherits the
    parent's accumulated phase plus pi/2, not its own natural phase.
    """
    area = float(area)
    if not math.isfinite(area):
        raise ValueError("area must be finite")
    c, s = math.cos(area), math.sin(area)
    return TwoLevelState(init.c_k * c + 1j * init.c_p * s,
                         init.c_p * c + 1j * init.c_k * s)


def _drive_phase_at(sys: TwoLevelSystem, pulse: PulseSpec, t: float) -> float:
    if pulse.mode is PulseMode.NONCOHERENT:
        return sys.omega_pk * (t - pulse.t0) + pulse.phase
    # Coherent and phase-corrected drives coincide in absolute time.
    return sys.omega_pk * t + pulse.phase


def integrate_ode(sys: TwoLevelSystem, pulse: PulseSpec, init: TwoLevelState,
                  step: float | None = None) -> TwoLevelState:
    """Fixed-step RK4 integration of the coupled amplitude equations.

    i*dC_k/dt = E_k*C_k - (Omega/2)*exp(+i*theta(t))*C_p
    i*dC_p/dt = E_p*C_p - (Omega/2)*exp(-i*theta(t))*C_k

    with theta the mode's drive argument, integrated from t0 to t0+tau. The
    default step tau/1000 keeps the error and the norm drift far below the
    closed forms' comparison tolerances. Not defined for sudden pulses.
    """
    if pulse.mode is PulseMode.SUDDEN:
        raise ValueError("sudden pulses are instantaneous; use evolve_sudden")
    if step is not None and not (step > 0 and math.isfinite(step)):
        raise ValueError(f"step must be positive, got {step}")
    tau = pulse.tau
    if tau == 0.0:
        return init
    if step is None:
        step = tau / 1000.0
    n_steps = max(1, math.ceil(tau / step))
    dt = tau / n_steps

    e_k, e_p, half_rabi = sys.e_k, sys.e_p, 0.5 * pulse.rabi

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        drive = cmath.exp(1j * _drive_phase_at(sys, pulse, t))
        return np.array(
            [
                -1j * e_k * y[0] + 1j * half_rabi * drive * y[1],
                -1j * e_p * y[1] + 1j * half_rabi * drive.conjugate() * y[0],
            ]
        )

    y = np.array([init.c_k, init.c_p], dtype=complex)
    t = pulse.t0
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return TwoLevelState(complex(y[0]), complex(y[1]))
