"""The three period-finding transformations and the end-to-end pipelines.

The run factors 4 with base 3: a Hadamard-type spread over the x register,
evaluation of y(x) = 3^x mod 4 into the y register, and a discrete Fourier
transform of the x register. Transformations act instantaneously; the clock
advances only while the register evolves freely between them.
"""

from __future__ import annotations

import math

import numpy as np

from . import statevec
from .config import DelaySchedule, ExperimentConfig, PipelineMode
from .statevec import DIM, NUM_X, NUM_Y, basis_index

__all__ = [
    "PipelineMode",
    "DelaySchedule",
    "SUPERPOSE_X_MATRIX",
    "DFT_MATRIX",
    "superpose_x",
    "mod_exp_classical",
    "apply_mod_exp",
    "dft_x",
    "amplitude_of",
    "run_pipeline",
    "run_history_chain",
]

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)

#: Hadamard on each x qubit; self-inverse, sends |x=0> to the uniform x spread.
SUPERPOSE_X_MATRIX = np.kron(_HADAMARD, _HADAMARD).astype(complex)

#: |x> -> (1/2) sum_k exp(2*pi*i*k*x/4) |k>; fourth power is the identity.
DFT_MATRIX = 0.5 * np.exp(2j * np.pi * np.outer(np.arange(NUM_X), np.arange(NUM_X)) / NUM_X)

#: y(x) = 3^x mod 4 for x = 0..3.
MOD_EXP_TABLE = tuple(pow(3, x, 4) for x in range(NUM_X))

#: Amplitude allowed outside the y=0 slice before the function evaluation.
_Y0_LEAK_TOL = 1e-12


def _apply_to_x(state: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    grid = np.asarray(state, dtype=complex).reshape(NUM_X, NUM_Y)
    return (matrix @ grid).reshape(-1)


def superpose_x(state: np.ndarray) -> np.ndarray:
    """Hadamard each x qubit, identity on y.

    From |0,0> this yields the uniform spread (1/2) sum_m |m,0>. The matrix is
    real and self-inverse, so applying it twice restores the input.
    """
    return _apply_to_x(state, SUPERPOSE_X_MATRIX)


def mod_exp_classical(x: int) -> int:
    """The periodic function y(x) = 3^x mod 4 (period 2)."""
    if not 0 <= x < NUM_X:
        raise ValueError(f"x out of range: {x}")
    return MOD_EXP_TABLE[x]


def apply_mod_exp(state: np.ndarray) -> np.ndarray:
    """Move each |m,0> amplitude to |m, 3^m mod 4>, phases carried unchanged.

    Defined only on states whose weight lies entirely in the y=0 slice; any
    amplitude elsewhere is rejected rather than mapped by a guessed extension.
    """
    grid = np.asarray(state, dtype=complex).reshape(NUM_X, NUM_Y)
    leak = float(np.abs(grid[:, 1:]).max())
    if leak > _Y0_LEAK_TOL:
        raise ValueError(
            f"amplitude outside the y=0 slice (max modulus {leak:.3e}); "
            "the function evaluation is defined only there"
        )
    out = np.zeros((NUM_X, NUM_Y), dtype=complex)
    for m in range(NUM_X):
        out[m, MOD_EXP_TABLE[m]] = grid[m, 0]
    return out.reshape(-1)


def dft_x(state: np.ndarray) -> np.ndarray:
    """Discrete Fourier transform of the x register: |x,n> -> (1/2) sum_k e^{2pi i k x/4} |k,n>."""
    return _apply_to_x(state, DFT_MATRIX)


def amplitude_of(state: np.ndarray, m: int, n: int) -> complex:
    """The |m,n> amplitude of a state."""
    return complex(np.asarray(state, dtype=complex)[basis_index(m, n)])


def _free_evolution_pipeline(spectrum: np.ndarray, delays: DelaySchedule) -> np.ndarray:
    state = statevec.init_ground()
    state = superpose_x(state)
    state = statevec.free_evolve(state, spectrum, delays.tau1)
    state = apply_mod_exp(state)
    state = statevec.free_evolve(state, spectrum, delays.tau2)
    return dft_x(state)


def run_pipeline(config: ExperimentConfig) -> np.ndarray:
    """Run the full transformation sequence and return the final state.

    FREE_EVOLUTION: ground state -> x spread -> idle tau1 -> function
    evaluation -> idle tau2 -> DFT. Each idle interval multiplies every
    amplitude by exp(-i*E*dt), so a term's final phase encodes the states it
    occupied along the way and the interference pattern depends on the delays.

    NATURAL_PHASE: same sequence, but every amplitude ends up carrying
    exp(-i*E_mn*(tau1+tau2)), the phase a stationary |m,n> state would have
    at the final clock time, on top of the transformation-intrinsic factors.
    Equivalently (and implemented as): the free-evolution pipeline with an
    all-zero spectrum, then one terminal phase per basis state. Moduli match
    the zero-delay run, so the x distribution is delay independent.
    """
    spectrum = np.asarray(config.spectrum, dtype=float)
    if config.mode is PipelineMode.NATURAL_PHASE:
        state = _free_evolution_pipeline(np.zeros(DIM), config.delays)
        return state * np.exp(-1j * spectrum * config.delays.total)
    return _free_evolution_pipeline(spectrum, config.delays)


def run_history_chain(spectrum, delays: DelaySchedule, x_initial: int) -> np.ndarray:
    """Run the post-spread stages from the single branch (1/2)|x_initial, 0>.

    Isolates the history of one term of the initial x spread: the returned
    (unnormalized) state is that branch's contribution to the full
    free-evolution run, and summing the branch states over x_initial = 0..3
    reproduces it exactly.
    """
    spectrum = np.asarray(spectrum, dtype=float)
    state = np.zeros(DIM, dtype=complex)
    state[basis_index(x_initial, 0)] = 0.5
    state = statevec.free_evolve(state, spectrum, delays.tau1)
    state = apply_mod_exp(state)
    state = statevec.free_evolve(state, spectrum, delays.tau2)
    return dft_x(state)
