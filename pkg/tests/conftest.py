"""Shared test oracles, independent of the package's transformation matrices.

The final-state oracle assembles the free-evolution outcome branch by branch
from a hand-transcribed table: each initial x value lands on y = 3^x mod 4,
carries the phase accumulated while sitting at |x,0> during tau1 and at
|x,y> during tau2, and is then spread over k with the transcribed Fourier
coefficients. No package matrix is involved.
"""

import numpy as np


def idx(m: int, n: int) -> int:
    return 4 * m + n


#: Per initial x value: (y landing, Fourier coefficients over final k = 0..3).
BRANCH_TABLE = {
    0: (1, (1, 1, 1, 1)),
    1: (3, (1, 1j, -1, -1j)),
    2: (1, (1, -1, 1, -1)),
    3: (3, (1, -1j, -1, 1j)),
}


def ideal_final_state() -> np.ndarray:
    """Zero-delay outcome: (|0,1> + |2,1> + |0,3> - |2,3>) / 2."""
    state = np.zeros(16, dtype=complex)
    state[idx(0, 1)] = 0.5
    state[idx(2, 1)] = 0.5
    state[idx(0, 3)] = 0.5
    state[idx(2, 3)] = -0.5
    return state


def expected_final_state(spectrum, tau1: float, tau2: float) -> np.ndarray:
    """Brute-force free-evolution oracle: sum the four branch histories."""
    e = np.asarray(spectrum, dtype=float)
    out = np.zeros(16, dtype=complex)
    for m, (y, coeffs) in BRANCH_TABLE.items():
        history = np.exp(-1j * (e[idx(m, 0)] * tau1 + e[idx(m, y)] * tau2))
        for k in range(4):
            out[idx(k, y)] += 0.25 * coeffs[k] * history
    return out


def random_state(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    return z / np.linalg.norm(z)


def random_y0_state(rng: np.random.Generator) -> np.ndarray:
    """Random normalized state supported on the y = 0 slice."""
    state = np.zeros(16, dtype=complex)
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    state[[idx(m, 0) for m in range(4)]] = z / np.linalg.norm(z)
    return state
