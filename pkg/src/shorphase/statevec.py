"""Four-qubit register state vectors, energy spectra, and free phase evolution.

The register holds two two-bit values: x (argument of the periodic function,
two left qubits) and y (its value, two right qubits). A basis state |m,n> with
m, n in 0..3 lives at flat index 4*m + n, where m = m0 + 2*m1 and n = n0 + 2*n1
decompose each value into qubit bits. Energies are angular frequencies with
hbar = 1, so a state of energy E picks up exp(-i*E*t) under free evolution.

State vectors are plain complex numpy arrays of length 16; energy spectra are
real arrays of length 16 in the same index order. All functions here are pure:
inputs are never mutated, results are fresh arrays.
"""

from __future__ import annotations

import numpy as np

DIM = 16
NUM_X = 4
NUM_Y = 4

#: Qubit angular frequencies (x0, x1, y0, y1) of the default additive spectrum.
#: Mutually incommensurate so that generic delays break the interference
#: condition instead of satisfying it by accident.
DEFAULT_OMEGAS = (1.0, 2.3, 3.7, 5.1)

#: Normalization slack accepted by measurement-side operations.
NORM_TOL = 1e-9


def basis_index(m: int, n: int) -> int:
    """Flat index of the basis state |m,n>."""
    if not (0 <= m < NUM_X and 0 <= n < NUM_Y):
        raise ValueError(f"basis label out of range: ({m}, {n})")
    return NUM_Y * m + n


def init_ground() -> np.ndarray:
    """All four qubits in the ground state: amplitude 1 on |0,0>."""
    state = np.zeros(DIM, dtype=complex)
    state[0] = 1.0
    return state


def norm(state: np.ndarray) -> float:
    """Euclidean norm sqrt(sum |amplitude|^2)."""
    return float(np.linalg.norm(np.asarray(state, dtype=complex)))


def additive_spectrum(omegas=DEFAULT_OMEGAS) -> np.ndarray:
    """Energy table E[4m+n] = w0*x0 + w1*x1 + w2*y0 + w3*y1 over the qubit bits.

    ``omegas`` are the four single-qubit frequencies in register order
    (x0, x1, y0, y1). Each excited qubit contributes its frequency.
    """
    omegas = np.asarray(omegas, dtype=float)
    if omegas.shape != (4,) or not np.all(np.isfinite(omegas)):
        raise ValueError("expected four finite qubit frequencies")
    energies = np.zeros(DIM)
    for m in range(NUM_X):
        for n in range(NUM_Y):
            energies[basis_index(m, n)] = (
                omegas[0] * (m & 1)
                + omegas[1] * ((m >> 1) & 1)
                + omegas[2] * (n & 1)
                + omegas[3] * ((n >> 1) & 1)
            )
    return energies


def make_spectrum(values) -> np.ndarray:
    """Build a spectrum from a 4-entry qubit-frequency quadruple or a full 16-entry table."""
    values = np.asarray(values, dtype=float)
    if values.shape == (4,):
        return additive_spectrum(values)
    if values.shape == (DIM,):
        if not np.all(np.isfinite(values)):
            raise ValueError("spectrum entries must be finite")
        return values.copy()
    raise ValueError(f"spectrum must have 4 or 16 entries, got shape {values.shape}")


def free_evolve(state: np.ndarray, spectrum: np.ndarray, dt: float) -> np.ndarray:
    """Evolve freely for time dt: each |m,n> amplitude gains exp(-i*E[m,n]*dt).

    Moduli are untouched, so the norm and every measurement marginal are
    preserved exactly. Negative or non-finite dt is rejected.
    """
    dt = float(dt)
    if not (dt >= 0.0 and np.isfinite(dt)):
        raise ValueError(f"dt must be finite and non-negative, got {dt}")
    amps = np.asarray(state, dtype=complex)
    energies = np.asarray(spectrum, dtype=float)
    if amps.shape != (DIM,) or energies.shape != (DIM,):
        raise ValueError("state and spectrum must both have 16 entries")
    return amps * np.exp(-1j * energies * dt)


def measure_x_distribution(state: np.ndarray) -> dict[int, float]:
    """Probability of each x outcome, summing |amplitude|^2 over the y register.

    The state must be normalized to within ``NORM_TOL``; the returned
    probabilities are rescaled by the total weight so they sum to 1 up to
    floating-point rounding.
    """
    amps = np.asarray(state, dtype=complex)
    weights = np.abs(amps.reshape(NUM_X, NUM_Y)) ** 2
    total = float(weights.sum())
    if abs(np.sqrt(total) - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: norm = {np.sqrt(total)}")
    marginal = weights.sum(axis=1) / total
    return {x: float(marginal[x]) for x in range(NUM_X)}


def draw_x(distribution: dict[int, float], rng: np.random.Generator) -> int:
    """Draw one x outcome from a distribution using a caller-owned generator."""
    u = rng.random()
    acc = 0.0
    for x in range(NUM_X):
        acc += distribution.get(x, 0.0)
        if u < acc:
            return x
    return NUM_X - 1


def sample_x(state: np.ndarray, seed: int) -> int:
    """Sample one x-register measurement outcome; identical seed, identical draw."""
    return draw_x(measure_x_distribution(state), np.random.default_rng(seed))


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """True if a equals exp(i*theta)*b for some real theta, within tol.

    theta is read off the largest-modulus componentwise overlap a_i * conj(b_i),
    then the residual norm ||a - exp(i*theta)*b|| is compared against tol.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = a * np.conj(b)
    i = int(np.argmax(np.abs(overlap)))
    if abs(overlap[i]) == 0.0:
        return float(np.linalg.norm(a - b)) <= tol
    phase = overlap[i] / abs(overlap[i])
    return float(np.linalg.norm(a - phase * b)) <= tol


def wrap_phase(angle):
    """Wrap an angle (scalar or array) into the interval (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2.0 * np.pi)
    if np.ndim(angle) == 0:
        return float(wrapped)
    return wrapped


def state_to_json(state: np.ndarray) -> list[list[float]]:
    """Serialize to the wire form: 16 [re, im] pairs in index order 4m+n."""
    amps = np.asarray(state, dtype=complex)
    if amps.shape != (DIM,):
        raise ValueError("state must have 16 entries")
    return [[float(z.real), float(z.imag)] for z in amps]


def state_from_json(pairs) -> np.ndarray:
    """Inverse of :func:`state_to_json`."""
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (DIM, 2) or not np.all(np.isfinite(arr)):
        raise ValueError("expected 16 finite [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def spectrum_to_json(spectrum: np.ndarray) -> list[float]:
    """Serialize a spectrum as 16 reals in index order 4m+n."""
    energies = np.asarray(spectrum, dtype=float)
    if energies.shape != (DIM,):
        raise ValueError("spectrum must have 16 entries")
    return [float(e) for e in energies]


def spectrum_from_json(values) -> np.ndarray:
    """Inverse of :func:`spectrum_to_json`."""
    arr = np.asarray(values, dtype=float)
    if arr.shape != (DIM,) or not np.all(np.isfinite(arr)):
        raise ValueError("expected 16 finite energies")
    return arr.copy()
