"""Acceptance gate: every headline claim at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them on
success). Tolerances: 1e-12 for closed-form arithmetic, 1e-9 for anything
wrapped or integrated, 1e-8 for closed form vs integrator, 1e-10 for the
integrator's probability drift.
"""

import cmath
import contextlib
import math
import time

import numpy as np
import pytest

from conftest import ideal_final_state, idx, random_state
from shorphase import pulses, shor, statevec, transforms
from shorphase.config import DelaySchedule, ExperimentConfig, PipelineMode
from shorphase.pulses import PulseMode, PulseSpec, TwoLevelState, TwoLevelSystem, natural_init
from shorphase.statevec import wrap_phase

DEFAULT_SPECTRUM = statevec.additive_spectrum()


@contextlib.contextmanager
def criterion(label):
    try:
        yield
    except Exception:
        print(f"FAIL  {label}")
        raise
    print(f"PASS  {label}")


def fe_config(spectrum, tau1, tau2, **kwargs) -> ExperimentConfig:
    return ExperimentConfig(
        mode=PipelineMode.FREE_EVOLUTION,
        delays=DelaySchedule(tau1, tau2),
        spectrum=tuple(np.asarray(spectrum, dtype=float)),
        **kwargs,
    )


def test_criterion_1_ideal_run():
    with criterion("1: zero-delay run reproduces the clean pattern, period 2, factor 2, < 1 ms"):
        config = fe_config(DEFAULT_SPECTRUM, 0.0, 0.0)
        state = transforms.run_pipeline(config)
        np.testing.assert_allclose(state, ideal_final_state(), atol=1e-12)

        dist = statevec.measure_x_distribution(state)
        for x, p in shor.IDEAL_X_DISTRIBUTION.items():
            assert abs(dist[x] - p) <= 1e-12

        report = shor.run_experiment(config)
        assert report.period == 2
        assert report.factor == 2

        transforms.run_pipeline(config)  # warm

        best = math.inf
        for _ in range(5):
            start = time.perf_counter()
            transforms.run_pipeline(config)
            best = min(best, time.perf_counter() - start)
        assert best < 1e-3, f"pipeline run took {best * 1e3:.3f} ms"


def test_criterion_2_delays_destroy_interference():
    with criterion("2: default spectrum with delays 0.1/0.1 splits amp(1,1) per the half-sine law"):
        config = fe_config(DEFAULT_SPECTRUM, 0.1, 0.1)
        state = transforms.run_pipeline(config)
        residual = shor.check_condition(DEFAULT_SPECTRUM, config.delays, tol=1e-9)
        assert not residual.satisfied
        expected = 0.5 * abs(math.sin(residual.delta1 / 2.0))
        assert abs(abs(transforms.amplitude_of(state, 1, 1)) - expected) <= 1e-12
        assert expected == pytest.approx(0.1139887617675942, abs=1e-15)


def test_criterion_3_condition_equivalence_on_grid():
    with criterion("3: residual check agrees with the pipeline on a 1024-point delay grid, < 1 s"):
        table = np.zeros(16)
        table[idx(2, 0)] = 2.0
        table[idx(2, 1)] = 3.0
        table[idx(3, 0)] = 1.0
        table[idx(3, 3)] = 5.0
        taus = 2.0 * math.pi * np.arange(32) / 32.0

        start = time.perf_counter()
        points = 0
        for tau1 in taus:
            for tau2 in taus:
                delays = DelaySchedule(float(tau1), float(tau2))
                satisfied = shor.check_condition(table, delays, tol=1e-9).satisfied
                dist = statevec.measure_x_distribution(
                    transforms.run_pipeline(fe_config(table, delays.tau1, delays.tau2))
                )
                ideal = all(
                    abs(dist[x] - p) <= 1e-9 for x, p in shor.IDEAL_X_DISTRIBUTION.items()
                )
                assert satisfied == ideal, (float(tau1), float(tau2))
                points += 1
        elapsed = time.perf_counter() - start
        assert points == 1024
        assert elapsed < 1.0, f"grid took {elapsed:.2f} s"


def test_criterion_4_natural_phase_restores_interference():
    with criterion("4: natural-phase runs give the half/half distribution for 100 random settings"):
        rng = np.random.default_rng(71)
        for _ in range(100):
            spectrum = 3.0 * rng.standard_normal(16)
            tau1, tau2 = rng.uniform(0.0, 10.0, size=2)
            config = ExperimentConfig(
                mode=PipelineMode.NATURAL_PHASE,
                delays=DelaySchedule(tau1, tau2),
                spectrum=tuple(spectrum),
            )
            dist = statevec.measure_x_distribution(transforms.run_pipeline(config))
            for x, p in shor.IDEAL_X_DISTRIBUTION.items():
                assert abs(dist[x] - p) <= 1e-12


def _random_pulse_case(rng):
    e_k, e_p = rng.uniform(-3.0, 3.0, size=2)
    t0 = rng.uniform(-1.0, 1.0)
    tau = rng.uniform(0.2, 2.0)
    alpha = rng.uniform(0.1, math.pi)
    phi = rng.uniform(-math.pi, math.pi)
    modulus = rng.uniform(0.2, 1.0)
    return TwoLevelSystem(e_k, e_p), 2.0 * alpha / tau, t0, tau, phi, modulus


def test_criterion_5_closed_forms_match_integrator():
    with criterion("5: coherent and non-coherent closed forms match RK4 to 1e-8 on 100 cases"):
        rng = np.random.default_rng(72)
        for _ in range(100):
            system, rabi, t0, tau, phi, modulus = _random_pulse_case(rng)
            init = natural_init(modulus, system.e_k, t0)
            for mode, evolve in (
                (PulseMode.COHERENT, pulses.evolve_coherent),
                (PulseMode.NONCOHERENT, pulses.evolve_noncoherent),
            ):
                pulse = PulseSpec(mode=mode, rabi=rabi, t0=t0, tau=tau, phase=phi)
                closed = evolve(system, pulse, init)
                ode = pulses.integrate_ode(system, pulse, init)
                assert abs(ode.c_k - closed.c_k) <= 1e-8
                assert abs(ode.c_p - closed.c_p) <= 1e-8
                assert abs(ode.probability - init.probability) <= 1e-10


def test_criterion_6_phase_laws():
    with criterion("6: natural, history, and corrected phase laws hold mod 2 pi"):
        rng = np.random.default_rng(73)
        for _ in range(100):
            system, _, t0, tau, phi, modulus = _random_pulse_case(rng)
            alpha = rng.uniform(0.1, 1.45)  # positive cos and sin prefactors
            rabi = 2.0 * alpha / tau
            init = natural_init(modulus, system.e_k, t0)
            t_end = t0 + tau

            coherent = pulses.evolve_coherent(
                system, PulseSpec(mode=PulseMode.COHERENT, rabi=rabi, t0=t0, tau=tau, phase=phi),
                init,
            )
            assert abs(wrap_phase(
                cmath.phase(coherent.c_p) - (0.5 * math.pi - phi - system.e_p * t_end)
            )) <= 1e-9
            assert abs(wrap_phase(cmath.phase(coherent.c_k) + system.e_k * t_end)) <= 1e-9

            noncoherent = pulses.evolve_noncoherent(
                system,
                PulseSpec(mode=PulseMode.NONCOHERENT, rabi=rabi, t0=t0, tau=tau, phase=phi),
                init,
            )
            assert abs(wrap_phase(
                cmath.phase(noncoherent.c_p)
                - (0.5 * math.pi - phi - system.e_k * t0 - system.e_p * tau)
            )) <= 1e-9

            corrected = pulses.evolve_phase_corrected(
                system,
                PulseSpec(mode=PulseMode.PHASE_CORRECTED, rabi=rabi, t0=t0, tau=tau, phase=phi),
                init,
            )
            assert abs(corrected.c_k - coherent.c_k) <= 1e-12
            assert abs(corrected.c_p - coherent.c_p) <= 1e-12


def test_criterion_7_sudden_pulse_law():
    with criterion("7: sudden pulses rotate exactly and hand the parent phase to the newborn"):
        rng = np.random.default_rng(74)
        for _ in range(100):
            alpha = rng.uniform(-2.0 * math.pi, 2.0 * math.pi)
            modulus = rng.uniform(0.2, 1.0)
            theta = rng.uniform(-math.pi, math.pi)
            parent = modulus * cmath.exp(1j * theta)
            out = pulses.evolve_sudden(TwoLevelState(parent, 0.0), alpha)
            assert abs(out.c_k - parent * math.cos(alpha)) <= 1e-12
            assert abs(out.c_p - 1j * parent * math.sin(alpha)) <= 1e-12
            if math.sin(alpha) > 1e-6:
                assert abs(wrap_phase(
                    cmath.phase(out.c_p) - theta - 0.5 * math.pi
                )) <= 1e-12

            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            z /= np.linalg.norm(z)
            mixed = pulses.evolve_sudden(TwoLevelState(z[0], z[1]), alpha)
            assert abs(mixed.probability - 1.0) <= 1e-12


def test_criterion_8_history_decomposition():
    with criterion("8: the two branch histories rebuild the final |0,1> amplitude"):
        rng = np.random.default_rng(75)
        for _ in range(25):
            spectrum = 3.0 * rng.standard_normal(16)
            delays = DelaySchedule(*rng.uniform(0.0, 5.0, size=2))
            term_x0 = 0.25 * cmath.exp(
                -1j * (spectrum[idx(0, 0)] * delays.tau1 + spectrum[idx(0, 1)] * delays.tau2)
            )
            term_x2 = 0.25 * cmath.exp(
                -1j * (spectrum[idx(2, 0)] * delays.tau1 + spectrum[idx(2, 1)] * delays.tau2)
            )
            chain0 = transforms.run_history_chain(spectrum, delays, 0)[idx(0, 1)]
            chain2 = transforms.run_history_chain(spectrum, delays, 2)[idx(0, 1)]
            assert abs(chain0 - term_x0) <= 1e-12
            assert abs(chain2 - term_x2) <= 1e-12
            full = transforms.run_pipeline(fe_config(spectrum, delays.tau1, delays.tau2))
            assert abs(chain0 + chain2 - full[idx(0, 1)]) <= 1e-12


def test_criterion_9_property_suite():
    with criterion("9: unitarity, DFT order 4, evolution composition, seeded determinism"):
        rng = np.random.default_rng(76)

        for _ in range(50):
            state = random_state(rng)
            assert abs(statevec.norm(transforms.superpose_x(state)) - 1.0) <= 1e-12
            assert abs(statevec.norm(transforms.dft_x(state)) - 1.0) <= 1e-12

            y0_state = np.zeros(16, dtype=complex)
            z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            y0_state[[idx(m, 0) for m in range(4)]] = z / np.linalg.norm(z)
            assert abs(statevec.norm(transforms.apply_mod_exp(y0_state)) - 1.0) <= 1e-12

        for i in range(16):
            basis = np.zeros(16, dtype=complex)
            basis[i] = 1.0
            out = basis
            for _ in range(4):
                out = transforms.dft_x(out)
            np.testing.assert_allclose(out, basis, atol=1e-12)

        for _ in range(50):
            state = random_state(rng)
            spectrum = 5.0 * rng.standard_normal(16)
            t1, t2 = rng.uniform(0.0, 5.0, size=2)
            once = statevec.free_evolve(state, spectrum, t1 + t2)
            twice = statevec.free_evolve(statevec.free_evolve(state, spectrum, t1), spectrum, t2)
            np.testing.assert_allclose(once, twice, atol=1e-12)

        config = fe_config(DEFAULT_SPECTRUM, 0.4, 1.1, seed=23)
        a = shor.run_experiment(config)
        b = shor.run_experiment(config)
        np.testing.assert_array_equal(a.final_state, b.final_state)
        assert a.x_distribution == b.x_distribution
        assert (a.measured_x, a.period, a.factor, a.retries) == (
            b.measured_x, b.period, b.factor, b.retries,
        )
