import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morera.errors import (
    DomainError,
    InvalidStateError,
    ParameterDomainError,
    SamplingError,
)
from morera.extension import (
    analyze_circle,
    analyze_trace,
    analyze_with_refinement,
    evaluate_extension,
    extension_test,
    sample_circle,
)
from morera.funczoo import builtin, holomorphic_members
from morera.geometry import Circle, pencil_circle

RNG = np.random.default_rng(20240811)


def direct_dft(values):
    """O(N^2) Fourier sum, the independent oracle for analyze_circle."""
    n = len(values)
    ks = np.arange(-(n // 2), n // 2)
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.array([np.sum(values * np.exp(-1j * k * theta)) / n for k in ks])


class TestAnalyzeCircle:
    def test_monomial(self):
        data = analyze_circle(lambda z: z**2, Circle(0, 1.0), 16)
        assert data.coefficient(2) == pytest.approx(1.0, abs=1e-14)
        others = [data.coefficient(k) for k in data.k_values if k != 2]
        assert max(abs(c) for c in others) < 1e-14

    def test_conjugate(self):
        data = analyze_circle(np.conj, Circle(0, 1.0), 16)
        assert data.coefficient(-1) == pytest.approx(1.0, abs=1e-14)
        assert data.tail_energy_negative == pytest.approx(1.0, abs=1e-14)

    def test_counterexample_small_circle(self):
        f = builtin("counterexample").oracle
        data = analyze_circle(f, Circle(0, 0.5), 16)
        assert data.coefficient(3) == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_sampling_error_carries_theta(self):
        def f(z):
            if isinstance(z, np.ndarray):
                raise TypeError  # force the scalar path
            return 1.0 / (z - 0.5)  # pole on the circle at theta = 0

        with pytest.raises(SamplingError) as err:
            sample_circle(f, Circle(0, 0.5), 16)
        assert err.value.theta == pytest.approx(0.0)

    def test_bad_sample_count(self):
        with pytest.raises(ParameterDomainError):
            analyze_circle(lambda z: z, Circle(0, 1.0), 24)

    def test_parseval(self):
        f = builtin("expz").oracle
        trace = sample_circle(f, Circle(0.1 + 0.2j, 0.6), 64)
        data = analyze_trace(trace)
        mean_square = float(np.mean(np.abs(trace.values) ** 2))
        assert data.total_energy == pytest.approx(mean_square, rel=1e-10)

    @given(st.integers(0, 99))
    @settings(max_examples=40, deadline=None)
    def test_matches_direct_dft(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.choice([8, 16, 32]))
        center = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        radius = rng.uniform(0.1, 0.5)
        degree = int(rng.integers(0, 4))
        coeffs = rng.standard_normal((degree + 1, 2)) @ np.array([1.0, 1j])

        def f(z):
            zc = z - center
            return sum(c * zc**k + c.conjugate() * np.conj(zc) ** k for k, c in enumerate(coeffs))

        trace = sample_circle(f, Circle(center, radius), n)
        fast = analyze_trace(trace).coefficients
        slow = direct_dft(trace.values)
        assert np.abs(fast - slow).max() < 1e-12

    def test_rotation_leaves_magnitudes(self):
        # Rotating the parametrization start angle permutes the samples and
        # multiplies c_k by a unit phase: |c_k| must not move.
        f = builtin("rational").oracle
        circle = Circle(0.2 - 0.1j, 0.7)
        n = 64
        shift = cmath.exp(2j * math.pi * 5 / n)
        data = analyze_circle(f, circle, n)
        rotated = analyze_circle(lambda z: f(circle.center + (z - circle.center) * shift), circle, n)
        assert np.abs(np.abs(data.coefficients) - np.abs(rotated.coefficients)).max() < 1e-12


class TestExtensionTest:
    def test_pass_and_fail(self):
        ok = extension_test(analyze_circle(lambda z: z**2, Circle(0, 1.0), 256))
        assert ok.passes and not ok.aliasing_flag
        bad = extension_test(analyze_circle(np.conj, Circle(0, 1.0), 256))
        assert not bad.passes
        assert bad.negative_energy == pytest.approx(1.0, abs=1e-12)

    def test_result_invariant(self):
        data = analyze_circle(np.conj, Circle(0, 1.0), 64)
        r = extension_test(data)
        assert r.passes == (r.negative_energy <= r.threshold_used and not r.aliasing_flag)

    def test_counterexample_fails_small_pencil_circle(self):
        f = builtin("counterexample").oracle
        data = analyze_circle(f, pencil_circle(-0.7), 256)
        result = extension_test(data)
        assert not result.passes
        assert data.tail_energy_negative > 1e-2
        # closed-form pole strictly inside: |z_p - a| = r^2/|a| < r
        from morera.funczoo import counterexample_pole

        pole = counterexample_pole(-0.7, 0.3)
        assert abs(pole - (-0.7)) == pytest.approx(0.09 / 0.7)
        assert abs(pole - (-0.7)) < 0.3

    def test_zero_function_passes(self):
        data = analyze_circle(lambda z: 0.0, Circle(0, 0.5), 16)
        assert extension_test(data).passes

    def test_holomorphic_negative_energy_tiny(self):
        rng = np.random.default_rng(7)
        for entry in holomorphic_members():
            for _ in range(5):
                center = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
                radius = rng.uniform(0.05, 1.0 - abs(center))
                data = analyze_circle(entry.oracle, Circle(center, radius), 256)
                assert data.tail_energy_negative < 1e-20

    def test_aliasing_guard_and_refinement(self):
        f = lambda z: z**20
        data = analyze_circle(f, Circle(0, 1.0), 16)
        assert extension_test(data).aliasing_flag  # k=20 folds onto k=4
        data2, result2, inconclusive = analyze_with_refinement(f, Circle(0, 1.0), n0=16)
        assert result2.passes and not inconclusive
        assert data2.sample_count >= 64

    def test_refinement_cap_reports_inconclusive(self):
        f = lambda z: np.exp(1.0 / (z - 1.001))  # wild near the circle
        _, _, inconclusive = analyze_with_refinement(f, Circle(0, 1.0), n0=16, n_max=32)
        assert inconclusive


class TestEvaluateExtension:
    def test_square(self):
        data = analyze_circle(lambda z: z * z, Circle(0, 1.0), 256)
        assert evaluate_extension(data, 0.3 + 0.4j) == pytest.approx(-0.07 + 0.24j, abs=1e-12)

    def test_counterexample_closed_form(self):
        f = builtin("counterexample").oracle
        data = analyze_circle(f, Circle(0, 0.5), 64)
        assert evaluate_extension(data, 0.2) == pytest.approx(0.032, abs=1e-12)

    def test_constant_reproduces_mean_value(self):
        data = analyze_circle(lambda z: 3.5 - 1.25j, Circle(0.3j, 0.4), 32)
        assert evaluate_extension(data, 0.3j + 0.1) == pytest.approx(3.5 - 1.25j, abs=1e-12)

    def test_outside_disc_rejected(self):
        data = analyze_circle(lambda z: z, Circle(0, 0.5), 32)
        with pytest.raises(DomainError):
            evaluate_extension(data, 0.7)

    def test_failing_data_rejected(self):
        data = analyze_circle(np.conj, Circle(0, 1.0), 32)
        with pytest.raises(InvalidStateError):
            evaluate_extension(data, 0.1)

    def test_boundary_reproduces_trace(self):
        f = builtin("expz").oracle
        circle = Circle(0.1, 0.5)
        trace = sample_circle(f, circle, 128)
        data = analyze_trace(trace)
        for j in (0, 17, 64):
            zeta = circle.center + circle.radius * cmath.exp(2j * math.pi * j / 128)
            assert evaluate_extension(data, zeta) == pytest.approx(complex(trace.values[j]), abs=1e-12)

    def test_maximum_principle_surrogate(self):
        f = builtin("rational").oracle
        circle = Circle(-0.2 + 0.1j, 0.6)
        trace = sample_circle(f, circle, 256)
        data = analyze_trace(trace)
        bound = float(np.abs(trace.values).max()) + math.sqrt(data.tail_energy_negative) + 1e-10
        rng = np.random.default_rng(3)
        for _ in range(50):
            zeta = circle.center + circle.radius * rng.uniform(0, 1) * cmath.exp(
                2j * math.pi * rng.uniform(0, 1)
            )
            assert abs(evaluate_extension(data, zeta)) <= bound
