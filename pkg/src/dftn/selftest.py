"""
Property suites run by ``dftn selftest``.

Each suite draws its cases from a seeded generator and reports how many
cases it ran and how many failed. Sizes are reduced versions of the full
acceptance runs so the command finishes in seconds.
"""

import time
from typing import Callable, Dict, List, NamedTuple

import numpy as np

from dftn.bitpack import (
    compute_thresholds,
    conv1d_packed,
    dense_packed,
    dot_packed,
    pack_ternary,
    quantize_bn_apply,
)
from dftn.core.conv import conv1d_forward
from dftn.errors import DegenerateInputError
from dftn.fusion.sampling import keep_probability, sample_fusion_weights
from dftn.fusion.spec import BranchSpec, FusionMode, FusionSpec
from dftn.logging import get_logger
from dftn.model.layers import EffectiveWeights, ternary_dense_backward
from dftn.quantize import (
    QuantConfig,
    quantize_linear,
    quantize_weights,
    reconstruction_bound_check,
    ste_activation_grad,
)

logger = get_logger("dftn.selftest")

GRID = np.array([-0.5, 0.0, 0.5], dtype=np.float32)


class SuiteResult(NamedTuple):
    name: str
    cases: int
    failures: int
    seconds: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _ternary(rng: np.random.Generator, shape, density: float = 0.66) -> np.ndarray:
    values = rng.choice(GRID[[0, 2]], size=shape)
    return np.where(rng.random(shape) < density, values, 0.0).astype(np.float32)


def check_quantizer_ground_truth(rng: np.random.Generator, scale: int) -> SuiteResult:
    cases = [
        (quantize_linear(np.array([-0.85, 0.22, 0.67]), 1.0, 2), np.array([-0.5, 0.0, 0.5])),
        (quantize_linear(0.22, 3.0, 2), 0.5),
        (quantize_linear(0.25, 1.0, 2), 0.5),
        (quantize_linear(-0.25, 1.0, 2), -0.5),
        (quantize_linear(0.0, 1.0, 2), 0.0),
    ]
    failures = sum(0 if np.array_equal(got, want) else 1 for got, want in cases)
    signed_zero = np.signbit(quantize_linear(np.array([-0.1]), 1.0, 2)).any()
    return SuiteResult("quantizer ground truth", len(cases) + 1, failures + int(signed_zero), 0.0)


def check_packed_exactness(rng: np.random.Generator, scale: int) -> SuiteResult:
    failures = 0
    pairs = 200 * scale
    for _ in range(pairs):
        n = int(rng.integers(1, 4097))
        a, b = _ternary(rng, n), _ternary(rng, n)
        expected = float(np.dot(a.astype(np.float64), b.astype(np.float64)))
        failures += dot_packed(pack_ternary(a), pack_ternary(b)) != expected

    layers = 10 * scale
    for _ in range(layers):
        alpha = float(rng.uniform(0.1, 2.0))
        batch, n_in, n_out = (int(v) for v in rng.integers(1, 70, size=3))
        x, w = _ternary(rng, (batch, n_in)), _ternary(rng, (n_in, n_out))
        expected = (x @ w) * np.float32(alpha)
        failures += not np.array_equal(
            dense_packed(pack_ternary(x), pack_ternary(w, alpha)), expected
        )

        c_in, c_out, kh = (int(v) for v in rng.integers(1, 9, size=3))
        length, stride = kh + int(rng.integers(0, 40)), int(rng.integers(1, 3))
        x, k = _ternary(rng, (2, c_in, length)), _ternary(rng, (c_out, c_in, kh))
        expected = conv1d_forward(x, k, stride) * np.float32(alpha)
        failures += not np.array_equal(
            conv1d_packed(pack_ternary(x), pack_ternary(k, alpha), stride), expected
        )
    return SuiteResult("packed kernel exactness", pairs + 2 * layers, int(failures), 0.0)


def check_reconstruction_bound(rng: np.random.Generator, scale: int) -> SuiteResult:
    failures, cases, worst = 0, 0, -np.inf
    for n in (16, 256, 4096):
        for xi in (2.0, 2.8, 3.5):
            for _ in range(4 * scale):
                W = rng.standard_normal(n)
                result = quantize_weights(W, QuantConfig(xi=xi))
                try:
                    check = reconstruction_bound_check(W, result)
                except DegenerateInputError:
                    continue
                cases += 1
                failures += not check.holds
                worst = max(worst, check.lhs - check.rhs)
    return SuiteResult("restricted bound", cases, failures, 0.0, f"max lhs-rhs {worst:.3g}")


def check_alpha_consistency(rng: np.random.Generator, scale: int) -> SuiteResult:
    failures, cases = 0, 0
    for _ in range(30 * scale):
        W = rng.standard_normal(int(rng.integers(8, 2048)))
        result = quantize_weights(W, QuantConfig())
        support = result.support_set
        if len(support) == 0:
            continue
        cases += 1
        closed_form = 2.0 / len(support) * float(np.sum(np.abs(W[support])))
        failures += abs(result.alpha - closed_form) > 1e-12 * max(1.0, closed_form)
    return SuiteResult("alpha consistency", cases, int(failures), 0.0)


def check_bn_thresholds(rng: np.random.Generator, scale: int) -> SuiteResult:
    count = 2000 * scale
    gamma = rng.uniform(0.05, 3.0, count) * rng.choice([-1.0, 1.0], count)
    beta = rng.uniform(-2.0, 2.0, count)
    x_hat = rng.standard_normal(count) * 2.0
    failures = 0
    for epsilon in (1.0, 0.5, 0.25):
        direct = quantize_linear(gamma * x_hat + beta, epsilon, 2)
        thresholds = compute_thresholds(gamma, beta, epsilon)
        # one sample per channel: [1, C]
        folded = quantize_bn_apply(x_hat[None, :], thresholds)[0]
        failures += int(np.count_nonzero(folded != direct))
    return SuiteResult("batch-norm thresholds", 3 * count, failures, 0.0)


def check_bernoulli_fusion(rng: np.random.Generator, scale: int) -> SuiteResult:
    dim, m = 10_000, 1000
    spec = FusionSpec(
        mode=FusionMode.DYNAMIC,
        branches=(BranchSpec("kept", 0, 1), BranchSpec("reduced", 1, 2, reduced=True)),
    )
    failures, cases = 0, 0
    for p in (0.0, 0.1, 0.25, 0.5):
        nonzero = int(round(2 * p * m))
        W_q = np.zeros(m, dtype=np.float32)
        W_q[rng.permutation(m)[:nonzero]] = rng.choice(GRID[[0, 2]], size=nonzero)
        cases += 2
        failures += keep_probability(W_q) != nonzero * 0.5 / m
        weights = sample_fusion_weights(
            spec, [np.ones(1), W_q], QuantConfig(), rng, feature_dims=[1, dim], quantized=True
        )
        rate = float(weights.masks[1].mean())
        failures += abs(rate - p) > 3 * np.sqrt(p * (1 - p) / dim) or (p == 0 and rate != 0)
    return SuiteResult("bernoulli fusion", cases, int(failures), 0.0)


def check_ste(rng: np.random.Generator, scale: int) -> SuiteResult:
    failures, cases = 0, 0
    step = 1e-6
    for _ in range(5 * scale):
        n_in, n_out = (int(v) for v in rng.integers(2, 12, size=2))
        x = rng.standard_normal((3, n_in))
        weights = EffectiveWeights(
            values=_ternary(rng, (n_in, n_out)).astype(np.float64),
            alpha=float(rng.uniform(0.2, 2.0)),
        )
        upstream = rng.standard_normal((3, n_out))

        def loss(inputs: np.ndarray) -> float:
            return float(np.sum(upstream * weights.alpha * (inputs @ weights.values)))

        grad_input, _, _ = ternary_dense_backward(upstream, x, weights)
        numeric = np.zeros_like(x)
        for index in np.ndindex(x.shape):
            bumped = x.copy()
            bumped[index] += step
            lowered = x.copy()
            lowered[index] -= step
            numeric[index] = (loss(bumped) - loss(lowered)) / (2 * step)
        error = np.linalg.norm(grad_input - numeric) / max(np.linalg.norm(numeric), 1e-12)
        cases += 1
        failures += error >= 1e-3

    A = rng.uniform(-1.5, 1.5, 1000)
    grad = ste_activation_grad(np.ones_like(A), A)
    cases += 1
    failures += not (np.all(grad[np.abs(A) > 0.5] == 0) and np.all(grad[np.abs(A) <= 0.5] == 1))
    return SuiteResult("straight-through gradients", cases, int(failures), 0.0)


SUITES: Dict[str, Callable[[np.random.Generator, int], SuiteResult]] = {
    "quantizer": check_quantizer_ground_truth,
    "kernels": check_packed_exactness,
    "bound": check_reconstruction_bound,
    "alpha": check_alpha_consistency,
    "bn": check_bn_thresholds,
    "fusion": check_bernoulli_fusion,
    "ste": check_ste,
}


def run_selftest(seed: int = 0, scale: int = 1) -> List[SuiteResult]:
    """Run every suite with its own generator derived from ``seed``"""
    results = []
    for index, (key, suite) in enumerate(SUITES.items()):
        started = time.perf_counter()
        result = suite(np.random.default_rng([seed, index]), scale)
        result = result._replace(seconds=time.perf_counter() - started)
        level = logger.info if result.passed else logger.error
        level(f"selftest {key}: {result.cases - result.failures}/{result.cases} passed")
        results.append(result)
    return results
