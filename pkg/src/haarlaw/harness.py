"""Equality-in-law comparisons and limit-theorem experiments.

Each comparison draws two batches from registered samplers (left from
substream 0 of the root seed, right from substream 1), runs two-sample KS
on Re Z, Im Z and |Z| (plus arg Z for first-column comparisons), and checks
each side's exact moment targets with 3-standard-error bands.
"""

import time
from dataclasses import asdict, dataclass

import numpy as np

from .haar import batch_cycle_stats, sample_haar_unitary_ginibre, sample_phased_permutations
from .kernels import RngStream, as_stream
from .linalg import lu_det
from .products import log_z_full, sample_cycle_count_sum, sample_log_process, sample_unitary_product
from .samplers import generate, get_sampler
from .stats import (
    FunctionalResult,
    MomentResult,
    TestReport,
    cycle_count_exact_law,
    ks_one_sample,
    ks_two_sample,
    mean_estimate,
    total_variation,
    variance_estimate,
)

__all__ = [
    "SamplerRef",
    "Comparison",
    "COMPARISONS",
    "named_comparison",
    "compare_laws",
    "cycles_report",
    "variance_scaling_report",
    "process_report",
    "bench",
]


@dataclass(frozen=True)
class SamplerRef:
    sampler: str
    n: int


@dataclass(frozen=True)
class Comparison:
    """Descriptor for one ``left law= right`` check."""

    test_id: str
    left: SamplerRef
    right: SamplerRef
    count: int
    seed: int
    level: float = 1e-3
    use_arg: bool = False
    workers: int = 1


# name -> (left sampler, right sampler, also compare arg Z, description)
COMPARISONS = {
    "thm11": ("unitary-recursive-det", "unitary-ginibre-det", False,
              "recursive reflection sampler vs Ginibre sampler, law of det(Id - G)"),
    "thm12": ("unitary-ginibre-det", "thm12-factorized", False,
              "det(Id_n - G) vs (1 - <e_1, G' e_1>) det(Id_{n-1} - H)"),
    "cor11": ("unitary-ginibre-det", "unitary-product", False,
              "det(Id - G) vs prod (1 - e^{i theta_k} sqrt(Beta(1, k-1)))"),
    "cor12": ("permutation-det", "permutation-product", False,
              "det(Id - S), S phased permutation, vs prod (1 - e^{i theta_k} X_k)"),
    "atj": ("unitary-ginibre-det", "verblunsky-product", False,
            "det(Id - G) vs Phi_n(1) = prod-law of (1 - alpha_j)"),
    "remark-product": ("permutation-product", "cycle-phase-product", False,
                       "prod (1 - e^{i theta_k} X_k) vs prod over cycles (1 - e^{i a_k})"),
    "first-column": ("first-column-ginibre", "first-column-law", True,
                     "<e_1, G e_1> vs e^{i theta} sqrt(Beta(1, n-1))"),
    "first-column-recursive": ("first-column-recursive", "first-column-law", True,
                               "<e_1, G e_1> (recursive sampler) vs e^{i theta} sqrt(Beta(1, n-1))"),
}


def named_comparison(name, n, count, seed, level=1e-3, workers=1):
    """Build the :class:`Comparison` registered under `name`."""
    try:
        left, right, use_arg, _ = COMPARISONS[name]
    except KeyError:
        raise ValueError(f"unknown comparison {name!r}; known: {', '.join(COMPARISONS)}") from None
    return Comparison(name, SamplerRef(left, n), SamplerRef(right, n), count, seed, level, use_arg, workers)


def _functionals(use_arg):
    fs = [("Re", np.real), ("Im", np.imag), ("abs", np.abs)]
    if use_arg:
        fs.append(("arg", np.angle))
    return fs


def _moment_checks(side, ref, values):
    out = []
    for name, fn, target in get_sampler(ref.sampler).moments(ref.n):
        est, se = mean_estimate(fn(values))
        out.append(MomentResult(f"{side}:{name}", est, se, target))
    return out


def compare_laws(comparison):
    """Run one comparison descriptor and return its :class:`TestReport`."""
    start = time.perf_counter()
    for ref in (comparison.left, comparison.right):
        get_sampler(ref.sampler)
    root = RngStream(comparison.seed)
    a = generate(comparison.left.sampler, comparison.left.n, comparison.count, root.substream(0), comparison.workers)
    b = generate(comparison.right.sampler, comparison.right.n, comparison.count, root.substream(1), comparison.workers)
    report = TestReport(comparison.test_id)
    for name, fn in _functionals(comparison.use_arg):
        d, p = ks_two_sample(fn(a), fn(b))
        report.functionals.append(FunctionalResult(name, d, p, p > comparison.level))
    report.moments += _moment_checks("left", comparison.left, a)
    report.moments += _moment_checks("right", comparison.right, b)
    report.metadata = {
        "descriptor": asdict(comparison),
        "wall_time": time.perf_counter() - start,
    }
    return report


def cycles_report(n, count, seed, tv_tolerance=0.01):
    """Cycle-count law from both ends against the exact Stirling law.

    Empirical counts from uniform permutations and from Bernoulli sums are
    each compared with the exact law (TV distance), and ``E[2^k] = n + 1``
    is checked on both. The exact law is only available for ``n <= 12``;
    beyond that only the moment checks run.
    """
    start = time.perf_counter()
    root = RngStream(seed)
    perm_counts = np.concatenate([
        batch_cycle_stats(*sample_phased_permutations(n, root.substream(0).substream(i), m))[0]
        for i, m in enumerate(_chunks(count))
    ])
    sum_counts = np.concatenate([
        sample_cycle_count_sum(n, root.substream(1).substream(i), m)
        for i, m in enumerate(_chunks(count))
    ])
    report = TestReport("cycles")
    if n <= 12:
        law = cycle_count_exact_law(n)
        for side, counts in (("permutation", perm_counts), ("bernoulli-sum", sum_counts)):
            tv = total_variation(counts, law)
            report.moments.append(MomentResult(f"{side}:TV", tv, 0.0, 0.0, tolerance=tv_tolerance))
        report.metadata["exact_law"] = {str(k): v for k, v in law.items()}
    for side, counts in (("permutation", perm_counts), ("bernoulli-sum", sum_counts)):
        est, se = mean_estimate(2.0 ** counts)
        report.moments.append(MomentResult(f"{side}:E[2^k]", est, se, float(n + 1)))
        values, freq = np.unique(counts, return_counts=True)
        report.metadata[f"{side}_histogram"] = {str(v): int(f) for v, f in zip(values, freq)}
    report.metadata.update(n=n, count=count, seed=seed, wall_time=time.perf_counter() - start)
    return report


def _chunks(count, size=20000):
    return [min(size, count - lo) for lo in range(0, count, size)]


def variance_scaling_report(n_small, n_large, paths, rng, tolerance=0.1, level=1e-3):
    """Differenced variance of log Z between two sizes, plus a normality check.

    ``Var(Re log Z_n)`` grows like ``log(n) / 2``; the difference between two
    sizes cancels the O(1) constant and is compared with
    ``log(n_large / n_small) / 2``. Standardized ``Re log Z`` at `n_large` is
    tested against the standard normal.
    """
    if n_small > n_large:
        raise ValueError("need n_small <= n_large")
    start = time.perf_counter()
    rng = as_stream(rng)
    small = log_z_full(n_small, rng.substream(0), paths)
    large = small if n_large == n_small else log_z_full(n_large, rng.substream(1), paths)
    target = 0.5 * np.log(n_large / n_small)
    report = TestReport("clt")
    for part, fn in (("Re", np.real), ("Im", np.imag)):
        vs, ses = variance_estimate(fn(small))
        vl, sel = variance_estimate(fn(large))
        report.moments.append(
            MomentResult(f"Var({part} log Z) difference", vl - vs, float(np.hypot(ses, sel)),
                         float(target), tolerance=tolerance)
        )
        report.metadata[f"var_{part.lower()}"] = {"n_small": vs, "n_large": vl}
    x = large.real
    d, p = ks_one_sample((x - x.mean()) / x.std(ddof=1))
    report.functionals.append(FunctionalResult("normality(Re log Z)", d, p, p > level))
    report.metadata.update(n_small=n_small, n_large=n_large, paths=paths, seed=rng.seed,
                           wall_time=time.perf_counter() - start)
    return report


def process_report(n, t, paths, rng, split=(0.3, 0.6), tolerance=0.02):
    """Fixed-time variance and increment decorrelation of the log process.

    Checks ``Var(Re L_t)`` against ``-log(1 - t) / 2`` and the correlation of
    real increments over ``(0, split[0]]`` and ``(split[0], split[1]]``
    against 0, both to an absolute `tolerance`.
    """
    start = time.perf_counter()
    rng = as_stream(rng)
    report = TestReport("process")
    path = sample_log_process(n, [0.0, t], rng.substream(0), paths)
    var, se = variance_estimate(path.values[:, 1].real)
    report.moments.append(
        MomentResult(f"Var(Re L_{t})", var, se, float(-0.5 * np.log1p(-t)), tolerance=tolerance)
    )
    grid = [0.0, split[0], split[1]]
    inc = sample_log_process(n, grid, rng.substream(1), paths).values.real
    first, second = inc[:, 1] - inc[:, 0], inc[:, 2] - inc[:, 1]
    corr = float(np.corrcoef(first, second)[0, 1])
    report.moments.append(
        MomentResult("corr(Re increments)", corr, 1.0 / np.sqrt(paths), 0.0, tolerance=tolerance)
    )
    report.metadata.update(n=n, t=t, paths=paths, split=list(split), seed=rng.seed,
                           wall_time=time.perf_counter() - start)
    return report


def bench(n, seed, matrix_reps=3, product_reps=200):
    """Per-sample wall time of the matrix path vs the O(n) product path.

    Matrix path: one Ginibre matrix, Householder QR, LU determinant of
    ``Id - G``. Product path: one call of the unitary product sampler.
    Both are timed one sample per call.
    """
    rng = RngStream(seed)
    eye = np.eye(n)
    t0 = time.perf_counter()
    for _ in range(matrix_reps):
        lu_det(eye - sample_haar_unitary_ginibre(n, rng))
    matrix = (time.perf_counter() - t0) / matrix_reps
    t0 = time.perf_counter()
    for _ in range(product_reps):
        sample_unitary_product(n, rng)
    product = (time.perf_counter() - t0) / product_reps
    return {
        "n": n,
        "seed": seed,
        "matrix_reps": matrix_reps,
        "product_reps": product_reps,
        "matrix_seconds_per_sample": matrix,
        "product_seconds_per_sample": product,
        "speedup": matrix / product,
    }
