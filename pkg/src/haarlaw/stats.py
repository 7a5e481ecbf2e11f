"""Statistical instruments: KS tests, moment estimates, exact cycle law, reports."""

import csv
import json
from dataclasses import asdict, dataclass, field
from math import factorial

import numpy as np
from scipy.special import kolmogorov, ndtr

__all__ = [
    "SampleBatch",
    "FunctionalResult",
    "MomentResult",
    "TestReport",
    "ks_two_sample",
    "ks_one_sample",
    "mellin_modulus_moment",
    "mean_estimate",
    "variance_estimate",
    "cycle_count_exact_law",
    "total_variation",
]


@dataclass
class SampleBatch:
    """Complex samples from one sampler run."""

    sampler_id: str
    n: int
    seed: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()
        if not np.all(np.isfinite(self.values)):
            raise ValueError("batch contains non-finite values")

    @property
    def count(self):
        return self.values.shape[0]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["index", "re", "im"])
            for i, z in enumerate(self.values):
                writer.writerow([i, repr(float(z.real)), repr(float(z.imag))])

    @classmethod
    def from_csv(cls, path, sampler_id="", n=0, seed=0):
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        values = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
        return cls(sampler_id, n, seed, values)


@dataclass
class FunctionalResult:
    name: str
    statistic: float
    p_value: float
    passed: bool


@dataclass
class MomentResult:
    """An estimate checked against an exact target.

    With `tolerance` set the check is ``|estimate - target| <= tolerance``,
    otherwise it is the 3-standard-error band.
    """

    name: str
    estimate: float
    standard_error: float
    target: float
    tolerance: float = None
    passed: bool = None

    def __post_init__(self):
        if self.passed is None:
            bound = self.tolerance if self.tolerance is not None else 3.0 * self.standard_error
            self.passed = bool(abs(self.estimate - self.target) <= bound)


@dataclass
class TestReport:
    test_id: str
    functionals: list = field(default_factory=list)
    moments: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    @property
    def passed(self):
        return all(f.passed for f in self.functionals) and all(m.passed for m in self.moments)

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"

    def to_dict(self):
        return {
            "test_id": self.test_id,
            "functionals": [asdict(f) for f in self.functionals],
            "moments": [asdict(m) for m in self.moments],
            "verdict": self.verdict,
            "metadata": self.metadata,
        }

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, default=_json_default)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    def summary(self):
        lines = [f"{self.test_id}: {self.verdict}"]
        for f in self.functionals:
            lines.append(f"  KS {f.name}: D={f.statistic:.4g} p={f.p_value:.3g} {'ok' if f.passed else 'FAIL'}")
        for m in self.moments:
            lines.append(
                f"  {m.name}: {m.estimate:.5g} (se {m.standard_error:.2g}) target {m.target:.5g} "
                f"{'ok' if m.passed else 'FAIL'}"
            )
        return "\n".join(lines)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov test.

    Returns
    -------
    statistic : float
        ``sup_x |F_a(x) - F_b(x)|``.
    p_value : float
        Asymptotic Kolmogorov tail at ``sqrt(m k / (m + k)) * statistic``.
    """
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    m, k = a.size, b.size
    if m == 0 or k == 0:
        raise ValueError("KS test needs two nonempty samples")
    x = np.concatenate([a, b])
    fa = np.searchsorted(a, x, side="right") / m
    fb = np.searchsorted(b, x, side="right") / k
    d = float(np.max(np.abs(fa - fb)))
    en = m * k / (m + k)
    return d, float(kolmogorov(np.sqrt(en) * d))


def ks_one_sample(a, cdf=ndtr):
    """One-sample KS test of `a` against a continuous `cdf` (standard normal by default)."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    m = a.size
    if m == 0:
        raise ValueError("KS test needs a nonempty sample")
    f = cdf(a)
    i = np.arange(1, m + 1)
    d = float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))
    return d, float(kolmogorov(np.sqrt(m) * d))


def mean_estimate(x):
    """Sample mean and its plain standard error."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    se = x.std(ddof=1) / np.sqrt(x.size) if x.size > 1 else 0.0
    return float(x.mean()), float(se)


def variance_estimate(x):
    """Unbiased sample variance with the large-sample standard error ``sqrt((m4 - var^2)/n)``."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise ValueError("need at least two values")
    d = x - x.mean()
    var = float(d @ d / (n - 1))
    m4 = float(np.mean(d**4))
    return var, float(np.sqrt(max(m4 - var**2, 0.0) / n))


def mellin_modulus_moment(batch, s):
    """``E|Z|^s`` estimated from a batch (or raw array), with standard error."""
    values = batch.values if isinstance(batch, SampleBatch) else np.asarray(batch)
    if values.size == 0:
        raise ValueError("empty batch")
    return mean_estimate(np.abs(values) ** s)


def cycle_count_exact_law(n):
    """Exact law of the number of cycles of a uniform permutation of size `n`.

    Uses unsigned Stirling numbers of the first kind,
    ``c(n, m) = c(n-1, m-1) + (n-1) c(n-1, m)``.

    Returns
    -------
    dict
        ``{m: P(cycles = m)}`` for ``m = 1..n``.
    """
    if not 1 <= n <= 12:
        raise ValueError("exact cycle law is provided for 1 <= n <= 12")
    row = [0, 1]  # c(1, 0), c(1, 1)
    for k in range(2, n + 1):
        row = [0] + [row[m - 1] + (k - 1) * (row[m] if m < len(row) else 0) for m in range(1, k + 1)]
    total = factorial(n)
    return {m: row[m] / total for m in range(1, n + 1)}


def total_variation(counts, law):
    """TV distance between an empirical integer sample and a law ``{value: prob}``."""
    counts = np.asarray(counts).ravel()
    values, freq = np.unique(counts, return_counts=True)
    emp = dict(zip(values.tolist(), (freq / counts.size).tolist()))
    support = set(emp) | set(law)
    return 0.5 * sum(abs(emp.get(v, 0.0) - law.get(v, 0.0)) for v in support)
