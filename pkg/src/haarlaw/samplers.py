"""Registry of complex scalar samplers and reproducible batch generation.

A batch of `count` draws is cut into fixed-size chunks and chunk ``i`` uses
``rng.substream(i)``. Output therefore depends only on the root stream and
the count, never on how many worker processes shared the chunks.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .haar import (
    batch_cycle_stats,
    sample_haar_recursive,
    sample_haar_unitary_ginibre,
    sample_phased_permutations,
)
from .kernels import RngStream, as_stream, sample_kn_alpha, sample_uniform_phase
from .linalg import lu_det
from .opuc import phi_at_one, sample_verblunsky_batch
from .products import sample_permutation_product, sample_unitary_product
from .stats import SampleBatch

__all__ = ["Sampler", "SAMPLERS", "get_sampler", "generate", "generate_batch"]

CHUNK = 2000


@dataclass(frozen=True)
class Sampler:
    """A registered sampler.

    `draw(n, rng, m)` returns ``m`` complex values. `moments(n)` lists exact
    targets as ``(name, function of the values, target)``.
    """

    name: str
    draw: object
    moments: object
    description: str
    min_n: int = 1


def _det_targets(n):
    # every Z sampler here has the law of det(Id - G), G Haar on U(n)
    return [
        ("E[Re Z]", np.real, 1.0),
        ("E[Im Z]", np.imag, 0.0),
        ("E|Z|^2", lambda z: np.abs(z) ** 2, float(n + 1)),
    ]


def _column_targets(n):
    return [
        ("E[Re x]", np.real, 0.0),
        ("E[Im x]", np.imag, 0.0),
        ("E|x|^2", lambda z: np.abs(z) ** 2, 1.0 / n),
    ]


def _ginibre_det(n, rng, m):
    G = sample_haar_unitary_ginibre(n, rng, size=m)
    return lu_det(np.eye(n) - G)


def _recursive_det(n, rng, m):
    eye = np.eye(n)
    return np.array([lu_det(eye - sample_haar_recursive(n, rng)) for _ in range(m)])


def _permutation_det(n, rng, m):
    sigma, phases = sample_phased_permutations(n, rng, m)
    return batch_cycle_stats(sigma, phases)[1]


def _verblunsky_product(n, rng, m):
    return phi_at_one(sample_verblunsky_batch(n, rng, m))[:, -1]


def _thm12_factorized(n, rng, m):
    # (1 - <e_1, G' e_1>) det(Id_{n-1} - H) with <e_1, G' e_1> ~ e^{i theta} sqrt(Beta(1, n-1))
    first = 1.0 - sample_kn_alpha(np.full(m, n - 1), rng)
    if n == 1:
        return first
    H = sample_haar_unitary_ginibre(n - 1, rng, size=m)
    return first * lu_det(np.eye(n - 1) - H)


def _first_column_ginibre(n, rng, m):
    return sample_haar_unitary_ginibre(n, rng, size=m)[:, 0, 0]


def _first_column_recursive(n, rng, m):
    return np.array([sample_haar_recursive(n, rng)[0, 0] for _ in range(m)])


def _first_column_law(n, rng, m):
    return sample_kn_alpha(np.full(m, n - 1), rng)


def _cycle_phase_product(n, rng, m):
    # prod over the cycles of a uniform permutation of (1 - e^{i a_k}), fresh phases
    sigma, _ = sample_phased_permutations(n, rng, m)
    ones = np.ones((m, n), dtype=complex)
    counts, _ = batch_cycle_stats(sigma, ones)
    phases = sample_uniform_phase(rng, (m, n))
    used = np.arange(n)[None, :] < counts[:, None]
    return np.prod(np.where(used, 1.0 - phases, 1.0), axis=1)


SAMPLERS = {
    s.name: s
    for s in [
        Sampler("unitary-ginibre-det", _ginibre_det, _det_targets,
                "det(Id - G), G Haar on U(n) from Ginibre QR"),
        Sampler("unitary-recursive-det", _recursive_det, _det_targets,
                "det(Id - G), G Haar on U(n) from recursive reflections"),
        Sampler("unitary-product", lambda n, rng, m: sample_unitary_product(n, rng, m), _det_targets,
                "prod (1 - e^{i theta_k} sqrt(Beta(1, k-1)))"),
        Sampler("permutation-det", _permutation_det, _det_targets,
                "det(Id - S) for a uniform phased permutation, by cycles"),
        Sampler("permutation-product", lambda n, rng, m: sample_permutation_product(n, rng, m),
                _det_targets, "prod (1 - e^{i theta_k} X_k), X_k ~ Bernoulli(1/k)"),
        Sampler("verblunsky-product", _verblunsky_product, _det_targets,
                "Phi_n(1) from Haar-law Verblunsky coefficients"),
        Sampler("thm12-factorized", _thm12_factorized, _det_targets,
                "(1 - e^{i theta} sqrt(Beta(1, n-1))) det(Id_{n-1} - H), H Haar on U(n-1)"),
        Sampler("cycle-phase-product", _cycle_phase_product, _det_targets,
                "prod over the cycles of a uniform permutation of (1 - e^{i a_k})"),
        Sampler("first-column-ginibre", _first_column_ginibre, _column_targets,
                "<e_1, G e_1>, G from Ginibre QR"),
        Sampler("first-column-recursive", _first_column_recursive, _column_targets,
                "<e_1, G e_1>, G from recursive reflections"),
        Sampler("first-column-law", _first_column_law, _column_targets,
                "e^{i theta} sqrt(Beta(1, n-1))"),
    ]
}


def get_sampler(name):
    try:
        return SAMPLERS[name]
    except KeyError:
        raise ValueError(f"unknown sampler {name!r}; known: {', '.join(SAMPLERS)}") from None


def _draw_chunk(args):
    name, n, m, seed, key = args
    return np.asarray(get_sampler(name).draw(n, RngStream(seed, key), m), dtype=complex)


def generate(name, n, count, rng, workers=1):
    """Draw `count` values from a registered sampler; chunked, reproducible."""
    sampler = get_sampler(name)
    if n < sampler.min_n:
        raise ValueError(f"{name} needs n >= {sampler.min_n}")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = as_stream(rng)
    jobs = [
        (name, n, min(CHUNK, count - lo), rng.seed, rng.substream(i).key)
        for i, lo in enumerate(range(0, count, CHUNK))
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_draw_chunk, jobs))
    else:
        parts = [_draw_chunk(job) for job in jobs]
    return np.concatenate(parts)


def generate_batch(name, n, count, seed, workers=1):
    """:class:`SampleBatch` of `count` draws from root seed `seed`."""
    values = generate(name, n, count, RngStream(seed), workers)
    return SampleBatch(name, n, seed, values)
