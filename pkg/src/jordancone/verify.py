"""Brute-force sampling oracles, independent of the predicates they check.

The extremality oracle samples the order interval [0, x] through the exact
parametrization y = U_{x^(1/2)} w with w uniform-ish in [0, e]; quadratic
representations of square roots map order intervals onto order intervals,
so every draw is a genuine candidate witness.  A sampling oracle can only
refute extremality, never prove it: oracle-true means "no counterexample
found in the given number of trials".

Each trial depends only on (seed, trial index), so checks are
embarrassingly parallel and reports merge associatively.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass, field
from typing import Callable

from .core import (
    AlgebraDescriptor,
    Element,
    inner_product,
    jordan_product,
    quadratic_rep,
    random_element,
    as_rng,
)
from .spectral import is_positive, order_unit_norm, spectrum, sqrt, trace

SPAN_DISTANCE_TOL = 1e-7


@dataclass(frozen=True)
class Failure:
    """One violated predicate: the offending inputs and the magnitude."""

    inputs: tuple
    predicate: str
    magnitude: float


@dataclass(frozen=True)
class SampleReport:
    """Outcome of a sampling check.

    ``failures`` holds exactly the trials whose violation exceeded
    ``tolerance``, so the report is clean iff ``max_violation`` is within
    tolerance.
    """

    trials: int
    tolerance: float
    max_violation: float
    failures: tuple[Failure, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "tolerance": self.tolerance,
            "max_violation": float(self.max_violation),
            "failures": [
                {
                    "predicate": f.predicate,
                    "magnitude": float(f.magnitude),
                    "inputs": [
                        [float(c) for c in x.coords] if isinstance(x, Element) else x
                        for x in f.inputs
                    ],
                }
                for f in self.failures
            ],
        }


def _uniform_order_interval(
    algebra: AlgebraDescriptor, rng: np.random.Generator, count: int
) -> np.ndarray:
    """Batch of elements of [0, e]: random frames with uniform eigenvalues."""
    out = np.empty((count, algebra.total_dim))
    for f, sl in zip(algebra.factors, algebra.slices):
        if f.kind == "real":
            out[:, sl.start] = rng.uniform(0.0, 1.0, size=count)
        elif f.kind == "spin":
            hi = rng.uniform(0.0, 1.0, size=count)
            lo = rng.uniform(0.0, 1.0, size=count)
            d = rng.standard_normal((count, f.n))
            d /= np.linalg.norm(d, axis=1, keepdims=True)
            out[:, sl.start] = 0.5 * (hi + lo)
            out[:, sl.start + 1:sl.stop] = 0.5 * (hi - lo)[:, None] * d
        else:
            n = f.n
            g = rng.standard_normal((count, n, n))
            # eigenvector frames of GOE matrices are Haar-distributed
            _, vecs = np.linalg.eigh(g + np.swapaxes(g, 1, 2))
            lam = rng.uniform(0.0, 1.0, size=(count, n))
            w = np.einsum("bik,bk,bjk->bij", vecs, lam, vecs)
            iu, ju = np.triu_indices(n)
            out[:, sl] = 0.5 * (w[:, iu, ju] + w[:, ju, iu])
    return out


def extreme_vector_oracle(
    x: Element, trials: int = 10_000, seed: int = 0, chunk: int = 2048
) -> bool:
    """Sampling test for extremality of the ray through x.

    Requires x positive and trace-normalized (<x, e> = 1).  Draws random
    y in [0, x] and returns False as soon as one lands farther than
    ``SPAN_DISTANCE_TOL`` (in the trace norm) from the ray through x;
    returns True when all trials stay on the ray.  Independent of the
    rank-based `structure.is_atom` test it is used to cross-check.
    """
    if not is_positive(x):
        raise ValueError("element not in cone")
    if abs(trace(x) - 1.0) > 1e-9:
        raise ValueError("element is not trace-normalized")
    rng = as_rng(seed)
    m = quadratic_rep(sqrt(x)).matrix
    w = x.algebra.inner_weights
    xw = w * x.coords
    xx = inner_product(x, x)
    done = 0
    while done < trials:
        batch = min(chunk, trials - done)
        ys = _uniform_order_interval(x.algebra, rng, batch) @ m.T
        lam = np.clip(ys @ xw / xx, 0.0, None)
        resid = ys - lam[:, None] * x.coords
        dist = np.sqrt((resid * resid) @ w)
        if np.any(dist > SPAN_DISTANCE_TOL):
            return False
        done += batch
    return True


def check_order_preserving(
    f: Callable[[Element], Element],
    algebra: AlgebraDescriptor,
    trials: int = 1000,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> SampleReport:
    """Sample ordered pairs x <= z and test f(x) <= f(z).

    The violation magnitude is the negative part of the smallest eigenvalue
    of f(z) - f(x).
    """
    rng = as_rng(seed)
    failures: list[Failure] = []
    max_violation = 0.0
    for _ in range(trials):
        v = random_element(algebra, rng)
        w = random_element(algebra, rng)
        x = jordan_product(v, v)
        z = x + jordan_product(w, w)
        diff = f(z) - f(x)
        violation = max(0.0, -float(spectrum(diff).min()))
        max_violation = max(max_violation, violation)
        if violation > tolerance:
            failures.append(Failure((x, z), "order preserved", violation))
    return SampleReport(trials, tolerance, max_violation, tuple(failures))


def check_linearity_blackbox(
    f: Callable[[Element], Element],
    algebra: AlgebraDescriptor,
    trials: int = 1000,
    seed: int = 0,
    tolerance: float = 1e-8,
) -> SampleReport:
    """Sample additivity and homogeneity of a map on the cone.

    Checks f(x + z) = f(x) + f(z) and f(a x) = a f(x) for a in
    {1/2, 2, 3} on random cone points; magnitudes are order-unit norms of
    the defects.
    """
    rng = as_rng(seed)
    failures: list[Failure] = []
    max_violation = 0.0
    for _ in range(trials):
        v = random_element(algebra, rng)
        w = random_element(algebra, rng)
        x = jordan_product(v, v)
        z = jordan_product(w, w)
        defect = f(x + z) - (f(x) + f(z))
        violation = order_unit_norm(defect)
        max_violation = max(max_violation, violation)
        if violation > tolerance:
            failures.append(Failure((x, z), "additive", violation))
        for a in (0.5, 2.0, 3.0):
            defect = f(a * x) - a * f(x)
            violation = order_unit_norm(defect)
            max_violation = max(max_violation, violation)
            if violation > tolerance:
                failures.append(Failure((x, a), f"homogeneous (a={a:g})", violation))
    return SampleReport(trials, tolerance, max_violation, tuple(failures))
