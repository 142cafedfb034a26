"""Independent fixed-point oracle for low-degree invariants on one P^n.

Sums Atiyah-Bott style contributions over torus-fixed stable maps of degree
1 and 2.  Torus weights are evaluated at random distinct rationals instead
of being carried symbolically; agreement of the result across independent
samples certifies that the weight dependence cancels.  Everything downstream
treats these numbers as ground truth, so this module deliberately shares no
code with the series pipeline.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .geometry import GeometrySpec

Rat = Fraction

__all__ = [
    "WeightSample",
    "SamplingError",
    "OracleInconsistencyError",
    "sample_weights",
    "oracle_invariant",
    "oracle_invariant_checked",
    "quintic_lines_schubert",
]


class SamplingError(ValueError):
    """The drawn weights hit a vanishing denominator; redraw."""


class OracleInconsistencyError(AssertionError):
    """Results differ across weight samples, so cancellation failed."""


@dataclass(frozen=True)
class WeightSample:
    weights: tuple[Rat, ...]
    seed: int

    def __post_init__(self) -> None:
        if len(set(self.weights)) != len(self.weights):
            raise SamplingError("torus weights must be pairwise distinct")


def sample_weights(n: int, seed: int) -> WeightSample:
    """n+1 distinct rational weights, deterministic in the seed."""
    rng = random.Random(seed)
    values = rng.sample(range(-6 * (n + 10), 6 * (n + 10) + 1), n + 1)
    return WeightSample(tuple(Rat(v) for v in values), seed)


def _moduli_dim(n: int, d: int) -> int:
    return (n + 1) * d + n - 3


def _chern_top(numer: list[Rat], denom: list[Rat], top: int) -> Rat:
    """Coefficient of T^top in prod(1 + w T) / prod(1 + u T).

    The denominator factors always divide the numerator product exactly in
    the cases summed here (node weights occur among the section weights),
    so the truncated long division is exact.
    """
    series = [Rat(0)] * (top + 1)
    series[0] = Rat(1)
    for w in numer:
        for k in range(top, 0, -1):
            series[k] += w * series[k - 1]
    for u in denom:
        for k in range(1, top + 1):
            series[k] -= u * series[k - 1]
    return series[top]


def _edge_section_weights(
    spec: GeometrySpec, li: Rat, lj: Rat, delta: int
) -> tuple[list[Rat], list[Rat]]:
    """Bundle cohomology weights along a degree-delta cover of the line ij.

    Convex summand of degree l: sections, weights (a li + b lj)/delta with
    a+b = l*delta, a,b >= 0.  Concave summand of magnitude l: first
    cohomology, weights -(a li + b lj)/delta with a+b = l*delta, a,b >= 1.
    Returns (numerator weights, denominator weights); the denominator is
    always empty for a single edge.
    """
    numer: list[Rat] = []
    for b in spec.bundles:
        l = abs(b.multidegree[0])
        if b.kind == "convex":
            numer.extend(
                Rat(a * li + (l * delta - a) * lj, delta) for a in range(l * delta + 1)
            )
        else:
            numer.extend(
                -Rat(a * li + (l * delta - a) * lj, delta)
                for a in range(1, l * delta)
            )
    return numer, []


def _degree_one(spec: GeometrySpec, lam: tuple[Rat, ...]) -> Rat:
    n = spec.factors[0]
    top = _moduli_dim(n, 1)
    total = Rat(0)
    for i, j in itertools.combinations(range(n + 1), 2):
        numer, denom = _edge_section_weights(spec, lam[i], lam[j], 1)
        tangent = Rat(1)
        for m in range(n + 1):
            if m in (i, j):
                continue
            tangent *= (lam[i] - lam[m]) * (lam[j] - lam[m])
        if tangent == 0:
            raise SamplingError("degenerate tangent weight")
        total += _chern_top(numer, denom, top) / tangent
    return total


def _degree_two(spec: GeometrySpec, lam: tuple[Rat, ...]) -> Rat:
    return _double_cover_sum(spec, lam) + _node_graph_sum(spec, lam)


def _double_cover_sum(spec: GeometrySpec, lam: tuple[Rat, ...]) -> Rat:
    """Double covers of a coordinate line; deck symmetry factor 1/2."""
    n = spec.factors[0]
    top = _moduli_dim(n, 2)
    total = Rat(0)
    for i, j in itertools.combinations(range(n + 1), 2):
        numer, denom = _edge_section_weights(spec, lam[i], lam[j], 2)
        normal = -((lam[i] - lam[j]) ** 2)
        for m in range(n + 1):
            if m in (i, j):
                continue
            for a in range(3):
                w = Rat(a * lam[i] + (2 - a) * lam[j], 2) - lam[m]
                if w == 0:
                    raise SamplingError("degenerate double cover weight")
                normal *= w
        total += Rat(1, 2) * _chern_top(numer, denom, top) / normal
    return total


def _node_graph_sum(spec: GeometrySpec, lam: tuple[Rat, ...]) -> Rat:
    """Two lines glued at a node over p_j; branch swap gives the 1/2."""
    n = spec.factors[0]
    top = _moduli_dim(n, 2)
    evals = [Rat(1)] * (n + 1)
    for v in range(n + 1):
        for m in range(n + 1):
            if m != v:
                evals[v] *= lam[v] - lam[m]
    total = Rat(0)
    for j in range(n + 1):
        for i in range(n + 1):
            if i == j:
                continue
            for k in range(n + 1):
                if k == j:
                    continue
                # tangent weights at p_j are lam[j] - lam[m], so smoothing
                # the node weighs 2 lam[j] - lam[i] - lam[k]
                smoothing = 2 * lam[j] - lam[i] - lam[k]
                if smoothing == 0:
                    raise SamplingError("degenerate node smoothing weight")
                # moving sections of the two branches, divided by the
                # evaluation at the shared point, times the node smoothing,
                # over the surviving reparametrization weights
                normal = (
                    evals[i]
                    * evals[j]
                    * evals[k]
                    * smoothing
                    / ((lam[i] - lam[j]) * (lam[k] - lam[j]))
                )
                numer: list[Rat] = []
                denom: list[Rat] = []
                for b in spec.bundles:
                    l = abs(b.multidegree[0])
                    if b.kind == "convex":
                        numer.extend(
                            Rat(a) * lam[i] + Rat(l - a) * lam[j] for a in range(l + 1)
                        )
                        numer.extend(
                            Rat(a) * lam[j] + Rat(l - a) * lam[k] for a in range(l + 1)
                        )
                        denom.append(Rat(l) * lam[j])
                    else:
                        numer.extend(
                            -(Rat(a) * lam[i] + Rat(l - a) * lam[j])
                            for a in range(1, l)
                        )
                        numer.extend(
                            -(Rat(a) * lam[j] + Rat(l - a) * lam[k])
                            for a in range(1, l)
                        )
                        numer.append(-Rat(l) * lam[j])
                total += Rat(1, 2) * _chern_top(numer, denom, top) / normal
    return total


def oracle_invariant(spec: GeometrySpec, d: int, sample: WeightSample) -> Rat:
    """Fixed-point sum for one weight sample.

    Supports a single projective factor and d in {1, 2}.  Raises
    SamplingError when the sample hits a vanishing denominator.
    """
    if spec.m != 1:
        raise ValueError("oracle supports a single projective factor only")
    n = spec.factors[0]
    if len(sample.weights) != n + 1:
        raise ValueError("weight sample arity does not match the factor")
    if d == 1:
        return _degree_one(spec, sample.weights)
    if d == 2:
        return _degree_two(spec, sample.weights)
    raise ValueError(f"oracle supports degrees 1 and 2, got {d}")


def oracle_invariant_checked(
    spec: GeometrySpec, d: int, samples: int = 3, seed: int = 0
) -> tuple[Rat, list[WeightSample]]:
    """Evaluate at several independent samples and insist on agreement.

    Degenerate draws are skipped deterministically.  Returns the common
    value and the samples that produced it.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    n = spec.factors[0] if spec.m == 1 else 0
    values: list[Rat] = []
    used: list[WeightSample] = []
    attempt = 0
    while len(values) < samples:
        if attempt > 100 * samples:
            raise SamplingError("too many degenerate weight samples")
        sample = sample_weights(n, seed * 1000 + attempt)
        attempt += 1
        try:
            values.append(oracle_invariant(spec, d, sample))
        except SamplingError:
            continue
        used.append(sample)
    if len(set(values)) != 1:
        raise OracleInconsistencyError(
            f"oracle values disagree across samples: {sorted(set(values))}"
        )
    return values[0], used


def quintic_lines_schubert() -> Rat:
    """Independent count of lines on a quintic threefold.

    Works in the Grassmannian of lines in P^4: expands the top Chern class
    of Sym^5 of the dual tautological bundle in Chern roots x1, x2 and reads
    off the coefficient of the top Schur class via the alternant trick
    (multiply by x1 - x2, take the coefficient of x1^4 x2^3).
    """
    poly: dict[tuple[int, int], Rat] = {(0, 0): Rat(1)}

    def mul_linear(p: dict[tuple[int, int], Rat], a: int, b: int) -> dict[tuple[int, int], Rat]:
        out: dict[tuple[int, int], Rat] = {}
        for (e1, e2), c in p.items():
            if a:
                key = (e1 + 1, e2)
                out[key] = out.get(key, Rat(0)) + c * a
            if b:
                key = (e1, e2 + 1)
                out[key] = out.get(key, Rat(0)) + c * b
        return out

    for a in range(6):
        poly = mul_linear(poly, a, 5 - a)
    # multiply by (x1 - x2)
    final: dict[tuple[int, int], Rat] = {}
    for (e1, e2), c in poly.items():
        final[(e1 + 1, e2)] = final.get((e1 + 1, e2), Rat(0)) + c
        final[(e1, e2 + 1)] = final.get((e1, e2 + 1), Rat(0)) - c
    return final.get((4, 3), Rat(0))
