"""Exact arithmetic in the cohomology ring of a product of projective spaces.

The ring for dimensions ``(n_1, ..., n_m)`` is ``Q[H_1, ..., H_m]`` modulo
the relations ``H_i ** (n_i + 1) == 0``, with ``H_i`` the hyperplane class
pulled back from the i-th factor.  A class is stored densely as a flat tuple
of ``Fraction`` coefficients over the exponent box ``prod(n_i + 1)`` in
C order (last axis fastest).  All coefficients are exact rationals; floats
never appear.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Rat = Fraction

__all__ = [
    "Rat",
    "CohClass",
    "zero",
    "one",
    "scalar",
    "hyperplane",
    "monomial",
    "linear",
]


def _box(dims: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(n + 1 for n in dims)


def _strides(dims: tuple[int, ...]) -> tuple[int, ...]:
    # C order: stride of the last axis is 1.
    strides = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        strides[i] = strides[i + 1] * (dims[i + 1] + 1)
    return tuple(strides)


def _flat_index(dims: tuple[int, ...], exps: tuple[int, ...]) -> int:
    return sum(e * s for e, s in zip(exps, _strides(dims)))


@dataclass(frozen=True)
class CohClass:
    """A cohomology class on ``P^{n_1} x ... x P^{n_m}``.

    ``dims`` lists the projective dimensions, ``coeffs`` the flat coefficient
    tuple.  Instances are immutable; arithmetic returns new objects.
    """

    dims: tuple[int, ...]
    coeffs: tuple[Rat, ...]

    def __post_init__(self) -> None:
        expected = 1
        for n in self.dims:
            expected *= n + 1
        if len(self.coeffs) != expected:
            raise ValueError(
                f"coefficient tuple has length {len(self.coeffs)}, expected {expected}"
            )

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def coefficient(self, exps: tuple[int, ...]) -> Rat:
        """Coefficient of the monomial ``prod H_i ** exps[i]``."""
        for e, n in zip(exps, self.dims):
            if e < 0 or e > n:
                return Rat(0)
        return self.coeffs[_flat_index(self.dims, exps)]

    def terms(self) -> Iterator[tuple[tuple[int, ...], Rat]]:
        """Yield ``(exponents, coefficient)`` for every nonzero monomial."""
        ranges = [range(n + 1) for n in self.dims]
        for exps, c in zip(itertools.product(*ranges), self.coeffs):
            if c:
                yield exps, c

    def integrate(self) -> Rat:
        """Integral over the product, i.e. the top-monomial coefficient.

        Each factor satisfies the normalization ``integral(H ** n) == 1``.
        """
        return self.coeffs[-1]

    def total_degree_parts(self) -> dict[int, "CohClass"]:
        """Split into graded pieces keyed by total exponent."""
        parts: dict[int, list[Rat]] = {}
        size = len(self.coeffs)
        for exps, c in self.terms():
            d = sum(exps)
            if d not in parts:
                parts[d] = [Rat(0)] * size
            parts[d][_flat_index(self.dims, exps)] = c
        return {d: CohClass(self.dims, tuple(v)) for d, v in sorted(parts.items())}

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        return CohClass(self.dims, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        return CohClass(self.dims, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CohClass":
        return CohClass(self.dims, tuple(-a for a in self.coeffs))

    def scale(self, c: Rat | int) -> "CohClass":
        c = Rat(c)
        return CohClass(self.dims, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "CohClass") -> "CohClass":
        """Cup product; monomials past the box are zero by the ring relations."""
        self._check(other)
        box = _box(self.dims)
        strides = _strides(self.dims)
        acc = [Rat(0)] * len(self.coeffs)
        mine = [(e, c) for e, c in self.terms()]
        for f, d in other.terms():
            for e, c in mine:
                idx = 0
                for a, b, n, s in zip(e, f, self.dims, strides):
                    t = a + b
                    if t > n:
                        idx = -1
                        break
                    idx += t * s
                if idx >= 0:
                    acc[idx] += c * d
        return CohClass(self.dims, tuple(acc))

    def __pow__(self, k: int) -> "CohClass":
        if k < 0:
            raise ValueError("negative power of a cohomology class")
        out = one(self.dims)
        for _ in range(k):
            out = out * self
        return out

    def _check(self, other: "CohClass") -> None:
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")

    def __repr__(self) -> str:
        parts = []
        for exps, c in self.terms():
            mono = "*".join(
                f"H{i+1}" if e == 1 else f"H{i+1}^{e}"
                for i, e in enumerate(exps)
                if e
            )
            parts.append(f"{c}" if not mono else f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def zero(dims: tuple[int, ...]) -> CohClass:
    size = 1
    for n in dims:
        size *= n + 1
    return CohClass(dims, tuple([Rat(0)] * size))


def scalar(dims: tuple[int, ...], c: Rat | int) -> CohClass:
    z = list(zero(dims).coeffs)
    z[0] = Rat(c)
    return CohClass(dims, tuple(z))


def one(dims: tuple[int, ...]) -> CohClass:
    return scalar(dims, 1)


def monomial(dims: tuple[int, ...], exps: tuple[int, ...], c: Rat | int = 1) -> CohClass:
    for e, n in zip(exps, dims):
        if e < 0 or e > n:
            return zero(dims)
    z = list(zero(dims).coeffs)
    z[_flat_index(dims, exps)] = Rat(c)
    return CohClass(dims, tuple(z))


def hyperplane(dims: tuple[int, ...], i: int) -> CohClass:
    """The hyperplane class of the i-th factor (0-based)."""
    exps = tuple(1 if j == i else 0 for j in range(len(dims)))
    return monomial(dims, exps)


def linear(dims: tuple[int, ...], coeffs: Iterable[Rat | int]) -> CohClass:
    """The divisor class ``sum(coeffs[i] * H_i)``."""
    out = zero(dims)
    for i, a in enumerate(coeffs):
        out = out + hyperplane(dims, i).scale(Rat(a))
    return out
