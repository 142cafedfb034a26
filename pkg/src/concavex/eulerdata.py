"""Hypergeometric blocks attached to a split concavex bundle.

The engine's raw material: for each curve degree d the bundle data
determines a closed-form Laurent block, assembled from

  * the ratio of Chern polynomials of the convex and concave parts
    (degree zero),
  * per-degree products of shifted linear factors, one factor per
    section index of each line-bundle summand,
  * the inverted Euler factor of the ambient linear model, a product
    of (H_i - k*alpha)^{n_i+1}.

Everything is exact; denominators only ever involve nilpotent classes
plus a nonzero multiple of alpha or x, so inverses are finite sums.

The module also carries the equivariant variant for the tangent bundle
of a single projective space, restricted to torus fixed points at
rational weight samples, together with the fixed-point integrator and
linking products used to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Rat

from .cohomology import CohClass, hyperplane, one, scalar
from .geometry import GeometrySpec, first_chern, pairing, validate
from .laurent import (
    LaurentBlock,
    block_one,
    from_class,
    invert_linear_factor,
    kahler_factor,
    variable_x,
)
from .localization import SamplingError, WeightSample
from .qseries import Degree, QSeries, degrees_upto


def _affine_block(c: CohClass, alpha_coeff: int) -> LaurentBlock:
    """x + c + alpha_coeff * alpha as a Laurent block."""
    b = variable_x(c.dims)
    if not c.is_zero():
        b = b + from_class(c)
    if alpha_coeff:
        extra = LaurentBlock(c.dims)
        extra._put((1, 0, (0,) * len(c.dims)), scalar(c.dims, alpha_coeff))
        b = b + extra
    return b


def _inverse_x_factor(c: CohClass) -> LaurentBlock:
    """Exact inverse of (x + c) for nilpotent c.

    Expands x^{-1} sum_j (-c/x)^j, finite because c has no scalar part.
    """
    if c.coeffs[0] != 0:
        raise ValueError("class must be nilpotent (zero scalar part)")
    dims = c.dims
    out = LaurentBlock(dims)
    power = one(dims)
    sign = 1
    for j in range(sum(dims) + 1):
        out._put((0, -1 - j, (0,) * len(dims)), power.scale(sign))
        power = power * c
        sign = -sign
        if power.is_zero():
            break
    return out


def chern_ratio(spec: GeometrySpec) -> LaurentBlock:
    """Ratio of the Chern polynomials of the two bundle parts.

    Product over convex summands of (x + c1), times the inverse of the
    same product over concave summands.  The concave inverses make this
    an x-Laurent block; it is the degree-zero hypergeometric block.
    """
    out = block_one(spec.factors)
    for b in spec.convex():
        out = out * _affine_block(first_chern(spec, b), 0)
    for b in spec.concave():
        out = out * _inverse_x_factor(first_chern(spec, b))
    return out


def normal_euler(spec: GeometrySpec, d: Degree) -> tuple[LaurentBlock, LaurentBlock]:
    """Euler factor of the ambient linear model at degree d, with inverse.

    The factor is prod_i prod_{k=1}^{d_i} (H_i - k*alpha)^{n_i+1}; the
    inverse is assembled from exact geometric expansions of each linear
    factor.  d = 0 gives the empty product (1, 1).
    """
    dims = spec.factors
    factor = block_one(dims)
    inverse = block_one(dims)
    for i, n in enumerate(dims):
        h = hyperplane(dims, i)
        for k in range(1, d[i] + 1):
            lin = _affine_block(h, -k) - variable_x(dims)  # H_i - k*alpha
            factor = factor * lin**(n + 1)
            inverse = inverse * invert_linear_factor(h, k)**(n + 1)
    return factor, inverse


def hyper_block(spec: GeometrySpec, d: Degree) -> LaurentBlock:
    """Degree-d hypergeometric block of the bundle data.

    Inverted Euler factor times, per convex summand, the factors
    (x + c1 - k*alpha) for k = 0..<c1,d>, and per concave summand the
    factors (x + c1 + k*alpha) for k = 1..-<c1,d>-1.  At d = 0 this is
    exactly chern_ratio(spec).
    """
    if not any(d):
        return chern_ratio(spec)
    _, inv = normal_euler(spec, d)
    out = inv
    for b in spec.convex():
        c = first_chern(spec, b)
        for k in range(0, pairing(b, d) + 1):
            out = out * _affine_block(c, -k)
    for b in spec.concave():
        c = first_chern(spec, b)
        for k in range(1, -pairing(b, d)):
            out = out * _affine_block(c, k)
    return out


def reduced_block(spec: GeometrySpec, d: Degree) -> LaurentBlock:
    """hyper_block with the Chern-polynomial ratio divided out.

    Built directly rather than by division: the k = 0 factor of each
    convex product is omitted and the k = 0 factor of each concave
    product is included.  The result is polynomial in x and equals 1 at
    d = 0; multiplying by chern_ratio recovers hyper_block exactly.
    """
    if not any(d):
        return block_one(spec.factors)
    _, inv = normal_euler(spec, d)
    out = inv
    for b in spec.convex():
        c = first_chern(spec, b)
        for k in range(1, pairing(b, d) + 1):
            out = out * _affine_block(c, -k)
    for b in spec.concave():
        c = first_chern(spec, b)
        for k in range(0, -pairing(b, d)):
            out = out * _affine_block(c, k)
    return out


def hyper_series(spec: GeometrySpec, bound: int) -> QSeries:
    """All hypergeometric blocks up to the truncation bound, as a q-series.

    Each degree-d coefficient carries the Kahler prefactor
    exp(-(sum_i H_i t_i)/alpha), so the degree-0 coefficient restricted
    to t = 0 is chern_ratio(spec).
    """
    validate(spec)
    dims = spec.factors
    eht = kahler_factor(dims)
    out = QSeries(len(dims), bound, dims, {})
    for d in degrees_upto(len(dims), bound):
        out.set(d, eht * hyper_block(spec, d))
    return out


# ---------------------------------------------------------------------------
# Equivariant blocks for the tangent bundle of P^n at sampled weights

@dataclass(frozen=True)
class EquivariantRestrictions:
    """Fixed-point restrictions of an equivariant block on P^n.

    One scalar-coefficient Laurent block per fixed point, in the order
    of the weight sample.  Integration is the fixed-point sum with the
    tangent Euler class prod_{k != j}(lam_j - lam_k) in the denominator.
    """

    sample: WeightSample
    blocks: tuple[LaurentBlock, ...]

    def integrate(self) -> LaurentBlock:
        lam = self.sample.weights
        total = LaurentBlock(())
        for j, b in enumerate(self.blocks):
            e = Rat(1)
            for k in range(len(lam)):
                if k != j:
                    e *= lam[j] - lam[k]
            total = total + b.scale(1 / e)
        return total


def tangent_block_restrictions(
    n: int, d: int, sample: WeightSample
) -> EquivariantRestrictions:
    """Degree-d tangent-bundle block of P^n at the torus fixed points.

    The block is (1/x) prod_i prod_{k=0}^{d} (x + H - lam_i - k*alpha);
    restricting to the fixed point p_j sets H to lam_j, where the
    (i = j, k = 0) factor is exactly x and cancels the 1/x.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    lam = sample.weights
    if len(lam) != n + 1:
        raise SamplingError("weight sample has wrong length")
    blocks = []
    for j in range(n + 1):
        b = block_one(())
        for i in range(n + 1):
            for k in range(d + 1):
                if i == j and k == 0:
                    continue
                b = b * _affine_block(scalar((), lam[j] - lam[i]), -k)
        blocks.append(b)
    return EquivariantRestrictions(sample, tuple(blocks))


def linking_product(
    n: int, d: int, j: int, l: int, sample: WeightSample
) -> LaurentBlock:
    """Edge-restriction product prod_i prod_{k=0}^d (x + lam_j - lam_i - k*w/d).

    Here w = lam_j - lam_l is the isotropy weight of the coordinate line
    joining the two fixed points.  Keeps x symbolic; equals x times the
    p_j tangent restriction with alpha specialized to w/d.
    """
    if j == l:
        raise ValueError("fixed points must differ")
    if d < 1:
        raise ValueError("degree must be positive")
    lam = sample.weights
    if len(lam) != n + 1:
        raise SamplingError("weight sample has wrong length")
    w = Rat(lam[j] - lam[l], d)
    out = block_one(())
    for i in range(n + 1):
        for k in range(d + 1):
            out = out * _affine_block(scalar((), lam[j] - lam[i] - k * w), 0)
    return out


def residue_sum(sample: WeightSample) -> Rat:
    """Fixed-point sum of the constant class 1; zero whenever n >= 1."""
    lam = sample.weights
    total = Rat(0)
    for j in range(len(lam)):
        e = Rat(1)
        for k in range(len(lam)):
            if k != j:
                e *= lam[j] - lam[k]
        total += 1 / e
    return total
