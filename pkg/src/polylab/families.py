"""Generators for the structured system families used by the benchmarks.

Each family is a parameterized polynomial system with at least one root
known in closed form, built with exact coefficient arithmetic so that the
listed roots satisfy the system to machine precision. Families:

- ``orthogonal``:      p_i = x_i^2 + sigma * (Q x)_i, Q random orthogonal;
                       root at the origin, kappa_root = 1/sigma there.
- ``cyclic_squares``:  p_i = x_i^2 - sigma * x_{i+1 mod d}; the origin plus
                       2^d - 1 closed-form roots chained around the cycle.
- ``hypercube``:       p_i = sum_j a_ij (x_j^2 - 1/(c^2 d)), A random
                       orthogonal; 2^d sign-pattern roots (+-1/(c sqrt(d)), ...).
- ``permutation``:     p_i = x_i^2 + sigma * x_{perm(i)} with perm a random
                       single d-cycle; root at the origin.
- ``notdev2d``:        p_1 = x^2 + s*a11*x + s*a12*y,
                       p_2 = xy + s*y^2 + s*a21*x + s*a22*y, A a random
                       rotation; root at the origin. d = 2 only.
- ``notdev3d``:        p_1 = xy + s*x^2 + s*y, p_2 = xy + s*y^2 + s*z,
                       p_3 = xy + s*z^2 + s*x; root at the origin. d = 3 only.

An optional affine shift moves every system and its listed roots by exact
Taylor translation of the coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numkernel import random_orthogonal
from .polycore import MultiPoly, PolySystem

FAMILIES = (
    "orthogonal",
    "cyclic_squares",
    "hypercube",
    "permutation",
    "notdev2d",
    "notdev3d",
)


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one system from a family.

    Exactly one of ``sigma`` (coupling strength) or ``c`` (hypercube scale)
    applies, depending on the family. ``seed`` feeds the default rng when
    ``generate`` is not handed one explicitly.
    """

    family: str
    d: int
    sigma: float | None = None
    c: float | None = None
    seed: int = 1
    shift: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.family == "hypercube":
            if self.c is None or self.c <= 0:
                raise ValueError("hypercube family needs c > 0")
        else:
            if self.sigma is None or self.sigma <= 0:
                raise ValueError(f"family {self.family!r} needs sigma > 0")
        if self.family == "notdev2d" and self.d != 2:
            raise ValueError("notdev2d is a two-variable family")
        if self.family == "notdev3d" and self.d != 3:
            raise ValueError("notdev3d is a three-variable family")
        if self.shift is not None:
            if len(self.shift) != self.d:
                raise ValueError("shift length must equal d")
            object.__setattr__(self, "shift", tuple(complex(z) for z in self.shift))


def _sq(d: int, i: int) -> MultiPoly:
    e = [0] * d
    e[i] = 2
    return MultiPoly.monomial(d, e)


def _lin(d: int, i: int, c) -> MultiPoly:
    e = [0] * d
    e[i] = 1
    return MultiPoly.monomial(d, e, c)


def _orthogonal(spec: FamilySpec, rng) -> PolySystem:
    d, sigma = spec.d, spec.sigma
    Q = random_orthogonal(d, rng)
    polys = []
    for i in range(d):
        p = _sq(d, i)
        for j in range(d):
            p = p + _lin(d, j, sigma * Q[i, j])
        polys.append(p)
    return PolySystem(d, polys, true_roots=[np.zeros(d, dtype=complex)], family_tag="orthogonal")


def _cyclic_squares(spec: FamilySpec, rng) -> PolySystem:
    d, sigma = spec.d, spec.sigma
    polys = [_sq(d, i) + _lin(d, (i + 1) % d, -sigma) for i in range(d)]
    # Non-origin roots: x_1^(2^d - 1) = sigma^(2^d - 1), coordinates chained
    # by x_{i+1} = x_i^2 / sigma.
    roots = [np.zeros(d, dtype=complex)]
    n = 2**d - 1
    for k in range(n):
        x1 = sigma * np.exp(2j * np.pi * k / n)
        r = np.empty(d, dtype=complex)
        r[0] = x1
        for i in range(1, d):
            r[i] = r[i - 1] ** 2 / sigma
        roots.append(r)
    return PolySystem(d, polys, true_roots=roots, family_tag="cyclic_squares")


def _hypercube(spec: FamilySpec, rng) -> PolySystem:
    d, c = spec.d, spec.c
    A = random_orthogonal(d, rng)
    const = 1.0 / (c * c * d)
    polys = []
    for i in range(d):
        p = MultiPoly.constant(d, -const * A[i, :].sum())
        for j in range(d):
            p = p + _sq(d, j) * A[i, j]
        polys.append(p)
    a = 1.0 / (c * math.sqrt(d))
    roots = []
    for mask in range(2**d):
        signs = [1.0 if mask & (1 << j) == 0 else -1.0 for j in range(d)]
        roots.append(np.array([s * a for s in signs], dtype=complex))
    return PolySystem(d, polys, true_roots=roots, family_tag="hypercube")


def _random_cycle(d: int, rng) -> list:
    # Single d-cycle: a fixed point would give two roots the same first
    # coordinate, which breaks shared-eigenvector coordinate recovery.
    order = list(rng.permutation(d))
    perm = [0] * d
    for k in range(d):
        perm[order[k]] = order[(k + 1) % d]
    return perm


def _permutation(spec: FamilySpec, rng) -> PolySystem:
    d, sigma = spec.d, spec.sigma
    perm = _random_cycle(d, rng) if d > 1 else [0]
    polys = [_sq(d, i) + _lin(d, int(perm[i]), sigma) for i in range(d)]
    return PolySystem(d, polys, true_roots=[np.zeros(d, dtype=complex)], family_tag="permutation")


def _random_rotation_2d(rng) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * np.pi)
    ct, st = np.cos(theta), np.sin(theta)
    return np.array([[ct, -st], [st, ct]])


def _notdev2d(spec: FamilySpec, rng) -> PolySystem:
    s = spec.sigma
    A = _random_rotation_2d(rng)  # det +1 keeps the closed-form interpolant clean
    p1 = _sq(2, 0) + _lin(2, 0, s * A[0, 0]) + _lin(2, 1, s * A[0, 1])
    p2 = (
        MultiPoly.monomial(2, (1, 1))
        + _sq(2, 1) * s
        + _lin(2, 0, s * A[1, 0])
        + _lin(2, 1, s * A[1, 1])
    )
    sys = PolySystem(2, [p1, p2], true_roots=[np.zeros(2, dtype=complex)], family_tag="notdev2d")
    sys.mixing = A  # stashed for closed-form comparisons
    return sys


def _notdev3d(spec: FamilySpec, rng) -> PolySystem:
    s = spec.sigma
    xy = MultiPoly.monomial(3, (1, 1, 0))
    p1 = xy + _sq(3, 0) * s + _lin(3, 1, s)
    p2 = xy + _sq(3, 1) * s + _lin(3, 2, s)
    p3 = xy + _sq(3, 2) * s + _lin(3, 0, s)
    return PolySystem(3, [p1, p2, p3], true_roots=[np.zeros(3, dtype=complex)], family_tag="notdev3d")


_BUILDERS = {
    "orthogonal": _orthogonal,
    "cyclic_squares": _cyclic_squares,
    "hypercube": _hypercube,
    "permutation": _permutation,
    "notdev2d": _notdev2d,
    "notdev3d": _notdev3d,
}


def generate(spec: FamilySpec, rng: np.random.Generator | None = None) -> PolySystem:
    """Build the system for a family spec, with true roots filled in.

    When ``rng`` is omitted a fresh generator seeded from ``spec.seed`` is
    used, so equal specs reproduce equal systems.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    sys = _BUILDERS[spec.family](spec, rng)
    if spec.shift is not None:
        shift = np.asarray(spec.shift, dtype=complex)
        # q(x) = p(x - shift) moves every root by +shift.
        polys = [p.translate(-shift) for p in sys.polys]
        roots = None
        if sys.true_roots is not None:
            roots = [r + shift for r in sys.true_roots]
        shifted = PolySystem(sys.d, polys, true_roots=roots, family_tag=sys.family_tag)
        if hasattr(sys, "mixing"):
            shifted.mixing = sys.mixing
        sys = shifted
    sys.validate()
    return sys


def true_root_error(report, truth) -> float:
    """Distance from the designated root to the nearest reported root."""
    truth = np.asarray(truth, dtype=complex)
    roots = getattr(report, "roots", report)
    best = math.inf
    for r in roots:
        best = min(best, float(np.linalg.norm(np.asarray(r, dtype=complex) - truth)))
    return best
