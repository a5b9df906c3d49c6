"""The lattice acting on R^4, its multiplicators, and the invariant 2-form.

The deck group is generated by

    a: (x, y, z, t) -> (x+1, y, z+y, t)
    b: (x, y, z, t) -> (x, y+1, z, t)
    c: (x, y, z, t) -> (x, y, z+1, t)
    d: (x, y, z, t) -> (x, y, z, t+1)

with the single relation a*b = c*b*a (c central).  Words are stored in
the normal form a^m b^n c^p d^q, so all group arithmetic is exact
integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class KTPoint:
    """A point (x, y, z, t) of R^4 covering the quotient manifold."""

    x: float
    y: float
    z: float
    t: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.x, self.y, self.z, self.t))):
            raise ValueError("coordinates must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.t], dtype=float)

    @staticmethod
    def from_array(arr) -> "KTPoint":
        x, y, z, t = (float(v) for v in arr)
        return KTPoint(x, y, z, t)


@dataclass(frozen=True)
class GroupWord:
    """Normal-form lattice element a^m b^n c^p d^q."""

    m: int
    n: int
    p: int
    q: int


IDENTITY = GroupWord(0, 0, 0, 0)
GEN_A = GroupWord(1, 0, 0, 0)
GEN_B = GroupWord(0, 1, 0, 0)
GEN_C = GroupWord(0, 0, 1, 0)
GEN_D = GroupWord(0, 0, 0, 1)
GENERATORS = {"a": GEN_A, "b": GEN_B, "c": GEN_C, "d": GEN_D}


def act(w: GroupWord, u: KTPoint) -> KTPoint:
    """Apply the word to a point: (x+m, y+n, z+p+m*(y+n), t+q)."""
    return KTPoint(u.x + w.m, u.y + w.n, u.z + w.p + w.m * (u.y + w.n), u.t + w.q)


def act_on_array(w: GroupWord, pts: np.ndarray) -> np.ndarray:
    """Vectorized ``act`` on an (..., 4) array of points."""
    out = np.array(pts, dtype=float, copy=True)
    out[..., 0] += w.m
    out[..., 1] += w.n
    out[..., 2] += w.p + w.m * out[..., 1]
    out[..., 3] += w.q
    return out


def compose(w1: GroupWord, w2: GroupWord) -> GroupWord:
    """Normal form of w1*w2; act(compose(w1, w2), u) == act(w1, act(w2, u))."""
    return GroupWord(w1.m + w2.m, w1.n + w2.n, w1.p + w2.p - w1.n * w2.m, w1.q + w2.q)


def inverse(w: GroupWord) -> GroupWord:
    return GroupWord(-w.m, -w.n, -w.p - w.n * w.m, -w.q)


def _wrap_unit(v: float) -> tuple[float, int]:
    """Fractional part in [0, 1) and the integer removed.

    ``v - floor(v)`` can round to exactly 1.0 for tiny negative ``v``; the
    correction keeps the representative strictly inside the domain.
    """
    n = math.floor(v)
    f = v - n
    if f >= 1.0:
        n += 1
        f -= 1.0
    return f, n


def reduce_point(u: KTPoint) -> tuple[KTPoint, GroupWord]:
    """Fundamental-domain representative u0 in [0,1)^4 and w with act(w, u0) = u."""
    x0, m = _wrap_unit(u.x)
    y0, n = _wrap_unit(u.y)
    z0, p = _wrap_unit(u.z - m * u.y)
    t0, q = _wrap_unit(u.t)
    return KTPoint(x0, y0, z0, t0), GroupWord(m, n, p, q)


def _gen_exponent(gen: str, u: KTPoint) -> complex:
    """f with e_gen(u) = exp(-2*pi*i*f(u))."""
    if gen == "a":
        return u.z + 1j * u.x
    if gen == "d":
        return u.y + 1j * u.t
    return 0.0 + 0.0j


def _gen_multiplicator(gen: str, u: KTPoint) -> complex:
    return complex(np.exp(-TWO_PI_I * _gen_exponent(gen, u)))


def multiplicator(w: GroupWord, u: KTPoint) -> complex:
    """Automorphy factor e_w(u), built by the cocycle recursion.

    e_{gw'}(u) = e_g(w'.u) * e_{w'}(u) over the normal-form factorization,
    with e_a(u) = exp(-2*pi*i*(z+ix)), e_d(u) = exp(-2*pi*i*(y+it)) and
    e_b = e_c = 1.  The generator exponents are accumulated and
    exponentiated once, which avoids intermediate overflow and keeps the
    phase accurate for long words.
    """
    expo = 0.0 + 0.0j
    point = u
    # rightmost factor acts first
    for gen, count in (("d", w.q), ("c", w.p), ("b", w.n), ("a", w.m)):
        g = GENERATORS[gen]
        if count >= 0:
            for _ in range(count):
                expo += _gen_exponent(gen, point)
                point = act(g, point)
        else:
            ginv = inverse(g)
            for _ in range(-count):
                point = act(ginv, point)
                expo -= _gen_exponent(gen, point)
    return complex(np.exp(-TWO_PI_I * expo))


def cocycle_residual(w1: GroupWord, w2: GroupWord, u: KTPoint) -> float:
    """Relative defect of e_{w1}(w2.u) * e_{w2}(u) = e_{w1 w2}(u)."""
    lhs = multiplicator(w1, act(w2, u)) * multiplicator(w2, u)
    rhs = multiplicator(compose(w1, w2), u)
    return abs(lhs - rhs) / abs(rhs)


@dataclass(frozen=True)
class TwoFormAtPoint:
    """A 2-form at a point, stored as an exactly antisymmetric 4x4 matrix.

    Rows and columns are indexed by the coordinates (x, y, z, t).
    """

    point: KTPoint
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (4, 4):
            raise ValueError("matrix must be 4x4")
        if not np.array_equal(mat, -mat.T):
            raise ValueError("matrix must be exactly antisymmetric")
        object.__setattr__(self, "matrix", mat)


def two_form(point: KTPoint, upper: dict[tuple[int, int], float]) -> TwoFormAtPoint:
    """Build a TwoFormAtPoint from its upper-triangle coefficients."""
    mat = np.zeros((4, 4))
    for (i, j), v in upper.items():
        mat[i, j] = v
        mat[j, i] = -v
    return TwoFormAtPoint(point, mat)


def omega_kt(u: KTPoint) -> TwoFormAtPoint:
    """The left-invariant form (dz - x dy) ^ dx + dy ^ dt at ``u``."""
    return two_form(u, {(0, 1): u.x, (0, 2): -1.0, (1, 3): 1.0})


def left_invariant_coframe_view(form: TwoFormAtPoint) -> np.ndarray:
    """Coefficients of the form in the coframe (dx, dy, dz - x dy, dt).

    Returned as an antisymmetric 4x4 matrix in that coframe order.  The
    change of basis is dz = (dz - x dy) + x dy at the form's base point.
    """
    # coordinate one-forms in terms of the coframe e = (dx, dy, dz-xdy, dt):
    # dx = e0, dy = e1, dz = e2 + x*e1, dt = e3
    x = form.point.x
    basis = np.eye(4)
    basis[2, 1] = x  # dz row
    return basis @ form.matrix @ basis.T


def quotient_distance(u: KTPoint, v: KTPoint, radius: int = 2) -> float:
    """Distance between the images of u and v on the quotient.

    Minimum Euclidean distance between reduce(u) and word translates of
    reduce(v) over words with all exponents bounded by ``radius``.
    """
    u0, _ = reduce_point(u)
    v0, _ = reduce_point(v)
    ua = u0.as_array()
    offs = np.arange(-radius, radius + 1, dtype=float)
    m, n, p, q = np.meshgrid(offs, offs, offs, offs, indexing="ij")
    translates = np.stack(
        [
            v0.x + m,
            v0.y + n,
            v0.z + p + m * (v0.y + n),
            v0.t + q,
        ],
        axis=-1,
    ).reshape(-1, 4)
    return float(np.min(np.linalg.norm(translates - ua, axis=1)))


def fundamental_domain_samples(n: int, seed: int) -> np.ndarray:
    """Seeded uniform samples in [0,1)^4, shape (n, 4)."""
    rng = np.random.default_rng(seed)
    return rng.random((n, 4))
