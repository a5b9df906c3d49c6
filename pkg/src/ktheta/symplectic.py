"""Fubini-Study pullback, nondegeneracy, torus integrals and Chern classes.

The Fubini-Study form is normalized to unit integral over a projective
line.  For a lift F: R^4 -> C^n \\ {0} with partials dF the pullback is

    Omega_{mu nu} = -(1/pi) * Im[ <dF_nu, dF_mu>/|F|^2
                                  - <F, dF_mu><dF_nu, F>/|F|^4 ],

the real 2-form of (i/2pi) del delbar log |Z|^2.  The chart oracle
``fs_normalization`` integrates the pullback of the inclusion C -> CP^1
over the whole chart and must return 1 before Chern-number runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import theta as th
from .errors import NonCommutingPair, TorusNotClosed
from .manifold import (
    GEN_A,
    GEN_B,
    GEN_C,
    GEN_D,
    GroupWord,
    KTPoint,
    TwoFormAtPoint,
    act,
    compose,
    inverse,
    multiplicator,
    omega_kt,
)
from .sections import section_matrix_with_gradients

MAP_IDS = ("phi_k", "psi_prime", "psi_double_prime", "omega_kt")


@dataclass(frozen=True)
class PullbackForm(TwoFormAtPoint):
    """A pulled-back 2-form at a base point, in the (dx, dy, dz, dt) basis."""


def _lift_and_partials(map_id: str, k: int, pts: np.ndarray, policy):
    """Lift values (B, n) and coordinate partials (B, 4, n) for a map."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if map_id == "phi_k":
        return section_matrix_with_gradients(k, pts, policy)

    nb = pts.shape[0]
    if map_id == "psi_prime":
        w = pts[:, 2] + 1j * pts[:, 0]
        tau = pts[:, 1] + 1j
        vals, dw, dtau = th._degree_basis_batch(k, w, tau, policy, want_tau=True)
        grads = np.zeros((nb, 4, k), dtype=complex)
        grads[:, 0] = (1j * dw).T
        grads[:, 1] = dtau.T
        grads[:, 2] = dw.T
        return vals.T.copy(), grads
    if map_id == "psi_double_prime":
        w = pts[:, 1] + 1j * pts[:, 3]
        vals, dw = th._degree_basis_batch(k, w, 1j + 0 * w, policy)
        grads = np.zeros((nb, 4, k), dtype=complex)
        grads[:, 1] = dw.T
        grads[:, 3] = (1j * dw).T
        return vals.T.copy(), grads
    raise ValueError(f"unknown map_id {map_id!r}; expected one of {MAP_IDS}")


def _fs_from_lift(vals: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """Batched pullback matrices (B, 4, 4) from lifts and their partials."""
    n2 = np.einsum("bn,bn->b", vals.conj(), vals).real
    c = np.einsum("bn,bmn->bm", vals.conj(), grads)
    m = np.einsum("bmn,bln->bml", grads, grads.conj())
    b = m / n2[:, None, None] - (c[:, :, None] * c.conj()[:, None, :]) / (n2 * n2)[:, None, None]
    omega = -(1.0 / math.pi) * b.imag
    return 0.5 * (omega - omega.transpose(0, 2, 1))


def fs_pullback_batch(map_id: str, k: int, pts: np.ndarray, policy=th.DEFAULT_POLICY) -> np.ndarray:
    """Pullback coefficient matrices at an (B, 4) array of points."""
    if map_id == "omega_kt":
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros((pts.shape[0], 4, 4))
        out[:, 0, 1] = pts[:, 0]
        out[:, 1, 0] = -pts[:, 0]
        out[:, 0, 2] = -1.0
        out[:, 2, 0] = 1.0
        out[:, 1, 3] = 1.0
        out[:, 3, 1] = -1.0
        return out
    vals, grads = _lift_and_partials(map_id, k, pts, policy)
    return _fs_from_lift(vals, grads)


def fs_pullback(map_id: str, k: int, u: KTPoint, policy=th.DEFAULT_POLICY) -> PullbackForm:
    """Pullback of the Fubini-Study form under the named map at ``u``."""
    mat = fs_pullback_batch(map_id, k, u.as_array(), policy)[0]
    return PullbackForm(u, mat)


def fs_normalization(max_radius: float = np.inf) -> float:
    """Integral of the chart pullback C -> CP^1 over the chart; exactly 1.

    Runs the production pullback code on the lift w -> (1, w) and
    integrates the single coefficient radially.
    """

    def ring(r: float) -> float:
        vals = np.array([[1.0, r]], dtype=complex)
        grads = np.zeros((1, 4, 2), dtype=complex)
        grads[0, 0, 1] = 1.0       # d/du
        grads[0, 1, 1] = 1.0j      # d/dv
        coeff = _fs_from_lift(vals, grads)[0, 0, 1]
        return 2.0 * math.pi * r * coeff

    val, _ = quad(ring, 0.0, max_radius)
    return float(val)


@dataclass(frozen=True)
class LeftInvariantDecomposition:
    """Coefficients in the left-invariant 2-form basis at a point.

    Basis order: (dz-xdy)^dx, (dz-xdy)^dy, dx^dy, dy^dt, dx^dt,
    (dz-xdy)^dt.  The last two slots are residuals that vanish for maps
    factoring through (x, y, z) and (y, t).
    """

    point: KTPoint
    zx: float   # (dz - x dy) ^ dx
    zy: float   # (dz - x dy) ^ dy
    xy: float   # dx ^ dy
    yt: float   # dy ^ dt
    xt: float   # dx ^ dt
    zt: float   # (dz - x dy) ^ dt

    def reassemble(self) -> PullbackForm:
        x = self.point.x
        mat = np.zeros((4, 4))
        pairs = {
            (0, 1): self.zx * x + self.xy,
            (0, 2): -self.zx,
            (0, 3): self.xt,
            (1, 2): -self.zy,
            (1, 3): self.yt - x * self.zt,
            (2, 3): self.zt,
        }
        for (i, j), v in pairs.items():
            mat[i, j] = v
            mat[j, i] = -v
        return PullbackForm(self.point, mat)


def decompose_left_invariant(form: TwoFormAtPoint) -> LeftInvariantDecomposition:
    """Exact change of basis into the left-invariant coframe at the base point."""
    mat = form.matrix
    x = form.point.x
    zx = -mat[0, 2]
    zy = -mat[1, 2]
    xt = mat[0, 3]
    zt = mat[2, 3]
    yt = mat[1, 3] + x * zt
    xy = mat[0, 1] - zx * x
    return LeftInvariantDecomposition(form.point, zx, zy, xy, yt, xt, zt)


def pfaffian(form: TwoFormAtPoint) -> float:
    """Pf(Omega) = O_xy O_zt - O_xz O_yt + O_xt O_yz; nonzero iff nondegenerate."""
    m = form.matrix
    return float(m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2])


def pfaffian_batch(mats: np.ndarray) -> np.ndarray:
    m = np.asarray(mats)
    return m[..., 0, 1] * m[..., 2, 3] - m[..., 0, 2] * m[..., 1, 3] + m[..., 0, 3] * m[..., 1, 2]


def exterior_derivative_residual(
    map_id: str, k: int, u: KTPoint, h: float = 1e-4, policy=th.DEFAULT_POLICY
) -> float:
    """Max 3-form component of d(pullback) by finite differences of step ``h``.

    Uses the fourth-order five-point stencil: the second-order truncation
    error of plain central differences does not cancel across the d terms
    and would dominate the residual at the default step.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    base = u.as_array()
    shifts = np.zeros((16, 4))
    for i in range(4):
        shifts[4 * i + 0, i] = 2 * h
        shifts[4 * i + 1, i] = h
        shifts[4 * i + 2, i] = -h
        shifts[4 * i + 3, i] = -2 * h
    mats = fs_pullback_batch(map_id, k, base + shifts, policy)
    deriv = np.empty((4, 4, 4))
    for i in range(4):
        m = mats[4 * i : 4 * i + 4]
        deriv[i] = (-m[0] + 8.0 * m[1] - 8.0 * m[2] + m[3]) / (12.0 * h)
    worst = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            for l in range(j + 1, 4):
                comp = deriv[i, j, l] - deriv[j, i, l] + deriv[l, i, j]
                worst = max(worst, abs(comp))
    return worst


TORUS_AXES = {
    "T_ca": (0, 2),  # a-translation in x, c-translation in z
    "T_bd": (1, 3),
    "T_cb": (1, 2),
    "T_ad": (0, 3),
}

TORUS_WORDS = {
    "T_ca": (GEN_C, GEN_A),
    "T_bd": (GEN_B, GEN_D),
    "T_cb": (GEN_C, GEN_B),
    "T_ad": (GEN_A, GEN_D),
}


@dataclass(frozen=True)
class BasisTorus:
    """A coordinate 2-torus spanned by two commuting unit translations."""

    id: str
    basepoint: KTPoint = KTPoint(0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.id not in TORUS_AXES:
            raise ValueError(f"unknown torus id {self.id!r}")

    def validate_closure(self):
        # tori through the a-direction close only above y = 0 (mod 1),
        # because a twists z by y
        if 0 in TORUS_AXES[self.id]:
            frac = self.basepoint.y - round(self.basepoint.y)
            if abs(frac) > 1e-12:
                raise TorusNotClosed(
                    f"{self.id} requires an integer y basepoint, got y={self.basepoint.y}"
                )

    def grid_points(self, grid: int) -> np.ndarray:
        s = np.arange(grid) / grid
        s1, s2 = np.meshgrid(s, s, indexing="ij")
        axis1, axis2 = TORUS_AXES[self.id]
        pts = np.tile(self.basepoint.as_array(), (grid * grid, 1))
        pts[:, axis1] += s1.ravel()
        pts[:, axis2] += s2.ravel()
        return pts


def integrate_over_torus(
    map_id: str, k: int, torus: BasisTorus, grid: int = 64, policy=th.DEFAULT_POLICY
) -> float:
    """Oriented integral of the pulled-back form over the torus (ds1 ^ ds2).

    Uniform-grid quadrature; the integrand is smooth and periodic, so the
    periodic trapezoid rule converges spectrally.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    torus.validate_closure()
    pts = torus.grid_points(grid)
    mats = fs_pullback_batch(map_id, k, pts, policy)
    axis1, axis2 = TORUS_AXES[torus.id]
    return float(np.mean(mats[:, axis1, axis2]))


def transition_function(w1: GroupWord, w2: GroupWord, u: KTPoint) -> complex:
    """Bundle coordinate change g_{w1 w2}(u) = e_{w1}(u) * e_{w2^-1}(w2.u)."""
    return multiplicator(w1, u) * multiplicator(inverse(w2), act(w2, u))


def chern_cocycle(w1: GroupWord, w2: GroupWord, w3: GroupWord, u: KTPoint) -> float:
    """Integer-valued degree-2 cocycle from principal-branch logarithms.

    (1/2 pi i) * (log g_{12} + log g_{23} - log g_{13}); the transition
    functions multiply to 1 exactly, so the principal branches sum to an
    integer multiple of 2 pi i.
    """
    g12 = transition_function(w1, w2, u)
    g23 = transition_function(w2, w3, u)
    g13 = transition_function(w1, w3, u)
    total = np.log(g12) + np.log(g23) - np.log(g13)
    return float(total.imag / (2.0 * math.pi))


BRANCH_EXPONENTS = {
    # e_w(u) = exp(2*pi*i*f_w(u)) for the generators
    "a": lambda u: -(u.z + 1j * u.x),
    "b": lambda u: 0.0 + 0.0j,
    "c": lambda u: 0.0 + 0.0j,
    "d": lambda u: -(u.y + 1j * u.t),
}

_WORD_TO_BRANCH = {GEN_A: "a", GEN_B: "b", GEN_C: "c", GEN_D: "d"}


def chern_for_generator_pair(lam: GroupWord, mu: GroupWord, u: KTPoint | None = None) -> int:
    """Chern number f_mu(u) + f_lam(mu.u) - f_lam(u) - f_mu(lam.u) for a pair.

    The pair must commute (it spans a torus on the quotient); the value is
    an integer independent of the evaluation point.
    """
    if compose(lam, mu) != compose(mu, lam):
        raise NonCommutingPair(f"words {lam} and {mu} do not commute")
    if lam not in _WORD_TO_BRANCH or mu not in _WORD_TO_BRANCH:
        raise ValueError("branch functions are defined for single generators")
    if u is None:
        u = KTPoint(0.31, 0.67, 0.12, 0.84)
    f_lam = BRANCH_EXPONENTS[_WORD_TO_BRANCH[lam]]
    f_mu = BRANCH_EXPONENTS[_WORD_TO_BRANCH[mu]]
    value = complex(f_mu(u) + f_lam(act(mu, u)) - f_lam(u) - f_mu(act(lam, u)))
    nearest = round(value.real)
    if abs(value - nearest) > 1e-9:
        raise ArithmeticError(f"branch combination {value} is not an integer")
    return int(nearest)


def chern_via_multiplicators(torus_id: str, u: KTPoint | None = None) -> int:
    """First Chern number on a named basis torus from the branch functions."""
    if torus_id not in TORUS_WORDS:
        raise ValueError(f"unknown torus id {torus_id!r}")
    lam, mu = TORUS_WORDS[torus_id]
    return chern_for_generator_pair(lam, mu, u)


def omega_kt_form(u: KTPoint) -> PullbackForm:
    """The invariant form as a PullbackForm, for uniform downstream handling."""
    return PullbackForm(u, omega_kt(u).matrix)
