"""Theta functions on the quotient of R^4: basis sections, shifts, products.

The degree-one section is

    theta_kt(x, y, z, t) = theta(z + i x, y + i) * theta(y + i t, i)

and the degree-k space is spanned by the k^2 products

    s_{p,q}(u) = theta_k^p(z + i x, y + i) * theta_k^q(y + i t, i),

flattened project-wide as index p*k + q.  Sections transform under the
deck group by the k-th power of the multiplicators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import theta as th
from .errors import EquivalentPoints, IllConditioned, SearchFailed, ShiftSumNonzero
from .manifold import KTPoint, fundamental_domain_samples, quotient_distance

BASE_TAU = 1j  # modulus of the base-torus factor


@dataclass(frozen=True)
class SectionIndex:
    """Degree k with fiber residue p and base residue q, both in [0, k)."""

    k: int
    p: int
    q: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("degree k must be at least 1")
        if not (0 <= self.p < self.k and 0 <= self.q < self.k):
            raise ValueError("residues must lie in [0, k)")

    @property
    def flat(self) -> int:
        return self.p * self.k + self.q


@dataclass(frozen=True)
class ZetaShift:
    """A shift (zeta1, zeta2) of the two theta arguments."""

    zeta1: complex
    zeta2: complex

    def __post_init__(self):
        if not (np.isfinite(self.zeta1) and np.isfinite(self.zeta2)):
            raise ValueError("shift components must be finite")


def _split_points(pts: np.ndarray):
    """Fiber/base arguments for an (..., 4) array of points."""
    pts = np.asarray(pts, dtype=float)
    w1 = pts[..., 2] + 1j * pts[..., 0]
    tau1 = pts[..., 1] + 1j
    w2 = pts[..., 1] + 1j * pts[..., 3]
    return w1, tau1, w2


def theta_kt(u: KTPoint, policy: th.TruncationPolicy = th.DEFAULT_POLICY) -> complex:
    """The degree-one theta function at ``u``."""
    fib = th.theta(th.ThetaArgument(u.z + 1j * u.x, u.y + 1j), policy)
    base = th.theta(th.ThetaArgument(u.y + 1j * u.t, BASE_TAU), policy)
    return fib * base


def section_matrix(k: int, pts: np.ndarray, policy=th.DEFAULT_POLICY) -> np.ndarray:
    """Values of all k^2 basis sections at points, shape (B, k^2)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    w1, tau1, w2 = _split_points(pts)
    fib, _ = th._degree_basis_batch(k, w1, tau1, policy)          # (k, B)
    base, _ = th._degree_basis_batch(k, w2, BASE_TAU + 0 * w2, policy)
    vals = np.einsum("p...,q...->...pq", fib, base)
    return vals.reshape(pts.shape[:-1] + (k * k,))


def section_matrix_with_gradients(k: int, pts: np.ndarray, policy=th.DEFAULT_POLICY):
    """Values (B, k^2) and coordinate gradients (B, 4, k^2) of the basis.

    Gradients are analytic chain-rule derivatives; no finite differences.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    w1, tau1, w2 = _split_points(pts)
    fib, fib_w, fib_tau = th._degree_basis_batch(k, w1, tau1, policy, want_tau=True)
    base, base_w = th._degree_basis_batch(k, w2, BASE_TAU + 0 * w2, policy)

    vals = np.einsum("pb,qb->bpq", fib, base)
    grads = np.empty((pts.shape[0], 4, k, k), dtype=complex)
    fw_g = np.einsum("pb,qb->bpq", fib_w, base)
    f_gw = np.einsum("pb,qb->bpq", fib, base_w)
    grads[:, 0] = 1j * fw_g                                        # d/dx
    grads[:, 1] = np.einsum("pb,qb->bpq", fib_tau, base) + f_gw    # d/dy
    grads[:, 2] = fw_g                                             # d/dz
    grads[:, 3] = 1j * f_gw                                        # d/dt
    n2 = k * k
    return vals.reshape(-1, n2), grads.reshape(-1, 4, n2)


def section(idx: SectionIndex, u: KTPoint, policy=th.DEFAULT_POLICY) -> complex:
    """Value of the basis section s_{p,q} at ``u``."""
    return complex(section_matrix(idx.k, u.as_array(), policy)[0, idx.flat])


def section_gradient(idx: SectionIndex, u: KTPoint, policy=th.DEFAULT_POLICY) -> np.ndarray:
    """Analytic (d/dx, d/dy, d/dz, d/dt) of s_{p,q} at ``u``."""
    _, grads = section_matrix_with_gradients(idx.k, u.as_array(), policy)
    return grads[0, :, idx.flat]


def zeta_action(zeta: ZetaShift, u: KTPoint, policy=th.DEFAULT_POLICY) -> complex:
    """Shifted product theta(w1 + zeta1, y+i) * theta(w2 + zeta2, i)."""
    fib = th.theta(th.ThetaArgument(u.z + 1j * u.x + zeta.zeta1, u.y + 1j), policy)
    base = th.theta(th.ThetaArgument(u.y + 1j * u.t + zeta.zeta2, BASE_TAU), policy)
    return fib * base


def product_of_shifts(zetas, u: KTPoint, policy=th.DEFAULT_POLICY) -> complex:
    """Product of shifted degree-one sections; requires componentwise zero sum.

    With sum(zeta_i) = (0, 0) the product transforms as a degree-k section,
    k = len(zetas), and lies in the span of the k^2 basis sections on every
    leaf of constant y.  The expansion coefficients of the fiber factors
    depend on the fiber modulus y + i, so the combination is constant along
    each leaf but varies from leaf to leaf.
    """
    zetas = list(zetas)
    s1 = sum(z.zeta1 for z in zetas)
    s2 = sum(z.zeta2 for z in zetas)
    if abs(s1) > 1e-12 or abs(s2) > 1e-12:
        raise ShiftSumNonzero(f"shift sums ({s1}, {s2}) are nonzero")
    return _raw_shift_product(zetas, u, policy)


def _raw_shift_product(zetas, u: KTPoint, policy=th.DEFAULT_POLICY) -> complex:
    val = 1.0 + 0.0j
    for z in zetas:
        val *= zeta_action(z, u, policy)
    return val


def fit_in_span(samples, k: int, policy=th.DEFAULT_POLICY):
    """Least-squares fit of sampled values against the k^2 basis sections.

    ``samples`` is a sequence of (KTPoint, value) pairs, at least 2*k^2 of
    them.  Returns (coefficients, relative l2 residual).
    """
    pts = np.array([s[0].as_array() for s in samples])
    vals = np.array([s[1] for s in samples], dtype=complex)
    if len(samples) < 2 * k * k:
        raise ValueError(f"need at least {2 * k * k} samples for degree {k}")
    design = section_matrix(k, pts, policy)
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > 1e12:
        raise IllConditioned("sample matrix condition number exceeds 1e12")
    coeffs, _, _, _ = np.linalg.lstsq(design, vals, rcond=None)
    residual = float(np.linalg.norm(design @ coeffs - vals) / np.linalg.norm(vals))
    return coeffs, residual


@dataclass(frozen=True)
class SeparationResult:
    """Shift parameters of a degree-3 section vanishing at u but not at v."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    value_at_u: complex
    value_at_v: complex
    scale: float
    branch: str

    @property
    def zetas(self) -> tuple[ZetaShift, ZetaShift, ZetaShift]:
        return (
            ZetaShift(self.alpha, self.gamma),
            ZetaShift(self.beta, self.delta),
            ZetaShift(-self.alpha - self.beta, -self.gamma - self.delta),
        )


def separating_value(result: SeparationResult, u: KTPoint, policy=th.DEFAULT_POLICY) -> complex:
    """Evaluate the separating section of ``result`` at a point."""
    return _raw_shift_product(result.zetas, u, policy)


def _base_torus_distance(u: KTPoint, v: KTPoint) -> float:
    """Distance of the (y, t) base coordinates modulo unit translations."""
    dy = (v.y - u.y) % 1.0
    dt = (v.t - u.t) % 1.0
    dy = min(dy, 1.0 - dy)
    dt = min(dt, 1.0 - dt)
    return math.hypot(dy, dt)


def _try_branch(branch, u, v, policy, rng, retries, probes):
    """One branch of the separating-section search; None when retries run out."""
    w1u = u.z + 1j * u.x
    w2u = u.y + 1j * u.t
    half = th.theta_zero(BASE_TAU)  # z = 1/2 kills a theta factor
    for _ in range(retries):
        if branch == "base":
            gamma = half - w2u
            alpha, beta = (rng.random(2) + 1j * (rng.random(2) - 0.5) * 0.6)
            delta = complex(rng.random() + 1j * (rng.random() - 0.5) * 0.6)
        else:
            alpha = half - w1u
            beta = complex(rng.random() + 1j * (rng.random() - 0.5) * 0.6)
            gamma, delta = (rng.random(2) + 1j * (rng.random(2) - 0.5) * 0.6)
        result = SeparationResult(
            complex(alpha), complex(beta), complex(gamma), complex(delta),
            0.0, 0.0, 0.0, branch,
        )
        zetas = result.zetas
        scale = max(abs(_raw_shift_product(zetas, KTPoint.from_array(pt), policy)) for pt in probes)
        s_u = _raw_shift_product(zetas, u, policy)
        s_v = _raw_shift_product(zetas, v, policy)
        if scale > 0 and abs(s_u) < 1e-8 * scale and abs(s_v) > 1e-3 * scale:
            return SeparationResult(
                result.alpha, result.beta, result.gamma, result.delta,
                s_u, s_v, scale, branch,
            )
    return None


def separating_section(
    u: KTPoint,
    v: KTPoint,
    policy=th.DEFAULT_POLICY,
    seed: int = 0,
    retries: int = 32,
) -> SeparationResult:
    """Degree-3 section with s(u) = 0 and s(v) != 0, by the zero-placement search.

    The base branch places a zero of the base factor at u (gamma = 1/2 - w2(u));
    when u and v share base coordinates modulo the lattice the fiber branch
    places the zero in the fiber factor instead (alpha = 1/2 - w1(u)).  The
    remaining shifts are drawn from a seeded generator until the other
    factors stay away from zero at v, judged against a probe-set scale.
    """
    if quotient_distance(u, v) < 1e-8:
        raise EquivalentPoints("points coincide on the quotient")
    u, _ = reduce_mod_lattice(u)
    v, _ = reduce_mod_lattice(v)
    rng = np.random.default_rng(seed)
    probes = fundamental_domain_samples(24, seed=1729)

    primary = "fiber" if _base_torus_distance(u, v) < 1e-4 else "base"
    order = (primary, "fiber" if primary == "base" else "base")
    for branch in order:
        if branch == "fiber" and primary == "base":
            # fallback only makes sense when the fiber coordinates differ
            if abs((v.z + 1j * v.x) - (u.z + 1j * u.x)) < 1e-8:
                continue
        found = _try_branch(branch, u, v, policy, rng, retries, probes)
        if found is not None:
            return found
    raise SearchFailed(f"no separating section after {retries} seeded attempts per branch")


def reduce_mod_lattice(u: KTPoint):
    """Thin re-export of the fundamental-domain reduction."""
    from .manifold import reduce_point

    return reduce_point(u)
