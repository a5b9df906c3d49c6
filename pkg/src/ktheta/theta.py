"""Classical Jacobi theta series with certified truncation.

The series used throughout the package is

    theta(z, tau) = sum_{n in Z} exp(2*pi*i*n*z + pi*i*n*(n-1)*tau),

which converges for Im(tau) > 0.  Every evaluation chooses a symmetric
index window [-N, N] whose discarded tail is dominated by a geometric
series and certified below the policy epsilon, so reported values carry
an absolute error guarantee.  Derivatives are summed termwise with the
polynomial weight folded into the tail bound.

The degree-k basis element with residue p is

    theta_k^p(z, tau) = exp(2*pi*i*p*z) * theta(k*z + p*tau, k*tau),

equal termwise to the coefficient-recursion closed form
sum_m exp(2*pi*i*(p+m*k)*z + 2*pi*i*tau*(m*p + k*m*(m-1)/2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModulus, ShiftSumNonzero, TailNotConverged

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ThetaArgument:
    """A point (z, tau) of the classical theta domain, Im(tau) > 0."""

    z: complex
    tau: complex

    def __post_init__(self):
        if not (np.isfinite(self.z) and np.isfinite(self.tau)):
            raise InvalidModulus("theta argument must be finite")
        if self.tau.imag <= 0.0:
            raise InvalidModulus(f"Im(tau) must be positive, got {self.tau.imag}")


@dataclass(frozen=True)
class TruncationPolicy:
    """Target absolute tail bound and a hard cap on the window index."""

    epsilon: float = 1e-14
    max_terms: int = 512

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class ThetaBasisIndex:
    """Degree k and residue selector p of a degree-k basis element."""

    k: int
    p: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("degree k must be at least 1")
        if not 0 <= self.p < self.k:
            raise ValueError(f"residue p={self.p} outside [0, {self.k})")


def _tail_bound_arrays(im_z, im_tau, n, z_order=0, tau_order=0):
    """Vectorized geometric tail bound for the (z_order, tau_order) derivative.

    ``im_z`` and ``im_tau`` are broadcastable real arrays, ``n >= 1``.  The
    bound dominates sum_{|index| > n} of the absolute termwise-differentiated
    terms; it is +inf when the geometric ratio at the window edge is >= 1.
    """
    im_z = np.asarray(im_z, dtype=float)
    im_tau = np.asarray(im_tau, dtype=float)
    k0 = n + 1

    # positive indices k >= k0 (note k0 >= 2, so k0*(k0-1) >= 2)
    log_t = -TWO_PI * k0 * im_z - math.pi * k0 * (k0 - 1) * im_tau
    log_p = z_order * math.log(TWO_PI * k0) + tau_order * math.log(math.pi * k0 * (k0 - 1))
    poly_ratio = ((k0 + 1) / k0) ** z_order * ((k0 + 1) / (k0 - 1)) ** tau_order
    q = np.exp(-TWO_PI * im_z - TWO_PI * k0 * im_tau) * poly_ratio
    with np.errstate(divide="ignore", over="ignore"):
        pos = np.where(q < 1.0, np.exp(log_t + log_p) / np.maximum(1.0 - q, 1e-300), np.inf)

    # negative indices -j, j >= k0
    log_t2 = TWO_PI * k0 * im_z - math.pi * k0 * (k0 + 1) * im_tau
    log_p2 = z_order * math.log(TWO_PI * k0) + tau_order * math.log(math.pi * k0 * (k0 + 1))
    poly_ratio2 = ((k0 + 1) / k0) ** z_order * ((k0 + 2) / k0) ** tau_order
    q2 = np.exp(TWO_PI * im_z - TWO_PI * (k0 + 1) * im_tau) * poly_ratio2
    with np.errstate(divide="ignore", over="ignore"):
        neg = np.where(q2 < 1.0, np.exp(log_t2 + log_p2) / np.maximum(1.0 - q2, 1e-300), np.inf)

    return pos + neg


def _pick_window(im_z, im_tau, policy, z_order=0, tau_order=0):
    """Smallest window index N whose certified tail is <= policy.epsilon."""
    im_z = np.asarray(im_z, dtype=float)
    im_tau = np.asarray(im_tau, dtype=float)
    crossover = np.max(np.abs(im_z) / im_tau)
    n = max(1, int(math.ceil(crossover)))
    while n <= policy.max_terms:
        bound = np.max(_tail_bound_arrays(im_z, im_tau, n, z_order, tau_order))
        if bound <= policy.epsilon:
            return n
        # far from the target the bound drops by ~exp(-2*pi*n*im_tau) per step
        n = n + 1 if bound < policy.epsilon * 1e8 else max(n + 2, int(n * 1.25))
    raise TailNotConverged(
        f"tail bound did not reach {policy.epsilon} within max_terms={policy.max_terms}"
    )


def _eval_series(zs, taus, policy, orders):
    """Evaluate termwise derivatives of the theta series on arrays.

    ``orders`` is a sequence of (z_order, tau_order) pairs; one array per
    pair is returned, all sharing a single certified window and a fixed
    summation order.
    """
    zs = np.asarray(zs, dtype=complex)
    taus = np.asarray(taus, dtype=complex)
    zs, taus = np.broadcast_arrays(zs, taus)
    zo_max = max(o[0] for o in orders)
    to_max = max(o[1] for o in orders)
    n = _pick_window(zs.imag, taus.imag, policy, zo_max, to_max)

    idx = np.arange(-n, n + 1)
    quad = idx * (idx - 1)
    expo = (2j * math.pi) * zs[..., None] * idx + (1j * math.pi) * taus[..., None] * quad
    terms = np.exp(expo)

    out = []
    for zo, to in orders:
        w = np.ones_like(idx, dtype=complex)
        if zo:
            w = w * (2j * math.pi * idx) ** zo
        if to:
            w = w * (1j * math.pi * quad) ** to
        out.append((terms * w).sum(axis=-1))
    return out


def tail_bound(arg: ThetaArgument, n: int, z_order: int = 0, tau_order: int = 0) -> float:
    """Certified upper bound on the absolute tail beyond index ``n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return float(_tail_bound_arrays(arg.z.imag, arg.tau.imag, n, z_order, tau_order))


def theta(arg: ThetaArgument, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Evaluate theta(z, tau) with absolute error at most policy.epsilon."""
    return complex(_eval_series(arg.z, arg.tau, policy, [(0, 0)])[0])


def theta_deriv(
    arg: ThetaArgument,
    z_order: int,
    tau_order: int,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> complex:
    """Termwise derivative d^{z_order}/dz d^{tau_order}/dtau of theta."""
    if z_order < 0 or tau_order < 0:
        raise ValueError("derivative orders must be nonnegative")
    return complex(_eval_series(arg.z, arg.tau, policy, [(z_order, tau_order)])[0])


def theta_zero(tau: complex) -> complex:
    """Representative zero of theta(., tau) in the fundamental region.

    The pairing n <-> 1-n cancels the series exactly at z = 1/2, which is
    the single zero (up to multiplicity) modulo Z + tau*Z.
    """
    if complex(tau).imag <= 0.0:
        raise InvalidModulus("Im(tau) must be positive")
    return 0.5 + 0.0j


def _degree_basis_batch(k, ws, taus, policy, want_tau=False):
    """Degree-k basis values and derivatives on arrays of arguments.

    Returns arrays of shape (k,) + broadcast(ws, taus).shape: the values,
    the d/dz derivatives, and (if ``want_tau``) the d/dtau derivatives of
    every theta_k^p at (ws, taus).
    """
    ws = np.asarray(ws, dtype=complex)
    taus = np.asarray(taus, dtype=complex)
    ws, taus = np.broadcast_arrays(ws, taus)
    shape = (k,) + ws.shape
    vals = np.empty(shape, dtype=complex)
    dws = np.empty(shape, dtype=complex)
    dtaus = np.empty(shape, dtype=complex) if want_tau else None
    orders = [(0, 0), (1, 0), (0, 1)] if want_tau else [(0, 0), (1, 0)]
    for p in range(k):
        big_z = k * ws + p * taus
        big_t = k * taus
        parts = _eval_series(big_z, big_t, policy, orders)
        th, th_z = parts[0], parts[1]
        phase = np.exp(2j * math.pi * p * ws)
        vals[p] = phase * th
        dws[p] = 2j * math.pi * p * vals[p] + k * phase * th_z
        if want_tau:
            dtaus[p] = phase * (p * th_z + k * parts[2])
    if want_tau:
        return vals, dws, dtaus
    return vals, dws


def theta_degree_k(
    idx: ThetaBasisIndex,
    arg: ThetaArgument,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> complex:
    """Degree-k basis element theta_k^p at (z, tau).

    Satisfies theta_k^p(z+1) = theta_k^p(z) and
    theta_k^p(z+tau) = exp(-2*pi*i*k*z) * theta_k^p(z).
    """
    phase = np.exp(2j * math.pi * idx.p * arg.z)
    inner = _eval_series(idx.k * arg.z + idx.p * arg.tau, idx.k * arg.tau, policy, [(0, 0)])[0]
    return complex(phase * inner)


def theta_degree_k_deriv(
    idx: ThetaBasisIndex,
    arg: ThetaArgument,
    policy: TruncationPolicy = DEFAULT_POLICY,
):
    """Value, d/dz and d/dtau of theta_k^p at (z, tau) in one series pass."""
    vals, dws, dtaus = _degree_basis_batch(idx.k, arg.z, arg.tau, policy, want_tau=True)
    return complex(vals[idx.p]), complex(dws[idx.p]), complex(dtaus[idx.p])


def classical_product(
    shifts,
    arg: ThetaArgument,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> complex:
    """Product of shifted theta factors prod_i theta(z + a_i, tau).

    The shifts must sum to zero; the product then lies in the span of the
    degree-k basis at the same tau, k = len(shifts).
    """
    shifts = np.asarray(list(shifts), dtype=complex)
    if shifts.size < 1:
        raise ValueError("at least one shift is required")
    total = shifts.sum()
    if abs(total) > 1e-12:
        raise ShiftSumNonzero(f"shifts sum to {total}, expected 0")
    factors = _eval_series(arg.z + shifts, arg.tau, policy, [(0, 0)])[0]
    return complex(np.prod(factors))
