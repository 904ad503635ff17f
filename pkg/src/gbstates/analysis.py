"""Limiting behaviour, reference states, photon statistics, time evolution.

The closed-form eigenstates interpolate between number states (eta -> 1) and
coherent/squeezed states (m -> inf, eta = alpha^2/m).  This module provides
the reference states, the fidelity/residual scans that probe those limits at
finite resolution, and the free-field time evolution.
"""

import math
from dataclasses import dataclass

import numpy as np

from .fock import annihilation_operator, basis_state, fidelity, hp_generators, matrix_exp
from .solver import GBSParams, solve

K_RULE_MODES = ("center", "top-offset", "bottom")


@dataclass
class PhotonStatistics:
    """Mean, variance and Mandel Q of a photon-number distribution.

    mandel_q is None (an explicit marker, never NaN) when the mean is below
    1e-14, i.e. for the vacuum.
    """

    mean: float
    variance: float
    mandel_q: float | None
    distribution: np.ndarray


@dataclass(frozen=True)
class KRule:
    """Which eigenstate index to follow along a large-m schedule.

    center: k = floor(m/2) + offset; top-offset: k = m - offset;
    bottom: k = offset.
    """

    mode: str
    offset: int = 0

    def __post_init__(self):
        if self.mode not in K_RULE_MODES:
            raise ValueError(f"k rule must be one of {K_RULE_MODES}, got {self.mode!r}")

    def index(self, m: int) -> int:
        if self.mode == "center":
            k = m // 2 + self.offset
        elif self.mode == "top-offset":
            k = m - self.offset
        else:
            k = self.offset
        if not 0 <= k <= m:
            raise ValueError(f"k rule {self} gives index {k} outside 0..{m}")
        return k


@dataclass(frozen=True)
class LimitSchedule:
    """Fixed alpha = sqrt(eta m), ascending m values, and a k rule."""

    alpha: float
    m_values: tuple[int, ...]
    k_rule: KRule

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.m_values:
            raise ValueError("schedule needs at least one m value")
        if list(self.m_values) != sorted(self.m_values):
            raise ValueError("m values must be ascending")
        for m in self.m_values:
            eta = self.alpha ** 2 / m
            if not 0.0 < eta < 1.0:
                raise ValueError(
                    f"eta = alpha^2/m = {eta} outside (0, 1) at m = {m}"
                )

    def eta(self, m: int) -> float:
        return self.alpha ** 2 / m


def _reference_dim(effective_alpha_sq: float, requested: int) -> int:
    # Poisson/squeezed tails die super-exponentially past ~4 alpha^2
    return max(4 * math.ceil(effective_alpha_sq) + 60, requested)


def coherent_state(alpha: complex, dim: int = 0) -> np.ndarray:
    """Truncated coherent state e^{-|a|^2/2} a^n/sqrt(n!) with tail mass <= 1e-12.

    The working dimension is at least 4 ceil(|alpha|^2) + 60; raises if even
    the requested dimension cannot hold the tail.
    """
    alpha = complex(alpha)
    d = _reference_dim(abs(alpha) ** 2, dim)
    amps = np.zeros(d, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(d - 1):
        amps[n + 1] = amps[n] * alpha / math.sqrt(n + 1)
    tail = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if tail > 1e-12:
        raise ValueError(f"dimension {d} leaves coherent tail mass {tail:.3e} > 1e-12")
    return amps


def squeezed_eigenstate(mu: complex, nu: complex, lam: complex, dim: int = 0) -> np.ndarray:
    """Normalized eigenstate of mu a + nu a^dag with eigenvalue lam.

    Solves the two-term recursion mu sqrt(n+1) C_{n+1} = lam C_n - nu sqrt(n)
    C_{n-1}; needs |nu/mu| < 1 for the coefficients to decay.  Raises when
    the truncation cannot hold the tail (residual floor 1e-9).
    """
    mu = complex(mu)
    nu = complex(nu)
    lam = complex(lam)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    if abs(nu / mu) >= 1.0:
        raise ValueError(f"|nu/mu| = {abs(nu / mu)} must be < 1 for convergence")
    eff = abs(lam / mu) / (1.0 - abs(nu / mu))
    d = _reference_dim(eff * eff, dim)
    c = np.zeros(d + 1, dtype=complex)
    c[0] = 1.0
    c[1] = lam / mu
    for n in range(1, d):
        c[n + 1] = (lam * c[n] - nu * math.sqrt(n) * c[n - 1]) / (mu * math.sqrt(n + 1))
    body = c[:d]
    nrm = float(np.linalg.norm(body))
    # the would-be coefficient beyond the cut is the entire residual
    residual = abs(mu) * math.sqrt(d) * abs(c[d]) / nrm
    tail = (abs(c[d]) / nrm) ** 2
    if residual > 1e-9 or tail > 1e-12:
        raise ValueError(
            f"dimension {d} too small: truncation residual {residual:.3e}, "
            f"tail mass {tail:.3e}"
        )
    return body / nrm


def photon_statistics(v: np.ndarray) -> PhotonStatistics:
    """Photon-number mean, variance and Mandel Q of a (normalized) state."""
    v = np.asarray(v, dtype=complex)
    p = np.abs(v) ** 2
    p = p / p.sum()
    n = np.arange(len(p))
    mean = float(np.sum(n * p))
    variance = float(np.sum(n * n * p) - mean * mean)
    mandel_q = (variance - mean) / mean if mean > 1e-14 else None
    return PhotonStatistics(mean=mean, variance=variance, mandel_q=mandel_q, distribution=p)


def embed(v: np.ndarray, dim: int) -> np.ndarray:
    """Zero-pad a state to a larger dimension."""
    v = np.asarray(v, dtype=complex)
    if dim < len(v):
        raise ValueError(f"cannot embed dim {len(v)} into smaller dim {dim}")
    out = np.zeros(dim, dtype=complex)
    out[: len(v)] = v
    return out


def time_evolve(v: np.ndarray, omega: float, t: float) -> np.ndarray:
    """Free single-mode evolution: C_n -> e^{-i omega t (n + 1/2)} C_n (hbar = 1)."""
    v = np.asarray(v, dtype=complex)
    n = np.arange(len(v))
    return v * np.exp(-1j * omega * t * (n + 0.5))


def number_limit_scan(
    mu: complex, nu: complex, m: int, k: int, eta_schedule
) -> list[tuple[float, float]]:
    """Fidelity of the k-th eigenstate against |k> along an eta -> 1 schedule."""
    if not 0 <= k <= m:
        raise ValueError(f"eigenstate index {k} outside 0..{m}")
    rows = []
    for eta in eta_schedule:
        if not 0.0 < eta < 1.0:
            raise ValueError(f"schedule eta {eta} outside (0, 1)")
        sol = solve(GBSParams(mu=mu, nu=nu, eta=eta, m=m))
        fid = fidelity(sol.eigenstates[k], basis_state(k, m + 1))
        rows.append((float(eta), fid))
    return rows


def _limit_target(mu: complex, nu: complex, alpha: float, rule: KRule) -> complex:
    """Eigenvalue of mu a + nu a^dag that the scanned eigenstate approaches.

    Along the center rule the limit state satisfies (mu a + nu a^dag) v =
    (alpha/2) v.  The top-offset and bottom rules only have limits for
    nu = 0, where they approach the coherent state of amplitude alpha/mu and
    the vacuum respectively.
    """
    if rule.mode == "center":
        return alpha / 2.0
    if nu != 0:
        raise ValueError(f"the {rule.mode} rule has no large-m limit unless nu = 0")
    return complex(alpha) if rule.mode == "top-offset" else 0.0j


def squeezed_limit_scan(
    mu: complex, nu: complex, schedule: LimitSchedule
) -> list[tuple[int, float, float]]:
    """(m, residual, fidelity) rows towards the squeezed/coherent/vacuum limit.

    residual is |(mu a + nu a^dag - target) v| with the eigenstate embedded in
    the common dimension; fidelity is against the squeezed eigenstate with
    that target eigenvalue.
    """
    mu = complex(mu)
    nu = complex(nu)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    if abs(nu / mu) >= 1.0:
        raise ValueError(f"|nu/mu| = {abs(nu / mu)} must be < 1")
    target = _limit_target(mu, nu, schedule.alpha, schedule.k_rule)
    reference = squeezed_eigenstate(mu, nu, target)
    rows = []
    for m in schedule.m_values:
        p = GBSParams(mu=mu, nu=nu, eta=schedule.eta(m), m=m)
        state = solve(p).eigenstates[schedule.k_rule.index(m)]
        dim = max(m + 1, len(reference))
        v = embed(state, dim)
        ref = embed(reference, dim)
        a = annihilation_operator(dim - 1)
        op = mu * a + nu * a.conj().T
        residual = float(np.linalg.norm(op @ v - target * v))
        rows.append((int(m), residual, fidelity(v, ref)))
    return rows


def su2_coherent_form(eta: float, phi: float, m: int) -> np.ndarray:
    """Rotated vacuum exp(xi J+ - xi* J-)|0> with xi = -arctan(sqrt(eta/(1-eta))) e^{i phi}.

    Reproduces the top (k = m) eigenstate of the nu = 0 family with
    mu = e^{i phi}, i.e. the binomial state dressed with phases e^{-i n phi}.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie strictly inside (0, 1), got {eta}")
    if m < 0:
        raise ValueError(f"photon cap must be >= 0, got {m}")
    xi = -math.atan(math.sqrt(eta / (1.0 - eta))) * complex(math.cos(phi), math.sin(phi))
    _, jp, jm = hp_generators(m)
    d = matrix_exp(xi * jp - np.conj(xi) * jm)
    return d @ basis_state(0, m + 1)


def coherent_amplitude_discrepancy(
    alpha: float, m_values, phi: float = 0.0
) -> dict:
    """Settle the center-rule limit amplitude: alpha/2 versus alpha/sqrt(2).

    Follows the nu = 0, mu = e^{i phi} center eigenstate along the schedule
    and reports its fidelity against coherent states of both candidate
    amplitudes; the verdict names whichever converges to 1.
    """
    mu = complex(math.cos(phi), math.sin(phi))
    half = []
    root2 = []
    for m in m_values:
        eta = alpha ** 2 / m
        p = GBSParams(mu=mu, nu=0.0, eta=eta, m=m)
        state = solve(p).eigenstates[m // 2]
        for target, out in ((alpha / 2.0, half), (alpha / math.sqrt(2.0), root2)):
            ref = coherent_state(target * mu.conjugate())
            dim = max(len(state), len(ref))
            out.append(fidelity(embed(state, dim), embed(ref, dim)))
    verdict = "alpha/2" if half[-1] >= root2[-1] else "alpha/sqrt(2)"
    return {
        "m_values": [int(m) for m in m_values],
        "fidelity_alpha_half": half,
        "fidelity_alpha_over_sqrt2": root2,
        "verdict": verdict,
    }
