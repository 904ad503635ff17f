"""Closed-form solution of the generalized binomial-state eigenvalue problem.

The operator L = sqrt(1-eta) (mu J+ + nu J-) - sqrt(eta) J0 acts on the
(m+1)-dimensional truncated Fock space.  A single SU(2) rotation D(zeta),
with zeta fixed by a quadratic constraint, removes the J- term; the rotated
operator A+ J+ - A0 J0 is then solved exactly by a terminating two-term
recursion.  The spectrum is A0 (2k - m)/2 for k = 0..m and the eigenstates
are rotated images of states supported on |0>..|k>.

Branches:
  * generic          -- A+ away from zero; full closed-form eigenbasis.
  * degenerate A+ =0 -- happens when mu = nu* (L Hermitian) or eta -> 1;
                        the eigenstates collapse to displaced number states.
  * defective A0 = 0 -- the rotated operator is nilpotent; the m+1
                        eigenvalues all vanish and only a single genuine
                        eigenvector exists.  Reported, never patched over.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .displacement import DisplacementParams, delta_to_zeta, displacement
from .fock import basis_state, hp_generators, normalize_state

ROOT_POLICIES = ("principal", "secondary")

DEGENERATE_APLUS_TOL = 1e-10
DEFECTIVE_AZERO_TOL = 1e-12

_EPS = float(np.finfo(float).eps)


class SolutionKind(Enum):
    GENERIC = "generic"
    DEGENERATE_A_PLUS_ZERO = "degenerate-a-plus-zero"
    DEFECTIVE_A_ZERO_ZERO = "defective-a-zero-zero"


@dataclass(frozen=True)
class GBSParams:
    """Operator parameters {mu, nu, eta, m}; mu != 0 and 0 < eta < 1."""

    mu: complex
    nu: complex
    eta: float
    m: int

    def __post_init__(self):
        if self.mu == 0:
            raise ValueError("mu must be nonzero")
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must lie strictly inside (0, 1), got {self.eta}")
        if self.m < 0:
            raise ValueError(f"photon cap must be >= 0, got {self.m}")

    @property
    def scale(self) -> float:
        """Magnitude reference for the branch-detection thresholds."""
        return abs(self.mu) + abs(self.nu) + 1.0


@dataclass(frozen=True)
class CoefficientTriple:
    """Coefficients (A+, A-, A0) of J+, J-, J0 after the rotation.

    When the rotation comes from a constraint root, A- vanishes up to
    rounding; the solver relies on that.
    """

    a_plus: complex
    a_minus: complex
    a_zero: complex


@dataclass
class GBSSolution:
    params: GBSParams
    delta_root: complex
    zeta: DisplacementParams
    triple: CoefficientTriple
    eigenvalues: np.ndarray
    eigenstates: list[np.ndarray]
    kind: SolutionKind


def build_operator(p: GBSParams) -> np.ndarray:
    """Dense (m+1)x(m+1) matrix sqrt(1-eta)(mu J+ + nu J-) - sqrt(eta) J0."""
    j0, jp, jm = hp_generators(p.m)
    return math.sqrt(1.0 - p.eta) * (p.mu * jp + p.nu * jm) - math.sqrt(p.eta) * j0


def constraint_roots(p: GBSParams) -> tuple[complex, complex]:
    """Both roots of mu sqrt(1-eta) D^2 + sqrt(eta) D - sqrt(1-eta) nu = 0.

    The roots are the values of delta = e^{-i theta} tan r that kill the J-
    coefficient of the rotated operator.  Solved with the cancellation-free
    quadratic formula; equal roots are returned twice.
    """
    a = p.mu * math.sqrt(1.0 - p.eta)
    b = complex(math.sqrt(p.eta))
    c = -math.sqrt(1.0 - p.eta) * p.nu
    if c == 0:
        return 0.0 + 0.0j, -b / a
    disc2 = b * b - 4.0 * a * c
    # a discriminant below the rounding floor of its two summands is a true
    # double root (the defective point); keep it exactly zero rather than
    # letting sqrt(rounding noise) fake a ~1e-8 splitting
    if abs(disc2) <= 16.0 * _EPS * (abs(b * b) + 4.0 * abs(a) * abs(c)):
        disc2 = 0.0
    disc = cmath.sqrt(disc2)
    # pick the sign that avoids subtracting nearly equal quantities
    q = -(b + disc) / 2.0 if (b.conjugate() * disc).real >= 0.0 else -(b - disc) / 2.0
    if q == 0:  # b = 0 and disc = 0; double root at the origin
        return 0.0 + 0.0j, 0.0 + 0.0j
    return q / a, c / q


def select_root(p: GBSParams, root_policy: str = "principal") -> complex:
    """Principal = smaller |delta| (ties: nonnegative real part); secondary = other.

    The smaller rotation keeps D(zeta) well conditioned and reduces to the
    no-rotation case delta = 0 when nu = 0.
    """
    if root_policy not in ROOT_POLICIES:
        raise ValueError(f"root policy must be one of {ROOT_POLICIES}, got {root_policy!r}")
    r1, r2 = constraint_roots(p)
    if abs(r1) != abs(r2):
        principal, secondary = (r1, r2) if abs(r1) < abs(r2) else (r2, r1)
    else:
        principal, secondary = (r1, r2) if r1.real >= r2.real else (r2, r1)
    return principal if root_policy == "principal" else secondary


def coefficient_triple(p: GBSParams, delta: complex) -> CoefficientTriple:
    """Rotated-frame coefficients for the rotation encoded by delta."""
    zeta = delta_to_zeta(delta, p.m)
    r, theta = zeta.r, zeta.theta
    sq = math.sqrt(1.0 - p.eta)
    se = math.sqrt(p.eta)
    c2 = math.cos(r) ** 2
    s2 = math.sin(r) ** 2
    s2r = math.sin(2.0 * r)
    c2r = math.cos(2.0 * r)
    eip = complex(math.cos(theta), math.sin(theta))
    eim = eip.conjugate()
    a_plus = sq * (p.mu * c2 - p.nu * s2 * eip * eip) - 0.5 * se * eip * s2r
    a_minus = sq * (p.nu * c2 - p.mu * s2 * eim * eim) - 0.5 * se * eim * s2r
    a_zero = sq * (p.mu * eim + p.nu * eip) * s2r + se * c2r
    return CoefficientTriple(a_plus=a_plus, a_minus=a_minus, a_zero=a_zero)


def branch_kind(p: GBSParams, triple: CoefficientTriple) -> SolutionKind:
    if abs(triple.a_plus) <= DEGENERATE_APLUS_TOL * p.scale:
        return SolutionKind.DEGENERATE_A_PLUS_ZERO
    if abs(triple.a_zero) <= DEFECTIVE_AZERO_TOL * p.scale:
        return SolutionKind.DEFECTIVE_A_ZERO_ZERO
    return SolutionKind.GENERIC


def spectrum(p: GBSParams, root_policy: str = "principal") -> np.ndarray:
    """All m+1 eigenvalues A0 (2k - m)/2, k ascending 0..m."""
    triple = coefficient_triple(p, select_root(p, root_policy))
    k = np.arange(p.m + 1)
    return triple.a_zero * (2 * k - p.m) / 2.0


def _sum_form_core(triple: CoefficientTriple, k: int, m: int) -> np.ndarray:
    """Rotated-frame eigenstate for index k, supported on |0>..|k>.

    Runs the product form of the two-term recursion
        c_{n+1} sqrt((n+1)(m-n)) A+ = c_n A0 (k - n),
    which never divides by a previous coefficient and so survives A0 = 0 or
    the factor (k - n) hitting zero.  Rescales on the fly to dodge overflow
    when |A0/A+| is large.
    """
    c = np.zeros(m + 1, dtype=complex)
    c[0] = 1.0
    for n in range(k):
        c[n + 1] = c[n] * triple.a_zero * (k - n) / (
            triple.a_plus * math.sqrt((n + 1) * (m - n))
        )
        big = abs(c[n + 1])
        if big > 1e200:
            c[: n + 2] /= big
    return normalize_state(c)


def undisplaced_eigenstate(p: GBSParams, k: int, root_policy: str = "principal") -> np.ndarray:
    """Eigenstate of the rotated operator A+ J+ - A0 J0, before displacing back."""
    if not 0 <= k <= p.m:
        raise ValueError(f"eigenstate index {k} outside 0..{p.m}")
    triple = coefficient_triple(p, select_root(p, root_policy))
    kind = branch_kind(p, triple)
    if kind is not SolutionKind.GENERIC:
        raise ValueError(
            f"closed-form eigenstates need the generic branch, got {kind.value}"
        )
    return _sum_form_core(triple, k, p.m)


def eigenstate_sum(p: GBSParams, k: int, root_policy: str = "principal") -> np.ndarray:
    """Eigenstate via the finite-sum form, displaced back to the original frame."""
    core = undisplaced_eigenstate(p, k, root_policy)
    zeta = delta_to_zeta(select_root(p, root_policy), p.m)
    return normalize_state(displacement(zeta) @ core)


def _exponential_form_core(triple: CoefficientTriple, k: int, m: int) -> np.ndarray:
    """Rotated-frame eigenstate as exp of a weighted lowering operator on |0>.

    The exponent is (A0/A+) sqrt((k-N+1)/(m-N+1)) acting after a^dag sqrt(k-N);
    on the n <= k sector its only matrix elements are
        (n+1, n): (A0/A+) (k - n) sqrt((n+1)/(m-n)),
    and it annihilates everything above, so the series applied to the vacuum
    terminates after k+1 terms.
    """
    ratio = triple.a_zero / triple.a_plus
    v = np.zeros(m + 1, dtype=complex)
    term = np.zeros(m + 1, dtype=complex)
    v[0] = 1.0
    term[0] = 1.0
    for j in range(1, k + 1):
        nxt = np.zeros(m + 1, dtype=complex)
        for n in range(k):
            if term[n] != 0:
                nxt[n + 1] = term[n] * ratio * (k - n) * math.sqrt((n + 1) / (m - n))
        term = nxt / j
        v = v + term
        big = np.abs(term).max()
        if big > 1e200:
            v /= big
            term /= big
    return normalize_state(v)


def eigenstate_exponential(p: GBSParams, k: int, root_policy: str = "principal") -> np.ndarray:
    """Eigenstate via the exponential form; equal to eigenstate_sum."""
    if not 0 <= k <= p.m:
        raise ValueError(f"eigenstate index {k} outside 0..{p.m}")
    triple = coefficient_triple(p, select_root(p, root_policy))
    kind = branch_kind(p, triple)
    if kind is not SolutionKind.GENERIC:
        raise ValueError(
            f"closed-form eigenstates need the generic branch, got {kind.value}"
        )
    core = _exponential_form_core(triple, k, p.m)
    zeta = delta_to_zeta(select_root(p, root_policy), p.m)
    return normalize_state(displacement(zeta) @ core)


def degenerate_eigenstates(p: GBSParams, root_policy: str = "principal") -> list[np.ndarray]:
    """Orthonormal eigenbasis D(zeta)|k> for the A+ = 0 branch.

    The rotation that kills A- also kills A+ exactly when mu = nu* (Hermitian
    operator) or in the eta -> 1 limit; the rotated operator is then -A0 J0,
    already diagonal, and the eigenstates are the displaced number states.
    """
    delta = select_root(p, root_policy)
    triple = coefficient_triple(p, delta)
    if branch_kind(p, triple) is not SolutionKind.DEGENERATE_A_PLUS_ZERO:
        raise ValueError("degenerate_eigenstates needs the A+ = 0 branch")
    d = displacement(delta_to_zeta(delta, p.m))
    return [normalize_state(d[:, k]) for k in range(p.m + 1)]


def solve(p: GBSParams, root_policy: str = "principal") -> GBSSolution:
    """Full closed-form solution: root, rotation, coefficients, spectrum, states."""
    delta = select_root(p, root_policy)
    zeta = delta_to_zeta(delta, p.m)
    triple = coefficient_triple(p, delta)
    kind = branch_kind(p, triple)
    k = np.arange(p.m + 1)
    eigenvalues = triple.a_zero * (2 * k - p.m) / 2.0

    if kind is SolutionKind.DEGENERATE_A_PLUS_ZERO:
        d = displacement(zeta)
        eigenstates = [normalize_state(d[:, kk]) for kk in range(p.m + 1)]
    elif kind is SolutionKind.DEFECTIVE_A_ZERO_ZERO:
        # nilpotent rotated operator: a single Jordan chain headed by the
        # rotated vacuum is all there is
        eigenstates = [normalize_state(displacement(zeta) @ basis_state(0, p.m + 1))]
    else:
        d = displacement(zeta)
        eigenstates = [
            normalize_state(d @ _sum_form_core(triple, kk, p.m)) for kk in range(p.m + 1)
        ]
    return GBSSolution(
        params=p,
        delta_root=delta,
        zeta=zeta,
        triple=triple,
        eigenvalues=eigenvalues,
        eigenstates=eigenstates,
        kind=kind,
    )


def binomial_phase_parameters(
    p: GBSParams, root_policy: str = "principal"
) -> tuple[float, float, float]:
    """(eta', theta0, theta+) of the top rotated-frame eigenstate.

    The k = m eigenstate, before displacing back, is a binomial state with
    probability eta' = |A0|^2 / (|A0|^2 + |A+|^2) and phases e^{i n (theta0
    - theta+)}, where theta0 and theta+ are the arguments of A0 and A+.
    """
    triple = coefficient_triple(p, select_root(p, root_policy))
    if branch_kind(p, triple) is not SolutionKind.GENERIC:
        raise ValueError("binomial phase parameters need the generic branch")
    a0 = abs(triple.a_zero)
    ap = abs(triple.a_plus)
    eta_prime = a0 * a0 / (a0 * a0 + ap * ap)
    theta0 = cmath.phase(triple.a_zero)
    theta_plus = cmath.phase(triple.a_plus)
    return eta_prime, theta0, theta_plus
