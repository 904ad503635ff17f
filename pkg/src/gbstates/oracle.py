"""Independent dense eigensolver used to verify the closed-form pipeline.

Nothing here touches the solver's formulas: eigenvalues come from balancing,
Householder reduction to Hessenberg form and shifted QR iteration with
deflation; eigenvectors come from shifted inverse iteration.  Self-contained
on purpose, so agreement with the closed form is a genuine cross-check.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .fock import normalize_state
from .solver import GBSParams, GBSSolution, SolutionKind, build_operator

_EPS = float(np.finfo(float).eps)
_INVERSE_ITERATION_SEED = 1905


class NonConvergenceError(RuntimeError):
    """QR iteration hit its cap without deflating the whole matrix."""


@dataclass
class SpectrumReport:
    """Oracle vs closed-form comparison for one parameter point.

    pairing maps closed-form indices to oracle indices (a bijection).  When
    the defective branch collapses all eigenvalues onto one point, pairing
    them is meaningless (a Jordan block scatters numerically at the
    eps^(1/(m+1)) scale); multiplicity_collapse is set instead and the pair
    error is left undefined.
    """

    oracle_eigenvalues: np.ndarray
    closed_form_eigenvalues: np.ndarray
    pairing: list[tuple[int, int]] = field(default_factory=list)
    max_pair_error: float | None = None
    max_residual: float | None = None
    multiplicity_collapse: bool = False


def _balance(a: np.ndarray, sweeps: int = 50) -> np.ndarray:
    """Osborne balancing with radix-2 scaling (an exact similarity).

    Equalizes row and column norms; for strongly non-normal inputs this is
    what keeps the QR eigenvalues accurate to ~1e-12 instead of ~1e-9.
    """
    h = np.array(a, dtype=complex, copy=True)
    n = h.shape[0]
    for _ in range(sweeps):
        converged = True
        for i in range(n):
            r = np.abs(h[i, :]).sum() - abs(h[i, i])
            c = np.abs(h[:, i]).sum() - abs(h[i, i])
            if r == 0.0 or c == 0.0:
                continue
            f = 1.0
            while c < r / 2.0:
                c *= 2.0
                r /= 2.0
                f *= 2.0
            while c >= r * 2.0:
                c /= 2.0
                r *= 2.0
                f /= 2.0
            if f != 1.0:
                converged = False
                h[:, i] *= f
                h[i, :] /= f
        if converged:
            break
    return h


def _hessenberg(a: np.ndarray) -> np.ndarray:
    """Householder reduction to upper Hessenberg form."""
    h = np.array(a, dtype=complex, copy=True)
    n = h.shape[0]
    for c in range(n - 2):
        x = h[c + 1:, c]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        v = x.copy()
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0.0 else 1.0
        v[0] += phase * nx
        vn = np.linalg.norm(v)
        if vn == 0.0:
            continue
        v = v / vn
        h[c + 1:, c:] -= 2.0 * np.outer(v, v.conj() @ h[c + 1:, c:])
        h[:, c + 1:] -= 2.0 * np.outer(h[:, c + 1:] @ v, v.conj())
        h[c + 2:, c] = 0.0
    return h


def _givens(f: complex, g: complex) -> tuple[float, complex]:
    """Rotation [[c, s], [-conj(s), c]] (c real) sending (f, g) to (r, 0)."""
    if g == 0:
        return 1.0, 0.0j
    if f == 0:
        return 0.0, g.conjugate() / abs(g)
    af = abs(f)
    hyp = math.hypot(af, abs(g))
    return af / hyp, (f / af) * g.conjugate() / hyp


def _eig22(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    t = (a + d) / 2.0
    disc = cmath.sqrt(((a - d) / 2.0) ** 2 + b * c)
    return t + disc, t - disc


def _qr_eigenvalues(h: np.ndarray, max_iters: int) -> np.ndarray:
    """Shifted QR with deflation on an upper Hessenberg matrix.

    Wilkinson-style shifts from the trailing 2x2 of the active block, an
    ad hoc exceptional shift every 15 stalled sweeps, and explicit Givens
    QR steps restricted to the active window (only eigenvalues are needed,
    so the off-window blocks can be ignored once the window decouples).
    """
    h = np.array(h, dtype=complex, copy=True)
    n = h.shape[0]
    eig: list[complex] = []
    hi = n
    iters = 0
    stalled = 0
    while hi > 0:
        if hi == 1:
            eig.append(h[0, 0])
            break
        lo = hi - 1
        while lo > 0:
            if abs(h[lo, lo - 1]) <= _EPS * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])):
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi - 1:
            eig.append(h[hi - 1, hi - 1])
            hi -= 1
            stalled = 0
            continue
        if lo == hi - 2:
            eig.extend(_eig22(h[lo, lo], h[lo, lo + 1], h[lo + 1, lo], h[lo + 1, lo + 1]))
            hi -= 2
            stalled = 0
            continue
        iters += 1
        stalled += 1
        if iters > max_iters:
            raise NonConvergenceError(
                f"QR iteration exceeded {max_iters} sweeps on a {n}x{n} matrix"
            )
        if stalled % 15 == 0:
            sigma = h[hi - 1, hi - 1] + 0.75 * abs(h[hi - 1, hi - 2])
        else:
            l1, l2 = _eig22(
                h[hi - 2, hi - 2], h[hi - 2, hi - 1], h[hi - 1, hi - 2], h[hi - 1, hi - 1]
            )
            corner = h[hi - 1, hi - 1]
            sigma = l1 if abs(l1 - corner) <= abs(l2 - corner) else l2
        w = h[lo:hi, lo:hi]
        m = hi - lo
        idx = np.arange(m)
        w[idx, idx] -= sigma
        rotations = []
        for i in range(m - 1):
            c, s = _givens(w[i, i], w[i + 1, i])
            rotations.append((c, s))
            r0 = w[i, i:].copy()
            r1 = w[i + 1, i:].copy()
            w[i, i:] = c * r0 + s * r1
            w[i + 1, i:] = -np.conj(s) * r0 + c * r1
        for i, (c, s) in enumerate(rotations):
            top = min(i + 2, m)
            c0 = w[:top, i].copy()
            c1 = w[:top, i + 1].copy()
            w[:top, i] = c * c0 + np.conj(s) * c1
            w[:top, i + 1] = -s * c0 + c * c1
        w[idx, idx] += sigma
    return np.array(eig, dtype=complex)


def _newton_polish(a: np.ndarray, eigenvalues: np.ndarray, steps: int = 2) -> np.ndarray:
    """Newton steps on det(A - z) via z += 1/tr((A - z)^-1).

    The QR values carry a forward error amplified by the eigenvalue condition
    number; one or two quadratically convergent corrections on the balanced
    matrix pull them back to ~eps * |A|.  Oversized or singular steps are
    simply skipped.
    """
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    cap = 0.5 * np.linalg.norm(a) + 1.0
    out = []
    for lam in eigenvalues:
        z = lam
        for _ in range(steps):
            try:
                trace_inv = np.trace(np.linalg.solve(a - z * eye, eye))
            except np.linalg.LinAlgError:
                break
            if trace_inv == 0 or not np.isfinite(trace_inv):
                break
            step = 1.0 / trace_inv
            if abs(step) > cap:
                break
            z = z + step
        out.append(z)
    return np.array(out, dtype=complex)


def dense_spectrum(op: np.ndarray, max_iters: int | None = None) -> np.ndarray:
    """All eigenvalues of a dense complex matrix, with algebraic multiplicity.

    Raises NonConvergenceError if the QR sweep cap (default 100 per
    dimension) is hit; never returns a silently truncated spectrum.
    """
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"dense_spectrum needs a square matrix, got shape {op.shape}")
    if not np.all(np.isfinite(op)):
        raise ValueError("dense_spectrum needs finite entries")
    n = op.shape[0]
    if n == 0:
        return np.array([], dtype=complex)
    if n == 1:
        return op[0, :1].astype(complex)
    if max_iters is None:
        max_iters = 100 * n
    balanced = _balance(op)
    values = _qr_eigenvalues(_hessenberg(balanced), max_iters)
    return _newton_polish(balanced, values)


def null_eigenvector(op: np.ndarray, lam: complex) -> np.ndarray:
    """Unit eigenvector for an (approximately known) eigenvalue lam.

    Three rounds of shifted inverse iteration from a deterministic seeded
    start; the shift is offset by 1e-12 * |op|_F so the solve never hits an
    exactly singular matrix.  Raises if the residual floor 1e-9 * |op|_F is
    not reached, which signals a shift too far from the spectrum.
    """
    op = np.asarray(op, dtype=complex)
    n = op.shape[0]
    scale = float(np.linalg.norm(op)) or 1.0
    shift = lam + 1e-12 * scale
    rng = np.random.default_rng(_INVERSE_ITERATION_SEED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    shifted = op - shift * np.eye(n)
    for _ in range(3):
        try:
            w = np.linalg.solve(shifted, v)
        except np.linalg.LinAlgError:
            shifted = op - (shift + 1e-10 * scale) * np.eye(n)
            w = np.linalg.solve(shifted, v)
        v = w / np.linalg.norm(w)
    residual = float(np.linalg.norm(op @ v - lam * v))
    if residual > 1e-9 * scale:
        raise ValueError(
            f"inverse iteration stalled: residual {residual:.3e} above "
            f"{1e-9 * scale:.3e}; shift too far from the spectrum?"
        )
    return normalize_state(v)


def _greedy_pairing(
    closed: np.ndarray, oracle: np.ndarray
) -> tuple[list[tuple[int, int]], float]:
    """Nearest-neighbor pairing of the two sorted-by-real-part lists."""
    order_c = np.argsort(closed.real + 1e-12 * closed.imag)
    order_o = np.argsort(oracle.real + 1e-12 * oracle.imag)
    used = np.zeros(len(order_o), dtype=bool)
    pairing = []
    max_err = 0.0
    for ci in order_c:
        dist = np.abs(oracle[order_o] - closed[ci])
        dist[used] = np.inf
        j = int(np.argmin(dist))
        used[j] = True
        pairing.append((int(ci), int(order_o[j])))
        max_err = max(max_err, float(dist[j]))
    pairing.sort()
    return pairing, max_err


def compare(p: GBSParams, solution: GBSSolution) -> SpectrumReport:
    """Check a closed-form solution against this module's eigensolver.

    Pairs the two eigenvalue lists and records the worst pair distance and
    the worst eigenstate residual |L v - lambda v|.  A defective solution is
    flagged as a multiplicity collapse instead of being force-paired.
    """
    if solution.params != p:
        raise ValueError("solution was produced from different parameters")
    op = build_operator(p)
    oracle_vals = dense_spectrum(op)
    closed_vals = np.asarray(solution.eigenvalues, dtype=complex)
    if len(oracle_vals) != len(closed_vals):
        raise ValueError(
            f"size mismatch: oracle {len(oracle_vals)} vs closed form {len(closed_vals)}"
        )
    report = SpectrumReport(
        oracle_eigenvalues=oracle_vals, closed_form_eigenvalues=closed_vals
    )
    if solution.kind is SolutionKind.DEFECTIVE_A_ZERO_ZERO:
        report.multiplicity_collapse = True
    else:
        report.pairing, report.max_pair_error = _greedy_pairing(closed_vals, oracle_vals)
    residual = 0.0
    for k, v in enumerate(solution.eigenstates):
        lam = 0.0 if report.multiplicity_collapse else closed_vals[k]
        residual = max(residual, float(np.linalg.norm(op @ v - lam * v)))
    report.max_residual = residual
    return report
