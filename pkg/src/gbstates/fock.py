"""Truncated Fock-space kernel: dense operators, matrix functions, inner products.

Everything lives on the (M+1)-dimensional space spanned by the number states
|0>, ..., |M>.  States are complex 1-d numpy arrays, operators are dense
complex 2-d arrays.  All functions are pure and never mutate their inputs.

Truncation leaves [a, a+] = I - (M+1)|M><M| rather than the identity; that
defect is inherent to the cut and deliberately not patched.  The su(2)
generators built here are polynomial in the truncated ladder operators and
satisfy their algebra exactly at every M, so nothing downstream relies on the
bosonic commutator.

Storage is dense double precision throughout; the dimensions used anywhere in
this package stay in the hundreds, so no sparse path is provided.
"""

import math

import numpy as np

NORMALIZED_TOL = 1e-12
UNITARY_TOL = 1e-11


def annihilation_operator(m: int) -> np.ndarray:
    """Truncated annihilation operator, a|n> = sqrt(n)|n-1>, on dim m+1."""
    if m < 0:
        raise ValueError(f"photon cap must be >= 0, got {m}")
    a = np.zeros((m + 1, m + 1), dtype=complex)
    for n in range(1, m + 1):
        a[n - 1, n] = math.sqrt(n)
    return a


def creation_operator(m: int) -> np.ndarray:
    """Adjoint of the truncated annihilation operator."""
    return annihilation_operator(m).conj().T


def number_operator(m: int) -> np.ndarray:
    """N = diag(0, 1, ..., m)."""
    if m < 0:
        raise ValueError(f"photon cap must be >= 0, got {m}")
    return np.diag(np.arange(m + 1)).astype(complex)


def hp_generators(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Holstein-Primakoff su(2) generators (J0, J+, J-) on dim m+1.

    J0 = m/2 - N,  J+ = sqrt(m-N) a,  J- = a^dag sqrt(m-N).  J+ moves |n+1>
    to |n> with matrix element sqrt((n+1)(m-n)); |0> is the highest-weight
    state.  The products (n+1)(m-n) are formed in exact integer arithmetic
    before the square root, which keeps the su(2) commutators at the 1e-13
    level up to m ~ 40.
    """
    if m < 0:
        raise ValueError(f"photon cap must be >= 0, got {m}")
    n = np.arange(m + 1)
    j0 = np.diag(m / 2 - n).astype(complex)
    jp = np.zeros((m + 1, m + 1), dtype=complex)
    for k in range(m):
        jp[k, k + 1] = math.sqrt((k + 1) * (m - k))
    return j0, jp, jp.conj().T


def matrix_exp(a: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The input is scaled by a power of two until its 1-norm is at most 0.5,
    the series is summed until the next term is below tol times the running
    result (in Frobenius norm), and the result is squared back up.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exp needs finite entries")
    nrm = np.abs(a).sum(axis=0).max() if a.size else 0.0
    squarings = 0 if nrm <= 0.5 else int(math.ceil(math.log2(nrm / 0.5)))
    b = a / (2.0 ** squarings)
    result = np.eye(a.shape[0], dtype=complex) + b
    term = b.copy()
    k = 2
    while np.linalg.norm(term) > tol * np.linalg.norm(result):
        term = term @ b / k
        result = result + term
        k += 1
        if k > 300:  # unreachable with scaled norm <= 0.5; guards NaN loops
            raise RuntimeError("matrix_exp series failed to converge")
    for _ in range(squarings):
        result = result @ result
    return result


def inner(u: np.ndarray, v: np.ndarray) -> complex:
    """<u|v>, conjugate-linear in the first slot."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def norm(u: np.ndarray) -> float:
    return float(np.linalg.norm(u))


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|<u|v>|^2 / (|u|^2 |v|^2); symmetric and phase-invariant, in [0, 1]."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("fidelity is undefined for a zero vector")
    f = abs(np.vdot(u, v)) ** 2 / (nu * nu * nv * nv)
    return float(min(f, 1.0))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def apply(a: np.ndarray, u: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    u = np.asarray(u)
    if a.shape[1] != u.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {u.shape}")
    return a @ u


def basis_state(n: int, dim: int) -> np.ndarray:
    """Number state |n> as a dim-long amplitude vector."""
    if not 0 <= n < dim:
        raise ValueError(f"basis index {n} outside [0, {dim})")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def normalize_state(v: np.ndarray) -> np.ndarray:
    """Unit 2-norm with the first significant amplitude made real positive.

    This fixes the free global phase the same way everywhere in the package,
    so states coming from different construction routes compare termwise.
    """
    v = np.asarray(v, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("cannot normalize the zero vector")
    u = v / nv
    mags = np.abs(u)
    lead = int(np.nonzero(mags > 1e-12 * mags.max())[0][0])
    phase = u[lead] / abs(u[lead])
    u = u / phase
    u[lead] = abs(u[lead])  # drop the ~1 ulp residual imaginary part
    return u


def is_normalized(v: np.ndarray, tol: float = NORMALIZED_TOL) -> bool:
    return abs(np.linalg.norm(v) - 1.0) <= tol


def is_unitary(u: np.ndarray, tol_per_dim: float = UNITARY_TOL) -> bool:
    """Frobenius check |U^dag U - I| <= tol_per_dim * dim."""
    u = np.asarray(u)
    d = u.shape[0]
    defect = np.linalg.norm(u.conj().T @ u - np.eye(d))
    return bool(defect <= tol_per_dim * d)
