"""Dense complex linear-algebra substrate.

Matrices are numpy ``complex128`` arrays in row-major order; unit vectors
are 1-d arrays with Euclidean norm 1.  Every tolerance is relative to the
operand's spectral norm, with an absolute floor of ``TOL_FLOOR`` so that
near-zero operands do not trip relative tests.

Besides eigen/SVD wrappers the module hosts the derivative-free search
primitives used by the decision procedures:

* :func:`circle_max`       -- maximize  theta -> sigma_max(X + e^{i theta} Y)
* :func:`disk_min`         -- minimize  lam   -> sigma_max(X + lam Y)  over a disk
* :func:`numerical_radius` -- maximize  |v* M v|  over unit vectors v

The eigensolvers are LAPACK-backed (backward-stable dense methods); the
contracts below, not the algorithm, are what the rest of the package
relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateInput,
    NotHermitian,
    NotPositiveSemidefinite,
    ShapeMismatch,
)

TOL_FLOOR = 1e-14

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def scaled_tol(rel: float, scale: float) -> float:
    """Relative tolerance at the given scale, floored for near-zero operands."""
    return max(rel * scale, TOL_FLOOR)


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex128 2-d array with at least one row/column."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeMismatch(f"{name}: expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name}: entries must be finite (no NaN/Inf)")
    return m


def as_unit_vector(v, name: str = "vector", tol: float = 1e-12) -> np.ndarray:
    """Coerce to a 1-d complex vector of Euclidean norm 1 (within ``tol``)."""
    u = np.asarray(v, dtype=np.complex128).reshape(-1)
    if u.size < 1:
        raise ShapeMismatch(f"{name}: empty vector")
    if not np.all(np.isfinite(u)):
        raise ValueError(f"{name}: entries must be finite")
    n = float(np.linalg.norm(u))
    if abs(n - 1.0) > tol:
        raise ValueError(f"{name}: norm {n!r} is not 1 within {tol}")
    return u


def phase_align(v: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest-modulus entry is real positive.

    Ties on the modulus break to the lowest index, making extracted
    eigen/singular vectors deterministic.  The zero vector is returned as is.
    """
    v = np.asarray(v, dtype=np.complex128)
    i = int(np.argmax(np.abs(v)))
    a = abs(v[i])
    if a <= TOL_FLOOR:
        return v.copy()
    return v * (v[i].conjugate() / a)


def spectral_norm(a) -> float:
    """Largest singular value."""
    m = as_matrix(a)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def is_hermitian(a, rel: float = 1e-12) -> bool:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return False
    return spectral_norm(m - m.conj().T) <= scaled_tol(rel, spectral_norm(m))


def hermitian_eig(a, rel: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, V)`` with real eigenvalues ``w`` sorted descending and an
    orthonormal set of eigenvectors in the columns of ``V`` (so that
    ``A @ V[:, i] = w[i] * V[:, i]``).  Rejects non-Hermitian input.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {m.shape}")
    dev = spectral_norm(m - m.conj().T)
    if dev > scaled_tol(rel, spectral_norm(m)):
        raise NotHermitian(f"symmetry violation: ||A - A*|| = {dev:.3e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


@dataclass(frozen=True)
class EigenPair:
    """An eigenvalue with a unit eigenvector and its achieved residual.

    ``residual`` is ``||A v - value v||`` for the source matrix; for
    defective or clustered spectra it reports the accuracy actually
    achieved rather than promising a fixed bound.
    """

    value: complex
    vector: np.ndarray
    residual: float
    degenerate: bool = False


def general_eig(a) -> list[EigenPair]:
    """All eigenvalues (with multiplicity) of a square matrix, with residuals."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {m.shape}")
    vals, vecs = np.linalg.eig(m)
    out = []
    for i in range(m.shape[0]):
        v = vecs[:, i]
        nv = float(np.linalg.norm(v))
        v = phase_align(v / nv) if nv > TOL_FLOOR else v
        res = float(np.linalg.norm(m @ v - vals[i] * v))
        out.append(EigenPair(complex(vals[i]), v, res))
    return out


def max_modulus_eigenpair(a) -> EigenPair:
    """The eigenpair whose eigenvalue has maximal modulus.

    Ties break lexicographically by (modulus, real part, imaginary part),
    all descending, so certificates are deterministic.  The zero matrix
    yields value 0 with the first basis vector, flagged ``degenerate``.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {m.shape}")
    if spectral_norm(m) <= TOL_FLOOR:
        e1 = np.zeros(m.shape[0], dtype=np.complex128)
        e1[0] = 1.0
        return EigenPair(0.0 + 0.0j, e1, 0.0, degenerate=True)
    pairs = general_eig(m)
    key = lambda p: (abs(p.value), p.value.real, p.value.imag)
    return max(pairs, key=key)


def psd_sqrt(a, rel: float = 1e-10) -> np.ndarray:
    """Positive-semidefinite square root ``B`` with ``B @ B = A``.

    Eigenvalues in ``[-rel * ||A||, 0)`` are clamped to zero (roundoff in
    Gram matrices); anything below the threshold raises.
    """
    m = as_matrix(a)
    w, v = hermitian_eig(m)
    floor = -scaled_tol(rel, spectral_norm(m))
    if w.min(initial=0.0) < floor:
        raise NotPositiveSemidefinite(
            f"eigenvalue {w.min():.3e} below PSD threshold {floor:.3e}"
        )
    w = np.clip(w, 0.0, None)
    b = (v * np.sqrt(w)) @ v.conj().T
    return (b + b.conj().T) / 2.0


def outer(xi, eta) -> np.ndarray:
    """Elementary operator ``xi (x) eta``: the matrix mapping v to [v, eta] xi.

    With the Euclidean inner product conjugate-linear in the second slot
    this is the matrix ``xi eta*``; its spectral norm is ``||xi|| ||eta||``.
    """
    x = np.asarray(xi, dtype=np.complex128).reshape(-1)
    e = np.asarray(eta, dtype=np.complex128).reshape(-1)
    return np.outer(x, e.conj())


# ---------------------------------------------------------------------------
# search primitives
# ---------------------------------------------------------------------------


def _batched_sigma_max(stack: np.ndarray) -> np.ndarray:
    return np.linalg.svd(stack, compute_uv=False)[..., 0]


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section maximization on [a, b], returning the best point evaluated."""
    best = [a, -math.inf]

    def ev(x):
        y = f(x)
        if y > best[1]:
            best[0], best[1] = x, y
        return y

    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc, yd = ev(c), ev(d)
    while h > tol:
        if yc > yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + _INV_PHI2 * h
            yc = ev(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + _INV_PHI * h
            yd = ev(d)
    return best[0], best[1]


def circle_max(
    x,
    y,
    n_grid: int = 4096,
    angle_tol: float = 1e-12,
    top_k: int = 3,
) -> tuple[complex, float]:
    """Maximize ``sigma_max(X + e^{i theta} Y)`` over the unit circle.

    A uniform grid of ``n_grid`` angles (evaluated as one batched SVD) is
    followed by golden-section refinement of the ``top_k`` best separated
    brackets down to angular width ``angle_tol``.  The map is Lipschitz in
    theta with constant ``||Y||``, so the pre-refinement error is at most
    ``pi ||Y|| / n_grid``; the returned value is the best point actually
    evaluated, hence always a lower bound on the true maximum.

    Returns ``(lambda_star, max_value)`` with ``|lambda_star| = 1``.
    """
    xm = as_matrix(x, "x")
    ym = as_matrix(y, "y")
    if xm.shape != ym.shape:
        raise ShapeMismatch(f"shape mismatch {xm.shape} vs {ym.shape}")
    thetas = 2.0 * np.pi * np.arange(n_grid) / n_grid
    lams = np.exp(1j * thetas)
    vals = _batched_sigma_max(xm[None, :, :] + lams[:, None, None] * ym[None, :, :])

    def g(theta: float) -> float:
        return float(np.linalg.svd(xm + np.exp(1j * theta) * ym, compute_uv=False)[0])

    order = np.argsort(vals)[::-1]
    brackets: list[int] = []
    for idx in order:
        i = int(idx)
        if all(min((i - j) % n_grid, (j - i) % n_grid) > 2 for j in brackets):
            brackets.append(i)
        if len(brackets) >= top_k:
            break

    h = 2.0 * np.pi / n_grid
    best_theta = float(thetas[brackets[0]])
    best_val = float(vals[brackets[0]])
    for i in brackets:
        t0 = float(thetas[i])
        t, v = _golden_max(g, t0 - h, t0 + h, angle_tol)
        if v > best_val:
            best_theta, best_val = t, v
    best_theta = best_theta % (2.0 * np.pi)
    return complex(np.exp(1j * best_theta)), best_val


def disk_min(
    x,
    y,
    radius: float,
    n_angles: int = 24,
    n_radii: int = 12,
    step_tol: float = 1e-10,
    max_evals: int = 20000,
) -> tuple[complex, float]:
    """Minimize ``sigma_max(X + lam Y)`` over the disk ``|lam| <= radius``.

    The objective is convex (norm of an affine map), so a coarse polar grid
    followed by compass pattern search with halving steps converges to the
    global minimum; the step shrinks to ``step_tol * max(1, radius)``.
    """
    xm = as_matrix(x, "x")
    ym = as_matrix(y, "y")
    if xm.shape != ym.shape:
        raise ShapeMismatch(f"shape mismatch {xm.shape} vs {ym.shape}")

    def f(lam: complex) -> float:
        return float(np.linalg.svd(xm + lam * ym, compute_uv=False)[0])

    if radius <= 0.0 or spectral_norm(ym) <= TOL_FLOOR:
        return 0.0 + 0.0j, f(0.0)

    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    radii = radius * np.arange(1, n_radii + 1) / n_radii
    lams = np.concatenate(
        [[0.0 + 0.0j], (radii[:, None] * np.exp(1j * angles)[None, :]).reshape(-1)]
    )
    vals = _batched_sigma_max(xm[None, :, :] + lams[:, None, None] * ym[None, :, :])
    i = int(np.argmin(vals))
    cur, cur_val = complex(lams[i]), float(vals[i])
    evals = lams.size

    step = radius / 4.0
    floor = step_tol * max(1.0, radius)
    while step > floor and evals < max_evals:
        cands = [cur + step, cur - step, cur + 1j * step, cur - 1j * step]
        cvals = [f(c) for c in cands]
        evals += 4
        j = int(np.argmin(cvals))
        if cvals[j] < cur_val:
            cur, cur_val = cands[j], cvals[j]
        else:
            step /= 2.0
    return cur, cur_val


def numerical_radius(
    m,
    n_grid: int = 1024,
    angle_tol: float = 1e-10,
) -> tuple[float, np.ndarray]:
    """Maximize ``|v* M v|`` over unit vectors (the numerical radius).

    Uses ``w(M) = max_theta lambda_max(Re(e^{i theta} M))`` on a grid with
    golden-section refinement, then reports ``|v* M v|`` at the maximizing
    eigenvector ``v``, so the returned value is attained by the returned
    witness (a lower bound on the exact radius).
    """
    mm = as_matrix(m)
    if mm.shape[0] != mm.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {mm.shape}")
    n = mm.shape[0]
    e1 = np.zeros(n, dtype=np.complex128)
    e1[0] = 1.0
    if spectral_norm(mm) <= TOL_FLOOR:
        return 0.0, e1

    thetas = 2.0 * np.pi * np.arange(n_grid) / n_grid
    ph = np.exp(1j * thetas)
    herm = 0.5 * (
        ph[:, None, None] * mm[None, :, :]
        + ph.conj()[:, None, None] * mm.conj().T[None, :, :]
    )
    tops = np.linalg.eigvalsh(herm)[:, -1]

    def g(theta: float) -> float:
        h = 0.5 * (np.exp(1j * theta) * mm + np.exp(-1j * theta) * mm.conj().T)
        return float(np.linalg.eigvalsh(h)[-1])

    i = int(np.argmax(tops))
    h_step = 2.0 * np.pi / n_grid
    t_best, _ = _golden_max(g, thetas[i] - h_step, thetas[i] + h_step, angle_tol)
    hb = 0.5 * (np.exp(1j * t_best) * mm + np.exp(-1j * t_best) * mm.conj().T)
    w, v = np.linalg.eigh(hb)
    vec = phase_align(v[:, -1])
    value = float(abs(np.vdot(vec, mm @ vec)))
    return value, vec
