"""Element-level decision procedures with extractable certificates.

Two elements are norm-parallel when ``||x + lam y|| = ||x|| + ||y||`` for
some unimodular ``lam`` (triangle equality); they are Birkhoff-James
orthogonal when ``||x|| <= ||x + lam y||`` for every complex ``lam``.

Each parallelism predicate runs on its own numerical route:

* ``is_parallel_def``  -- circle search over the unimodular parameter
  (the definition, used as the oracle everywhere else);
* ``is_parallel_eig``  -- the spectral radius of ``<x, y>`` equals
  ``||x|| ||y||`` (an eigenvalue criterion);
* ``parallel_witness`` -- a unit vector ``xi`` whose vector state attains
  ``|[<x, y> xi, xi]| = ||x|| ||y||`` together with
  ``[<x, x> xi, xi] = ||x||^2`` and ``[<y, y> xi, xi] = ||y||^2``.

The zero element is parallel to everything (every ``lam`` attains the
triangle equality) and Birkhoff-James orthogonal to everything; no special
cases are needed, the searches return that verdict on their own.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotParallel, ShapeMismatch
from .modspace import (
    ModuleElement,
    act,
    inner_product,
    norm,
    norm_attaining_projection,
    vector_state,
)
from .numkernel import (
    TOL_FLOOR,
    circle_max,
    disk_min,
    max_modulus_eigenpair,
    psd_sqrt,
    spectral_norm,
)

DEFAULT_TOL = 1e-8
DEFAULT_GRID = 4096


@dataclass(frozen=True)
class ParallelCertificate:
    """Witness data for a parallelism verdict.

    ``lam`` is the unimodular scalar, ``xi`` the witnessing unit vector,
    ``attained`` the value reached by the route (``||x + lam y||`` for the
    definition route, an eigenvalue or vector-state modulus otherwise) and
    ``residual`` its distance from the exact target.
    """

    lam: complex
    xi: np.ndarray
    attained: float
    residual: float
    kind: str  # "definition" | "eigen" | "vector-state"


@dataclass(frozen=True)
class BJCertificate:
    """Outcome of minimizing ``||x + lam y||`` over the complex plane.

    ``gap = min_value - ||x||``; orthogonality holds when the gap is not
    significantly negative.
    """

    lam_min: complex
    min_value: float
    gap: float


def circle_search_max(
    x: ModuleElement,
    y: ModuleElement,
    n_grid: int = DEFAULT_GRID,
) -> tuple[complex, float]:
    """Maximize ``||x + lam y||`` over unimodular ``lam``.

    Grid search plus golden-section refinement; see
    :func:`kmodpar.numkernel.circle_max` for the error contract.
    """
    return circle_max(x.entries, y.entries, n_grid=n_grid)


def _definition_xi(x: ModuleElement, y: ModuleElement, lam: complex) -> np.ndarray:
    combined = ModuleElement(x.entries + lam * y.entries)
    if norm(combined) <= TOL_FLOOR:
        e1 = np.zeros(x.d, dtype=np.complex128)
        e1[0] = 1.0
        return e1
    return norm_attaining_projection(combined).xi


def is_parallel_def(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = DEFAULT_TOL,
    n_grid: int = DEFAULT_GRID,
) -> tuple[bool, ParallelCertificate]:
    """Decide parallelism straight from the definition.

    True iff the circle search reaches ``||x|| + ||y||`` within
    ``tol * (||x|| + ||y|| + 1)``.  The certificate's ``xi`` comes from a
    norm-attaining projection of ``x + lam* y``.
    """
    lam, attained = circle_search_max(x, y, n_grid=n_grid)
    target = norm(x) + norm(y)
    ok = attained >= target - tol * (target + 1.0)
    cert = ParallelCertificate(
        lam=lam,
        xi=_definition_xi(x, y, lam),
        attained=attained,
        residual=abs(attained - target),
        kind="definition",
    )
    return ok, cert


def is_parallel_eig(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = DEFAULT_TOL,
) -> tuple[bool, ParallelCertificate]:
    """Decide parallelism through the spectrum of ``<x, y>``.

    The spectral radius of ``<x, y>`` never exceeds ``||x|| ||y||``, so
    testing ``max |eigenvalue| >= ||x|| ||y|| - tol (||x|| ||y|| + 1)`` is an
    equality test.  The certificate carries the maximal-modulus eigenvalue's
    phase and eigenvector.
    """
    pair = max_modulus_eigenpair(inner_product(x, y))
    target = norm(x) * norm(y)
    mod = abs(pair.value)
    ok = mod >= target - tol * (target + 1.0)
    lam = pair.value / mod if mod > TOL_FLOOR else 1.0 + 0.0j
    cert = ParallelCertificate(
        lam=complex(lam),
        xi=pair.vector,
        attained=mod,
        residual=abs(mod - target),
        kind="eigen",
    )
    return ok, cert


def parallel_witness(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = DEFAULT_TOL,
) -> ParallelCertificate:
    """Extract the vector-state witness of a parallel pair.

    Requires ``is_parallel_eig`` to hold; raises :class:`NotParallel`
    otherwise.  The returned ``xi`` (the maximal eigenvector of ``<x, y>``)
    satisfies, within tolerance, all three attainment equalities
    ``|[<x,y> xi, xi]| = ||x|| ||y||``, ``[<x,x> xi, xi] = ||x||^2`` and
    ``[<y,y> xi, xi] = ||y||^2``.
    """
    ok, eig_cert = is_parallel_eig(x, y, tol)
    if not ok:
        raise NotParallel(
            f"no vector-state witness: spectral radius falls short by "
            f"{eig_cert.residual:.3e}"
        )
    bracket = vector_state(inner_product(x, y), eig_cert.xi)
    target = norm(x) * norm(y)
    mod = abs(bracket)
    lam = bracket / mod if mod > TOL_FLOOR else 1.0 + 0.0j
    return ParallelCertificate(
        lam=complex(lam),
        xi=eig_cert.xi,
        attained=mod,
        residual=abs(mod - target),
        kind="vector-state",
    )


def bj_min(x: ModuleElement, y: ModuleElement) -> BJCertificate:
    """Minimize ``||x + lam y||`` over complex ``lam``.

    The objective is convex and, for nonzero ``y``, any minimizer lies in
    the disk ``|lam| <= 2 ||x|| / ||y||`` by the triangle inequality, so a
    coarse disk grid plus compass pattern search (step shrinking to 1e-10)
    reaches the global minimum.
    """
    if x.entries.shape != y.entries.shape:
        raise ShapeMismatch(
            f"element shapes differ: {x.entries.shape} vs {y.entries.shape}"
        )
    nx, ny = norm(x), norm(y)
    if ny <= TOL_FLOOR:
        return BJCertificate(lam_min=0.0 + 0.0j, min_value=nx, gap=0.0)
    radius = 2.0 * nx / ny
    lam, val = disk_min(x.entries, y.entries, radius)
    return BJCertificate(lam_min=lam, min_value=val, gap=val - nx)


def is_bj_orthogonal(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = DEFAULT_TOL,
) -> bool:
    """True when no complex multiple of ``y`` brings ``x`` closer to zero."""
    return bj_min(x, y).gap >= -tol * (norm(x) + 1.0)


def parallel_bj_consequence(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Check the orthogonality consequence of parallelism.

    For a parallel pair there is a unimodular ``mu`` with both

    * ``x  perp_B  ||y|| <x,x> x + mu ||x|| <y,x> x``  and
    * ``y  perp_B  ||x|| <y,y> y + mu ||y|| <y,x> y``.

    In the column model ``mu = -lam*`` for the definition's maximizer
    ``lam*``; since the general alignment convention is not forced, the
    candidates ``{-lam*, -conj(lam*), lam*, conj(lam*)}`` are tried in that
    order and the check passes if one of them satisfies both clauses.
    Raises :class:`NotParallel` when the pair is not parallel.
    """
    ok, cert = is_parallel_def(x, y, tol)
    if not ok:
        raise NotParallel("orthogonality consequence requires a parallel pair")
    nx, ny = norm(x), norm(y)
    gram_xx = inner_product(x, x)
    gram_yx = inner_product(y, x)
    gram_yy = inner_product(y, y)
    candidates = [-cert.lam, -cert.lam.conjugate(), cert.lam, cert.lam.conjugate()]
    for mu in candidates:
        first = ModuleElement((ny * gram_xx + mu * nx * gram_yx) @ x.entries)
        second = ModuleElement((nx * gram_yy + mu * ny * gram_yx) @ y.entries)
        if is_bj_orthogonal(x, first, tol) and is_bj_orthogonal(y, second, tol):
            return True
    return False


def matrix_parallel_identity(t, tol: float = DEFAULT_TOL) -> bool:
    """Is a square matrix norm-parallel to the identity?

    Equivalent to its spectral radius equalling its norm: an eigenvalue of
    modulus ``||t||`` yields ``||t + lam I|| = ||t|| + 1`` along its phase,
    and conversely norm attainment by a vector state forces such an
    eigenvalue.
    """
    pair = max_modulus_eigenpair(t)
    nt = spectral_norm(t)
    return abs(pair.value) >= nt - tol * (nt + 1.0)


def linear_dependent(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = 1e-9,
) -> bool:
    """Column-model dependence test: second singular value of ``[x y]``."""
    if x.m != 1 or y.m != 1:
        raise ShapeMismatch("dependence test requires column elements (m = 1)")
    stacked = np.hstack([x.entries, y.entries])
    s = np.linalg.svd(stacked, compute_uv=False)
    if s[0] <= TOL_FLOOR:
        return True
    if min(stacked.shape) < 2:
        return True
    return s[1] <= tol * s[0]


def rank_one_model_check(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = 1e-9,
) -> bool:
    """In the column model, parallelism must coincide with linear dependence.

    Returns True when the definition verdict and the dependence test agree
    (the agreement itself is the contract being checked).
    """
    par, _ = is_parallel_def(x, y, DEFAULT_TOL)
    return par == linear_dependent(x, y, tol)


@dataclass(frozen=True)
class LinkResult:
    """One characterization in the equivalence chain: its verdict plus the
    distance of its decision quantity from the threshold (used for
    knife-edge filtering)."""

    verdict: bool
    margin: float
    scale: float


@dataclass(frozen=True)
class EquivalenceReport:
    """Cross-check of the element-level parallelism characterizations."""

    links: dict[str, LinkResult]
    skipped: bool
    agree: bool
    max_deviation: float


def element_equivalence_suite(
    x: ModuleElement,
    y: ModuleElement,
    tol: float = 1e-7,
    margin: float = 1e-6,
) -> EquivalenceReport:
    """Evaluate the chain of element-parallelism characterizations.

    Links (each an equality test at the product scale ``||x|| ||y||``, where
    the chain is an exact equivalence):

    * ``definition``  -- circle search reaching ``||x|| + ||y||``;
    * ``eigenvalue``  -- spectral radius of ``t = <x, y>`` at ``||x|| ||y||``;
    * ``abs-norm``    -- ``||t|| = ||x|| ||y||`` together with the positive
      square root of ``t t*`` being norm-parallel to the identity (the
      latter holds for every PSD matrix and is asserted as a sanity check);
    * ``power-2/3``   -- spectral radius of ``t^k`` at ``(||x|| ||y||)^k``;
    * ``theta-image`` -- parallelism of the derived pair ``t x`` and
      ``t* y`` with the norm-collapse guards ``||t x|| = ||t|| ||x||``,
      ``||t* y|| = ||t|| ||y||`` and ``||t|| = ||x|| ||y||`` that the chain
      implicitly assumes.

    Instances whose decision quantity sits inside the margin band on any
    link are reported as skipped rather than counted as disagreements.
    """
    nx, ny = norm(x), norm(y)
    product = nx * ny
    t = inner_product(x, y)
    nt = spectral_norm(t)

    links: dict[str, LinkResult] = {}

    ok_def, cert_def = is_parallel_def(x, y, tol)
    links["definition"] = LinkResult(ok_def, cert_def.residual, nx + ny + 1.0)

    ok_eig, cert_eig = is_parallel_eig(x, y, tol)
    links["eigenvalue"] = LinkResult(ok_eig, cert_eig.residual, product + 1.0)

    abs_norm_ok = nt >= product - tol * (product + 1.0)
    abs_literal = matrix_parallel_identity(psd_sqrt(t @ t.conj().T), tol)
    links["abs-norm"] = LinkResult(
        abs_norm_ok and abs_literal, abs(nt - product), product + 1.0
    )

    for k in (2, 3):
        tk = np.linalg.matrix_power(t, k)
        rho_k = abs(max_modulus_eigenpair(tk).value)
        target_k = product**k
        links[f"power-{k}"] = LinkResult(
            rho_k >= target_k - tol * (target_k + 1.0),
            abs(rho_k - target_k),
            target_k + 1.0,
        )

    tx = act(t, x)
    ty = act(t.conj().T, y)
    ok_img, cert_img = is_parallel_def(tx, ty, tol)
    guards = (
        norm(tx) >= nt * nx - tol * (nt * nx + 1.0),
        norm(ty) >= nt * ny - tol * (nt * ny + 1.0),
        nt >= product - tol * (product + 1.0),
    )
    guard_margins = (
        abs(norm(tx) - nt * nx),
        abs(norm(ty) - nt * ny),
        abs(nt - product),
    )
    links["theta-image"] = LinkResult(
        ok_img and all(guards),
        min(cert_img.residual, *guard_margins) if not (ok_img and all(guards)) else cert_img.residual,
        nt * (nx + ny) + 1.0,
    )

    skipped = any(
        link.margin < margin * link.scale for link in links.values()
    )
    verdicts = {name: link.verdict for name, link in links.items()}
    agree = len(set(verdicts.values())) == 1
    max_dev = max(link.margin for link in links.values()) if agree else 1.0
    return EquivalenceReport(
        links=links, skipped=skipped, agree=agree, max_deviation=max_dev
    )
