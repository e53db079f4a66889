"""The concrete matrix model of a Hilbert module over a full matrix algebra.

An element is a d-by-m complex matrix ``x`` with matrix-valued inner
product ``<x, y> = x y*``; the coefficient algebra M_d(C) acts by left
multiplication and the element norm is ``||<x, x>||^(1/2)``, which equals
the largest singular value of ``x``.  Direct sums of coefficient-algebra
copies flatten into the column count (``m = n * d``), ``m = d`` recovers
the algebra as a module over itself, and ``m = 1`` is the column model
where parallelism collapses to linear dependence.

For every d, m >= 1 the inner products ``x y*`` span all of M_d(C), so the
module is full; this is a property of the model, not checked at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, ShapeMismatch
from .numkernel import (
    TOL_FLOOR,
    as_matrix,
    as_unit_vector,
    outer,
    phase_align,
    spectral_norm,
)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    """A d-by-m complex matrix viewed as a module element."""

    entries: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.entries, "element")
        object.__setattr__(self, "entries", np.ascontiguousarray(m))

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(self.entries + other.entries)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(self.entries - other.entries)

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(-self.entries)

    def __mul__(self, scalar) -> "ModuleElement":
        return ModuleElement(self.entries * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"ModuleElement(d={self.d}, m={self.m})"


def zero_element(d: int, m: int) -> ModuleElement:
    return ModuleElement(np.zeros((d, m), dtype=np.complex128))


def _check_same_shape(x: ModuleElement, y: ModuleElement) -> None:
    if x.entries.shape != y.entries.shape:
        raise ShapeMismatch(
            f"element shapes differ: {x.entries.shape} vs {y.entries.shape}"
        )


def inner_product(x: ModuleElement, y: ModuleElement) -> np.ndarray:
    """The d-by-d matrix ``x y*``.

    Linear in the first slot, ``<x, y>* = <y, x>``, ``<x, x>`` positive
    semidefinite, and ``<a x, y> = a <x, y>`` for coefficient matrices ``a``.
    """
    _check_same_shape(x, y)
    return x.entries @ y.entries.conj().T


def norm(x: ModuleElement) -> float:
    """Element norm: ``||<x, x>||^(1/2)``, i.e. the top singular value of x."""
    return spectral_norm(x.entries)


def act(a, x: ModuleElement) -> ModuleElement:
    """Module action of a coefficient matrix: ``a . x`` by left multiplication."""
    am = as_matrix(a, "coefficient")
    if am.shape != (x.d, x.d):
        raise ShapeMismatch(f"coefficient shape {am.shape} does not match d={x.d}")
    return ModuleElement(am @ x.entries)


def vector_state(a, xi) -> complex:
    """The vector state ``[A xi, xi]`` (real for Hermitian A, Cauchy-Schwarz
    bounded by ``||A||``)."""
    am = as_matrix(a, "A")
    u = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if am.shape[1] != u.size or am.shape[0] != u.size:
        raise ShapeMismatch(f"matrix {am.shape} incompatible with vector dim {u.size}")
    return complex(np.vdot(u, am @ u))


@dataclass(frozen=True, eq=False)
class MinimalProjection:
    """A rank-one projection ``xi xi*`` for a unit vector ``xi``.

    These are exactly the projections ``e`` with ``e M_d e = C e``.
    """

    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", as_unit_vector(self.xi, "xi"))

    @property
    def matrix(self) -> np.ndarray:
        return outer(self.xi, self.xi)


@dataclass(frozen=True, eq=False)
class BasicVector:
    """A module element whose self inner product is a minimal projection.

    Concretely ``element = xi v*`` with unit ``xi`` and ``v``; construction
    enforces ``||<x, x> - xi xi*||_F <= 1e-10``.
    """

    element: ModuleElement
    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", as_unit_vector(self.xi, "xi"))
        gram = inner_product(self.element, self.element)
        dev = float(np.linalg.norm(gram - outer(self.xi, self.xi)))
        if dev > 1e-10:
            raise ValueError(
                f"basic-vector certificate failed: ||<x,x> - xi xi*||_F = {dev:.3e}"
            )


def make_basic(xi, v) -> BasicVector:
    """The basic vector ``xi v*`` from unit vectors ``xi`` (dim d) and ``v`` (dim m)."""
    xu = as_unit_vector(xi, "xi")
    vu = as_unit_vector(v, "v")
    return BasicVector(ModuleElement(outer(xu, vu)), xu)


def norm_attaining_projection(x: ModuleElement) -> MinimalProjection:
    """A minimal projection ``e = xi xi*`` with ``||e x|| = ||x||``.

    ``xi`` is a top left singular vector of the entries, phase-normalized so
    its largest-modulus entry is real positive; ties on the singular value
    resolve to the solver's first vector.  Rejects the zero element.
    """
    if norm(x) <= TOL_FLOOR:
        raise DegenerateInput("norm-attaining projection of the zero element")
    u, _, _ = np.linalg.svd(x.entries)
    return MinimalProjection(phase_align(u[:, 0]))


def theta_matrix(x: ModuleElement, y: ModuleElement) -> np.ndarray:
    """Right-action matrix ``y* x`` of the elementary module operator
    ``z -> <z, y> x``.

    Applying it to ``z`` as ``z (y* x)`` reproduces ``<z, y> x``; its adjoint
    swaps the pair, and for ``y = x`` its norm is ``||x||^2``.
    """
    _check_same_shape(x, y)
    return y.entries.conj().T @ x.entries
