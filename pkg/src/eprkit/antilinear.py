"""Antilinear maps between finite-dimensional spaces.

An antilinear map ``s`` is stored as the matrix ``K`` with
``s(phi) = K @ conj(phi)``.  With that choice

* the Hermitian adjoint, defined by <chi, s phi> = <phi, s* chi>, is the
  plain transpose ``K.T``;
* anti o anti is the linear matrix ``K2 @ conj(K1)``;
* anti o linear is ``K @ conj(L)`` and linear o anti is ``L @ K``.

There is deliberately no way to tensor an ``AntilinearMap`` with a linear
map: the only product-space antilinear operators are the twisted doubles
in :mod:`eprkit.modular`.
"""
from __future__ import annotations

import numpy as np

from .linalg import DimensionError, as_matrix, dagger


class AntilinearMap:
    __slots__ = ("_k",)
    # let ndarray @ AntilinearMap fall through to __rmatmul__
    __array_ufunc__ = None

    def __init__(self, kmatrix):
        k = as_matrix(kmatrix).copy()
        k.setflags(write=False)
        self._k = k

    @property
    def kmatrix(self) -> np.ndarray:
        return self._k

    @property
    def src_dim(self) -> int:
        return self._k.shape[1]

    @property
    def dst_dim(self) -> int:
        return self._k.shape[0]

    @classmethod
    def conjugation(cls, d: int) -> "AntilinearMap":
        """Complex conjugation in the computational basis of C^d."""
        return cls(np.eye(d))

    def __call__(self, phi):
        return apply(self, phi)

    def adjoint(self) -> "AntilinearMap":
        return adjoint(self)

    @property
    def H(self) -> "AntilinearMap":
        return adjoint(self)

    def __matmul__(self, other):
        if isinstance(other, AntilinearMap):
            return compose_anti_anti(self, other)
        return compose_anti_linear(self, other)

    def __rmatmul__(self, other):
        return compose_linear_anti(other, self)

    def __mul__(self, scalar):
        # (c s)(phi) = c * s(phi)
        return AntilinearMap(complex(scalar) * self._k)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, AntilinearMap):
            return NotImplemented
        return AntilinearMap(self._k + other._k)

    def __sub__(self, other):
        if not isinstance(other, AntilinearMap):
            return NotImplemented
        return AntilinearMap(self._k - other._k)

    def __eq__(self, other):
        if not isinstance(other, AntilinearMap):
            return NotImplemented
        return self._k.shape == other._k.shape and bool(np.all(self._k == other._k))

    __hash__ = None

    def allclose(self, other: "AntilinearMap", atol: float = 1e-9) -> bool:
        return self._k.shape == other._k.shape and np.allclose(
            self._k, other._k, atol=atol, rtol=0
        )

    def hs_norm(self) -> float:
        """Hilbert-Schmidt norm (Frobenius norm of the stored matrix)."""
        return float(np.linalg.norm(self._k))

    def __repr__(self):
        return f"AntilinearMap({self.src_dim} -> {self.dst_dim}, kmatrix={self._k!r})"


def apply(s: AntilinearMap, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex)
    if phi.shape[0] != s.src_dim:
        raise DimensionError(f"map expects length {s.src_dim}, got {phi.shape[0]}")
    return s.kmatrix @ np.conj(phi)


def adjoint(s: AntilinearMap) -> AntilinearMap:
    return AntilinearMap(s.kmatrix.T)


def compose_anti_anti(s2: AntilinearMap, s1: AntilinearMap) -> np.ndarray:
    """``s2 o s1``, a linear map returned as an ordinary matrix."""
    if s1.dst_dim != s2.src_dim:
        raise DimensionError(f"cannot compose {s1.dst_dim} -> {s2.src_dim}")
    return s2.kmatrix @ np.conj(s1.kmatrix)


def compose_anti_linear(s: AntilinearMap, lin) -> AntilinearMap:
    """``s o L``."""
    lin = as_matrix(lin)
    if lin.shape[0] != s.src_dim:
        raise DimensionError(f"cannot compose {lin.shape[0]} -> {s.src_dim}")
    return AntilinearMap(s.kmatrix @ np.conj(lin))


def compose_linear_anti(lin, s: AntilinearMap) -> AntilinearMap:
    """``L o s``."""
    lin = as_matrix(lin)
    if s.dst_dim != lin.shape[1]:
        raise DimensionError(f"cannot compose {s.dst_dim} -> {lin.shape[1]}")
    return AntilinearMap(lin @ s.kmatrix)


def sandwich(s_out: AntilinearMap, lin, s_in: AntilinearMap) -> np.ndarray:
    """The linear map ``s_out o L o s_in``."""
    return compose_anti_anti(s_out, compose_linear_anti(lin, s_in))


def linear_adjoint(lin) -> np.ndarray:
    return dagger(as_matrix(lin))
