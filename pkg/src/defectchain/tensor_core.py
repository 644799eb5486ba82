"""Dense complex linear algebra on explicit tensor-product spaces.

Every operator in this package is a dense complex matrix acting on an
ordered tensor product of factor spaces.  The basis ordering convention,
fixed once here and used everywhere, is row-major with the leftmost
factor slowest: for factors (d1, d2) the product basis index is
``i1 * d2 + i2``, which is exactly what ``numpy.kron`` produces.

All values are immutable after construction and all operations are pure,
so independent spectral points can be evaluated in parallel without any
shared state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TensorSpace",
    "TensorOperator",
    "kron",
    "permutation_operator",
    "partial_transpose",
    "embed",
    "embed_two_site",
    "frobenius",
]


@dataclass(frozen=True)
class TensorSpace:
    """An ordered list of factor dimensions (auxiliary spaces listed explicitly)."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return math.prod(self.factor_dims)

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    def check_factor(self, factor: int) -> int:
        if not 0 <= factor < self.n_factors:
            raise IndexError(f"factor {factor} out of range for {self.factor_dims}")
        return factor

    def __mul__(self, other: "TensorSpace") -> "TensorSpace":
        return TensorSpace(self.factor_dims + other.factor_dims)


@dataclass(frozen=True, eq=False)
class TensorOperator:
    """A square complex matrix acting on a TensorSpace."""

    space: TensorSpace
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.ascontiguousarray(self.entries, dtype=np.complex128)
        d = self.space.dim
        if m.shape != (d, d):
            raise ValueError(f"entries shape {m.shape} does not match space dim {d}")
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise ValueError("operator entries contain NaN or Inf")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @classmethod
    def identity(cls, space: TensorSpace) -> "TensorOperator":
        return cls(space, np.eye(space.dim, dtype=np.complex128))

    def _check_same_space(self, other: "TensorOperator"):
        if self.space.factor_dims != other.space.factor_dims:
            raise ValueError(
                f"space mismatch: {self.space.factor_dims} vs {other.space.factor_dims}"
            )

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        self._check_same_space(other)
        return TensorOperator(self.space, self.entries @ other.entries)

    def __add__(self, other: "TensorOperator") -> "TensorOperator":
        self._check_same_space(other)
        return TensorOperator(self.space, self.entries + other.entries)

    def __sub__(self, other: "TensorOperator") -> "TensorOperator":
        self._check_same_space(other)
        return TensorOperator(self.space, self.entries - other.entries)

    def __mul__(self, scalar) -> "TensorOperator":
        return TensorOperator(self.space, complex(scalar) * self.entries)

    __rmul__ = __mul__

    def __neg__(self) -> "TensorOperator":
        return TensorOperator(self.space, -self.entries)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def reshaped(self) -> np.ndarray:
        """Entries as a 2n-index tensor (row factors, then column factors)."""
        dims = self.space.factor_dims
        return self.entries.reshape(dims + dims)


def frobenius(matrix) -> float:
    """Frobenius norm, the operator norm used for every residual in this package."""
    m = matrix.entries if isinstance(matrix, TensorOperator) else np.asarray(matrix)
    return float(np.linalg.norm(m))


def kron(a: TensorOperator, b: TensorOperator) -> TensorOperator:
    """Kronecker product; factor lists concatenate with a's factors first."""
    return TensorOperator(a.space * b.space, np.kron(a.entries, b.entries))


def permutation_operator(d: int) -> TensorOperator:
    """P on C^d (x) C^d with P(|a> (x) |b>) = |b> (x) |a>."""
    if d < 2:
        raise ValueError(f"permutation operator needs dimension >= 2, got {d}")
    p = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            p[b * d + a, a * d + b] = 1.0
    return TensorOperator(TensorSpace((d, d)), p)


def partial_transpose(m: TensorOperator, factor: int) -> TensorOperator:
    """Transpose in the indicated factor only."""
    f = m.space.check_factor(factor)
    n = m.space.n_factors
    t = m.reshaped()
    axes = list(range(2 * n))
    axes[f], axes[n + f] = axes[n + f], axes[f]
    d = m.space.dim
    return TensorOperator(m.space, np.ascontiguousarray(t.transpose(axes)).reshape(d, d))


def _as_matrix(op, expected_dim: int) -> np.ndarray:
    m = op.entries if isinstance(op, TensorOperator) else np.asarray(op, dtype=np.complex128)
    if m.shape != (expected_dim, expected_dim):
        raise ValueError(f"local operator shape {m.shape}, expected {(expected_dim,) * 2}")
    return m


def embed(op, site: int, space: TensorSpace) -> TensorOperator:
    """Embed a local operator at one site, identity on all other factors."""
    site = space.check_factor(site)
    dims = space.factor_dims
    m = _as_matrix(op, dims[site])
    left = math.prod(dims[:site]) if site else 1
    right = math.prod(dims[site + 1:]) if site + 1 < len(dims) else 1
    out = np.kron(np.kron(np.eye(left, dtype=np.complex128), m),
                  np.eye(right, dtype=np.complex128))
    return TensorOperator(space, out)


def embed_two_site(op, sites: tuple[int, int], space: TensorSpace) -> TensorOperator:
    """Embed an operator acting on an ordered pair of (not necessarily adjacent) factors.

    ``op`` is a matrix on factor_i (x) factor_j in that order; the result acts on the
    full space with identity elsewhere.
    """
    i, j = sites
    i = space.check_factor(i)
    j = space.check_factor(j)
    if i == j:
        raise ValueError("two-site embedding needs distinct factors")
    dims = space.factor_dims
    di, dj = dims[i], dims[j]
    m = _as_matrix(op, di * dj).reshape(di, dj, di, dj)
    n = len(dims)
    # build as tensor with deltas on the spectator factors
    row = [f"r{k}" for k in range(n)]
    col = [f"c{k}" for k in range(n)]
    tensor = m
    spectators = [k for k in range(n) if k not in (i, j)]
    for k in spectators:
        tensor = np.multiply.outer(tensor, np.eye(dims[k], dtype=np.complex128))
    # tensor index order: (ri, rj, ci, cj, then pairs (rk, ck) for each spectator)
    order = {}
    order[f"r{i}"], order[f"r{j}"], order[f"c{i}"], order[f"c{j}"] = 0, 1, 2, 3
    pos = 4
    for k in spectators:
        order[f"r{k}"] = pos
        order[f"c{k}"] = pos + 1
        pos += 2
    perm = [order[name] for name in row + col]
    d = space.dim
    return TensorOperator(space, np.ascontiguousarray(tensor.transpose(perm)).reshape(d, d))
