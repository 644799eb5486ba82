"""Defect-bearing monodromy and transfer matrices for small chains, with the
structural integrability checks (RTT, commuting family, charge grading,
reference-state eigenvalue) and Bethe-equation residuals.

The chain has N bulk spin-1/2 sites plus one defect site of dimension D at
position n (1-based, 1 <= n <= N+1); the monodromy is the ordered product

    T(lam) = M_{0,N+1}(lam) M_{0,N}(lam) ... M_{0,1}(lam)

over the auxiliary space 0, where M is the bulk R-matrix except at the
defect site, which contributes L(lam - theta).

Truncation-leak policy: the defect occupation together with the site
grading defines a conserved charge Q; on charge sectors whose occupation
never reaches the truncation ceiling the transfer matrix acts exactly as in
the untruncated representation, so all operator identities are checked
after projecting onto sectors Q <= ceiling (default D - 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lax_defect import CRITICAL, XXX, RegimeParams, make_l, make_r
from .reporting import ResidualReport
from .tensor_core import TensorOperator, TensorSpace, embed_two_site

__all__ = [
    "ChainSpec",
    "chain_space",
    "charge_vector",
    "sector_projector",
    "build_monodromy",
    "transfer_matrix",
    "reference_state",
    "reference_eigenvalue",
    "rtt_residual",
    "commuting_residual",
    "charge_residual",
    "bae_residual",
    "bae_residual_breather_strings",
    "bae_residual_breather",
]

RESOURCE_BOUND_DEFAULT = 4096


@dataclass(frozen=True)
class ChainSpec:
    """N bulk sites, defect of dimension rep.dim at site defect_site."""

    n_sites: int
    defect_site: int
    params: RegimeParams
    rep: object
    resource_bound: int = RESOURCE_BOUND_DEFAULT

    def __post_init__(self):
        if self.n_sites < 0:
            raise ValueError("n_sites must be >= 0")
        if not 1 <= self.defect_site <= self.n_sites + 1:
            raise ValueError(
                f"defect_site must lie in 1..{self.n_sites + 1}, got {self.defect_site}")
        dim = (2 ** self.n_sites) * self.rep.dim
        if dim > self.resource_bound:
            raise ValueError(
                f"chain dimension {dim} exceeds resource bound {self.resource_bound}")

    @property
    def theta(self) -> float:
        return self.params.theta

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.rep.dim if j == self.defect_site else 2
                     for j in range(1, self.n_sites + 2))

    @property
    def chain_dim(self) -> int:
        return math.prod(self.dims)


def chain_space(spec: ChainSpec, with_aux: bool = True) -> TensorSpace:
    dims = spec.dims
    return TensorSpace(((2,) + dims) if with_aux else dims)


def build_monodromy(spec: ChainSpec, lam: complex) -> TensorOperator:
    """Ordered product of bulk R's with the defect L inserted, on aux (x) chain."""
    space = chain_space(spec, with_aux=True)
    total = TensorOperator.identity(space)
    for j in range(spec.n_sites + 1, 0, -1):
        if j == spec.defect_site:
            local = make_l(spec.params, lam - spec.theta, spec.rep)
        else:
            local = make_r(spec.params, lam)
        total = total @ embed_two_site(local.entries, (0, j), space)
    return total


def transfer_matrix(spec: ChainSpec, lam: complex) -> TensorOperator:
    """Partial trace of the monodromy over the auxiliary factor."""
    t = build_monodromy(spec, lam)
    d = spec.chain_dim
    blocks = t.entries.reshape(2, d, 2, d)
    return TensorOperator(chain_space(spec, with_aux=False),
                          np.einsum("aiaj->ij", blocks))


# --------------------------------------------------------------------------
# charge grading
# --------------------------------------------------------------------------


def charge_vector(spec: ChainSpec) -> np.ndarray:
    """Diagonal of the conserved charge: site grading plus defect occupation.

    The site grading counts spins flipped away from the regime's reference
    orientation (isotropic reference: spin up; anisotropic: spin down), so
    the off-diagonal Lax entries shift Q by exactly +-1 and sectors below
    the truncation ceiling are exact.
    """
    dims = spec.dims
    gradings = []
    for d in dims:
        if d == 2:
            if spec.params.regime == XXX:
                gradings.append(np.array([0.0, 1.0]))   # up = reference
            else:
                gradings.append(np.array([1.0, 0.0]))   # down = reference
        else:
            gradings.append(np.arange(d, dtype=float))
    q = np.zeros(spec.chain_dim)
    for i in range(spec.chain_dim):
        idx = np.unravel_index(i, dims)
        q[i] = sum(g[k] for g, k in zip(gradings, idx))
    return q


def sector_projector(spec: ChainSpec, ceiling: int | None = None) -> np.ndarray:
    """Projector onto charge sectors Q <= ceiling (default D - 2)."""
    if ceiling is None:
        ceiling = spec.rep.dim - 2
    q = charge_vector(spec)
    return np.diag((q <= ceiling + 1e-9).astype(np.complex128))


# --------------------------------------------------------------------------
# reference state
# --------------------------------------------------------------------------


def reference_state(spec: ChainSpec) -> np.ndarray:
    """All sites in their local reference state, defect in its vacuum.

    Isotropic convention: spins up; anisotropic: spins down; the defect
    reference is the state annihilated by a_dag in both cases.
    """
    dims = spec.dims
    vec = np.array([1.0 + 0.0j])
    for j, d in enumerate(dims, start=1):
        local = np.zeros(d, dtype=np.complex128)
        if d == 2 and spec.params.regime != XXX:
            local[1] = 1.0
        else:
            local[0] = 1.0
        vec = np.kron(vec, local)
    return vec


def reference_eigenvalue(spec: ChainSpec, lam: complex) -> complex:
    """Transfer-matrix eigenvalue on the reference state: the product of the
    (1,1) local weights plus the product of the (2,2) weights (derived, and
    verified numerically by the test suite)."""
    lam = complex(lam)
    th = spec.theta
    if spec.params.regime == XXX:
        a_bulk, d_bulk = lam + 1j, lam
        a_def, d_def = lam - th + 1j, 1j
    else:
        mu = spec.params.mu_complex
        q = spec.params.q
        a_bulk = 2.0 * np.sinh(mu * lam)
        d_bulk = 2.0 * np.sinh(mu * (lam + 1j))
        a_def = 2.0 * np.sinh(mu * (lam - th + 1j))
        d_def = -np.exp(-mu * (lam - th))
    n = spec.n_sites
    return a_bulk ** n * a_def + d_bulk ** n * d_def


# --------------------------------------------------------------------------
# structural residuals
# --------------------------------------------------------------------------


def rtt_residual(spec: ChainSpec, lam1: complex, lam2: complex,
                 ceiling: int | None = None) -> ResidualReport:
    """|| R12 T1 T2 - T2 T1 R12 || on charge sectors Q <= ceiling."""
    d = spec.chain_dim
    eye2 = np.eye(2, dtype=np.complex128)
    t1 = build_monodromy(spec, lam1).entries.reshape(2, d, 2, d)
    t2 = build_monodromy(spec, lam2).entries.reshape(2, d, 2, d)
    m1 = np.einsum("aibj,cd->acibdj", t1, eye2).reshape(4 * d, 4 * d)
    m2 = np.einsum("aibj,cd->caidbj", t2, eye2).reshape(4 * d, 4 * d)
    r12 = np.kron(make_r(spec.params, lam1 - lam2).entries, np.eye(d, dtype=np.complex128))
    res = r12 @ m1 @ m2 - m2 @ m1 @ r12
    proj = np.kron(np.eye(4, dtype=np.complex128), sector_projector(spec, ceiling))
    ceiling = spec.rep.dim - 2 if ceiling is None else ceiling
    return ResidualReport("rtt", float(np.linalg.norm(res @ proj)),
                          params={"lam1": lam1, "lam2": lam2},
                          subspace=f"charge sectors Q <= {ceiling}")


def commuting_residual(spec: ChainSpec, lam1: complex, lam2: complex,
                       ceiling: int | None = None) -> ResidualReport:
    """|| [t(lam1), t(lam2)] || on charge sectors Q <= ceiling."""
    t1 = transfer_matrix(spec, lam1).entries
    t2 = transfer_matrix(spec, lam2).entries
    proj = sector_projector(spec, ceiling)
    res = proj @ (t1 @ t2 - t2 @ t1) @ proj
    ceiling = spec.rep.dim - 2 if ceiling is None else ceiling
    return ResidualReport("commuting-family", float(np.linalg.norm(res)),
                          params={"lam1": lam1, "lam2": lam2},
                          subspace=f"charge sectors Q <= {ceiling}")


def charge_residual(spec: ChainSpec, lam: complex,
                    ceiling: int | None = None) -> ResidualReport:
    """|| [t(lam), Q] || on charge sectors Q <= ceiling."""
    t = transfer_matrix(spec, lam).entries
    qd = np.diag(charge_vector(spec)).astype(np.complex128)
    proj = sector_projector(spec, ceiling)
    res = proj @ (t @ qd - qd @ t) @ proj
    ceiling = spec.rep.dim - 2 if ceiling is None else ceiling
    return ResidualReport("charge-conservation", float(np.linalg.norm(res)),
                          params={"lam": lam},
                          subspace=f"charge sectors Q <= {ceiling}")


# --------------------------------------------------------------------------
# Bethe equations
# --------------------------------------------------------------------------


def _e_fn(params: RegimeParams, n: float):
    if params.regime == XXX:
        return lambda lam: (lam + 0.5j * n) / (lam - 0.5j * n)
    if params.regime == CRITICAL:
        mu = params.mu
        return lambda lam: np.sinh(mu * (lam + 0.5j * n)) / np.sinh(mu * (lam - 0.5j * n))
    eta = params.eta
    return lambda lam: np.sin(eta * (lam + 0.5j * n)) / np.sin(eta * (lam - 0.5j * n))


def _g_fn(params: RegimeParams, n: float):
    if params.regime != CRITICAL:
        raise ValueError("g-functions exist in the critical regime only")
    mu = params.mu
    return lambda lam: np.cosh(mu * (lam + 0.5j * n)) / np.cosh(mu * (lam - 0.5j * n))


def _defect_fn(params: RegimeParams, sign: str, string: bool = False):
    """The defect source factor: plus for L, minus for the conjugate Lhat;
    the string variant is the negative-parity (attractive ground state) form."""
    if params.regime == XXX:
        if sign == "+":
            return lambda lam: lam + 0.5j
        return lambda lam: 1.0 / (lam - 0.5j)
    if params.regime == CRITICAL:
        mu = params.mu
        trig = np.cosh if string else np.sinh
        if sign == "+":
            return lambda lam: np.exp(-mu * lam) / trig(mu * (lam + 0.5j))
        return lambda lam: np.exp(-mu * lam) * trig(mu * (lam - 0.5j))
    eta = params.eta
    if sign == "+":
        return lambda lam: np.exp(-1j * eta * lam) / np.sin(eta * (lam + 0.5j))
    return lambda lam: np.exp(-1j * eta * lam) * np.sin(eta * (lam - 0.5j))


def bae_residual(spec: ChainSpec, sign: str, roots) -> np.ndarray:
    """Bethe-equation residuals for a supplied root set.

    For each root lam_i this returns

        defect(lam_i - theta) e_1(lam_i)^N + prod_j e_2(lam_i - lam_j),

    the product running over all supplied roots including j = i (the i = j
    factor e_2(0) = -1 carries the sign of the quantisation condition);
    the residuals vanish iff the roots satisfy the equations.
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    roots = [complex(r) for r in roots]
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < 1e-12:
                raise ValueError("coincident Bethe roots")
    if not roots:
        return np.zeros(0, dtype=np.complex128)
    e1 = _e_fn(spec.params, 1)
    e2 = _e_fn(spec.params, 2)
    src = _defect_fn(spec.params, sign)
    out = []
    for lam in roots:
        lhs = src(lam - spec.theta) * e1(lam) ** spec.n_sites
        rhs = np.prod([e2(lam - other) for other in roots])
        out.append(lhs + rhs)
    return np.asarray(out, dtype=np.complex128)


def bae_residual_breather_strings(params: RegimeParams, n_sites: int, sign: str,
                                  string_roots, breather_roots) -> np.ndarray:
    """First breather-state set: residuals of the negative-parity string roots
    in the presence of real-string (breather) rapidities."""
    g1 = _g_fn(params, 1)
    g2 = _g_fn(params, 2)
    e2 = _e_fn(params, 2)
    src = _defect_fn(params, sign, string=True)
    string_roots = [complex(r) for r in string_roots]
    breather_roots = [complex(r) for r in breather_roots]
    out = []
    for lam in string_roots:
        lhs = src(lam - params.theta) * g1(lam) ** n_sites
        rhs = np.prod([e2(lam - other) for other in string_roots])
        rhs *= np.prod([g2(lam - b) for b in breather_roots])
        out.append(lhs + rhs)
    return np.asarray(out, dtype=np.complex128)


def bae_residual_breather(params: RegimeParams, n_sites: int, sign: str,
                          breather_root, other_breathers, string_roots) -> complex:
    """Second breather-state set: the residual of one breather rapidity."""
    e1 = _e_fn(params, 1)
    e2 = _e_fn(params, 2)
    g2 = _g_fn(params, 2)
    src = _defect_fn(params, sign)
    lam = complex(breather_root)
    lhs = src(lam - params.theta) * e1(lam) ** n_sites
    rhs = np.prod([g2(lam - r) for r in string_roots]) if len(list(string_roots)) else 1.0
    rhs *= np.prod([e2(lam - b) for b in other_breathers]) if len(list(other_breathers)) else 1.0
    return complex(lhs + rhs)
