"""Lie algebra so(p,q), its Cartan split and polar decomposition.

``so(p,q) = {X : X^T I + I X = 0}``.  The involution ``theta(X) = -X^T``
splits it into antisymmetric matrices ``k`` (block diagonal, so(p) x so(q))
and symmetric matrices ``p`` (off-diagonal blocks).  On the group this
lifts to ``A = K exp(P)`` with ``K`` in SO(p) x SO(q).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ComponentError, MalformedInputError, SpectralError
from .indefinite_group import (
    DEFAULT_TOL,
    GroupElement,
    Signature,
    _square,
    as_signature,
    form_diagonal,
    is_member,
)

EIGENVALUE_FLOOR = 1e-14


def algebra_residual(sig, X):
    """Max-norm of ``X^T I + I X``."""
    sig = as_signature(sig)
    X = _square(X, sig.n, "X")
    if sig.n == 0:
        return 0.0
    eta = form_diagonal(sig)
    return float(np.max(np.abs(X.T * eta + eta[:, None] * X)))


def in_algebra(sig, X, tol=DEFAULT_TOL):
    """Return ``(ok, residual)``."""
    res = algebra_residual(sig, X)
    return res <= tol, res


@dataclass(frozen=True)
class AlgebraElement:
    sig: Signature
    entries: np.ndarray = field(repr=False)
    algebra_residual: float = 0.0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_matrix(cls, sig, X, tol=DEFAULT_TOL):
        sig = as_signature(sig)
        ok, res = in_algebra(sig, X, tol)
        if not ok:
            raise MalformedInputError(f"matrix is not in so{sig}: residual {res:.3g}")
        return cls(sig, X, res)

    def __add__(self, other):
        _same_sig(self, other)
        X = self.entries + other.entries
        return AlgebraElement(self.sig, X, algebra_residual(self.sig, X))

    def __mul__(self, c):
        return AlgebraElement(self.sig, c * self.entries, abs(c) * self.algebra_residual)

    __rmul__ = __mul__


def _same_sig(X, Y):
    if X.sig != Y.sig:
        raise MalformedInputError(f"signature mismatch: {X.sig} vs {Y.sig}")


def random_algebra_element(sig, rng, scale=1.0):
    """``I S`` with ``S`` antisymmetric Gaussian; always in so(p,q)."""
    sig = as_signature(sig)
    G = scale * rng.standard_normal((sig.n, sig.n))
    X = form_diagonal(sig)[:, None] * (G - G.T)
    return AlgebraElement(sig, X, algebra_residual(sig, X))


def theta(X):
    return AlgebraElement(X.sig, -X.entries.T, X.algebra_residual)


@dataclass(frozen=True)
class CartanSplit:
    k_part: AlgebraElement
    p_part: AlgebraElement


def cartan_split(X):
    if not isinstance(X, AlgebraElement):
        raise MalformedInputError("cartan_split expects an AlgebraElement")
    M = X.entries
    K = (M - M.T) / 2
    P = (M + M.T) / 2
    return CartanSplit(
        AlgebraElement(X.sig, K, algebra_residual(X.sig, K)),
        AlgebraElement(X.sig, P, algebra_residual(X.sig, P)),
    )


def bracket(X, Y):
    _same_sig(X, Y)
    Z = X.entries @ Y.entries - Y.entries @ X.entries
    return AlgebraElement(X.sig, Z, algebra_residual(X.sig, Z))


def symmetric_defect(M):
    """Max-norm of ``M - M^T``, zero exactly on the -1 eigenspace of theta."""
    return float(np.max(np.abs(M - M.T))) if M.size else 0.0


def antisymmetric_defect(M):
    return float(np.max(np.abs(M + M.T))) if M.size else 0.0


@dataclass(frozen=True)
class BracketReport:
    sig: Signature
    samples: int
    kk_in_k: float
    kp_in_p: float
    pp_in_k: float
    tol: float
    witness: tuple = None  # (X, Y) in p with [X, Y] outside p

    @property
    def ok(self):
        return max(self.kk_in_k, self.kp_in_p, self.pp_in_k) <= self.tol

    def to_dict(self):
        return {
            "sig": [self.sig.p, self.sig.q],
            "samples": self.samples,
            "kk_in_k": self.kk_in_k,
            "kp_in_p": self.kp_in_p,
            "pp_in_k": self.pp_in_k,
            "ok": self.ok,
            "pp_not_closed_witness": self.witness is not None,
        }


def bracket_relation_check(sig, samples=500, seed=0, tol=1e-10):
    """Sample ``[k,k] in k``, ``[k,p] in p``, ``[p,p] in k``.

    Worst absolute defects are reported.  A pair in ``p`` whose bracket
    has a nonzero ``k`` part is kept as a witness that ``p`` is not a
    subalgebra.
    """
    sig = as_signature(sig)
    rng = np.random.default_rng(seed)
    worst = {"kk": 0.0, "kp": 0.0, "pp": 0.0}
    witness = None
    for _ in range(samples):
        s1 = cartan_split(random_algebra_element(sig, rng))
        s2 = cartan_split(random_algebra_element(sig, rng))
        k1, p1, k2, p2 = s1.k_part, s1.p_part, s2.k_part, s2.p_part
        for key, (a, b), check in (
            ("kk", (k1, k2), antisymmetric_defect),
            ("kp", (k1, p2), symmetric_defect),
            ("pp", (p1, p2), antisymmetric_defect),
        ):
            worst[key] = max(worst[key], check(bracket(a, b).entries))
        if witness is None:
            Z = bracket(p1, p2).entries
            if symmetric_defect(Z) > 1e-6:
                witness = (p1, p2)
    return BracketReport(sig, samples, worst["kk"], worst["kp"], worst["pp"], tol, witness)


def k_block_iso(k_part, tol=DEFAULT_TOL):
    """Split an element of ``k`` into its so(p) and so(q) diagonal blocks."""
    sig = k_part.sig
    M = k_part.entries
    p = sig.p
    off = max(
        float(np.max(np.abs(M[:p, p:]))) if M[:p, p:].size else 0.0,
        float(np.max(np.abs(M[p:, :p]))) if M[p:, :p].size else 0.0,
    )
    if off > tol:
        raise MalformedInputError(f"not in k: off-diagonal block of size {off:.3g}")
    a, d = M[:p, :p].copy(), M[p:, p:].copy()
    if max(antisymmetric_defect(a), antisymmetric_defect(d)) > tol:
        raise MalformedInputError("not in k: diagonal blocks are not antisymmetric")
    return a, d


def assemble_k(a, d):
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    sig = Signature(a.shape[0], d.shape[0])
    return AlgebraElement(sig, scipy.linalg.block_diag(a, d), 0.0)


def matrix_exp(X):
    return scipy.linalg.expm(np.asarray(X, dtype=float))


def _spd_eigh(S):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise MalformedInputError(f"expected a square matrix, got shape {S.shape}")
    if symmetric_defect(S) > 1e-9 * max(1.0, float(np.max(np.abs(S)))):
        raise SpectralError("matrix is not symmetric")
    w, Q = np.linalg.eigh((S + S.T) / 2)
    if w.size and w[0] <= EIGENVALUE_FLOOR:
        raise SpectralError(f"matrix is not positive-definite: eigenvalue {w[0]:.3g}", eigenvalue=w[0])
    return w, Q


def matrix_log_spd(S):
    w, Q = _spd_eigh(S)
    return (Q * np.log(w)) @ Q.T


def matrix_sqrt_spd(S):
    w, Q = _spd_eigh(S)
    return (Q * np.sqrt(w)) @ Q.T


def in_max_compact(sig, A, tol=DEFAULT_TOL):
    """Membership in SO(p) x SO(q), embedded block-diagonally."""
    sig = as_signature(sig)
    M = _square(A.entries if isinstance(A, GroupElement) else A, sig.n, "A")
    p = sig.p
    if np.max(np.abs(M[:p, p:]), initial=0.0) > tol or np.max(np.abs(M[p:, :p]), initial=0.0) > tol:
        return False
    for block in (M[:p, :p], M[p:, p:]):
        k = block.shape[0]
        if k == 0:
            continue
        if np.max(np.abs(block.T @ block - np.eye(k))) > tol:
            return False
        if abs(np.linalg.det(block) - 1.0) > tol:
            return False
    return True


@dataclass(frozen=True)
class PolarResult:
    compact_factor: GroupElement
    symmetric_factor: np.ndarray = field(repr=False)
    log_symmetric: AlgebraElement = field(repr=False)
    reconstruction_residual: float = 0.0

    def to_dict(self):
        return {
            "compact": self.compact_factor.to_dict(),
            "symmetric": self.symmetric_factor.tolist(),
            "log_p": self.log_symmetric.entries.tolist(),
            "residual": self.reconstruction_residual,
        }


def polar_decompose(A, tol=1e-8):
    """``A = K S`` with ``S = (A^T A)^(1/2) = exp(P)``, ``K`` in SO(p) x SO(q).

    Raises :class:`ComponentError` when ``K`` leaves SO(p) x SO(q), which
    happens exactly for elements outside the identity component.
    """
    if not isinstance(A, GroupElement):
        raise MalformedInputError("polar_decompose expects a GroupElement")
    sig = A.sig
    M = A.entries
    if sig.n == 0:
        empty = np.zeros((0, 0))
        return PolarResult(A, empty, AlgebraElement(sig, empty), 0.0)
    S = matrix_sqrt_spd(M.T @ M)
    S = (S + S.T) / 2
    K = M @ np.linalg.inv(S)
    if not in_max_compact(sig, K, tol):
        raise ComponentError(
            f"compact factor is not in SO({sig.p}) x SO({sig.q}); "
            "the element is outside the identity component"
        )
    P = matrix_log_spd(S)
    P = (P + P.T) / 2
    P_elem = AlgebraElement(sig, P, algebra_residual(sig, P))
    if P_elem.algebra_residual > tol:
        raise ComponentError(
            f"log of symmetric factor is not in so{sig}: {P_elem.algebra_residual:.3g}",
            residual=P_elem.algebra_residual,
        )
    report = is_member(sig, K, np.inf)
    compact = GroupElement(sig, K, report.form_residual, report.det_residual)
    residual = float(np.max(np.abs(K @ S - M)))
    return PolarResult(compact, S, P_elem, residual)


def random_compact(sig, rng):
    """Haar-random element of SO(p) x SO(q)."""
    sig = as_signature(sig)
    blocks = []
    for k in (sig.p, sig.q):
        if k == 0:
            blocks.append(np.zeros((0, 0)))
            continue
        Q, R = np.linalg.qr(rng.standard_normal((k, k)))
        Q = Q * np.sign(np.diag(R))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        blocks.append(Q)
    return scipy.linalg.block_diag(*blocks)


def random_p_element(sig, rng, max_norm=2.0):
    """Symmetric element of so(p,q) with Frobenius norm at most ``max_norm``."""
    sig = as_signature(sig)
    B = rng.standard_normal((sig.p, sig.q))
    X = np.zeros((sig.n, sig.n))
    X[: sig.p, sig.p :] = B
    X[sig.p :, : sig.p] = B.T
    norm = np.linalg.norm(X)
    if norm > 0:
        X *= rng.uniform(0, max_norm) / norm
    return AlgebraElement(sig, X, algebra_residual(sig, X))


def random_group_element(sig, rng, max_norm=2.0):
    """``K exp(P)`` with ``K`` Haar in SO(p) x SO(q); lies in SO+(p,q)."""
    sig = as_signature(sig)
    M = random_compact(sig, rng) @ matrix_exp(random_p_element(sig, rng, max_norm).entries)
    report = is_member(sig, M, np.inf)
    return GroupElement(sig, M, report.form_residual, report.det_residual)
