"""Indefinite orthogonal groups O(p,q), SO(p,q) and SO+(p,q).

Matrices act on column vectors of R^(p+q) carrying the form
``diag(+1 x p, -1 x q)``.  Everything here is a pure function of its
arguments; :class:`GroupElement` wraps a read-only array.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSignatureError, MalformedInputError, MembershipError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, order=True)
class Signature:
    """Counts of +1 and -1 coefficients of a diagonal quadratic form."""

    p: int
    q: int

    def __post_init__(self):
        for name in ("p", "q"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidSignatureError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise InvalidSignatureError(f"{name} must be nonnegative, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def n(self):
        return self.p + self.q

    def swap(self):
        return Signature(self.q, self.p)

    def __str__(self):
        return f"({self.p},{self.q})"

    @classmethod
    def parse(cls, text):
        """Parse ``"p,q"``."""
        try:
            p, q = (int(part) for part in str(text).split(","))
        except ValueError as exc:
            raise MalformedInputError(f"cannot parse signature {text!r}") from exc
        return cls(p, q)


def as_signature(sig):
    if isinstance(sig, Signature):
        return sig
    try:
        p, q = sig
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"not a signature: {sig!r}") from exc
    return Signature(p, q)


def form_matrix(sig):
    """Return ``I_{p,q}``, the diagonal matrix of the form."""
    sig = as_signature(sig)
    return np.diag(np.concatenate([np.ones(sig.p), -np.ones(sig.q)]))


def form_diagonal(sig):
    sig = as_signature(sig)
    return np.concatenate([np.ones(sig.p), -np.ones(sig.q)])


def _vector(x, n, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != n:
        raise MalformedInputError(f"{name} must be a vector of length {n}, got shape {x.shape}")
    return x


def _square(M, n, name="M"):
    try:
        M = np.asarray(M, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"{name} is not a real matrix") from exc
    if M.shape != (n, n):
        raise MalformedInputError(f"{name} must have shape ({n}, {n}), got {M.shape}")
    return M


def inner(sig, x, y):
    """Bilinear form ``sum_{i<=p} x_i y_i - sum_{j>p} x_j y_j``."""
    sig = as_signature(sig)
    x = _vector(x, sig.n, "x")
    y = _vector(y, sig.n, "y")
    return float(x[: sig.p] @ y[: sig.p] - x[sig.p :] @ y[sig.p :])


def quadratic_form(sig, x):
    return inner(sig, x, x)


@dataclass(frozen=True)
class MembershipReport:
    in_O: bool
    in_SO: bool
    form_residual: float
    det_residual: float

    def to_dict(self):
        return {
            "in_O": self.in_O,
            "in_SO": self.in_SO,
            "form_residual": self.form_residual,
            "det_residual": self.det_residual,
        }


def form_residual(sig, M):
    """Max-norm of ``M I M^T - I``."""
    sig = as_signature(sig)
    M = _square(M, sig.n)
    if sig.n == 0:
        return 0.0
    eta = form_diagonal(sig)
    return float(np.max(np.abs((M * eta) @ M.T - np.diag(eta))))


def _det(M):
    return 1.0 if M.shape[0] == 0 else float(np.linalg.det(M))


def is_member(sig, M, tol=DEFAULT_TOL):
    """Check the defining identities of O(p,q) and SO(p,q)."""
    sig = as_signature(sig)
    M = _square(M, sig.n)
    res = form_residual(sig, M)
    det_res = _det(M) - 1.0
    in_O = res <= tol
    return MembershipReport(
        in_O=bool(in_O),
        in_SO=bool(in_O and abs(det_res) <= tol),
        form_residual=res,
        det_residual=det_res,
    )


@dataclass(frozen=True)
class GroupElement:
    """A validated element of SO(p,q).

    Build through :meth:`from_matrix`; the constructor trusts its inputs.
    """

    sig: Signature
    entries: np.ndarray = field(repr=False)
    membership_residual: float = 0.0
    det_residual: float = 0.0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_matrix(cls, sig, M, tol=DEFAULT_TOL):
        sig = as_signature(sig)
        report = is_member(sig, M, tol)
        if not report.in_SO:
            raise MembershipError(
                f"matrix is not in SO{sig}: form residual {report.form_residual:.3g}, "
                f"det - 1 = {report.det_residual:.3g}",
                residual=max(report.form_residual, abs(report.det_residual)),
            )
        return cls(sig, M, report.form_residual, report.det_residual)

    @classmethod
    def identity(cls, sig):
        sig = as_signature(sig)
        return cls(sig, np.eye(sig.n))

    @property
    def n(self):
        return self.sig.n

    def blocks(self):
        """Return ``(B, C, D, E)`` with ``A = [[B, C], [D, E]]`` and B of size p x p."""
        p = self.sig.p
        A = self.entries
        return A[:p, :p], A[:p, p:], A[p:, :p], A[p:, p:]

    def column(self, j):
        return self.entries[:, j].copy()

    def inverse(self):
        """``I A^T I``; exact for members, no linear solve."""
        eta = form_diagonal(self.sig)
        inv = (eta[:, None] * self.entries.T) * eta[None, :]
        return GroupElement(self.sig, inv, self.membership_residual, self.det_residual)

    def __matmul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.sig != self.sig:
            raise MalformedInputError(f"signature mismatch: {self.sig} vs {other.sig}")
        prod = self.entries @ other.entries
        report = is_member(self.sig, prod, np.inf)
        return GroupElement(self.sig, prod, report.form_residual, report.det_residual)

    def to_dict(self):
        return {"sig": [self.sig.p, self.sig.q], "rows": self.entries.tolist()}

    @classmethod
    def from_dict(cls, data, tol=DEFAULT_TOL):
        try:
            sig = as_signature(data["sig"])
            rows = data["rows"]
        except (KeyError, TypeError) as exc:
            raise MalformedInputError("expected an object with 'sig' and 'rows'") from exc
        M = np.zeros((0, 0)) if len(rows) == 0 else rows
        return cls.from_matrix(sig, _square(M, sig.n, "rows"), tol)


def _entries(A):
    return A.entries if isinstance(A, GroupElement) else np.asarray(A, dtype=float)


def _as_element(sig, A):
    if isinstance(A, GroupElement):
        if A.sig != sig:
            raise MalformedInputError(f"expected an element of SO{sig}, got SO{A.sig}")
        return A
    return GroupElement.from_matrix(sig, _square(A, sig.n, "A"))


def is_identity_component(sig, A):
    """Orthochronous test: ``det`` of the upper-left p x p block is positive.

    For definite signatures SO(p,q) is connected and this is always true.
    """
    sig = as_signature(sig)
    M = _square(_entries(A), sig.n, "A")
    if sig.p == 0 or sig.q == 0:
        return True
    return bool(np.linalg.det(M[: sig.p, : sig.p]) > 0)


def embed_first(sig, A):
    """Inclusion SO(p-1,q) -> SO(p,q), ``A -> diag(1, A)``."""
    sig = as_signature(sig)
    if sig.p < 1:
        raise InvalidSignatureError(f"embed_first needs p >= 1, got {sig}")
    inner_sig = Signature(sig.p - 1, sig.q)
    A = _as_element(inner_sig, A)
    out = np.eye(sig.n)
    out[1:, 1:] = A.entries
    return GroupElement(sig, out, A.membership_residual, A.det_residual)


def embed_last(sig, A):
    """Inclusion SO(p,q-1) -> SO(p,q), ``A -> diag(A, 1)``.

    The trailing entry is +1 so the result keeps determinant one.
    """
    sig = as_signature(sig)
    if sig.q < 1:
        raise InvalidSignatureError(f"embed_last needs q >= 1, got {sig}")
    inner_sig = Signature(sig.p, sig.q - 1)
    A = _as_element(inner_sig, A)
    out = np.eye(sig.n)
    out[:-1, :-1] = A.entries
    return GroupElement(sig, out, A.membership_residual, A.det_residual)


@dataclass(frozen=True)
class ColumnReport:
    """Column diagnostics of a square matrix for the form of ``sig``.

    ``ordered_ok`` says column j has magnitude ``I_{p,q}[j, j]``; the bare
    counts do not determine membership on their own (a column swap keeps
    them but leaves O(p,q)).
    """

    orthogonal_pairs_ok: bool
    plus_count: int
    minus_count: int
    ordered_ok: bool
    max_offdiag: float

    def matches(self, sig):
        sig = as_signature(sig)
        return (
            self.orthogonal_pairs_ok
            and self.ordered_ok
            and self.plus_count == sig.p
            and self.minus_count == sig.q
        )


def column_orthogonality_report(sig, A, tol=DEFAULT_TOL):
    sig = as_signature(sig)
    M = _square(_entries(A), sig.n, "A")
    eta = form_diagonal(sig)
    gram = M.T @ (eta[:, None] * M)
    n = sig.n
    diag = np.diag(gram) if n else np.zeros(0)
    off = gram - np.diag(diag)
    max_off = float(np.max(np.abs(off))) if n else 0.0
    plus = np.abs(diag - 1.0) <= tol
    minus = np.abs(diag + 1.0) <= tol
    ordered = bool(np.all(plus[: sig.p]) and np.all(minus[sig.p :]))
    return ColumnReport(
        orthogonal_pairs_ok=max_off <= tol,
        plus_count=int(plus.sum()),
        minus_count=int(minus.sum()),
        ordered_ok=ordered,
        max_offdiag=max_off,
    )


def boost(t, sig=(1, 1), i=0, j=None):
    """Hyperbolic rotation by rapidity ``t`` in the plane of axes ``i`` (space) and ``j`` (time)."""
    sig = as_signature(sig)
    if j is None:
        j = sig.p
    if not (0 <= i < sig.p <= j < sig.n):
        raise InvalidSignatureError(f"boost needs a positive axis and a negative axis in {sig}")
    M = np.eye(sig.n)
    M[i, i] = M[j, j] = np.cosh(t)
    M[i, j] = M[j, i] = np.sinh(t)
    return GroupElement.from_matrix(sig, M)


def rotation(theta, n, i=0, j=1):
    """Euclidean rotation by ``theta`` in the (i, j) coordinate plane of R^n."""
    M = np.eye(n)
    c, s = np.cos(theta), np.sin(theta)
    M[i, i] = M[j, j] = c
    M[i, j], M[j, i] = -s, s
    return M
