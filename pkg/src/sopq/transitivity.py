"""Completing a point of X^+(p,q) to a matrix of SO(p,q).

Given ``x`` with ``Q(x) = 1`` we build ``A_x`` with first column ``x`` by
Gram-Schmidt for the indefinite form: each new column is a candidate
vector projected onto the Q-orthogonal complement of the columns chosen
so far and scaled to ``Q = +/-1``.  Left multiplication by ``A_x`` then
carries the stabiliser of ``e_1`` onto the fibre of ``A -> A e_1`` over
``x``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, InvalidSignatureError, MalformedInputError, MembershipError
from .indefinite_group import (
    DEFAULT_TOL,
    GroupElement,
    as_signature,
    form_diagonal,
    is_member,
)
from .quasisphere import QuasiSpherePoint, on_sphere

PIVOT_THRESHOLD = 1e-6
DIVISION_THRESHOLD = 1e-12
MAX_ATTEMPTS = 8


def _project_out(v, basis, signs, eta):
    # two passes keep the result Q-orthogonal to working precision
    for _ in range(2):
        for u, s in zip(basis, signs):
            v = v - s * ((u * eta) @ v) * u
    return v


def _normalize(w, eta, stage):
    qw = float((w * eta) @ w)
    if abs(qw) < DIVISION_THRESHOLD:
        raise DegeneracyError(f"stage {stage}: Q-null vector cannot be normalized", stage=stage)
    return w / np.sqrt(abs(qw)), (1 if qw > 0 else -1)


def _best_pivot(candidates, basis, signs, eta):
    best = None
    for idx, v in enumerate(candidates):
        w = _project_out(v, basis, signs, eta)
        qw = abs(float((w * eta) @ w))
        if best is None or qw > best[0]:
            best = (qw, idx, w)
    return best


def indefinite_gram_schmidt(sig, vectors, tol=DEFAULT_TOL, pivot_threshold=PIVOT_THRESHOLD):
    """Q-orthonormalize ``vectors``, returned in pivot order.

    At every stage the remaining candidate with the largest ``|Q|`` after
    projection is taken.  Raises :class:`DegeneracyError` if all remaining
    candidates are Q-null within ``pivot_threshold``.
    """
    sig = as_signature(sig)
    eta = form_diagonal(sig)
    remaining = []
    for v in vectors:
        v = np.asarray(v, dtype=float)
        if v.shape != (sig.n,):
            raise MalformedInputError(f"vectors must have length {sig.n}, got {v.shape}")
        remaining.append(v)
    basis, signs = [], []
    for stage in range(len(remaining)):
        qw, idx, w = _best_pivot(remaining, basis, signs, eta)
        if qw < pivot_threshold:
            raise DegeneracyError(
                f"stage {stage}: every remaining candidate is Q-null (max |Q| = {qw:.3g})",
                stage=stage,
            )
        u, s = _normalize(w, eta, stage)
        basis.append(u)
        signs.append(s)
        remaining.pop(idx)
    return basis


@dataclass(frozen=True)
class CompletionResult:
    """``element`` has first column ``x``.

    ``swaps_applied`` is 1 when the determinant was fixed by exchanging two
    adjacent columns past the first.  When no such pair of same-sign columns
    exists the last column is negated instead (``negations_applied``).
    """

    element: GroupElement
    column_residual: float
    swaps_applied: int
    negations_applied: int = 0
    attempts: int = 1

    def to_dict(self):
        return {
            "element": self.element.to_dict(),
            "column_residual": self.column_residual,
            "membership_residual": self.element.membership_residual,
            "swaps_applied": self.swaps_applied,
            "negations_applied": self.negations_applied,
            "attempts": self.attempts,
        }


def _coerce_point(sig, x, tol):
    if isinstance(x, QuasiSpherePoint):
        if x.sig != sig or x.sign != 1:
            raise MalformedInputError(f"expected a point of X^+{sig}")
        return x
    return on_sphere(sig, 1, x, tol)


def _complete_once(sig, x, rng, eta):
    n = sig.n
    basis, signs = [x.copy()], [1]
    standard = [np.eye(n)[i] for i in range(n)]
    for stage in range(1, n):
        qw, idx, w = _best_pivot(standard, basis, signs, eta)
        if qw < PIVOT_THRESHOLD:
            randoms = list(rng.standard_normal((n, n)))
            qw, idx, w = _best_pivot(randoms, basis, signs, eta)
            if qw < PIVOT_THRESHOLD:
                raise DegeneracyError(f"stage {stage}: no non-null complement vector", stage=stage)
        else:
            standard.pop(idx)
        u, s = _normalize(w, eta, stage)
        basis.append(u)
        signs.append(s)
    plus = [u for u, s in zip(basis, signs) if s > 0]
    minus = [u for u, s in zip(basis, signs) if s < 0]
    if len(plus) != sig.p or len(minus) != sig.q:
        raise DegeneracyError(
            f"complement has signature ({len(plus)},{len(minus)}), expected {sig}", stage=n - 1
        )
    return np.column_stack(plus + minus)


def complete_to_group(sig, x, tol=DEFAULT_TOL, seed=0):
    """Return ``A_x`` in SO(p,q) with ``A_x e_1 = x`` for ``x`` on X^+(p,q)."""
    sig = as_signature(sig)
    if sig.p < 1:
        raise InvalidSignatureError(f"X^+{sig} is empty")
    pt = _coerce_point(sig, x, tol)
    x = pt.coords
    eta = form_diagonal(sig)
    last_error = None
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        try:
            A = _complete_once(sig, x, rng, eta)
        except DegeneracyError as exc:
            last_error = exc
            continue
        swaps = negations = 0
        if np.linalg.det(A) < 0:
            if sig.p >= 3:
                A[:, [1, 2]] = A[:, [2, 1]]
                swaps = 1
            elif sig.q >= 2:
                A[:, [-2, -1]] = A[:, [-1, -2]]
                swaps = 1
            else:
                A[:, -1] = -A[:, -1]
                negations = 1
        report = is_member(sig, A, tol)
        if not report.in_SO:
            last_error = MembershipError(
                f"completion lost accuracy: residual {report.form_residual:.3g}",
                residual=report.form_residual,
            )
            continue
        element = GroupElement(sig, A, report.form_residual, report.det_residual)
        column_residual = float(np.max(np.abs(A[:, 0] - x)))
        return CompletionResult(element, column_residual, swaps, negations, attempt + 1)
    raise DegeneracyError(
        f"no completion after {MAX_ATTEMPTS} attempts: {last_error}",
        stage=getattr(last_error, "stage", None),
    )


def fiber_map(sig, x, F, tol=DEFAULT_TOL, seed=0):
    """``F -> A_x F`` from the fibre over ``e_1`` to the fibre over ``x``."""
    sig = as_signature(sig)
    if not isinstance(F, GroupElement) or F.sig != sig:
        raise MalformedInputError(f"F must be a GroupElement of SO{sig}")
    e1 = np.eye(sig.n)[0]
    defect = float(np.max(np.abs(F.entries[:, 0] - e1)))
    if defect > tol:
        raise MembershipError(f"F does not fix e_1 (defect {defect:.3g})", residual=defect)
    return complete_to_group(sig, x, tol, seed).element @ F


def fiber_map_inverse(sig, x, G, tol=DEFAULT_TOL, seed=0):
    """Inverse of :func:`fiber_map` for the same ``x`` and ``seed``."""
    sig = as_signature(sig)
    return complete_to_group(sig, x, tol, seed).element.inverse() @ G
