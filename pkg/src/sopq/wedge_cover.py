"""The double cover SL(4,R) -> SO+(3,3) through the wedge square.

Basis of Lambda^2 R^4 (0-based): e0^e1, e0^e2, e0^e3, e1^e2, e1^e3, e2^e3.
The pairing ``(a^b, c^d) = det[a b c d]`` is symmetric of signature (3,3)
and preserved by ``Lambda^2 g`` whenever ``det g = 1``.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError, MalformedInputError
from .indefinite_group import Signature, is_identity_component, is_member

WEDGE_BASIS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
SIG33 = Signature(3, 3)


def permutation_sign(seq):
    """Sign of a sequence of distinct integers; 0 on a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i, j in itertools.combinations(range(len(seq)), 2):
        if seq[i] > seq[j]:
            sign = -sign
    return sign


def wedge_squared(g):
    """Matrix of ``v ^ w -> g v ^ g w``: the 2 x 2 minors of ``g``."""
    g = np.asarray(g, dtype=float)
    if g.shape != (4, 4):
        raise MalformedInputError(f"expected a 4x4 matrix, got {g.shape}")
    W = np.empty((6, 6))
    for col, (a, b) in enumerate(WEDGE_BASIS):
        for row, (i, j) in enumerate(WEDGE_BASIS):
            W[row, col] = g[i, a] * g[j, b] - g[j, a] * g[i, b]
    return W


def wedge_form():
    """Gram matrix of the top-wedge pairing; integer entries."""
    F = np.zeros((6, 6), dtype=int)
    for r, (i, j) in enumerate(WEDGE_BASIS):
        for c, (k, l) in enumerate(WEDGE_BASIS):
            F[r, c] = permutation_sign((i, j, k, l))
    return F


def _wedge_vector(*terms):
    """Coefficient vector of ``sum c * e_i ^ e_j`` given ``(c, (i, j))`` terms."""
    v = [0] * 6
    for c, pair in terms:
        v[WEDGE_BASIS.index(pair)] += c
    return v


# e0^e1 +/- e2^e3, e0^e2 -/+ e1^e3, e0^e3 +/- e1^e2: positive vectors first
DIAGONALIZING_VECTORS = (
    _wedge_vector((1, (0, 1)), (1, (2, 3))),
    _wedge_vector((1, (0, 2)), (-1, (1, 3))),
    _wedge_vector((1, (0, 3)), (1, (1, 2))),
    _wedge_vector((1, (0, 1)), (-1, (2, 3))),
    _wedge_vector((1, (0, 2)), (1, (1, 3))),
    _wedge_vector((1, (0, 3)), (-1, (1, 2))),
)


def pairing(u, v):
    """Exact value of the form on integer coefficient vectors."""
    F = wedge_form().tolist()
    return sum(int(u[i]) * F[i][j] * int(v[j]) for i in range(6) for j in range(6))


def change_of_basis():
    """Orthogonal ``C`` with ``C^T F C = diag(1, 1, 1, -1, -1, -1)``."""
    return np.array(DIAGONALIZING_VECTORS, dtype=float).T / np.sqrt(2.0)


def _charpoly_exact(M):
    """Coefficients ``[1, c_1, ..., c_n]`` of ``det(t I - M)`` (Faddeev-LeVerrier)."""
    n = len(M)
    M = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(1)]
    N = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # N <- M N + c_{k-1} I
        N = [[sum(M[i][t] * N[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            N[i][i] += coeffs[-1]
        MN = [[sum(M[i][t] * N[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(MN[i][i] for i in range(n)) / k)
    return coeffs


def _sign_changes(seq):
    signs = [1 if c > 0 else -1 for c in seq if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def inertia_exact(S):
    """``(plus, minus, zero)`` of an integer symmetric matrix.

    All roots of the characteristic polynomial are real, so Descartes'
    rule of signs counts the positive ones exactly.
    """
    n = len(S)
    coeffs = _charpoly_exact(S)
    zero = 0
    while zero < n and coeffs[n - zero] == 0:
        zero += 1
    plus = _sign_changes(coeffs)
    reflected = [c * (-1) ** (n - i) for i, c in enumerate(coeffs)]
    minus = _sign_changes(reflected)
    return plus, minus, zero


def form_signature():
    plus, minus, zero = inertia_exact(wedge_form().tolist())
    if zero:
        raise ConsistencyError("wedge pairing is degenerate")
    return plus, minus


def explicit_norms():
    """``(vector, |v|^2)`` for the six diagonalizing vectors, exact integers."""
    return [(v, pairing(v, v)) for v in DIAGONALIZING_VECTORS]


def to_standard_form(W):
    """Conjugate a form-preserving 6 x 6 matrix into O(3,3)."""
    C = change_of_basis()
    return C.T @ W @ C


def _exact_rank(rows):
    A = [[Fraction(x) for x in r] for r in rows]
    rank, cols = 0, len(A[0]) if A else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for r in range(len(A)):
            if r != rank and A[r][c] != 0:
                f = A[r][c] / A[rank][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


def form_algebra_dimension():
    """``dim {X : X^T F + F X = 0}`` computed exactly from the 36 x 36 system."""
    F = wedge_form().tolist()
    rows = []
    for r in range(6):
        for s in range(6):
            row = [0] * 36
            # (X^T F)_{rs} = sum_k X_{kr} F_{ks};  (F X)_{rs} = sum_k F_{rk} X_{ks}
            for k in range(6):
                row[k * 6 + r] += F[k][s]
                row[k * 6 + s] += F[r][k]
            rows.append(row)
    return 36 - _exact_rank(rows)


def random_sl4(rng):
    """Gaussian 4 x 4 matrix rescaled to determinant one."""
    while True:
        g = rng.standard_normal((4, 4))
        d = np.linalg.det(g)
        if abs(d) >= 0.1:
            break
    if d < 0:
        g[:, 0] = -g[:, 0]
        d = -d
    return g / d ** 0.25


@dataclass
class CoverReport:
    samples: int
    seed: int
    tol: float
    form_preserved: int = 0
    det_one: int = 0
    in_identity_component: int = 0
    multiplicative: int = 0
    kernel_ok: int = 0
    worst: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self):
        n = self.samples
        return (
            self.form_preserved == n
            and self.det_one == n
            and self.in_identity_component == n
            and self.multiplicative == n
            and self.kernel_ok == n
        )

    def to_dict(self):
        return {
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "form_preserved": self.form_preserved,
            "det_one": self.det_one,
            "in_identity_component": self.in_identity_component,
            "multiplicative": self.multiplicative,
            "kernel_ok": self.kernel_ok,
            "worst": dict(sorted(self.worst.items())),
            "counterexamples": self.counterexamples,
            "ok": self.ok,
        }


def _bump(report, key, value):
    report.worst[key] = max(report.worst.get(key, 0.0), float(value))


def verify_cover(samples=1000, seed=42, tol=1e-8):
    """Randomized checks that ``g -> Lambda^2 g`` lands in SO+(3,3) as a 2:1 homomorphism."""
    rng = np.random.default_rng(seed)
    F = wedge_form().astype(float)
    I6 = np.eye(6)
    report = CoverReport(samples, seed, tol)
    for idx in range(samples):
        g, h = random_sl4(rng), random_sl4(rng)
        W, Wh = wedge_squared(g), wedge_squared(h)

        res = np.max(np.abs(W.T @ F @ W - F))
        _bump(report, "form", res)
        report.form_preserved += int(bool(res <= tol))

        det_res = abs(np.linalg.det(W) - 1.0)
        _bump(report, "det", det_res)
        report.det_one += int(bool(det_res <= tol))

        M = to_standard_form(W)
        member = is_member(SIG33, M, tol)
        _bump(report, "membership", member.form_residual)
        report.in_identity_component += int(bool(member.in_SO and is_identity_component(SIG33, M)))

        mult = np.max(np.abs(wedge_squared(g @ h) - W @ Wh))
        _bump(report, "multiplicativity", mult)
        report.multiplicative += int(bool(mult <= tol))

        # W(g) = I forces g = +/- I
        near_identity = np.max(np.abs(W - I6)) <= tol
        is_pm_identity = min(np.max(np.abs(g - np.eye(4))), np.max(np.abs(g + np.eye(4)))) <= tol
        report.kernel_ok += int(bool(near_identity == is_pm_identity))

        if len(report.counterexamples) < 5 and not (
            res <= tol and det_res <= tol and mult <= tol and member.in_SO
        ):
            report.counterexamples.append({"index": idx, "g": g.tolist()})
    return report
