"""Finitely generated abelian groups over exact integers.

A group is stored by its invariant factors ``d_1 | d_2 | ... | d_k`` with
every finite ``d_i >= 2``; infinite cyclic factors are written ``0`` and
listed last, so two groups are isomorphic exactly when their factor
tuples are equal.

>>> quotient_by(cyclic_product_presentation(0, 2), [(2, 1)])
FgAbelianGroup('Z/4')
>>> direct_product(FgAbelianGroup.cyclic(2), FgAbelianGroup.cyclic(3))
FgAbelianGroup('Z/6')
"""

import itertools
import math
from dataclasses import dataclass

from .errors import MalformedInputError, OutOfScopeError


def _int_matrix(M, cols=None):
    rows = [list(r) for r in M]
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                # numpy integers are accepted, floats are not
                if hasattr(x, "__index__"):
                    continue
                raise MalformedInputError(f"entries must be integers, got {x!r}")
    rows = [[int(x) for x in r] for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != cols:
            raise MalformedInputError(f"ragged matrix: expected {cols} columns, got {len(r)}")
    return rows, cols


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    """Exact product of integer matrices given as lists of rows."""
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def determinant(M):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M):
    """Return ``(U, S, V)`` with ``U @ M @ V == S`` exactly.

    U and V are unimodular and S is diagonal with nonnegative entries
    ``s_1 | s_2 | ...`` (zeros last).  Pivots are chosen by smallest
    nonzero absolute value.
    """
    A, n = _int_matrix(M)
    m = len(A)
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for X in (A, V):
            for row in X:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        for X in (A, U):
            X[dst] = [a + c * b for a, b in zip(X[dst], X[src])]

    def add_col(dst, src, c):
        for X in (A, V):
            for row in X:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
            leftovers = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            leftovers += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if leftovers:
                _, i, j = min(leftovers)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def is_smith_form(S):
    diag = []
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j and x != 0:
                return False
            if i == j:
                diag.append(x)
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a:
            return False
    return True


def _render_factor(d):
    return "Z" if d == 0 else f"Z/{d}"


@dataclass(frozen=True)
class FgAbelianGroup:
    """Abelian group in invariant-factor normal form (0 = infinite cyclic)."""

    invariant_factors: tuple = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        finite = [d for d in factors if d != 0]
        free = factors[len(finite):]
        if any(d == 0 for d in factors[: len(finite)]) or any(free):
            raise MalformedInputError(f"free factors must come last: {factors}")
        if any(d < 2 for d in finite):
            raise MalformedInputError(f"finite factors must be >= 2: {factors}")
        if any(b % a for a, b in zip(finite, finite[1:])):
            raise MalformedInputError(f"factors must form a divisibility chain: {factors}")
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def trivial(cls):
        return cls(())

    @classmethod
    def free(cls, rank=1):
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, order):
        """Cyclic group of the given order; ``0`` gives Z."""
        return cls.from_orders(order)

    @classmethod
    def from_orders(cls, *orders):
        """Normalize a product of cyclic groups ``Z/o_1 x Z/o_2 x ...``."""
        return cyclic_product_presentation(*orders).group()

    @classmethod
    def parse(cls, text):
        """Inverse of ``str``: ``"0"``, ``"Z x Z/2"``, ``"Z/2 x Z/2"``..."""
        text = text.strip()
        if text in ("0", "1", ""):
            return cls.trivial()
        orders = []
        for part in text.split("x"):
            part = part.strip()
            if part == "Z":
                orders.append(0)
            elif part.startswith("Z/") and part[2:].isdigit():
                orders.append(int(part[2:]))
            else:
                raise MalformedInputError(f"cannot parse group factor {part!r} in {text!r}")
        return cls.from_orders(*orders)

    @property
    def rank(self):
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self):
        return tuple(d for d in self.invariant_factors if d != 0)

    @property
    def is_trivial(self):
        return not self.invariant_factors

    @property
    def is_finite(self):
        return self.rank == 0

    @property
    def is_free(self):
        return not self.torsion

    def order(self):
        """Group order, ``math.inf`` when there is a free factor."""
        if not self.is_finite:
            return math.inf
        return math.prod(self.invariant_factors)

    def presentation(self, free_first=False):
        """Diagonal presentation, one generator per cyclic factor."""
        orders = self.invariant_factors
        if free_first:
            orders = (0,) * self.rank + self.torsion
        return cyclic_product_presentation(*orders)

    def elements(self):
        """All elements as coordinate tuples; finite groups only."""
        if not self.is_finite:
            raise OutOfScopeError("cannot enumerate an infinite group")
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def __str__(self):
        if self.is_trivial:
            return "0"
        return " x ".join(_render_factor(d) for d in (0,) * self.rank + self.torsion)

    def __repr__(self):
        return f"FgAbelianGroup({str(self)!r})"


@dataclass(frozen=True)
class Presentation:
    """``Z^n`` modulo the row span of an integer relation matrix.

    Unlike :class:`FgAbelianGroup` this keeps a fixed generator order, so
    subgroup generators can be written in the caller's coordinates.
    """

    n_generators: int
    relations: tuple = ()

    def __post_init__(self):
        rows, _ = _int_matrix(self.relations, cols=self.n_generators)
        object.__setattr__(self, "relations", tuple(tuple(r) for r in rows))

    def with_relations(self, extra):
        rows, _ = _int_matrix(extra, cols=self.n_generators)
        return Presentation(self.n_generators, self.relations + tuple(tuple(r) for r in rows))

    def group(self):
        return from_presentation(self.n_generators, self.relations)


def cyclic_product_presentation(*orders):
    """Presentation of ``Z/o_1 x ... x Z/o_k`` in exactly this generator order."""
    k = len(orders)
    rels = []
    for i, o in enumerate(orders):
        o = int(o)
        if o < 0:
            raise MalformedInputError(f"cyclic orders must be nonnegative, got {o}")
        if o:
            rels.append(tuple(o if j == i else 0 for j in range(k)))
    return Presentation(k, tuple(rels))


def from_presentation(n_generators, relations):
    """Cokernel ``Z^n / rowspan(relations)`` in invariant-factor form."""
    rows, _ = _int_matrix(relations, cols=n_generators)
    if not rows:
        return FgAbelianGroup.free(n_generators)
    _, S, _ = smith_normal_form(rows)
    diag = [S[i][i] for i in range(min(len(S), n_generators))]
    nonzero = [d for d in diag if d != 0]
    rank = n_generators - len(nonzero)
    return FgAbelianGroup(tuple(d for d in nonzero if d != 1) + (0,) * rank)


def quotient_by(G, sub_generators):
    """Quotient of ``G`` by the subgroup generated by ``sub_generators``.

    ``G`` is a :class:`Presentation` (coordinates follow its generators) or
    an :class:`FgAbelianGroup` (coordinates follow its invariant factors).
    """
    if isinstance(G, FgAbelianGroup):
        G = G.presentation()
    sub = [tuple(g) for g in sub_generators]
    if not sub:
        return G.group()
    return G.with_relations(sub).group()


def direct_product(*groups):
    orders = [d for G in groups for d in G.invariant_factors]
    return FgAbelianGroup.from_orders(*orders)


def is_isomorphic(G, H):
    return G.invariant_factors == H.invariant_factors


def _check_finite(G, bound, name):
    if not G.is_finite:
        raise OutOfScopeError(f"{name} must be finite, got {G}")
    if G.order() > bound:
        raise OutOfScopeError(f"|{name}| = {G.order()} exceeds bound {bound}")


def is_epimorphic_image(G, H, bound=64):
    """Is there a surjective homomorphism ``G -> H``?  Both groups finite.

    Enumerates images of the generators of ``G`` (each must be killed by
    the generator's order), depth first, remembering subgroups already
    shown to be dead ends.
    """
    _check_finite(G, bound, "G")
    _check_finite(H, bound, "H")
    target = H.order()
    if G.order() % target:
        return False
    mods = H.invariant_factors
    gens = G.invariant_factors
    elements = H.elements()

    def add(x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, mods))

    def scale(c, x):
        return tuple((c * a) % m for a, m in zip(x, mods))

    zero = tuple(0 for _ in mods)
    candidates = [[h for h in elements if scale(d, h) == zero] for d in gens]
    failed = set()

    def extend(span, h):
        multiples = [zero]
        x = h
        while x != zero:
            multiples.append(x)
            x = add(x, h)
        return frozenset(add(s, m) for s in span for m in multiples)

    def search(i, span):
        if len(span) == target:
            return True
        if i == len(gens):
            return False
        if len(span) * math.prod(gens[i:]) < target or (i, span) in failed:
            return False
        seen = set()
        for h in candidates[i]:
            nxt = extend(span, h)
            if nxt in seen:
                continue
            seen.add(nxt)
            if search(i + 1, nxt):
                return True
        failed.add((i, span))
        return False

    return search(0, frozenset([zero]))
