"""Quasi-spheres ``X(p,q)^{+/-} = {x in R^(p+q) : Q(x) = +/-1}``.

``X^+(p,q)`` fibres over ``R^q`` by forgetting the first ``p`` coordinates;
the fibre over ``z`` is a round sphere ``S^(p-1)`` of radius
``sqrt(1 + |z|^2)``.  :func:`chart` and :func:`unchart` make the resulting
homeomorphism ``R^q x S^(p-1) = X^+(p,q)`` explicit.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSignatureError, MalformedInputError, OffSurfaceError, OutOfScopeError
from .fg_abelian import FgAbelianGroup
from .indefinite_group import (
    DEFAULT_TOL,
    GroupElement,
    Signature,
    _vector,
    as_signature,
    quadratic_form,
)


@dataclass(frozen=True)
class QuasiSpherePoint:
    sig: Signature
    sign: int
    coords: np.ndarray = field(repr=False)
    residual: float = 0.0

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    def to_dict(self):
        return {"sig": [self.sig.p, self.sig.q], "sign": self.sign, "coords": self.coords.tolist()}

    @classmethod
    def from_dict(cls, data, tol=DEFAULT_TOL):
        try:
            return on_sphere(data["sig"], data.get("sign", 1), data["coords"], tol)
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedInputError("expected an object with 'sig', 'sign', 'coords'") from exc


def on_sphere(sig, sign, x, tol=DEFAULT_TOL):
    """Validate ``x`` as a point of ``X^sign(p,q)``."""
    sig = as_signature(sig)
    if sign not in (1, -1):
        raise MalformedInputError(f"sign must be +1 or -1, got {sign!r}")
    x = _vector(x, sig.n)
    if (sign == 1 and sig.p == 0) or (sign == -1 and sig.q == 0):
        raise OffSurfaceError(f"X^{'+' if sign == 1 else '-'}{sig} is empty")
    residual = abs(quadratic_form(sig, x) - sign)
    if residual > tol:
        raise OffSurfaceError(
            f"Q(x) = {quadratic_form(sig, x):.6g}, expected {sign}", residual=residual
        )
    return QuasiSpherePoint(sig, int(sign), x, residual)


def minus_to_plus(pt):
    """``X^-(p,q) -> X^+(q,p)`` by swapping the coordinate blocks (and back)."""
    sig = pt.sig
    swapped = np.concatenate([pt.coords[sig.p :], pt.coords[: sig.p]])
    return QuasiSpherePoint(sig.swap(), -pt.sign, swapped, pt.residual)


def _require_plus(pt):
    if pt.sign != 1:
        raise MalformedInputError("operation is defined on X^+ only")


def project(pt):
    """Bundle projection ``X^+(p,q) -> R^q``."""
    _require_plus(pt)
    return pt.coords[pt.sig.p :].copy()


def fiber_radius(z):
    z = np.asarray(z, dtype=float)
    return float(np.sqrt(1.0 + z @ z))


def chart(sig, x, y, tol=DEFAULT_TOL):
    """``(x, y) -> (sqrt(1 + x.x) y, x)`` for ``x`` in R^q and unit ``y`` in R^p."""
    sig = as_signature(sig)
    if sig.p == 0:
        raise InvalidSignatureError("X^+ with p = 0 is empty; no sphere factor")
    x = _vector(x, sig.q, "x")
    y = _vector(y, sig.p, "y")
    if abs(y @ y - 1.0) > tol:
        raise MalformedInputError(f"y must be a unit vector, |y|^2 = {y @ y:.6g}")
    coords = np.concatenate([fiber_radius(x) * y, x])
    return QuasiSpherePoint(sig, 1, coords, abs(quadratic_form(sig, coords) - 1.0))


def unchart(pt):
    _require_plus(pt)
    if pt.sig.p == 0:
        raise InvalidSignatureError("X^+ with p = 0 is empty")
    x = project(pt)
    y = pt.coords[: pt.sig.p] / fiber_radius(x)
    return x, y


def act(A, pt):
    """Linear action ``x -> A x``; preserves both the signature and the sign."""
    if not isinstance(A, GroupElement):
        raise MalformedInputError("act expects a GroupElement")
    if A.sig != pt.sig:
        raise MalformedInputError(f"signature mismatch: {A.sig} vs {pt.sig}")
    coords = A.entries @ pt.coords
    return QuasiSpherePoint(pt.sig, pt.sign, coords, abs(quadratic_form(pt.sig, coords) - pt.sign))


def random_point(sig, rng, scale=1.0):
    """Sample ``X^+(p,q)`` through the chart with Gaussian base point."""
    sig = as_signature(sig)
    x = scale * rng.standard_normal(sig.q)
    y = rng.standard_normal(sig.p)
    y /= np.linalg.norm(y)
    return chart(sig, x, y)


@dataclass(frozen=True)
class HomotopySetOrGroup:
    """A pointed set (kind ``"set"``, value = cardinality) or a group."""

    kind: str
    value: object

    @classmethod
    def set_of(cls, cardinality):
        return cls("set", int(cardinality))

    @classmethod
    def group(cls, G):
        return cls("group", G)

    @property
    def is_trivial(self):
        return self.value == 1 if self.kind == "set" else self.value.is_trivial

    def __str__(self):
        if self.kind == "set":
            return f"{self.value} point{'s' if self.value != 1 else ''}"
        return str(self.value)


def sphere_pi_k(n, k):
    """``pi_k(S^n)`` for ``k <= 2``: zero below the dimension, Z at it.

    ``S^0`` is two points; every other sphere is path connected.
    """
    if k not in (0, 1, 2):
        raise OutOfScopeError(f"only k in {{0, 1, 2}} is supported, got {k}")
    if n < 0:
        raise InvalidSignatureError("S^-1 is empty")
    if k == 0:
        return HomotopySetOrGroup.set_of(2 if n == 0 else 1)
    if k == n:
        return HomotopySetOrGroup.group(FgAbelianGroup.free(1))
    # k < n, or k > n with n <= 1 (S^0 discrete, S^1 aspherical)
    return HomotopySetOrGroup.group(FgAbelianGroup.trivial())


def pi_k(sig, k):
    """``pi_k(X^+(p,q))`` for ``k`` in 0, 1, 2.

    The base ``R^q`` is contractible, so the exact sequence of the
    projection identifies every term with that of the fibre ``S^(p-1)``.
    """
    sig = as_signature(sig)
    if sig.p == 0:
        raise InvalidSignatureError(f"X^+{sig} is empty")
    return sphere_pi_k(sig.p - 1, k)
