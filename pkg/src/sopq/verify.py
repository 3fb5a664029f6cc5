"""Seeded randomized property suites behind ``sopq verify``.

Every suite draws from ``numpy.random.default_rng([seed, *sig])``, so the
report depends only on its arguments.
"""

from dataclasses import dataclass, field

import numpy as np

from . import cartan_polar as cp
from . import fg_abelian as fa
from . import quasisphere as qs
from . import transitivity as tr
from .errors import SopqError
from .indefinite_group import (
    GroupElement,
    Signature,
    as_signature,
    column_orthogonality_report,
    embed_first,
    is_identity_component,
    is_member,
)
from .wedge_cover import verify_cover

DEFAULT_SIGS = {
    "fibration": ((1, 1), (2, 1), (2, 2), (3, 2), (3, 3)),
    "polar": ((1, 1), (2, 1), (2, 2)),
    "homeo": ((2, 1), (3, 2)),
    "bracket": ((2, 1), (2, 2)),
}
SUITES = ("fibration", "polar", "homeo", "bracket", "abelian", "cover")


@dataclass
class SuiteReport:
    suite: str
    sig: Signature = None
    checks: int = 0
    failures: int = 0
    worst: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.failures == 0

    def record(self, passed, **residuals):
        self.checks += 1
        self.failures += 0 if passed else 1
        for key, value in residuals.items():
            self.worst[key] = max(self.worst.get(key, 0.0), float(value))

    def to_dict(self):
        return {
            "suite": self.suite,
            "sig": None if self.sig is None else [self.sig.p, self.sig.q],
            "checks": self.checks,
            "failures": self.failures,
            "worst": dict(sorted(self.worst.items())),
            "ok": self.ok,
        }


def _rng(seed, sig=None):
    key = [seed] if sig is None else [seed, sig.p, sig.q]
    return np.random.default_rng(key)


def fibration_suite(sig, samples=1000, seed=42, tol=1e-9):
    """Completion to the group, column bookkeeping and fibre maps."""
    sig = as_signature(sig)
    rng = _rng(seed, sig)
    report = SuiteReport("fibration", sig)
    inner_sig = Signature(sig.p - 1, sig.q)
    for i in range(samples):
        pt = qs.random_point(sig, rng)
        F = embed_first(sig, cp.random_group_element(inner_sig, rng, 1.0))
        try:
            res = tr.complete_to_group(sig, pt, tol, seed=i)
        except SopqError:
            report.record(False, degeneracies=report.worst.get("degeneracies", 0) + 1)
            continue
        A = res.element
        cols = column_orthogonality_report(sig, A, tol)
        report.record(
            is_member(sig, A.entries, tol).in_SO and res.column_residual <= tol and cols.matches(sig),
            membership=A.membership_residual,
            column=res.column_residual,
        )
        G = A @ F
        back = A.inverse() @ G
        col_err = float(np.max(np.abs(G.entries[:, 0] - pt.coords)))
        round_trip = float(np.max(np.abs(back.entries - F.entries)))
        report.record(col_err <= tol and round_trip <= tol, fiber_column=col_err, fiber_round_trip=round_trip)
    return report


def polar_suite(sig, samples=500, seed=42, tol=1e-8):
    sig = as_signature(sig)
    rng = _rng(seed, sig)
    report = SuiteReport("polar", sig)
    for _ in range(samples):
        K = cp.random_compact(sig, rng)
        P = cp.random_p_element(sig, rng, 2.0)
        A = GroupElement.from_matrix(sig, K @ cp.matrix_exp(P.entries))
        res = cp.polar_decompose(A, tol)
        k_err = float(np.max(np.abs(res.compact_factor.entries - K)))
        p_err = float(np.max(np.abs(res.log_symmetric.entries - P.entries)))
        report.record(
            res.reconstruction_residual <= tol
            and cp.in_max_compact(sig, res.compact_factor, tol)
            and res.log_symmetric.algebra_residual <= tol
            and is_identity_component(sig, A),
            reconstruction=res.reconstruction_residual,
            log_in_p=res.log_symmetric.algebra_residual,
            compact_recovery=k_err,
            log_recovery=p_err,
        )
    return report


def homeo_suite(sig, samples=1000, seed=42, tol=1e-12):
    """Chart/unchart round trips and surface membership of chart outputs."""
    sig = as_signature(sig)
    rng = _rng(seed, sig)
    report = SuiteReport("homeo", sig)
    for _ in range(samples):
        x = rng.standard_normal(sig.q)
        y = rng.standard_normal(sig.p)
        y /= np.linalg.norm(y)
        pt = qs.chart(sig, x, y)
        x2, y2 = qs.unchart(pt)
        err = max(float(np.max(np.abs(x2 - x), initial=0.0)), float(np.max(np.abs(y2 - y))))
        on = pt.residual <= tol
        report.record(err <= tol and on, round_trip=err, surface=pt.residual)
    return report


def bracket_suite(sig, samples=500, seed=42, tol=1e-10):
    sig = as_signature(sig)
    res = cp.bracket_relation_check(sig, samples, seed, tol)
    report = SuiteReport("bracket", sig)
    report.record(res.ok, kk=res.kk_in_k, kp=res.kp_in_p, pp=res.pp_in_k)
    report.record(res.witness is not None or sig.p == 0 or sig.q == 0)
    return report


def abelian_suite(samples=1000, seed=42):
    """SNF identities on random small matrices plus the three Z x Z/2 quotients."""
    rng = _rng(seed)
    report = SuiteReport("abelian")
    for _ in range(samples):
        m, n = (int(v) for v in rng.integers(1, 6, size=2))
        M = rng.integers(-9, 10, size=(m, n)).tolist()
        U, S, V = fa.smith_normal_form(M)
        ok = (
            fa.matmul(fa.matmul(U, M), V) == S
            and abs(fa.determinant(U)) == 1
            and abs(fa.determinant(V)) == 1
            and fa.is_smith_form(S)
        )
        report.record(ok)
    P = fa.cyclic_product_presentation(0, 2)
    for img, expected in (((2, 0), "Z/2 x Z/2"), ((1, 1), "Z/2"), ((2, 1), "Z/4")):
        report.record(str(fa.quotient_by(P, [img])) == expected)
    V4 = fa.FgAbelianGroup.from_orders(2, 2)
    report.record(not fa.is_epimorphic_image(V4, fa.FgAbelianGroup.cyclic(4)))
    return report


def cover_suite(samples=1000, seed=42, tol=1e-8):
    res = verify_cover(samples, seed, tol)
    report = SuiteReport("cover", Signature(3, 3))
    report.checks = res.samples
    report.failures = res.samples - min(
        res.form_preserved, res.det_one, res.in_identity_component, res.multiplicative, res.kernel_ok
    )
    report.worst = dict(res.worst)
    return report


def run(suite, samples=None, seed=42, tol=None, sigs=None):
    """Run one suite (or ``"all"``) and return a list of :class:`SuiteReport`."""
    names = SUITES if suite == "all" else (suite,)
    reports = []
    for name in names:
        kwargs = {"seed": seed}
        if samples is not None:
            kwargs["samples"] = samples
        if tol is not None:
            kwargs["tol"] = tol
        if name == "abelian":
            kwargs.pop("tol", None)
            reports.append(abelian_suite(**kwargs))
        elif name == "cover":
            reports.append(cover_suite(**kwargs))
        else:
            fn = {
                "fibration": fibration_suite,
                "polar": polar_suite,
                "homeo": homeo_suite,
                "bracket": bracket_suite,
            }[name]
            for sig in sigs or DEFAULT_SIGS[name]:
                reports.append(fn(sig, **kwargs))
    return reports
