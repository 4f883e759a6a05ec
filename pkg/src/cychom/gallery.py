"""Worked examples with their expected values.

Every expected value carries a ``source`` tag:

* ``known``: a standard result quoted in the ``pointer`` topic;
* ``trivial``: immediate from the definitions;
* ``derived``: checked against an independent oracle that is described in
  the ``oracle`` field and in the README.
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction

from cychom import chern, complexes, constructions as cons
from cychom.errors import UnknownEntry
from cychom.fields import QQ, RationalFunctionField
from cychom.io import build, load_cocycle, load_matrix

# size cap used for the degree-3 duality checks on dim-9 algebras (C_4 has 9^5 entries)
DUALITY_SIZE_CAP = 60000


@dataclass
class Check:
    name: str
    expected: object
    source: str
    run: object
    oracle: str = ""


@dataclass
class GalleryEntry:
    name: str
    spec: dict
    pointer: str
    checks: list = field(default_factory=list)

    def algebra(self):
        return build(self.spec)

    def run(self, size_cap=None, only=None):
        A = self.algebra()
        results = []
        for c in self.checks:
            if only is not None and c.name not in only:
                continue
            t0 = time.perf_counter()
            try:
                got = c.run(A, size_cap)
                error = None
            except Exception as exc:  # a crash is a failed check, not a crashed gallery
                got, error = None, "%s: %s" % (type(exc).__name__, exc)
            out = {"entry": self.name, "check": c.name, "expected": _plain(c.expected),
                   "got": _plain(got), "passed": error is None and got == c.expected,
                   "source": c.source, "elapsed_ms": int(round((time.perf_counter() - t0) * 1000))}
            if c.oracle:
                out["oracle"] = c.oracle
            if error:
                out["error"] = error
            results.append(out)
        return results


def _plain(x):
    if isinstance(x, Fraction):
        return QQ.format(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


# ----------------------------------------------------------------------
# check builders


def hh(n):
    return lambda A, cap: complexes.hochschild_homology(A, n, cap).as_list()


def hc(n, method="all"):
    return lambda A, cap: complexes.cyclic_homology(A, n, method, cap).as_list()


def hp(parity, window):
    return lambda A, cap: complexes.periodic_cyclic(A, parity, window, cap).value


def identities(n):
    return lambda A, cap: complexes.audit_passed(complexes.operator_identity_audit(A, n, cap))


def sbi(n):
    return lambda A, cap: bool(complexes.sbi_audit(A, n, cap))


def duality(n):
    """dim H^k(A, A*) for k <= n; compared against the HH column of the entry."""
    def run(A, cap):
        cap = max(cap or 0, DUALITY_SIZE_CAP)
        return complexes.hochschild_cohomology(A, "A_dual", n, cap).as_list()
    return run


def morita(n):
    """Tr and i_* between the ground field and the entry M_k(F)."""
    def run(A, cap):
        return bool(complexes.morita_audit(A.matrix_size, cons.truncated_poly(A.field, 1), n, cap))
    return run


def _format(A, x):
    return A.field.format(x)


def pair_trace(trace, matrix_spec):
    def run(A, cap):
        phi = chern.validate_cyclic_cocycle(chern.trace_cochain(A.traces[trace]))
        return _format(A, chern.pair_even(phi, load_matrix(A, matrix_spec)))
    return run


def _conjugation(A, cap):
    F = RationalFunctionField(QQ, "t")
    M = cons.matrix_algebra(F, 2)
    t = F.gen()
    e = chern.AlgMatrix.scalar(M.basis("E:1,1"))
    e.certify_idempotent()
    u = chern.AlgMatrix.scalar(M.one() + M.basis("E:1,2") * t)
    u.certify_invertible()
    phi = chern.validate_cyclic_cocycle(chern.trace_cochain(M.traces["tr"]))
    v = chern.conjugation_invariance_test(phi, e, u)
    return v.details["value"] if v.details["constant"] else "not constant: %s" % v.details["value"]


def _inner(A, cap):
    u = A.one() + A.basis("E:1,2")
    return bool(complexes.inner_action_audit(A, u, A.basis("E:1,2") + A.basis("E:2,1"), 2, cap))


def _cube(A, cap):
    x = A.basis("a:x")
    x2 = x * x
    return x2 == A.basis("m:m") and not (x2 * x)


def _hh_equal_to(spec, n):
    return lambda A, cap: complexes.hochschild_homology(build(spec), n, cap).as_list()


def _torus_cocycle(c, window):
    return {"kind": "lie", "algebra": {"construct": "polynomial_torus"}, "derivations": ["X1", "X2"],
            "c": c, "window": window}


def _phi1_pair(A, cap):
    phi = load_cocycle(_torus_cocycle({"0": "1"}, 2))
    u = load_matrix(phi.carrier, {"entries": [[{"(1,0)": "1"}]], "witness": [[{"(-1,0)": "1"}]]})
    return _format(phi.carrier, chern.pair_odd(phi, u))


def _phi2_verified(A, cap):
    phi = load_cocycle(_torus_cocycle({"0,1": "1"}, 3))
    return phi.verified


def _phi0_pair(A, cap):
    phi = chern.validate_cyclic_cocycle(chern.trace_cochain(A.traces["tau"]), cons.torus_window(2))
    return _format(A, chern.pair_even(phi, chern.AlgMatrix.identity(A, 1).certify_idempotent()))


def _winding(A, cap):
    phi = load_cocycle({"kind": "group_cocycle", "algebra": {"construct": "group", "lattice": 1},
                        "degree": 1, "linear": ["1"]})
    u = load_matrix(phi.carrier, {"entries": [[{"g:(1)": "1"}]], "witness": [[{"g:(-1)": "1"}]]})
    return _format(phi.carrier, chern.pair_odd(phi, u))


def _idempotent(builtin):
    def run(A, cap):
        e = load_matrix(A, {"builtin": builtin})
        return e.idempotent
    return run


# ----------------------------------------------------------------------
# entries


HOCHSCHILD_DUAL = "2-periodic bimodule resolution of k[x]/(x^m): maps x(x)1 - 1(x)x and sum x^i (x) x^(m-1-i)"
MIXED = "normalized mixed complex (reduced chains with b = 0 and B nonzero only in low degree)"

EXTENSION_SPEC = {
    "construct": "extension",
    "base": {"construct": "truncated_poly", "m": 2},
    "module": {"labels": ["m"]},
    "cocycle": [{"a": "x", "b": "x", "m": "m", "c": "1"}],
}

ENTRIES = [
    GalleryEntry("rationals", {"construct": "truncated_poly", "m": 1},
                 "cyclic homology of the ground field", [
                     Check("HC_0..6 (three methods)", [1, 0, 1, 0, 1, 0, 1], "known", hc(6)),
                     Check("HH_0..3", [1, 0, 0, 0], "trivial", hh(3)),
                     Check("operator identities n<=4", True, "known", identities(4)),
                     Check("SBI exact n<=3", True, "known", sbi(3)),
                     Check("HP even (window 6)", 1, "known", hp("even", 6)),
                     Check("H^n(A,A*) n<=3", [1, 0, 0, 0], "known", duality(3)),
                 ]),
    GalleryEntry("matrix2", {"construct": "matrix", "n": 2, "field": "Q"},
                 "matrix algebras: Morita invariance of HH and HC", [
                     Check("HH_0..3", [1, 0, 0, 0], "known", hh(3)),
                     Check("HC_0..4 (three methods)", [1, 0, 1, 0, 1], "known", hc(4)),
                     Check("operator identities n<=4", True, "known", identities(4)),
                     Check("SBI exact n<=3", True, "known", sbi(3)),
                     Check("Morita Q -> M_2(Q), n<=2", True, "known", morita(2)),
                     Check("inner automorphism and derivation act trivially n<=2", True, "known", _inner),
                     Check("HP odd (window 5)", 0, "known", hp("odd", 5)),
                     Check("H^n(A,A*) n<=3", [1, 0, 0, 0], "known", duality(3)),
                     Check("<tr, E11>", "1", "derived", pair_trace("tr", {"entries": [[{"E:1,1": "1"}]]}),
                           "tr(E11) = 1 by hand"),
                     Check("<tr, u_t E11 u_t^-1> over Q(t)", "1", "known", _conjugation),
                 ]),
    GalleryEntry("dual_numbers", {"construct": "truncated_poly", "m": 2},
                 "dual numbers k[x]/(x^2)", [
                     Check("HH_0..4", [2, 1, 1, 1, 1], "derived", hh(4), HOCHSCHILD_DUAL),
                     Check("HC_0..4 (three methods)", [2, 0, 2, 0, 2], "derived", hc(4), MIXED),
                     Check("operator identities n<=4", True, "known", identities(4)),
                     Check("SBI exact n<=3", True, "known", sbi(3)),
                     Check("HP even (window 6)", 1, "derived", hp("even", 6),
                           "explicit S-rank on the total complex"),
                     Check("H^n(A,A*) n<=3", [2, 1, 1, 1], "derived", duality(3), HOCHSCHILD_DUAL),
                 ]),
    GalleryEntry("groupZ2", {"construct": "group", "cyclic": 2},
                 "group algebra of Z/2, isomorphic to Q x Q", [
                     Check("HH_0..3", [2, 0, 0, 0], "derived", hh(3), "Q[Z/2] = Q x Q and additivity"),
                     Check("HC_0..4 (three methods)", [2, 0, 2, 0, 2], "derived", hc(4),
                           "Q[Z/2] = Q x Q and additivity"),
                     Check("operator identities n<=4", True, "known", identities(4)),
                     Check("SBI exact n<=3", True, "known", sbi(3)),
                     Check("H^n(A,A*) n<=3", [2, 0, 0, 0], "derived", duality(3), "Q[Z/2] = Q x Q"),
                     Check("<delta_e, (1+g)/2>", "1/2", "derived",
                           pair_trace("delta_e", {"entries": [[{"g:0": "1/2", "g:1": "1/2"}]]}),
                           "delta_e of (1+g)/2 is 1/2 by hand"),
                 ]),
    GalleryEntry("groupS3", {"construct": "group", "symmetric": 3},
                 "group algebra of S_3: HH_0 counts conjugacy classes", [
                     Check("HH_0..2", [3, 0, 0], "known", hh(2)),
                     Check("operator identities n<=3", True, "known", identities(3)),
                     Check("H^n(A,A*) n<=3", [3, 0, 0, 0], "known", duality(3)),
                 ]),
    GalleryEntry("pairs_groupoid_3", {"construct": "groupoid", "pairs": 3},
                 "pair groupoid on three objects: its algebra is M_3", [
                     Check("dimension", 9, "trivial", lambda A, cap: A.dim),
                     Check("HH_0", [1], "known", hh(0)),
                     Check("HC_0..2 (three methods)", [1, 0, 1], "known", hc(2)),
                     Check("operator identities n<=3", True, "known", identities(3)),
                     Check("H^n(A,A*) n<=3", [1, 0, 0, 0], "known", duality(3)),
                 ]),
    GalleryEntry("transitive_groupoid_2_Z2",
                 {"construct": "groupoid", "transitive": {"objects": 2, "group": {"cyclic": 2}}},
                 "connected groupoid with isotropy Z/2: Morita equivalent to Q[Z/2]", [
                     Check("dimension", 8, "trivial", lambda A, cap: A.dim),
                     Check("HH_0..1", [2, 0], "derived", hh(1), "equals HH of Q[Z/2] (x) M_2"),
                     Check("HH_0..1 of Q[Z/2] (x) M_2", [2, 0], "derived",
                           _hh_equal_to({"construct": "tensor", "factors": [
                               {"construct": "group", "cyclic": 2}, {"construct": "matrix", "n": 2}]}, 1),
                           "Q[Z/2] = Q x Q is separable, and M_2 does not change HH"),
                     Check("operator identities n<=3", True, "known", identities(3)),
                     Check("H^n(A,A*) n<=3", [2, 0, 0, 0], "derived", duality(3), "Q[Z/2] (x) M_2"),
                 ]),
    GalleryEntry("weyl_torus_1_3", {"construct": "weyl_torus", "p": 1, "q": 3},
                 "rational rotation algebra, finitised by U^3 = V^3 = 1", [
                     Check("<tau, (1+U+U^2)/3>", "1/3", "derived",
                           pair_trace("tau", {"builtin": "weyl_idempotent"}),
                           "tau picks the coefficient of 1, which is 1/3"),
                     Check("HH_0..2", [1, 0, 0], "derived", hh(2), "central simple of dimension 9"),
                     Check("operator identities n<=3", True, "known", identities(3)),
                     Check("H^n(A,A*) n<=3", [1, 0, 0, 0], "derived", duality(3), "central simple"),
                 ]),
    GalleryEntry("extension_x3", EXTENSION_SPEC,
                 "square-zero extension of the dual numbers by a 2-cocycle", [
                     Check("lift x satisfies x^2 = m, x^3 = 0", True, "derived", _cube,
                           "hand check of the lift (x, 0)"),
                     Check("HH_0..3", [3, 2, 2, 2], "derived", hh(3), HOCHSCHILD_DUAL + ", m = 3"),
                     Check("HH_0..3 of Q[x]/(x^3)", [3, 2, 2, 2], "derived",
                           _hh_equal_to({"construct": "truncated_poly", "m": 3}, 3), HOCHSCHILD_DUAL),
                     Check("operator identities n<=4", True, "known", identities(4)),
                     Check("H^n(A,A*) n<=3", [3, 2, 2, 2], "derived", duality(3), HOCHSCHILD_DUAL),
                 ]),
    GalleryEntry("polynomial_torus", {"construct": "polynomial_torus"},
                 "noncommutative torus over Q(t): the cocycles phi_0, phi_1, phi_2", [
                     Check("<phi_0, 1>", "1", "trivial", _phi0_pair),
                     Check("<phi_1, U>", "1", "derived", _phi1_pair,
                           "only (U^-1, U) survives and X_1(U) = U"),
                     Check("phi_2 cyclic-verified on |m|,|n| <= 3", True, "known", _phi2_verified),
                 ]),
    GalleryEntry("integers", {"construct": "group", "lattice": 1},
                 "group algebra of Z with the winding cocycle", [
                     Check("<winding, U>", "1", "derived", _winding, "c(U) = 1 on the pair (U^-1, U)"),
                 ]),
    GalleryEntry("hopf_sphere", {"construct": "rewriting", "preset": "hopf_sphere"},
                 "Hopf fibration projection e = (1 + F)/2 over Q(zeta_4)", [
                     Check("e^2 = e", True, "known", _idempotent("hopf_idempotent")),
                 ]),
    GalleryEntry("podles_sphere", {"construct": "rewriting", "preset": "podles_sphere"},
                 "quantum sphere projection e_q over Q(q)", [
                     Check("e_q^2 = e_q", True, "known", _idempotent("podles_idempotent")),
                 ]),
]

GALLERY = {e.name: e for e in ENTRIES}

# finite-dimensional entries, which is where homology, audits and duality run
FINITE = ["rationals", "matrix2", "dual_numbers", "groupZ2", "groupS3", "pairs_groupoid_3",
          "transitive_groupoid_2_Z2", "weyl_torus_1_3", "extension_x3"]


def get(name):
    try:
        return GALLERY[name]
    except KeyError:
        raise UnknownEntry("no gallery entry %r (have %s)" % (name, ", ".join(sorted(GALLERY))))


def listing():
    return [{"name": e.name, "pointer": e.pointer, "checks": [c.name for c in e.checks]}
            for e in sorted(ENTRIES, key=lambda e: e.name)]


def run_entry(name, size_cap=None):
    return get(name).run(size_cap)
