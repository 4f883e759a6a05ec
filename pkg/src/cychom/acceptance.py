"""The acceptance suite: thirteen exact checks, each pass or fail.

``run_all`` is what ``cychom gallery --all`` executes.  Every criterion
returns a dict with ``passed``, the values it looked at and the time it
took; a time budget, where one is stated, is part of passing.
"""
import random
import time
from fractions import Fraction

from cychom import chern, complexes, oracles
from cychom import constructions as cons
from cychom.algebra import Bimodule, Element, dual_bimodule, regular_bimodule
from cychom.errors import NotACocycle
from cychom.fields import QQ
from cychom.io import load_cocycle
from cychom.gallery import DUALITY_SIZE_CAP, FINITE, GALLERY
from cychom.linalg import SparseMatrix


def _hh(A, n, cap=None):
    return complexes.hochschild_homology(A, n, cap).as_list()


def _hc(A, n, method="all"):
    return complexes.cyclic_homology(A, n, method).as_list()


def _algebra(name):
    return GALLERY[name].algebra()


# ----------------------------------------------------------------------


def c1_rationals():
    A = _algebra("rationals")
    got = _hc(A, 6)
    return {"HC": got, "passed": got == [1, 0, 1, 0, 1, 0, 1]}, 1.0


def c2_matrix2():
    M = _algebra("matrix2")
    Q = _algebra("rationals")
    hh, hc = _hh(M, 3), _hc(M, 4)
    ok = hh == [1, 0, 0, 0] and hc == [1, 0, 1, 0, 1] and hh == _hh(Q, 3) and hc == _hc(Q, 4)
    return {"HH": hh, "HC": hc, "passed": ok}, 60.0


def c3_dual_numbers():
    A = _algebra("dual_numbers")
    hh, hc = _hh(A, 4), _hc(A, 4)
    o_hh, o_hc = oracles.truncated_poly_hh(2, 4), oracles.dual_numbers_mixed_hc(4)
    ok = hh == o_hh == [2, 1, 1, 1, 1] and hc == o_hc == [2, 0, 2, 0, 2]
    return {"HH": hh, "HC": hc, "resolution oracle": o_hh, "mixed complex oracle": o_hc, "passed": ok}, 60.0


def c4_groupZ2():
    A = _algebra("groupZ2")
    Q = _algebra("rationals")
    QxQ = cons.direct_sum(Q, Q)
    hh, hc = _hh(A, 3), _hc(A, 4)
    add_hh = [2 * x for x in _hh(Q, 3)]
    add_hc = [2 * x for x in _hc(Q, 4)]
    ok = (hh == [2, 0, 0, 0] and hc == [2, 0, 2, 0, 2] and hh == add_hh == _hh(QxQ, 3)
          and hc == add_hc == _hc(QxQ, 4))
    return {"HH": hh, "HC": hc, "additivity": {"HH": add_hh, "HC": add_hc}, "passed": ok}, 60.0


def c5_groupS3():
    A = _algebra("groupS3")
    classes = len(A.group.conjugacy_classes())
    hh = _hh(A, 3)
    ok = hh[:3] == [3, 0, 0] and hh[0] == classes
    return {"HH": hh, "conjugacy classes": classes, "passed": ok}, 300.0


def c6_identities():
    out = {}
    ok = True
    for name in FINITE:
        A = _algebra(name)
        n = 3 if A.dim >= 6 else 4
        entries = complexes.operator_identity_audit(A, n)
        good = complexes.audit_passed(entries)
        out[name] = {"degree": n, "passed": good}
        if not good:
            out[name]["first_failure"] = complexes.first_failure(entries)
        ok = ok and good
    out["passed"] = ok
    return out, None


def c7_sbi():
    out = {}
    for name in ["rationals", "matrix2", "dual_numbers", "groupZ2"]:
        out[name] = bool(complexes.sbi_audit(_algebra(name), 3))
    out["passed"] = all(out.values())
    return out, None


def c8_duality():
    out = {}
    ok = True
    for name in FINITE:
        A = _algebra(name)
        hom = _hh(A, 3, DUALITY_SIZE_CAP)
        coh = complexes.hochschild_cohomology(A, "A_dual", 3, DUALITY_SIZE_CAP).as_list()
        out[name] = {"HH": hom, "H(A,A*)": coh}
        ok = ok and hom == coh
    out["passed"] = ok
    return out, None


def c9_pairings():
    checks = {
        "weyl_torus_1_3": "<tau, (1+U+U^2)/3>",
        "polynomial_torus": "<phi_1, U>",
        "integers": "<winding, U>",
        "matrix2": "<tr, E11>",
    }
    expected = {"weyl_torus_1_3": "1/3", "polynomial_torus": "1", "integers": "1", "matrix2": "1"}
    out = {}
    for entry, check in checks.items():
        res = GALLERY[entry].run(only={check})[0]
        out[entry] = res["got"]
    out["passed"] = out == expected
    return out, None


def c10_conjugation():
    res = GALLERY["matrix2"].run(only={"<tr, u_t E11 u_t^-1> over Q(t)"})[0]
    return {"value": res["got"], "passed": res["got"] == "1"}, None


def c11_idempotents():
    hopf = GALLERY["hopf_sphere"].run()[0]
    podles = GALLERY["podles_sphere"].run()[0]
    out = {"hopf e^2 = e": hopf["got"], "podles e_q^2 = e_q": podles["got"]}
    out["passed"] = hopf["got"] is True and podles["got"] is True
    return out, None


def c12_groupoids():
    P = _algebra("pairs_groupoid_3")
    T = _algebra("transitive_groupoid_2_Z2")
    Z2M2 = cons.tensor_product(_algebra("groupZ2"), _algebra("matrix2"))
    p_hh0, p_hc = _hh(P, 0)[0], _hc(P, 2)
    t_hh0, z_hh0 = _hh(T, 0)[0], _hh(Z2M2, 0)[0]
    ok = P.dim == 9 and p_hh0 == 1 and p_hc == [1, 0, 1] and t_hh0 == 2 == z_hh0
    return {"pairs dim": P.dim, "pairs HH_0": p_hh0, "pairs HC": p_hc, "transitive HH_0": t_hh0,
            "Q[Z/2](x)M_2 HH_0": z_hh0, "passed": ok}, None


def c13_properties(trials=100, seed=20240611):
    rng = random.Random(seed)
    out = {"coboundary annihilation": coboundary_annihilation(rng, trials),
           "MvN invariance": mvn_invariance(rng, 20),
           "extension vs delta f": extension_agreement(rng, trials)}
    out["passed"] = all(v["passed"] for v in out.values())
    return out, None


# ----------------------------------------------------------------------
# property helpers (also used by the tests)


def random_cyclic_cochain(A, n, rng, bound=3):
    """psi = N^T w for a random integer cochain w; cyclic by construction."""
    N = complexes.cyclic_operator(A, n, "N", cochain=True)
    w = {i: rng.randint(-bound, bound) for i in range(complexes.chain_dim(A, n))}
    psi = N.apply({i: A.field(v) for i, v in w.items() if v})
    return chern.dense_cochain(A, n, psi, name="psi")


def is_cyclic(psi):
    A, n = psi.carrier, psi.degree
    return not complexes.cyclic_operator(A, n, "one_minus_lambda", cochain=True).apply(psi.dense_vector())


def random_rank_one_idempotent(M2, rng):
    """v w^T / (w . v) in M_2(Q)."""
    while True:
        v = [rng.randint(-3, 3) for _ in range(2)]
        w = [rng.randint(-3, 3) for _ in range(2)]
        s = v[0] * w[0] + v[1] * w[1]
        if s:
            break
    return Element(M2, {"E:%d,%d" % (i + 1, j + 1): Fraction(v[i] * w[j], s)
                        for i in range(2) for j in range(2) if v[i] * w[j]})


def _elementary(A, k, rng, support):
    """A random product of elementary matrices over A, with its inverse."""
    g = chern.AlgMatrix.identity(A, k)
    ginv = chern.AlgMatrix.identity(A, k)
    for _ in range(2):
        i, j = rng.sample(range(k), 2)
        a = Element(A, {l: rng.randint(-2, 2) for l in rng.sample(support, min(2, len(support)))})
        E = chern.AlgMatrix.identity(A, k)
        Ei = chern.AlgMatrix.identity(A, k)
        E.entries[i][j] = a
        Ei.entries[i][j] = -a
        g, ginv = g * E, Ei * ginv
    return g, ginv


def coboundary_annihilation(rng, trials):
    """(b psi)(e, ..., e) = 0 for cyclic psi and idempotent e."""
    count, failures = 0, []
    M2 = cons.matrix_algebra(QQ, 2)
    dual = cons.truncated_poly(QQ, 2)
    M2dual = cons.matrices_over(dual, 2)
    for t in range(trials):
        n = t % 3
        psi = random_cyclic_cochain(M2, n, rng)
        e = random_rank_one_idempotent(M2, rng)
        val = chern.coboundary(psi)(*([e] * (n + 2)))
        count += 1
        if val != 0 or not is_cyclic(psi):
            failures.append(("M_2", n))
    for t in range(trials):
        n = t % 2
        psi = random_cyclic_cochain(dual, n, rng)
        # over the dual numbers itself only 0 and 1 are idempotent
        val = chern.coboundary(psi)(*([dual.one()] * (n + 2)))
        # through M_2: tr # psi evaluated on a conjugate of E11
        g, ginv = _elementary(dual, 2, rng, ["1", "x"])
        e = chern.AlgMatrix(dual, [[dual.one(), dual.zero()], [dual.zero(), dual.zero()]])
        f = g * e * ginv
        x = f.as_element(M2dual)
        cup = chern.trace_cup(psi, M2dual, 2)
        val2 = chern.coboundary(cup)(*([x] * (n + 2)))
        count += 1
        if val != 0 or val2 != 0 or x * x != x or not is_cyclic(psi):
            failures.append(("dual numbers", n))
    return {"trials": count, "failures": failures[:5], "passed": count >= 2 * trials and not failures}


def _mvn_pairs(A, e, rng, support, k=2):
    g, ginv = _elementary(A, k, rng, support)
    f = g * e * ginv
    u, v = g * e, e * ginv
    ok = bool(chern.mvn_check(f, e, u, v))
    f.certify_idempotent()
    return f, ok


def _pad(A, x):
    """diag(x, 0) as a 2 x 2 AlgMatrix."""
    return chern.AlgMatrix(A, [[x, A.zero()], [A.zero(), A.zero()]]).certify_idempotent()


def mvn_invariance(rng, rounds):
    """MvN-equivalent idempotents pair equally with every even gallery cocycle;
    conjugate units pair equally with the odd ones."""
    cases = []
    M2 = _algebra("matrix2")
    cases.append(("matrix2 tr", chern.trace_cochain(M2.traces["tr"]), None, _pad(M2, M2.basis("E:1,1")),
                  M2.labels))
    Z2 = _algebra("groupZ2")
    half = Fraction(1, 2)
    cases.append(("groupZ2 delta_e", chern.trace_cochain(Z2.traces["delta_e"]), None,
                  _pad(Z2, Element(Z2, {"g:0": half, "g:1": half})), Z2.labels))
    W = _algebra("weyl_torus_1_3")
    third = W.field.one / 3
    cases.append(("weyl tau", chern.trace_cochain(W.traces["tau"]), None,
                  _pad(W, Element(W, {"U^%dV^0" % j: third for j in range(3)})), ["U^1V^0", "U^0V^1"]))
    T = _algebra("polynomial_torus")
    win = cons.torus_window(2)
    phi0 = chern.trace_cochain(T.traces["tau"])
    phi2 = chern.lie_action_to_cyclic(T.traces["tau"], [T.derivations["X1"], T.derivations["X2"]],
                                      {(0, 1): 1}, win)
    chern.validate_cyclic_cocycle(phi2, win)
    e_t = chern.AlgMatrix(T, [[T.one(), T.zero()], [T.zero(), T.zero()]]).certify_idempotent()
    cases.append(("torus phi_0", phi0, win, e_t, [(1, 0), (0, 1), (-1, 1)]))
    cases.append(("torus phi_2", phi2, win, e_t, [(1, 0), (0, 1), (-1, 1)]))
    out = {}
    ok = True
    for name, phi, window, e, support in cases:
        if not phi.verified:
            chern.validate_cyclic_cocycle(phi, window)
        base = chern.pair_even(phi, e)
        good = True
        for _ in range(rounds):
            f, mvn_ok = _mvn_pairs(phi.carrier, e, rng, support)
            good = good and mvn_ok and chern.pair_even(phi, f) == base
        out[name] = {"value": phi.carrier.field.format(base), "passed": good}
        ok = ok and good
    # odd cocycles: conjugating a unit does not change the pairing
    phi1 = chern.validate_cyclic_cocycle(
        chern.lie_action_to_cyclic(T.traces["tau"], [T.derivations["X1"]], {(0,): 1}, win), win)
    wind = load_cocycle({"kind": "group_cocycle", "algebra": {"construct": "group", "lattice": 1},
                         "degree": 1, "linear": ["1"]})
    for name, phi, unit, inv, support in [
            ("torus phi_1", phi1, (1, 0), (-1, 0), [(1, 0), (0, 1)]),
            ("winding", wind, (1,), (-1,), [(1,), (-1,)])]:
        A = phi.carrier
        u = chern.AlgMatrix(A, [[A.basis(unit), A.zero()], [A.zero(), A.one()]])
        u.certify_invertible(chern.AlgMatrix(A, [[A.basis(inv), A.zero()], [A.zero(), A.one()]]))
        base = chern.pair_odd(phi, u)
        good = True
        for _ in range(rounds):
            g, ginv = _elementary(A, 2, rng, support)
            c = g * u * ginv
            c.certify_invertible(g * u.witness * ginv)
            good = good and chern.pair_odd(phi, c) == base
        out[name] = {"value": A.field.format(base), "passed": good}
        ok = ok and good
    out["passed"] = ok
    return out


def _augmentation_module(A):
    """A one-dimensional bimodule on which only the unit acts (nonzero)."""
    F = A.field
    zero = SparseMatrix.zeros(1, 1, F)
    one = SparseMatrix.identity(1, F)
    acts = {l: (one if l == "1" else zero) for l in A.labels}
    return Bimodule(A, ["m"], acts, dict(acts), name="k").validate()


def _delta_1(A, M, g):
    """(delta g)(a, b) = a g(b) - g(ab) + g(a) b for g: A -> M given on labels."""
    F = A.field
    f = {}
    for a in A.labels:
        for b in A.labels:
            acc = {}

            def add(vec, c=F.one):
                for i, v in vec.items():
                    acc[i] = acc.get(i, F.zero) + c * v

            add(M.left[a].apply(g[b]))
            add(M.right[b].apply(g[a]))
            for k, c in A.mul_labels(a, b).items():
                add(g[k], -c)
            vals = {M.labels[i]: v for i, v in acc.items() if v != 0}
            if vals:
                f[a, b] = vals
    return f


def extension_agreement(rng, trials):
    """extension_from_2cocycle succeeds exactly when delta f = 0."""
    setups = []
    for m in (1, 2, 3):
        A = cons.truncated_poly(QQ, m)
        setups.append((A, _augmentation_module(A)))
        setups.append((A, regular_bimodule(A)))
        setups.append((A, dual_bimodule(A)))
    Q = cons.truncated_poly(QQ, 1)
    setups.append((cons.direct_sum(Q, Q), None))
    counts = {"agree": 0, "cocycles": 0, "non-cocycles": 0}
    disagreements = []
    for t in range(trials):
        A, M = setups[t % len(setups)]
        if M is None:
            M = regular_bimodule(A)
        F = A.field
        if t % 2 == 0:
            g = {l: {i: F(rng.randint(-2, 2)) for i in range(M.dim) if rng.random() < 0.6} for l in A.labels}
            f = _delta_1(A, M, g)
            if A.name.endswith("(x^2)") and M.name == "k" and rng.random() < 0.5:
                f.setdefault(("x", "x"), {})
                f["x", "x"]["m"] = f["x", "x"].get("m", F.zero) + 1
        else:
            f = {}
            for a in A.labels:
                for b in A.labels:
                    if rng.random() < 0.4:
                        f[a, b] = {M.labels[rng.randrange(M.dim)]: F(rng.choice([-2, -1, 1, 2]))}
        f = {k: {m: c for m, c in v.items() if c != 0} for k, v in f.items()}
        f = {k: v for k, v in f.items() if v}
        engine = complexes.is_hochschild_cocycle(A, M, 2, f)
        try:
            cons.extension_from_2cocycle(A, M, f)
            built = True
        except NotACocycle:
            built = False
        counts["cocycles" if engine else "non-cocycles"] += 1
        if bool(engine) == built:
            counts["agree"] += 1
        else:
            disagreements.append((A.name, M.name, t))
    counts["passed"] = (counts["agree"] == trials >= 100 and counts["cocycles"] > 0
                        and counts["non-cocycles"] > 0)
    counts["disagreements"] = disagreements[:5]
    return counts


# ----------------------------------------------------------------------

CRITERIA = [
    (1, "HC of Q, degrees 0-6, three methods", c1_rationals),
    (2, "M_2(Q): HH and HC equal those of Q", c2_matrix2),
    (3, "dual numbers: HH and HC against independent oracles", c3_dual_numbers),
    (4, "Q[Z/2]: HH and HC, additivity", c4_groupZ2),
    (5, "Q[S_3]: HH_0 = conjugacy classes, HH_1 = HH_2 = 0", c5_groupS3),
    (6, "operator identities on every finite gallery algebra", c6_identities),
    (7, "SBI sequence exact, degrees <= 3", c7_sbi),
    (8, "duality H^n(A, A*) = HH_n(A), n <= 3", c8_duality),
    (9, "Chern-Connes pairings", c9_pairings),
    (10, "conjugation invariance over Q(t)", c10_conjugation),
    (11, "Hopf and Podles idempotents", c11_idempotents),
    (12, "groupoid algebras", c12_groupoids),
    (13, "random properties: coboundary, MvN, extensions", c13_properties),
]


def run_criterion(number):
    for k, title, fn in CRITERIA:
        if k == number:
            t0 = time.perf_counter()
            try:
                details, budget = fn()
                error = None
            except Exception as exc:
                details, budget, error = {"passed": False}, None, "%s: %s" % (type(exc).__name__, exc)
            elapsed = time.perf_counter() - t0
            passed = bool(details.pop("passed")) and (budget is None or elapsed < budget)
            out = {"criterion": k, "title": title, "passed": passed, "details": details,
                   "elapsed_ms": int(round(elapsed * 1000))}
            if budget is not None:
                out["budget_s"] = budget
            if error:
                out["error"] = error
            return out
    raise KeyError(number)


def run_all():
    results = [run_criterion(k) for k, _, _ in CRITERIA]
    return {"passed": all(r["passed"] for r in results), "criteria": results}
