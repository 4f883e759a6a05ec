"""
Cyclic cocycles, Chern characters and their pairings.

A Cochain of degree n is a multilinear functional of n+1 arguments,
stored densely (finite carriers) or as a rule on label tuples.  Chains
are handled as dicts ``label tuple -> scalar`` so that the same code
serves finite and based algebras.

No normalisation constants are applied anywhere: pairings are the raw
values phi~(e, ..., e) and phi~(u^-1 - 1, u - 1, ...).
"""

import itertools
from fractions import Fraction

from cychom.algebra import Element, Verdict, _add_into, check_invariant_trace
from cychom.errors import (CarrierMismatch, DegreeMismatch, NoCertificate, NotAGroupCocycle,
                           NotClosed, NotCyclic, NotInvariant, NotInvertible, NotNormalized)


# ----------------------------------------------------------------------
# matrices over an algebra


class AlgMatrix(object):
    """k x k matrix of Elements with optional idempotent/invertible stamps."""

    def __init__(self, carrier, entries):
        self.carrier = carrier
        k = len(entries)
        rows = []
        for row in entries:
            if len(row) != k:
                raise ValueError("AlgMatrix must be square")
            out = []
            for x in row:
                if not isinstance(x, Element):
                    x = carrier.one() * x
                if x.carrier is not carrier:
                    raise CarrierMismatch("matrix entry from another algebra")
                out.append(x)
            rows.append(out)
        self.k = k
        self.entries = rows
        self.idempotent = False
        self.witness = None

    @classmethod
    def identity(cls, carrier, k=1):
        return cls(carrier, [[carrier.one() if i == j else carrier.zero() for j in range(k)]
                             for i in range(k)])

    @classmethod
    def scalar(cls, a):
        return cls(a.carrier, [[a]])

    def _same(self, other):
        if other.carrier is not self.carrier:
            raise CarrierMismatch("matrices over different algebras")
        if other.k != self.k:
            raise ValueError("size mismatch %d vs %d" % (self.k, other.k))

    def __mul__(self, other):
        if not isinstance(other, AlgMatrix):
            return AlgMatrix(self.carrier, [[x * other for x in row] for row in self.entries])
        self._same(other)
        k = self.k
        Z = self.carrier.zero()
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = Z
                for l in range(k):
                    a, b = self.entries[i][l], other.entries[l][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return AlgMatrix(self.carrier, out)

    def __add__(self, other):
        self._same(other)
        return AlgMatrix(self.carrier, [[a + b for a, b in zip(r, s)]
                                        for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same(other)
        return AlgMatrix(self.carrier, [[a - b for a, b in zip(r, s)]
                                        for r, s in zip(self.entries, other.entries)])

    def __eq__(self, other):
        return (isinstance(other, AlgMatrix) and other.carrier is self.carrier
                and other.k == self.k and all(a == b for r, s in zip(self.entries, other.entries)
                                              for a, b in zip(r, s)))

    __hash__ = None

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def trace(self):
        acc = self.carrier.zero()
        for i in range(self.k):
            acc = acc + self.entries[i][i]
        return acc

    def direct_sum(self, other):
        if other.carrier is not self.carrier:
            raise CarrierMismatch("matrices over different algebras")
        Z = self.carrier.zero()
        k, m = self.k, other.k
        rows = [list(r) + [Z] * m for r in self.entries]
        rows += [[Z] * k + list(r) for r in other.entries]
        out = AlgMatrix(self.carrier, rows)
        if self.idempotent and other.idempotent:
            out.idempotent = True
        if self.witness is not None and other.witness is not None:
            out.witness = self.witness.direct_sum(other.witness)
        return out

    def certify_idempotent(self):
        """Stamp e^2 = e after checking it exactly; returns self."""
        if self * self != self:
            raise NoCertificate("e^2 != e")
        self.idempotent = True
        return self

    def certify_invertible(self, witness=None):
        """Stamp u W = W u = 1; computes W when the carrier is finite."""
        if witness is None:
            witness = self._solve_inverse()
        if not isinstance(witness, AlgMatrix):
            witness = AlgMatrix(self.carrier, witness)
        I = AlgMatrix.identity(self.carrier, self.k)
        if self * witness != I or witness * self != I:
            raise NoCertificate("witness is not a two-sided inverse")
        self.witness = witness
        witness.witness = self
        return self

    def inverse(self):
        if self.witness is None:
            raise NoCertificate("no invertibility certificate")
        return self.witness

    def _solve_inverse(self):
        A = self.carrier
        if not A.is_finite:
            raise NoCertificate("an invertible over a based algebra needs an explicit witness")
        from cychom.constructions import matrices_over
        k = self.k
        if k == 1:
            inv = self.entries[0][0].inverse()
            return AlgMatrix(A, [[inv]])
        MkA = matrices_over(A, k)
        x = self.as_element(MkA)
        try:
            y = x.inverse()
        except NotInvertible as exc:
            raise NoCertificate(str(exc))
        return AlgMatrix.from_element(A, k, y)

    def as_element(self, MkA):
        """This matrix as an element of M_k(A) with labels E:i,j|a."""
        coeffs = {}
        for i in range(self.k):
            for j in range(self.k):
                for l, c in self.entries[i][j].coeffs.items():
                    coeffs["E:%d,%d|%s" % (i + 1, j + 1, l)] = c
        return Element(MkA, coeffs)

    @classmethod
    def from_element(cls, A, k, x):
        rows = [[{} for _ in range(k)] for _ in range(k)]
        for lab, c in x.coeffs.items():
            head, _, a = lab.partition("|")
            i, j = head[2:].split(",")
            rows[int(i) - 1][int(j) - 1][a] = c
        return cls(A, [[Element(A, r) for r in row] for row in rows])

    def to_json(self):
        out = {"size": self.k,
               "entries": [[x.to_json() for x in row] for row in self.entries]}
        if self.witness is not None:
            out["witness"] = [[x.to_json() for x in row] for row in self.witness.entries]
        return out

    def __repr__(self):
        return "AlgMatrix(%d x %d over %s)" % (self.k, self.k, self.carrier.name)


# ----------------------------------------------------------------------
# cochains


class Cochain(object):
    """Multilinear functional of degree n (n+1 arguments).

    kind is "dense", "trace", "lie", "group" or "explicit".  ``rule``
    maps a tuple of carrier labels to a scalar.  ``homogeneous`` records
    that the cochain vanishes on label tuples of nonzero total degree for
    the carrier grading, which lets window checks skip those tuples.
    """

    def __init__(self, carrier, degree, rule=None, dense=None, kind="explicit", name="phi",
                 homogeneous=False, support=None):
        self.carrier = carrier
        self.degree = degree
        self.kind = kind
        self.name = name
        self.homogeneous = homogeneous
        self.support = support
        self._rule = rule
        self._dense = dense
        self._memo = {}
        self.stamp = None
        self.claims_cyclic = True

    @property
    def verified(self):
        return self.stamp is not None

    def value(self, labels):
        """phi on basis labels."""
        labels = tuple(labels)
        if len(labels) != self.degree + 1:
            raise DegreeMismatch("cochain of degree %d takes %d arguments" % (self.degree, self.degree + 1))
        v = self._memo.get(labels)
        if v is None:
            F = self.carrier.field
            if self._dense is not None:
                A = self.carrier
                d = A.dim
                idx = 0
                for l in labels:
                    idx = idx * d + A.index[l]
                v = self._dense.get(idx, F.zero)
            else:
                v = F(self._rule(labels))
            self._memo[labels] = v
        return v

    def __call__(self, *elements):
        if len(elements) != self.degree + 1:
            raise DegreeMismatch("cochain of degree %d takes %d arguments" % (self.degree, self.degree + 1))
        for e in elements:
            if e.carrier is not self.carrier:
                raise CarrierMismatch("argument from another algebra")
        F = self.carrier.field
        total = F.zero
        supports = [list(e.coeffs.items()) for e in elements]
        for combo in itertools.product(*supports):
            c = F.one
            for _, v in combo:
                c = c * v
            val = self.value(tuple(l for l, _ in combo))
            if val != 0:
                total = total + c * val
        return total

    def pair_chain(self, chain):
        """Evaluate on a chain given as {label tuple: coefficient}."""
        F = self.carrier.field
        total = F.zero
        for tup, c in chain.items():
            v = self.value(tup)
            if v != 0:
                total = total + c * v
        return total

    def dense_vector(self):
        """All values as {tuple index: scalar} (finite carriers)."""
        A = self.carrier
        if not A.is_finite:
            raise CarrierMismatch("dense form needs a finite carrier")
        if self._dense is not None:
            return dict(self._dense)
        out = {}
        labels = A.labels
        for idx, tup in enumerate(itertools.product(range(A.dim), repeat=self.degree + 1)):
            v = self.value(tuple(labels[t] for t in tup))
            if v != 0:
                out[idx] = v
        return out

    def scale(self, c):
        c = self.carrier.field(c)
        return Cochain(self.carrier, self.degree, rule=lambda t: c * self.value(t), kind=self.kind,
                       name="%s*%s" % (self.carrier.field.format(c), self.name),
                       homogeneous=self.homogeneous)

    def __add__(self, other):
        if other.carrier is not self.carrier or other.degree != self.degree:
            raise DegreeMismatch("cannot add cochains of different degree or carrier")
        return Cochain(self.carrier, self.degree, rule=lambda t: self.value(t) + other.value(t),
                       kind="explicit", name="%s+%s" % (self.name, other.name),
                       homogeneous=self.homogeneous and other.homogeneous)

    def __repr__(self):
        return "Cochain(%s, degree %d, %s%s)" % (self.name, self.degree, self.kind,
                                                 ", verified" if self.verified else "")


def dense_cochain(A, degree, values, name="phi"):
    """Values: {tuple index: scalar} or {label tuple: scalar}."""
    F = A.field
    dense = {}
    for k, v in values.items():
        if isinstance(k, tuple):
            idx = 0
            for l in k:
                idx = idx * A.dim + A.index[l]
            k = idx
        v = F(v) if not isinstance(v, str) else F.parse(v)
        if v != 0:
            dense[k] = v
    return Cochain(A, degree, dense=dense, kind="dense", name=name)


def trace_cochain(tau):
    """A trace as a 0-cochain."""
    A = tau.carrier
    G = getattr(A, "grading", None)
    return Cochain(A, 0, rule=lambda t: tau.value_label(t[0]), kind="trace", name=tau.name,
                   homogeneous=False)


def coboundary(phi):
    """b phi, degree n+1.

    (b phi)(a_0..a_{n+1}) = sum_{i<=n} (-1)^i phi(.., a_i a_{i+1}, ..)
                            + (-1)^(n+1) phi(a_{n+1} a_0, a_1, .., a_n)
    """
    A, n = phi.carrier, phi.degree
    F = A.field

    def rule(t):
        total = F.zero
        for i in range(n + 1):
            for k, c in A.mul_labels(t[i], t[i + 1]).items():
                v = phi.value(t[:i] + (k,) + t[i + 2:])
                if v != 0:
                    total = total + (c if i % 2 == 0 else -c) * v
        for k, c in A.mul_labels(t[n + 1], t[0]).items():
            v = phi.value((k,) + t[1:n + 1])
            if v != 0:
                total = total + (c if (n + 1) % 2 == 0 else -c) * v
        return total

    return Cochain(A, n + 1, rule=rule, kind="explicit", name="b(%s)" % phi.name,
                   homogeneous=phi.homogeneous)


# ----------------------------------------------------------------------
# validation


def _graded_tuples(A, window, length):
    """Label tuples from the window whose total degree is zero."""
    deg = A.grading
    by_deg = {}
    for l in window:
        by_deg.setdefault(tuple(deg(l)), []).append(l)
    zero = None
    for head in itertools.product(window, repeat=length - 1):
        s = None
        for l in head:
            g = tuple(deg(l))
            s = g if s is None else tuple(a + b for a, b in zip(s, g))
        if s is None:
            s = tuple(0 for _ in deg(window[0]))
        need = tuple(-a for a in s)
        for l in by_deg.get(need, ()):
            yield head + (l,)


def validate_cyclic_cocycle(phi, window=None):
    """Stamp phi as cyclic-verified, or raise NotCyclic / NotClosed.

    Finite carriers are checked on the full space through the operator
    matrices; based carriers on all label tuples from the window.
    """
    A, n = phi.carrier, phi.degree
    if A.is_finite:
        from cychom.complexes import cyclic_operator, hochschild_boundary, index_tuple
        v = phi.dense_vector()
        oml = cyclic_operator(A, n, "one_minus_lambda", size_cap=10 ** 7)
        cyc = oml.transpose().apply(v)
        if cyc:
            idx = min(cyc)
            raise NotCyclic(tuple(A.labels[t] for t in index_tuple(A.dim, n, idx)))
        bn = hochschild_boundary(A, n + 1, "b", size_cap=10 ** 7)
        clo = bn.transpose().apply(v)
        if clo:
            idx = min(clo)
            raise NotClosed(tuple(A.labels[t] for t in index_tuple(A.dim, n + 1, idx)))
        phi.stamp = {"window": "full", "degree": n}
        return phi
    if window is None:
        raise ValueError("a based carrier needs a window")
    window = list(window)
    skip = phi.homogeneous and getattr(A, "grading", None) is not None
    F = A.field
    sign_n = -1 if n % 2 else 1
    tuples = _graded_tuples(A, window, n + 1) if skip else itertools.product(window, repeat=n + 1)
    checked_c = 0
    for t in tuples:
        checked_c += 1
        if phi.value(t[n:] + t[:n]) != sign_n * phi.value(t):
            raise NotCyclic(tuple(A.format_label(l) for l in t))
    bphi = coboundary(phi)
    tuples = _graded_tuples(A, window, n + 2) if skip else itertools.product(window, repeat=n + 2)
    checked_b = 0
    for t in tuples:
        checked_b += 1
        if bphi.value(t) != 0:
            raise NotClosed(tuple(A.format_label(l) for l in t))
    phi.stamp = {"window": [A.format_label(l) for l in window], "degree": n,
                 "tuples_checked": {"cyclic": checked_c, "closed": checked_b},
                 "homogeneity_skip": bool(skip)}
    return phi


def is_hochschild_cocycle_on(phi, window=None):
    """b phi = 0 on the window (finite: everywhere); returns a Verdict."""
    A, n = phi.carrier, phi.degree
    bphi = coboundary(phi)
    if A.is_finite:
        from cychom.complexes import hochschild_boundary
        v = phi.dense_vector()
        clo = hochschild_boundary(A, n + 1, "b", size_cap=10 ** 7).transpose().apply(v)
        return Verdict(not clo, "hochschild_cocycle")
    window = list(window)
    skip = phi.homogeneous and getattr(A, "grading", None) is not None
    tuples = _graded_tuples(A, window, n + 2) if skip else itertools.product(window, repeat=n + 2)
    for t in tuples:
        if bphi.value(t) != 0:
            return Verdict(False, "hochschild_cocycle", counterexample=t, window=window)
    return Verdict(True, "hochschild_cocycle", window=window)


# ----------------------------------------------------------------------
# Chern characters


def _contracted_chain(factors):
    """Trace contraction sum x0_{i0 i1} (x) x1_{i1 i2} (x) ... (x) xm_{im i0}."""
    k = factors[0].k
    F = factors[0].carrier.field
    chain = {}
    m = len(factors)
    for idx in itertools.product(range(k), repeat=m):
        elems = [factors[r].entries[idx[r]][idx[(r + 1) % m]] for r in range(m)]
        if not all(elems):
            continue
        partial = {(): F.one}
        for e in elems:
            nxt = {}
            for t, c in partial.items():
                for l, v in e.coeffs.items():
                    nxt[t + (l,)] = c * v
            partial = nxt
        _add_into(chain, partial.items())
    return chain


def chern_even(e, n):
    """Tr(e (x) e (x) ... (x) e), 2n+1 factors, as {label tuple: scalar}."""
    if not e.idempotent:
        raise NoCertificate("chern_even needs an idempotent certificate")
    return _contracted_chain([e] * (2 * n + 1))


def chern_odd(u, n):
    """Tr((u^-1 - 1) (x) (u - 1) (x) ...), 2n+2 factors."""
    if u.witness is None:
        raise NoCertificate("chern_odd needs an invertibility certificate")
    I = AlgMatrix.identity(u.carrier, u.k)
    x, y = u.witness - I, u - I
    return _contracted_chain([x, y] * (n + 1))


def chain_to_vector(A, chain):
    """{label tuple: c} -> {tuple index: c} on C_n of a finite algebra."""
    out = {}
    for t, c in chain.items():
        idx = 0
        for l in t:
            idx = idx * A.dim + A.index[l]
        out[idx] = c
    return out


def _check_pairing(phi, m, require_verified):
    if phi.carrier is not m.carrier:
        raise CarrierMismatch("cocycle and matrix live on different algebras")
    if require_verified and not phi.verified:
        raise NoCertificate("cochain %s is not cyclic-verified" % phi.name)


def pair_even(phi, e, require_verified=True):
    """<[phi], [e]> = (tr # phi)(e, ..., e)."""
    if phi.degree % 2:
        raise DegreeMismatch("even pairing needs an even cochain, got degree %d" % phi.degree)
    _check_pairing(phi, e, require_verified)
    return phi.pair_chain(chern_even(e, phi.degree // 2))


def pair_odd(phi, u, require_verified=True):
    """<[phi], [u]> = (tr # phi)(u^-1 - 1, u - 1, ...)."""
    if phi.degree % 2 == 0:
        raise DegreeMismatch("odd pairing needs an odd cochain, got degree %d" % phi.degree)
    _check_pairing(phi, u, require_verified)
    return phi.pair_chain(chern_odd(u, (phi.degree - 1) // 2))


def dimension_function(tau):
    """e -> sum_i tau(e_ii)."""
    def dim(e):
        if e.carrier is not tau.carrier:
            raise CarrierMismatch("trace and idempotent on different algebras")
        total = tau.carrier.field.zero
        for i in range(e.k):
            total = total + tau(e.entries[i][i])
        return total
    return dim


def trace_cup(phi, MkA, k):
    """tr # phi on M_k(A): (alpha_r (x) a_r) -> tr(alpha_0 ... alpha_n) phi(a_0, ..., a_n)."""
    def parts(label):
        head, _, a = label.partition("|")
        i, j = head[2:].split(",")
        return int(i), int(j), a

    def rule(t):
        ps = [parts(l) for l in t]
        m = len(ps)
        for r in range(m):
            if ps[r][1] != ps[(r + 1) % m][0]:
                return MkA.field.zero
        return phi.value(tuple(p[2] for p in ps))

    out = Cochain(MkA, phi.degree, rule=rule, kind="explicit", name="tr#%s" % phi.name)
    return out


# ----------------------------------------------------------------------
# group cocycles


class GroupCocycleData(object):
    """Normalized group n-cocycle with trivial coefficients.

    ``group`` is a FiniteGroup or Lattice, ``rule(g_1, ..., g_n)`` a scalar.
    The window is a list of group elements used to check the axioms.
    """

    def __init__(self, group, degree, rule, field, window=None, name="c"):
        self.group = group
        self.degree = degree
        self.rule = rule
        self.field = field
        self.name = name
        if window is None:
            window = group.elements if hasattr(group, "elements") else group.box(1)
        self.window = list(window)
        self._validate()

    def __call__(self, *gs):
        return self.field(self.rule(*gs))

    def _validate(self):
        G, n = self.group, self.degree
        if n == 0:
            return
        e = G.identity
        for gs in itertools.product(self.window, repeat=n):
            prod_ = e
            for g in gs:
                prod_ = G.mul(prod_, g)
            if (e in gs or prod_ == e) and self(*gs) != 0:
                raise NotNormalized("%s%r = %s should vanish" % (self.name, gs, self.field.format(self(*gs))))
        for gs in itertools.product(self.window, repeat=n + 1):
            total = self(*gs[1:])
            for i in range(n):
                merged = gs[:i] + (G.mul(gs[i], gs[i + 1]),) + gs[i + 2:]
                total = total + (-1) ** (i + 1) * self(*merged)
            total = total + (-1) ** (n + 1) * self(*gs[:n])
            if total != 0:
                raise NotAGroupCocycle("delta %s != 0 at %r" % (self.name, gs))


def _group_label_map(A):
    G = A.group
    if A.is_finite:
        return G, (lambda l: l[2:])
    return G, (lambda l: l)


def group_cocycle_to_cyclic(A, c):
    """phi_c(g_0..g_n) = c(g_1..g_n) if g_0 g_1 ... g_n = e, else 0."""
    G, elem = _group_label_map(A)
    if c.group is not G and getattr(c.group, "rank", None) != getattr(G, "rank", -1):
        raise CarrierMismatch("cocycle and group algebra use different groups")
    n = c.degree
    F = A.field

    def rule(t):
        gs = [elem(l) for l in t]
        p = G.identity
        for g in gs:
            p = G.mul(p, g)
        if p != G.identity:
            return F.zero
        return c(*gs[1:])

    return Cochain(A, n, rule=rule, kind="group", name="phi_%s" % c.name, homogeneous=True)


# ----------------------------------------------------------------------
# Lie actions


def lie_action_to_cyclic(tau, Ds, c, window=None):
    """phi_c(a_0..a_n) = sum_sigma sgn(sigma) tau(a_0 X_sigma(1)(a_1) ... X_sigma(n)(a_n)).

    ``c`` maps sorted index tuples (into Ds) to scalars, i.e. an element
    of Lambda^n of the span.  tau must be invariant under every D.  When
    the CE boundary of c is nonzero the result is still returned (it is
    a Hochschild cocycle) but ``claims_cyclic`` is False.
    """
    from cychom.complexes import chevalley_eilenberg_differential, exterior_basis
    A = tau.carrier
    F = A.field
    if window is None:
        window = tau.window if not A.is_finite else None
    ver = check_invariant_trace(tau, Ds, window)
    if not ver:
        raise NotInvariant("trace %s is not invariant: %r" % (tau.name, ver.counterexample))
    c = {tuple(k): F(v) if not isinstance(v, str) else F.parse(v) for k, v in c.items()}
    degrees = {len(k) for k in c}
    if len(degrees) > 1:
        raise DegreeMismatch("c mixes exterior degrees")
    n = degrees.pop() if degrees else 0
    closed = True
    if n >= 1 and Ds:
        basis = exterior_basis(len(Ds), n)
        pos = {w: i for i, w in enumerate(basis)}
        vec = {}
        for k, v in c.items():
            from cychom.complexes import _wedge_sort
            s, key = _wedge_sort(k)
            if s:
                _add_into(vec, [(pos[key], v * s)])
        delta = chevalley_eilenberg_differential(Ds, n, window)
        closed = not delta.apply(vec)
    terms = []
    for k, v in c.items():
        for perm in itertools.permutations(range(n)):
            sgn = _perm_sign(perm)
            terms.append((v * sgn, [Ds[k[perm[r]]] for r in range(n)]))

    def rule(t):
        total = F.zero
        a0 = A.basis(t[0])
        for coeff, Xs in terms:
            x = a0
            for X, l in zip(Xs, t[1:]):
                x = x * X.on_label(l)
                if not x:
                    break
            if x:
                val = tau(x)
                if val != 0:
                    total = total + coeff * val
        if n == 0 and not terms:
            return F.zero
        return total

    if n == 0:
        c0 = c.get((), F.zero)
        phi = Cochain(A, 0, rule=lambda t: c0 * tau.value_label(t[0]), kind="lie", name="phi_c")
    else:
        phi = Cochain(A, n, rule=rule, kind="lie", name="phi_c")
    phi.claims_cyclic = closed
    phi.homogeneous = _homogeneous_action(tau, Ds, window)
    return phi


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _homogeneous_action(tau, Ds, window):
    """tau vanishes off degree 0 and each D preserves degree, on the window."""
    A = tau.carrier
    deg = getattr(A, "grading", None)
    if deg is None or window is None:
        return False
    for l in window:
        g = tuple(deg(l))
        if any(g) and tau.value_label(l) != 0:
            return False
        for D in Ds:
            for k in D.on_label(l).coeffs:
                if tuple(deg(k)) != g:
                    return False
    return True


# ----------------------------------------------------------------------
# Murray-von Neumann and homotopy invariance


def mvn_check(e, f, u, v):
    """uv = e and vu = f, exactly."""
    for m in (f, u, v):
        if m.carrier is not e.carrier:
            raise CarrierMismatch("matrices over different algebras")
    uv, vu = u * v, v * u
    ok1, ok2 = uv == e, vu == f
    details = {}
    if not ok1:
        details["uv - e"] = [[x.to_json() for x in r] for r in (uv - e).entries]
    if not ok2:
        details["vu - f"] = [[x.to_json() for x in r] for r in (vu - f).entries]
    return Verdict(ok1 and ok2, "mvn", details=details)


def conjugation_invariance_test(phi, e, u, require_verified=True):
    """<phi, u e u^-1> is a constant rational function equal to <phi, e>.

    The carrier's field must be a rational function field; u must carry
    an invertibility certificate.
    """
    if u.witness is None:
        raise NoCertificate("conjugating matrix needs an invertibility witness")
    if not e.idempotent:
        raise NoCertificate("e needs an idempotent certificate")
    conj = (u * e) * u.witness
    conj.certify_idempotent()
    val = pair_even(phi, conj, require_verified)
    base = pair_even(phi, e, require_verified)
    F = phi.carrier.field
    const = val.is_constant() if hasattr(val, "is_constant") else True
    deriv = val.derivative() if hasattr(val, "derivative") else F.zero
    ok = const and val == base
    return Verdict(ok, "conjugation_invariance",
                   details={"value": F.format(val), "at_e": F.format(base),
                            "constant": const, "derivative": F.format(deriv)})
