"""
Builders for the example algebras: matrix, group and groupoid algebras,
crossed products, truncated polynomials, sums/tensors/opposites, the
finite Weyl torus, the polynomial noncommutative torus, rewriting
presented algebras and abelian extensions by 2-cochains.

Every finite result goes through validate_algebra.
"""

import re
from fractions import Fraction
from itertools import permutations, product
from math import gcd

from cychom.algebra import (Algebra, BasedAlgebra, Bimodule, Element, Verdict, _add_into,
                            validate_algebra, validate_derivation, validate_trace)
from cychom.errors import (FieldMismatch, FuelExhausted, GroupAxiomError, GroupoidAxiomError,
                           NotACocycle, NotAHomomorphism, NotAnAction, NotAssociative,
                           NotCoprime, ParseError)
from cychom.fields import QQ, CyclotomicField, RationalFunctionField
from cychom.linalg import SparseMatrix, solve


def matrix_algebra(F, n):
    """M_n(F) on matrix units E:i,j (1-based)."""
    if n < 1:
        raise ValueError("matrix size must be positive")
    lab = lambda i, j: "E:%d,%d" % (i, j)
    labels = [lab(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    structure = [(lab(i, j), lab(j, l), lab(i, l), 1)
                 for i in range(1, n + 1) for j in range(1, n + 1) for l in range(1, n + 1)]
    unit = {lab(i, i): 1 for i in range(1, n + 1)}
    A = validate_algebra(F, labels, unit, structure, name="M_%d(%s)" % (n, F))
    A.traces["tr"] = validate_trace(A, {lab(i, i): F.one for i in range(1, n + 1)}, name="tr")
    A.matrix_size = n
    return A


def truncated_poly(F, m):
    """F[x]/(x^m) on 1, x, ..., x^(m-1)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    lab = lambda k: "1" if k == 0 else ("x" if k == 1 else "x^%d" % k)
    labels = [lab(k) for k in range(m)]
    structure = [(lab(i), lab(j), lab(i + j), 1)
                 for i in range(m) for j in range(m) if i + j < m]
    return validate_algebra(F, labels, {"1": 1}, structure, name="%s[x]/(x^%d)" % (F, m))


# ----------------------------------------------------------------------
# groups


class FiniteGroup(object):
    """Multiplication table on string labels; validated on construction."""

    def __init__(self, elements, mult, identity, name="G"):
        self.elements = list(elements)
        self.mult = dict(mult)
        self.identity = identity
        self.name = name
        self._validate()
        self.inverses = {g: next(h for h in self.elements if self.mult[g, h] == identity)
                         for g in self.elements}

    def _validate(self):
        els = self.elements
        if len(set(els)) != len(els):
            raise GroupAxiomError("repeated group element")
        S = set(els)
        for g in els:
            for h in els:
                if self.mult.get((g, h)) not in S:
                    raise GroupAxiomError("product %r*%r missing or outside the group" % (g, h))
        if self.identity not in S:
            raise GroupAxiomError("identity not an element")
        for g in els:
            if self.mult[g, self.identity] != g or self.mult[self.identity, g] != g:
                raise GroupAxiomError("identity law fails at %r" % g)
            if not any(self.mult[g, h] == self.identity for h in els):
                raise GroupAxiomError("%r has no inverse" % g)
        for g, h, k in product(els, els, els):
            if self.mult[self.mult[g, h], k] != self.mult[g, self.mult[h, k]]:
                raise GroupAxiomError("associativity fails at %r" % ((g, h, k),))

    def mul(self, g, h):
        return self.mult[g, h]

    def inv(self, g):
        return self.inverses[g]

    def __len__(self):
        return len(self.elements)

    def conjugacy_classes(self):
        seen, classes = set(), []
        for g in self.elements:
            if g in seen:
                continue
            cls = {self.mul(self.mul(h, g), self.inv(h)) for h in self.elements}
            seen |= cls
            classes.append(sorted(cls))
        return classes


class Lattice(object):
    """The free abelian group Z^rank; elements are integer tuples."""

    def __init__(self, rank):
        if rank < 1:
            raise GroupAxiomError("lattice rank must be at least 1")
        self.rank = rank
        self.identity = (0,) * rank
        self.name = "Z^%d" % rank

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def contains(self, g):
        return isinstance(g, tuple) and len(g) == self.rank and all(isinstance(a, int) for a in g)

    def box(self, radius):
        return list(product(range(-radius, radius + 1), repeat=self.rank))


def cyclic_group(n):
    els = [str(k) for k in range(n)]
    mult = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    return FiniteGroup(els, mult, "0", name="Z/%d" % n)


def symmetric_group(n):
    """S_n on permutations written as one-line strings, composed right to left."""
    perms = list(permutations(range(n)))
    lab = lambda p: "".join(str(i + 1) for i in p)
    mult = {(lab(p), lab(q)): lab(tuple(p[q[i]] for i in range(n))) for p in perms for q in perms}
    return FiniteGroup([lab(p) for p in perms], mult, lab(tuple(range(n))), name="S_%d" % n)


def group_from_table(elements, table, identity, name="G"):
    """table: dict "g,h" or (g,h) -> product label."""
    mult = {}
    for k, v in table.items():
        if isinstance(k, str):
            g, h = [s.strip() for s in k.split(",")]
        else:
            g, h = k
        mult[g, h] = v
    return FiniteGroup(elements, mult, identity, name=name)


def _lattice_label(v):
    return "g:(%s)" % ",".join(str(a) for a in v)


def _parse_lattice_label(text, rank=None):
    m = re.match(r"^\s*(?:g:)?\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$", text)
    if not m:
        raise ParseError("bad lattice label %r" % (text,))
    v = tuple(int(a) for a in m.group(1).split(","))
    if rank is not None and len(v) != rank:
        raise ParseError("lattice label %r has wrong rank" % (text,))
    return v


def group_algebra(F, G):
    """F[G]: an Algebra for a finite table, a BasedAlgebra for Z^k."""
    if isinstance(G, Lattice):
        def rule(a, b):
            return {G.mul(a, b): F.one}
        A = BasedAlgebra(F, rule, {G.identity: F.one}, format_label=_lattice_label,
                         parse_label=lambda s: _parse_lattice_label(s, G.rank),
                         domain="lattice Z^%d" % G.rank, name="%s[%s]" % (F, G.name),
                         grading=lambda l: l)
        A.group = G
        A.traces["delta_e"] = _delta_trace(A, G)
        return A
    lab = lambda g: "g:%s" % g
    labels = [lab(g) for g in G.elements]
    structure = [(lab(g), lab(h), lab(G.mul(g, h)), 1) for g in G.elements for h in G.elements]
    A = validate_algebra(F, labels, {lab(G.identity): 1}, structure, name="%s[%s]" % (F, G.name))
    A.group = G
    A.traces["delta_e"] = validate_trace(A, {lab(G.identity): 1}, name="delta_e")
    return A


def _delta_trace(A, G):
    from cychom.algebra import Trace
    one, zero = A.field.one, A.field.zero
    return Trace(A, lambda l: one if l == G.identity else zero, G.box(1), name="delta_e")


# ----------------------------------------------------------------------
# sums, tensors, opposites


def _same_field(A, B):
    if A.field != B.field:
        raise FieldMismatch("%s vs %s" % (A.field, B.field))


def direct_sum(A, B):
    _same_field(A, B)
    la = lambda l: "s1:" + l
    lb = lambda l: "s2:" + l
    labels = [la(l) for l in A.labels] + [lb(l) for l in B.labels]
    structure = [(la(i), la(j), la(k), c) for i, j, k, c in A.structure_entries()]
    structure += [(lb(i), lb(j), lb(k), c) for i, j, k, c in B.structure_entries()]
    unit = {la(l): c for l, c in A.unit.items()}
    unit.update({lb(l): c for l, c in B.unit.items()})
    return validate_algebra(A.field, labels, unit, structure,
                            name="(%s)+(%s)" % (A.name, B.name))


def tensor_label(a, b):
    return "%s|%s" % (a, b)


def tensor_product(A, B):
    _same_field(A, B)
    labels = [tensor_label(a, b) for a in A.labels for b in B.labels]
    structure = []
    bent = list(B.structure_entries())
    for i, j, k, c in A.structure_entries():
        for i2, j2, k2, c2 in bent:
            structure.append((tensor_label(i, i2), tensor_label(j, j2), tensor_label(k, k2), c * c2))
    unit = {tensor_label(a, b): c * d for a, c in A.unit.items() for b, d in B.unit.items()}
    return validate_algebra(A.field, labels, unit, structure,
                            name="(%s)x(%s)" % (A.name, B.name))


def opposite(A):
    structure = [(j, i, k, c) for i, j, k, c in A.structure_entries()]
    return validate_algebra(A.field, A.labels, A.unit, structure, name="%s^op" % A.name)


def matrices_over(A, k):
    """M_k(A) as M_k(F) (x) A, labels E:i,j|a."""
    return tensor_product(matrix_algebra(A.field, k), A)


# ----------------------------------------------------------------------
# crossed products


class Action(object):
    """A finite group acting on a finite dimensional algebra.

    ``maps[g]`` is the matrix of alpha_g in the algebra's basis.
    """

    def __init__(self, group, algebra, maps):
        self.group = group
        self.algebra = algebra
        self.maps = {}
        for g in group.elements:
            if g not in maps:
                raise NotAnAction(g, "(missing)")
            M = maps[g]
            if not isinstance(M, SparseMatrix):
                M = SparseMatrix.from_dense(M, algebra.field)
            self.maps[g] = M
        self._validate()

    def apply(self, g, a):
        A = self.algebra
        v = self.maps[g].apply(a.index_vector())
        return Element(A, {A.labels[i]: c for i, c in v.items()})

    def _validate(self):
        A, G = self.algebra, self.group
        if self.maps[G.identity] != SparseMatrix.identity(A.dim, A.field):
            raise NotAnAction(G.identity, "(identity must act trivially)")
        for g in G.elements:
            if self.apply(g, A.one()) != A.one():
                raise NotAnAction(g, "(not unital)")
            for a in A.labels:
                for b in A.labels:
                    ea, eb = A.basis(a), A.basis(b)
                    if self.apply(g, ea * eb) != self.apply(g, ea) * self.apply(g, eb):
                        raise NotAnAction(g, "(not multiplicative at %r)" % ((a, b),))
        for g in G.elements:
            for h in G.elements:
                if self.maps[g] @ self.maps[h] != self.maps[G.mul(g, h)]:
                    raise NotAHomomorphism(g, h)


def trivial_action(group, algebra):
    I = SparseMatrix.identity(algebra.dim, algebra.field)
    return Action(group, algebra, {g: I for g in group.elements})


def crossed_product(A, act):
    """A x| G with (a (x) g)(b (x) h) = a g(b) (x) gh."""
    if act.algebra is not A:
        raise NotAnAction(None, "(action is for a different algebra)")
    G = act.group
    labels = [tensor_label(a, g) for a in A.labels for g in G.elements]
    images = {(g, b): act.apply(g, A.basis(b)) for g in G.elements for b in A.labels}
    structure = []
    for a in A.labels:
        ea = A.basis(a)
        for g in G.elements:
            for b in A.labels:
                prod_ = ea * images[g, b]
                for h in G.elements:
                    gh = G.mul(g, h)
                    for k, c in prod_.coeffs.items():
                        structure.append((tensor_label(a, g), tensor_label(b, h), tensor_label(k, gh), c))
    unit = {tensor_label(l, G.identity): c for l, c in A.unit.items()}
    return validate_algebra(A.field, labels, unit, structure,
                            name="%s x| %s" % (A.name, G.name))


# ----------------------------------------------------------------------
# groupoids


class Groupoid(object):
    """A finite groupoid.

    ``compose[(g1, g2)]`` is g1 o g2, defined iff source(g1) == target(g2).
    """

    def __init__(self, objects, morphisms, source, target, compose, identities, name="groupoid"):
        self.objects = list(objects)
        self.morphisms = list(morphisms)
        self.source = dict(source)
        self.target = dict(target)
        self.compose = dict(compose)
        self.identities = dict(identities)
        self.name = name
        self._validate()
        self.inverses = {}
        for g in self.morphisms:
            x = self.target[g]
            inv = [h for h in self.morphisms
                   if self.composable(g, h) and self.compose[g, h] == self.identities[x]
                   and self.compose[h, g] == self.identities[self.source[g]]]
            self.inverses[g] = inv[0]

    def composable(self, g1, g2):
        return self.source[g1] == self.target[g2]

    def _validate(self):
        M = self.morphisms
        if len(set(M)) != len(M) or len(set(self.objects)) != len(self.objects):
            raise GroupoidAxiomError("repeated labels")
        for g in M:
            if self.source.get(g) not in self.objects or self.target.get(g) not in self.objects:
                raise GroupoidAxiomError("morphism %r has bad endpoints" % g)
        for x in self.objects:
            i = self.identities.get(x)
            if i not in M or self.source[i] != x or self.target[i] != x:
                raise GroupoidAxiomError("bad identity at object %r" % x)
        for g1 in M:
            for g2 in M:
                if self.composable(g1, g2):
                    c = self.compose.get((g1, g2))
                    if c not in M:
                        raise GroupoidAxiomError("composite %r o %r missing" % (g1, g2))
                    if self.source[c] != self.source[g2] or self.target[c] != self.target[g1]:
                        raise GroupoidAxiomError("composite %r o %r has wrong endpoints" % (g1, g2))
                elif (g1, g2) in self.compose:
                    raise GroupoidAxiomError("composite of non-composable %r, %r" % (g1, g2))
        for g in M:
            if self.compose[self.identities[self.target[g]], g] != g or \
                    self.compose[g, self.identities[self.source[g]]] != g:
                raise GroupoidAxiomError("identity law fails at %r" % g)
            if not any(self.composable(g, h) and self.compose[g, h] == self.identities[self.target[g]]
                       and self.compose[h, g] == self.identities[self.source[g]] for h in M):
                raise GroupoidAxiomError("%r has no inverse" % g)
        for a, b, c in product(M, M, M):
            if self.composable(a, b) and self.composable(b, c):
                if self.compose[self.compose[a, b], c] != self.compose[a, self.compose[b, c]]:
                    raise GroupoidAxiomError("associativity fails at %r" % ((a, b, c),))


def pairs_groupoid(n):
    """Objects 1..n, one arrow (i,j): j -> i for every pair."""
    obj = [str(i) for i in range(1, n + 1)]
    mor = ["(%s,%s)" % (i, j) for i in obj for j in obj]
    src = {"(%s,%s)" % (i, j): j for i in obj for j in obj}
    tgt = {"(%s,%s)" % (i, j): i for i in obj for j in obj}
    comp = {("(%s,%s)" % (i, j), "(%s,%s)" % (j, k)): "(%s,%s)" % (i, k)
            for i in obj for j in obj for k in obj}
    ids = {i: "(%s,%s)" % (i, i) for i in obj}
    return Groupoid(obj, mor, src, tgt, comp, ids, name="pairs(%d)" % n)


def group_as_groupoid(G):
    mor = list(G.elements)
    return Groupoid(["*"], mor, {g: "*" for g in mor}, {g: "*" for g in mor},
                    {(g, h): G.mul(g, h) for g in mor for h in mor}, {"*": G.identity},
                    name="B%s" % G.name)


def transitive_groupoid(n, G):
    """Pairs groupoid on n objects times the group G (isotropy G)."""
    obj = [str(i) for i in range(1, n + 1)]
    lab = lambda i, j, g: "(%s,%s;%s)" % (i, j, g)
    mor = [lab(i, j, g) for i in obj for j in obj for g in G.elements]
    src = {lab(i, j, g): j for i in obj for j in obj for g in G.elements}
    tgt = {lab(i, j, g): i for i in obj for j in obj for g in G.elements}
    comp = {(lab(i, j, g), lab(j, k, h)): lab(i, k, G.mul(g, h))
            for i in obj for j in obj for k in obj for g in G.elements for h in G.elements}
    ids = {i: lab(i, i, G.identity) for i in obj}
    return Groupoid(obj, mor, src, tgt, comp, ids, name="pairs(%d)x%s" % (n, G.name))


def disjoint_union(G1, G2):
    p1 = lambda s: "1." + s
    p2 = lambda s: "2." + s
    objects = [p1(x) for x in G1.objects] + [p2(x) for x in G2.objects]
    mor = [p1(g) for g in G1.morphisms] + [p2(g) for g in G2.morphisms]
    src = {p1(g): p1(x) for g, x in G1.source.items()}
    src.update({p2(g): p2(x) for g, x in G2.source.items()})
    tgt = {p1(g): p1(x) for g, x in G1.target.items()}
    tgt.update({p2(g): p2(x) for g, x in G2.target.items()})
    comp = {(p1(a), p1(b)): p1(c) for (a, b), c in G1.compose.items()}
    comp.update({(p2(a), p2(b)): p2(c) for (a, b), c in G2.compose.items()})
    ids = {p1(x): p1(i) for x, i in G1.identities.items()}
    ids.update({p2(x): p2(i) for x, i in G2.identities.items()})
    return Groupoid(objects, mor, src, tgt, comp, ids, name="%s+%s" % (G1.name, G2.name))


def groupoid_algebra(F, G):
    """Convolution algebra: e_a e_b = e_{a o b} if composable, else 0."""
    lab = lambda g: "m:%s" % g
    labels = [lab(g) for g in G.morphisms]
    structure = [(lab(a), lab(b), lab(G.compose[a, b]), 1)
                 for a in G.morphisms for b in G.morphisms if G.composable(a, b)]
    unit = {lab(G.identities[x]): 1 for x in G.objects}
    return validate_algebra(F, labels, unit, structure, name="%s[%s]" % (F, G.name))


# ----------------------------------------------------------------------
# tori


def weyl_torus(p, q):
    """Finite Weyl torus: VU = zeta^p UV with U^q = V^q = 1.

    The relations U^q = V^q = 1 are a finitisation; the smooth torus has
    no such relation.  Over Q when q <= 2, else over Q(zeta_q).
    """
    if q < 1 or gcd(p, q) != 1:
        raise NotCoprime("p=%r and q=%r must be coprime with q >= 1" % (p, q))
    F = QQ if q <= 2 else CyclotomicField(q)

    def root(k):
        k %= q
        if q == 1 or k == 0:
            return F.one
        if q == 2:
            return F(-1)
        return F.root_of_unity(k)

    lab = lambda m, n: "U^%dV^%d" % (m, n)
    labels = [lab(m, n) for m in range(q) for n in range(q)]
    structure = []
    for m, n, r, s in product(range(q), repeat=4):
        # U^m V^n U^r V^s = zeta^(p n r) U^(m+r) V^(n+s)
        structure.append((lab(m, n), lab(r, s), lab((m + r) % q, (n + s) % q), root(p * n * r)))
    A = validate_algebra(F, labels, {lab(0, 0): 1}, structure, name="weyl_torus(%d,%d)" % (p, q))
    A.traces["tau"] = validate_trace(A, {lab(0, 0): 1}, name="tau")
    A.notes.append("finitised by U^q = V^q = 1")
    A.preset = "weyl_torus"
    A.q = q
    return A


def _torus_label(l):
    return "(%d,%d)" % l


def _parse_torus_label(text):
    m = re.match(r"^\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$", text)
    if not m:
        m2 = re.match(r"^\s*U\^(-?\d+)V\^(-?\d+)\s*$", text)
        if not m2:
            raise ParseError("bad torus label %r" % (text,))
        m = m2
    return (int(m.group(1)), int(m.group(2)))


def polynomial_torus(var="t"):
    """Laurent polynomials in U, V over Q(t) with VU = t UV.

    Labels (m, n) stand for U^m V^n.  Bundled: trace tau (coefficient of
    U^0V^0) and derivations X1, X2 (multiplication by m resp. n).
    """
    F = RationalFunctionField(QQ, var)
    t = F.gen()

    def rule(a, b):
        (m, n), (r, s) = a, b
        return {(m + r, n + s): t ** (n * r)}

    A = BasedAlgebra(F, rule, {(0, 0): F.one}, format_label=_torus_label,
                     parse_label=_parse_torus_label, domain="lattice Z^2 (U^m V^n)",
                     name="polynomial_torus", grading=lambda l: l)
    window = torus_window(1)
    A.audit_window(window)
    A.traces["tau"] = validate_trace(A, lambda l: F.one if l == (0, 0) else F.zero, window, name="tau")
    A.derivations["X1"] = validate_derivation(A, lambda l: {l: l[0]} if l[0] else {}, window, name="X1")
    A.derivations["X2"] = validate_derivation(A, lambda l: {l: l[1]} if l[1] else {}, window, name="X2")
    A.U = A.basis((1, 0))
    A.V = A.basis((0, 1))
    return A


def torus_window(radius):
    return [(m, n) for m in range(-radius, radius + 1) for n in range(-radius, radius + 1)]


# ----------------------------------------------------------------------
# rewriting


class RewritingSystem(object):
    """Two-letter rewrite rules on words with leftmost-innermost reduction.

    No confluence or termination claim is made; ``fuel`` bounds the number
    of rule applications for a single normal form computation.
    """

    def __init__(self, generators, rules, field, fuel=10000):
        self.generators = list(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ParseError("repeated generator")
        for g in self.generators:
            if not g or g == "1" or "." in g:
                raise ParseError("bad generator name %r" % (g,))
        self.field = field
        self.fuel = fuel
        self.rules = {}
        for lhs, rhs in rules.items():
            lhs = tuple(lhs)
            if len(lhs) != 2 or any(x not in self.generators for x in lhs):
                raise ParseError("rule left side must be a two-letter word, got %r" % (lhs,))
            self.rules[lhs] = {tuple(w): field(c) for w, c in rhs.items()}
        self._nf = {}

    def normal_form(self, word):
        word = tuple(word)
        budget = [self.fuel]
        return self._normal(word, budget)

    def _normal(self, word, budget):
        cached = self._nf.get(word)
        if cached is not None:
            return cached
        for i in range(len(word) - 1):
            rhs = self.rules.get(word[i:i + 2])
            if rhs is None:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise FuelExhausted("more than %d rewrite steps reducing %r" % (self.fuel, word))
            out = {}
            for w, c in rhs.items():
                sub = self._normal(word[:i] + w + word[i + 2:], budget)
                _add_into(out, sub.items(), c)
            self._nf[word] = out
            return out
        out = {word: self.field.one}
        self._nf[word] = out
        return out


def _word_label(w):
    return "w:" + (".".join(w) if w else "1")


def rewriting_algebra(generators, rules, F, fuel=10000, name="rewriting algebra"):
    """Based algebra on irreducible words; product = concatenate then reduce.

    ``rules`` maps two-letter words (tuples of generator names) to dicts
    word -> scalar.
    """
    R = RewritingSystem(generators, rules, F, fuel)

    def rule(a, b):
        return R.normal_form(a + b)

    def parse(text):
        if not text.startswith("w:"):
            raise ParseError("word labels look like w:a.b.c, got %r" % (text,))
        body = text[2:]
        if body == "1":
            return ()
        w = tuple(body.split("."))
        for g in w:
            if g not in R.generators:
                raise ParseError("unknown generator %r" % g)
        return w

    A = BasedAlgebra(F, rule, {(): F.one}, format_label=_word_label, parse_label=parse,
                     domain="words in %s" % ",".join(R.generators), name=name)
    A.rewriting = R
    A.notes.append("reduction divergence is not detected; fuel=%d" % fuel)
    for g in R.generators:
        setattr(A, "gen_" + re.sub(r"\W", "_", g), A.basis((g,)))
    return A


def word_element(A, word, coeff=1):
    """The reduced element of a word (tuple of generator names)."""
    R = A.rewriting
    return Element(A, {w: c * coeff for w, c in R.normal_form(tuple(word)).items()})


def hopf_sphere_algebra(fuel=10000):
    """Commutative coordinate algebra of S^2 over Q(zeta_4)."""
    F = CyclotomicField(4)
    gens = ["x1", "x2", "x3"]
    rules = {}
    for i in range(3):
        for j in range(i + 1, 3):
            rules[(gens[j], gens[i])] = {(gens[i], gens[j]): 1}
    rules[("x3", "x3")] = {(): 1, ("x1", "x1"): -1, ("x2", "x2"): -1}
    A = rewriting_algebra(gens, rules, F, fuel, name="S^2")
    A.preset = "hopf_sphere"
    return A


def hopf_idempotent(A):
    """e = (1 + F)/2, F = x1 s1 + x2 s2 + x3 s3 with the Pauli matrices."""
    from cychom.chern import AlgMatrix
    i = A.field.gen()
    x1, x2, x3 = A.basis(("x1",)), A.basis(("x2",)), A.basis(("x3",))
    one = A.one()
    half = Fraction(1, 2)
    entries = [[(one + x3) * half, (x1 + x2 * i) * half],
               [(x1 - x2 * i) * half, (one - x3) * half]]
    return AlgMatrix(A, entries)


def podles_sphere_algebra(fuel=10000):
    """Podles sphere over Q(q): a, a*, b with the quantum sphere relations."""
    F = RationalFunctionField(QQ, "q")
    q = F.gen()
    rules = {
        ("a", "b"): {("b", "a"): q ** -2},
        ("a*", "b"): {("b", "a*"): q ** 2},
        ("a", "a*"): {(): 1, ("b", "b"): -q ** -4},
        ("a*", "a"): {(): 1, ("b", "b"): -1},
    }
    A = rewriting_algebra(["a", "a*", "b"], rules, F, fuel, name="S^2_q")
    A.preset = "podles_sphere"
    return A


def podles_idempotent(A):
    """e_q = 1/2 [[1 + q^-2 b, q a], [q^-1 a*, 1 - b]]."""
    from cychom.chern import AlgMatrix
    q = A.field.gen()
    a, a_, b = A.basis(("a",)), A.basis(("a*",)), A.basis(("b",))
    one = A.one()
    half = Fraction(1, 2)
    entries = [[(one + b * q ** -2) * half, a * (q * half)],
               [a_ * (half / q), (one - b) * half]]
    return AlgMatrix(A, entries)


# ----------------------------------------------------------------------
# abelian extensions


def extension_from_2cocycle(A, M, f):
    """The algebra A (+) M with (a,m)(a',m') = (aa', am' + ma' + f(a,a')).

    ``f`` maps label pairs (a, b) to dicts M-label -> scalar.  Returns
    (algebra, verdict).  Raises NotACocycle with the first triple on which
    associativity fails.
    """
    F = A.field
    la = lambda l: "a:" + l
    lm = lambda l: "m:" + l
    labels = [la(l) for l in A.labels] + [lm(l) for l in M.labels]
    structure = []
    for i, j, k, c in A.structure_entries():
        structure.append((la(i), la(j), la(k), c))
    for (a, b), vals in f.items():
        for m, c in vals.items():
            structure.append((la(a), la(b), lm(m), c))
    for a in A.labels:
        for (r, s), v in M.left[a].entries():
            # e_a m_s has coefficient v at m_r
            structure.append((la(a), lm(M.labels[s]), lm(M.labels[r]), v))
        for (r, s), v in M.right[a].entries():
            structure.append((lm(M.labels[s]), la(a), lm(M.labels[r]), v))
    # associativity first: it is exactly the cocycle condition
    B = _unchecked_algebra(F, labels, structure)
    from cychom.algebra import _check_associative
    try:
        _check_associative(B)
    except NotAssociative as exc:
        raise NotACocycle(tuple(_strip(l) for l in exc.triple))
    unit = _find_unit(B)
    B = validate_algebra(F, labels, unit, structure, name="ext(%s,%s)" % (A.name, M.name))
    return B, Verdict(True, "extension", details={"unit": {k: F.format(v) for k, v in unit.items()}})


def _strip(label):
    return label.split(":", 1)[1] if ":" in label else label


def _unchecked_algebra(F, labels, structure):
    index = {l: i for i, l in enumerate(labels)}
    d = len(labels)
    cells = [[{} for _ in range(d)] for _ in range(d)]
    for i, j, k, c in structure:
        cell = cells[index[i]][index[j]]
        _add_into(cell, [(index[k], F(c))])
    table = [[tuple(sorted(cell.items())) for cell in row] for row in cells]
    return Algebra(F, labels, {}, table)


def _find_unit(B):
    """Solve u e_i = e_i u = e_i for all i; raises BadUnit if impossible."""
    from cychom.errors import BadUnit
    F = B.field
    d = B.dim
    # unknown u = sum u_k e_k; equations are linear in u
    rows = []
    rhs = []
    for i in range(d):
        for side in (0, 1):
            coeffs = {}
            for k in range(d):
                cell = B.table[k][i] if side == 0 else B.table[i][k]
                for r, c in cell:
                    coeffs.setdefault(r, {})[k] = c
            for r in range(d):
                rows.append(coeffs.get(r, {}))
                rhs.append(F.one if r == i else F.zero)
    M = SparseMatrix.from_rows(len(rows), d, {n: r for n, r in enumerate(rows)}, F)
    x = solve(M, {n: v for n, v in enumerate(rhs) if v != 0})
    if x is None:
        raise BadUnit(B.labels[0])
    return {B.labels[k]: v for k, v in x.items()}

