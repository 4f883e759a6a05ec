"""
Associative unital algebras.

``Algebra`` is finite dimensional and given by structure constants on
a list of string labels.  ``BasedAlgebra`` has a possibly infinite label
set and a product rule; it is checked lazily on the triples that are
actually used and keeps an audit log of what was checked.

Both expose the same small carrier protocol used by elements, traces,
derivations and cochains:

    field, is_finite, mul_labels(a, b) -> {label: scalar}, unit (dict),
    format_label(label), parse_label(text)
"""

import threading
from dataclasses import dataclass, field as dc_field
from itertools import product

from cychom.errors import (BadUnit, CarrierMismatch, FieldMismatch, NotADerivation,
                           NotAssociative, NotATrace, NotInvertible, ParseError)
from cychom.fields import QQ
from cychom.linalg import SparseMatrix, solve


def _add_into(acc, items, scale=1):
    for k, v in items:
        w = acc.get(k, 0) + v * scale
        if w != 0:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


class Algebra(object):
    """Finite dimensional associative unital algebra.

    Do not call directly; use :func:`validate_algebra`, which checks the
    axioms exhaustively before returning one.
    """

    is_finite = True

    def __init__(self, field, labels, unit, table, name=None):
        self.field = field
        self.labels = tuple(labels)
        self.index = {l: i for i, l in enumerate(self.labels)}
        self.dim = len(self.labels)
        # table[i][j] is a tuple of (k, c) with e_i e_j = sum c e_k
        self.table = table
        self.unit_vec = {self.index[l]: v for l, v in unit.items()}
        self.unit = dict(unit)
        self.name = name or "algebra"
        self.traces = {}
        self.derivations = {}
        self.notes = []

    def __repr__(self):
        return "Algebra(%s, dim=%d over %s)" % (self.name, self.dim, self.field)

    # carrier protocol

    def mul_idx(self, i, j):
        return self.table[i][j]

    def mul_labels(self, a, b):
        labels = self.labels
        return {labels[k]: c for k, c in self.table[self.index[a]][self.index[b]]}

    def format_label(self, label):
        return label

    def parse_label(self, text):
        if text not in self.index:
            raise ParseError("unknown basis label %r in %s" % (text, self.name))
        return text

    # conveniences

    def element(self, coeffs=None, **kw):
        return Element(self, coeffs or kw)

    def basis(self, label):
        return Element(self, {label: self.field.one})

    def one(self):
        return Element(self, self.unit)

    def zero(self):
        return Element(self, {})

    def structure_entries(self):
        """(i, j, k, c) label quadruples; the file-format view."""
        for i, row in enumerate(self.table):
            for j, cell in enumerate(row):
                for k, c in cell:
                    yield self.labels[i], self.labels[j], self.labels[k], c

    def left_matrix(self, a):
        """Matrix of x -> a x in the basis."""
        cols = []
        vec = a.index_vector()
        for j in range(self.dim):
            col = {}
            for i, x in vec.items():
                _add_into(col, self.table[i][j], x)
            cols.append(col)
        return SparseMatrix.from_columns(self.dim, cols, self.field)

    def right_matrix(self, a):
        cols = []
        vec = a.index_vector()
        for i in range(self.dim):
            col = {}
            for j, x in vec.items():
                _add_into(col, self.table[i][j], x)
            cols.append(col)
        return SparseMatrix.from_columns(self.dim, cols, self.field)

    def is_commutative(self):
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(i))

    def commutator_quotient_dim(self):
        """dim A/[A, A] straight from the structure constants."""
        from cychom.linalg import span_rank
        vecs = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                v = dict(self.table[i][j])
                _add_into(v, self.table[j][i], -1)
                if v:
                    vecs.append(v)
        return self.dim - span_rank(vecs, self.field)


class BasedAlgebra(object):
    """Algebra on an effectively enumerable basis with a product rule.

    ``rule(a, b)`` returns a finite dict ``label -> scalar``.  Labels are
    hashable Python values; ``format_label``/``parse_label`` give the
    string forms used in files.
    """

    is_finite = False

    def __init__(self, field, rule, unit, format_label=str, parse_label=None,
                 domain="", name=None, grading=None):
        self.field = field
        self._rule = rule
        self.unit = dict(unit)
        self._format = format_label
        self._parse = parse_label
        self.domain = domain
        self.name = name or "based algebra"
        # grading(label) -> hashable degree in an abelian group, product homogeneous
        self.grading = grading
        self._cache = {}
        self._lock = threading.Lock()
        self.audit_log = []
        self.traces = {}
        self.derivations = {}
        self.notes = []

    def __repr__(self):
        return "BasedAlgebra(%s over %s)" % (self.name, self.field)

    def mul_labels(self, a, b):
        key = (a, b)
        out = self._cache.get(key)
        if out is None:
            out = {k: v for k, v in self._rule(a, b).items() if v != 0}
            self._cache[key] = out
        return out

    def format_label(self, label):
        return self._format(label)

    def parse_label(self, text):
        if self._parse is None:
            raise ParseError("%s has no label parser" % self.name)
        return self._parse(text)

    def element(self, coeffs=None, **kw):
        return Element(self, coeffs or kw)

    def basis(self, label):
        return Element(self, {label: self.field.one})

    def one(self):
        return Element(self, self.unit)

    def zero(self):
        return Element(self, {})

    def audit(self, triples, raise_on_failure=True):
        """Check associativity on the given label triples and log the result."""
        triples = list(triples)
        bad = None
        for a, b, c in triples:
            lhs = (self.basis(a) * self.basis(b)) * self.basis(c)
            rhs = self.basis(a) * (self.basis(b) * self.basis(c))
            if lhs != rhs:
                bad = (a, b, c)
                break
        with self._lock:
            self.audit_log.append({"triples": len(triples), "ok": bad is None,
                                   "counterexample": bad})
        if bad is not None and raise_on_failure:
            raise NotAssociative(bad)
        return bad is None

    def audit_window(self, labels):
        labels = list(labels)
        return self.audit(product(labels, labels, labels))


# ----------------------------------------------------------------------


class Element(object):
    """Finitely supported combination of basis labels."""

    __slots__ = ("carrier", "coeffs")

    def __init__(self, carrier, coeffs=None):
        self.carrier = carrier
        f = carrier.field
        out = {}
        for k, v in (coeffs or {}).items():
            v = f(v)
            if v != 0:
                out[k] = v
        self.coeffs = out

    @classmethod
    def _raw(cls, carrier, coeffs):
        e = cls.__new__(cls)
        e.carrier = carrier
        e.coeffs = coeffs
        return e

    def _same(self, other):
        if not isinstance(other, Element):
            return None
        if other.carrier is not self.carrier:
            raise CarrierMismatch("elements of %r and %r" % (self.carrier, other.carrier))
        return other

    def __add__(self, other):
        if not isinstance(other, Element):
            if other == 0:
                return self
            other = self.carrier.one() * other
        o = self._same(other)
        return Element._raw(self.carrier, _add_into(dict(self.coeffs), o.coeffs.items()))

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = self.carrier.one() * other
        o = self._same(other)
        return Element._raw(self.carrier, _add_into(dict(self.coeffs), o.coeffs.items(), -1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Element._raw(self.carrier, {k: -v for k, v in self.coeffs.items()})

    def scale(self, c):
        c = self.carrier.field(c)
        if c == 0:
            return Element._raw(self.carrier, {})
        return Element._raw(self.carrier, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        o = self._same(other)
        return element_mul(self, o)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(1 / self.carrier.field(c))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.carrier.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.carrier is other.carrier and self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, label):
        return self.coeffs.get(label, self.carrier.field.zero)

    def support(self):
        return list(self.coeffs)

    def index_vector(self):
        idx = self.carrier.index
        return {idx[k]: v for k, v in self.coeffs.items()}

    def inverse(self):
        """Two-sided inverse, by solving a x = 1 (finite carriers only)."""
        A = self.carrier
        if not A.is_finite:
            raise NotInvertible("inverse needs a finite dimensional carrier")
        L = A.left_matrix(self)
        x = solve(L, A.unit_vec)
        if x is None:
            raise NotInvertible("%s has no right inverse" % (self,))
        inv = Element(A, {A.labels[i]: v for i, v in x.items()})
        if inv * self != A.one():
            raise NotInvertible("%s has a right inverse only" % (self,))
        return inv

    def to_json(self):
        A = self.carrier
        fmt = A.field.format
        return {A.format_label(k): fmt(v) for k, v in sorted(self.coeffs.items(), key=lambda kv: _sort_key(A, kv[0]))}

    def __repr__(self):
        return "Element(%s)" % (self,)

    def __str__(self):
        if not self.coeffs:
            return "0"
        A = self.carrier
        parts = []
        for k, v in sorted(self.coeffs.items(), key=lambda kv: _sort_key(A, kv[0])):
            parts.append("(%s)*[%s]" % (A.field.format(v), A.format_label(k)))
        return " + ".join(parts)


def _sort_key(A, label):
    if A.is_finite:
        return A.index[label]
    return A.format_label(label)


def element_mul(a, b):
    """Bilinear extension of the basis product."""
    if a.carrier is not b.carrier:
        raise CarrierMismatch("elements of %r and %r" % (a.carrier, b.carrier))
    A = a.carrier
    acc = {}
    if A.is_finite:
        idx = A.index
        labels = A.labels
        table = A.table
        for ka, va in a.coeffs.items():
            row = table[idx[ka]]
            for kb, vb in b.coeffs.items():
                c = va * vb
                for k, s in row[idx[kb]]:
                    lab = labels[k]
                    w = acc.get(lab, 0) + s * c
                    if w != 0:
                        acc[lab] = w
                    else:
                        acc.pop(lab, None)
    else:
        for ka, va in a.coeffs.items():
            for kb, vb in b.coeffs.items():
                _add_into(acc, A.mul_labels(ka, kb).items(), va * vb)
    return Element._raw(A, acc)


# ----------------------------------------------------------------------
# validation


def validate_algebra(field, labels, unit, structure, name=None):
    """Build an Algebra from raw data after checking the axioms exactly.

    ``structure`` is an iterable of (i, j, k, c) label quadruples meaning
    e_i e_j contains c e_k; repeated quadruples add up.  Raises
    NotAssociative with the first failing triple or BadUnit.
    """
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise ParseError("basis labels must be distinct")
    if not labels:
        raise ParseError("an algebra needs at least one basis element")
    index = {l: i for i, l in enumerate(labels)}
    d = len(labels)
    cells = [[{} for _ in range(d)] for _ in range(d)]
    for i, j, k, c in structure:
        for l in (i, j, k):
            if l not in index:
                raise ParseError("structure constant mentions unknown label %r" % (l,))
        c = _in_field(field, c)
        cell = cells[index[i]][index[j]]
        w = cell.get(index[k], 0) + c
        if w != 0:
            cell[index[k]] = w
        else:
            cell.pop(index[k], None)
    table = [[tuple(sorted(cell.items())) for cell in row] for row in cells]
    unit_c = {}
    for l, c in unit.items():
        if l not in index:
            raise ParseError("unit mentions unknown label %r" % (l,))
        c = _in_field(field, c)
        if c != 0:
            unit_c[l] = c
    A = Algebra(field, labels, unit_c, table, name=name)
    _check_unit(A)
    _check_associative(A)
    return A


def _in_field(field, c):
    if isinstance(c, str):
        return field.parse(c)
    try:
        return field(c)
    except FieldMismatch:
        raise
    except Exception as exc:
        raise FieldMismatch("scalar %r not in %s: %s" % (c, field, exc))


def _check_unit(A):
    u = A.unit_vec
    for i in range(A.dim):
        left, right = {}, {}
        for k, c in u.items():
            _add_into(left, A.table[k][i], c)
            _add_into(right, A.table[i][k], c)
        target = {i: A.field.one}
        if left != target or right != target:
            raise BadUnit(A.labels[i])


def _check_associative(A):
    table = A.table
    d = A.dim
    for i in range(d):
        for j in range(d):
            ij = table[i][j]
            for l in range(d):
                lhs = {}
                for k, c in ij:
                    _add_into(lhs, table[k][l], c)
                rhs = {}
                for k, c in table[j][l]:
                    _add_into(rhs, table[i][k], c)
                if lhs != rhs:
                    raise NotAssociative((A.labels[i], A.labels[j], A.labels[l]))


# ----------------------------------------------------------------------
# traces and derivations


@dataclass
class Verdict(object):
    """Outcome of a check.  Truthy iff it passed."""

    passed: bool
    name: str = ""
    counterexample: object = None
    window: object = None
    details: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _window(carrier, window):
    if carrier.is_finite:
        return list(carrier.labels) if window is None else list(window)
    if window is None:
        raise ValueError("a based algebra needs an explicit support window")
    return list(window)


class Trace(object):
    """A linear functional with tau(ab) = tau(ba) on its checked window."""

    def __init__(self, carrier, values, window=None, name="tau"):
        self.carrier = carrier
        self._values = values
        self.window = window
        self.name = name

    def value_label(self, label):
        if callable(self._values):
            return self.carrier.field(self._values(label))
        return self._values.get(label, self.carrier.field.zero)

    def __call__(self, a):
        if a.carrier is not self.carrier:
            raise CarrierMismatch("trace and element live on different algebras")
        z = self.carrier.field.zero
        total = z
        for k, v in a.coeffs.items():
            t = self.value_label(k)
            if t != 0:
                total = total + v * t
        return total

    def __add__(self, other):
        return Trace(self.carrier, lambda l: self.value_label(l) + other.value_label(l),
                     self.window, "%s+%s" % (self.name, other.name))

    def scale(self, c):
        c = self.carrier.field(c)
        return Trace(self.carrier, lambda l: c * self.value_label(l), self.window,
                     "%s*%s" % (self.carrier.field.format(c), self.name))

    __rmul__ = scale

    def covector(self):
        A = self.carrier
        return {A.index[l]: self.value_label(l) for l in A.labels if self.value_label(l) != 0}


def validate_trace(carrier, values, window=None, name="tau"):
    """Check tau(e_i e_j) = tau(e_j e_i) on all pairs (of the window)."""
    if isinstance(values, dict):
        values = {carrier.parse_label(k) if isinstance(k, str) and not carrier.is_finite else k:
                  carrier.field(v) if not isinstance(v, str) else carrier.field.parse(v)
                  for k, v in values.items()}
    tau = Trace(carrier, values, None if carrier.is_finite else list(window), name)
    labels = _window(carrier, window)
    for i, a in enumerate(labels):
        ea = carrier.basis(a)
        for b in labels[i + 1:]:
            eb = carrier.basis(b)
            if tau(ea * eb) != tau(eb * ea):
                raise NotATrace((a, b))
    return tau


class Derivation(object):
    """Linear map D with D(ab) = D(a)b + aD(b) on its checked window."""

    def __init__(self, carrier, action, window=None, name="D"):
        self.carrier = carrier
        self._action = action
        self.window = window
        self.name = name

    def on_label(self, label):
        act = self._action
        out = act(label) if callable(act) else act.get(label)
        if out is None:
            return self.carrier.zero()
        if isinstance(out, Element):
            return out
        return Element(self.carrier, out)

    def __call__(self, a):
        if a.carrier is not self.carrier:
            raise CarrierMismatch("derivation and element live on different algebras")
        acc = {}
        for k, v in a.coeffs.items():
            _add_into(acc, self.on_label(k).coeffs.items(), v)
        return Element._raw(self.carrier, acc)

    def matrix(self):
        A = self.carrier
        cols = [self.on_label(l).index_vector() for l in A.labels]
        return SparseMatrix.from_columns(A.dim, cols, A.field)

    def bracket(self, other):
        """[D1, D2] = D1 D2 - D2 D1."""
        def act(label):
            e = self.carrier.basis(label)
            return self(other(e)) - other(self(e))
        return Derivation(self.carrier, act, self.window,
                          "[%s,%s]" % (self.name, other.name))

    def __add__(self, other):
        return Derivation(self.carrier, lambda l: self.on_label(l) + other.on_label(l),
                          self.window, "%s+%s" % (self.name, other.name))

    def scale(self, c):
        c = self.carrier.field(c)
        return Derivation(self.carrier, lambda l: self.on_label(l).scale(c), self.window,
                          "%s*%s" % (self.carrier.field.format(c), self.name))

    __rmul__ = scale


def validate_derivation(carrier, action, window=None, name="D"):
    """Check the Leibniz rule on all basis pairs (of the window).

    ``action`` is a dict label -> Element/coefficient dict, a callable, or
    for finite carriers a SparseMatrix in the basis.
    """
    if isinstance(action, SparseMatrix):
        M = action
        cols = M.column_dicts()
        action = {carrier.labels[j]: Element(carrier, {carrier.labels[i]: v for i, v in col.items()})
                  for j, col in enumerate(cols)}
    D = Derivation(carrier, action, None if carrier.is_finite else list(window), name)
    labels = _window(carrier, window)
    for a in labels:
        ea = carrier.basis(a)
        Da = D(ea)
        for b in labels:
            eb = carrier.basis(b)
            if D(ea * eb) != Da * eb + ea * D(eb):
                raise NotADerivation((a, b))
    return D


def inner_derivation(a, name=None):
    A = a.carrier
    return Derivation(A, lambda l: a * A.basis(l) - A.basis(l) * a, None,
                      name or "ad(%s)" % a)


def check_invariant_trace(tau, derivations, window=None):
    """tau(D(e)) = 0 for every derivation and checked basis label."""
    carrier = tau.carrier
    labels = _window(carrier, window if window is not None else tau.window)
    for D in derivations:
        if D.carrier is not carrier:
            raise CarrierMismatch("trace and derivation on different algebras")
        for l in labels:
            v = tau(D.on_label(l))
            if v != 0:
                return Verdict(False, "invariant_trace", counterexample=(D.name, l),
                               window=None if carrier.is_finite else labels,
                               details={"value": carrier.field.format(v)})
    return Verdict(True, "invariant_trace", window=None if carrier.is_finite else labels)


def left_regular_is_representation(A):
    """L_{e_i e_j} = L_{e_i} L_{e_j} on all basis pairs and L_1 = id."""
    Ls = [A.left_matrix(A.basis(l)) for l in A.labels]
    if A.left_matrix(A.one()) != SparseMatrix.identity(A.dim, A.field):
        return False
    for i, a in enumerate(A.labels):
        for j, b in enumerate(A.labels):
            if A.left_matrix(A.basis(a) * A.basis(b)) != Ls[i] @ Ls[j]:
                return False
    return True


# ----------------------------------------------------------------------
# bimodules (finite dimensional, over a finite dimensional algebra)


class Bimodule(object):
    """M with left and right actions given per basis element of A.

    ``left[l]`` is the matrix of m -> e_l m and ``right[l]`` the matrix
    of m -> m e_l, both in the basis ``labels`` of M.
    """

    def __init__(self, algebra, labels, left, right, name="M"):
        self.algebra = algebra
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.left = dict(left)
        self.right = dict(right)
        self.name = name

    def left_action(self, a):
        """Matrix of m -> a m for an Element a."""
        M = SparseMatrix.zeros(self.dim, self.dim, self.algebra.field)
        for k, v in a.coeffs.items():
            M = M + self.left[k].scale(v)
        return M

    def right_action(self, a):
        M = SparseMatrix.zeros(self.dim, self.dim, self.algebra.field)
        for k, v in a.coeffs.items():
            M = M + self.right[k].scale(v)
        return M

    def validate(self):
        """Unital, associative and commuting actions; raises ValueError."""
        A = self.algebra
        I = SparseMatrix.identity(self.dim, A.field)
        if self.left_action(A.one()) != I or self.right_action(A.one()) != I:
            raise ValueError("bimodule actions are not unital")
        for a in A.labels:
            for b in A.labels:
                ab = A.basis(a) * A.basis(b)
                if self.left_action(ab) != self.left[a] @ self.left[b]:
                    raise ValueError("left action not associative at %r" % ((a, b),))
                if self.right_action(ab) != self.right[b] @ self.right[a]:
                    raise ValueError("right action not associative at %r" % ((a, b),))
                if self.left[a] @ self.right[b] != self.right[b] @ self.left[a]:
                    raise ValueError("actions do not commute at %r" % ((a, b),))
        return self


def regular_bimodule(A):
    """M = A with a(m)b = amb."""
    left = {l: A.left_matrix(A.basis(l)) for l in A.labels}
    right = {l: A.right_matrix(A.basis(l)) for l in A.labels}
    return Bimodule(A, A.labels, left, right, name="A")


def dual_bimodule(A):
    """M = A* with (a f b)(c) = f(b c a), in the dual basis."""
    # (e_l f)(c) = f(c e_l): matrix is the transpose of right multiplication
    left = {l: A.right_matrix(A.basis(l)).transpose() for l in A.labels}
    right = {l: A.left_matrix(A.basis(l)).transpose() for l in A.labels}
    return Bimodule(A, ["%s*" % l for l in A.labels], left, right, name="A*")
