"""JSON readers and writers.

Scalars are always strings in the literal grammar of the field ("3/4",
"z^2 - 1", "(t + 1)/(t)").  Anything structurally wrong raises ParseError,
which the CLI maps to exit code 2.
"""
import json

from cychom import constructions as cons
from cychom.algebra import Algebra, Bimodule, Element, validate_algebra, validate_trace
from cychom.errors import ParseError
from cychom.fields import QQ, field_from_spec
from cychom.linalg import SparseMatrix


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError("%s: malformed JSON (%s)" % (path, exc))
    except OSError as exc:
        raise ParseError("%s: %s" % (path, exc.strerror or exc))


def dumps(obj):
    """Canonical JSON text: sorted keys, two-space indent."""
    return json.dumps(obj, sort_keys=True, indent=2)


def _need(spec, key, kind=None):
    if not isinstance(spec, dict) or key not in spec:
        raise ParseError("%s spec needs %r" % (kind or "this", key))
    return spec[key]


def _int(spec, key, kind, default=None):
    v = spec.get(key, default) if isinstance(spec, dict) else None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError("%s: %r must be an integer" % (kind, key))
    return v


def _scalar(F, text):
    if isinstance(text, bool):
        raise ParseError("scalar literal expected, got %r" % (text,))
    if isinstance(text, int):
        return F(text)
    if not isinstance(text, str):
        raise ParseError("scalar literal expected, got %r" % (text,))
    return F.parse(text)


def _field(spec):
    try:
        return field_from_spec(spec.get("field", "Q") if isinstance(spec, dict) else "Q")
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc))


# ----------------------------------------------------------------------
# algebras


def algebra_to_json(A):
    fmt = A.field.format
    return {
        "field": A.field.spec(),
        "labels": list(A.labels),
        "unit": {l: fmt(c) for l, c in A.unit.items()},
        "structure": [{"i": i, "j": j, "k": k, "c": fmt(c)} for i, j, k, c in A.structure_entries()],
        "name": A.name,
    }


def _raw_algebra(spec):
    F = _field(spec)
    labels = _need(spec, "labels", "algebra")
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise ParseError("labels must be a list of strings")
    unit = _need(spec, "unit", "algebra")
    if not isinstance(unit, dict):
        raise ParseError("unit must be an object {label: scalar}")
    unit = {l: _scalar(F, c) for l, c in unit.items()}
    entries = _need(spec, "structure", "algebra")
    if not isinstance(entries, list):
        raise ParseError("structure must be a list")
    structure = []
    for e in entries:
        if not isinstance(e, dict):
            raise ParseError("structure entries look like {i, j, k, c}")
        structure.append((_need(e, "i"), _need(e, "j"), _need(e, "k"), _scalar(F, _need(e, "c"))))
    return validate_algebra(F, labels, unit, structure, name=spec.get("name", "algebra"))


def load_algebra(spec):
    """An Algebra or BasedAlgebra from a file path, raw algebra JSON or construction spec."""
    if isinstance(spec, str):
        spec = read_json(spec)
    if not isinstance(spec, dict):
        raise ParseError("an algebra spec must be a JSON object")
    if "construct" in spec:
        return build(spec)
    return _raw_algebra(spec)


def load_group(spec):
    """{"cyclic": n} | {"symmetric": n} | {"lattice": k} | {"elements", "mult", "identity"}."""
    if not isinstance(spec, dict):
        raise ParseError("group spec must be an object")
    if "cyclic" in spec:
        return cons.cyclic_group(_int(spec, "cyclic", "group"))
    if "symmetric" in spec:
        return cons.symmetric_group(_int(spec, "symmetric", "group"))
    if "lattice" in spec:
        return cons.Lattice(_int(spec, "lattice", "group"))
    table = spec.get("table", spec)
    els = _need(table, "elements", "group table")
    mult = _need(table, "mult", "group table")
    if not isinstance(mult, dict):
        raise ParseError('group mult must map "g,h" to a label')
    return cons.group_from_table(els, mult, _need(table, "identity", "group table"),
                                 name=spec.get("name", "G"))


def _load_groupoid(spec):
    if "pairs" in spec:
        return cons.pairs_groupoid(_int(spec, "pairs", "groupoid"))
    if "transitive" in spec:
        t = spec["transitive"]
        return cons.transitive_groupoid(_int(t, "objects", "groupoid"), load_group(_need(t, "group")))
    if "disjoint_union" in spec:
        parts = spec["disjoint_union"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise ParseError("disjoint_union takes two groupoid specs")
        return cons.disjoint_union(_load_groupoid(parts[0]), _load_groupoid(parts[1]))
    if "group" in spec:
        return cons.group_as_groupoid(load_group(spec["group"]))
    compose = {}
    for item in _need(spec, "compose", "groupoid"):
        if not isinstance(item, list) or len(item) != 3:
            raise ParseError("compose entries are [g1, g2, g1 o g2]")
        compose[item[0], item[1]] = item[2]
    return cons.Groupoid(_need(spec, "objects"), _need(spec, "morphisms"), _need(spec, "source"),
                         _need(spec, "target"), compose, _need(spec, "identities"),
                         name=spec.get("name", "groupoid"))


def _dense(F, rows, n, what):
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise ParseError("%s must be a %dx%d matrix" % (what, n, n))
    return SparseMatrix.from_dense([[_scalar(F, c) for c in r] for r in rows], F)


def _load_action(A, G, spec):
    if spec in (None, "trivial"):
        return cons.trivial_action(G, A)
    if not isinstance(spec, dict):
        raise ParseError('action must be "trivial" or {g: matrix}')
    maps = {g: _dense(A.field, m, A.dim, "action matrix of %s" % g) for g, m in spec.items()}
    return cons.Action(G, A, maps)


def _load_bimodule(A, spec):
    """{"labels": [...], "left": {a: matrix}, "right": {a: matrix}}; missing actions are 0
    except for the unit, which acts as the identity."""
    if spec in ("regular", "A"):
        from cychom.algebra import regular_bimodule
        return regular_bimodule(A)
    if spec in ("dual", "A*", "A_dual"):
        from cychom.algebra import dual_bimodule
        return dual_bimodule(A)
    labels = _need(spec, "labels", "module")
    F, n = A.field, len(labels)
    unit = next(iter(A.unit)) if len(A.unit) == 1 and A.unit[next(iter(A.unit))] == F.one else None

    def side(key):
        given = spec.get(key, {})
        out = {}
        for a in A.labels:
            if a in given:
                out[a] = _dense(F, given[a], n, "%s action of %s" % (key, a))
            elif a == unit:
                out[a] = SparseMatrix.identity(n, F)
            else:
                out[a] = SparseMatrix.zeros(n, n, F)
        return out

    M = Bimodule(A, labels, side("left"), side("right"), name=spec.get("name", "M"))
    try:
        return M.validate()
    except ValueError as exc:
        raise ParseError("bad bimodule: %s" % exc)


def _load_rules(F, rules):
    out = {}
    if not isinstance(rules, list):
        raise ParseError("rewriting rules are a list of {lhs, rhs}")
    for r in rules:
        lhs = tuple(_need(r, "lhs", "rule"))
        rhs = {}
        for term in _need(r, "rhs", "rule"):
            rhs[tuple(_need(term, "word", "rule term"))] = _scalar(F, term.get("c", "1"))
        out[lhs] = rhs
    return out


def build(spec):
    """Construction spec -> algebra; specs nest through "base", "summands", "factors", "of"."""
    kind = _need(spec, "construct")
    F = _field(spec)
    if kind == "matrix":
        return cons.matrix_algebra(F, _int(spec, "n", kind))
    if kind == "truncated_poly":
        return cons.truncated_poly(F, _int(spec, "m", kind))
    if kind == "group":
        return cons.group_algebra(F, load_group(spec))
    if kind == "groupoid":
        return cons.groupoid_algebra(F, _load_groupoid(spec))
    if kind == "crossed_product":
        A = load_algebra(_need(spec, "base", kind))
        G = load_group(_need(spec, "group", kind))
        return cons.crossed_product(A, _load_action(A, G, spec.get("action")))
    if kind == "weyl_torus":
        return cons.weyl_torus(_int(spec, "p", kind), _int(spec, "q", kind))
    if kind == "polynomial_torus":
        return cons.polynomial_torus(spec.get("var", "t"))
    if kind == "rewriting":
        preset = spec.get("preset")
        fuel = spec.get("fuel", 10000)
        if preset == "hopf_sphere":
            return cons.hopf_sphere_algebra(fuel)
        if preset == "podles_sphere":
            return cons.podles_sphere_algebra(fuel)
        if preset is not None:
            raise ParseError("unknown rewriting preset %r" % (preset,))
        return cons.rewriting_algebra(_need(spec, "generators", kind), _load_rules(F, _need(spec, "rules", kind)),
                                      F, fuel, name=spec.get("name", "rewriting algebra"))
    if kind == "extension":
        A = load_algebra(_need(spec, "base", kind))
        M = _load_bimodule(A, _need(spec, "module", kind))
        f = {}
        for e in spec.get("cocycle", []):
            f.setdefault((_need(e, "a"), _need(e, "b")), {})[_need(e, "m")] = _scalar(A.field, _need(e, "c"))
        return cons.extension_from_2cocycle(A, M, f)[0]
    if kind == "direct_sum":
        parts = [load_algebra(s) for s in _need(spec, "summands", kind)]
        out = parts[0]
        for p in parts[1:]:
            out = cons.direct_sum(out, p)
        return out
    if kind == "tensor":
        parts = [load_algebra(s) for s in _need(spec, "factors", kind)]
        out = parts[0]
        for p in parts[1:]:
            out = cons.tensor_product(out, p)
        return out
    if kind == "opposite":
        return cons.opposite(load_algebra(_need(spec, "of", kind)))
    if kind == "matrices_over":
        return cons.matrices_over(load_algebra(_need(spec, "base", kind)), _int(spec, "k", kind))
    raise ParseError("unknown construction %r" % (kind,))


# ----------------------------------------------------------------------
# elements and matrices


def load_element(A, spec):
    if not isinstance(spec, dict):
        raise ParseError("an element is an object {label: scalar}")
    return Element(A, {A.parse_label(l): _scalar(A.field, c) for l, c in spec.items()})


def load_matrix(A, spec):
    """AlgMatrix JSON: {"entries": [[element, ...], ...], "witness": ...} or {"builtin": name}.

    Square matrices that satisfy e^2 = e are stamped idempotent; a witness
    is checked and stamped as the inverse.
    """
    from cychom.chern import AlgMatrix
    if isinstance(spec, str):
        spec = read_json(spec)
    if not isinstance(spec, dict):
        raise ParseError("matrix spec must be an object")
    builtin = spec.get("builtin")
    if builtin is not None:
        m = _builtin_matrix(A, builtin)
    else:
        rows = _need(spec, "entries", "matrix")
        if not isinstance(rows, list) or not rows:
            raise ParseError("entries must be a non-empty list of rows")
        try:
            m = AlgMatrix(A, [[load_element(A, x) for x in r] for r in rows])
        except ValueError as exc:
            raise ParseError(str(exc))
    if "witness" in spec:
        w = AlgMatrix(A, [[load_element(A, x) for x in r] for r in spec["witness"]])
        m.certify_invertible(w)
    elif m * m == m:
        m.certify_idempotent()
    return m


def _builtin_matrix(A, name):
    from cychom.chern import AlgMatrix
    needs = {"hopf_idempotent": "hopf_sphere", "podles_idempotent": "podles_sphere",
             "weyl_idempotent": "weyl_torus"}
    if name in needs and getattr(A, "preset", None) != needs[name]:
        raise ParseError("builtin %r does not live on %s" % (name, A.name))
    if name == "hopf_idempotent":
        return cons.hopf_idempotent(A)
    if name == "podles_idempotent":
        return cons.podles_idempotent(A)
    if name == "weyl_idempotent":
        q = A.q
        half = A.field.one / q
        return AlgMatrix(A, [[A.element({"U^%dV^0" % j: half for j in range(q)})]])
    raise ParseError("unknown builtin matrix %r" % (name,))


def matrix_to_json(m):
    return m.to_json()


# ----------------------------------------------------------------------
# cocycles


def _window(A, spec):
    r = spec.get("window", 1)
    if isinstance(r, bool) or not isinstance(r, int) or r < 0:
        raise ParseError("window must be a non-negative radius")
    if hasattr(A, "group") and hasattr(A.group, "box"):
        return A.group.box(r)
    return cons.torus_window(r)


def load_cocycle(spec, validate=True):
    """Cocycle spec -> cyclic-verified Cochain (validation can be switched off)."""
    from cychom import chern
    if isinstance(spec, str):
        spec = read_json(spec)
    kind = _need(spec, "kind", "cocycle")
    A = load_algebra(_need(spec, "algebra", "cocycle"))
    F = A.field
    window = None if A.is_finite else _window(A, spec)
    name = spec.get("name", kind)
    if kind == "trace":
        if "values" in spec:
            vals = {A.parse_label(l): _scalar(F, c) for l, c in spec["values"].items()}
            if A.is_finite:
                tau = validate_trace(A, vals, name=name)
            else:
                tau = validate_trace(A, lambda l: vals.get(l, F.zero), window, name=name)
        else:
            key = spec.get("trace", "tau")
            if key not in A.traces:
                raise ParseError("algebra has no bundled trace %r (has %s)" % (key, sorted(A.traces)))
            tau = A.traces[key]
        phi = chern.trace_cochain(tau)
    elif kind == "lie":
        tau = A.traces.get(spec.get("trace", "tau"))
        if tau is None:
            raise ParseError("lie cocycle needs a bundled invariant trace")
        names = _need(spec, "derivations", kind)
        try:
            Ds = [A.derivations[n] for n in names]
        except KeyError as exc:
            raise ParseError("unknown derivation %s" % exc)
        c = {}
        for key, v in _need(spec, "c", kind).items():
            idx = tuple(int(x) for x in key.split(",") if x.strip() != "")
            c[idx] = _scalar(F, v)
        phi = chern.lie_action_to_cyclic(tau, Ds, c, window)
        phi.name = name
    elif kind == "group_cocycle":
        phi = chern.group_cocycle_to_cyclic(A, _group_cocycle(A, spec, name))
    elif kind == "explicit":
        if not A.is_finite:
            raise ParseError("explicit cocycles need a finite algebra")
        n = _int(spec, "degree", kind)
        vals = {}
        for item in _need(spec, "values", kind):
            args = tuple(A.parse_label(l) for l in _need(item, "args", "value"))
            if len(args) != n + 1:
                raise ParseError("degree %d cochain takes %d arguments" % (n, n + 1))
            vals[args] = _scalar(F, _need(item, "value", "value"))
        phi = chern.dense_cochain(A, n, vals, name=name)
    else:
        raise ParseError("unknown cocycle kind %r" % (kind,))
    if validate:
        chern.validate_cyclic_cocycle(phi, window)
    return phi


def _group_cocycle(A, spec, name):
    from cychom.chern import GroupCocycleData
    G = getattr(A, "group", None)
    if G is None:
        raise ParseError("group cocycles need a group algebra")
    n = _int(spec, "degree", "group_cocycle")
    F = A.field
    if "linear" in spec:
        # degree 1 homomorphism Z^k -> Q, g -> sum w_i g_i
        w = [_scalar(F, x) for x in spec["linear"]]
        if n != 1 or len(w) != getattr(G, "rank", -1):
            raise ParseError("linear cocycles are degree 1 on a lattice of matching rank")
        rule = lambda g: sum((a * b for a, b in zip(w, g)), F.zero)
    elif "determinant" in spec:
        i, j = spec["determinant"]
        if n != 2 or not hasattr(G, "rank"):
            raise ParseError("determinant cocycles are degree 2 on a lattice")
        rule = lambda g, h: F(g[i] * h[j] - g[j] * h[i])
    elif "values" in spec:
        table = {}
        for item in spec["values"]:
            table[tuple(_need(item, "args", "value"))] = _scalar(F, _need(item, "value", "value"))
        rule = lambda *gs: table.get(tuple(gs), F.zero)
    else:
        raise ParseError("group cocycle needs linear, determinant or values")
    window = G.box(spec.get("window", 1)) if hasattr(G, "box") else None
    return GroupCocycleData(G, n, rule, F, window, name=name)
