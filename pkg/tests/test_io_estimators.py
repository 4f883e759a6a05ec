import json

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from cychom import constructions as cons
from cychom.errors import CarrierMismatch, ParseError
from cychom.estimators import CyclicHomology, HochschildCohomology, HochschildHomology, PeriodicCyclicHomology
from cychom.fields import QQ
from cychom.io import algebra_to_json, build, load_algebra, load_cocycle, load_matrix, read_json


def test_raw_algebra_roundtrip(tmp_path):
    M = cons.matrix_algebra(QQ, 2)
    path = tmp_path / "m2.json"
    path.write_text(json.dumps(algebra_to_json(M)))
    A = load_algebra(str(path))
    assert A.labels == M.labels and A.table == M.table


def test_malformed_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        read_json(str(bad))
    with pytest.raises(ParseError):
        read_json(str(tmp_path / "missing.json"))
    with pytest.raises(ParseError):
        build({"construct": "hypercube"})
    with pytest.raises(ParseError):
        build({"construct": "matrix", "n": "two"})
    with pytest.raises(ParseError):
        load_algebra({"labels": ["1"], "unit": {"1": "1"}, "structure": [{"i": "1", "j": "1", "k": "y", "c": "1"}]})


def test_nested_specs():
    A = build({"construct": "tensor", "factors": [{"construct": "group", "cyclic": 2},
                                                  {"construct": "matrix", "n": 2}]})
    assert A.dim == 8
    B = build({"construct": "matrices_over", "base": {"construct": "truncated_poly", "m": 2}, "k": 2})
    assert B.dim == 8
    C = build({"construct": "groupoid", "transitive": {"objects": 2, "group": {"cyclic": 2}}})
    assert C.dim == 8
    W = build({"construct": "weyl_torus", "p": 1, "q": 3})
    e = load_matrix(W, {"builtin": "weyl_idempotent"})
    assert e.idempotent


def test_explicit_cocycle_and_witness():
    phi = load_cocycle({"kind": "explicit", "algebra": {"construct": "matrix", "n": 2}, "degree": 0,
                        "values": [{"args": ["E:1,1"], "value": "1"}, {"args": ["E:2,2"], "value": "1"}]})
    assert phi.verified
    M = phi.carrier
    u = load_matrix(M, {"entries": [[{"E:1,1": "1", "E:1,2": "1", "E:2,2": "1"}]],
                        "witness": [[{"E:1,1": "1", "E:1,2": "-1", "E:2,2": "1"}]]})
    assert u.witness is not None


def test_estimators():
    algebras = [cons.matrix_algebra(QQ, 2), cons.truncated_poly(QQ, 2)]
    X = HochschildHomology(max_degree=3).fit_transform(algebras)
    assert X.dtype == np.int64
    assert X.tolist() == [[1, 0, 0, 0], [2, 1, 1, 1]]
    hc = CyclicHomology(max_degree=4, method="all").fit(algebras)
    assert hc.transform(algebras).tolist() == [[1, 0, 1, 0, 1], [2, 0, 2, 0, 2]]
    assert HochschildCohomology(max_degree=2).fit_transform(algebras).tolist() == [[1, 0, 0], [2, 1, 1]]
    assert PeriodicCyclicHomology(window=4).fit_transform(algebras).tolist() == [1, 1]


def test_estimator_contract():
    est = HochschildHomology(max_degree=2)
    assert clone(est).get_params() == {"max_degree": 2, "size_cap": None}
    with pytest.raises(NotFittedError):
        est.transform([cons.truncated_poly(QQ, 1)])
    with pytest.raises(ValueError):
        HochschildHomology(max_degree=-1).fit([cons.truncated_poly(QQ, 1)])
    with pytest.raises(ValueError):
        CyclicHomology(method="magic").fit([cons.truncated_poly(QQ, 1)])
    with pytest.raises(CarrierMismatch):
        HochschildHomology().fit(cons.polynomial_torus())
    # specs are accepted in place of algebras, and pipelines work
    pipe = Pipeline([("hh", HochschildHomology(max_degree=1))])
    assert pipe.fit_transform([{"construct": "group", "cyclic": 3}]).tolist() == [[3, 0]]
