"""Estimator-style front end to the homology engine.

Each estimator takes a batch of finite algebras as X.  ``fit`` computes and
keeps one HomologyReport per algebra; ``transform`` returns the dimensions
as an integer array, one row per algebra.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from cychom.algebra import Algebra
from cychom.complexes import (HC_METHODS, cyclic_homology, hochschild_cohomology, hochschild_homology,
                              periodic_cyclic)
from cychom.errors import CarrierMismatch


def check_algebra(A):
    """Return A if it is a finite algebra, else raise."""
    if isinstance(A, dict):
        from cychom.io import load_algebra
        A = load_algebra(A)
    if not isinstance(A, Algebra):
        if getattr(A, "is_finite", None) is False:
            raise CarrierMismatch("%s is not finite dimensional" % getattr(A, "name", A))
        raise TypeError("expected an Algebra, got %s" % type(A).__name__)
    return A


def check_algebras(X):
    """A single algebra or an iterable of them, as a list."""
    if isinstance(X, (Algebra, dict)) or getattr(X, "is_finite", None) is False:
        X = [X]
    out = [check_algebra(A) for A in X]
    if not out:
        raise ValueError("no algebras given")
    return out


def check_degree(n, name="max_degree"):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError("%s must be a non-negative integer, got %r" % (name, n))
    return int(n)


class _HomologyEstimator(BaseEstimator, TransformerMixin):

    def _report(self, A):
        raise NotImplementedError

    def fit(self, X, y=None):
        algebras = check_algebras(X)
        self.reports_ = [self._report(A) for A in algebras]
        self._seen = {id(A): r for A, r in zip(algebras, self.reports_)}
        self.n_algebras_ = len(algebras)
        return self

    def transform(self, X):
        check_is_fitted(self, "reports_")
        rows = []
        for A in check_algebras(X):
            rep = self._seen.get(id(A))
            if rep is None:
                rep = self._report(A)
            rows.append(rep.as_list())
        return np.array(rows, dtype=np.int64)


class HochschildHomology(_HomologyEstimator):
    """dim HH_n for n = 0..max_degree."""

    def __init__(self, max_degree=3, size_cap=None):
        self.max_degree = max_degree
        self.size_cap = size_cap

    def _report(self, A):
        return hochschild_homology(A, check_degree(self.max_degree), self.size_cap)


class HochschildCohomology(_HomologyEstimator):
    """dim H^n(A, M) with M = A or its linear dual."""

    def __init__(self, max_degree=3, coeff="A_dual", size_cap=None):
        self.max_degree = max_degree
        self.coeff = coeff
        self.size_cap = size_cap

    def _report(self, A):
        return hochschild_cohomology(A, self.coeff, check_degree(self.max_degree), self.size_cap)


class CyclicHomology(_HomologyEstimator):
    """dim HC_n; ``method`` picks the complex, "all" cross-checks every one."""

    def __init__(self, max_degree=3, method="quotient", size_cap=None):
        self.max_degree = max_degree
        self.method = method
        self.size_cap = size_cap

    def _report(self, A):
        if self.method != "all" and self.method not in HC_METHODS:
            raise ValueError("unknown method %r" % (self.method,))
        return cyclic_homology(A, check_degree(self.max_degree), self.method, self.size_cap)


class PeriodicCyclicHomology(_HomologyEstimator):
    """Stable S-rank of the given parity; -1 when nothing stabilised."""

    def __init__(self, parity="even", window=6, size_cap=None):
        self.parity = parity
        self.window = window
        self.size_cap = size_cap

    def _report(self, A):
        return periodic_cyclic(A, self.parity, check_degree(self.window, "window"), self.size_cap)

    def transform(self, X):
        check_is_fitted(self, "reports_")
        out = []
        for A in check_algebras(X):
            rep = self._seen.get(id(A)) or self._report(A)
            out.append(-1 if rep.value is None else rep.value)
        return np.array(out, dtype=np.int64)
