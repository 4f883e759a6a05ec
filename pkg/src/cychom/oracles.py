"""Independent hand-built complexes used to cross-check the engine.

None of these touch the bar complex.  They are small enough to read off
by hand, which is the point.
"""
from cychom.fields import QQ
from cychom.linalg import SparseMatrix, rank


def truncated_poly_hh(m, max_n):
    """HH_n(Q[x]/(x^m)) from the 2-periodic resolution of A over A (x) A^op.

    The resolution is A^e <- A^e <- A^e <- ... with maps alternating
    between x(x)1 - 1(x)x and sum_i x^i (x) x^(m-1-i).  Applying A (x)_{A^e} -
    turns the first into 0 (A is commutative) and the second into
    multiplication by m x^(m-1) on A = span(1, x, ..., x^(m-1)).
    """
    zero = SparseMatrix.zeros(m, m, QQ)
    top = SparseMatrix.from_rows(m, m, {m - 1: {0: QQ(m)}}, QQ)  # 1 -> m x^(m-1), rest -> 0
    d = {n: (zero if n % 2 else top) for n in range(1, max_n + 2)}
    dims = []
    for n in range(max_n + 1):
        r_out = rank(d[n]) if n >= 1 else 0
        dims.append(m - r_out - rank(d[n + 1]))
    return dims


def dual_numbers_mixed_hc(max_n):
    """HC_n(Q[x]/(x^2)) from the normalized mixed complex.

    Normalized chains are A (x) (A/Q)^n, spanned by u_n = 1 (x) x^n and
    v_n = x (x) x^n.  Since x^2 = 0 only the outer faces of b survive:
    b u_n = (1 + (-1)^n) v_(n-1), b v_n = 0.  Connes' B kills u_n and sends
    v_n to (sum_i (-1)^(n i)) u_(n+1), i.e. (n+1) u_(n+1) for n even and 0
    for n odd.  HC is the homology of Tot_n = (+)_p C_(n-2p) with b + B.
    """
    def col(deg, which):
        return 2 * deg + which  # which 0: u, 1: v

    def b(n):
        rows = {}
        if n % 2 == 0 and n >= 1:
            rows[col(n - 1, 1)] = {col(n, 0): QQ(2)}
        return rows

    def B(n):
        rows = {}
        if n % 2 == 0:
            rows[col(n + 1, 0)] = {col(n, 1): QQ(n + 1)}
        return rows

    def tot(n):
        return [n - 2 * p for p in range(n // 2 + 1)]

    def d(n):
        """Tot_n -> Tot_(n-1) as one matrix on the combined index space."""
        data = {}
        for q in tot(n):
            for r, row in b(q).items():
                for c, v in row.items():
                    data.setdefault(r, {})[c] = v
            if q >= 0 and q + 1 <= n - 1:
                for r, row in B(q).items():
                    for c, v in row.items():
                        data.setdefault(r, {})[c] = v
        size = 2 * (n + 1)
        return SparseMatrix.from_rows(size, size, data, QQ)

    dims = []
    for n in range(max_n + 1):
        size = 2 * sum(1 for _ in tot(n))
        dims.append(size - (rank(d(n)) if n else 0) - rank(d(n + 1)))
    return dims
