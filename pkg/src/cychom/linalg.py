"""
Sparse exact matrices and elimination.

Rows are dicts ``col -> nonzero scalar``.  Over Q the elimination runs
fraction-free on primitive integer rows (each row is kept divided by
the gcd of its entries, which bounds coefficient growth the same way
Bareiss' exact division does); over other fields it is ordinary Gauss
elimination with normalised pivots.  Pivots are chosen Markowitz-style:
rows are fed shortest first and each new pivot is the entry whose
column is least populated.
"""

import heapq
from fractions import Fraction
from math import gcd

from cychom.errors import NotAComplex
from cychom.fields import QQ, CyclotomicField, field_of


class SparseMatrix(object):
    """Immutable-by-convention sparse matrix over one exact field."""

    __slots__ = ("rows", "cols", "data", "field")

    def __init__(self, rows, cols, data=None, field=QQ):
        self.rows = rows
        self.cols = cols
        self.field = field
        self.data = {}
        if data:
            for (i, j), v in (data.items() if isinstance(data, dict) else data):
                if v != 0:
                    assert 0 <= i < rows and 0 <= j < cols, (i, j, rows, cols)
                    self.data.setdefault(i, {})[j] = v

    @classmethod
    def from_rows(cls, rows, cols, rowdicts, field=QQ):
        M = cls(rows, cols, field=field)
        for i, r in rowdicts.items():
            r = {j: v for j, v in r.items() if v != 0}
            if r:
                M.data[i] = r
        return M

    @classmethod
    def from_columns(cls, rows, coldicts, field=QQ):
        """Build from a list of column dicts ``row -> value``."""
        M = cls(rows, len(coldicts), field=field)
        data = M.data
        for j, col in enumerate(coldicts):
            for i, v in col.items():
                if v != 0:
                    data.setdefault(i, {})[j] = v
        return M

    @classmethod
    def from_dense(cls, A, field=QQ):
        rows = len(A)
        cols = len(A[0]) if rows else 0
        data = {(i, j): field(A[i][j]) for i in range(rows) for j in range(cols) if A[i][j] != 0}
        return cls(rows, cols, data, field)

    @classmethod
    def identity(cls, n, field=QQ):
        one = field.one
        return cls.from_rows(n, n, {i: {i: one} for i in range(n)}, field)

    @classmethod
    def zeros(cls, rows, cols, field=QQ):
        return cls(rows, cols, field=field)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def nnz(self):
        return sum(len(r) for r in self.data.values())

    def entries(self):
        for i, r in self.data.items():
            for j, v in r.items():
                yield (i, j), v

    def __getitem__(self, idx):
        i, j = idx
        return self.data.get(i, {}).get(j, self.field.zero)

    def to_dense(self):
        z = self.field.zero
        A = [[z] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries():
            A[i][j] = v
        return A

    def column_dicts(self):
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries():
            cols[j][i] = v
        return cols

    def transpose(self):
        T = SparseMatrix(self.cols, self.rows, field=self.field)
        for (i, j), v in self.entries():
            T.data.setdefault(j, {})[i] = v
        return T

    T = property(transpose)

    def _check(self, other):
        if self.field != other.field:
            from cychom.errors import FieldMismatch
            raise FieldMismatch("%s vs %s" % (self.field, other.field))

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        odata = other.data
        out = {}
        for i, r in self.data.items():
            acc = {}
            for k, a in r.items():
                ok = odata.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                out[i] = acc
        M = SparseMatrix(self.rows, other.cols, field=self.field)
        M.data = out
        return M

    def apply(self, vec):
        """Multiply a sparse column vector given as ``index -> value``."""
        out = {}
        cols = self.transpose_cache()
        for j, x in vec.items():
            for i, a in cols.get(j, {}).items():
                out[i] = out.get(i, 0) + a * x
        return {i: v for i, v in out.items() if v != 0}

    def transpose_cache(self):
        # columns as dicts; not cached on purpose (matrices are small to mid sized)
        cols = {}
        for (i, j), v in self.entries():
            cols.setdefault(j, {})[i] = v
        return cols

    def _combine(self, other, sign):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        out = {i: dict(r) for i, r in self.data.items()}
        for (i, j), v in other.entries():
            r = out.setdefault(i, {})
            w = r.get(j, 0) + sign * v
            if w == 0:
                r.pop(j, None)
            else:
                r[j] = w
        M = SparseMatrix(self.rows, self.cols, field=self.field)
        M.data = {i: r for i, r in out.items() if r}
        return M

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if c == 0:
            return SparseMatrix(self.rows, self.cols, field=self.field)
        M = SparseMatrix(self.rows, self.cols, field=self.field)
        M.data = {i: {j: v * c for j, v in r.items()} for i, r in self.data.items()}
        return M

    __rmul__ = scale

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "SparseMatrix(%d x %d, nnz=%d, %s)" % (self.rows, self.cols, self.nnz(), self.field)

    def rank(self):
        return rank(self)


def hstack(mats, rows=None, field=None):
    """Concatenate columns."""
    mats = list(mats)
    if rows is None:
        rows = mats[0].rows
    field = field or (mats[0].field if mats else QQ)
    out = SparseMatrix(rows, sum(m.cols for m in mats), field=field)
    off = 0
    for m in mats:
        assert m.rows == rows, (m.rows, rows)
        for i, r in m.data.items():
            dst = out.data.setdefault(i, {})
            for j, v in r.items():
                dst[j + off] = v
        off += m.cols
    return out


def vstack(mats, cols=None, field=None):
    mats = list(mats)
    if cols is None:
        cols = mats[0].cols
    field = field or (mats[0].field if mats else QQ)
    out = SparseMatrix(sum(m.rows for m in mats), cols, field=field)
    off = 0
    for m in mats:
        assert m.cols == cols, (m.cols, cols)
        for i, r in m.data.items():
            out.data[i + off] = dict(r)
        off += m.rows
    return out


def block_matrix(blocks, row_sizes, col_sizes, field=QQ):
    """blocks: dict (bi, bj) -> SparseMatrix; missing blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    out = SparseMatrix(roff[-1], coff[-1], field=field)
    for (bi, bj), m in blocks.items():
        assert m.shape == (row_sizes[bi], col_sizes[bj]), ((bi, bj), m.shape)
        for i, r in m.data.items():
            dst = out.data.setdefault(i + roff[bi], {})
            for j, v in r.items():
                dst[j + coff[bj]] = v
    return out


# ----------------------------------------------------------------------
# elimination


def _primitive(row):
    """Scale an integer row by the gcd of its entries, sign-normalised."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _integer_row(row):
    den = 1
    for v in row.values():
        d = v.denominator if isinstance(v, Fraction) else 1
        if d != 1:
            den = den * d // gcd(den, d)
    return _primitive({j: int(v * den) for j, v in row.items()})


class Echelon(object):
    """Incremental row echelon form.

    ``add(row)`` reduces ``row`` against the stored pivot rows and stores
    it if it is independent.  Pivot rows are only reduced against older
    pivot rows, so elimination walks pivots in insertion order.
    """

    def __init__(self, rational=True, colcount=None):
        self.rational = rational
        self.rows = []          # list of (pivot_col, row)
        self.pivot_index = {}   # pivot_col -> position in self.rows
        self.colcount = colcount or {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, row):
        row = dict(row)
        pivot_index = self.pivot_index
        heap = [pivot_index[c] for c in row if c in pivot_index]
        if not heap:
            return row
        heapq.heapify(heap)
        seen = set(heap)
        rational = self.rational
        prows = self.rows
        while heap:
            k = heapq.heappop(heap)
            c, p = prows[k]
            a = row.get(c)
            if a is None:
                continue
            if rational:
                pv = p[c]
                if pv != 1 and pv != -1:
                    for j in row:
                        row[j] = row[j] * pv
                    factor = a
                else:
                    factor = a * pv
                for j, v in p.items():
                    w = row.get(j, 0) - factor * v
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
                    kk = pivot_index.get(j)
                    if kk is not None and kk not in seen:
                        seen.add(kk)
                        heapq.heappush(heap, kk)
                row = _primitive(row) if row else row
            else:
                # pivot rows are normalised to 1 at the pivot
                for j, v in p.items():
                    w = row.get(j, 0) - a * v
                    if w != 0:
                        row[j] = w
                    else:
                        row.pop(j, None)
                    kk = pivot_index.get(j)
                    if kk is not None and kk not in seen:
                        seen.add(kk)
                        heapq.heappush(heap, kk)
        return row

    def add(self, row):
        """Returns True iff the row was independent of the stored ones."""
        if self.rational:
            row = _integer_row(row)
        row = self.reduce(row)
        if not row:
            return False
        cc = self.colcount
        c = min(row, key=lambda j: (cc.get(j, 0), 0 if row[j] in (1, -1) else 1, j))
        if not self.rational:
            inv = 1 / row[c]
            row = {j: v * inv for j, v in row.items()}
        self.pivot_index[c] = len(self.rows)
        self.rows.append((c, row))
        return True

    def contains(self, row):
        if self.rational:
            row = _integer_row(row)
        return not self.reduce(row)

    def reduced_rows(self):
        """Fully reduced rows with pivot 1 (RREF up to row order)."""
        out = [None] * len(self.rows)
        pivot_index = self.pivot_index
        for k in range(len(self.rows) - 1, -1, -1):
            c, p = self.rows[k]
            p = {j: (Fraction(v) if self.rational else v) for j, v in p.items()}
            pv = p[c]
            if pv != 1:
                p = {j: v / pv for j, v in p.items()}
            for j in [j for j in p if j != c and j in pivot_index]:
                a = p.get(j)
                if a is None:
                    continue
                q = out[pivot_index[j]][1]
                for jj, v in q.items():
                    w = p.get(jj, 0) - a * v
                    if w != 0:
                        p[jj] = w
                    else:
                        p.pop(jj, None)
            out[k] = (c, p)
        return out


def _column_counts(rowdicts):
    cc = {}
    for r in rowdicts:
        for j in r:
            cc[j] = cc.get(j, 0) + 1
    return cc


def echelon_of_rows(rowdicts, field=QQ):
    rowdicts = [r for r in rowdicts if r]
    rowdicts.sort(key=len)
    E = Echelon(rational=(field == QQ), colcount=_column_counts(rowdicts))
    for r in rowdicts:
        E.add(r)
    return E


def _rational_rows(rowdicts, field):
    """Rows over Q(zeta) of degree d as d times as many rows over Q.

    Entry c at column j becomes the d x d block of multiplication by c in
    the power basis, so the Q-rank is exactly d times the Q(zeta)-rank.
    """
    d = field.degree
    blocks = {}
    out = []
    for row in rowdicts:
        new = [{} for _ in range(d)]
        for j, c in row.items():
            blk = blocks.get(c)
            if blk is None:
                blk = []
                z = field.gen()
                power = field.one
                for s in range(d):
                    blk.append((c * power).coeffs)
                    power = power * z
                blocks[c] = blk
            for s, coeffs in enumerate(blk):
                for r, v in enumerate(coeffs):
                    if v:
                        new[r][j * d + s] = v
        out.extend(r for r in new if r)
    return out


def _row_rank(rowdicts, field):
    if isinstance(field, CyclotomicField) and field.degree > 1:
        return len(echelon_of_rows(_rational_rows(rowdicts, field), QQ)) // field.degree
    return len(echelon_of_rows(rowdicts, field))


def _components(rowdicts, ncols):
    """Row index lists of the connected blocks of a sparse matrix."""
    nrows = len(rowdicts)
    parent = list(range(nrows + ncols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, row in enumerate(rowdicts):
        ri = find(i)
        for j in row:
            rj = find(nrows + j)
            if ri != rj:
                parent[rj] = ri
    blocks = {}
    for i in range(nrows):
        blocks.setdefault(find(i), []).append(i)
    return list(blocks.values())


def _modular_setup(field):
    """A prime p = 1 mod n and the image of zeta_n in F_p (n = 1 over Q)."""
    import flint
    n = field.order if isinstance(field, CyclotomicField) else 1
    p = (2 ** 31 - 1) // n * n + 1
    while not flint.fmpz(p).is_prime():
        p -= n
    if n == 1:
        return p, 1
    qs = [q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        w = pow(g, (p - 1) // n, p)
        if all(pow(w, n // q, p) != 1 for q in qs):
            return p, w
    raise ArithmeticError("no primitive root found")  # pragma: no cover


def modular_rank(M):
    """Rank of M reduced modulo a word-size prime; a lower bound for the true rank.

    Returns None when some denominator is divisible by the prime (the
    reduction is then undefined).  Only Q and cyclotomic fields.
    """
    import flint
    F = M.field
    if not (F == QQ or isinstance(F, CyclotomicField)):
        raise TypeError("modular rank needs Q or a cyclotomic field")
    p, w = _modular_setup(F)
    cache = {}

    def red(c):
        v = cache.get(c)
        if v is None:
            coeffs = (c,) if F == QQ else c.coeffs
            v = 0
            for k, a in enumerate(coeffs):
                a = Fraction(a)
                if a.denominator % p == 0:
                    raise ZeroDivisionError
                v = (v + a.numerator * pow(a.denominator, -1, p) * pow(w, k, p)) % p
            cache[c] = v
        return v

    rowdicts = list(M.data.values())
    total = 0
    try:
        for block in _components(rowdicts, M.cols):
            cols = sorted({j for i in block for j in rowdicts[i]})
            pos = {c: k for k, c in enumerate(cols)}
            short = len(block) <= len(cols)
            m = flint.nmod_mat(len(block), len(cols), p) if short else flint.nmod_mat(len(cols), len(block), p)
            for a, i in enumerate(block):
                for j, c in rowdicts[i].items():
                    if short:
                        m[a, pos[j]] = red(c)
                    else:
                        m[pos[j], a] = red(c)
            total += m.rank()
    except ZeroDivisionError:
        return None
    return total


def certified_rank(M, upper):
    """Exact rank of M given an a-priori upper bound.

    The modular rank never exceeds the rank over the field, so when it
    reaches ``upper`` the rank is exactly ``upper``.  Otherwise (or for
    other fields) this falls back to exact elimination.  Returns the rank
    and "modular" or "exact" for the route taken.
    """
    F = M.field
    if upper is not None and (F == QQ or isinstance(F, CyclotomicField)):
        r = modular_rank(M)
        if r is not None and r == upper:
            return r, "modular"
    return rank(M), "exact"


def rank(M):
    """Exact rank.  Eliminates along the shorter side."""
    if not M.data:
        return 0
    if M.rows > M.cols:
        rowdicts = list(M.transpose().data.values())
    else:
        rowdicts = list(M.data.values())
    return _row_rank(rowdicts, M.field)


def rank_kernel(M):
    """(rank, kernel basis) with kernel vectors as dicts ``col -> value``."""
    E = echelon_of_rows(list(M.data.values()), M.field)
    rows = E.reduced_rows()
    pivots = {c for c, _ in rows}
    by_free = {}
    for c, p in rows:
        for j, v in p.items():
            if j != c:
                by_free.setdefault(j, []).append((c, v))
    one = M.field.one
    kernel = []
    for f in range(M.cols):
        if f in pivots:
            continue
        v = {f: one}
        for c, a in by_free.get(f, ()):
            v[c] = -a
        kernel.append(v)
    return len(rows), kernel


def sparse_rank_kernel(M):
    return rank_kernel(M)


def homology_dim(d_in, d_out, check=True):
    """dim ker(d_out) - rank(d_in) for C' --d_in--> C --d_out--> C''."""
    if d_in.rows != d_out.cols:
        raise ValueError("shapes do not compose: %s then %s" % (d_in.shape, d_out.shape))
    if check and not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out o d_in != 0")
    return d_out.cols - rank(d_out) - rank(d_in)


def span_rank(vectors, field=QQ):
    """Rank of a list of sparse vectors."""
    return _row_rank([v for v in vectors if v], field)


def solve(M, rhs):
    """One solution x of M x = rhs (dict), or None if inconsistent."""
    aug = hstack([M, SparseMatrix.from_columns(M.rows, [rhs], M.field)])
    rowdicts = sorted((r for r in aug.data.values() if r), key=len)
    # the rhs column may only become a pivot when nothing else is left
    counts = _column_counts(rowdicts)
    counts[M.cols] = float("inf")
    E = Echelon(rational=(M.field == QQ), colcount=counts)
    for r in rowdicts:
        E.add(r)
    rows = E.reduced_rows()
    x = {}
    for c, p in rows:
        if c == M.cols:
            return None
        if M.cols in p:
            x[c] = p[M.cols]
    return x


def in_span(vectors, target, field=QQ):
    E = echelon_of_rows(list(vectors), field)
    if not target:
        return True
    return E.contains(target)


def vector_field(vec, default=QQ):
    for v in vec.values():
        return field_of(v, default)
    return default
