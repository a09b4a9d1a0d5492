"""Dense exact linear algebra over cyclotomic fields.

All pivoting is deterministic (leftmost column, lowest row), so every basis
produced here is reproducible; downstream structure constants depend on it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import Cyclotomic, Scalar


class LinAlgError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class Mat:
    """Immutable dense matrix; all entries share one cyclotomic order."""

    __slots__ = ("rows", "cols", "order", "data", "_key")

    def __init__(self, rows: Iterable[Sequence[Scalar]], order: int | None = None, *, ncols: int | None = None):
        raw = [list(r) for r in rows]
        nrows = len(raw)
        if nrows:
            ncols_ = len(raw[0])
            if any(len(r) != ncols_ for r in raw):
                raise LinAlgError("ragged matrix rows")
        else:
            ncols_ = ncols or 0
        if order is None:
            order = 1
            for r in raw:
                for x in r:
                    if isinstance(x, Cyclotomic) and x.order != order:
                        order = _lcm(order, x.order)
        data = tuple(
            tuple(x.lift(order) if isinstance(x, Cyclotomic) else Cyclotomic.rational(x, order) for x in r) for r in raw
        )
        self.rows = nrows
        self.cols = ncols_
        self.order = order
        self.data = data
        self._key = None

    @classmethod
    def _raw(cls, data: list[list[Cyclotomic]], order: int, ncols: int) -> Mat:
        # trusted constructor: entries already Cyclotomic of `order`
        m = object.__new__(cls)
        m.rows = len(data)
        m.cols = ncols
        m.order = order
        m.data = tuple(tuple(r) for r in data)
        m._key = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, order: int = 1) -> Mat:
        z = Cyclotomic.rational(0, order)
        return cls._raw([[z] * cols for _ in range(rows)], order, cols)

    @classmethod
    def identity(cls, n: int, order: int = 1) -> Mat:
        z = Cyclotomic.rational(0, order)
        o = Cyclotomic.rational(1, order)
        return cls._raw([[o if i == j else z for j in range(n)] for i in range(n)], order, n)

    @classmethod
    def diag(cls, entries: Sequence[Scalar], order: int | None = None) -> Mat:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], order)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], nrows: int, order: int | None = None) -> Mat:
        if not columns:
            return cls.zeros(nrows, 0, order or 1)
        return cls([[c[i] for c in columns] for i in range(nrows)], order, ncols=len(columns))

    # access ------------------------------------------------------------

    @property
    def entries(self) -> tuple[Cyclotomic, ...]:
        return tuple(x for r in self.data for x in r)

    def __getitem__(self, ij: tuple[int, int]) -> Cyclotomic:
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple[Cyclotomic, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[Cyclotomic, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Mat:
        return Mat._raw([[self.data[i][j] for j in cols] for i in rows], self.order, len(cols))

    def lift(self, order: int) -> Mat:
        if order == self.order:
            return self
        return Mat._raw([[x.lift(order) for x in r] for r in self.data], order, self.cols)

    @property
    def T(self) -> Mat:
        return Mat._raw([list(self.column(j)) for j in range(self.cols)], self.order, self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def key(self) -> tuple:
        """Canonical hashable form (exact; order-specific)."""
        if self._key is None:
            self._key = (self.order, self.rows, self.cols, tuple(x.coeffs for r in self.data for x in r))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self.data)
        return f"Mat([{body}])"

    # arithmetic --------------------------------------------------------

    def _align(self, other: Mat) -> tuple[Mat, Mat]:
        if self.order == other.order:
            return self, other
        m = _lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other: Mat) -> Mat:
        a, b = self._align(other)
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise LinAlgError("shape mismatch in addition")
        return Mat._raw([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.data, b.data)], a.order, a.cols)

    def __sub__(self, other: Mat) -> Mat:
        a, b = self._align(other)
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise LinAlgError("shape mismatch in subtraction")
        return Mat._raw([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a.data, b.data)], a.order, a.cols)

    def __neg__(self) -> Mat:
        return Mat._raw([[-x for x in r] for r in self.data], self.order, self.cols)

    def scale(self, c: Scalar) -> Mat:
        c = Cyclotomic.coerce(c, self.order)
        order = _lcm(self.order, c.order)
        a = self.lift(order)
        c = c.lift(order)
        return Mat._raw([[c * x for x in r] for r in a.data], order, a.cols)

    def __matmul__(self, other: Mat) -> Mat:
        a, b = self._align(other)
        if a.cols != b.rows:
            raise LinAlgError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
        zero = Cyclotomic.rational(0, a.order)
        bcols = [b.column(j) for j in range(b.cols)]
        out = []
        for r in a.data:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for col in bcols:
                acc = zero
                for k, x in nz:
                    y = col[k]
                    if y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return Mat._raw(out, a.order, b.cols)

    def apply(self, v: Sequence[Cyclotomic]) -> tuple[Cyclotomic, ...]:
        return (self @ column_matrix(v, self.order)).column(0)

    def hstack(self, other: Mat) -> Mat:
        a, b = self._align(other)
        if a.rows != b.rows:
            raise LinAlgError("row count mismatch in hstack")
        return Mat._raw([list(ra) + list(rb) for ra, rb in zip(a.data, b.data)], a.order, a.cols + b.cols)

    def vstack(self, other: Mat) -> Mat:
        a, b = self._align(other)
        if a.cols != b.cols:
            raise LinAlgError("column count mismatch in vstack")
        return Mat._raw([list(r) for r in a.data + b.data], a.order, a.cols)


def column_matrix(v: Sequence[Scalar], order: int = 1) -> Mat:
    m = Mat([[x] for x in v], ncols=1)
    return m.lift(_lcm(m.order, order))


# ---------------------------------------------------------------------------
# elimination


def _rref_rows(rows: list[list[Cyclotomic]], ncols: int) -> tuple[list[list[Cyclotomic]], list[int]]:
    rows = [list(r) for r in rows]
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row-echelon form and pivot columns (increasing)."""
    rows, pivots = _rref_rows([list(r) for r in m.data], m.cols)
    return Mat._raw(rows, m.order, m.cols), pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def det(m: Mat) -> Cyclotomic:
    if not m.is_square():
        raise LinAlgError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    rows = [list(r) for r in m.data]
    result = Cyclotomic.rational(1, m.order)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return Cyclotomic.rational(0, m.order)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            result = -result
        pivot = rows[c][c]
        result = result * pivot
        inv = pivot.inverse()
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[c])]
    return result


def inverse(m: Mat) -> Mat:
    if not m.is_square():
        raise LinAlgError("inverse of non-square matrix")
    n = m.rows
    aug = m.hstack(Mat.identity(n, m.order))
    rows, pivots = _rref_rows([list(r) for r in aug.data], 2 * n)
    if pivots[:n] != list(range(n)):
        raise LinAlgError("matrix is singular")
    return Mat._raw([r[n:] for r in rows], m.order, n)


def solve(a: Mat, b: Mat) -> Mat | None:
    """Unique-or-particular solution X of a X = b (free variables 0); None if inconsistent."""
    a, b = a._align(b)
    aug = a.hstack(b)
    rows, pivots = _rref_rows([list(r) for r in aug.data], aug.cols)
    if any(p >= a.cols for p in pivots):
        return None
    zero = Cyclotomic.rational(0, a.order)
    x = [[zero] * b.cols for _ in range(a.cols)]
    for i, p in enumerate(pivots):
        x[p] = rows[i][a.cols:]
    return Mat._raw(x, a.order, b.cols)


def det_one_minus_t(m: Mat, maxdeg: int | None = None) -> list[Cyclotomic]:
    """Coefficients of det(I - t m), lowest degree first (Faddeev-LeVerrier)."""
    if not m.is_square():
        raise LinAlgError("det(1 - t m) needs a square matrix")
    n = m.rows
    # char poly x^n + c1 x^(n-1) + ... + cn; det(I - t m) = 1 + c1 t + ... + cn t^n
    coeffs = [Cyclotomic.rational(1, m.order)]
    ident = Mat.identity(n, m.order)
    mk = Mat.zeros(n, n, m.order)
    c = Cyclotomic.rational(1, m.order)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(c))
        tr = sum((mk[i, i] for i in range(n)), Cyclotomic.rational(0, m.order))
        c = tr * Fraction(-1, k)
        coeffs.append(c)
    if maxdeg is not None:
        coeffs = coeffs[: maxdeg + 1]
    return coeffs


def is_skew(m: Mat) -> bool:
    if not m.is_square():
        return False
    return all(m[i, j] == -m[j, i] for i in range(m.rows) for j in range(i, m.rows))


def pfaffian(m: Mat) -> Cyclotomic:
    """Pfaffian by skew-symmetric elimination; Pf of block-diag [[0,1],[-1,0]] is +1."""
    if not m.is_square():
        raise LinAlgError("pfaffian of non-square matrix")
    if m.rows % 2:
        raise LinAlgError("pfaffian of odd-dimensional matrix")
    if not is_skew(m):
        raise LinAlgError("pfaffian of non-skew-symmetric matrix")
    a = [list(r) for r in m.data]
    result = Cyclotomic.rational(1, m.order)
    while a:
        n = len(a)
        p = next((i for i in range(1, n) if a[0][i]), None)
        if p is None:
            return Cyclotomic.rational(0, m.order)
        if p != 1:
            # simultaneous row/column swap 1 <-> p flips the sign
            a[1], a[p] = a[p], a[1]
            for r in a:
                r[1], r[p] = r[p], r[1]
            result = -result
        piv = a[0][1]
        result = result * piv
        inv = piv.inverse()
        # Schur complement: S_ij = A_ij + (A_i0 A_1j - A_i1 A_0j) / A_01
        nxt = []
        for i in range(2, n):
            ai0, ai1 = a[i][0], a[i][1]
            row = []
            for j in range(2, n):
                v = a[i][j]
                t = ai0 * a[1][j] - ai1 * a[0][j] if (ai0 or ai1) else None
                if t:
                    v = v + t * inv
                row.append(v)
            nxt.append(row)
        a = nxt
    return result


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Column span of a full-column-rank basis matrix."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, basis: Mat, *, check: bool = True):
        if check and rank(basis) != basis.cols:
            raise LinAlgError("subspace basis columns are linearly dependent")
        self.ambient_dim = basis.rows
        self.basis = basis

    @classmethod
    def zero(cls, ambient_dim: int, order: int = 1) -> Subspace:
        return cls(Mat.zeros(ambient_dim, 0, order), check=False)

    @classmethod
    def full(cls, ambient_dim: int, order: int = 1) -> Subspace:
        return cls(Mat.identity(ambient_dim, order), check=False)

    @classmethod
    def span(cls, vectors: Sequence[Sequence[Scalar]], ambient_dim: int, order: int | None = None) -> Subspace:
        """Span of arbitrary vectors; basis = pivot columns."""
        if not vectors:
            return cls.zero(ambient_dim, order or 1)
        return image(Mat.from_columns(vectors, ambient_dim, order))

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def order(self) -> int:
        return self.basis.order

    def vectors(self) -> list[tuple[Cyclotomic, ...]]:
        return self.basis.columns()

    def coordinates(self, v: Sequence[Scalar]) -> tuple[Cyclotomic, ...] | None:
        """Coordinates of v in this basis, or None when v is not in the span."""
        if self.dim == 0:
            return () if all(not Cyclotomic.coerce(x) for x in v) else None
        x = solve(self.basis, column_matrix(v, self.order))
        if x is None:
            return None
        return x.column(0)

    def contains(self, v: Sequence[Scalar]) -> bool:
        return self.coordinates(v) is not None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel(m: Mat) -> Subspace:
    """Null space; one basis vector per free column, in increasing column order."""
    r, pivots = rref(m)
    pivset = set(pivots)
    zero = Cyclotomic.rational(0, m.order)
    one = Cyclotomic.rational(1, m.order)
    vecs = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [zero] * m.cols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        vecs.append(v)
    if not vecs:
        return Subspace.zero(m.cols, m.order)
    return Subspace(Mat.from_columns(vecs, m.cols, m.order), check=False)


def image(m: Mat) -> Subspace:
    """Column space; basis = the pivot columns of m itself."""
    _, pivots = rref(m)
    return Subspace(m.submatrix(range(m.rows), pivots), check=False)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return image(a.basis.hstack(b.basis))


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    # x = A s = B t  <=>  [A | -B] (s, t) = 0
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, max(a.order, b.order))
    k = kernel(a.basis.hstack(-b.basis))
    if k.dim == 0:
        return Subspace.zero(a.ambient_dim, k.order)
    s = k.basis.submatrix(range(a.dim), range(k.dim))
    return Subspace((a.basis @ s), check=False)


def is_subspace_of(a: Subspace, b: Subspace) -> bool:
    return all(b.contains(v) for v in a.vectors())


def same_subspace(a: Subspace, b: Subspace) -> bool:
    return a.dim == b.dim and is_subspace_of(a, b)


def complementary_projectors(w: Subspace, u: Subspace) -> tuple[Mat, Mat]:
    """Projectors P_W, P_U for V = W (+) U: P_W + P_U = I, im P_W = W, ker P_W = U."""
    n = w.ambient_dim
    if w.dim + u.dim != n:
        raise LinAlgError(f"subspaces of dims {w.dim}+{u.dim} cannot be complementary in dim {n}")
    b = w.basis.hstack(u.basis)
    if rank(b) != n:
        raise LinAlgError("subspaces are not complementary")
    binv = inverse(b)
    d = Mat.diag([1] * w.dim + [0] * u.dim, b.order)
    pw = b @ d @ binv
    return pw, Mat.identity(n, pw.order) - pw


def wedge_coefficient(vectors: Sequence[Sequence[Scalar]], reference: Subspace) -> Cyclotomic:
    """c with v_1 ^ ... ^ v_k = c * (wedge of the reference basis)."""
    if len(vectors) != reference.dim:
        raise LinAlgError(f"need {reference.dim} vectors, got {len(vectors)}")
    if reference.dim == 0:
        return Cyclotomic.rational(1, reference.order)
    coords = []
    for v in vectors:
        c = reference.coordinates(v)
        if c is None:
            raise LinAlgError("vector lies outside the reference span")
        coords.append(c)
    return det(Mat.from_columns(coords, reference.dim, reference.order))
