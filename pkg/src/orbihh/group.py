"""Finite matrix groups enumerated from generators."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import Mat, det

DEFAULT_CAP = 5000


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    """Closure produced more elements than allowed (infinite or too large)."""


@dataclass(frozen=True)
class GroupElement:
    id: int
    matrix: Mat


@dataclass(eq=False)
class FiniteMatrixGroup:
    dim: int
    order_n: int  # cyclotomic order of the entries
    elements: list[GroupElement]
    mult: list[list[int]]
    inv: list[int]
    classes: list[list[int]]
    centralizers: list[frozenset[int]]
    _index: dict = field(default_factory=dict, repr=False)
    class_of: list[int] = field(default_factory=list, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    def matrix(self, gid: int) -> Mat:
        return self.elements[gid].matrix

    def index_of(self, m: Mat) -> int:
        """Element id of a matrix; KeyError when m is not in the group."""
        return self._index[m.lift(self.order_n).key()]

    def conj(self, k: int, g: int) -> int:
        """k g k^-1"""
        return self.mult[self.mult[k][g]][self.inv[k]]

    def class_rep(self, gid: int) -> int:
        return self.classes[self.class_of[gid]][0]

    def is_abelian(self) -> bool:
        n = len(self)
        return all(self.mult[a][b] == self.mult[b][a] for a in range(n) for b in range(a + 1, n))


def close_generators(gens: Sequence[Mat], cap: int = DEFAULT_CAP) -> FiniteMatrixGroup:
    """Breadth-first closure; identity first, then discovery order."""
    if not gens:
        raise GroupError("need at least one generator (use the identity for the trivial group)")
    d = gens[0].rows
    for g in gens:
        if not g.is_square() or g.rows != d:
            raise GroupError("generators must be square matrices of equal dimension")
        if not det(g):
            raise GroupError("generator is not invertible")
    order = 1
    for g in gens:
        order = order * g.order // math.gcd(order, g.order)
    gens = [g.lift(order) for g in gens]
    ident = Mat.identity(d, order)

    mats = [ident]
    index = {ident.key(): 0}
    # right[x][s] = id of mats[x] @ gens[s]; parent[x] = (y, s) with x = y * gen s
    right: list[list[int]] = []
    parent: list[tuple[int, int] | None] = [None]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        row = []
        for s, gmat in enumerate(gens):
            y = mats[x] @ gmat
            k = y.key()
            j = index.get(k)
            if j is None:
                j = len(mats)
                if j >= cap:
                    raise CapExceeded(f"group closure exceeded cap of {cap} elements")
                index[k] = j
                mats.append(y)
                parent.append((x, s))
                queue.append(j)
            row.append(j)
        right.append(row)

    n = len(mats)
    # column-by-column fill: g * h = (g * h') * s where h = h' * s
    cols: list[list[int] | None] = [None] * n
    cols[0] = list(range(n))
    for h in range(1, n):
        hp, s = parent[h]
        prev = cols[hp]
        cols[h] = [right[prev[g]][s] for g in range(n)]
    mult = [[cols[h][g] for h in range(n)] for g in range(n)]
    inv = [row.index(0) for row in mult]

    class_of = [-1] * n
    classes: list[list[int]] = []
    for g in range(n):
        if class_of[g] >= 0:
            continue
        orbit = sorted({mult[mult[k][g]][inv[k]] for k in range(n)})
        for x in orbit:
            class_of[x] = len(classes)
        classes.append(orbit)
    centralizers = [frozenset(h for h in range(n) if mult[h][g] == mult[g][h]) for g in range(n)]

    return FiniteMatrixGroup(
        dim=d,
        order_n=order,
        elements=[GroupElement(i, m) for i, m in enumerate(mats)],
        mult=mult,
        inv=inv,
        classes=classes,
        centralizers=centralizers,
        _index=index,
        class_of=class_of,
    )


def element_order(group: FiniteMatrixGroup, gid: int) -> int:
    n, x = 1, gid
    while x != 0:
        x = group.mult[x][gid]
        n += 1
    return n


def check_symplectic(group: FiniteMatrixGroup, J: Mat) -> bool:
    """True iff g^T J g = J for every element."""
    return all(e.matrix.T @ J @ e.matrix == J for e in group.elements)


# ---------------------------------------------------------------------------
# matrices for common actions


def permutation_matrix(perm: Sequence[int], order: int = 1) -> Mat:
    """e_i -> e_perm[i] (0-based), so matrix(p q) = matrix(p) matrix(q)."""
    n = len(perm)
    return Mat([[1 if perm[j] == i else 0 for j in range(n)] for i in range(n)], order)


def cycle_perm(n: int, *cycle: int) -> list[int]:
    """0-based image list of the cycle (c0 c1 ... ) given 1-based points."""
    p = list(range(n))
    pts = [c - 1 for c in cycle]
    for a, b in zip(pts, pts[1:] + pts[:1]):
        p[a] = b
    return p


def cotangent_lift(m: Mat) -> Mat:
    """Action on T*V = V (+) V*, block-diag(m, m^-T)."""
    from .linalg import inverse

    d = m.rows
    dual = inverse(m).T
    z = Mat.zeros(d, d, m.order)
    return m.hstack(z).vstack(z.hstack(dual))
