"""Fixed spaces V^g, normal spaces N_g = (1-g)V, and pair conditions."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .arith import Cyclotomic
from .group import FiniteMatrixGroup, GroupElement
from .linalg import (
    LinAlgError,
    Mat,
    Subspace,
    image,
    inverse,
    kernel,
    rank,
    same_subspace,
    subspace_intersection,
    subspace_sum,
    is_subspace_of,
)


@dataclass(frozen=True)
class FixedData:
    g: GroupElement
    fixed: Subspace
    normal: Subspace
    codim: int
    # inverse of [fixed basis | normal basis]: v -> (fixed coords, normal coords)
    split_inv: Mat

    @property
    def fixed_dim(self) -> int:
        return self.fixed.dim

    def split(self, v) -> tuple[tuple[Cyclotomic, ...], tuple[Cyclotomic, ...]]:
        c = self.split_inv.apply(v)
        k = self.fixed.dim
        return c[:k], c[k:]


@dataclass(frozen=True)
class PairReport:
    g: int
    h: int
    conditions: dict[str, bool]
    codim_additive: bool
    transverse_shared: bool

    @property
    def all_equal(self) -> bool:
        """All seven conditions share one truth value (the equivalence as usually stated)."""
        return len(set(self.conditions.values())) == 1

    @property
    def consistent(self) -> bool:
        """The relations that do hold: STRONG all equal, WEAK all equal, STRONG implies WEAK,
        and STRONG agrees with transverse-shared and with codim-additivity.

        The full seven-way equivalence fails e.g. for g = h of order 3, where
        N_g + N_g = N_g2 but N_g cap N_g != 0.
        """
        strong = {self.conditions[k] for k in STRONG}
        weak = {self.conditions[k] for k in WEAK}
        if len(strong) != 1 or len(weak) != 1:
            return False
        st, wk = strong.pop(), weak.pop()
        return (wk or not st) and st == self.transverse_shared == self.codim_additive


BATTERY = ("i", "ii", "iii", "iv", "a", "b", "c")
STRONG = ("iii", "a", "c")
WEAK = ("i", "ii", "iv", "b")


class FixedLoci:
    """Per-element splittings V = V^g (+) N_g for a group, computed lazily."""

    def __init__(self, group: FiniteMatrixGroup):
        self.group = group
        self.dim = group.dim
        self._cache: dict[int, FixedData] = {}
        self._transport: dict[tuple[int, int, str], Mat] = {}
        self._lock = threading.Lock()
        self._ident = Mat.identity(group.dim, group.order_n)

    def one_minus(self, gid: int) -> Mat:
        return self._ident - self.group.matrix(gid)

    def fixed_data(self, gid: int) -> FixedData:
        fd = self._cache.get(gid)
        if fd is not None:
            return fd
        m = self.one_minus(gid)
        fixed = kernel(m)
        normal = image(m)
        both = fixed.basis.hstack(normal.basis)
        if both.cols != self.dim:
            raise LinAlgError("rank-nullity violated")
        # raises if V^g and (1-g)V fail to span V
        split_inv = inverse(both)
        fd = FixedData(self.group.elements[gid], fixed, normal, normal.dim, split_inv)
        with self._lock:
            return self._cache.setdefault(gid, fd)

    def codim(self, gid: int) -> int:
        return self.fixed_data(gid).codim

    def codim_additive(self, g: int, h: int) -> bool:
        gh = self.group.mult[g][h]
        return self.codim(gh) == self.codim(g) + self.codim(h)

    def transverse_shared(self, g: int, h: int) -> bool:
        """V^g and V^h meet transversely along a shared component with V^gh."""
        fg, fh = self.fixed_data(g), self.fixed_data(h)
        fgh = self.fixed_data(self.group.mult[g][h])
        inter = subspace_intersection(fg.fixed, fh.fixed)
        shared = same_subspace(inter, fgh.fixed)
        transverse = fg.fixed.dim + fh.fixed.dim - inter.dim == self.dim
        return shared and transverse

    def dualrels_battery(self, g: int, h: int) -> PairReport:
        """Evaluate each pair condition independently; equivalence is not assumed."""
        mult = self.group.mult
        gh = mult[g][h]
        fg, fh, fgh = self.fixed_data(g), self.fixed_data(h), self.fixed_data(gh)
        ng, nh, ngh = fg.normal, fh.normal, fgh.normal
        nsum = subspace_sum(ng, nh)
        ninter = subspace_intersection(ng, nh)
        # V^<g,h> as the common kernel of 1-g and 1-h
        v_h = kernel(self.one_minus(g).vstack(self.one_minus(h)))
        fix_inter = subspace_intersection(fg.fixed, fh.fixed)
        conditions = {
            "i": is_subspace_of(ng, ngh),
            "ii": same_subspace(nsum, ngh),
            "iii": ninter.dim == 0,
            "iv": same_subspace(v_h, fgh.fixed),
            "a": same_subspace(nsum, ngh) and ng.dim + nh.dim == ngh.dim,
            "b": same_subspace(fgh.fixed, fix_inter),
            "c": rank(fg.fixed.basis.hstack(fh.fixed.basis)) == self.dim,
        }
        return PairReport(g, h, conditions, self.codim_additive(g, h), self.transverse_shared(g, h))

    def codim_check(self, g: int, h: int) -> tuple[bool, bool]:
        """(codim V^gh <= codim(V^g cap V^h), codim(V^g cap V^h) <= codim g + codim h)."""
        fg, fh = self.fixed_data(g), self.fixed_data(h)
        inter = subspace_intersection(fg.fixed, fh.fixed)
        ci = self.dim - inter.dim
        cgh = self.codim(self.group.mult[g][h])
        return cgh <= ci, ci <= fg.codim + fh.codim

    def kappa_matrix(self, g: int, h: int) -> Mat:
        """Matrix of N_g (+) N_h -> N_gh (include, then project along V^gh)."""
        fg, fh = self.fixed_data(g), self.fixed_data(h)
        fgh = self.fixed_data(self.group.mult[g][h])
        if fg.codim + fh.codim != fgh.codim:
            raise LinAlgError(f"codims {fg.codim}+{fh.codim} != {fgh.codim}: kappa is not square")
        cols = [fgh.split(v)[1] for v in fg.normal.vectors() + fh.normal.vectors()]
        return Mat.from_columns(cols, fgh.codim, self.group.order_n)

    def restrict(self, gid: int, op: Mat, part: str) -> Mat:
        """Matrix of op on V^g ('fixed') or N_g ('normal'), op preserving it."""
        fd = self.fixed_data(gid)
        sub = fd.fixed if part == "fixed" else fd.normal
        idx = 0 if part == "fixed" else 1
        cols = [fd.split(op.apply(v))[idx] for v in sub.vectors()]
        return Mat.from_columns(cols, sub.dim, self.group.order_n)

    def transport(self, k: int, gid: int, part: str) -> Mat:
        """Matrix of k : (V^g or N_g) -> (V^kgk^-1 or N_kgk^-1) in the chosen bases."""
        key = (k, gid, part)
        m = self._transport.get(key)
        if m is None:
            m = self._transport_uncached(k, gid, part)
            with self._lock:
                self._transport.setdefault(key, m)
        return m

    def _transport_uncached(self, k: int, gid: int, part: str) -> Mat:
        src = self.fixed_data(gid)
        dst = self.fixed_data(self.group.conj(k, gid))
        sub = src.fixed if part == "fixed" else src.normal
        idx = 0 if part == "fixed" else 1
        km = self.group.matrix(k)
        cols = [dst.split(km.apply(v))[idx] for v in sub.vectors()]
        return Mat.from_columns(cols, sub.dim, self.group.order_n)
