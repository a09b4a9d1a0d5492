"""The fiber Hochschild algebra A = sum_g Lambda(V^g) (x) det(N_g) at the origin.

A basis element is a pair (g, S): the wedge of the V^g basis vectors indexed
by the bitmask S, followed by psi_g, the wedge of the N_g basis.  Its
cohomological degree is |S| + codim(g).

Sign convention: psi_g sits rightmost with degree codim(g), so
(a psi_g)(b psi_h) = (-1)^(codim(g) |b|) p(a) p(b) c(g, h) psi_gh.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from . import exterior as ext
from .arith import Cyclotomic
from .detalg import DetAlgebra
from .fixedloci import FixedLoci
from .group import check_symplectic
from .linalg import Mat, det, det_one_minus_t, inverse, rank, same_subspace, subspace_intersection


class FiberElement:
    """Sparse linear combination of basis elements (g, S)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Cyclotomic] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other: FiberElement) -> FiberElement:
        out = dict(self.terms)
        for k, v in other.terms.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return FiberElement(out)

    def __sub__(self, other: FiberElement) -> FiberElement:
        return self + other.scale(-1)

    def scale(self, c) -> FiberElement:
        return FiberElement({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiberElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        inner = ", ".join(f"(g{g},{bin(s)}): {c}" for (g, s), c in sorted(self.terms.items()))
        return f"FiberElement({{{inner}}})"


@dataclass(frozen=True)
class GradedDims:
    dims: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def get(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def as_list(self) -> list[int]:
        top = max(self.dims, default=-1)
        return [self.dims.get(j, 0) for j in range(top + 1)]


@dataclass(frozen=True)
class MolienSeries:
    maxdeg: int
    series: dict[int, list[int]] = field(default_factory=dict)  # cohomological degree -> coeffs of t^0..t^maxdeg


class MolienError(ArithmeticError):
    pass


class FiberAlgebra:
    def __init__(self, det_algebra: DetAlgebra):
        self.sa = det_algebra
        self.loci: FixedLoci = det_algebra.loci
        self.group = det_algebra.group
        self.order = self.group.order_n
        self._one = Cyclotomic.rational(1, self.order)
        self._proj: dict[tuple[int, int], list[tuple[Cyclotomic, ...]]] = {}
        self._proj_mono: dict[tuple[int, int, int], ext.Ext] = {}
        self._incl: dict[tuple[int, int, int], ext.Ext] = {}
        self._shared: dict[tuple[int, int], bool] = {}
        self._transport_cols: dict[tuple[int, int], list] = {}

    # basis -----------------------------------------------------------------

    def basis(self) -> Iterator[tuple[int, int]]:
        for g in range(len(self.group)):
            for s in range(1 << self.loci.fixed_data(g).fixed_dim):
                yield (g, s)

    def degree(self, g: int, s: int) -> int:
        return ext.popcount(s) + self.loci.codim(g)

    def element(self, g: int, s: int = 0, c=1) -> FiberElement:
        return FiberElement({(g, s): Cyclotomic.coerce(c, self.order)})

    def unit(self) -> FiberElement:
        return self.element(0, 0)

    # the product -------------------------------------------------------------

    def _projected(self, g: int, t: int, s: int) -> ext.Ext:
        """p_t(f_S) in Lambda(V^t): project each V^g basis vector along N_t."""
        key = (g, t, s)
        out = self._proj_mono.get(key)
        if out is None:
            imgs = self._proj.get((g, t))
            if imgs is None:
                ft = self.loci.fixed_data(t)
                imgs = [ft.split(v)[0] for v in self.loci.fixed_data(g).fixed.vectors()]
                self._proj[(g, t)] = imgs
            out = ext.image_of_monomial(s, imgs, self.order)
            self._proj_mono[key] = out
        return out

    def multiply_basis(self, g: int, s: int, h: int, t: int) -> tuple[int, ext.Ext]:
        gh = self.group.mult[g][h]
        c = self.sa.sa_constant(g, h)
        if not c:
            return gh, {}
        prod = ext.wedge(self._projected(g, gh, s), self._projected(h, gh, t))
        if (self.loci.codim(g) * ext.popcount(t)) & 1:
            c = -c
        return gh, ext.scale(prod, c)

    def multiply(self, a: FiberElement, b: FiberElement) -> FiberElement:
        out: dict[tuple[int, int], Cyclotomic] = {}
        for (g, s), ca in a.terms.items():
            for (h, t), cb in b.terms.items():
                gh, prod = self.multiply_basis(g, s, h, t)
                if not prod:
                    continue
                cab = ca * cb
                for m, v in prod.items():
                    k = (gh, m)
                    prev = out.get(k)
                    out[k] = cab * v if prev is None else prev + cab * v
        return FiberElement(out)

    # the alternate product: include into Lambda(V), multiply, project --------

    def shared(self, g: int, h: int) -> bool:
        """V^gh = V^g cap V^h."""
        key = (g, h)
        val = self._shared.get(key)
        if val is None:
            fg, fh = self.loci.fixed_data(g), self.loci.fixed_data(h)
            fgh = self.loci.fixed_data(self.group.mult[g][h])
            val = same_subspace(fgh.fixed, subspace_intersection(fg.fixed, fh.fixed))
            self._shared[key] = val
        return val

    def _included(self, g: int, target: int, s: int) -> ext.Ext:
        """f_S ^ psi_g as an element of Lambda(V), in the splitting basis of `target`."""
        key = (g, target, s)
        out = self._incl.get(key)
        if out is None:
            fg = self.loci.fixed_data(g)
            coords = self.loci.fixed_data(target).split_inv
            vecs = [coords.apply(v) for v in fg.fixed.vectors()]
            chosen = [vecs[i] for i in ext.bits(s)]
            chosen += [coords.apply(v) for v in fg.normal.vectors()]
            out = ext.wedge_vectors(chosen, self.order)
            self._incl[key] = out
        return out

    def alternate_multiply_basis(self, g: int, s: int, h: int, t: int) -> tuple[int, ext.Ext]:
        gh = self.group.mult[g][h]
        if not self.shared(g, h):
            return gh, {}
        prod = ext.wedge(self._included(g, gh, s), self._included(h, gh, t))
        fgh = self.loci.fixed_data(gh)
        k = fgh.fixed_dim
        top = ((1 << fgh.codim) - 1) << k
        low = (1 << k) - 1
        return gh, {m & low: c for m, c in prod.items() if m & top == top}

    def alternate_multiply(self, a: FiberElement, b: FiberElement) -> FiberElement:
        out: dict[tuple[int, int], Cyclotomic] = {}
        for (g, s), ca in a.terms.items():
            for (h, t), cb in b.terms.items():
                gh, prod = self.alternate_multiply_basis(g, s, h, t)
                cab = ca * cb
                for m, v in prod.items():
                    kk = (gh, m)
                    prev = out.get(kk)
                    out[kk] = cab * v if prev is None else prev + cab * v
        return FiberElement(out)

    # G-action and invariants ---------------------------------------------------

    def act(self, k: int, g: int, s: int) -> tuple[int, ext.Ext]:
        """k . (f_S psi_g) = eps_k(g) Lambda(k)(f_S) psi_{kgk^-1}."""
        kg = self.group.conj(k, g)
        imgs = self._transport_cols.get((k, g))
        if imgs is None:
            imgs = self._transport_cols[(k, g)] = self.loci.transport(k, g, "fixed").columns()
        img = ext.image_of_monomial(s, imgs, self.order)
        return kg, ext.scale(img, self.sa.epsilon(k, g))

    def _class_projector(self, cls: list[int]) -> tuple[list[tuple[int, int]], dict]:
        n = len(self.group)
        basis = [(g, s) for g in cls for s in range(1 << self.loci.fixed_data(g).fixed_dim)]
        index = {b: i for i, b in enumerate(basis)}
        weight = Fraction(1, n)
        cols: dict[int, dict[int, Cyclotomic]] = defaultdict(dict)
        for j, (g, s) in enumerate(basis):
            col = cols[j]
            for k in range(n):
                kg, img = self.act(k, g, s)
                for m, c in img.items():
                    i = index[(kg, m)]
                    prev = col.get(i)
                    col[i] = c if prev is None else prev + c
            for i in list(col):
                col[i] = col[i] * weight
        return basis, cols

    def invariant_dims(self, empty_monomial_only: bool = False) -> GradedDims:
        """Per-degree rank of the averaging projector on the fiber algebra."""
        dims: dict[int, int] = defaultdict(int)
        zero = Cyclotomic.rational(0, self.order)
        for cls in self.group.classes:
            basis, cols = self._class_projector(cls)
            by_degree: dict[int, list[int]] = defaultdict(list)
            for j, (g, s) in enumerate(basis):
                if empty_monomial_only and s:
                    continue
                by_degree[self.degree(g, s)].append(j)
            for deg, idx in by_degree.items():
                pos = {j: r for r, j in enumerate(idx)}
                rows = [[zero] * len(idx) for _ in idx]
                for c_, j in enumerate(idx):
                    for i, v in cols[j].items():
                        r = pos.get(i)
                        if r is not None:
                            rows[r][c_] = v
                dims[deg] += rank(Mat(rows, self.order)) if idx else 0
        return GradedDims({d: v for d, v in sorted(dims.items()) if v})

    def invariant_trace_dims(self) -> GradedDims:
        """Same dimensions via the trace of the averaging projector."""
        dims: dict[int, Cyclotomic] = defaultdict(lambda: Cyclotomic.rational(0, self.order))
        for cls in self.group.classes:
            basis, cols = self._class_projector(cls)
            for j, (g, s) in enumerate(basis):
                v = cols[j].get(j)
                if v:
                    dims[self.degree(g, s)] += v
        out = {}
        for d, v in sorted(dims.items()):
            q = v.to_fraction()
            if q.denominator != 1 or q < 0:
                raise MolienError(f"non-integral projector trace {q} in degree {d}")
            if q:
                out[d] = int(q)
        return GradedDims(out)

    # Molien averaging ------------------------------------------------------------

    def molien_bigraded(self, maxdeg: int) -> MolienSeries:
        if maxdeg < 0:
            raise ValueError("maxdeg must be >= 0")
        grp = self.group
        zero = Cyclotomic.rational(0, self.order)
        acc: dict[int, list[Cyclotomic]] = defaultdict(lambda: [zero] * (maxdeg + 1))
        for cls in grp.classes:
            g = cls[0]
            cg = self.loci.codim(g)
            cent = sorted(grp.centralizers[g])
            weight = Fraction(1, len(cent))
            for h in cent:
                hmat = grp.matrix(h)
                on_fixed = self.loci.restrict(g, hmat, "fixed")
                on_normal = self.loci.restrict(g, hmat, "normal")
                det_normal = _det(on_normal, self.order)
                # det(1 + s A) = sum e_k(A) s^k,  det(1 - t A) = sum (-1)^k e_k(A) t^k
                ext_char = det_one_minus_t(on_fixed)
                ext_char = [c if k % 2 == 0 else -c for k, c in enumerate(ext_char)]
                sym = _inverse_series(det_one_minus_t(inverse(on_fixed)) if on_fixed.rows else [self._one], maxdeg)
                for j, ej in enumerate(ext_char):
                    if not ej:
                        continue
                    row = acc[j + cg]
                    f = ej * det_normal * weight
                    for n in range(maxdeg + 1):
                        if sym[n]:
                            row[n] = row[n] + f * sym[n]
        series: dict[int, list[int]] = {}
        for deg in sorted(acc):
            out = []
            for n, v in enumerate(acc[deg]):
                if not v.is_rational():
                    raise MolienError(f"irrational Molien coefficient {v} at degree {deg}, t^{n}")
                q = v.to_fraction()
                if q.denominator != 1 or q < 0:
                    raise MolienError(f"Molien coefficient {q} at degree {deg}, t^{n} is not a nonnegative integer")
                out.append(int(q))
            if any(out):
                series[deg] = out
        return MolienSeries(maxdeg, series)

    def orbifold_dims(self, J: Mat | None) -> GradedDims:
        """Classes counted by codimension (age shift codim/2 doubled)."""
        if J is None or not check_symplectic(self.group, J):
            raise ValueError("orbifold dimension count needs a symplectic action")
        dims: dict[int, int] = defaultdict(int)
        for cls in self.group.classes:
            dims[self.loci.codim(cls[0])] += 1
        return GradedDims(dict(sorted(dims.items())))


def _det(m: Mat, order: int) -> Cyclotomic:
    return det(m) if m.rows else Cyclotomic.rational(1, order)


def _inverse_series(p: list[Cyclotomic], n: int) -> list[Cyclotomic]:
    """Coefficients of 1/p up to t^n; p[0] must be invertible."""
    inv0 = p[0].inverse()
    out = [inv0]
    for k in range(1, n + 1):
        acc = Cyclotomic.rational(0, p[0].order)
        for i in range(1, min(k, len(p) - 1) + 1):
            if p[i]:
                acc = acc + p[i] * out[k - i]
        out.append(-acc * inv0)
    return out
