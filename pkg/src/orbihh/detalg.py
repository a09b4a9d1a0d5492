"""The determinant-line subalgebra SA = sum_g det(N_g).

Constants are relative to the pivot bases of N_g chosen in fixedloci:
psi_g . psi_h = c(g, h) psi_gh, with psi_g the wedge of the N_g basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import Cyclotomic
from .fixedloci import FixedLoci
from .linalg import det, wedge_coefficient


@dataclass(frozen=True)
class SAConstants:
    table: dict[tuple[int, int], Cyclotomic]

    def __getitem__(self, gh: tuple[int, int]) -> Cyclotomic:
        return self.table[gh]


@dataclass(frozen=True)
class EquivarianceScalars:
    eps: dict[tuple[int, int], Cyclotomic]  # (k, g) -> eps_k(g)


class DetAlgebra:
    def __init__(self, loci: FixedLoci):
        self.loci = loci
        self.group = loci.group
        self._c: dict[tuple[int, int], Cyclotomic] = {}
        self._eps: dict[tuple[int, int], Cyclotomic] = {}
        self._one = Cyclotomic.rational(1, self.group.order_n)
        self._zero = Cyclotomic.rational(0, self.group.order_n)

    def sa_constant(self, g: int, h: int) -> Cyclotomic:
        key = (g, h)
        c = self._c.get(key)
        if c is None:
            if not self.loci.transverse_shared(g, h):
                c = self._zero
            else:
                fg, fh = self.loci.fixed_data(g), self.loci.fixed_data(h)
                fgh = self.loci.fixed_data(self.group.mult[g][h])
                # N_g, N_h sit inside N_gh, so kappa is the inclusion
                c = wedge_coefficient(fg.normal.vectors() + fh.normal.vectors(), fgh.normal)
            self._c[key] = c
        return c

    def kappa_det(self, g: int, h: int) -> Cyclotomic:
        return det(self.loci.kappa_matrix(g, h))

    def sa_table(self) -> SAConstants:
        n = len(self.group)
        return SAConstants({(g, h): self.sa_constant(g, h) for g in range(n) for h in range(n)})

    def epsilon(self, k: int, g: int) -> Cyclotomic:
        """k . psi_g = eps_k(g) psi_{k g k^-1}."""
        key = (k, g)
        e = self._eps.get(key)
        if e is None:
            e = det(self.loci.transport(k, g, "normal")) if self.loci.codim(g) else self._one
            self._eps[key] = e
        return e

    def equivariance_scalars(self) -> EquivarianceScalars:
        n = len(self.group)
        return EquivarianceScalars({(k, g): self.epsilon(k, g) for k in range(n) for g in range(n)})

    # checks ---------------------------------------------------------------

    def associativity_failures(self) -> list[tuple[int, int, int]]:
        mult = self.group.mult
        n = len(self.group)
        bad = []
        for g in range(n):
            for h in range(n):
                cgh = self.sa_constant(g, h)
                gh = mult[g][h]
                for k in range(n):
                    left = cgh * self.sa_constant(gh, k) if cgh else self._zero
                    chk = self.sa_constant(h, k)
                    right = chk * self.sa_constant(g, mult[h][k]) if chk else self._zero
                    if left != right:
                        bad.append((g, h, k))
        return bad

    def equivariance_failures(self) -> list[tuple[int, int, int]]:
        """(k, g, h) violating c(kgk^-1, khk^-1) e_k(g) e_k(h) = e_k(gh) c(g, h)."""
        grp = self.group
        n = len(grp)
        bad = []
        for g in range(n):
            for h in range(n):
                c = self.sa_constant(g, h)
                if not c:
                    continue
                gh = grp.mult[g][h]
                for k in range(n):
                    lhs = self.sa_constant(grp.conj(k, g), grp.conj(k, h)) * self.epsilon(k, g) * self.epsilon(k, h)
                    if lhs != self.epsilon(k, gh) * c:
                        bad.append((k, g, h))
        return bad

    def epsilon_cocycle_failures(self) -> list[tuple[int, int, int]]:
        grp = self.group
        n = len(grp)
        bad = []
        for k1 in range(n):
            for k2 in range(n):
                k12 = grp.mult[k1][k2]
                for g in range(n):
                    if self.epsilon(k12, g) != self.epsilon(k1, grp.conj(k2, g)) * self.epsilon(k2, g):
                        bad.append((k1, k2, g))
        return bad
