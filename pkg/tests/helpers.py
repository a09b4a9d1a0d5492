"""Shared, cached construction of the objects each builtin needs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from orbihh.builtins import InputSpec, builtin
from orbihh.cli import element_label
from orbihh.detalg import DetAlgebra
from orbihh.fiberalg import FiberAlgebra
from orbihh.fixedloci import FixedLoci
from orbihh.group import FiniteMatrixGroup, close_generators
from orbihh.symplectic import SymplecticData, SymplecticStructure


@dataclass
class Context:
    spec: InputSpec
    group: FiniteMatrixGroup
    loci: FixedLoci
    sa: DetAlgebra
    fiber: FiberAlgebra
    symp: SymplecticData | None

    def by_label(self, label: str) -> int:
        for g in range(len(self.group)):
            if element_label(self.group, g) == label:
                return g
        raise KeyError(label)


@lru_cache(maxsize=None)
def context(name: str) -> Context:
    spec = builtin(name)
    group = close_generators(spec.generators)
    loci = FixedLoci(group)
    sa = DetAlgebra(loci)
    fiber = FiberAlgebra(sa)
    symp = None
    if spec.symplectic_form is not None:
        symp = SymplecticData(sa, SymplecticStructure.from_form(spec.symplectic_form.lift(group.order_n)))
    return Context(spec, group, loci, sa, fiber, symp)


SMALL = ("sym_n:2", "sym_n:3", "minus_one:2", "minus_one:4", "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:6", "reflection", "weyl_b2")
SYMPLECTIC = tuple(n for n in SMALL if n != "reflection") + ("sym_n:4",)
