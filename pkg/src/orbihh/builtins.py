"""Catalogue of built-in example actions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import Cyclotomic, format_scalar
from .group import cotangent_lift, cycle_perm, permutation_matrix
from .linalg import Mat
from .symplectic import standard_form


@dataclass
class InputSpec:
    name: str
    cyclotomic_order: int
    dimension: int
    generators: list[Mat]
    symplectic_form: Mat | None = None
    cap: int = 5000
    maxdeg: int = 10
    seed: int = 0
    trials: int = 50
    extra: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        def rows(m: Mat) -> list[list[str]]:
            return [[format_scalar(x) for x in r] for r in m.data]

        return {
            "name": self.name,
            "cyclotomic_order": self.cyclotomic_order,
            "dimension": self.dimension,
            "generators": [rows(g) for g in self.generators],
            "symplectic_form": rows(self.symplectic_form) if self.symplectic_form is not None else None,
            "options": {"cap": self.cap, "maxdeg": self.maxdeg, "seed": self.seed, "trials": self.trials},
        }


class UnknownBuiltin(KeyError):
    pass


def sym_n(k: int) -> InputSpec:
    """S_k permuting coordinates of T*C^k."""
    if k < 1:
        raise UnknownBuiltin(f"sym_n:{k}: need k >= 1")
    if k == 1:
        gens = [Mat.identity(2)]
    else:
        gens = [cotangent_lift(permutation_matrix(cycle_perm(k, 1, 2)))]
        if k > 2:
            gens.append(cotangent_lift(permutation_matrix(cycle_perm(k, *range(1, k + 1)))))
    return InputSpec(f"sym_n:{k}", 1, 2 * k, gens, standard_form(k))


def minus_one(d: int) -> InputSpec:
    if d < 2 or d % 2:
        raise UnknownBuiltin(f"minus_one:{d}: dimension must be even and >= 2")
    return InputSpec(f"minus_one:{d}", 1, d, [Mat.identity(d).scale(-1)], standard_form(d // 2))


def cyclic(n: int) -> InputSpec:
    if n < 1:
        raise UnknownBuiltin(f"cyclic:{n}: need n >= 1")
    z = Cyclotomic.zeta(n)
    g = Mat.diag([z, z.inverse()])
    return InputSpec(f"cyclic:{n}", n, 2, [g], standard_form(1, n))


def reflection() -> InputSpec:
    return InputSpec("reflection", 1, 1, [Mat([[-1]])], None)


def weyl_b2() -> InputSpec:
    swap = Mat([[0, 1], [1, 0]])
    flip = Mat([[-1, 0], [0, 1]])
    return InputSpec("weyl_b2", 1, 4, [cotangent_lift(swap), cotangent_lift(flip)], standard_form(2))


def builtin(name: str) -> InputSpec:
    base, _, arg = name.partition(":")
    try:
        if base == "sym_n" and arg:
            return sym_n(int(arg))
        if base == "minus_one" and arg:
            return minus_one(int(arg))
        if base == "cyclic" and arg:
            return cyclic(int(arg))
    except ValueError:
        raise UnknownBuiltin(f"bad builtin parameter in {name!r}") from None
    if name == "reflection":
        return reflection()
    if name == "weyl_b2":
        return weyl_b2()
    raise UnknownBuiltin(f"unknown builtin {name!r}")


# the finite set exercised by the verification suite
STANDARD_BUILTINS = (
    "sym_n:2",
    "sym_n:3",
    "sym_n:4",
    "minus_one:2",
    "minus_one:4",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:6",
    "reflection",
    "weyl_b2",
)
