"""Symplectic normalization: psi_g, the cocycle a(g, h), lambda_g, and the
Pfaffian identities for complementary nondegenerate subspaces.

Conventions: J is the matrix of the form, omega(x, y) = x^T J y, and the
bivector pi has coefficient matrix J^-1, i.e. pi = sum_{i<j} (J^-1)_ij e_i ^ e_j.
Identities involving square roots are checked on squares (exact) plus a
numeric sign test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import exterior as ext
from .arith import POSITIVITY_TOL, Cyclotomic, SqrtPosReal
from .detalg import DetAlgebra
from .fixedloci import FixedLoci
from .group import FiniteMatrixGroup, check_symplectic
from .linalg import (
    LinAlgError,
    Mat,
    Subspace,
    complementary_projectors,
    det,
    inverse,
    is_skew,
    kernel,
    pfaffian,
    rank,
)


class SymplecticError(ValueError):
    pass


@dataclass(frozen=True)
class SymplecticStructure:
    J: Mat
    pi: Mat

    @classmethod
    def from_form(cls, J: Mat) -> SymplecticStructure:
        if not J.is_square() or J.rows % 2:
            raise SymplecticError("symplectic form must be an even-dimensional square matrix")
        if not is_skew(J):
            raise SymplecticError("symplectic form is not skew-symmetric")
        try:
            pi = inverse(J)
        except LinAlgError:
            raise SymplecticError("symplectic form is degenerate") from None
        return cls(J, pi)

    @property
    def dim(self) -> int:
        return self.J.rows


def standard_form(n: int, order: int = 1) -> Mat:
    """[[0, I_n], [-I_n, 0]]: e_i paired with f_i = e_(n+i)."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = 1
        rows[n + i][i] = -1
    return Mat(rows, order)


def block_form(n: int, order: int = 1) -> Mat:
    """J_n = block-diag of [[0, 1], [-1, 0]]."""
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for p in range(n):
        rows[2 * p][2 * p + 1] = 1
        rows[2 * p + 1][2 * p] = -1
    return Mat(rows, order)


def component_bivector(pi: Mat, basis: Mat) -> tuple[Mat, Mat]:
    """Coefficients of pi in a new basis (columns of `basis`): Q pi Q^T, Q = basis^-1."""
    q = inverse(basis)
    return q @ pi @ q.T, q


def top_power_coefficient(coeffs: Mat) -> Cyclotomic:
    """c with (1/d!) omega^d = c * (wedge of all basis vectors), omega = (1/2) sum M_ij b_i ^ b_j."""
    n = coeffs.rows
    if n == 0:
        return Cyclotomic.rational(1, coeffs.order)
    power = ext.divided_power(ext.bivector(coeffs, n), n // 2, coeffs.order)
    return power.get((1 << n) - 1, Cyclotomic.rational(0, coeffs.order))


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, item) -> None:
        self.failures.append(item)


class SymplecticData:
    """psi_g scalars, lambda_g and the cocycle a(g, h) for a symplectic group."""

    def __init__(self, det_algebra: DetAlgebra, form: SymplecticStructure):
        self.sa = det_algebra
        self.loci: FixedLoci = det_algebra.loci
        self.group: FiniteMatrixGroup = det_algebra.group
        order = self.group.order_n
        self.form = SymplecticStructure(form.J.lift(max(order, form.J.order)), form.pi.lift(max(order, form.pi.order)))
        if self.form.dim != self.group.dim:
            raise SymplecticError("form dimension does not match the group")
        if not check_symplectic(self.group, self.form.J):
            raise SymplecticError("group does not preserve the symplectic form")
        self.order = self.form.J.order
        self._psi: dict[int, Cyclotomic] = {}
        self._lambda: dict[int, SqrtPosReal] = {}

    def psi_scalar(self, g: int) -> Cyclotomic:
        """s_g with psi_g = s_g * (wedge of the N_g basis)."""
        s = self._psi.get(g)
        if s is None:
            fd = self.loci.fixed_data(g)
            k, c = fd.fixed_dim, fd.codim
            if c == 0:
                s = Cyclotomic.rational(1, self.order)
            else:
                if c % 2:
                    raise SymplecticError(f"element {g} has odd codimension {c}")
                coeffs, _ = component_bivector(self.form.pi, fd.fixed.basis.hstack(fd.normal.basis))
                mixed = coeffs.submatrix(range(k), range(k, k + c))
                if not mixed.is_zero():
                    raise SymplecticError(f"mixed component of pi on the splitting of element {g} is nonzero")
                s = top_power_coefficient(coeffs.submatrix(range(k, k + c), range(k, k + c)))
                if not s:
                    raise SymplecticError(f"pi is degenerate on N_g for element {g}")
            self._psi[g] = s
        return s

    def psi_pfaffian(self, g: int) -> Cyclotomic:
        """Independent route to s_g: Pfaffian of the N_g block of pi."""
        fd = self.loci.fixed_data(g)
        k, c = fd.fixed_dim, fd.codim
        if c == 0:
            return Cyclotomic.rational(1, self.order)
        coeffs, _ = component_bivector(self.form.pi, fd.fixed.basis.hstack(fd.normal.basis))
        return pfaffian(coeffs.submatrix(range(k, k + c), range(k, k + c)))

    def lambda_square(self, g: int) -> Cyclotomic:
        fd = self.loci.fixed_data(g)
        if fd.codim == 0:
            return Cyclotomic.rational(1, self.order)
        return det(self.loci.restrict(g, self.loci.one_minus(g), "normal"))

    def lam(self, g: int) -> SqrtPosReal:
        val = self._lambda.get(g)
        if val is None:
            sq = self.lambda_square(g)
            if not sq.is_real():
                raise SymplecticError(f"det(1-g | N_g) = {sq} is not real for element {g}")
            val = SqrtPosReal.of(sq)
            self._lambda[g] = val
        return val

    def cocycle(self, g: int, h: int) -> Cyclotomic:
        """a(g, h) with psi_g psi_h = a(g, h) psi_gh."""
        c = self.sa.sa_constant(g, h)
        if not c:
            raise SymplecticError(f"pair ({g}, {h}) is not transverse-shared")
        gh = self.group.mult[g][h]
        return c * self.psi_scalar(g) * self.psi_scalar(h) / self.psi_scalar(gh)

    def cocycle_table(self) -> dict[tuple[int, int], Cyclotomic]:
        n = len(self.group)
        return {
            (g, h): self.cocycle(g, h) for g in range(n) for h in range(n) if self.loci.transverse_shared(g, h)
        }

    # verification ------------------------------------------------------------

    def verify_coboundary(self) -> CheckReport:
        """a^2 lambda_g^2 lambda_h^2 = lambda_gh^2 exactly, a > 0, lambda conjugation-invariant."""
        rep = CheckReport("coboundary")
        grp = self.group
        n = len(grp)
        for g in range(n):
            sq = self.lambda_square(g)
            rep.checked += 1
            if not sq.is_real() or sq.embed().real <= POSITIVITY_TOL:
                rep.fail(("lambda-not-positive", g, str(sq)))
            for k in range(n):
                rep.checked += 1
                if self.lambda_square(grp.conj(k, g)) != sq:
                    rep.fail(("lambda-not-invariant", k, g))
        for (g, h), a in self.cocycle_table().items():
            gh = grp.mult[g][h]
            rep.checked += 1
            if a * a * self.lambda_square(g) * self.lambda_square(h) != self.lambda_square(gh):
                rep.fail(("square-identity", g, h, str(a)))
            if not a.is_real() or a.embed().real <= POSITIVITY_TOL:
                rep.fail(("cocycle-not-positive", g, h, str(a)))
        return rep

    def cocycle_covariance_failures(self) -> list[tuple[int, int, int]]:
        grp = self.group
        table = self.cocycle_table()
        bad = []
        for (g, h), a in table.items():
            for k in range(len(grp)):
                if table.get((grp.conj(k, g), grp.conj(k, h))) != a:
                    bad.append((k, g, h))
        return bad

    def rescaled_constants(self) -> dict[tuple[int, int], SqrtPosReal | int]:
        """Structure constants for mu_g = lambda_g psi_g, as exact positive square roots (0 off-support)."""
        grp = self.group
        n = len(grp)
        out: dict[tuple[int, int], SqrtPosReal | int] = {}
        for g in range(n):
            for h in range(n):
                if not self.loci.transverse_shared(g, h):
                    out[(g, h)] = 0
                    continue
                a = self.cocycle(g, h)
                gh = grp.mult[g][h]
                # mu_g mu_h = a lambda_g lambda_h / lambda_gh  mu_gh
                sq = a * a * self.lambda_square(g) * self.lambda_square(h) / self.lambda_square(gh)
                if not a.is_real() or a.embed().real <= POSITIVITY_TOL:
                    raise SymplecticError(f"cocycle a({g},{h}) = {a} is not positive")
                out[(g, h)] = SqrtPosReal.of(sq)
        return out

    def transparent_check(self) -> CheckReport:
        """Rescaled det-line constants are all 1 and match gr_F C[G]."""
        rep = CheckReport("transparent")
        one = SqrtPosReal.of(1)
        gr = graded_group_algebra(self.group)
        for key, val in self.rescaled_constants().items():
            rep.checked += 1
            mine = 0 if val == 0 else (1 if val == one else val)
            if mine not in (0, 1):
                rep.fail(("constant-not-one", key, str(val.square)))
            if mine != gr[key]:
                rep.fail(("gr-mismatch", key, mine, gr[key]))
        return rep


def graded_group_algebra(group: FiniteMatrixGroup) -> dict[tuple[int, int], int]:
    """gr_F C[G] under the codimension filtration: gbar hbar = (gh)bar iff codims add."""
    n = len(group)
    ident = Mat.identity(group.dim, group.order_n)
    codim = [rank(ident - group.matrix(g)) for g in range(n)]
    return {
        (g, h): int(codim[group.mult[g][h]] == codim[g] + codim[h]) for g in range(n) for h in range(n)
    }


# ---------------------------------------------------------------------------
# complementary nondegenerate subspaces


def psi_of_subspace(pi: Mat, J: Mat, w: Subspace) -> ext.Ext:
    """psi_W in Lambda(V): top divided power of pi's component in Lambda^2 W along W^perp."""
    n = pi.rows
    perp = kernel(w.basis.T @ J)
    coeffs, _ = component_bivector(pi, perp.basis.hstack(w.basis))
    k = perp.dim
    mixed = coeffs.submatrix(range(k), range(k, n))
    if not mixed.is_zero():
        raise SymplecticError("W is not nondegenerate: pi has a mixed component")
    s = top_power_coefficient(coeffs.submatrix(range(k, n), range(k, n)))
    return ext.scale(ext.wedge_vectors(w.vectors(), pi.order), s)


def symplectic_projector(J: Mat, w: Subspace) -> Mat:
    """Projector onto W along its omega-orthogonal complement."""
    perp = kernel(w.basis.T @ J)
    return complementary_projectors(w, perp)[0]


@dataclass
class AppendixTrial:
    seed: str
    r: int
    s: int
    a_wedge: Cyclotomic
    pf_cinv: Cyclotomic
    det_proj: Cyclotomic
    det_cinv: Cyclotomic
    scaled_ratio: Cyclotomic
    pf_squared_ok: bool

    @property
    def passed(self) -> bool:
        return (
            self.a_wedge == self.pf_cinv
            and self.det_proj == self.det_cinv
            and self.scaled_ratio == self.det_cinv
            and self.pf_squared_ok
        )


def _random_invertible(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> Mat:
    while True:
        m = Mat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if det(m):
            return m


def appendix_trial(seed: str, r: int, s: int, orthogonal: bool = False) -> AppendixTrial:
    """One randomized check of a(W,U) = Pf(C^-1), det(P_W - P_U) = det(C^-1) and its scaled form."""
    rng = random.Random(seed)
    n = r + s
    dim = 2 * n
    a = _random_invertible(rng, dim)
    vs = a.columns()
    # pi = sum_p v_(2p-1) ^ v_(2p)
    pi = a @ block_form(n) @ a.T
    J = inverse(pi)
    while True:
        b = [[0 if orthogonal else rng.randint(-2, 2) for _ in range(2 * s)] for _ in range(2 * r)]
        ws = []
        for i in range(2 * r):
            w = list(vs[i])
            for j in range(2 * s):
                if b[i][j]:
                    w = [x + b[i][j] * y for x, y in zip(w, vs[2 * r + j])]
            ws.append(w)
        W = Subspace(Mat.from_columns(ws, dim))
        C = W.basis.T @ J @ W.basis
        # W must be nondegenerate; redraw b otherwise
        if det(C):
            break
    U = Subspace(Mat.from_columns(vs[2 * r :], dim))
    cinv = inverse(C)

    psi_w = psi_of_subspace(pi, J, W)
    psi_u = psi_of_subspace(pi, J, U)
    psi_v = ext.divided_power(ext.bivector(pi, dim), n, pi.order)
    full = (1 << dim) - 1
    a_wedge = ext.wedge(psi_w, psi_u).get(full, Cyclotomic.rational(0)) / psi_v[full]

    pf = pfaffian(cinv)
    det_cinv = det(cinv)

    pw = symplectic_projector(J, W)
    pu = symplectic_projector(J, U)
    det_proj = det(pw - pu)

    x = _random_invertible(rng, 2 * r)
    y = _random_invertible(rng, 2 * s)
    # operators X on W, Y on U acting in the w- and u-bases
    qw = inverse(W.basis.hstack(kernel(W.basis.T @ J).basis)).submatrix(range(2 * r), range(dim))
    qu = inverse(U.basis.hstack(kernel(U.basis.T @ J).basis)).submatrix(range(2 * s), range(dim))
    xpw = W.basis @ x @ qw
    ypu = U.basis @ y @ qu
    scaled = det(xpw - ypu) / (det(x) * det(y))

    return AppendixTrial(seed, r, s, a_wedge, pf, det_proj, det_cinv, scaled, pf * pf == det_cinv)


def appendix_c_suite(seed: int, trials: int, dims: Sequence[tuple[int, int]] = ((1, 1), (1, 2), (2, 2))) -> list[AppendixTrial]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    out = []
    for r, s in dims:
        for t in range(trials):
            out.append(appendix_trial(f"{seed}/{r}/{s}/{t}", r, s))
    return out
