import pytest

from orbihh.fixedloci import BATTERY, STRONG, WEAK
from orbihh.linalg import Mat, det, image, is_subspace_of, rank
from helpers import SMALL, context


def test_identity_and_minus_one():
    fd = context("minus_one:2").loci.fixed_data(0)
    assert fd.fixed.dim == 2 and fd.codim == 0
    fd = context("minus_one:2").loci.fixed_data(1)
    assert fd.fixed.dim == 0 and fd.codim == 2


def test_transposition_codim():
    ctx = context("sym_n:3")
    assert ctx.loci.codim(ctx.by_label("(12)")) == 2
    assert ctx.loci.codim(ctx.by_label("(123)")) == 4


@pytest.mark.parametrize("name", SMALL)
def test_splitting_invariants(name):
    ctx = context(name)
    d = ctx.group.dim
    for g in range(len(ctx.group)):
        fd = ctx.loci.fixed_data(g)
        m = ctx.group.matrix(g)
        for v in fd.fixed.vectors():
            assert m.apply(v) == v
        assert is_subspace_of(fd.normal, image(ctx.loci.one_minus(g)))
        assert rank(fd.fixed.basis.hstack(fd.normal.basis)) == d
        assert fd.codim == d - fd.fixed.dim
        # split() inverts the adapted basis
        for v in fd.fixed.vectors():
            f, nn = fd.split(v)
            assert all(x == 0 for x in nn)


def test_battery_examples():
    ctx = context("sym_n:3")
    e, t12, t23 = 0, ctx.by_label("(12)"), ctx.by_label("(23)")
    assert all(ctx.loci.dualrels_battery(e, e).conditions.values())
    assert all(ctx.loci.dualrels_battery(t12, t23).conditions.values())
    assert not any(ctx.loci.dualrels_battery(t12, t12).conditions.values())


def test_seven_way_equivalence_counterexample():
    # g = h of order 3: N_g + N_g = N_(g^2) but N_g meets itself
    ctx = context("sym_n:3")
    g = ctx.by_label("(123)")
    rep = ctx.loci.dualrels_battery(g, g)
    assert {k for k, v in rep.conditions.items() if v} == set(WEAK)
    assert not rep.all_equal
    assert rep.consistent


@pytest.mark.parametrize("name", SMALL)
def test_battery_relations_hold(name):
    ctx = context(name)
    n = len(ctx.group)
    for g in range(n):
        for h in range(n):
            rep = ctx.loci.dualrels_battery(g, h)
            assert set(rep.conditions) == set(BATTERY) == set(STRONG) | set(WEAK)
            assert rep.consistent, (g, h, rep.conditions)
            assert rep.transverse_shared == rep.codim_additive


@pytest.mark.parametrize("name", SMALL)
def test_codim_inequalities(name):
    ctx = context(name)
    n = len(ctx.group)
    assert all(all(ctx.loci.codim_check(g, h)) for g in range(n) for h in range(n))


@pytest.mark.parametrize("name", SMALL)
def test_kappa_det_matches_inclusion_constant(name):
    ctx = context(name)
    n = len(ctx.group)
    for g in range(n):
        for h in range(n):
            if ctx.loci.transverse_shared(g, h):
                assert ctx.sa.kappa_det(g, h) == ctx.sa.sa_constant(g, h)
                assert ctx.sa.kappa_det(g, h) != 0


@pytest.mark.parametrize("name", ["sym_n:3", "weyl_b2", "cyclic:6"])
def test_transport_composes(name):
    ctx = context(name)
    grp, loci = ctx.group, ctx.loci
    n = len(grp)
    for part in ("fixed", "normal"):
        for g in range(n):
            for k1 in range(n):
                for k2 in range(n):
                    lhs = loci.transport(grp.mult[k1][k2], g, part)
                    rhs = loci.transport(k1, grp.conj(k2, g), part) @ loci.transport(k2, g, part)
                    assert lhs == rhs


def test_restrict_of_g_on_its_normal_space_has_no_fixed_vector():
    ctx = context("weyl_b2")
    for g in range(1, len(ctx.group)):
        r = ctx.loci.restrict(g, ctx.loci.one_minus(g), "normal")
        assert det(r) != 0
        assert ctx.loci.restrict(g, ctx.group.matrix(g), "fixed") == Mat.identity(ctx.loci.fixed_data(g).fixed.dim)
