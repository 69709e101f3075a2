import pytest

from gwitt.errors import ContextError, SizeBoundError
from gwitt.group import cyclic, named_group
from gwitt.mackey import assemble, box_product_small, exactness_check, geometric_fixed_points, verify_axioms
from gwitt.truncation import all_subgroups_set, remove_subconjugate
from gwitt.witt import AbPresentation, build_free

D6 = named_group("d6")
C2 = cyclic(2)
Z2, Z3, Z4 = (AbPresentation.cyclic(n) for n in (2, 3, 4))


def full(G):
    return all_subgroups_set(G, G.whole)


def test_c2_two_levels():
    t = assemble(C2, C2.whole, full(C2), Z2)
    assert t.levels[C2.whole].invariant_factors == (4,)
    assert t.levels[C2.trivial].invariant_factors == (2,)
    assert t.restriction(C2.whole, C2.trivial, (1,)) == (1,)
    assert t.transfer(C2.trivial, C2.whole, (1,)) == (2,)


def test_burnside_restriction_counts_cosets():
    # restricting [G/U] to the trivial subgroup gives |G/U| points
    t = assemble(D6, D6.whole, full(D6), 1)
    W = t.levels[D6.whole]
    for j, U in enumerate(W.space.canon):
        v = tuple(1 if i == j else 0 for i in range(W.rank))
        assert t.restriction(D6.whole, D6.trivial, v) == (D6.order // U.order,)
    assert t.transfer(D6.trivial, D6.whole, (1,)) == (0, 0, 0, 1)


@pytest.mark.parametrize("name,coeff", [("d6", 1), ("s3", Z3), ("c4", Z2), ("c2", 2)])
def test_axioms_hold(name, coeff):
    G = named_group(name)
    report = verify_axioms(assemble(G, G.whole, full(G), coeff), samples=2, seed=1)
    assert report.passed, report.describe()
    assert report.checked > 0


def test_axioms_hold_below_top():
    H = D6.subgroup([0, D6.element_by_label("s")])
    report = verify_axioms(assemble(D6, H, all_subgroups_set(D6, H), Z3), samples=2)
    assert report.passed


@pytest.mark.parametrize("name,coeff", [("c2", Z2), ("s3", 1), ("d6", Z3)])
def test_corrupted_table_is_caught(name, coeff):
    G = named_group(name)
    report = verify_axioms(assemble(G, G.whole, full(G), coeff).corrupted(), samples=2)
    assert not report.passed
    assert "witness" in report.describe()


def test_corruption_needs_a_visible_transfer():
    G = cyclic(1)
    with pytest.raises(ContextError):
        assemble(G, G.whole, full(G), 1).corrupted()


def test_exactness_at_trivial_subgroup():
    rep = exactness_check(D6, D6.whole, full(D6), Z3, D6.trivial)
    assert rep.passed, rep.describe()


def test_exactness_at_reflection_subgroup():
    S = remove_subconjugate(full(D6), D6.trivial)
    K = D6.subgroup([0, D6.element_by_label("s")])
    rep = exactness_check(D6, D6.whole, S, Z3, K)
    assert rep.passed, rep.describe()


def test_exactness_on_the_top_alone():
    S = remove_subconjugate(full(D6), D6.subgroup([0, D6.element_by_label("r"), D6.element_by_label("r2")]))
    S = remove_subconjugate(S, D6.subgroup([0, D6.element_by_label("s")]))
    rep = exactness_check(D6, D6.whole, S, Z3, D6.whole)
    assert rep.passed and rep.target_factors == ()


def test_exactness_rejects_non_minimal():
    with pytest.raises(ContextError):
        exactness_check(D6, D6.whole, full(D6), Z3, D6.whole)


@pytest.mark.parametrize("b", [1, 2])
def test_free_rank_additivity(b):
    S = full(D6)
    K = D6.trivial
    a = build_free(D6, D6.whole, S, b)
    r = build_free(D6, D6.whole, remove_subconjugate(S, K), b)
    assert a.rank == r.rank + len(a.space.orbits[K])
    assert exactness_check(D6, D6.whole, S, b, K).passed


def test_geometric_fixed_points():
    assert geometric_fixed_points(D6, D6.trivial, Z3) == (3,)
    assert geometric_fixed_points(D6, D6.trivial, 1) == (0,)
    assert geometric_fixed_points(D6, D6.whole, Z3) == (3,)
    # (Z/2 + Z/2)^{(x) 2} = (Z/2)^4
    V22 = AbPresentation.from_columns(2, [(2, 0), (0, 2)])
    C2x = named_group("c2")
    assert geometric_fixed_points(C2x, C2x.trivial, V22) == (2, 2, 2, 2)


@pytest.mark.parametrize("coeff", [Z2, Z4, 1])
def test_box_unit(coeff):
    burnside = assemble(C2, C2.whole, full(C2), 1)
    t = assemble(C2, C2.whole, full(C2), coeff)
    rep = box_product_small(burnside, t)
    assert rep.match
    assert rep.factors == t.levels[C2.whole].invariant_factors


@pytest.mark.parametrize("a,b", [(Z2, Z2), (Z2, Z4), (Z4, Z4), (Z4, Z2)])
def test_box_of_witt_functors(a, b):
    rep = box_product_small(assemble(C2, C2.whole, full(C2), a), assemble(C2, C2.whole, full(C2), b))
    assert rep.match, (rep.factors, rep.expected)


def test_box_is_gated():
    D8 = named_group("d8")
    t = assemble(D8, D8.whole, full(D8), 1)
    with pytest.raises(SizeBoundError):
        box_product_small(t, t)


def test_box_values():
    rep = box_product_small(assemble(C2, C2.whole, full(C2), Z2), assemble(C2, C2.whole, full(C2), Z2))
    assert rep.factors == (4,)
    # over the trivial group the box product is the tensor product
    E = cyclic(1)
    rep = box_product_small(assemble(E, E.whole, full(E), Z4), assemble(E, E.whole, full(E), AbPresentation.cyclic(6)))
    assert rep.factors == (2,)

