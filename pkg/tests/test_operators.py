import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import identity_checks
from gwitt.errors import ContextError
from gwitt.group import CosetTable, named_group, subgroups_of
from gwitt.operators import (
    conjugation,
    external_product,
    frobenius,
    teichmuller,
    teichmuller_linear,
    truncate,
    verschiebung,
    verschiebung_orbit,
)
from gwitt.tensor import TensorElement
from gwitt.truncation import all_subgroups_set, remove_subconjugate, top
from gwitt.witt import AbPresentation, WittElement, build_free, witt_group

D6 = named_group("d6")
S3 = named_group("s3")


@pytest.mark.parametrize("G", [D6, S3], ids=lambda G: G.name)
@pytest.mark.parametrize("name", list(identity_checks.IDENTITIES))
def test_identity(name, G):
    identity_checks.run(identity_checks.IDENTITIES[name], G, samples=6, seed=7)


seeds = st.integers(0, 10**6)


@given(seeds)
def test_orbit_verschiebung_matches_ghost_formula(seed):
    rng = random.Random(seed)
    G = rng.choice([D6, S3])
    H = identity_checks.random_sub(rng, G, G.whole)
    K = identity_checks.random_sub(rng, G, H)
    x = build_free(G, K, all_subgroups_set(G, K), rng.choice([1, 2])).random_element(rng)
    assert verschiebung_orbit(x, H).coords == verschiebung(x, H).coords


@given(seeds, st.sampled_from(["F", "V", "c", "R"]))
def test_operators_commute_with_reduction(seed, op):
    # q : W(Z^b) -> W(M) is natural, so applying an operator before or after reducing agrees
    rng = random.Random(seed)
    G = rng.choice([D6, S3])
    pres = rng.choice([AbPresentation.cyclic(2), AbPresentation.cyclic(3)])
    H = identity_checks.random_sub(rng, G, G.whole)
    K = identity_checks.random_sub(rng, G, H)
    src_H = K if op == "V" else H
    fp = witt_group(G, src_H, all_subgroups_set(G, src_H), pres)
    x = fp.free.random_element(rng)
    xr = fp.element(fp.reduce(x.coords))
    if op == "F":
        f = lambda y: frobenius(y, K)
    elif op == "V":
        f = lambda y: verschiebung(y, H)
    elif op == "c":
        g = rng.randrange(G.order)
        f = lambda y: conjugation(y, g)
    else:
        S2 = identity_checks.random_truncation(rng, G, H)
        f = lambda y: truncate(y, S2)
    lhs = f(xr)
    rhs = f(x)
    assert lhs.coords == lhs.group.reduce(rhs.coords)


@given(seeds)
def test_teichmuller_variants_agree_on_top(seed):
    rng = random.Random(seed)
    G = rng.choice([D6, S3])
    H = identity_checks.random_sub(rng, G, G.whole)
    W = build_free(G, H, top(G, H), 2)
    m = identity_checks.random_tensor(rng, G.coset_table(H), 2)
    assert teichmuller(W, m) == teichmuller_linear(W, m)


def test_teichmuller_is_not_additive():
    W = build_free(D6, D6.whole, all_subgroups_set(D6, D6.whole), 1)
    one = TensorElement.scalar(D6.coset_table(D6.whole), 1)
    two = TensorElement.scalar(D6.coset_table(D6.whole), 2)
    assert teichmuller(W, one) + teichmuller(W, one) != teichmuller(W, two)


def test_teichmuller_depends_on_representatives():
    H = D6.subgroup([0, D6.element_by_label("s")])
    W = build_free(D6, H, all_subgroups_set(D6, H), 2)
    tab = D6.coset_table(H)
    rng = random.Random(3)
    found = False
    for _ in range(50):
        reps = [D6.mul(r, rng.choice(H.elements)) for r in tab.reps]
        tab2 = CosetTable.from_reps(D6, H, reps)
        m = identity_checks.random_tensor(rng, tab, 2)
        if teichmuller(W, m, tab2) != teichmuller(W, m, tab):
            found = True
            break
    assert found


def test_teichmuller_on_empty_truncation_is_zero():
    S = remove_subconjugate(all_subgroups_set(D6, D6.whole), D6.whole)
    W = build_free(D6, D6.whole, S, 1)
    assert teichmuller(W, TensorElement.scalar(D6.coset_table(D6.whole), 5)).is_zero()


def test_frobenius_needs_subgroup():
    H = D6.subgroup([0, D6.element_by_label("s")])
    x = build_free(D6, H, all_subgroups_set(D6, H), 1).zero()
    with pytest.raises(ContextError):
        frobenius(x, D6.subgroup([0, D6.element_by_label("r"), D6.element_by_label("r2")]))


def test_verschiebung_needs_target_truncation_for_truncated_input():
    K = D6.subgroup([0, D6.element_by_label("s")])
    S = remove_subconjugate(all_subgroups_set(D6, K), D6.trivial)
    x = build_free(D6, K, S, 1).zero()
    with pytest.raises(ContextError):
        verschiebung(x, D6.whole)


def test_external_product_context_mismatch():
    a = build_free(D6, D6.whole, all_subgroups_set(D6, D6.whole), 1).zero()
    b = build_free(S3, S3.whole, all_subgroups_set(S3, S3.whole), 1).zero()
    with pytest.raises(ContextError):
        external_product(a, b)


@given(seeds)
def test_external_product_is_bilinear(seed):
    rng = random.Random(seed)
    S = all_subgroups_set(S3, S3.whole)
    A = witt_group(S3, S3.whole, S, AbPresentation.cyclic(2))
    B = witt_group(S3, S3.whole, S, 2)
    x, x2 = A.random_element(rng), A.random_element(rng)
    y = B.random_element(rng)
    assert external_product(x + x2, y) == external_product(x, y) + external_product(x2, y)


def test_all_conjugations_by_subgroup_elements_trivial():
    W = build_free(S3, S3.whole, all_subgroups_set(S3, S3.whole), 2)
    x = W.random_element(random.Random(0))
    for h in range(S3.order):
        assert conjugation(x, h) == x


def test_verschiebung_of_units_is_burnside_basis():
    # V^G_U tau_{G/U}(1) has orbit coordinate 1 at U and 0 elsewhere
    G = D6
    W = build_free(G, G.whole, all_subgroups_set(G, G.whole), 1)
    for j, U in enumerate(W.space.canon):
        WU = build_free(G, U, all_subgroups_set(G, U), 1)
        x = verschiebung(teichmuller(WU, TensorElement.scalar(G.coset_table(U), 1)), G.whole)
        assert x.coords == tuple(1 if i == j else 0 for i in range(W.rank))
