"""Acceptance criteria; each test prints one PASS/FAIL line with its timing.

Run with ``pytest -v tests/test_acceptance.py`` (lines are written past capture).
"""

import itertools
import random
import time

import pytest

import identity_checks
from gwitt.appendix import appendix_group, first_difference, golden_lines, reproduce_lines
from gwitt.errors import DworkError
from gwitt.ghost import (
    ComponentFamily,
    GhostVector,
    classical_ghost_reference,
    dwork_check,
    ghost_linear,
    ghost_map,
    ghost_preimage,
    ghost_space,
    random_family,
)
from gwitt.group import cyclic, named_group, table_of_marks
from gwitt.mackey import assemble, box_product_small, exactness_check
from gwitt.operators import HGHH, ring_structure
from gwitt.tensor import TensorElement
from gwitt.truncation import all_subgroups_set, remove_subconjugate
from gwitt.witt import AbPresentation, build_fp, build_free, witt_group


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed):
        status = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title} ({detail}; {elapsed:.2f}s)")
        assert ok, detail

    return emit


def full(G, H=None):
    return all_subgroups_set(G, G.whole if H is None else H)


def test_criterion_1_appendix_golden(report):
    t0 = time.perf_counter()
    got = reproduce_lines(appendix_group())
    elapsed = time.perf_counter() - t0
    diff = first_difference(got, golden_lines())
    basis = [ln for ln in got if ln.startswith("basis ")]
    rows = [ln for ln in got if ln.startswith("row ")]
    ok = (
        diff is None
        and basis == ["basis (1, 1, 1, 1)", "basis (0, 2, 0, 2)", "basis (0, 0, 1, 3)", "basis (0, 0, 0, 6)"]
        and len(rows) == 16
        and "invariant_factors 3 3 9" in got
        and elapsed < 5
    )
    detail = "bit-exact, 16 rows, factors 3 3 9" if diff is None else f"first difference at line {diff[0]}"
    report(1, "d6 appendix golden reproduction", ok, detail, elapsed)


def test_criterion_2_cardinality(report):
    t0 = time.perf_counter()
    G = named_group("d6")
    S = full(G)
    Z3 = AbPresentation.cyclic(3)
    W = build_fp(G, G.whole, S, Z3)
    by_factors = W.order()
    # quotient-of-components count: the components (n_V) with n_V in (Z/3)^{(x) G/V}
    by_components = 1
    for V in S.canonical:
        by_components *= Z3.power(len(G.coset_table(V))).order()
    # and the components really do give distinct elements
    space = W.free.space
    seen = set()
    for vals in itertools.product(range(3), repeat=len(space.canon)):
        fam = {V: TensorElement.scalar(space.tables[V], c) for V, c in zip(space.canon, vals)}
        seen.add(W.from_components(fam).coords)
    elapsed = time.perf_counter() - t0
    ok = by_factors == by_components == len(seen) == 81
    report(2, "|W_D6(Z; Z/3)| two ways", ok, f"factors {by_factors}, components {by_components}, distinct {len(seen)}", elapsed)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (5, 1), (2, 2)])
def test_criterion_3_classical(report, p, n):
    t0 = time.perf_counter()
    G = cyclic(p**n)
    space = ghost_space(G, G.whole, full(G), 1)
    # canonical subgroups in decreasing order: index p^k is the k-th classical ghost component
    order_ok = [V.order for V in space.canon] == [p ** (n - k) for k in range(n + 1)]
    rng = random.Random(f"classical:{p}:{n}")
    agree = True
    for _ in range(50):
        a = [rng.randint(-5, 5) for _ in range(n + 1)]
        fam = {V: TensorElement.scalar(space.tables[V], c) for V, c in zip(space.canon, a)}
        w = ghost_map(ComponentFamily(space, fam))
        agree &= [w.components[V].as_scalar() for V in space.canon] == classical_ghost_reference(p, n + 1, a)
    factors = build_fp(G, G.whole, full(G), AbPresentation.cyclic(p)).invariant_factors
    elapsed = time.perf_counter() - t0
    ok = order_ok and agree and factors == (p ** (n + 1),) and elapsed < 5
    report(3, f"classical agreement for C{p**n}", ok, f"ghost agrees={agree}, W(Z/{p}) factors {factors}", elapsed)


@pytest.mark.parametrize("name", ["c2", "c3", "c6", "s3", "d6"])
def test_criterion_4_burnside(report, name):
    t0 = time.perf_counter()
    G = named_group(name)
    W = build_free(G, G.whole, full(G), 1)
    reps, marks = table_of_marks(G)
    same = list(W.space.canon) == reps and W.ghost_matrix == marks
    table = ring_structure(W)["table"]
    last = W.rank - 1
    square = table[last][last] == tuple(G.order if i == last else 0 for i in range(W.rank))
    elapsed = time.perf_counter() - t0
    report(4, f"table of marks and [G/e]^2 for {G.name}", same and square, f"marks={same}, square={square}", elapsed)


DWORK_CONTEXTS = [("d6", "all"), ("s3", "all"), ("d6", "no-e"), ("c4", "all")]


def test_criterion_5_dwork_round_trip(report):
    t0 = time.perf_counter()
    counts = {"families": 0, "perturbed": 0}
    problems = []
    for name, trunc in DWORK_CONTEXTS:
        G = named_group(name)
        S = full(G) if trunc == "all" else remove_subconjugate(full(G), G.trivial)
        for rank in (1, 2):
            space = ghost_space(G, G.whole, S, rank)
            bumpable = [i for i in range(space.dim) if space.diagonal(i) > 1]
            for i in range(200 // 2):
                rng = random.Random(f"dwork:{name}:{trunc}:{rank}:{i}")
                a = ghost_map(random_family(space, rng))
                counts["families"] += 1
                if not dwork_check(a).passed:
                    problems.append(f"{name}/{trunc}/{rank}: image rejected")
                x = [rng.randint(-9, 9) for _ in range(space.dim)]
                if ghost_preimage(ghost_linear(space, x)) != tuple(x):
                    problems.append(f"{name}/{trunc}/{rank}: preimage round trip")
                if bumpable:
                    j = rng.choice(bumpable)
                    coords = a.coords()
                    coords[j] += rng.randint(1, space.diagonal(j) - 1)
                    b = GhostVector.from_coords(space, coords)
                    verdict = dwork_check(b)
                    counts["perturbed"] += 1
                    if verdict.passed or verdict.subgroup is None:
                        problems.append(f"{name}/{trunc}/{rank}: perturbation accepted")
                    try:
                        ghost_preimage(b)
                        problems.append(f"{name}/{trunc}/{rank}: preimage of non-image")
                    except DworkError:
                        pass
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 60
    detail = f"{counts['families']} families, {counts['perturbed']} perturbations rejected"
    report(5, "Dwork round trip", ok, detail if ok else "; ".join(problems[:3]) or detail, elapsed)


def test_criterion_6_operator_identities(report):
    t0 = time.perf_counter()
    failures = []
    for gname in ("d6", "s3"):
        G = named_group(gname)
        for title, check in identity_checks.IDENTITIES.items():
            try:
                identity_checks.run(check, G, samples=100)
            except AssertionError as e:
                failures.append(f"{G.name} {title}: {e}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    detail = f"{len(identity_checks.IDENTITIES)} identities x 100 samples on D6 and S3"
    report(6, "operator identities", ok, detail if not failures else failures[0], elapsed)


def test_criterion_7_exact_sequences(report):
    t0 = time.perf_counter()
    G = named_group("d6")
    Z3 = AbPresentation.cyclic(3)
    S = full(G)
    results = [exactness_check(G, G.whole, S, Z3, G.trivial)]
    S2 = remove_subconjugate(S, G.trivial)
    s = G.subgroup([G.identity, G.element_by_label("s")])
    results.append(exactness_check(G, G.whole, S2, Z3, s))
    exact = all(r.passed for r in results)
    additive = True
    for b in (1, 2):
        for SS, K in ((S, G.trivial), (S2, s)):
            a = build_free(G, G.whole, SS, b)
            r = build_free(G, G.whole, remove_subconjugate(SS, K), b)
            additive &= a.rank == r.rank + len(a.space.orbits[K])
    elapsed = time.perf_counter() - t0
    report(7, "exact sequences", exact and additive, f"exact={exact}, free rank additivity={additive}", elapsed)


def test_criterion_8_hghh(report):
    t0 = time.perf_counter()
    cases = []
    for gname, labels in (("d6", ("r", "r2")), ("d6", ("s",)), ("s3", None)):
        G = named_group(gname)
        if labels is None:
            H = next(U for U in full(G).canonical if U.order == 3)
        else:
            H = G.subgroup([G.identity] + [G.element_by_label(x) for x in labels])
        for coeff in (1, AbPresentation.cyclic(2), AbPresentation.cyclic(4)):
            iso = HGHH(witt_group(G, H, full(G, H), coeff))
            cases.append(sorted(iso.src.invariant_factors) == sorted(iso.target.invariant_factors))
    elapsed = time.perf_counter() - t0
    report(8, "HGHH invariant factors", all(cases), f"{sum(cases)}/{len(cases)} cases agree", elapsed)


def test_criterion_9_box_product(report):
    t0 = time.perf_counter()
    C2 = cyclic(2)
    S = full(C2)
    Z2, Z4 = AbPresentation.cyclic(2), AbPresentation.cyclic(4)
    burnside = assemble(C2, C2.whole, S, 1)
    checks = []
    for M in (Z2, Z4):
        t = assemble(C2, C2.whole, S, M)
        rep = box_product_small(burnside, t)
        checks.append(rep.match and rep.factors == t.levels[C2.whole].invariant_factors)
    for M, M2 in itertools.product((Z2, Z4), repeat=2):
        checks.append(box_product_small(assemble(C2, C2.whole, S, M), assemble(C2, C2.whole, S, M2)).match)
    elapsed = time.perf_counter() - t0
    report(9, "box product on C2", all(checks), f"{sum(checks)}/{len(checks)} instances", elapsed)
