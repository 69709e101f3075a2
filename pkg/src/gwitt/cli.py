"""Command-line front end.

Commands: witt, ghost, dwork, op, mackey, reproduce.  Output is UTF-8 text
starting with a versioned header line; failures print one line
``error: code=<n> kind=<kind> message=<text>`` on stderr.
"""

from __future__ import annotations

import argparse
import io
import os
import random
import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import __version__
from .appendix import appendix_group, first_difference, golden_lines, reproduce_lines
from .errors import ContextError, GwittError, ParseError, VerificationError
from .ghost import GhostVector, dwork_check, ghost_linear, ghost_map, ghost_preimage, random_family
from .group import Choices, FiniteGroup, Subgroup, all_subgroups, build_group, named_group, subgroup_generated
from .mackey import assemble, verify_axioms
from .operators import (
    conjugation,
    external_product,
    frobenius,
    ghost_conjugation,
    ghost_frobenius,
    ghost_product,
    ghost_teichmuller,
    ghost_truncation,
    ghost_verschiebung,
    teichmuller,
    truncate,
    verschiebung,
)
from .tensor import format_tensor, parse_tensor, retabulate
from .truncation import TruncationSet, all_subgroups_set, empty, top, validate
from .witt import AbPresentation, Coefficients, WittElement, WittFreeGroup, WittGroup, witt_group


def header(command: str) -> str:
    return f"# gwitt {command} v1"


# ---------------------------------------------------------------------------
# input parsing


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def parse_group(text: str) -> FiniteGroup:
    """A built-in name (c<n>, s3, d6, d8, a4) or a group file."""
    if os.path.isfile(text):
        name = os.path.splitext(os.path.basename(text))[0]
        return build_group(_read(text), name=name)
    return named_group(text)


def parse_subgroup(G: FiniteGroup, text: str) -> Subgroup:
    """A subgroup name, ``{a,b,...}`` (exact element list) or ``<a,b>`` / ``a,b`` (generators)."""
    s = text.strip()
    if s in ("", "all", "G") or s == G.name:
        return G.whole
    for V in all_subgroups(G):
        if G.subgroup_name(V) == s:
            return V
    exact = s.startswith("{") and s.endswith("}")
    if exact or (s.startswith("<") and s.endswith(">")):
        s = s[1:-1]
    labels = [x for x in re.split(r"[\s,]+", s) if x]
    elems = [G.element_by_label(x) for x in labels]
    if exact:
        return G.check_subgroup(elems)
    return subgroup_generated(G, elems)


def parse_matrix(text: str) -> list[list[int]]:
    rows = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            try:
                rows.append([int(x) for x in ln.replace(",", " ").split()])
            except ValueError:
                raise ParseError(f"bad matrix row {ln!r}") from None
    return rows


def parse_coeff(text: str) -> Coefficients:
    """``Z``, ``Z^b``, ``Z/n`` or ``rank <b> rel <matrix file>`` (b rows, one column per relation)."""
    s = text.strip().replace(" ", "") if not text.strip().startswith("rank") else text.strip()
    if s == "Z":
        return 1
    m = re.fullmatch(r"Z\^(\d+)", s)
    if m:
        return int(m.group(1))
    m = re.fullmatch(r"Z/(\d+)", s)
    if m:
        n = int(m.group(1))
        return 1 if n == 0 else AbPresentation.cyclic(n)
    m = re.fullmatch(r"rank\s+(\d+)\s+rel\s+(.+)", s)
    if m:
        b = int(m.group(1))
        rows = parse_matrix(_read(m.group(2).strip()))
        if not rows:
            return b
        if len(rows) != b or len({len(r) for r in rows}) != 1:
            raise ParseError(f"relation matrix must have {b} rows of equal length")
        return AbPresentation(b, tuple(tuple(r) for r in rows))
    raise ParseError(f"unrecognised coefficient specification {text!r}")


def parse_trunc(G: FiniteGroup, H: Subgroup, text: str) -> TruncationSet:
    """``all``, ``top``, ``none``, a file with one subgroup per line, or ``;``-separated subgroups."""
    s = text.strip()
    if s == "all":
        return all_subgroups_set(G, H)
    if s == "top":
        return top(G, H)
    if s == "none":
        return empty(G, H)
    if os.path.isfile(s):
        items = [ln.split("#", 1)[0].strip() for ln in _read(s).splitlines()]
    else:
        items = s.split(";")
    return validate(G, H, [parse_subgroup(G, x) for x in items if x.strip()])


def parse_reps(G: FiniteGroup, text: str) -> FiniteGroup:
    """Representative overrides, one directive per line::

        canonical <subgroup>
        reps <subgroup> : g1 g2 ...
        name <subgroup> = <display name>
    """
    canonical, reps, names = [], [], []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        word, _, rest = ln.partition(" ")
        if word == "canonical":
            canonical.append(parse_subgroup(G, rest).elements)
        elif word == "reps" and ":" in rest:
            sub, _, gs = rest.partition(":")
            V = parse_subgroup(G, sub)
            elems = tuple(G.element_by_label(x) for x in gs.split())
            if len(elems) != G.order // V.order or len({G.coset_table(V).position(g) for g in elems}) != len(elems):
                raise ParseError(f"reps for {sub.strip()} are not a transversal")
            reps.append((V.elements, elems))
        elif word == "name" and "=" in rest:
            sub, _, nm = rest.partition("=")
            names.append((parse_subgroup(G, sub).elements, nm.strip()))
        else:
            raise ParseError(f"bad representative directive {ln!r}")
    return G.with_choices(Choices(tuple(canonical), tuple(reps), tuple(names)))


def parse_coords(text: str, n: int) -> tuple[int, ...]:
    s = _read(text[1:]) if text.startswith("@") else text
    try:
        v = tuple(int(x) for x in s.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"bad coordinate vector {s!r}") from None
    if len(v) != n:
        raise ContextError(f"expected {n} coordinates, got {len(v)}")
    return v


def parse_ghost(space, text: str) -> GhostVector:
    """Blocks ``V: <tensor literal>`` per canonical V; missing blocks are zero."""
    G = space.G
    comps = {}
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        name, sep, lit = ln.rpartition(":")
        if not sep:
            raise ParseError(f"ghost block needs 'V: literal', got {ln!r}")
        V = parse_subgroup(G, name)
        if V not in space.canon:
            raise ContextError(f"{name.strip()} is not a canonical subgroup of the truncation set")
        comps[V] = parse_tensor(lit, space.tables[V], space.rank)
    try:
        return GhostVector(space, comps, check=True)
    except AssertionError as e:
        raise ContextError(str(e)) from None


def format_ghost(a: GhostVector) -> list[str]:
    return [f"{a.space.G.subgroup_name(V)}: {format_tensor(a.components[V])}" for V in a.space.canon]


# ---------------------------------------------------------------------------
# job context


@dataclass
class JobSpec:
    command: str
    group: str = "d6"
    subgroup: Optional[str] = None
    trunc: str = "all"
    coeff: str = "Z"
    seed: int = 0
    reps: Optional[str] = None
    out: Optional[str] = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "JobSpec":
        common = {"command", "group", "subgroup", "trunc", "coeff", "seed", "reps", "out", "func"}
        opts = {k: v for k, v in vars(ns).items() if k not in common}
        return cls(ns.command, ns.group, ns.subgroup, ns.trunc, ns.coeff, ns.seed, ns.reps, ns.out, opts)


@dataclass
class Context:
    G: FiniteGroup
    H: Subgroup
    S: TruncationSet
    coeff: Coefficients

    @classmethod
    def from_spec(cls, spec: JobSpec) -> "Context":
        G = parse_group(spec.group)
        if spec.reps:
            G = parse_reps(G, _read(spec.reps))
        H = parse_subgroup(G, spec.subgroup or "all")
        S = parse_trunc(G, H, spec.trunc)
        return cls(G, H, S, parse_coeff(spec.coeff))

    def group(self, coeff: Optional[Coefficients] = None) -> WittGroup:
        return witt_group(self.G, self.H, self.S, self.coeff if coeff is None else coeff)


def witt_report(W: WittGroup) -> list[str]:
    fs = ", ".join(str(d) for d in W.invariant_factors)
    order = W.order()
    lines = [
        "witt_group {",
        f"  context: {W.context()}",
        f"  rank: {W.rank}",
        f"  invariant_factors: [{fs}]",
        f"  order: {order if order is not None else 'infinite'}",
        "}",
        f"group: {W.describe()}",
    ]
    return lines


def _element(W: WittGroup, spec: JobSpec, key: str = "element") -> WittElement:
    text = spec.options.get(key)
    if spec.options.get("random"):
        return W.random_element(random.Random(f"{spec.seed}:{key}"))
    if text is None:
        return W.zero()
    return WittElement(W, W.normalize(parse_coords(text, W.rank)))


def _coords(v: Sequence[int]) -> str:
    return " ".join(str(x) for x in v) if v else "(empty)"


# ---------------------------------------------------------------------------
# commands; each returns (lines, exit code)


def cmd_witt(spec: JobSpec) -> tuple[list[str], int]:
    ctx = Context.from_spec(spec)
    W = ctx.group()
    lines = [header("witt")] + witt_report(W)
    F = W.free
    lines.append(f"free_basis ({F.rank} orbit generators):")
    lines += [f"  {i}: {F.space.basis_label(i)}" for i in range(F.rank)]
    if not isinstance(W, WittFreeGroup):
        lines.append("element coordinates: residues modulo the invariant factors in Smith coordinates")
    return lines, 0


def cmd_ghost(spec: JobSpec) -> tuple[list[str], int]:
    ctx = Context.from_spec(spec)
    W = ctx.group()
    x = _element(W, spec)
    a = ghost_linear(W.free.space, W.lift(x.coords))
    lines = [header("ghost"), f"context: {W.context()}", f"element: {_coords(x.coords)}"]
    if not isinstance(W, WittFreeGroup):
        lines.append("note: ghost of the free lift, defined modulo the ghost image of the relations")
    return lines + format_ghost(a), 0


def cmd_dwork(spec: JobSpec) -> tuple[list[str], int]:
    ctx = Context.from_spec(spec)
    W = ctx.group()
    space = W.free.space
    path = spec.options.get("ghost_file")
    if path:
        a = parse_ghost(space, _read(path))
    else:
        if spec.options.get("random"):
            fam = random_family(space, random.Random(spec.seed))
            a = ghost_map(fam)
        else:
            x = _element(W.free, spec)
            a = ghost_linear(space, x.coords)
    verdict = dwork_check(a)
    lines = [header("dwork"), f"context: {W.free.context()}"] + format_ghost(a) + [verdict.describe()]
    if not verdict.passed:
        return lines, 3
    lines.append(f"preimage: {_coords(ghost_preimage(a))}")
    return lines, 0


def _lift_check(W: WittGroup, x: WittElement, rng: random.Random) -> WittElement:
    """The same element of W as a free-model element, through a perturbed lift."""
    v = list(W.lift(x.coords))
    for r in getattr(W, "relations", ())[:8]:
        k = rng.randint(-2, 2)
        v = [a + k * b for a, b in zip(v, r)]
    return WittElement(W.free, tuple(v))


def cmd_op(spec: JobSpec) -> tuple[list[str], int]:
    ctx = Context.from_spec(spec)
    W = ctx.group()
    G = ctx.G
    name = spec.options["operator"]
    rng = random.Random(spec.seed)
    lines = [header("op"), f"operator: {name}", f"source: {W.context()}"]
    ghost_op: Optional[Callable] = None

    if name == "tau":
        text = spec.options.get("tensor") or "1"
        m = parse_tensor(text, G.coset_table(ctx.H), W.free.space.rank)
        y = teichmuller(W, m)
        lines.append(f"input: {format_tensor(m)}")
        x = None
    else:
        x = _element(W, spec)
        lines.append(f"input: {_coords(x.coords)}")
        if name == "F":
            K = parse_subgroup(G, spec.options.get("to") or "{e}")
            f = lambda e: frobenius(e, K)  # noqa: E731
            ghost_op = ghost_frobenius
        elif name == "V":
            K = parse_subgroup(G, spec.options.get("to") or "all")
            S2 = parse_trunc(G, K, spec.options["to_trunc"]) if spec.options.get("to_trunc") else None
            f = lambda e: verschiebung(e, K, S2)  # noqa: E731
            ghost_op = ghost_verschiebung
        elif name == "c":
            g = G.element_by_label(spec.options.get("by") or G.label(G.identity))
            f = lambda e: conjugation(e, g)  # noqa: E731
            ghost_op = lambda a, sp: ghost_conjugation(a, g, sp)  # noqa: E731
        elif name == "R":
            S2 = parse_trunc(G, ctx.H, spec.options.get("to_trunc") or "top")
            f = lambda e: truncate(e, S2)  # noqa: E731
            ghost_op = ghost_truncation
        elif name == "star":
            W2 = ctx.group(parse_coeff(spec.options.get("other_coeff") or spec.coeff))
            x2 = _element(W2, spec, "other")
            lines.append(f"other: {_coords(x2.coords)} in {W2.describe()}")
            f = lambda e: external_product(e, x2 if e is x else _lift_check(W2, x2, rng))  # noqa: E731
        else:
            raise ContextError(f"unknown operator {name!r}")
        y = f(x)
    T = y.group
    lines.append(f"target: {T.context()}")
    lines.append(f"target_group: {T.describe()}")
    lines.append(f"result: {_coords(y.coords)}")

    # ghost-side verification
    ok = True
    if isinstance(W, WittFreeGroup) and isinstance(T, WittFreeGroup):
        b = ghost_linear(T.space, y.coords)
        if name == "tau":
            m2 = retabulate(m, G.coset_table(ctx.H))
            want = ghost_teichmuller(m2, T.space) if ctx.S.members else GhostVector.zero(T.space)
        elif name == "star":
            want = ghost_product(ghost_linear(W.space, x.coords), ghost_linear(W2.free.space, W2.lift(x2.coords)), T.space)
        else:
            want = ghost_op(ghost_linear(W.space, x.coords), T.space)
        ok = b == want
        lines.append(f"ghost check: {'pass' if ok else 'fail'}")
    elif x is not None:
        z = f(_lift_check(W, x, rng))
        ok = T.reduce(z.coords) == y.coords
        lines.append(f"lift independence check: {'pass' if ok else 'fail'}")
    elif isinstance(ctx.coeff, AbPresentation) and ctx.coeff.order() and ctx.coeff.invariant_factors() and m.terms:
        # another lift of m: add the exponent of M times one monomial
        w = next(iter(m.terms))
        e = ctx.coeff.invariant_factors()[-1]
        m2 = m + type(m).monomial(m.table, m.rank, w, e * rng.randint(1, 3))
        ok = T.reduce(teichmuller(W.free, m2).coords) == y.coords
        lines.append(f"lift independence check: {'pass' if ok else 'fail'}")
    else:
        lines.append("lift independence check: not applicable")
    return lines, 0 if ok else 3


def _fmt_matrix(M) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in M) + "]" if M else "[]"


def cmd_mackey(spec: JobSpec) -> tuple[list[str], int]:
    ctx = Context.from_spec(spec)
    t = assemble(ctx.G, ctx.H, ctx.S, ctx.coeff)
    if spec.options.get("corrupt"):
        t = t.corrupted()
    G = ctx.G
    nm = G.subgroup_name
    lines = [header("mackey"), f"context: {ctx.group().context()}", "levels:"]
    canon = sorted(t.canonical, key=Subgroup.canonical_key)
    for K in canon:
        lines.append(f"  {nm(K)}: {t.levels[K].describe()}")
    lines.append("restriction / transfer (columns are source coordinates):")
    for K in canon:
        for L in canon:
            if L < K:
                lines.append(f"  res {nm(K)} -> {nm(L)}: {_fmt_matrix(t.res[(K, L)])}")
                lines.append(f"  tr  {nm(L)} -> {nm(K)}: {_fmt_matrix(t.tr[(L, K)])}")
    lines.append("conjugation (normaliser elements):")
    for K in canon:
        for h in ctx.H.elements:
            if h != G.identity and G.conjugate_subgroup(h, K) == K and h not in K:
                lines.append(f"  c_{G.label(h)} on {nm(K)}: {_fmt_matrix(t.conj[(h, K)])}")
    rep = verify_axioms(t, samples=spec.options.get("samples") or 3, seed=spec.seed)
    lines += rep.describe().splitlines()
    return lines, 0 if rep.passed else 3


def cmd_reproduce(spec: JobSpec) -> tuple[list[str], int]:
    target = spec.options["target"]
    if target != "d6-appendix":
        raise ContextError(f"unknown reproduction target {target!r}")
    pseed = spec.options.get("permute")
    got = reproduce_lines(appendix_group(pseed))
    want = golden_lines(spec.options.get("golden"))
    diff = first_difference(got, want)
    if diff is None:
        return got + ["golden: match"], 0
    n, a, b = diff
    return got + [f"golden: mismatch at line {n}", f"  got:      {a}", f"  expected: {b}"], 3


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", default="d6", help="built-in name (c<n>, s3, d6, d8, a4) or group file")
    p.add_argument("--subgroup", default=None, help="subgroup H (default: the whole group)")
    p.add_argument("--coeff", default="Z", help="Z | Z^b | Z/n | 'rank b rel <file>'")
    p.add_argument("--trunc", default="all", help="all | top | none | file | 'V1;V2;...'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", default=None, help="representative override file")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gwitt", description="G-typical Witt vectors with coefficients")
    ap.add_argument("--version", action="version", version=f"gwitt {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("witt", help="invariant factors of W^S_{H<=G}(Z; M)")
    _common(p)
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("ghost", help="ghost vector of an element")
    _common(p)
    p.add_argument("--element", help="coordinates, or @file")
    p.add_argument("--random", action="store_true")
    p.set_defaults(func=cmd_ghost)

    p = sub.add_parser("dwork", help="Dwork congruences for a ghost vector")
    _common(p)
    p.add_argument("--ghost-file", dest="ghost_file", help="blocks 'V: <tensor literal>'")
    p.add_argument("--element", help="free-model coordinates, or @file")
    p.add_argument("--random", action="store_true", help="ghost image of a random component family")
    p.set_defaults(func=cmd_dwork)

    p = sub.add_parser("op", help="apply F, V, c, R, tau or star")
    _common(p)
    p.add_argument("operator", choices=["F", "V", "c", "R", "tau", "star"])
    p.add_argument("--element", help="coordinates, or @file")
    p.add_argument("--random", action="store_true")
    p.add_argument("--to", help="target subgroup for F and V")
    p.add_argument("--to-trunc", dest="to_trunc", help="target truncation set for R and V")
    p.add_argument("--by", help="conjugating element for c")
    p.add_argument("--tensor", help="tensor literal over G/H for tau")
    p.add_argument("--other", help="second factor for star")
    p.add_argument("--other-coeff", dest="other_coeff", help="coefficients of the second factor")
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("mackey", help="Mackey functor table and axiom check")
    _common(p)
    p.add_argument("--corrupt", action="store_true", help="perturb one transfer (negative control)")
    p.add_argument("--samples", type=int, default=3)
    p.set_defaults(func=cmd_mackey)

    p = sub.add_parser("reproduce", help="reproduce a pinned worked example")
    p.add_argument("target", help="d6-appendix")
    p.add_argument("--golden", default=None, help="compare against this file instead of the embedded one")
    p.add_argument("--permute", type=int, default=None, help="shuffle internal element indices with this seed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reproduce, group="d6", subgroup=None, trunc="all", coeff="Z", seed=0, reps=None)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    spec = JobSpec.from_args(ns)
    try:
        lines, code = ns.func(spec)
    except GwittError as e:
        msg = str(e).replace("\n", " ")
        print(f"error: code={e.exit_code} kind={e.kind} message={msg}", file=sys.stderr)
        return e.exit_code
    text = "\n".join(lines) + "\n"
    if spec.out:
        with io.open(spec.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        kind = "dwork" if spec.command == "dwork" else "verification"
        print(f"error: code={code} kind={kind} message={spec.command} check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
