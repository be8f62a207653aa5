"""Executable checks of the rank and width identities on small instances.

Every check returns a :class:`VerifyReport`; failures are data, never
exceptions.  Corpus suites enumerate all labeled graphs up to ``nmax``
vertices and merge the per-graph reports.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Any, Iterable, Sequence

from .errors import DimensionError, FieldError, ZeroPolynomialError
from .exactfield import GF, QQ, Field, lucas_binom
from .gadgets import GadgetKind, build_gadget, charp_exponents
from .graphlayout import (
    Graph,
    all_graphs,
    arrangement_cost,
    cut_rank,
    cut_size,
    cutwidth_exact,
    linear_rank_width_exact,
)
from .nisan import RankTable, exhaustive_widths, min_width, synthesize_roabp, width_profile
from .sparsepoly import (
    AffineMap,
    SparsePoly,
    affine_substitute,
    poly_degree_info,
    poly_from_terms,
    poly_mul,
    poly_pow,
    tensor_power,
)
from .subsetdp import members

DEFAULT_TENSOR_CAP = 100_000
SUITES = ("rank", "width", "tensor", "gap", "power", "orbit", "roundtrip", "synth", "lucas")


@dataclass
class VerifyReport:
    check: str
    instances: int = 0
    failures: list = dc_field(default_factory=list)
    seed: int | None = None
    wall_time: float = 0.0
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, instance: Any, expected: Any, got: Any) -> None:
        self.failures.append({"instance": instance, "expected": expected, "got": got})

    def merge(self, other: "VerifyReport") -> None:
        self.instances += other.instances
        self.failures.extend(other.failures)
        self.wall_time += other.wall_time

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "instances": self.instances,
            "failures": self.failures,
            "passed": self.passed,
            "seed": self.seed,
            "wall_time": round(self.wall_time, 3),
            "details": self.details,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.check}: {self.instances} instances, {len(self.failures)} failures"


class _Timer:
    def __init__(self, report: VerifyReport):
        self.report = report

    def __enter__(self):
        self.start = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.wall_time += time.perf_counter() - self.start
        return False


# closed forms

def layout_value(kind: GadgetKind, G: Graph) -> int:
    """Cutwidth, or linear rank-width over the gadget's field for ``quad``."""
    if kind.tag == "quad":
        return linear_rank_width_exact(G, kind.field)[0]
    return cutwidth_exact(G)[0]


def expected_rank(kind: GadgetKind, G: Graph, mask: int) -> int:
    if kind.tag == "inapprox":
        return 2 ** cut_size(G, mask)
    if kind.tag == "quad":
        return cut_rank(G, mask, kind.field) + 2
    return cut_size(G, mask) + 2


def in_rank_range(kind: GadgetKind, n: int, mask: int) -> bool:
    """``inapprox`` holds for every split; the ``+ 2`` forms need ``1 <= |S| <= n - 1``."""
    if kind.tag == "inapprox":
        return True
    return 0 < mask < (1 << n) - 1


def expected_width(kind: GadgetKind, G: Graph) -> int:
    value = layout_value(kind, G)
    if kind.tag == "inapprox":
        return 2**value
    # one vertex: no proper prefix, so only the boundary layers remain
    return value + 2 if G.n >= 2 else 1


@lru_cache(maxsize=4096)
def gadget_ranks(kind: GadgetKind, G: Graph) -> RankTable:
    return RankTable(build_gadget(kind, G).poly)


def _graph_tag(G: Graph) -> dict:
    return G.to_json()


# rank / width identities

def verify_rank_formula(kind: GadgetKind, G: Graph) -> VerifyReport:
    report = VerifyReport(f"rank[{kind}]")
    with _Timer(report):
        ranks = gadget_ranks(kind, G)
        for mask in range(1 << G.n):
            if not in_rank_range(kind, G.n, mask):
                continue
            report.instances += 1
            want = expected_rank(kind, G, mask)
            got = ranks(mask)
            if got != want:
                report.fail({"graph": _graph_tag(G), "S": [v + 1 for v in members(mask)]}, want, got)
    return report


def brute_force_layout(G: Graph, mode: str, field: Field | None = None) -> int:
    """Minimum over all ``n!`` arrangements, independent of the subset DP."""
    return min(arrangement_cost(G, p, mode, field) for p in permutations(range(G.n)))


def verify_width_formula(kind: GadgetKind, G: Graph, brute_force_max: int = 4) -> VerifyReport:
    """``min_width(gadget)`` against the layout value; small graphs also cross-check the DP."""
    report = VerifyReport(f"width[{kind}]")
    with _Timer(report):
        report.instances += 1
        tag = _graph_tag(G)
        ranks = gadget_ranks(kind, G)
        got, order = min_width(ranks.f, ranks=ranks)
        want = expected_width(kind, G)
        if got != want:
            report.fail({"graph": tag}, want, got)
        if width_profile(ranks.f, order, ranks).width != got:
            report.fail({"graph": tag, "witness": [v + 1 for v in order]}, got, "witness width differs")
        if G.n <= brute_force_max:
            mode = "cutrank" if kind.tag == "quad" else "cut"
            brute = brute_force_layout(G, mode, kind.field if mode == "cutrank" else None)
            if brute != layout_value(kind, G):
                report.fail({"graph": tag, "layout": mode}, brute, layout_value(kind, G))
            brute_width = min(exhaustive_widths(ranks.f, ranks).values())
            if brute_width != got:
                report.fail({"graph": tag, "orders": "exhaustive"}, brute_width, got)
    return report


def reduction_roundtrip(G: Graph, w: int, kind: GadgetKind) -> tuple[bool, bool]:
    """``(layout <= w, gadget width <= target)``; the two answers must agree."""
    layout_ok = layout_value(kind, G) <= w
    width = min_width(build_gadget(kind, G).poly)[0]
    if kind.tag == "inapprox":
        target = 2**w
    else:
        target = w + 2 if G.n >= 2 else 1
    return layout_ok, width <= target


def verify_roundtrip(kind: GadgetKind, G: Graph) -> VerifyReport:
    report = VerifyReport(f"roundtrip[{kind}]")
    with _Timer(report):
        top = G.m if kind.tag != "quad" else G.n
        for w in range(0, top + 1):
            report.instances += 1
            a, b = reduction_roundtrip(G, w, kind)
            if a != b:
                report.fail({"graph": _graph_tag(G), "w": w}, a, b)
    return report


# tensoring and the approximation gap

def verify_tensor_lemma(f: SparsePoly, l: int, cap: int = DEFAULT_TENSOR_CAP) -> VerifyReport:
    report = VerifyReport("tensor")
    with _Timer(report):
        if len(f) ** l > cap:
            report.fail({"poly": str(f), "l": l}, f"<= {cap} terms", len(f) ** l)
            return report
        g = tensor_power(f, l)
        if len(g) != len(f) ** l:
            report.fail({"poly": str(f), "l": l, "what": "term count"}, len(f) ** l, len(g))
        base, big = RankTable(f), RankTable(g)
        for mask in range(1 << f.n):
            report.instances += 1
            want = base(mask) ** l
            got = big(mask)
            if got != want:
                report.fail({"poly": str(f), "l": l, "S": [v + 1 for v in members(mask)]}, want, got)
    return report


def gap_power(alpha: Fraction | int | float | str) -> int:
    """``ceil(log2 alpha) + 1`` computed exactly for rational ``alpha > 1``."""
    a = Fraction(alpha)
    if a <= 1:
        raise ValueError("alpha must exceed 1")
    t = 0
    while 2**t < a:
        t += 1
    return t + 1


def verify_approx_gap(
    G: Graph,
    alpha: Fraction | int | str,
    contrast: Graph | None = None,
    cap: int = DEFAULT_TENSOR_CAP,
) -> VerifyReport:
    """Width of the tensored ``inapprox`` gadget is ``2^(l k)`` for cutwidth ``k``.

    With ``contrast`` (a graph of cutwidth ``k + 1``) also checks that its
    tensored gadget is wider by at least ``2^l`` and hence by more than ``alpha``.
    """
    alpha = Fraction(alpha)
    report = VerifyReport("gap")
    kind = GadgetKind("inapprox")
    with _Timer(report):
        l = gap_power(alpha)
        k = cutwidth_exact(G)[0]

        def tensored_width(H: Graph) -> int | None:
            f = build_gadget(kind, H).poly
            if len(f) ** l > cap:
                report.fail({"graph": _graph_tag(H), "l": l}, f"<= {cap} terms", len(f) ** l)
                return None
            return min_width(tensor_power(f, l))[0]

        report.instances += 1
        width = tensored_width(G)
        report.details.update({"alpha": str(alpha), "l": l, "k": k, "width": width})
        if width is not None and width != 2 ** (l * k):
            report.fail({"graph": _graph_tag(G), "alpha": str(alpha)}, 2 ** (l * k), width)
        if contrast is not None:
            report.instances += 1
            kc = cutwidth_exact(contrast)[0]
            report.details["contrast_k"] = kc
            if kc != k + 1:
                report.fail({"contrast": _graph_tag(contrast)}, f"cutwidth {k + 1}", kc)
            wc = tensored_width(contrast)
            report.details["contrast_width"] = wc
            if wc is not None and width is not None:
                report.details["ratio"] = str(Fraction(wc, width))
                if wc < 2**l * 2 ** (l * k) or not wc > alpha * 2 ** (l * k):
                    report.fail(
                        {"graph": _graph_tag(G), "contrast": _graph_tag(contrast), "alpha": str(alpha)},
                        f">= {2 ** l * 2 ** (l * k)} and > {alpha * 2 ** (l * k)}",
                        wc,
                    )
    return report


# powers of linear forms

def linear_support(lin: SparsePoly) -> list[int]:
    """Variables with a nonzero coefficient in a polynomial of degree at most one."""
    if poly_degree_info(lin)[0] > 1:
        raise DimensionError("not a linear polynomial")
    return sorted(i for e in lin.terms for i, a in enumerate(e) if a)


def verify_power_lower_bound(lin: SparsePoly, h: SparsePoly, d: int, cap: int = 6) -> VerifyReport:
    """For ``F = lin^d h``: at least ``d + 1`` terms and width ``>= d + 1`` in every order."""
    if lin.field.characteristic != 0:
        raise FieldError("the sparsity bound needs characteristic 0")
    if len(linear_support(lin)) < 2:
        raise DimensionError("linear form needs support >= 2")
    if h.is_zero():
        raise ZeroPolynomialError("h must be nonzero")
    report = VerifyReport("power")
    with _Timer(report):
        F = poly_mul(poly_pow(lin, d), h)
        tag = {"l": str(lin), "h": str(h), "d": d}
        report.instances += 1
        if len(F) < d + 1:
            report.fail({**tag, "what": "sparsity"}, f">= {d + 1}", len(F))
        for order, w in exhaustive_widths(F, cap=cap).items():
            report.instances += 1
            if w < d + 1:
                report.fail({**tag, "order": [v + 1 for v in order]}, f">= {d + 1}", w)
    return report


# orbit experiments

def orbit_experiment(G: Graph, kind: GadgetKind, amap: AffineMap) -> tuple[int, str]:
    """Minimum width of the gadget after ``x -> A x + b`` and the map's class."""
    if kind.tag not in ("orbit0", "orbitp"):
        raise ValueError("orbit experiments use the orbit0/orbitp gadgets")
    f = build_gadget(kind, G).poly
    g = affine_substitute(f, amap)
    return min_width(g)[0], ("PermDiag" if amap.is_perm_diag() else "General")


def random_affine_map(rng: random.Random, n: int, field: Field, perm_diag: bool) -> AffineMap:
    """Entries from ``-2..2`` over the rationals or uniform residues mod ``p``."""

    def entry(nonzero: bool = False) -> int:
        while True:
            if field.p is None:
                v = rng.randint(-2, 2)
            else:
                v = rng.randrange(field.p)
            if v or not nonzero:
                return field.coerce(v)

    while True:
        b = [entry() for _ in range(n)]
        if perm_diag:
            perm = list(range(n))
            rng.shuffle(perm)
            A = [[entry(True) if j == perm[i] else 0 for j in range(n)] for i in range(n)]
        else:
            A = [[entry() for _ in range(n)] for _ in range(n)]
        try:
            amap = AffineMap(A, b, field)
        except DimensionError:
            continue
        if amap.is_perm_diag() == perm_diag:
            return amap


def verify_orbit(G: Graph, kind: GadgetKind, trials: int = 20, seed: int = 0) -> VerifyReport:
    """Perm x diag maps keep ``cutwidth + 2``; any other map forces ``|E| + 3`` in every order."""
    report = VerifyReport(f"orbit[{kind}]", seed=seed)
    rng = random.Random(seed)
    field = kind.field
    with _Timer(report):
        f = build_gadget(kind, G).poly
        base = min_width(f)[0]
        want = cutwidth_exact(G)[0] + 2
        if base != want:
            report.fail({"graph": _graph_tag(G), "map": "identity"}, want, base)
        for _ in range(trials):
            amap = random_affine_map(rng, G.n, field, perm_diag=True)
            report.instances += 1
            width, cls = orbit_experiment(G, kind, amap)
            if cls != "PermDiag" or width != base:
                report.fail({"graph": _graph_tag(G), "map": amap.to_json()}, base, width)
        floor = G.m + 3
        for _ in range(trials):
            amap = random_affine_map(rng, G.n, field, perm_diag=False)
            report.instances += 1
            g = affine_substitute(f, amap)
            worst = min(exhaustive_widths(g).values())
            if worst < floor:
                report.fail({"graph": _graph_tag(G), "map": amap.to_json()}, f">= {floor}", worst)
    return report


# random instances

def random_sparse_poly(
    rng: random.Random,
    n: int,
    max_terms: int = 6,
    max_exp: int = 2,
    field: Field = QQ,
) -> SparsePoly:
    """Distinct monomials with coefficients in ``{-2..2} - {0}`` (reduced into ``field``)."""
    count = rng.randint(1, max_terms)
    monos: set[tuple] = set()
    while len(monos) < min(count, (max_exp + 1) ** n):
        monos.add(tuple(rng.randint(0, max_exp) for _ in range(n)))
    terms = []
    for e in sorted(monos):
        c = 0
        while field.reduce(c) == 0:
            c = rng.choice((-2, -1, 1, 2))
        terms.append((c, e))
    return poly_from_terms(n, field, terms)


def random_linear_form(rng: random.Random, n: int, field: Field = QQ) -> SparsePoly:
    """Degree-one polynomial with at least two variables in its support."""
    support = rng.sample(range(n), rng.randint(2, n))
    terms = []
    for i in support:
        e = [0] * n
        e[i] = 1
        terms.append((rng.choice((-2, -1, 1, 2)), e))
    if rng.random() < 0.5:
        terms.append((rng.choice((-2, -1, 1, 2)), [0] * n))
    return poly_from_terms(n, field, terms)


def verify_synthesis(f: SparsePoly, order: Sequence[int], rng: random.Random, points: int = 50) -> VerifyReport:
    report = VerifyReport("synth")
    with _Timer(report):
        R = synthesize_roabp(f, order)
        tag = {"poly": str(f), "order": [v + 1 for v in order]}
        report.instances += 1
        prof = width_profile(f, order)
        want = [1, *prof.prefix_ranks, 1]
        if R.widths != want:
            report.fail({**tag, "what": "widths"}, want, R.widths)
        report.instances += 1
        g = R.expand()
        if g != f:
            report.fail({**tag, "what": "expansion"}, str(f), str(g))
        for _ in range(points):
            report.instances += 1
            if f.field.p is None:
                pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(f.n)]
                pt = [f.field.reduce(x) for x in pt]
            else:
                pt = [rng.randrange(f.field.p) for _ in range(f.n)]
            a, b = R.evaluate(pt), f.evaluate(pt)
            if a != b:
                report.fail({**tag, "point": [str(x) for x in pt]}, str(b), str(a))
    return report


def verify_lucas(max_value: int = 200, primes: Iterable[int] = (2, 3, 5, 7), nmax: int = 5) -> VerifyReport:
    """Digit-wise binomials against ``math.comb``, and the gadget exponents' nonvanishing."""
    report = VerifyReport("lucas")
    with _Timer(report):
        for p in primes:
            for m in range(max_value + 1):
                for k in range(max_value + 1):
                    report.instances += 1
                    want = math.comb(m, k) % p
                    got = lucas_binom(m, k, p)
                    if got != want:
                        report.fail({"m": m, "n": k, "p": p}, want, got)
            for n in range(1, nmax + 1):
                for edges in range(0, 3 * n // 2 + 1):
                    ex = charp_exponents(n, edges, p)
                    for D in ex.D:
                        for i in range(1, ex.M + 1):
                            report.instances += 1
                            if lucas_binom(D, i, p) == 0:
                                report.fail({"D": D, "i": i, "p": p, "M": ex.M}, "nonzero", 0)
    return report


# suites

def corpus(nmax: int, max_degree: int | None = None, nmin: int = 1) -> list[Graph]:
    return [G for n in range(nmin, nmax + 1) for G in all_graphs(n, max_degree)]


def corpus_kinds() -> list[GadgetKind]:
    return [
        GadgetKind("inapprox"),
        GadgetKind("bdgt"),
        GadgetKind("orbit0"),
        GadgetKind("orbitp", 2),
        GadgetKind("orbitp", 3),
        GadgetKind("quad"),
        GadgetKind("quad", 2),
    ]


def kind_corpus(kind: GadgetKind, nmax: int) -> list[Graph]:
    """Graphs the reduction is stated for: degree at most 3 for ``bdgt``/``orbitp``."""
    max_degree = 3 if kind.tag in ("bdgt", "orbitp") else None
    return corpus(nmax, max_degree)


def _corpus_task(args: tuple) -> tuple[VerifyReport, VerifyReport]:
    kind, G = args
    out = (verify_rank_formula(kind, G), verify_width_formula(kind, G))
    gadget_ranks.cache_clear()
    return out


def run_corpus(nmax: int = 5, kinds: Sequence[GadgetKind] | None = None, jobs: int = 1) -> dict[str, list[VerifyReport]]:
    """Rank and width identities for every gadget kind over its corpus, one merged report each."""
    kinds = list(kinds or corpus_kinds())
    rank_reports, width_reports = [], []
    for kind in kinds:
        rank = VerifyReport(f"rank[{kind}]", details={"nmax": nmax})
        width = VerifyReport(f"width[{kind}]", details={"nmax": nmax})
        tasks = [(kind, G) for G in kind_corpus(kind, nmax)]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                results = list(pool.map(_corpus_task, tasks, chunksize=16))
        else:
            results = []
            for kind_, G in tasks:
                results.append((verify_rank_formula(kind_, G), verify_width_formula(kind_, G)))
            gadget_ranks.cache_clear()
        for r, w in results:
            rank.merge(r)
            width.merge(w)
        rank.details["graphs"] = width.details["graphs"] = len(tasks)
        rank_reports.append(rank)
        width_reports.append(width)
    return {"rank": rank_reports, "width": width_reports}


def run_tensor_suite(seed: int = 0, count: int = 100) -> VerifyReport:
    rng = random.Random(seed)
    total = VerifyReport("tensor", seed=seed)
    for _ in range(count):
        f = random_sparse_poly(rng, rng.randint(1, 4))
        for l in (2, 3):
            total.merge(verify_tensor_lemma(f, l))
    total.details["polynomials"] = count
    return total


GAP_GRAPHS = ("P3", "P4", "C4", "K3")


def named_graph(name: str) -> Graph:
    from .graphlayout import complete, cycle, path, star

    kind, size = name[0].upper(), int(name[1:])
    if kind == "P":
        return path(size)
    if kind == "C":
        return cycle(size)
    if kind == "K":
        return complete(size)
    if kind == "S":
        return star(size)
    raise ValueError(f"unknown graph name {name!r}")


def run_gap_suite(alphas: Sequence[int] = (2, 3)) -> list[VerifyReport]:
    reports = []
    for alpha in alphas:
        for name in GAP_GRAPHS:
            r = verify_approx_gap(named_graph(name), alpha)
            r.check = f"gap[{name},alpha={alpha}]"
            reports.append(r)
        r = verify_approx_gap(named_graph("P4"), alpha, contrast=named_graph("K3"))
        r.check = f"gap[P4 vs K3,alpha={alpha}]"
        reports.append(r)
    return reports


def run_power_suite(seed: int = 0, count: int = 100) -> VerifyReport:
    rng = random.Random(seed)
    total = VerifyReport("power", seed=seed)
    for _ in range(count):
        n = rng.randint(2, 4)
        lin = random_linear_form(rng, n)
        h = random_sparse_poly(rng, n, max_terms=3, max_exp=1)
        d = rng.randint(0, 4)
        total.merge(verify_power_lower_bound(lin, h, d))
    total.details["instances_sampled"] = count
    return total


def orbit_instances() -> list[tuple[Graph, GadgetKind]]:
    from .graphlayout import path

    return [(G, kind) for G in (path(2), path(3)) for kind in (GadgetKind("orbit0"), GadgetKind("orbitp", 2))]


def run_orbit_suite(seed: int = 0, trials: int = 20, jobs: int = 1) -> list[VerifyReport]:
    tasks = [(G, kind, trials, seed) for G, kind in orbit_instances()]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_orbit_task, tasks))
    return [_orbit_task(t) for t in tasks]


def _orbit_task(args: tuple) -> VerifyReport:
    G, kind, trials, seed = args
    r = verify_orbit(G, kind, trials, seed)
    r.check = f"orbit[{kind},{G}]"
    return r


def run_roundtrip_suite(nmax: int = 4) -> list[VerifyReport]:
    reports = []
    for kind in corpus_kinds():
        total = VerifyReport(f"roundtrip[{kind}]")
        for G in kind_corpus(kind, nmax):
            if kind.tag == "inapprox" and G.m > 8:
                continue
            total.merge(verify_roundtrip(kind, G))
        reports.append(total)
    return reports


def run_synth_suite(seed: int = 0, count: int = 100, points: int = 50) -> VerifyReport:
    rng = random.Random(seed)
    total = VerifyReport("synth", seed=seed)
    for k in range(count):
        field = QQ if k % 4 else GF(rng.choice((2, 3, 5)))
        n = rng.randint(1, 4)
        f = random_sparse_poly(rng, n, max_terms=8, field=field)
        order = list(range(n))
        rng.shuffle(order)
        total.merge(verify_synthesis(f, order, rng, points))
    total.details["polynomials"] = count
    return total


def run_suite(name: str, nmax: int = 5, seed: int = 0, jobs: int = 1) -> list[VerifyReport]:
    if name == "all":
        corpus_reports = run_corpus(nmax, jobs=jobs)
        rest = [r for s in SUITES if s not in ("rank", "width") for r in run_suite(s, nmax, seed, jobs)]
        return corpus_reports["rank"] + corpus_reports["width"] + rest
    if name in ("rank", "width"):
        return run_corpus(nmax, jobs=jobs)[name]
    if name == "tensor":
        return [run_tensor_suite(seed)]
    if name == "gap":
        return run_gap_suite()
    if name == "power":
        return [run_power_suite(seed)]
    if name == "orbit":
        return run_orbit_suite(seed, jobs=jobs)
    if name == "roundtrip":
        return run_roundtrip_suite(min(nmax, 4))
    if name == "synth":
        return [run_synth_suite(seed)]
    if name == "lucas":
        return [verify_lucas(nmax=nmax)]
    raise ValueError(f"unknown suite {name!r}; expected 'all' or one of {SUITES}")
