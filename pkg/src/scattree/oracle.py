"""Exhaustive ground truth on small finite trees.

Everything here is independent of the symbolic engine: trees are
enumerated by repeated leaf addition, cross-checked against Prüfer
sequences and the Cayley count, automorphisms are enumerated by naive
backtracking, and embeddings by brute-force injection search.  The test
suite compares engine verdicts against these oracles and freezes the
classical counts.
"""

from __future__ import annotations

import heapq
from itertools import product
from math import factorial

from .finite_trees import (
    FiniteTree,
    RootedFiniteTree,
    TreeError,
    canonical_code,
    center,
    classify_automorphism,
    iter_automorphisms,
    rooted_embeds,
    unrooted_code,
)

# unlabeled free trees and rooted trees by vertex count, frozen
FREE_COUNTS = (1, 1, 1, 2, 3, 6, 11, 23, 47, 106)
ROOTED_COUNTS = (1, 1, 2, 4, 9, 20, 48, 115)


class OracleError(Exception):
    pass


_free_cache = {}
_rooted_cache = {}


def free_trees(n: int):
    """All unlabeled free trees on n vertices, one representative per
    isomorphism class, built by adding a leaf everywhere on each tree
    with n-1 vertices and deduplicating on the canonical form."""
    if n < 1:
        raise OracleError("need n >= 1")
    if n in _free_cache:
        return _free_cache[n]
    if n == 1:
        out = [FiniteTree(1, ())]
    else:
        seen = {}
        for t in free_trees(n - 1):
            for v in range(t.n):
                grown = FiniteTree(n, tuple(t.edges()) + ((v, n - 1),))
                seen.setdefault(unrooted_code(grown), grown)
        out = list(seen.values())
    _free_cache[n] = out
    return out


def rooted_trees(n: int):
    """All rooted trees on n vertices up to rooted isomorphism (root 0)."""
    if n < 1:
        raise OracleError("need n >= 1")
    if n in _rooted_cache:
        return _rooted_cache[n]
    if n == 1:
        out = [RootedFiniteTree(FiniteTree(1, ()), 0)]
    else:
        seen = {}
        for rt in rooted_trees(n - 1):
            for v in range(rt.tree.n):
                grown = RootedFiniteTree(
                    FiniteTree(n, tuple(rt.tree.edges()) + ((v, n - 1),)), rt.root
                )
                seen.setdefault(canonical_code(grown), grown)
        out = list(seen.values())
    _rooted_cache[n] = out
    return out


def check_tree_counts(max_free: int = 10, max_rooted: int = 8) -> dict:
    free = [len(free_trees(n)) for n in range(1, max_free + 1)]
    rooted = [len(rooted_trees(n)) for n in range(1, max_rooted + 1)]
    if tuple(free) != FREE_COUNTS[:max_free]:
        raise OracleError(f"free tree counts {free} != {FREE_COUNTS[:max_free]}")
    if tuple(rooted) != ROOTED_COUNTS[:max_rooted]:
        raise OracleError(f"rooted tree counts {rooted} != {ROOTED_COUNTS[:max_rooted]}")
    return {"free": free, "rooted": rooted, "ok": True}


# -- Prüfer sequences ---------------------------------------------------------


def prufer_tree(seq, n: int) -> FiniteTree:
    """Decode a Prüfer sequence (length n-2 over 0..n-1) to a labeled tree."""
    seq = tuple(seq)
    if n < 2 or len(seq) != n - 2:
        raise OracleError("sequence length must be n - 2")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return FiniteTree(n, edges)


def automorphism_count(t: FiniteTree) -> int:
    return sum(1 for _ in iter_automorphisms(t))


def prufer_cross_check(n: int) -> dict:
    """Decode every Prüfer sequence on n vertices, bucket the labeled trees
    by isomorphism class, and verify (a) the class count matches the
    leaf-addition enumeration and (b) each class occurs exactly
    n!/|Aut| times, so the total recovers n^(n-2)."""
    if n < 3:
        raise OracleError("needs n >= 3")
    buckets = {}
    for seq in product(range(n), repeat=n - 2):
        t = prufer_tree(seq, n)
        code = unrooted_code(t)
        if code in buckets:
            buckets[code][1] += 1
        else:
            buckets[code] = [t, 1]
    enum_codes = {unrooted_code(t) for t in free_trees(n)}
    if set(buckets) != enum_codes:
        raise OracleError(f"Prüfer classes disagree with enumeration at n={n}")
    fact = factorial(n)
    for code, (t, count) in buckets.items():
        auts = automorphism_count(t)
        if count * auts != fact:
            raise OracleError(
                f"class {code} occurs {count} times, expected {fact}//{auts}"
            )
    total = sum(c for _, c in buckets.values())
    if total != n ** (n - 2):
        raise OracleError("labeled total is not n^(n-2)")
    return {"n": n, "classes": len(buckets), "labeled": total, "ok": True}


def cayley_identity(n: int) -> dict:
    """Verify sum over isomorphism classes of n!/|Aut| = n^(n-2) without
    touching any labeled sequence (used where the full Prüfer sweep is too
    wide)."""
    fact = factorial(n)
    total = 0
    for t in free_trees(n):
        auts = automorphism_count(t)
        if fact % auts:
            raise OracleError("automorphism count does not divide n!")
        total += fact // auts
    if total != n ** (n - 2):
        raise OracleError(f"Cayley identity fails at n={n}: {total} != {n ** (n - 2)}")
    return {"n": n, "labeled": total, "ok": True}


# -- automorphisms by naive search --------------------------------------------


def naive_automorphisms(t: FiniteTree):
    """All automorphisms by backtracking over a BFS order, independent of
    the center-anchored streaming enumerator."""
    order, parent = [0], {0: None}
    for v in order:
        for w in t.adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    deg = [len(a) for a in t.adj]
    out = []
    image = {}
    used = set()

    def place(i):
        if i == len(order):
            out.append(tuple(image[v] for v in range(t.n)))
            return
        v = order[i]
        cands = range(t.n) if parent[v] is None else t.adj[image[parent[v]]]
        for c in cands:
            if c in used or deg[c] != deg[v]:
                continue
            image[v] = c
            used.add(c)
            place(i + 1)
            used.discard(c)
        image.pop(v, None)

    place(0)
    return out


def center_fixed_check(max_n: int = 10) -> dict:
    """Every automorphism of every tree up to max_n vertices fixes the
    central vertex, or fixes-or-swaps the central edge.  Automorphisms come
    from the naive backtracker, so this also cross-checks the streaming
    enumerator's group order."""
    trees = autos = 0
    for n in range(1, max_n + 1):
        for t in free_trees(n):
            group = naive_automorphisms(t)
            if len(group) != automorphism_count(t):
                raise OracleError(f"automorphism group sizes disagree on {t.to_json()}")
            kind, c = center(t)
            for sigma in group:
                if kind == "vertex":
                    if sigma[c] != c:
                        raise OracleError(f"center vertex moved by {sigma} on {t.to_json()}")
                else:
                    u, v = c
                    if {sigma[u], sigma[v]} != {u, v}:
                        raise OracleError(f"center edge moved by {sigma} on {t.to_json()}")
                autos += 1
            trees += 1
    return {"trees": trees, "automorphisms": autos, "ok": True}


def endo_classification_sweep(max_n: int = 9) -> dict:
    """Classify every automorphism of every tree up to max_n vertices:
    each is a rotation (fixes a vertex) or an inversion (reverses an edge);
    translations need an infinite axis and must never appear."""
    counts = {"rotation": 0, "inversion": 0, "translation": 0}
    for n in range(1, max_n + 1):
        for t in free_trees(n):
            for sigma in iter_automorphisms(t):
                kind = classify_automorphism(t, sigma).variant
                counts[kind] = counts.get(kind, 0) + 1
    if counts["translation"]:
        raise OracleError("a finite tree produced a translation")
    if set(counts) - {"rotation", "inversion", "translation"}:
        raise OracleError(f"unexpected classification in {counts}")
    return {**counts, "ok": True}


# -- embeddings by brute force -------------------------------------------------


def naive_rooted_embeds(a: RootedFiniteTree, b: RootedFiniteTree) -> bool:
    """Root-to-root embedding by trying every injective assignment of
    children to children, no matching theory involved."""
    ta, tb = a.tree, b.tree

    def go(va, pa, vb, pb):
        kids_a = [w for w in ta.adj[va] if w != pa]
        kids_b = [w for w in tb.adj[vb] if w != pb]
        if len(kids_a) > len(kids_b):
            return False

        def assign(i, used):
            if i == len(kids_a):
                return True
            for j in range(len(kids_b)):
                if j not in used and go(kids_a[i], va, kids_b[j], vb):
                    if assign(i + 1, used | {j}):
                        return True
            return False

        return assign(0, frozenset())

    return go(a.root, None, b.root, None)


def embed_cross_check(max_n: int = 6) -> dict:
    """Engine rooted embedding agrees with brute force on every ordered
    pair of rooted trees up to max_n vertices."""
    pool = [rt for n in range(1, max_n + 1) for rt in rooted_trees(n)]
    memo = {}
    pairs = agree = 0
    for a in pool:
        for b in pool:
            fast = rooted_embeds(a, b, memo)
            slow = naive_rooted_embeds(a, b)
            if fast != slow:
                raise OracleError(
                    f"embed disagreement: {a.tree.to_json()} into {b.tree.to_json()}"
                )
            pairs += 1
            agree += 1
    return {"pairs": pairs, "ok": True}


def unrooted_embeds(a: FiniteTree, b: FiniteTree, memo=None) -> bool:
    """a embeds into b as a subtree: some placement of roots works (any
    adjacency-preserving injection is root-to-root once both sides are
    rooted at a vertex and its image)."""
    if memo is None:
        memo = {}
    return any(
        rooted_embeds(RootedFiniteTree(a, 0), RootedFiniteTree(b, rb), memo)
        for rb in range(b.n)
    )


def equimorphy_is_isomorphy(max_n: int = 7) -> dict:
    """On finite trees, mutual embeddability coincides with isomorphism:
    checked exhaustively over all pairs up to max_n vertices."""
    pool = [t for n in range(1, max_n + 1) for t in free_trees(n)]
    memo = {}
    codes = {id(t): unrooted_code(t) for t in pool}
    pairs = 0
    for a in pool:
        for b in pool:
            mutual = unrooted_embeds(a, b, memo) and unrooted_embeds(b, a, memo)
            iso = codes[id(a)] == codes[id(b)]
            if mutual != iso:
                raise OracleError(
                    f"equimorphy/isomorphy mismatch: {a.to_json()} vs {b.to_json()}"
                )
            pairs += 1
    return {"pairs": pairs, "ok": True}


# -- runner --------------------------------------------------------------------


def run_oracle(which: str = "all") -> dict:
    """Run one oracle (by name) or all of them; returns a report dict."""
    jobs = {
        "counts": lambda: check_tree_counts(),
        "prufer": lambda: {str(n): prufer_cross_check(n) for n in range(3, 9)},
        "cayley": lambda: {str(n): cayley_identity(n) for n in (9, 10)},
        "center": lambda: center_fixed_check(),
        "endos": lambda: endo_classification_sweep(),
        "embeds": lambda: embed_cross_check(),
        "equimorphy": lambda: equimorphy_is_isomorphy(),
    }
    if which != "all":
        if which not in jobs:
            raise OracleError(f"unknown oracle {which!r}; choose from {sorted(jobs)}")
        return {which: jobs[which]()}
    return {name: job() for name, job in jobs.items()}
