"""Concrete finite trees: canonical codes, isomorphism, rooted embedding,
centers, automorphism enumeration, and the rotation/inversion classification
of automorphisms.

Embedding means induced subtree embedding.  Between trees the induced
condition is free: an injective adjacency-preserving map sends every path to
a path of the same length (a shortcut edge would close a cycle), so only the
forward condition needs checking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product


class TreeError(ValueError):
    pass


class FiniteTree:
    """Unrooted tree on vertices 0..n-1, immutable adjacency lists."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges):
        edges = [tuple(e) for e in edges]
        if n < 1:
            raise TreeError("tree needs at least one vertex")
        if len(edges) != n - 1:
            raise TreeError(f"a tree on {n} vertices has {n - 1} edges, got {len(edges)}")
        adj = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise TreeError(f"bad edge ({u},{v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise TreeError(f"duplicate edge ({u},{v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        if self._component_size(0) != n:
            raise TreeError("tree is not connected")

    def _component_size(self, start):
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen)

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v):
        return len(self.adj[v])

    def distance(self, u, v):
        if u == v:
            return 0
        dist = {u: 0}
        queue = [u]
        for x in queue:
            for y in self.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == v:
                        return dist[y]
                    queue.append(y)
        raise TreeError("disconnected")

    def path(self, u, v):
        """Vertex sequence of the unique u-v path."""
        parent = {u: None}
        queue = [u]
        for x in queue:
            if x == v:
                break
            for y in self.adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges()]})

    @staticmethod
    def from_json(text: str) -> "FiniteTree":
        data = json.loads(text)
        return FiniteTree(data["n"], data["edges"])

    def __eq__(self, other):
        return isinstance(other, FiniteTree) and self.adj == other.adj

    def __hash__(self):
        return hash(self.adj)

    def __repr__(self):
        return f"FiniteTree(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class RootedFiniteTree:
    tree: FiniteTree
    root: int

    def __post_init__(self):
        if not (0 <= self.root < self.tree.n):
            raise TreeError("root out of range")


def path_tree(n: int) -> FiniteTree:
    return FiniteTree(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(leaves: int) -> FiniteTree:
    return FiniteTree(leaves + 1, [(0, i + 1) for i in range(leaves)])


def _children_order(t: FiniteTree, root: int):
    """Parent map and a bottom-up vertex order for the rooted tree."""
    parent = {root: None}
    order = [root]
    for u in order:
        for v in t.adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
    return parent, order[::-1]


def canonical_code(rt: RootedFiniteTree) -> str:
    """AHU code: sorted-children bracket string; equal iff rooted-isomorphic."""
    t, root = rt.tree, rt.root
    parent, bottom_up = _children_order(t, root)
    code = {}
    for u in bottom_up:
        kids = sorted(code[v] for v in t.adj[u] if v != parent[u])
        code[u] = "(" + "".join(kids) + ")"
    return code[root]


def center(t: FiniteTree):
    """Iterated leaf stripping; ('vertex', v) or ('edge', (u, v))."""
    if t.n == 1:
        return ("vertex", 0)
    degree = [len(a) for a in t.adj]
    removed = [False] * t.n
    alive = t.n
    leaves = [v for v in range(t.n) if degree[v] == 1]
    while alive > 2:
        for v in leaves:
            removed[v] = True
        alive -= len(leaves)
        nxt = []
        for v in leaves:
            for u in t.adj[v]:
                if not removed[u]:
                    degree[u] -= 1
                    if degree[u] == 1:
                        nxt.append(u)
        leaves = nxt
    rest = [v for v in range(t.n) if not removed[v]]
    if len(rest) == 1:
        return ("vertex", rest[0])
    u, v = rest
    if v not in t.adj[u]:
        raise TreeError("center invariant broken")
    return ("edge", (u, v))


def unrooted_code(t: FiniteTree) -> str:
    """Canonical form of the unrooted tree: code at the center (both
    orientations for an edge center, take the smaller)."""
    kind, c = center(t)
    if kind == "vertex":
        return canonical_code(RootedFiniteTree(t, c))
    u, v = c
    return min(
        canonical_code(RootedFiniteTree(t, u)),
        canonical_code(RootedFiniteTree(t, v)),
    )


def is_isomorphic(a: FiniteTree, b: FiniteTree) -> bool:
    return a.n == b.n and unrooted_code(a) == unrooted_code(b)


# -- rooted embedding ---------------------------------------------------------

def _kuhn_match(n_left, n_right, compatible):
    """Match every left item to a distinct right item along compatible pairs
    (augmenting-path search)."""
    match = {}

    def try_assign(i, seen):
        for j in range(n_right):
            if j in seen or not compatible(i, j):
                continue
            seen.add(j)
            if j not in match or try_assign(match[j], seen):
                match[j] = i
                return True
        return False

    for i in range(n_left):
        if not try_assign(i, set()):
            return False
    return True


def _subcode(t, v, parent, cache):
    key = (v, parent)
    if key not in cache:
        kids = sorted(_subcode(t, w, v, cache) for w in t.adj[v] if w != parent)
        cache[key] = "(" + "".join(kids) + ")"
    return cache[key]


def rooted_embeds(a: RootedFiniteTree, b: RootedFiniteTree, memo=None) -> bool:
    """Does (a, root) embed into (b, root) as an induced rooted subtree?
    Children match injectively with recursive embeddability as compatibility,
    feasibility by augmenting-path matching, memoized on code pairs.  Pass a
    shared `memo` dict to amortize across many calls."""
    if memo is None:
        memo = {}
    codes_a, codes_b = {}, {}

    def go(va, pa, vb, pb):
        ca = _subcode(a.tree, va, pa, codes_a)
        cb = _subcode(b.tree, vb, pb, codes_b)
        if ca == cb:
            return True
        key = (ca, cb)
        if key in memo:
            return memo[key]
        if len(ca) > len(cb):  # code length is 2 * subtree size
            memo[key] = False
            return False
        kids_a = [w for w in a.tree.adj[va] if w != pa]
        kids_b = [w for w in b.tree.adj[vb] if w != pb]
        ok = len(kids_a) <= len(kids_b) and _kuhn_match(
            len(kids_a),
            len(kids_b),
            lambda i, j: go(kids_a[i], va, kids_b[j], vb),
        )
        memo[key] = ok
        return ok

    return go(a.root, None, b.root, None)


# -- automorphisms ------------------------------------------------------------

def _iter_isos(ta, va, pa, tb, vb, pb, codes_a, codes_b):
    """All isomorphisms of the subtree at va (cut above pa) onto the subtree
    at vb (cut above pb), sending va to vb, yielded as dicts."""
    if _subcode(ta, va, pa, codes_a) != _subcode(tb, vb, pb, codes_b):
        return
    kids_a = [w for w in ta.adj[va] if w != pa]
    kids_b = [w for w in tb.adj[vb] if w != pb]
    groups_a = {}
    for w in kids_a:
        groups_a.setdefault(_subcode(ta, w, va, codes_a), []).append(w)
    groups_b = {}
    for w in kids_b:
        groups_b.setdefault(_subcode(tb, w, vb, codes_b), []).append(w)

    group_items = []
    for code, mem_a in groups_a.items():
        mem_b = groups_b[code]
        pair_isos = [
            [
                list(_iter_isos(ta, w_a, va, tb, w_b, vb, codes_a, codes_b))
                for w_b in mem_b
            ]
            for w_a in mem_a
        ]
        group_items.append((len(mem_a), pair_isos))

    def per_group(k, pair_isos):
        for perm in permutations(range(k)):
            for combo in product(*(pair_isos[i][perm[i]] for i in range(k))):
                merged = {}
                for m in combo:
                    merged.update(m)
                yield merged

    def assemble(gi):
        if gi == len(group_items):
            yield {va: vb}
            return
        k, pair_isos = group_items[gi]
        for head in per_group(k, pair_isos):
            for rest in assemble(gi + 1):
                rest.update(head)
                yield rest

    yield from assemble(0)


def rooted_isomorphisms(a: RootedFiniteTree, b: RootedFiniteTree):
    """All rooted isomorphisms (a, root) -> (b, root), as dict maps."""
    yield from _iter_isos(a.tree, a.root, None, b.tree, b.root, None, {}, {})


def iter_automorphisms(t: FiniteTree):
    """Stream the automorphism group as vertex permutation tuples, anchored at
    the center (which every automorphism preserves)."""
    kind, c = center(t)
    if kind == "vertex":
        for m in _iter_isos(t, c, None, t, c, None, {}, {}):
            yield tuple(m[v] for v in range(t.n))
        return
    u, v = c
    codes = {}
    for mu in _iter_isos(t, u, v, t, u, v, codes, codes):
        for mv in _iter_isos(t, v, u, t, v, u, codes, codes):
            yield tuple({**mu, **mv}[x] for x in range(t.n))
    if _subcode(t, u, v, codes) == _subcode(t, v, u, codes):
        for mu in _iter_isos(t, u, v, t, v, u, codes, codes):
            for mv in _iter_isos(t, v, u, t, u, v, codes, codes):
                yield tuple({**mu, **mv}[x] for x in range(t.n))


def automorphisms(t: FiniteTree, bound: int = 12):
    """The full automorphism group; raises on trees larger than `bound`."""
    if t.n > bound:
        raise TreeError("too large")
    return list(iter_automorphisms(t))


def is_automorphism(t: FiniteTree, sigma) -> bool:
    if sorted(sigma) != list(range(t.n)):
        return False
    edges = set(t.edges())
    return all(
        (min(sigma[u], sigma[v]), max(sigma[u], sigma[v])) in edges for u, v in edges
    )


@dataclass(frozen=True)
class EndoClassification:
    variant: str  # rotation | inversion | translation | ray_forward
    evidence: object


def classify_automorphism(t: FiniteTree, sigma) -> EndoClassification:
    """Minimize displacement m = d(x, sigma(x)).  m = 0 is a rotation about a
    fixed vertex.  Otherwise minimality forces m odd with the middle edge of
    the x..sigma(x) path reversed (an inversion); an even minimum would mean a
    translation along an infinite axis, impossible on finite trees but kept as
    an honest outcome for the oracle to count."""
    if not is_automorphism(t, sigma):
        raise TreeError("not an automorphism")
    best, best_m = 0, t.n + 1
    for x in range(t.n):
        m = t.distance(x, sigma[x])
        if m < best_m:
            best, best_m = x, m
    if best_m == 0:
        return EndoClassification("rotation", ("vertex", best))
    p = t.path(best, sigma[best])
    if best_m % 2 == 1:
        u, v = p[best_m // 2], p[best_m // 2 + 1]
        if sigma[u] == v and sigma[v] == u:
            return EndoClassification("inversion", ("edge", (min(u, v), max(u, v))))
    return EndoClassification("translation", ("path", tuple(p)))
