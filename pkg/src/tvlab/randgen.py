"""Randomized instances for property suites: planar graphs and coupons.

Used both by the test suite and by ``tvlab verify``, so the generated
instances are deterministic functions of the supplied RNG.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .category import FusionData
from .graphcalc import Components, Edge, SphereGraph, Vertex


def random_planar_multigraph(rng: random.Random, n_outer: int = None,
                             n_chords: int = None):
    """A connected planar graph: a polygon plus non-crossing chords.

    Returns (legs_per_vertex, edges) where edges are (tail vertex, head
    vertex) pairs; rotations are induced by a convex embedding, so the
    result is always a sphere graph.
    """
    if n_outer is None:
        n_outer = rng.randint(2, 6)
    if n_chords is None:
        n_chords = rng.randint(0, 3)
    n = n_outer
    edges = [(i, (i + 1) % n) for i in range(n)]
    chords = []
    intervals = [(0, n - 1)]  # chords drawn inside, nested to stay planar
    for _ in range(n_chords):
        if not intervals:
            break
        lo, hi = intervals.pop(rng.randrange(len(intervals)))
        if hi - lo < 2:
            continue
        i = rng.randint(lo, hi - 2)
        j = rng.randint(i + 2, hi)
        if (i, j) == (0, n - 1):
            continue
        chords.append((i, j))
        intervals.append((i, j))
        if j - i > 2:
            intervals.append((i + 1, j - 1))
    # rotation at each vertex: convex position, edges sorted by far endpoint
    incid = {v: [] for v in range(n)}
    for idx, (a, b) in enumerate(edges + chords):
        incid[a].append((idx, 0, b))
        incid[b].append((idx, 1, a))

    def angle(v, idx, far):
        # parallel arcs nest: order by index at the lower endpoint and in
        # reverse at the higher one
        tie = idx if v < far else -idx
        return ((far - v) % n, tie)

    legs = []
    for v in range(n):
        ordered = sorted(incid[v], key=lambda t: angle(v, t[0], t[2]))
        legs.append([(idx, end) for idx, end, _ in ordered])
    return legs, edges + chords


def random_pointed_graph(rng: random.Random, cat: FusionData,
                         max_entries: int = 2) -> SphereGraph:
    """Random Vec_G sphere graph with component coupons on admissible words."""
    legs, edge_pairs = random_planar_multigraph(rng)
    n_elem = len(cat.simples)
    edges = [Edge(f"e{i}", tuple(range(n_elem))) for i in range(len(edge_pairs))]
    vertices = []
    for vi, vlegs in enumerate(legs):
        entries = {}
        for _ in range(rng.randint(1, max_entries)):
            seen = [rng.randrange(n_elem) for _ in range(len(vlegs) - 1)]
            prod = cat.unit
            for g in seen:
                prod = cat.mul(prod, g)
            seen.append(cat.inv(prod))
            value = cat.field(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            entries[tuple(seen)] = value
        vertices.append(Vertex(f"v{vi}", Components(entries), vlegs))
    return SphereGraph(vertices, edges)


def random_lemma_instance(lemma: str, cat: FusionData, rng: random.Random) -> dict:
    """An input for :func:`tvlab.graphcalc.check_identity`."""
    from .graphcalc import coupon_key

    if not cat.is_pointed:
        # trivalent instance class (Fibonacci and friends)
        inst = {"kind": "trivalent", "color": 1}
        if lemma == "bubble":
            from .graphcalc import loop_graph, theta_graph
            inst["graph"] = rng.choice([
                loop_graph(rng.randrange(len(cat.simples))),
                theta_graph(1, 1, rng.randrange(len(cat.simples))),
            ])
        elif lemma in ("dec_id", "quad", "trace"):
            inst["x"] = rng.randrange(len(cat.simples))
            inst["scalar"] = cat.field(Fraction(rng.randint(1, 5), rng.randint(1, 3)))
        elif lemma == "disconn":
            inst["key"] = tuple(rng.randrange(len(cat.simples)) for _ in range(6))
        return inst

    n = len(cat.simples)

    def random_hom_from_unit(word_len):
        entries = {}
        for _ in range(rng.randint(1, 3)):
            seen = [rng.randrange(n) for _ in range(word_len - 1)]
            prod = cat.unit
            for g in seen:
                prod = cat.mul(prod, g)
            seen.append(cat.inv(prod))
            entries[tuple(seen)] = cat.field(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        return entries

    def random_hom_to_unit(word_len):
        entries = {}
        for _ in range(rng.randint(1, 3)):
            grading = [rng.randrange(n) for _ in range(word_len - 1)]
            prod = cat.unit
            for g in grading:
                prod = cat.mul(prod, g)
            grading.append(cat.inv(prod))
            entries[coupon_key(cat, tuple(grading), ())] = \
                cat.field(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        return entries

    if lemma == "bubble":
        return {"word": [], "graph": random_pointed_graph(rng, cat)}
    if lemma == "trace":
        word = [(None, 1)] * rng.randint(1, 3)
        x = rng.randrange(n)
        # random square matrix over the basis of Hom(x, word)
        basis = []
        import itertools as _it
        for assign in _it.product(range(n), repeat=len(word)):
            prod = cat.unit
            for g in assign:
                prod = cat.mul(prod, g)
            if prod == x:
                basis.append(assign)
        matrix = {}
        for b1 in basis:
            for b2 in basis:
                if rng.random() < 0.5:
                    matrix[(b1, b2)] = cat.field(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        return {"word": word, "x": x, "matrix": matrix}
    word_len = 2 if lemma == "quad" else rng.randint(1, 3)
    word = [(None, 1)] * word_len
    return {"word": word,
            "f": random_hom_from_unit(word_len),
            "g": random_hom_to_unit(word_len)}


def random_components(rng: random.Random, cat: FusionData, word_signs,
                      n_entries: int = None) -> Components:
    """Random coupon with the given leg signs (+1 outgoing, -1 incoming)."""
    if n_entries is None:
        n_entries = rng.randint(1, 3)
    n_elem = len(cat.simples)
    entries = {}
    for _ in range(n_entries):
        seen = [rng.randrange(n_elem) for _ in range(len(word_signs) - 1)]
        prod = cat.unit
        for g in seen:
            prod = cat.mul(prod, g)
        seen.append(cat.inv(prod))
        entries[tuple(seen)] = cat.field(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return Components(entries)
