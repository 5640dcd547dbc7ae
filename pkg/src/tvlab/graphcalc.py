"""Evaluation of colored graphs on the 2-sphere.

Two evaluators live here:

- ``eval_pointed``: exact evaluation for Vec_G-labeled graphs whose coupons
  carry explicit component maps on admissible gradings.  This is total for
  pointed categories because every hom space is 0- or 1-dimensional.

- ``eval_trivalent``: a rewriting engine for trivalent graphs over a
  multiplicity-free category with a 6j table (loops, thetas, tetrahedra and
  anything reducible by identity-fusion, unit-edge deletion, bigon fusion
  and triangle contraction).  Vertices are the fixed trivalent basis
  markers of the category's gauge; the bigon coefficient theta(a,b,x)/dim(x)
  and the triangle coefficient Tet/theta implement the dual-pair pairing
  normalization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .category import FusionData
from .scalars import FieldScalar


class GraphError(Exception):
    pass


class NotPointed(GraphError):
    pass


class GradingMismatch(GraphError):
    pass


class IrreducibleGraph(GraphError):
    pass


class InadmissibleTriple(GraphError):
    pass


class UnsupportedInstance(GraphError):
    pass


# ---------------------------------------------------------------------------
# coupons


@dataclass
class Components:
    """Coupon given by scalar components on as-seen grading tuples.

    Keys are tuples of group-element indices, one per leg in the coupon's
    cyclic order, each recorded as seen from the coupon: the edge grading
    itself for an outgoing leg and its inverse for an incoming one.  The
    support must satisfy the cyclic product condition.
    """

    entries: dict

    def support(self):
        return self.entries.keys()


@dataclass
class Identity:
    """Transparent 2-valent coupon (id_X); loops carry one implicitly."""


@dataclass
class DualPair:
    """One side of a dual-basis coupon pair inserted on an edge.

    For pointed categories the contraction of the pair is the identity, so
    each side behaves like a transparent coupon; the marker records intent.
    """

    pair_id: int
    side: int


@dataclass
class Trivalent:
    """Trivalent basis marker for the 6j rewriting engine."""


# ---------------------------------------------------------------------------
# the graph


@dataclass
class Vertex:
    name: str
    coupon: object
    legs: list = field(default_factory=list)  # [(edge_index, end)], cyclic


@dataclass
class Edge:
    name: str
    label: object  # simple index, or tuple of allowed simple indices


class SphereGraph:
    """Closed oriented graph with a rotation system of sphere genus."""

    def __init__(self, vertices: Sequence[Vertex], edges: Sequence[Edge]):
        self.vertices = list(vertices)
        self.edges = list(edges)
        self._check_wiring()

    def _check_wiring(self):
        seen = {}
        for vi, v in enumerate(self.vertices):
            for slot, (e, end) in enumerate(v.legs):
                if not (0 <= e < len(self.edges)) or end not in (0, 1):
                    raise GraphError(f"bad leg {(e, end)} at vertex {v.name}")
                if (e, end) in seen:
                    raise GraphError(f"edge end {(e, end)} attached twice")
                seen[(e, end)] = (vi, slot)
        for e in range(len(self.edges)):
            if (e, 0) not in seen or (e, 1) not in seen:
                raise GraphError(f"edge {self.edges[e].name} has a free end")
        self._end_at = seen  # (edge, end) -> (vertex index, slot)

    def end_at(self, e: int, end: int):
        return self._end_at[(e, end)]

    def allowed_gradings(self, e: int):
        label = self.edges[e].label
        if isinstance(label, int):
            return (label,)
        return tuple(label)

    # -- embedding ----------------------------------------------------------

    def faces(self):
        """Face walks of the rotation system, as lists of directed edges.

        A directed edge is (e, d) with d = 0 for tail->head.  The face walk
        turns left: after arriving at a vertex it leaves along the next leg
        in the cyclic order.
        """
        unused = {(e, d) for e in range(len(self.edges)) for d in (0, 1)}
        faces = []
        while unused:
            walk = []
            start = next(iter(unused))
            cur = start
            while True:
                walk.append(cur)
                unused.discard(cur)
                e, d = cur
                vi, slot = self.end_at(e, 1 - d)  # vertex the edge points into
                v = self.vertices[vi]
                nslot = (slot + 1) % len(v.legs)
                e2, end2 = v.legs[nslot]
                cur = (e2, 0 if end2 == 0 else 1)
                if cur == start:
                    break
            faces.append(walk)
        return faces

    def genus_check(self) -> bool:
        """Every connected component embeds in the sphere (V - E + F = 2)."""
        comp = self._components()
        face_comp = {}
        faces = self.faces()
        for fi, walk in enumerate(faces):
            e, _ = walk[0]
            face_comp[fi] = comp[self.end_at(e, 0)[0]]
        import collections
        v_count = collections.Counter(comp.values())
        e_count = collections.Counter()
        for e in range(len(self.edges)):
            e_count[comp[self.end_at(e, 0)[0]]] += 1
        f_count = collections.Counter(face_comp.values())
        return all(v_count[c] - e_count[c] + f_count[c] == 2 for c in v_count)

    def _components(self):
        comp = {}
        for vi in range(len(self.vertices)):
            if vi in comp:
                continue
            stack = [vi]
            comp[vi] = vi
            while stack:
                cur = stack.pop()
                for e, end in self.vertices[cur].legs:
                    other = self.end_at(e, 1 - end)[0]
                    if other not in comp:
                        comp[other] = vi
                        stack.append(other)
        return comp

    def plaquettes(self):
        """Faces with, per oriented edge, its left and right face indices.

        Returns (faces, left, right) where left[e] contains the directed
        side (e, 0).  Only meaningful when each component's rotation system
        is spherical.
        """
        faces = self.faces()
        left = {}
        right = {}
        for fi, walk in enumerate(faces):
            for (e, d) in walk:
                if d == 0:
                    left[e] = fi
                else:
                    right[e] = fi
        return faces, left, right


def vertex_word(graph: SphereGraph, vi: int, grading: dict, cat: FusionData):
    """As-seen grading tuple at a coupon, or None if some leg is unset."""
    out = []
    for e, end in graph.vertices[vi].legs:
        g = grading.get(e)
        if g is None:
            return None
        out.append(g if end == 0 else cat.inv(g))
    return tuple(out)


def validate_components(graph: SphereGraph, cat: FusionData):
    """Check that component coupons are supported on admissible gradings."""
    for v in graph.vertices:
        if isinstance(v.coupon, Components):
            for key in v.coupon.support():
                if len(key) != len(v.legs):
                    raise GraphError(f"component key arity mismatch at {v.name}")
                prod = cat.unit
                for g in key:
                    prod = cat.mul(prod, g)
                if prod != cat.unit:
                    raise GradingMismatch(
                        f"coupon {v.name} supported on non-admissible grading {key}")


# ---------------------------------------------------------------------------
# pointed evaluation


def eval_pointed(graph: SphereGraph, cat: FusionData) -> FieldScalar:
    """Sum over admissible edge gradings of the product of coupon components."""
    if not cat.is_pointed:
        raise NotPointed(f"{cat.name} has no group table")
    for e in range(len(graph.edges)):
        if not graph.allowed_gradings(e):
            raise GradingMismatch(f"edge {graph.edges[e].name} allows no grading")
    validate_components(graph, cat)

    order = _vertex_order(graph)
    total = cat.field.zero()
    one = cat.field.one()

    def backtrack(pos: int, grading: dict, partial: FieldScalar):
        nonlocal total
        if pos == len(order):
            total = total + partial
            return
        vi = order[pos]
        v = graph.vertices[vi]
        for assignment, factor in _local_options(graph, cat, vi, grading):
            for e, g in assignment.items():
                grading[e] = g
            backtrack(pos + 1, grading, partial * factor if factor is not one else partial)
            for e in assignment:
                del grading[e]

    def _local_options(graph, cat, vi, grading):
        v = graph.vertices[vi]
        if isinstance(v.coupon, Components):
            for key, value in v.coupon.entries.items():
                assignment = {}
                ok = True
                for (e, end), seen in zip(v.legs, key):
                    g = seen if end == 0 else cat.inv(seen)
                    have = grading.get(e, assignment.get(e))
                    if have is None:
                        if g not in graph.allowed_gradings(e):
                            ok = False
                            break
                        assignment[e] = g
                    elif have != g:
                        ok = False
                        break
                if ok and not value.is_zero():
                    yield assignment, value
            return
        if isinstance(v.coupon, (Identity, DualPair)):
            (e1, end1), (e2, end2) = v.legs
            g1 = grading.get(e1)
            g2 = grading.get(e2)
            candidates = []
            if g1 is not None:
                candidates = [g1]
            elif g2 is not None:
                seen2 = g2 if end2 == 0 else cat.inv(g2)
                want1 = cat.inv(seen2)  # seen1 * seen2 = 1
                candidates = [want1 if end1 == 0 else cat.inv(want1)]
            else:
                candidates = list(graph.allowed_gradings(e1))
            for g in candidates:
                if g not in graph.allowed_gradings(e1):
                    continue
                seen1 = g if end1 == 0 else cat.inv(g)
                want_seen2 = cat.inv(seen1)
                g2_needed = want_seen2 if end2 == 0 else cat.inv(want_seen2)
                if e1 == e2:
                    if g == g2_needed:
                        yield {e1: g}, one
                    continue
                have2 = grading.get(e2)
                if have2 is not None:
                    if have2 == g2_needed:
                        yield ({e1: g} if g1 is None else {}), one
                elif g2_needed in graph.allowed_gradings(e2):
                    out = {e2: g2_needed}
                    if g1 is None:
                        out[e1] = g
                    yield out, one
            return
        raise UnsupportedInstance(
            f"coupon {type(v.coupon).__name__} not supported by the pointed evaluator")

    backtrack(0, {}, one)
    return total


def _vertex_order(graph: SphereGraph):
    """BFS order so most coupons see already-assigned legs."""
    order = []
    seen = set()
    for start in range(len(graph.vertices)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            vi = queue.pop(0)
            order.append(vi)
            for e, end in graph.vertices[vi].legs:
                other = graph.end_at(e, 1 - end)[0]
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
    return order


# ---------------------------------------------------------------------------
# trivalent rewriting engine


class _Net:
    """Mutable trivalent multigraph for the reduction engine.

    Treats all labels through the category's sign-insensitive tables, so it
    requires an S4-symmetric ("canonical") 6j table; Fibonacci qualifies.
    """

    def __init__(self, graph: SphereGraph, cat: FusionData):
        self.cat = cat
        self.vmap: dict = {}  # vid -> list of incident edge ids
        self.emap: dict = {}  # eid -> [label, [end vid, end vid]]
        self.free_loops: list = []
        self._ids = itertools.count(len(graph.edges) + len(graph.vertices))
        identities = []
        for vi, v in enumerate(graph.vertices):
            if isinstance(v.coupon, Trivalent):
                if len(v.legs) != 3:
                    raise UnsupportedInstance("trivalent marker with wrong valence")
            elif isinstance(v.coupon, Identity):
                if len(v.legs) != 2:
                    raise UnsupportedInstance("identity coupon must be 2-valent")
                identities.append(vi)
            else:
                raise UnsupportedInstance(
                    f"coupon {type(v.coupon).__name__} not supported by the 6j engine")
            self.vmap[vi] = [e for e, _ in v.legs]
        for e, edge in enumerate(graph.edges):
            if not isinstance(edge.label, int):
                raise UnsupportedInstance("graded-sum labels need the pointed evaluator")
            self.emap[e] = [edge.label, [graph.end_at(e, 0)[0], graph.end_at(e, 1)[0]]]
        for vi in identities:
            if vi in self.vmap:
                self.fuse_identity(vi)

    def new_id(self):
        return next(self._ids)

    def fuse_identity(self, vid):
        e1, e2 = self.vmap[vid]
        if e1 == e2:  # loop closed by its own transparent coupon
            self.free_loops.append(self.emap[e1][0])
            del self.emap[e1]
            del self.vmap[vid]
            return
        lbl = self.emap[e1][0]
        others = [u for u in self.emap[e1][1] if u != vid] + \
                 [u for u in self.emap[e2][1] if u != vid]
        del self.vmap[vid]
        if others and others[0] == vid:
            others = others[1:]  # e1 was a loop at vid
        if len(others) < 2:
            # both remaining ends met this coupon: the pair closed a loop
            self.free_loops.append(lbl)
            self.emap.pop(e1, None)
            self.emap.pop(e2, None)
            return
        merged = self.new_id()
        self.emap[merged] = [lbl, others]
        self.vmap[others[0]][self.vmap[others[0]].index(e1)] = merged
        self.vmap[others[1]][self.vmap[others[1]].index(e2)] = merged
        del self.emap[e1]
        del self.emap[e2]

    def splice_out_vertex_pair(self, v, w, keep_v, keep_w, label):
        """Remove v, w and join their remaining legs keep_v, keep_w."""
        del self.vmap[v]
        del self.vmap[w]
        if keep_v == keep_w:
            self.free_loops.append(label)
            del self.emap[keep_v]
            return
        merged = self.new_id()
        far_v = next(u for u in self.emap[keep_v][1] if u != v)
        far_w = next(u for u in self.emap[keep_w][1] if u != w)
        self.emap[merged] = [label, [far_v, far_w]]
        self.vmap[far_v][self.vmap[far_v].index(keep_v)] = merged
        self.vmap[far_w][self.vmap[far_w].index(keep_w)] = merged
        del self.emap[keep_v]
        del self.emap[keep_w]

    def edges_between(self, v, w):
        return [e for e in self.vmap[v] if sorted(self.emap[e][1]) == sorted([v, w])]


def eval_trivalent(graph: SphereGraph, cat: FusionData) -> FieldScalar:
    """Evaluate a closed trivalent graph by local reduction moves.

    Supported class: disjoint unions of loops, thetas, tetrahedra, and any
    graph reducible by unit-edge deletion, bigon fusion and triangle
    contraction.  Moves fire at the lowest-index site, so the reduction is
    deterministic.
    """
    if not cat.has_sixj():
        raise UnsupportedInstance(f"{cat.name} has no 6j table")
    if cat.sixj_keying != "canonical":
        raise UnsupportedInstance("the rewriting engine needs an S4-symmetric 6j table")
    net = _Net(graph, cat)
    scalar = cat.field.one()
    zero = cat.field.zero()

    while net.vmap:
        for vid in sorted(net.vmap):
            word = [(net.emap[e][0], 1) for e in net.vmap[vid]]
            if cat.hom_dim_word(word) == 0:
                return zero
        # degenerate sites: isolated coupons, pendant stubs, tadpoles
        cleanup = False
        for vid in sorted(net.vmap):
            legs = net.vmap[vid]
            if len(legs) == 0:
                del net.vmap[vid]
                cleanup = True
                break
            if len(legs) == 1:
                eid = legs[0]
                if net.emap[eid][0] != cat.unit:
                    return zero
                far = [u for u in net.emap[eid][1] if u != vid]
                del net.emap[eid]
                del net.vmap[vid]
                if far and far[0] in net.vmap:
                    net.vmap[far[0]] = [e for e in net.vmap[far[0]] if e != eid]
                    if len(net.vmap[far[0]]) == 2:
                        net.fuse_identity(far[0])
                cleanup = True
                break
            if len(legs) == 3:
                loops = [e for e in legs if legs.count(e) == 2]
                if loops:
                    stem = next(e for e in legs if e != loops[0])
                    if net.emap[stem][0] != cat.unit:
                        return zero  # a tadpole is a morphism out of the unit
        if cleanup:
            continue
        eid = next((e for e in sorted(net.emap)
                    if net.emap[e][0] == cat.unit and net.emap[e][1] is not None), None)
        if eid is not None:
            ends = set(net.emap[eid][1])
            del net.emap[eid]
            for vid in ends:
                net.vmap[vid] = [e for e in net.vmap[vid] if e != eid]
            for vid in sorted(ends):
                if vid in net.vmap and len(net.vmap[vid]) == 2:
                    net.fuse_identity(vid)
            continue
        site = _find_theta(net)
        if site is not None:
            v, w, (e1, e2, e3) = site
            a, b, c = (net.emap[e][0] for e in (e1, e2, e3))
            scalar = scalar * cat.theta(a, b, c)
            for e in (e1, e2, e3):
                del net.emap[e]
            del net.vmap[v]
            del net.vmap[w]
            continue
        site = _find_bigon(net)
        if site is not None:
            v, w, (p1, p2), third_v, third_w = site
            a, b = net.emap[p1][0], net.emap[p2][0]
            x, y = net.emap[third_v][0], net.emap[third_w][0]
            if x != y and cat.dual[x] != y:
                return zero
            th = cat.theta(a, b, x)
            if th.is_zero():
                return zero
            scalar = scalar * th * cat.dim(x).inverse()
            for e in (p1, p2):
                del net.emap[e]
            net.splice_out_vertex_pair(v, w, third_v, third_w, x)
            continue
        tri = _find_triangle(net)
        if tri is not None:
            coeff = _contract_triangle(net, tri)
            if coeff is None:
                return zero
            scalar = scalar * coeff
            continue
        raise IrreducibleGraph(
            f"no reduction move applies; {len(net.vmap)} coupons remain")
    for lbl in net.free_loops:
        scalar = scalar * cat.dim(lbl)
    return scalar


def _find_theta(net):
    for v in sorted(net.vmap):
        for w in sorted(net.vmap):
            if w <= v:
                continue
            shared = net.edges_between(v, w)
            if len(shared) == 3:
                return v, w, shared
    return None


def _find_bigon(net):
    for v in sorted(net.vmap):
        for w in sorted(net.vmap):
            if w <= v:
                continue
            shared = net.edges_between(v, w)
            if len(shared) == 2:
                third_v = next(e for e in net.vmap[v] if e not in shared)
                third_w = next(e for e in net.vmap[w] if e not in shared)
                return v, w, shared, third_v, third_w
    return None


def _find_triangle(net):
    vs = sorted(net.vmap)
    for i, a in enumerate(vs):
        for j, b in enumerate(vs[i + 1:], i + 1):
            eab = net.edges_between(a, b)
            if len(eab) != 1:
                continue
            for c in vs[j + 1:]:
                ebc = net.edges_between(b, c)
                eca = net.edges_between(c, a)
                if len(ebc) == 1 and len(eca) == 1:
                    return a, b, c, eab[0], ebc[0], eca[0]
    return None


# ---------------------------------------------------------------------------
# morphism chains (for the identity checks)


def coupon_key(cat: FusionData, ins, outs):
    """As-seen key of a morphism component, inputs then outputs.

    The coupon's cyclic boundary reads outputs left to right, then inputs
    right to left; incoming legs are seen inverted.
    """
    return tuple(list(outs) + [cat.inv(g) for g in reversed(list(ins))])


def chain_closure(cat: FusionData, layers) -> SphereGraph:
    """Close a composable chain of morphism coupons 1 -> W1 -> ... -> 1.

    ``layers`` is a list of (entries, n_in, n_out) component coupons; the
    n_out outputs of each layer feed the next layer's inputs in order.
    """
    vertices = []
    edges = []
    prev_out = []  # edge indices carrying the previous layer's outputs
    for li, (entries, n_in, n_out) in enumerate(layers):
        if len(prev_out) != n_in:
            raise GraphError("chain widths do not compose")
        out_edges = []
        for k in range(n_out):
            edges.append(Edge(f"w{li}.{k}", tuple(range(len(cat.simples)))))
            out_edges.append(len(edges) - 1)
        legs = [(e, 0) for e in out_edges] + [(e, 1) for e in reversed(prev_out)]
        vertices.append(Vertex(f"m{li}", Components(entries), legs))
        prev_out = out_edges
    if prev_out:
        raise GraphError("chain does not end at the tensor unit")
    return SphereGraph(vertices, edges)


# ---------------------------------------------------------------------------
# graphical-calculus identity checks


def check_identity(lemma: str, cat: FusionData, instance: dict) -> bool:
    """Verify one of the named string-diagram identities on an instance.

    Lemmas: "trace", "dec_id", "disconn", "quad", "bubble".  Instances come
    from :func:`tvlab.randgen.random_lemma_instance`; pointed instances are
    checked through the pointed evaluator, Fibonacci-class instances through
    the trivalent engine.
    """
    if instance.get("kind") == "trivalent":
        return _check_identity_trivalent(lemma, cat, instance)
    if not cat.is_pointed:
        raise UnsupportedInstance("need a pointed category or a trivalent instance")
    word = instance["word"]
    sizes = len(cat.simples)

    def basis(word_signs, total=None):
        """Gradings of the word with signed product equal to ``total``."""
        target = cat.unit if total is None else total
        out = []
        for assign in itertools.product(range(sizes), repeat=len(word_signs)):
            prod = cat.unit
            for g, (_, sign) in zip(assign, word_signs):
                prod = cat.mul(prod, g if sign > 0 else cat.inv(g))
            if prod == target:
                out.append(assign)
        return out

    def seen(assign, word_signs):
        return tuple(g if s > 0 else cat.inv(g) for g, (_, s) in zip(assign, word_signs))

    if lemma == "bubble":
        graph = instance["graph"]
        base = eval_pointed(graph, cat)
        lhs = cat.field.zero()
        for i in range(sizes):
            lhs = lhs + cat.dim(i) * eval_pointed(disjoint_union(graph, loop_graph(i)), cat)
        return lhs == cat.global_dim * base

    if lemma == "disconn":
        f, g = instance["f"], instance["g"]
        direct = eval_pointed(chain_closure(cat, [
            (f, 0, len(word)), (g, len(word), 0)]), cat)
        total = cat.field.zero()
        for alpha in basis(word):
            a_seen = seen(alpha, word)
            alpha_co = {a_seen: cat.field.one()}
            alpha_ev = {coupon_key(cat, a_seen, ()): cat.field.one()}
            left = eval_pointed(chain_closure(cat, [(f, 0, len(word)),
                                                    (alpha_ev, len(word), 0)]), cat)
            right = eval_pointed(chain_closure(cat, [(alpha_co, 0, len(word)),
                                                     (g, len(word), 0)]), cat)
            total = total + left * right
        return total == direct

    if lemma == "trace":
        x = instance["x"]
        mat = instance["matrix"]
        bs = basis(word, total=x)
        alg_trace = cat.field.zero()
        for b in bs:
            alg_trace = alg_trace + mat.get((b, b), cat.field.zero())
        diag = cat.field.zero()
        for b in bs:
            b_seen = seen(b, word)
            # F(alpha_b) in Hom(1, x* (x) word)
            fb = {}
            for b2 in bs:
                val = mat.get((b2, b), cat.field.zero())
                if not val.is_zero():
                    fb[(cat.inv(x),) + seen(b2, word)] = val
            # alpha_b^* in Hom(x* (x) word, 1), pairing normalized by 1/dim
            dual = {coupon_key(cat, (cat.inv(x),) + b_seen, ()):
                    cat.dim(x).inverse()}
            diag = diag + eval_pointed(chain_closure(
                cat, [(fb, 0, 1 + len(word)), (dual, 1 + len(word), 0)]), cat)
        return alg_trace == cat.dim(x) * diag

    if lemma in ("dec_id", "quad"):
        f, g = instance["f"], instance["g"]
        direct = eval_pointed(chain_closure(cat, [
            (f, 0, len(word)), (g, len(word), 0)]), cat)
        total = cat.field.zero()
        for i in range(sizes):
            for beta in basis(word, total=i):
                b_seen = seen(beta, word)
                # beta: i -> word and beta^*: word -> i with the
                # dual-pair normalization beta^* beta = id / dim(i)
                beta_co = {coupon_key(cat, (i,), b_seen): cat.field.one()}
                beta_ev = {coupon_key(cat, b_seen, (i,)): cat.dim(i).inverse()}
                val = eval_pointed(chain_closure(cat, [
                    (f, 0, len(word)),
                    (beta_ev, len(word), 1),
                    (beta_co, 1, len(word)),
                    (g, len(word), 0)]), cat)
                total = total + cat.dim(i) * val
        return total == direct

    raise UnsupportedInstance(f"unknown lemma {lemma!r}")


def _check_identity_trivalent(lemma: str, cat: FusionData, instance: dict) -> bool:
    one = cat.field.one()
    tau = instance.get("color", 1)
    if lemma == "bubble":
        base_graph = instance["graph"]
        base = eval_trivalent(base_graph, cat)
        lhs = cat.field.zero()
        for i in range(len(cat.simples)):
            lhs = lhs + cat.dim(i) * eval_trivalent(
                disjoint_union(base_graph, loop_graph(i)), cat)
        return lhs == cat.global_dim * base

    if lemma in ("dec_id", "quad"):
        # insert a raw dual pair on the (tau, tau) channel of a theta; with
        # raw vertices the dual normalization contributes 1/theta(a, b, i)
        x = instance["x"]
        base = eval_trivalent(theta_graph(tau, tau, x), cat)
        total = cat.field.zero()
        for i in range(len(cat.simples)):
            th = cat.theta(tau, tau, i)
            if th.is_zero():
                continue
            chain = _theta_with_pair(tau, tau, x, i)
            total = total + cat.dim(i) * th.inverse() * eval_trivalent(chain, cat)
        return total == base

    if lemma == "disconn":
        # two routes to the tetrahedral value: direct closure versus
        # triangle contraction times a theta
        key = instance["key"]
        direct = eval_trivalent(tet_graph(*key), cat)
        xa, xb, xc = key[0], key[1], key[2]
        th = cat.theta(xa, xb, xc)
        if th.is_zero():
            return direct.is_zero()
        return direct == cat.sixj_value(key) * th.inverse() * th

    if lemma == "trace":
        # trace of lambda * id on the one-dimensional Hom(1, tau tau x)
        lam = instance["scalar"]
        x = instance["x"]
        d = cat.hom_dim_word([(tau, 1), (tau, 1), (x, 1)])
        th = cat.theta(tau, tau, x)
        if d == 0:
            return th.is_zero()
        diag = lam * th.inverse() * eval_trivalent(theta_graph(tau, tau, x), cat)
        return diag == lam * d

    raise UnsupportedInstance(f"unknown lemma {lemma!r}")


def _theta_with_pair(a, b, x, i) -> SphereGraph:
    """Theta on (a, b, x) with a raw dual pair inserted on the (a, b) legs."""
    edges = [Edge("a1", a), Edge("b1", b), Edge("i", i),
             Edge("a2", a), Edge("b2", b), Edge("x", x)]
    verts = [
        Vertex("v1", Trivalent(), [(0, 0), (1, 0), (5, 0)]),
        Vertex("w1", Trivalent(), [(1, 1), (0, 1), (2, 0)]),
        Vertex("w2", Trivalent(), [(2, 1), (3, 0), (4, 0)]),
        Vertex("v2", Trivalent(), [(4, 1), (3, 1), (5, 1)]),
    ]
    return SphereGraph(verts, edges)


# ---------------------------------------------------------------------------
# stock graphs


def loop_graph(label) -> SphereGraph:
    v = Vertex("v", Identity(), [(0, 0), (0, 1)])
    return SphereGraph([v], [Edge("loop", label)])


def theta_graph(a, b, c) -> SphereGraph:
    v0 = Vertex("v0", Trivalent(), [(0, 0), (1, 0), (2, 0)])
    v1 = Vertex("v1", Trivalent(), [(0, 1), (2, 1), (1, 1)])
    return SphereGraph([v0, v1], [Edge("a", a), Edge("b", b), Edge("c", c)])


def tet_graph(x01, x02, x03, x23, x13, x12) -> SphereGraph:
    """Tetrahedral graph with the planar rotation system (vertex 0 central)."""
    edges = [Edge("e01", x01), Edge("e02", x02), Edge("e03", x03),
             Edge("e23", x23), Edge("e13", x13), Edge("e12", x12)]
    verts = [
        Vertex("v0", Trivalent(), [(0, 0), (1, 0), (2, 0)]),
        Vertex("v1", Trivalent(), [(5, 0), (0, 1), (4, 0)]),
        Vertex("v2", Trivalent(), [(3, 0), (1, 1), (5, 1)]),
        Vertex("v3", Trivalent(), [(4, 1), (2, 1), (3, 1)]),
    ]
    return SphereGraph(verts, edges)


def disjoint_union(g1: SphereGraph, g2: SphereGraph) -> SphereGraph:
    ne = len(g1.edges)
    verts = [Vertex(v.name + "/1", v.coupon, list(v.legs)) for v in g1.vertices]
    for v in g2.vertices:
        verts.append(Vertex(v.name + "/2", v.coupon,
                            [(e + ne, end) for e, end in v.legs]))
    edges = ([Edge(e.name + "/1", e.label) for e in g1.edges]
             + [Edge(e.name + "/2", e.label) for e in g2.edges])
    return SphereGraph(verts, edges)


def _contract_triangle(net, tri):
    cat = net.cat
    a, b, c, eab, ebc, eca = tri
    outer = {}
    for vid in (a, b, c):
        out = [e for e in net.vmap[vid] if e not in (eab, ebc, eca)]
        if len(out) != 1:
            return None
        outer[vid] = out[0]
    xa, xb, xc = (net.emap[outer[v]][0] for v in (a, b, c))
    th = cat.theta(xa, xb, xc)
    if th.is_zero():
        return None
    # virtual tetrahedron: new vertex 0 with spokes (xa, xb, xc) to the
    # triangle corners 1, 2, 3; opposite edges are the triangle's own
    key = (xa, xb, xc, net.emap[ebc][0], net.emap[eca][0], net.emap[eab][0])
    coeff = cat.sixj_value(key) * th.inverse()
    new_v = net.new_id()
    net.vmap[new_v] = [outer[a], outer[b], outer[c]]
    for vid in (a, b, c):
        eid = outer[vid]
        lbl, ends = net.emap[eid]
        net.emap[eid] = [lbl, [new_v if u == vid else u for u in ends]]
        del net.vmap[vid]
    for eid in (eab, ebc, eca):
        del net.emap[eid]
    return coeff
