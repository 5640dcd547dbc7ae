"""Independent Temperley-Lieb oracle for the Fibonacci network values.

Realizes the Fibonacci category inside Temperley-Lieb diagrams at loop
parameter delta = phi: the nontrivial simple is the image of the 2-strand
Jones-Wenzl projector p2 = id - (1/delta) e.  A closed trivalent network
with edges colored by {1, tau} is evaluated by expanding one p2 per
tau-edge and counting loops of the resulting planar pairings.

This is deliberately separate from the production 6j machinery: it knows
nothing about 6j tables and derives every value from diagram combinatorics.
"""

from __future__ import annotations

from fractions import Fraction

from tvlab.scalars import PHI_FIELD

DELTA = PHI_FIELD.gen()  # loop value of a single TL strand

TAU, ONE = "tau", "1"


def _strands(color: str) -> int:
    return 2 if color == TAU else 0


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        if p != x:
            self.parent[x] = p
        return p

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry


def evaluate_network(vertices, edge_colors):
    """Evaluate a closed trivalent network on the sphere.

    vertices: list of cyclic leg tuples; a leg is (edge_id, end) with
    end in {0, 1}, and every (edge_id, end) occurs exactly once overall.
    edge_colors: dict edge_id -> "1" | "tau".

    Returns an exact element of Q(phi); inadmissible vertices give 0.
    """
    # boundary points: (edge, end, k) for tau edges, k in {0, 1}
    internal_pairs = []
    for legs in vertices:
        if len(legs) != 3:
            raise ValueError("oracle handles trivalent vertices only")
        ns = [_strands(edge_colors[e]) for e, _ in legs]
        m = [0, 0, 0]  # strands between leg i and leg i+1
        for i in range(3):
            m[i] = (ns[i] + ns[(i + 1) % 3] - ns[(i + 2) % 3]) // 2
            if 2 * m[i] != ns[i] + ns[(i + 1) % 3] - ns[(i + 2) % 3] or m[i] < 0:
                return PHI_FIELD.zero()
        points = {}  # leg index -> list of its boundary points in order
        for i, (e, end) in enumerate(legs):
            points[i] = [(e, end, k) for k in range(ns[i])]
        for i in range(3):
            j = (i + 1) % 3
            mine = points[i][len(points[i]) - m[i]:]
            theirs = points[j][: m[i]]
            for k in range(m[i]):
                internal_pairs.append((mine[-1 - k], theirs[k]))

    tau_edges = [e for e, c in edge_colors.items() if c == TAU]
    total = PHI_FIELD.zero()
    minus_inv_delta = -(DELTA.inverse())
    for mask in range(1 << len(tau_edges)):
        coeff = PHI_FIELD.one()
        uf = _UF()
        for a, b in internal_pairs:
            uf.union(a, b)
        for idx, e in enumerate(tau_edges):
            a0, a1 = (e, 0, 0), (e, 0, 1)
            b0, b1 = (e, 1, 0), (e, 1, 1)
            if mask >> idx & 1:  # insert the cup-cap term of p2
                coeff = coeff * minus_inv_delta
                uf.union(a0, a1)
                uf.union(b0, b1)
            else:  # identity term; strand order flips across the band
                uf.union(a0, b1)
                uf.union(a1, b0)
        pts = set(uf.parent)
        loops = len({uf.find(p) for p in pts})
        total = total + coeff * DELTA ** loops
    return total


def tau_loop_value():
    """A single tau-colored circle (one p2 inserted)."""
    return DELTA * DELTA - 1


def theta_network(a: str, b: str, c: str):
    vertices = [
        (("ea", 0), ("eb", 0), ("ec", 0)),
        (("ea", 1), ("ec", 1), ("eb", 1)),
    ]
    return evaluate_network(vertices, {"ea": a, "eb": b, "ec": c})


# planar rotation system of the tetrahedral graph K4 (vertex 0 central)
_TET_VERTICES = [
    (("e01", 0), ("e02", 0), ("e03", 0)),
    (("e12", 0), ("e01", 1), ("e13", 0)),
    (("e23", 0), ("e02", 1), ("e12", 1)),
    (("e13", 1), ("e03", 1), ("e23", 1)),
]


def tet_network(x01, x02, x03, x23, x13, x12):
    colors = {"e01": x01, "e02": x02, "e03": x03,
              "e23": x23, "e13": x13, "e12": x12}
    return evaluate_network(_TET_VERTICES, colors)
