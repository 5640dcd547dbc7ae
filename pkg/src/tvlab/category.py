"""Spherical fusion category data: Vec_G, Fibonacci, Rep(S3) fusion rules.

A ``FusionData`` carries the combinatorial layer (simple objects, duals,
fusion coefficients, quantum dimensions) plus, when available, a table of
closed tetrahedral-network values ("6j table") that drives the trivalent
graph evaluator and the 6j state sum.

Conventions for the 6j table
----------------------------
Keys are 6-tuples of simple indices in the slot order

    (x01, x02, x03, x23, x13, x12)

listing the edge colors of the tetrahedral graph K4 on vertices {0,1,2,3};
slot k and slot k+3 are opposite edges.  Values are the exact evaluations
of the closed network in a fixed trivalent-vertex gauge whose pairing
normalization is recorded by ``theta``: theta(a, b, c) is the value of the
theta network on the same vertices, and equals the degenerate tetrahedron
with one trivial edge.  Tables are stored on S4-canonical keys and are
required to have the full tetrahedral symmetry.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .scalars import QQ, PHI_FIELD, FieldScalar, NumberField, format_scalar, parse_scalar


class UnknownSimple(KeyError):
    pass


class InvalidGroupTable(ValueError):
    pass


# ---------------------------------------------------------------------------
# 6j key canonicalization

_SLOT_EDGES = ((0, 1), (0, 2), (0, 3), (2, 3), (1, 3), (1, 2))
_EDGE_SLOT = {e: i for i, e in enumerate(_SLOT_EDGES)}
# the four faces of the tetrahedron, as slot triples
TET_FACES = tuple(
    tuple(_EDGE_SLOT[tuple(sorted(pair))] for pair in itertools.combinations(face, 2))
    for face in itertools.combinations(range(4), 3)
)


def _slot_permutations():
    perms = []
    for p in itertools.permutations(range(4)):
        perms.append(tuple(_EDGE_SLOT[tuple(sorted((p[i], p[j])))]
                           for (i, j) in _SLOT_EDGES))
    return tuple(perms)


_SLOT_PERMS = _slot_permutations()


def canonical_6j_key(key: Sequence[int]) -> tuple[int, ...]:
    key = tuple(key)
    return min(tuple(key[s] for s in sp) for sp in _SLOT_PERMS)


# ---------------------------------------------------------------------------


@dataclass
class FusionData:
    """Fusion-level data of a spherical fusion category."""

    name: str
    field: NumberField
    simples: tuple[str, ...]
    dual: tuple[int, ...]
    fusion: dict  # (a, b, c) -> N_{ab}^c, sparse over simple indices
    dims: tuple[FieldScalar, ...]
    global_dim: FieldScalar = None  # type: ignore[assignment]
    sixj: Optional[dict] = None  # 6-tuple key -> FieldScalar
    pointed_group: Optional[tuple] = None  # multiplication table, rows of indices
    unit: int = 0
    # "canonical": keys are stored S4-canonically (needs a fully symmetric
    # table); "raw": keys are looked up verbatim (pointed categories, where
    # nonabelian words are order-sensitive).
    sixj_keying: str = "canonical"

    def __post_init__(self):
        if self.global_dim is None:
            gd = self.field.zero()
            for d in self.dims:
                gd = gd + d * d
            self.global_dim = gd

    # -- basic access -----------------------------------------------------

    def index(self, label: str) -> int:
        try:
            return self.simples.index(label)
        except ValueError:
            raise UnknownSimple(f"{label!r} is not a simple object of {self.name}")

    def n(self, a: int, b: int, c: int) -> int:
        return self.fusion.get((a, b, c), 0)

    def dim(self, a: int) -> FieldScalar:
        return self.dims[a]

    @property
    def is_pointed(self) -> bool:
        return self.pointed_group is not None

    def mul(self, g: int, h: int) -> int:
        return self.pointed_group[g][h]

    def inv(self, g: int) -> int:
        return self.dual[g]

    # -- 6j access ----------------------------------------------------------

    def has_sixj(self) -> bool:
        return self.sixj is not None

    def sixj_value(self, key: Sequence[int]) -> FieldScalar:
        """Value of the tetrahedral network colored by the 6 slot entries.

        Slots follow (x01, x02, x03, x23, x13, x12) on the tetrahedron with
        local vertices 0..3 and edges oriented from the lower vertex.
        """
        if self.sixj is None:
            raise ValueError(f"{self.name} carries no 6j data")
        if self.sixj_keying == "raw":
            return self.sixj.get(tuple(key), self.field.zero())
        return self.sixj.get(canonical_6j_key(key), self.field.zero())

    def theta(self, a: int, b: int, c: int) -> FieldScalar:
        """Vertex-pairing normalization: the theta network value."""
        return self.theta_of_word(((a, 1), (b, 1), (c, 1)))

    def theta_of_word(self, word) -> FieldScalar:
        """Theta value of the triple given as a signed word (3 entries)."""
        if len(word) != 3:
            raise ValueError("theta takes a three-letter word")
        if self.sixj_keying == "raw":
            # pointed categories: admissible vertices pair to 1
            return self.field.one() if self.hom_dim_word(word) else self.field.zero()
        a, b, c = (x if s > 0 else self.dual[x] for x, s in word)
        return self.sixj_value((self.unit, a, a, b, c, c))

    def admissible(self, a: int, b: int, c: int) -> bool:
        """Is Hom(1, a x b x c) nonzero?"""
        return self.n(a, b, self.dual[c]) > 0

    # -- hom dimensions -----------------------------------------------------

    def hom_dim_word(self, word: Sequence[tuple[int, int]]) -> int:
        """dim Hom(1, x1^{e1} x ... x xk^{ek}) with ek = +-1, by fusion DP."""
        vec = {self.unit: 1}
        for x, sign in word:
            if not 0 <= x < len(self.simples):
                raise UnknownSimple(f"simple index {x} out of range")
            y = x if sign > 0 else self.dual[x]
            new: dict[int, int] = {}
            for a, mult in vec.items():
                for c in range(len(self.simples)):
                    nabc = self.n(a, y, c)
                    if nabc:
                        new[c] = new.get(c, 0) + mult * nabc
            vec = new
        return vec.get(self.unit, 0)


def hom_dim(cat: FusionData, word: Sequence[tuple[str, int]]) -> int:
    """dim Hom(1, x1^{e1} x ... x xk^{ek}) for labeled simples, sign -1 = dual."""
    return cat.hom_dim_word([(cat.index(x), s) for x, s in word])


# ---------------------------------------------------------------------------
# built-in constructors


def _check_group_table(table) -> tuple[tuple[int, ...], ...]:
    n = len(table)
    tbl = tuple(tuple(row) for row in table)
    for row in tbl:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise InvalidGroupTable("table is not square over element indices")
    unit = None
    for e in range(n):
        if all(tbl[e][x] == x and tbl[x][e] == x for x in range(n)):
            unit = e
            break
    if unit is None:
        raise InvalidGroupTable("no two-sided identity element")
    for a in range(n):
        if unit not in tbl[a]:
            raise InvalidGroupTable(f"element {a} has no right inverse")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if tbl[tbl[a][b]][c] != tbl[a][tbl[b][c]]:
                    raise InvalidGroupTable("multiplication is not associative")
    if unit != 0:
        # relabel so the identity sits at index 0
        order = [unit] + [x for x in range(n) if x != unit]
        pos = {g: i for i, g in enumerate(order)}
        tbl = tuple(tuple(pos[tbl[order[i]][order[j]]] for j in range(n)) for i in range(n))
    return tbl


def build_pointed(group_table, names: Optional[Sequence[str]] = None,
                  name: str = "vecg") -> FusionData:
    """Vec_G for the finite group given by a multiplication table."""
    tbl = _check_group_table(group_table)
    n = len(tbl)
    if names is None:
        names = ["1"] + [f"g{i}" for i in range(1, n)]
    names = tuple(names)
    inv = []
    for a in range(n):
        inv.append(tbl[a].index(0))
    fusion = {(a, b, tbl[a][b]): 1 for a in range(n) for b in range(n)}
    dims = tuple(QQ.one() for _ in range(n))
    sixj = _pointed_sixj_table(tbl)
    return FusionData(name=name, field=QQ, simples=names, dual=tuple(inv),
                      fusion=fusion, dims=dims, sixj=sixj,
                      pointed_group=tbl, sixj_keying="raw")


def _pointed_sixj_table(tbl) -> dict:
    """All-ones table on the flat tetrahedron colorings, raw-keyed.

    A flat coloring of a tetrahedron comes from vertex potentials,
    y_{kl} = u_k * u_l^{-1} for the edge oriented k -> l with k < l.  The
    link network's slot (i, j) carries the opposite edge {k, l}, and every
    closed admissible Vec_G network evaluates to 1.  Keys are stored raw
    because nonabelian product conditions are not S4-symmetric.
    """
    n = len(tbl)
    inv = [row.index(0) for row in tbl]
    table = {}
    one = QQ.one()
    for u1 in range(n):
        for u2 in range(n):
            for u3 in range(n):
                u = (0, u1, u2, u3)
                key = []
                for (i, j) in _SLOT_EDGES:
                    k, l = (m for m in range(4) if m not in (i, j))
                    key.append(tbl[u[k]][inv[u[l]]])
                table[tuple(key)] = one
    return table


def cyclic_group_table(n: int):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


_S3_ELEMENTS = ("1", "(12)", "(13)", "(23)", "(123)", "(132)")
_S3_PERMS = {
    "1": (0, 1, 2), "(12)": (1, 0, 2), "(13)": (2, 1, 0),
    "(23)": (0, 2, 1), "(123)": (1, 2, 0), "(132)": (2, 0, 1),
}


def s3_group_table():
    def compose(p, q):  # apply q then p
        return tuple(p[q[i]] for i in range(3))
    perms = [_S3_PERMS[e] for e in _S3_ELEMENTS]
    return [[perms.index(compose(p, q)) for q in perms] for p in perms]


def build_vec_zn(n: int) -> FusionData:
    names = ["1"] + [f"g{'^%d' % k if k > 1 else ''}" for k in range(1, n)]
    return build_pointed(cyclic_group_table(n), names=names, name=f"vecg:z{n}")


def build_vec_s3() -> FusionData:
    return build_pointed(s3_group_table(), names=_S3_ELEMENTS, name="vecg:s3")


# Fibonacci tetrahedral network values, exact in Q(phi).  Derived from the
# Temperley-Lieb realization at loop value phi (one Jones-Wenzl projector
# per tau edge); the test suite re-derives the table from scratch.
def _fibonacci_sixj() -> dict:
    phi = PHI_FIELD.gen()
    one_ = PHI_FIELD.one()
    entries = {
        (0, 0, 0, 0, 0, 0): one_,
        (0, 0, 0, 1, 1, 1): phi,
        (0, 1, 1, 0, 1, 1): phi,
        (0, 1, 1, 1, 1, 1): phi - 1,
        (1, 1, 1, 1, 1, 1): 3 * phi - 5,
    }
    return {canonical_6j_key(k): v for k, v in entries.items()}


def build_fibonacci() -> FusionData:
    phi = PHI_FIELD.gen()
    fusion = {
        (0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1,
        (1, 1, 0): 1, (1, 1, 1): 1,
    }
    return FusionData(name="fib", field=PHI_FIELD, simples=("1", "tau"),
                      dual=(0, 1), fusion=fusion,
                      dims=(PHI_FIELD.one(), phi), sixj=_fibonacci_sixj())


def build_rep_s3_fusion() -> FusionData:
    # simples 1, sgn, std with dims 1, 1, 2; std x std = 1 + sgn + std
    fusion = {
        (0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1,
        (1, 0, 1): 1, (1, 1, 0): 1, (1, 2, 2): 1,
        (2, 0, 2): 1, (2, 1, 2): 1,
        (2, 2, 0): 1, (2, 2, 1): 1, (2, 2, 2): 1,
    }
    return FusionData(name="reps3", field=QQ, simples=("1", "sgn", "std"),
                      dual=(0, 1, 2), fusion=fusion,
                      dims=(QQ.one(), QQ.one(), QQ(2)))


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)  # (name, passed, detail)

    def record(self, name: str, passed: bool, detail: str = ""):
        self.checks.append((name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def failures(self):
        return [(n, d) for n, p, d in self.checks if not p]


def validate(cat: FusionData) -> ValidationReport:
    """Check the structural invariants of fusion data; failures are entries."""
    rep = ValidationReport()
    k = len(cat.simples)
    u = cat.unit

    rep.record("unit-fusion",
               all(cat.n(u, a, a) == 1 and cat.n(a, u, a) == 1 for a in range(k))
               and all(cat.n(u, a, b) == (1 if a == b else 0) for a in range(k) for b in range(k)),
               "N_{1a}^b must be delta_{ab}")
    rep.record("unit-dim", cat.dim(u) == cat.field.one(), "dim(1) = 1")
    rep.record("dual-involution", all(cat.dual[cat.dual[a]] == a for a in range(k)), "")
    rep.record("dual-pairing",
               all(cat.n(a, b, u) == (1 if b == cat.dual[a] else 0)
                   for a in range(k) for b in range(k)),
               "N_{ab}^1 = delta_{b,a*}")
    rep.record("dual-dims", all(cat.dim(cat.dual[a]) == cat.dim(a) for a in range(k)), "")

    assoc_ok = True
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    lhs = sum(cat.n(a, b, e) * cat.n(e, c, d) for e in range(k))
                    rhs = sum(cat.n(b, c, f) * cat.n(a, f, d) for f in range(k))
                    if lhs != rhs:
                        assoc_ok = False
    rep.record("associativity", assoc_ok, "sum_e N_ab^e N_ec^d = sum_f N_bc^f N_af^d")

    dim_ok = True
    for a in range(k):
        for b in range(k):
            total = cat.field.zero()
            for c in range(k):
                total = total + cat.n(a, b, c) * cat.dim(c)
            if total != cat.dim(a) * cat.dim(b):
                dim_ok = False
    rep.record("dimension-compatibility", dim_ok, "dim(a) dim(b) = sum_c N_ab^c dim(c)")

    gd = cat.field.zero()
    for d in cat.dims:
        gd = gd + d * d
    rep.record("global-dim", gd == cat.global_dim and not gd.is_zero(), "")

    if cat.pointed_group is not None:
        tbl = cat.pointed_group
        ok = len(tbl) == k
        ok = ok and all(cat.n(a, b, c) == (1 if tbl[a][b] == c else 0)
                        for a in range(k) for b in range(k) for c in range(k))
        ok = ok and all(cat.dim(a) == cat.field.one() for a in range(k))
        rep.record("pointed-structure", ok, "fusion must equal the group law, dims 1")

    if cat.sixj is not None:
        if cat.sixj_keying == "canonical":
            rep.record("6j-tetrahedral-symmetry",
                       all(canonical_6j_key(kk) == kk for kk in cat.sixj), "")
        rep.record("6j-pachner", _pachner_2_3_check(cat), "2-3 move identity")
    return rep


def _pachner_2_3_check(cat: FusionData) -> bool:
    """Bistellar 2-3 move identity for the stored network values.

    Two tetrahedra glued along the face (0,1,2) versus three tetrahedra
    around the new edge (3,4), in the complex on vertices {0,1,2,3,4}:
    for every admissible boundary coloring,

      T(0123) T(0124) / theta(face 012)
        = sum_w dim(w) T(0134) T(1234) T(0234) / (theta(034) theta(134) theta(234))

    where w colors the inner edge (3,4).  Equivalent to the pentagon
    identity for the underlying 6j symbols.
    """
    import random as _random

    k = len(cat.simples)
    rng = range(k)

    def tet_value(coloring, verts):
        # link-network vertices are the triangles of the tetrahedron, so
        # network slot (i, j) carries the color of the opposite edge {k, l}
        key = []
        for (i, j) in _SLOT_EDGES:
            k, l = (m for m in range(4) if m not in (i, j))
            key.append(coloring[tuple(sorted((verts[k], verts[l])))])
        return cat.sixj_value(key)

    def theta_of_face(coloring, face):
        i, j, k = sorted(face)
        word = ((coloring[(i, j)], 1), (coloring[(j, k)], 1), (coloring[(i, k)], -1))
        return cat.theta_of_word(word)

    boundary_edges = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4)]
    if k ** 9 <= 1 << 12:
        boundary_colorings = itertools.product(rng, repeat=9)
    else:
        sampler = _random.Random(20230)
        boundary_colorings = (tuple(sampler.randrange(k) for _ in range(9))
                              for _ in range(300))
    for colors in boundary_colorings:
        coloring = dict(zip(boundary_edges, colors))
        th = theta_of_face(coloring, (0, 1, 2))
        lhs_tets = [tet_value(coloring, v) for v in ((0, 1, 2, 3), (0, 1, 2, 4))]
        if th.is_zero():
            lhs = cat.field.zero()
            if not (lhs_tets[0].is_zero() and lhs_tets[1].is_zero()):
                # inadmissible shared face forces both tetrahedra to vanish
                return False
        else:
            lhs = lhs_tets[0] * lhs_tets[1] * th.inverse()
        rhs = cat.field.zero()
        for w in rng:
            coloring[(3, 4)] = w
            prod = cat.dim(w)
            ok = True
            for face in ((0, 3, 4), (1, 3, 4), (2, 3, 4)):
                th_f = theta_of_face(coloring, face)
                if th_f.is_zero():
                    ok = False
                    break
                prod = prod * th_f.inverse()
            if not ok:
                continue
            for verts in ((0, 1, 3, 4), (1, 2, 3, 4), (0, 2, 3, 4)):
                prod = prod * tet_value(coloring, verts)
            rhs = rhs + prod
        del coloring[(3, 4)]
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# category files and the registry


def category_to_json(cat: FusionData) -> dict:
    data = {
        "name": cat.name,
        "field": ({"kind": "Q"} if cat.field.kind == "Q"
                  else {"kind": "quadratic",
                        "minpoly": [str(c) for c in cat.field.minpoly],
                        "gen_name": cat.field.gen_name}),
        "simples": list(cat.simples),
        "dual": [cat.simples[d] for d in cat.dual],
        "dims": [format_scalar(d) for d in cat.dims],
        "fusion": [[cat.simples[a], cat.simples[b], cat.simples[c], n]
                   for (a, b, c), n in sorted(cat.fusion.items())],
    }
    if cat.sixj is not None:
        data["sixj"] = [[*(cat.simples[i] for i in key), format_scalar(v)]
                        for key, v in sorted(cat.sixj.items())]
        data["sixj_keying"] = cat.sixj_keying
    if cat.pointed_group is not None:
        data["group"] = [list(row) for row in cat.pointed_group]
    return data


def category_from_json(data: dict) -> FusionData:
    fd = data["field"]
    if fd["kind"] == "Q":
        fld = QQ
    else:
        c0, c1, c2 = (Fraction(str(c)) for c in fd["minpoly"])
        fld = NumberField("quadratic", -c1 / c2, -c0 / c2, gen_name=fd.get("gen_name", "x"))
    simples = tuple(data["simples"])
    idx = {s: i for i, s in enumerate(simples)}
    dual = tuple(idx[s] for s in data["dual"])
    dims = tuple(parse_scalar(s, fld) for s in data["dims"])
    fusion = {(idx[a], idx[b], idx[c]): int(n) for a, b, c, n in data["fusion"]}
    sixj = None
    keying = data.get("sixj_keying", "canonical")
    if "sixj" in data:
        sixj = {}
        for *labels, value in data["sixj"]:
            key = tuple(idx[s] for s in labels)
            if keying == "canonical":
                key = canonical_6j_key(key)
            sixj[key] = parse_scalar(value, fld)
    group = None
    if "group" in data:
        group = tuple(tuple(row) for row in data["group"])
    cat = FusionData(name=data["name"], field=fld, simples=simples, dual=dual,
                     fusion=fusion, dims=dims, sixj=sixj, pointed_group=group,
                     sixj_keying=keying)
    return cat


def save_category(cat: FusionData, path: str):
    with open(path, "w") as fh:
        json.dump(category_to_json(cat), fh, indent=1, sort_keys=True)


def load_category(path: str) -> FusionData:
    with open(path) as fh:
        return category_from_json(json.load(fh))


def get_category(ref: str) -> FusionData:
    """Resolve a category reference: builtin name or a JSON file path."""
    if ref == "fib":
        return build_fibonacci()
    if ref == "reps3":
        return build_rep_s3_fusion()
    if ref.startswith("vecg:"):
        tag = ref.split(":", 1)[1]
        if tag == "s3":
            return build_vec_s3()
        if tag.startswith("z") and tag[1:].isdigit():
            return build_vec_zn(int(tag[1:]))
        raise KeyError(f"unknown pointed category {ref!r}")
    import os
    if os.path.exists(ref):
        return load_category(ref)
    raise KeyError(f"unknown category reference {ref!r}")


def get_group_table(ref: str):
    """Resolve a group reference ("z2", "z3", "z4", "s3", "trivial")."""
    if ref == "s3":
        return s3_group_table()
    if ref == "trivial":
        return [[0]]
    if ref.startswith("z") and ref[1:].isdigit():
        return cyclic_group_table(int(ref[1:]))
    raise KeyError(f"unknown group reference {ref!r}")


BUILTIN_CATEGORIES = ("vecg:z2", "vecg:z3", "vecg:z4", "vecg:s3", "fib", "reps3")
BUILTIN_GROUPS = ("z2", "z3", "z4", "s3")
