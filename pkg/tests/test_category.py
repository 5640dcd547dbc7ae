import itertools
import random
from fractions import Fraction

import pytest

from tvlab.scalars import QQ, PHI_FIELD
from tvlab.category import (
    BUILTIN_CATEGORIES,
    FusionData,
    InvalidGroupTable,
    UnknownSimple,
    build_fibonacci,
    build_pointed,
    build_rep_s3_fusion,
    build_vec_s3,
    build_vec_zn,
    canonical_6j_key,
    category_from_json,
    category_to_json,
    cyclic_group_table,
    get_category,
    hom_dim,
    s3_group_table,
    validate,
)

import fib_oracle


ALL_BUILTINS = [get_category(ref) for ref in BUILTIN_CATEGORIES]


def test_build_pointed_z2():
    cat = build_vec_zn(2)
    assert len(cat.simples) == 2
    assert cat.global_dim == QQ(2)


def test_build_pointed_trivial():
    cat = build_pointed([[0]])
    assert len(cat.simples) == 1
    assert cat.global_dim == QQ.one()


def test_build_pointed_s3_duals():
    cat = build_vec_s3()
    assert len(cat.simples) == 6
    for t in ("(12)", "(13)", "(23)"):
        i = cat.index(t)
        assert cat.dual[i] == i
    assert cat.dual[cat.index("(123)")] == cat.index("(132)")


def test_invalid_group_tables():
    with pytest.raises(InvalidGroupTable):
        build_pointed([[0, 1], [1, 1]])  # g*g = g: no inverse structure
    bad_assoc = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]
    with pytest.raises(InvalidGroupTable):
        build_pointed(bad_assoc)


def test_fibonacci_basics():
    fib = build_fibonacci()
    phi = PHI_FIELD.gen()
    assert fib.dim(fib.index("tau")) == phi
    assert fib.global_dim == phi + 2
    assert fib.dual[fib.index("tau")] == fib.index("tau")


def test_reps3_global_dim():
    cat = build_rep_s3_fusion()
    assert cat.global_dim == QQ(6)


def _s3_character_decomposition():
    # characters on classes (1, transpositions, 3-cycles) of sizes (1, 3, 2)
    chars = {"1": (1, 1, 1), "sgn": (1, -1, 1), "std": (2, 0, -1)}
    sizes = (1, 3, 2)

    def mult(prod_char, irr):
        total = sum(s * a * b for s, a, b in zip(sizes, prod_char, chars[irr]))
        assert total % 6 == 0
        return total // 6

    return chars, mult


def test_reps3_fusion_against_character_oracle():
    cat = build_rep_s3_fusion()
    chars, mult = _s3_character_decomposition()
    for a in cat.simples:
        for b in cat.simples:
            prod = tuple(x * y for x, y in zip(chars[a], chars[b]))
            for c in cat.simples:
                assert cat.n(cat.index(a), cat.index(b), cat.index(c)) == mult(prod, c)
    # std is self-dual: 1 appears in std x std
    assert cat.n(2, 2, 0) == 1 and cat.dual[2] == 2


def test_validate_builtins():
    for cat in ALL_BUILTINS:
        rep = validate(cat)
        assert rep.ok, (cat.name, rep.failures())


def test_validate_catches_broken_dims():
    fib = build_fibonacci()
    broken = FusionData(name="broken", field=fib.field, simples=fib.simples,
                        dual=fib.dual, fusion=fib.fusion,
                        dims=(fib.field.one(), fib.field.one()))
    rep = validate(broken)
    assert not rep.ok
    assert any(name == "dimension-compatibility" for name, _ in rep.failures())


def test_validate_catches_broken_associativity():
    # 1, a, b with a x a = b but a x b = 1 while b x a = a: (aa)a != a(aa)
    fusion = {
        (0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1,
        (1, 0, 1): 1, (2, 0, 2): 1,
        (1, 1, 2): 1, (1, 2, 0): 1, (2, 1, 1): 1, (2, 2, 1): 1,
    }
    broken = FusionData(name="broken", field=QQ, simples=("1", "a", "b"),
                        dual=(0, 2, 1), fusion=fusion,
                        dims=(QQ.one(), QQ.one(), QQ.one()))
    rep = validate(broken)
    assert any(name == "associativity" for name, _ in rep.failures())


def test_hom_dim_examples():
    z3 = build_vec_zn(3)
    g = "g"
    assert hom_dim(z3, [(g, 1), (g, 1)]) == 0
    assert hom_dim(z3, [(g, 1), (g, 1), (g, 1)]) == 1
    assert hom_dim(z3, [(g, 1), (g, -1)]) == 1
    fib = build_fibonacci()
    assert hom_dim(fib, [("tau", 1)] * 3) == 1
    assert hom_dim(fib, []) == 1
    with pytest.raises(UnknownSimple):
        hom_dim(fib, [("sigma", 1)])


def _brute_force_fib_hom_dim(word_signs):
    # count fusion paths tau x ... x tau -> 1 using tau*tau = 1 + tau
    fib = build_fibonacci()
    states = {0: 1}
    for x, _ in word_signs:
        new = {}
        for a, m in states.items():
            for c in (0, 1):
                n = fib.n(a, x, c)  # tau is self-dual
                if n:
                    new[c] = new.get(c, 0) + m * n
        states = new
    return states.get(0, 0)


def test_fib_hom_dim_against_fusion_tree_count():
    fib = build_fibonacci()
    tau = fib.index("tau")
    for k in range(0, 9):
        word = [("tau", 1)] * k
        brute = _brute_force_fib_hom_dim([(tau, 1)] * k)
        assert hom_dim(fib, word) == brute
    # Fibonacci numbers: dim Hom(1, tau^k) = F_{k-1}
    assert [hom_dim(fib, [("tau", 1)] * k) for k in range(1, 8)] == [0, 1, 1, 2, 3, 5, 8]


def _random_word(cat, rng, length):
    return [(rng.choice(cat.simples), rng.choice([1, -1])) for _ in range(length)]


def test_hom_dim_cyclic_invariance():
    rng = random.Random(42)
    for cat in ALL_BUILTINS:
        for _ in range(200):
            word = _random_word(cat, rng, rng.randint(0, 6))
            d = hom_dim(cat, word)
            if word:
                k = rng.randrange(len(word))
                assert hom_dim(cat, word[k:] + word[:k]) == d


def test_hom_dim_schur_pairs():
    for cat in ALL_BUILTINS:
        for x in cat.simples:
            for y in cat.simples:
                expect = 1 if cat.index(y) == cat.dual[cat.index(x)] else 0
                assert hom_dim(cat, [(x, 1), (y, 1)]) == expect
                assert hom_dim(cat, [(x, 1), (y, -1)]) == (1 if x == y else 0)


def test_hom_dim_decomposition_identity():
    # sum_x dim(x) * dim Hom(x, a x b) = dim(a) dim(b)
    for cat in ALL_BUILTINS:
        for a in range(len(cat.simples)):
            for b in range(len(cat.simples)):
                total = cat.field.zero()
                for x in range(len(cat.simples)):
                    d = cat.hom_dim_word([(x, -1), (a, 1), (b, 1)])
                    total = total + cat.dim(x) * d
                assert total == cat.dim(a) * cat.dim(b)


def test_fibonacci_sixj_matches_tl_oracle():
    fib = build_fibonacci()
    name = {0: fib_oracle.ONE, 1: fib_oracle.TAU}
    for key in itertools.product((0, 1), repeat=6):
        oracle = fib_oracle.tet_network(*(name[i] for i in key))
        assert fib.sixj_value(key) == oracle, key


def test_fibonacci_theta_matches_tl_oracle():
    fib = build_fibonacci()
    name = {0: fib_oracle.ONE, 1: fib_oracle.TAU}
    for a, b, c in itertools.product((0, 1), repeat=3):
        assert fib.theta(a, b, c) == fib_oracle.theta_network(name[a], name[b], name[c])


def test_pointed_sixj_is_flat_indicator():
    z3 = build_vec_zn(3)
    g = 1
    assert z3.sixj_value((0, 0, 0, 0, 0, 0)) == QQ.one()
    # potentials u = (g, 1, 1, 1): opposite-slot convention puts the g's on
    # the edges at vertex 0, i.e. slots 23, 13, 12
    assert z3.sixj_value((0, 0, 0, g, g, g)) == QQ.one()
    assert z3.sixj_value((g, 0, 0, 0, 0, 0)).is_zero()
    # raw keying: table size is |G|^3
    assert len(z3.sixj) == 27


def test_category_json_roundtrip():
    for cat in ALL_BUILTINS:
        data = category_to_json(cat)
        back = category_from_json(data)
        assert back.simples == cat.simples
        assert back.dual == cat.dual
        assert back.fusion == cat.fusion
        assert back.dims == cat.dims
        assert back.sixj == cat.sixj
        assert back.pointed_group == cat.pointed_group


def test_get_category_names():
    assert get_category("vecg:z2").name == "vecg:z2"
    assert get_category("fib").name == "fib"
    with pytest.raises(KeyError):
        get_category("vecg:quaternion")


def test_s3_table_is_a_group():
    tbl = s3_group_table()
    assert len(tbl) == 6
    build_pointed(tbl)  # validates


def test_canonical_key_is_idempotent():
    rng = random.Random(1)
    for _ in range(50):
        key = tuple(rng.randrange(3) for _ in range(6))
        c = canonical_6j_key(key)
        assert canonical_6j_key(c) == c
