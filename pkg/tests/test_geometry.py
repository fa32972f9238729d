"""Geometry unit and property tests: exact polyhedra, FM elimination, regions."""

import random
from fractions import Fraction

import pytest

from schedregion.geometry import (
    ConvexPolyhedron,
    EmptyRegionError,
    Kind,
    MissingAssignmentError,
    ParamVar,
    Region,
    Relation,
    linear,
)

X = ParamVar("x", Kind.C)
Y = ParamVar("y", Kind.C)
Z = ParamVar("z", Kind.C)
W = ParamVar("w", Kind.C)
VARS = [X, Y, Z, W]


def le(coeffs, const):
    return linear(coeffs, const, Relation.LE)


def poly(*constraints):
    return ConvexPolyhedron.of(constraints)


class TestIntersect:
    def test_two_halflines(self):
        a = Region.of_constraints([le({X: 1}, 5)])
        b = Region.of_constraints([le({X: -1}, -3)])
        r = a.intersect(b)
        assert r.contains({X: 3})
        assert r.contains({X: 5})
        assert not r.contains({X: 2})
        assert not r.contains({X: 6})

    def test_union_distributes(self):
        u = Region.of([poly(le({X: 1}, 2)), poly(le({X: -1}, -8))])
        r = u.intersect(Region.of_constraints([le({X: 1}, 9)]))
        assert r.contains({X: 1})
        assert r.contains({X: 8})
        assert r.contains({X: 9})
        assert not r.contains({X: 5})
        assert not r.contains({X: 10})

    def test_candidate_count_is_product_minus_empties(self):
        a = Region.of([poly(le({X: 1}, 1)), poly(le({X: 1}, 2))])
        b = Region.of([poly(le({X: -1}, 0)), poly(le({X: -1}, -5))])
        r = a.intersect(b)
        # {x<=1,x>=5} and {x<=2,x>=5} are pruned
        assert len(r.disjuncts) == 2


class TestEmptiness:
    def test_contradictory_bounds(self):
        assert poly(le({X: 1}, 1), le({X: -1}, -2)).is_empty()

    def test_whole_space(self):
        assert not ConvexPolyhedron(()).is_empty()

    def test_two_var_elimination(self):
        # x+y<=10, x>=4, y>=7 has no solution
        p = poly(le({X: 1, Y: 1}, 10), le({X: -1}, -4), le({Y: -1}, -7))
        assert p.is_empty()

    def test_two_var_feasible(self):
        p = poly(le({X: 1, Y: 1}, 11), le({X: -1}, -4), le({Y: -1}, -7))
        assert not p.is_empty()

    def test_equality_chain(self):
        p = poly(
            linear({X: 1, Y: -1}, 0, Relation.EQ),
            le({Y: 1}, 3),
            le({X: -1}, -4),
        )
        assert p.is_empty()


class TestEliminate:
    def test_transitive_bound(self):
        r = Region.of_constraints([le({X: 1, Y: -1}, 0), le({Y: 1}, 5)])
        out = r.eliminate({Y})
        assert out.contains({X: 5})
        assert not out.contains({X: 6})

    def test_blocking_variable_pattern(self):
        b = ParamVar("i", Kind.B)
        r = Region.of_constraints(
            [le({b: -1, X: 1}, 1), le({b: -1, Y: 1}, 1), le({b: 1, Z: 1}, 20)]
        )
        out = r.eliminate({b})
        # B >= C_j - 1 for two blockers, B + Z <= 20
        assert out.contains({X: 0, Y: 0, Z: 19})
        assert out.contains({X: 5, Y: 3, Z: 16})
        assert not out.contains({X: 5, Y: 3, Z: 17})

    def test_unbounded_side_drops_rows(self):
        r = Region.of_constraints([le({X: 1, Y: 1}, 5)])
        out = r.eliminate({Y})
        assert out.contains({X: 1_000_000})


class TestContains:
    def test_in_and_out(self):
        r = Region.of_constraints([le({X: 1}, 5), le({X: -1}, -3)])
        assert r.contains({X: 4})
        assert not r.contains({X: 6})

    def test_rational_points(self):
        r = Region.of_constraints([le({X: 2}, 5)])
        assert r.contains({X: Fraction(5, 2)})
        assert not r.contains({X: Fraction(51, 20)})

    def test_missing_assignment(self):
        r = Region.of_constraints([le({X: 1, Y: 1}, 5)])
        with pytest.raises(MissingAssignmentError):
            r.contains({X: 1})


class TestVarInterval:
    def test_point(self):
        r = Region.of_constraints([linear({X: 1}, 7, Relation.EQ)])
        iv = r.var_interval(X)
        assert (iv.lower, iv.upper) == (7, 7)
        assert iv.lower_attained and iv.upper_attained

    def test_halfline(self):
        iv = Region.of_constraints([le({X: -1}, 0)]).var_interval(X)
        assert iv.lower == 0 and iv.upper is None
        assert iv.lower_attained and not iv.upper_attained

    def test_union_hull(self):
        r = Region.of(
            [poly(le({X: 1}, 2), le({X: -1}, 0)), poly(le({X: 1}, 9), le({X: -1}, -8))]
        )
        iv = r.var_interval(X)
        assert (iv.lower, iv.upper) == (0, 9)

    def test_empty_region_raises(self):
        with pytest.raises(EmptyRegionError):
            Region.empty().var_interval(X)
        with pytest.raises(EmptyRegionError):
            Region.of([poly(le({X: 1}, 0), le({X: -1}, -1))]).var_interval(X)

    def test_through_other_vars(self):
        # x <= y <= 5, x >= 1: x in [1, 5]
        r = Region.of_constraints([le({X: 1, Y: -1}, 0), le({Y: 1}, 5), le({X: -1}, -1)])
        iv = r.var_interval(X)
        assert (iv.lower, iv.upper) == (1, 5)


class TestNormalize:
    def test_looser_bound_dropped(self):
        p = poly(le({X: 1}, 5), le({X: 1}, 7)).normalize()
        assert p.constraints == poly(le({X: 1}, 5)).constraints

    def test_implied_sum_dropped(self):
        p = poly(le({X: 1}, 5), le({Y: 1}, 3), le({X: 1, Y: 1}, 20)).normalize()
        assert len(p.constraints) == 2

    def test_binding_sum_kept(self):
        p = poly(le({X: 1}, 5), le({Y: 1}, 3), le({X: 1, Y: 1}, 7)).normalize()
        assert len(p.constraints) == 3


def random_polyhedron(rng, nvars=3, nrows=4, bound=8):
    rows = []
    vs = VARS[:nvars]
    for _ in range(rng.randint(1, nrows)):
        coeffs = {v: rng.randint(-2, 2) for v in vs if rng.random() < 0.8}
        rows.append(le(coeffs, rng.randint(-bound, bound)))
    return ConvexPolyhedron.of(rows)


def random_point(rng, nvars=3, bound=8):
    return {v: rng.randint(-bound, bound) for v in VARS[:nvars]}


class TestProperties:
    """Randomized checks; 1000 cases each, fixed seeds."""

    def test_projection_soundness(self):
        rng = random.Random(101)
        for _ in range(1000):
            p = random_polyhedron(rng)
            pt = random_point(rng)
            if not p.evaluate(pt):
                continue
            dropped = rng.choice(VARS[:3])
            proj = p.eliminate({dropped})
            rest = {v: q for v, q in pt.items() if v != dropped}
            assert proj.evaluate(rest)

    def test_intersection_membership_homomorphism(self):
        rng = random.Random(202)
        for _ in range(1000):
            a = Region.of([random_polyhedron(rng) for _ in range(rng.randint(1, 2))])
            b = Region.of([random_polyhedron(rng) for _ in range(rng.randint(1, 2))])
            pt = random_point(rng)
            both = a.intersect(b)
            want = all(
                any(d.evaluate(pt) for d in r.disjuncts) for r in (a, b)
            )
            got = any(d.evaluate(pt) for d in both.disjuncts)
            assert got == want

    def test_normalize_preserves_membership(self):
        rng = random.Random(303)
        for _ in range(1000):
            p = random_polyhedron(rng)
            n = p.normalize()
            pt = random_point(rng)
            assert p.evaluate(pt) == n.evaluate(pt)

    def test_constraint_order_irrelevant(self):
        rng = random.Random(404)
        for _ in range(1000):
            rows = list(random_polyhedron(rng).constraints)
            pt = random_point(rng)
            shuffled = rows[:]
            rng.shuffle(shuffled)
            a = ConvexPolyhedron.of(rows)
            b = ConvexPolyhedron.of(shuffled)
            assert a.constraints == b.constraints  # canonical form
            assert a.is_empty() == b.is_empty()
            assert a.evaluate(pt) == b.evaluate(pt)

    def test_reduce_preserves_membership(self):
        rng = random.Random(505)
        for _ in range(300):
            r = Region.of([random_polyhedron(rng) for _ in range(rng.randint(1, 4))])
            rr = r.reduce()
            for _ in range(5):
                pt = random_point(rng)
                got = any(d.evaluate(pt) for d in rr.disjuncts)
                want = any(d.evaluate(pt) for d in r.disjuncts)
                assert got == want

    def test_sample_point_lies_inside(self):
        rng = random.Random(606)
        for _ in range(500):
            p = random_polyhedron(rng)
            w = p.sample_point()
            if w is None:
                assert p.is_empty()
            else:
                full = {v: w.get(v, Fraction(0)) for v in VARS[:3]}
                assert p.evaluate(full)


class TestSerialization:
    def test_text_format(self):
        from schedregion.geometry import region_to_text

        r = Region.of_constraints([le({X: 1, Y: -2}, 7)])
        text = region_to_text(r)
        assert text == "DISJUNCT 0\n1*C[x] + -2*C[y] <= 7\n"

    def test_rationals_cleared(self):
        c = linear({X: Fraction(1, 2), Y: Fraction(1, 3)}, Fraction(5, 6))
        assert str(c) == "3*C[x] + 2*C[y] <= 5"
