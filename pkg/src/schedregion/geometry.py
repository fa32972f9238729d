"""Exact rational linear arithmetic over named scheduling parameters.

Constraints are stored with cleared denominators (integer coefficients and
constant), so intersection, Fourier-Motzkin elimination, emptiness testing,
redundancy removal and interval extraction are all exact. A ``Region`` is a
finite union of convex polyhedra (disjunction of conjunctions); all values
are immutable and every operation is pure.

Strict inequalities never appear in constructed regions; they are used only
internally to decide entailment (the negation of ``a.x <= b`` is a strict
inequality).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Rational = int | Fraction


class GeometryError(Exception):
    pass


class EmptyRegionError(GeometryError):
    """Raised when a query needs a nonempty region (e.g. var_interval)."""


class MissingAssignmentError(GeometryError):
    """A point does not assign every variable occurring in the region."""


class Kind(str, Enum):
    """Parameter kinds: computation time, deadline, jitter, blocking."""

    C = "C"
    D = "D"
    J = "J"
    B = "B"


@dataclass(frozen=True, order=True)
class ParamVar:
    """Symbolic identity of a free parameter: one task, one kind."""

    task: str
    kind: Kind

    def __str__(self) -> str:
        return f"{self.kind.value}[{self.task}]"


Atom = int | ParamVar  # a parameter that is either fixed or still symbolic


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    LT = "<"  # internal only: negations during entailment tests


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeff * var) relation constant`` with integer data.

    ``coeffs`` is sorted by variable and contains no zero coefficients.
    An empty ``coeffs`` is a ground sentinel (trivially true or false).
    """

    coeffs: tuple[tuple[ParamVar, int], ...]
    constant: int
    relation: Relation = Relation.LE

    def __post_init__(self):
        object.__setattr__(self, "_cmap", dict(self.coeffs))

    def variables(self) -> frozenset[ParamVar]:
        return frozenset(v for v, _ in self.coeffs)

    def coeff_map(self) -> dict[ParamVar, int]:
        return self._cmap

    def evaluate(self, point: Mapping[ParamVar, Rational]) -> bool:
        total = Fraction(0)
        for v, c in self.coeffs:
            if v not in point:
                raise MissingAssignmentError(f"point does not assign {v}")
            total += Fraction(c) * Fraction(point[v])
        if self.relation is Relation.LE:
            return total <= self.constant
        if self.relation is Relation.LT:
            return total < self.constant
        return total == self.constant

    def is_trivially_true(self) -> bool:
        if self.coeffs:
            return False
        if self.relation is Relation.LE:
            return self.constant >= 0
        if self.relation is Relation.LT:
            return self.constant > 0
        return self.constant == 0

    def is_trivially_false(self) -> bool:
        return not self.coeffs and not self.is_trivially_true()

    def __str__(self) -> str:
        if not self.coeffs:
            lhs = "0"
        else:
            lhs = " + ".join(f"{c}*{v}" for v, c in self.coeffs)
        return f"{lhs} {self.relation.value} {self.constant}"


FALSE = LinearConstraint((), -1, Relation.LE)


def linear(
    coeffs: Mapping[ParamVar, Rational],
    constant: Rational,
    relation: Relation = Relation.LE,
) -> LinearConstraint:
    """Build a canonical constraint from rational data (denominators cleared)."""
    items = [(v, Fraction(c)) for v, c in coeffs.items() if Fraction(c) != 0]
    const = Fraction(constant)
    denom = 1
    for _, c in items:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    denom = denom * const.denominator // gcd(denom, const.denominator)
    ints = {v: int(c * denom) for v, c in items}
    iconst = int(const * denom)
    return _canon(ints, iconst, relation)


def _canon(coeffs: dict[ParamVar, int], constant: int, relation: Relation) -> LinearConstraint:
    items = sorted((v, c) for v, c in coeffs.items() if c != 0)
    g = 0
    for _, c in items:
        g = gcd(g, c)
    g = gcd(g, constant)
    if g > 1:
        items = [(v, c // g) for v, c in items]
        constant //= g
    if relation is Relation.EQ and items and items[0][1] < 0:
        items = [(v, -c) for v, c in items]
        constant = -constant
    return LinearConstraint(tuple(items), constant, relation)


class LinExpr:
    """Accumulator for ``sum coeff*atom``; fixed atoms fold into the constant.

    Used by the analysis modules to build constraints out of parameters that
    may be either fixed integers or free variables.
    """

    def __init__(self) -> None:
        self.coeffs: dict[ParamVar, int] = {}
        self.const = 0

    def add(self, atom: Atom, coeff: int = 1) -> "LinExpr":
        if isinstance(atom, ParamVar):
            self.coeffs[atom] = self.coeffs.get(atom, 0) + coeff
        else:
            self.const += coeff * atom
        return self

    def copy(self) -> "LinExpr":
        c = LinExpr()
        c.coeffs = dict(self.coeffs)
        c.const = self.const
        return c

    def le(self, other: "LinExpr") -> LinearConstraint:
        """self <= other."""
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, 0) - c
        return _canon(coeffs, other.const - self.const, Relation.LE)

    def eq(self, other: "LinExpr") -> LinearConstraint:
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, 0) - c
        return _canon(coeffs, other.const - self.const, Relation.EQ)


def expr(*terms: Atom | tuple[Atom, int]) -> LinExpr:
    e = LinExpr()
    for t in terms:
        if isinstance(t, tuple):
            e.add(t[0], t[1])
        else:
            e.add(t)
    return e


# ---------------------------------------------------------------------------
# Row-level machinery (Fourier-Motzkin elimination, emptiness, entailment)
# ---------------------------------------------------------------------------


def _tighten(rows: Iterable[LinearConstraint]) -> list[LinearConstraint] | None:
    """Dedupe rows; keep the tightest bound per coefficient vector.

    Returns None if a ground row is unsatisfiable.
    """
    eqs: dict[tuple, LinearConstraint] = {}
    ineqs: dict[tuple, LinearConstraint] = {}
    for r in rows:
        if not r.coeffs:
            if r.is_trivially_false():
                return None
            continue
        if r.relation is Relation.EQ:
            key = r.coeffs
            prev = eqs.get(key)
            if prev is not None and prev.constant != r.constant:
                return None
            eqs[key] = r
        else:
            key = r.coeffs
            prev = ineqs.get(key)
            if prev is None:
                ineqs[key] = r
            else:
                # smaller constant is tighter; at equal constants LT beats LE
                if r.constant < prev.constant or (
                    r.constant == prev.constant and r.relation is Relation.LT
                ):
                    ineqs[key] = r
    out = list(eqs.values()) + list(ineqs.values())
    # an equality contradicting an inequality on the same vector
    for key, e in eqs.items():
        r = ineqs.get(key)
        if r is not None:
            if e.constant > r.constant or (
                e.constant == r.constant and r.relation is Relation.LT
            ):
                return None
        flipped = tuple((v, -c) for v, c in key)
        r = ineqs.get(flipped)
        if r is not None:
            if -e.constant > r.constant or (
                -e.constant == r.constant and r.relation is Relation.LT
            ):
                return None
    return out


def _pivot_eq(rows: list[LinearConstraint], v: ParamVar) -> list[LinearConstraint] | None:
    """Substitute an equality involving v into all other rows, dropping v."""
    pivot = None
    for r in rows:
        if r.relation is Relation.EQ and any(var == v for var, _ in r.coeffs):
            pivot = r
            break
    assert pivot is not None
    a = pivot.coeff_map()[v]
    if a < 0:
        pivot = _canon({var: -c for var, c in pivot.coeffs}, -pivot.constant, Relation.EQ)
        a = -a
    pcoef = pivot.coeff_map()
    out = []
    for r in rows:
        if r is pivot:
            continue
        b = r.coeff_map().get(v, 0)
        if b == 0:
            out.append(r)
            continue
        # a > 0, so multiplying the (in)equality by a preserves direction
        coeffs = {var: a * c for var, c in r.coeffs}
        const = a * r.constant
        for var, c in pcoef.items():
            coeffs[var] = coeffs.get(var, 0) - b * c
        const -= b * pivot.constant
        out.append(_canon(coeffs, const, r.relation))
    return _tighten(out)


def _eliminate_one(rows: list[LinearConstraint], v: ParamVar) -> list[LinearConstraint] | None:
    """Project v away from a conjunction of rows; None means empty."""
    if any(r.relation is Relation.EQ and v in dict(r.coeffs) for r in rows):
        return _pivot_eq(rows, v)
    uppers, lowers, rest = [], [], []
    for r in rows:
        c = r.coeff_map().get(v, 0)
        if c > 0:
            uppers.append(r)
        elif c < 0:
            lowers.append(r)
        else:
            rest.append(r)
    if not uppers or not lowers:
        # v is unbounded on one side: rows mentioning v impose nothing
        return _tighten(rest)
    combos: list[LinearConstraint] = []
    for up in uppers:
        a = up.coeff_map()[v]
        for lo in lowers:
            c = -lo.coeff_map()[v]
            coeffs = {var: c * k for var, k in up.coeffs}
            for var, k in lo.coeffs:
                coeffs[var] = coeffs.get(var, 0) + a * k
            const = c * up.constant + a * lo.constant
            rel = (
                Relation.LT
                if Relation.LT in (up.relation, lo.relation)
                else Relation.LE
            )
            combos.append(_canon(coeffs, const, rel))
    return _tighten(rest + combos)


def _elimination_order(rows: Sequence[LinearConstraint], vars_: set[ParamVar]) -> ParamVar | None:
    """Next variable to eliminate: EQ-pivotable first, else min uppers*lowers."""
    if not vars_:
        return None
    ups: dict[ParamVar, int] = {}
    los: dict[ParamVar, int] = {}
    for r in rows:
        is_eq = r.relation is Relation.EQ
        for var, c in r.coeffs:
            if var not in vars_:
                continue
            if is_eq:
                return var
            if c > 0:
                ups[var] = ups.get(var, 0) + 1
            else:
                los[var] = los.get(var, 0) + 1
    best, best_cost = None, None
    for v in sorted(vars_):
        cost = ups.get(v, 0) * los.get(v, 0)
        if best_cost is None or cost < best_cost:
            best, best_cost = v, cost
    return best


def _project(
    rows: Iterable[LinearConstraint], drop: Iterable[ParamVar]
) -> list[LinearConstraint] | None:
    rows2 = _tighten(rows)
    if rows2 is None:
        return None
    remaining = set(drop) & set().union(*(r.variables() for r in rows2), frozenset())
    while remaining:
        v = _elimination_order(rows2, remaining)
        rows2 = _eliminate_one(rows2, v)
        if rows2 is None:
            return None
        remaining = set(drop) & set().union(*(r.variables() for r in rows2), frozenset())
    return rows2


def _quick_infeasible(rows: Sequence[LinearConstraint]) -> bool:
    """Cheap sound test: ground contradictions and antiparallel row pairs
    (a.x <= b together with -a.x <= c where b + c < 0). Not complete."""
    best: dict[tuple, tuple[int, bool]] = {}  # coeffs -> (min const, strict)

    def _note(coeffs, const, strict):
        prev = best.get(coeffs)
        if prev is None or const < prev[0] or (const == prev[0] and strict):
            best[coeffs] = (const, strict)

    for r in rows:
        if not r.coeffs:
            if r.is_trivially_false():
                return True
            continue
        if r.relation is Relation.EQ:
            _note(r.coeffs, r.constant, False)
            _note(tuple((v, -c) for v, c in r.coeffs), -r.constant, False)
        else:
            _note(r.coeffs, r.constant, r.relation is Relation.LT)
    for coeffs, (const, strict) in best.items():
        flipped = tuple((v, -c) for v, c in coeffs)
        other = best.get(flipped)
        if other is None:
            continue
        total = const + other[0]
        if total < 0 or (total == 0 and (strict or other[1])):
            return True
    return False


def _rows_empty(rows: Iterable[LinearConstraint]) -> bool:
    rows = list(rows)
    if _quick_infeasible(rows):
        return True
    allvars: set[ParamVar] = set()
    for r in rows:
        allvars |= r.variables()
    return _project(rows, allvars) is None


def _rows_witness(rows: Sequence[LinearConstraint]) -> dict[ParamVar, Fraction] | None:
    """A rational point satisfying the rows, or None if there is none.

    Runs Fourier-Motzkin to ground recording the elimination stack, then
    back-substitutes choosing a value inside each variable's bounds.
    """
    rows2 = _tighten(rows)
    if rows2 is None:
        return None
    stack: list[tuple[ParamVar, list[LinearConstraint]]] = []
    # every original variable gets a stack entry, even ones whose rows are
    # dropped as one-sided: back-substitution needs a value for each
    remaining: set[ParamVar] = set()
    for r in rows2:
        remaining |= r.variables()
    while remaining:
        present: set[ParamVar] = set()
        for r in rows2:
            present |= r.variables()
        candidates = remaining & present
        if candidates:
            v = _elimination_order(rows2, candidates)
        else:
            v = sorted(remaining)[0]
        stack.append((v, rows2))
        rows2 = _eliminate_one(rows2, v)
        if rows2 is None:
            return None
        remaining.discard(v)
    assign: dict[ParamVar, Fraction] = {}
    for v, vrows in reversed(stack):
        lo: Fraction | None = None
        hi: Fraction | None = None
        lo_strict = hi_strict = False
        for r in vrows:
            c = r.coeff_map().get(v, 0)
            if c == 0:
                continue
            rest = sum(
                (Fraction(k) * assign[var] for var, k in r.coeffs if var != v),
                Fraction(0),
            )
            bound = (Fraction(r.constant) - rest) / c
            if r.relation is Relation.EQ:
                if (lo is None or bound >= lo) and (hi is None or bound <= hi):
                    lo = hi = bound
                    lo_strict = hi_strict = False
                else:
                    return None
            elif c > 0:
                if hi is None or bound < hi:
                    hi, hi_strict = bound, r.relation is Relation.LT
                elif bound == hi and r.relation is Relation.LT:
                    hi_strict = True
            else:
                if lo is None or bound > lo:
                    lo, lo_strict = bound, r.relation is Relation.LT
                elif bound == lo and r.relation is Relation.LT:
                    lo_strict = True
        if lo is None and hi is None:
            value = Fraction(0)
        elif lo is None:
            value = hi - 1 if hi_strict else hi
        elif hi is None:
            value = lo + 1 if lo_strict else lo
        elif lo < hi:
            value = (lo + hi) / 2
        elif lo == hi and not lo_strict and not hi_strict:
            value = lo
        else:
            return None
        assign[v] = value
    return assign


def _negations(c: LinearConstraint) -> list[LinearConstraint]:
    """Constraints whose disjunction is the negation of c."""
    neg = {v: -k for v, k in c.coeffs}
    if c.relation is Relation.LE:
        return [_canon(neg, -c.constant, Relation.LT)]
    if c.relation is Relation.LT:
        return [_canon(neg, -c.constant, Relation.LE)]
    return [
        _canon(dict(c.coeffs), c.constant, Relation.LT),
        _canon(neg, -c.constant, Relation.LT),
    ]


def _rows_entail(rows: Sequence[LinearConstraint], c: LinearConstraint) -> bool:
    return all(_rows_empty(list(rows) + [n]) for n in _negations(c))


def _witness_against(
    rows: Sequence[LinearConstraint], c: LinearConstraint
) -> tuple[bool, dict[ParamVar, Fraction] | None]:
    """(entailed, counterexample): a point satisfying rows but violating c
    when one exists. The counterexample may be None even when not entailed
    (the witness search has a defensive bail-out)."""
    entailed = True
    for n in _negations(c):
        cand = list(rows) + [n]
        if _quick_infeasible(cand):
            continue
        w = _rows_witness(cand)
        if w is not None:
            return False, w
        # defensive path of the witness search cannot certify emptiness
        if not _rows_empty(cand):
            entailed = False
    return entailed, None


# ---------------------------------------------------------------------------
# Convex polyhedra and regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexPolyhedron:
    """Conjunction of linear constraints; empty constraint list = whole space."""

    constraints: tuple[LinearConstraint, ...]

    @staticmethod
    def of(constraints: Iterable[LinearConstraint]) -> "ConvexPolyhedron":
        seen, out = set(), []
        for c in constraints:
            if c.is_trivially_true():
                continue
            if c not in seen:
                seen.add(c)
                out.append(c)
        return ConvexPolyhedron(tuple(sorted(out, key=_constraint_key)))

    def variables(self) -> frozenset[ParamVar]:
        cached = getattr(self, "_vars", None)
        if cached is None:
            out: set[ParamVar] = set()
            for c in self.constraints:
                out |= c.variables()
            cached = frozenset(out)
            object.__setattr__(self, "_vars", cached)
        return cached

    def evaluate(self, point: Mapping[ParamVar, Rational]) -> bool:
        return all(c.evaluate(point) for c in self.constraints)

    def is_empty(self) -> bool:
        cached = getattr(self, "_empty", None)
        if cached is None:
            cached = _rows_empty(self.constraints)
            object.__setattr__(self, "_empty", cached)
        return cached

    def sample_point(self) -> dict[ParamVar, Fraction] | None:
        """A cached rational point inside the polyhedron, if one is known."""
        cached = getattr(self, "_sample", False)
        if cached is False:
            cached = _rows_witness(self.constraints)
            object.__setattr__(self, "_sample", cached)
            if cached is not None:
                object.__setattr__(self, "_empty", False)
        return cached

    def known_points(self) -> list[dict[ParamVar, Fraction]]:
        """Sample point plus counterexamples collected by failed subsumption
        tests; all lie inside the polyhedron."""
        out = []
        s = self.sample_point()
        if s is not None:
            out.append(s)
        out.extend(getattr(self, "_extra_points", ()))
        return out

    def remember_point(self, point: dict[ParamVar, Fraction], cap: int = 16) -> None:
        extra = getattr(self, "_extra_points", None)
        if extra is None:
            extra = []
            object.__setattr__(self, "_extra_points", extra)
        if len(extra) < cap:
            extra.append(point)

    def intersect(self, other: "ConvexPolyhedron") -> "ConvexPolyhedron":
        return ConvexPolyhedron.of(self.constraints + other.constraints)

    def substitute(self, assignment: Mapping[ParamVar, Rational]) -> "ConvexPolyhedron":
        out = []
        for c in self.constraints:
            coeffs: dict[ParamVar, Fraction] = {}
            const = Fraction(c.constant)
            for v, k in c.coeffs:
                if v in assignment:
                    const -= Fraction(k) * Fraction(assignment[v])
                else:
                    coeffs[v] = Fraction(k)
            sub = linear(coeffs, const, c.relation)
            if sub.is_trivially_false():
                return EMPTY_POLY
            out.append(sub)
        return ConvexPolyhedron.of(out)

    def eliminate(self, drop: Iterable[ParamVar]) -> "ConvexPolyhedron":
        rows = _project(self.constraints, drop)
        if rows is None:
            return ConvexPolyhedron((FALSE,))
        return ConvexPolyhedron.of(rows)

    def entails(self, c: LinearConstraint) -> bool:
        return _rows_entail(self.constraints, c)

    def entails_or_counterexample(self, c: LinearConstraint) -> bool:
        """entails(c), caching a violating interior point on failure."""
        entailed, w = _witness_against(self.constraints, c)
        if w is not None:
            self.remember_point(w)
        return entailed

    def normalize(self) -> "ConvexPolyhedron":
        """Drop constraints implied by the rest (exact negation-feasibility test)."""
        rows = _tighten(self.constraints)
        if rows is None:
            return ConvexPolyhedron((FALSE,))
        # try to drop complex rows first so simple bounds survive as the basis
        order = sorted(rows, key=lambda c: (-len(c.coeffs), _constraint_key(c)))
        kept = list(rows)
        for c in order:
            others = [k for k in kept if k is not c]
            if _rows_entail(others, c):
                kept = others
        return ConvexPolyhedron.of(kept)

    def subsumes(self, other: "ConvexPolyhedron") -> bool:
        """True if other is contained in self (exact)."""
        return all(_rows_entail(other.constraints, c) for c in self.constraints)

    def subsumes_syntactic(self, other: "ConvexPolyhedron") -> bool:
        """Cheap sufficient containment test: every constraint of self is
        dominated by one of other with the same coefficient vector."""
        by_key: dict[tuple, LinearConstraint] = {c.coeffs: c for c in other.constraints}
        for c in self.constraints:
            o = by_key.get(c.coeffs)
            if o is None:
                return False
            if c.relation is Relation.EQ:
                if o.relation is not Relation.EQ or o.constant != c.constant:
                    return False
            else:
                if o.relation is Relation.EQ:
                    if o.constant > c.constant:
                        return False
                elif o.constant > c.constant:
                    return False
        return True

    def __str__(self) -> str:
        return "{" + ", ".join(str(c) for c in self.constraints) + "}"


def _constraint_key(c: LinearConstraint):
    return (
        tuple((v.task, v.kind.value, k) for v, k in c.coeffs),
        c.constant,
        c.relation.value,
    )


EMPTY_POLY = ConvexPolyhedron((FALSE,))
WHOLE_SPACE = ConvexPolyhedron(())


@dataclass(frozen=True)
class Interval:
    """Exact hull of a variable over a region; None endpoint = unbounded."""

    lower: Fraction | None
    upper: Fraction | None
    lower_attained: bool
    upper_attained: bool


def _absorbs(a: ConvexPolyhedron, b: ConvexPolyhedron, exact: bool) -> bool:
    """Does a contain b? Witness-point prefilters, then the exact test."""
    if a.subsumes_syntactic(b):
        return True
    if not exact:
        return False
    # a constraint of a over a variable b never mentions cannot hold on all of b
    if not a.variables() <= b.variables():
        return False
    for w in b.known_points():
        try:
            if not a.evaluate(w):
                return False
        except MissingAssignmentError:
            continue
    # exact entailment per constraint; failures enrich b's point cache so
    # later pairs reject cheaply
    return all(b.entails_or_counterexample(c) for c in a.constraints)


def reduce_polyhedra(
    polys: Sequence[ConvexPolyhedron], full_limit: int = 2000
) -> list[int]:
    """Indices of disjuncts that survive emptiness + subsumption pruning.

    Pairwise exact subsumption is applied only when the candidate count is at
    most ``full_limit``; above that only the syntactic test runs. A cached
    witness point per disjunct rejects almost every non-subsuming pair before
    any exact entailment test runs.
    """
    live = [i for i, p in enumerate(polys) if not p.is_empty()]
    seen: dict[tuple, int] = {}
    deduped = []
    for i in live:
        key = polys[i].constraints
        if key not in seen:
            seen[key] = i
            deduped.append(i)
    live = deduped
    exact = len(live) <= full_limit
    kept: list[int] = []
    for i in live:
        p = polys[i]
        absorbed = False
        for j in kept:
            if _absorbs(polys[j], p, exact):
                absorbed = True
                break
        if absorbed:
            continue
        kept = [j for j in kept if not _absorbs(p, polys[j], exact)]
        kept.append(i)
    return kept


@dataclass(frozen=True)
class Region:
    """Finite union of convex polyhedra. Empty disjunct list = empty region."""

    disjuncts: tuple[ConvexPolyhedron, ...]

    @staticmethod
    def of(disjuncts: Iterable[ConvexPolyhedron]) -> "Region":
        return Region(tuple(disjuncts))

    @staticmethod
    def whole() -> "Region":
        return Region((WHOLE_SPACE,))

    @staticmethod
    def empty() -> "Region":
        return Region(())

    @staticmethod
    def of_constraints(constraints: Iterable[LinearConstraint]) -> "Region":
        return Region((ConvexPolyhedron.of(constraints),))

    def variables(self) -> frozenset[ParamVar]:
        out: set[ParamVar] = set()
        for d in self.disjuncts:
            out |= d.variables()
        return frozenset(out)

    def is_empty(self) -> bool:
        return all(d.is_empty() for d in self.disjuncts)

    def contains(self, point: Mapping[ParamVar, Rational]) -> bool:
        missing = self.variables() - set(point)
        if missing:
            raise MissingAssignmentError(
                "point does not assign: " + ", ".join(str(v) for v in sorted(missing))
            )
        return any(d.evaluate(point) for d in self.disjuncts)

    def intersect(self, other: "Region") -> "Region":
        out = []
        for a, b in itertools.product(self.disjuncts, other.disjuncts):
            cand = a.intersect(b)
            if not cand.is_empty():
                out.append(cand)
        return Region(tuple(out))

    def union(self, other: "Region") -> "Region":
        return Region(self.disjuncts + other.disjuncts)

    def substitute(self, assignment: Mapping[ParamVar, Rational]) -> "Region":
        out = []
        for d in self.disjuncts:
            s = d.substitute(assignment)
            if not s.is_empty():
                out.append(s)
        return Region(tuple(out))

    def eliminate(self, drop: Iterable[ParamVar]) -> "Region":
        drop = set(drop)
        out = []
        for d in self.disjuncts:
            e = d.eliminate(drop)
            if not e.is_empty():
                out.append(e)
        return Region(tuple(out))

    def normalize(self) -> "Region":
        out = []
        for d in self.disjuncts:
            n = d.normalize()
            if not n.is_empty():
                out.append(n)
        keep = reduce_polyhedra(out)
        return Region(tuple(out[i] for i in keep))

    def reduce(self, full_limit: int = 300) -> "Region":
        keep = reduce_polyhedra(self.disjuncts, full_limit)
        return Region(tuple(self.disjuncts[i] for i in keep))

    def var_interval(self, v: ParamVar) -> Interval:
        lo: Fraction | None = None
        hi: Fraction | None = None
        lo_seen = hi_seen = False
        lo_unbounded = hi_unbounded = False
        nonempty = False
        for d in self.disjuncts:
            rows = _project(d.constraints, d.variables() - {v})
            if rows is None:
                continue
            d_lo: Fraction | None = None
            d_hi: Fraction | None = None
            for r in rows:
                cm = r.coeff_map()
                a = cm.get(v, 0)
                if a == 0:
                    continue
                bound = Fraction(r.constant, a)
                if r.relation is Relation.EQ:
                    d_lo = bound if d_lo is None else max(d_lo, bound)
                    d_hi = bound if d_hi is None else min(d_hi, bound)
                elif a > 0:
                    d_hi = bound if d_hi is None else min(d_hi, bound)
                else:
                    d_lo = bound if d_lo is None else max(d_lo, bound)
            if d_lo is not None and d_hi is not None and d_lo > d_hi:
                continue  # projected interval is empty
            nonempty = True
            if d_lo is None:
                lo_unbounded = True
            elif lo is None or d_lo < lo:
                lo, lo_seen = d_lo, True
            if d_hi is None:
                hi_unbounded = True
            elif hi is None or d_hi > hi:
                hi, hi_seen = d_hi, True
        if not nonempty:
            raise EmptyRegionError(f"region is empty; {v} has no interval")
        if lo_unbounded:
            lo, lo_seen = None, False
        if hi_unbounded:
            hi, hi_seen = None, False
        return Interval(lo, hi, lo_seen, hi_seen)

    def __str__(self) -> str:
        return " ∪ ".join(str(d) for d in self.disjuncts) if self.disjuncts else "∅"


# ---------------------------------------------------------------------------
# Spec-surface convenience functions
# ---------------------------------------------------------------------------


def intersect(a: Region, b: Region) -> Region:
    return a.intersect(b)


def is_empty(p: ConvexPolyhedron) -> bool:
    return p.is_empty()


def eliminate(r: Region, vars_: Iterable[ParamVar]) -> Region:
    return r.eliminate(vars_)


def contains(r: Region, point: Mapping[ParamVar, Rational]) -> bool:
    return r.contains(point)


def var_interval(r: Region, v: ParamVar) -> Interval:
    return r.var_interval(v)


def normalize(p: ConvexPolyhedron) -> ConvexPolyhedron:
    return p.normalize()


# ---------------------------------------------------------------------------
# Serialization of regions (text and structured forms)
# ---------------------------------------------------------------------------


def region_to_text(region: Region) -> str:
    lines = []
    for k, d in enumerate(region.disjuncts):
        lines.append(f"DISJUNCT {k}")
        for c in d.constraints:
            lines.append(str(c))
    if not region.disjuncts:
        lines.append("EMPTY")
    return "\n".join(lines) + "\n"


def region_to_dict(region: Region) -> dict:
    return {
        "disjuncts": [
            {
                "constraints": [
                    {
                        "terms": {str(v): c for v, c in con.coeffs},
                        "constant": con.constant,
                        "relation": con.relation.value,
                    }
                    for con in d.constraints
                ]
            }
            for d in region.disjuncts
        ]
    }
