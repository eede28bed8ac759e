"""Exact geometry of the triangle edge-length cone and its S3 symmetry.

Edge-length convention, fixed once for the whole package: a labeled
triangle with vertices A, B, C is stored as the triple (x, y, z) with

    x = d(A, B),   y = d(A, C),   z = d(B, C).

The open cone M is the set of triples satisfying the three strict
triangle inequalities with positive entries; its boundary (degenerate
segments) is rejected by the ``TriangleLengths`` constructor.  All
arithmetic is over ``fractions.Fraction``; floats are forbidden in this
module and everything built on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class NotInM(ValueError):
    """Triple violates a triangle inequality or positivity."""


class NotIsosceles(ValueError):
    """Operation needs a repeated edge length."""


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floats are not accepted; use Fraction or 'p/q' strings")
    return Fraction(v)


# The six vertex-label permutations, in the package's canonical order.
# PERM_ACTION[g] gives the position table of the induced action on
# length triples: act(g, t)[i] = t[PERM_ACTION[g][i]].  The three
# transpositions are pinned by the edge-length convention above
# (swapping A and B fixes x = d(A,B) and exchanges y = d(A,C) with
# z = d(B,C), and so on); the 3-cycles follow by composition.
PERMS = ("e", "(AB)", "(AC)", "(BC)", "(ABC)", "(ACB)")

PERM_ACTION = {
    "e": (0, 1, 2),
    "(AB)": (0, 2, 1),
    "(AC)": (2, 1, 0),
    "(BC)": (1, 0, 2),
    "(ABC)": (1, 2, 0),
    "(ACB)": (2, 0, 1),
}

TRANSPOSITIONS = ("(AB)", "(AC)", "(BC)")


def act_tuple(g: str, t):
    """Apply the vertex permutation g to a raw length triple."""
    p = PERM_ACTION[g]
    return (t[p[0]], t[p[1]], t[p[2]])


def _build_tables():
    compose = {}
    inverse = {}
    probe = (0, 1, 2)
    by_result = {act_tuple(k, probe): k for k in PERMS}
    for g in PERMS:
        for h in PERMS:
            compose[(g, h)] = by_result[act_tuple(g, act_tuple(h, probe))]
    for g in PERMS:
        inverse[g] = next(h for h in PERMS if compose[(g, h)] == "e")
    return compose, inverse


_COMPOSE, _INVERSE = _build_tables()


def compose(g: str, h: str) -> str:
    """g after h: act(compose(g, h), t) == act(g, act(h, t))."""
    return _COMPOSE[(g, h)]


def inverse(g: str) -> str:
    return _INVERSE[g]


def perm_order(g: str) -> int:
    n, acc = 1, g
    while acc != "e":
        acc = compose(g, acc)
        n += 1
    return n


def in_M(t) -> bool:
    """Strict triangle inequalities and positivity for a raw triple."""
    x, y, z = (_frac(v) for v in t)
    return x > 0 and y > 0 and z > 0 and x + y > z and x + z > y and y + z > x


@dataclass(frozen=True, order=True)
class TriangleLengths:
    """A point of the open cone M; the constructor rejects the boundary."""

    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _frac(self.x))
        object.__setattr__(self, "y", _frac(self.y))
        object.__setattr__(self, "z", _frac(self.z))
        if not in_M((self.x, self.y, self.z)):
            raise NotInM(f"({self.x}, {self.y}, {self.z}) is not an interior triangle triple")

    def astuple(self):
        return (self.x, self.y, self.z)

    def __repr__(self):
        return f"TriangleLengths({self.x}, {self.y}, {self.z})"


@dataclass(frozen=True, order=True)
class NPoint:
    """A sorted triple 0 < x <= y <= z with x + y > z: a point of N."""

    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _frac(self.x))
        object.__setattr__(self, "y", _frac(self.y))
        object.__setattr__(self, "z", _frac(self.z))
        if not (0 < self.x <= self.y <= self.z and self.x + self.y > self.z):
            raise NotInM(f"({self.x}, {self.y}, {self.z}) is not a sorted interior triple")

    def astuple(self):
        return (self.x, self.y, self.z)


def lengths(x, y, z) -> TriangleLengths:
    return TriangleLengths(_frac(x), _frac(y), _frac(z))


def act(g: str, t: TriangleLengths) -> TriangleLengths:
    """Left action of S3 on M by vertex relabeling: act(g∘h) = act(g)∘act(h)."""
    return TriangleLengths(*act_tuple(g, t.astuple()))


def to_N(t: TriangleLengths) -> NPoint:
    """The S3-orbit representative of t: coordinates in ascending order."""
    return NPoint(*sorted(t.astuple()))


def sort_tuple(t):
    return tuple(sorted(t))


def stabilizer(t: TriangleLengths) -> tuple[str, ...]:
    return tuple(g for g in PERMS if act(g, t) == t)


def orbit(t: TriangleLengths) -> tuple[TriangleLengths, ...]:
    return tuple(sorted({act(g, t) for g in PERMS}))


def triangle_type(t: TriangleLengths) -> str:
    n = len(stabilizer(t))
    if n == 6:
        return "equilateral"
    if n == 2:
        return "isosceles"
    return "scalene"


def in_N_prime(t) -> bool:
    """Strictly sorted after reordering: the scalene region admits one."""
    if not in_M(t):
        return False
    a, b, c = sorted(_frac(v) for v in t)
    return a < b < c


def normalize_perimeter(t: TriangleLengths) -> TriangleLengths:
    """Scale to the perimeter-2 slice; invariant of the similarity class."""
    s = t.x + t.y + t.z
    return TriangleLengths(2 * t.x / s, 2 * t.y / s, 2 * t.z / s)


@dataclass(frozen=True)
class SqrtFrac:
    """The positive square root of a positive rational, kept symbolic."""

    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radicand", _frac(self.radicand))
        if self.radicand <= 0:
            raise ValueError("radicand must be positive")

    @property
    def square(self) -> Fraction:
        return self.radicand

    def __repr__(self):
        return f"sqrt({self.radicand})"


def realize_vertices(t: TriangleLengths):
    """Plant the labeled triangle in the plane with A at the origin.

    A = (0,0), B = (x,0) and C in the open upper half plane; the three
    pairwise distances reproduce (x, y, z) exactly.  C's ordinate is the
    exact square root of a rational, so all *squared* distances stay in Q.
    """
    x, y, z = t.astuple()
    cx = (x * x + y * y - z * z) / (2 * x)
    r = y * y - cx * cx
    # r = (Heron expression)/x^2 > 0 exactly because t is interior to M.
    return ((Fraction(0), Fraction(0)), (x, Fraction(0)), (cx, SqrtFrac(r)))


def squared_distance(p, q) -> Fraction:
    """Squared distance between realize_vertices-style points."""

    def coord_diff_sq(a, b):
        if isinstance(a, SqrtFrac) or isinstance(b, SqrtFrac):
            ar = a.square if isinstance(a, SqrtFrac) else None
            br = b.square if isinstance(b, SqrtFrac) else None
            if ar is not None and br is not None:
                if ar != br:
                    raise ValueError("cannot subtract distinct surds exactly")
                return Fraction(0)
            if ar is not None and b == 0:
                return ar
            if br is not None and a == 0:
                return br
            raise ValueError("mixed surd/rational difference is irrational")
        return (_frac(a) - _frac(b)) ** 2

    return coord_diff_sq(p[0], q[0]) + coord_diff_sq(p[1], q[1])


def isosceles_coordinate(t: TriangleLengths) -> Fraction:
    """Cosine of the apex angle between the two equal legs.

    A strictly decreasing rational chart of the apex-angle interval
    (0, pi): base -> 0 gives values near 1, base -> 2*leg gives values
    near -1, and the equilateral triangle sits at 1/2.
    """
    x, y, z = t.astuple()
    if x == y:
        leg, base = x, z
    elif y == z:
        leg, base = y, x
    elif x == z:
        leg, base = x, y
    else:
        raise NotIsosceles(f"({x}, {y}, {z}) has three distinct edge lengths")
    return (2 * leg * leg - base * base) / (2 * leg * leg)


def parse_lengths(sx: str, sy: str, sz: str) -> TriangleLengths:
    """Parse 'p/q' or integer strings; floats are rejected."""
    return TriangleLengths(Fraction(sx), Fraction(sy), Fraction(sz))


def format_lengths(t) -> list[str]:
    tup = t.astuple() if hasattr(t, "astuple") else t
    return [str(Fraction(v)) for v in tup]
