"""Finite matrix quotients of symbolic elements and entry signatures.

Compressing a symbolic element to a finite subset of points yields a
square matrix indexed by the subset.  A function coefficient lands on
the diagonal; a colour generator lands as a matrix of free abstract
generators, one per edge of the subset's transition graph, with zero
columns wherever the map leaves the subset.  Matrix entries are
noncommutative polynomials in these edge generators, so products of
compressed elements track exactly which edge words survive.

The `entry signature` of a subset is the multiset of in-degrees per
(colour, target vertex) of its transition graph.  Equal signatures are
necessary for the compressions of two systems to correspond under any
partition-style matching of points, which is what makes the signature a
sound pruning filter for the conjugacy search and a cheap separating
invariant in its own right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .dynsys import FiniteSystem, SubSystem, colored_graph, restrict
from .scalars import ONE, ZERO, RationalComplex


class EdgeGenerator(NamedTuple):
    """One abstract generator per defined entry (x, colour) -> y."""

    source: int
    target: int
    colour: int


EdgeWord = tuple[EdgeGenerator, ...]


@dataclass(frozen=True)
class FreeEdgePoly:
    """Finitely supported map from edge words to exact scalars."""

    terms: dict[EdgeWord, RationalComplex]

    @staticmethod
    def make(terms: dict[EdgeWord, RationalComplex]) -> "FreeEdgePoly":
        return FreeEdgePoly({w: c for w, c in terms.items() if not c.is_zero()})

    @staticmethod
    def zero() -> "FreeEdgePoly":
        return FreeEdgePoly({})

    @staticmethod
    def scalar(value: RationalComplex) -> "FreeEdgePoly":
        return FreeEdgePoly.make({(): value})

    @staticmethod
    def generator(edge: EdgeGenerator) -> "FreeEdgePoly":
        return FreeEdgePoly({(edge,): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FreeEdgePoly") -> "FreeEdgePoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return FreeEdgePoly.make(out)

    def __mul__(self, other: "FreeEdgePoly") -> "FreeEdgePoly":
        out: dict[EdgeWord, RationalComplex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, ZERO) + c1 * c2
        return FreeEdgePoly.make(out)

    def scale(self, value: RationalComplex) -> "FreeEdgePoly":
        return FreeEdgePoly.make({w: c * value for w, c in self.terms.items()})


@dataclass(frozen=True)
class QuotientMatrix:
    """Square matrix of edge polynomials over the points of a subset.

    ``entries[yi][xi]`` is the (points[yi], points[xi]) entry, i.e. rows
    are targets and columns are sources.
    """

    points: tuple[int, ...]
    entries: tuple[tuple[FreeEdgePoly, ...], ...]

    @staticmethod
    def zero(points: tuple[int, ...]) -> "QuotientMatrix":
        n = len(points)
        return QuotientMatrix(
            points, tuple(tuple(FreeEdgePoly.zero() for _ in range(n)) for _ in range(n))
        )

    @staticmethod
    def diagonal(points: tuple[int, ...], values: Iterable[RationalComplex]) -> "QuotientMatrix":
        vals = list(values)
        n = len(points)
        rows = []
        for yi in range(n):
            rows.append(
                tuple(
                    FreeEdgePoly.scalar(vals[yi]) if yi == xi else FreeEdgePoly.zero()
                    for xi in range(n)
                )
            )
        return QuotientMatrix(points, tuple(rows))

    def entry(self, target: int, source: int) -> FreeEdgePoly:
        return self.entries[self.points.index(target)][self.points.index(source)]

    def __add__(self, other: "QuotientMatrix") -> "QuotientMatrix":
        self._check(other)
        n = len(self.points)
        return QuotientMatrix(
            self.points,
            tuple(
                tuple(self.entries[y][x] + other.entries[y][x] for x in range(n))
                for y in range(n)
            ),
        )

    def __matmul__(self, other: "QuotientMatrix") -> "QuotientMatrix":
        self._check(other)
        n = len(self.points)
        rows = []
        for y in range(n):
            row = []
            for x in range(n):
                acc = FreeEdgePoly.zero()
                for z in range(n):
                    if self.entries[y][z].is_zero() or other.entries[z][x].is_zero():
                        continue
                    acc = acc + self.entries[y][z] * other.entries[z][x]
                row.append(acc)
            rows.append(tuple(row))
        return QuotientMatrix(self.points, tuple(rows))

    def _check(self, other: "QuotientMatrix") -> None:
        if self.points != other.points:
            raise ValueError("matrices over different point sets")

    def column_is_zero(self, source: int) -> bool:
        xi = self.points.index(source)
        return all(row[xi].is_zero() for row in self.entries)


def generator_matrix(sub: SubSystem, colour: int) -> QuotientMatrix:
    """Image of the colour generator: one edge generator per defined entry."""
    if not (0 <= colour < sub.arity):
        raise ValueError(f"colour {colour} outside 0..{sub.arity - 1}")
    n = len(sub.points)
    rows = [[FreeEdgePoly.zero() for _ in range(n)] for _ in range(n)]
    for xi, x in enumerate(sub.points):
        y = sub.partial_tables[colour][xi]
        if y is not None:
            yi = sub.points.index(y)
            rows[yi][xi] = FreeEdgePoly.generator(EdgeGenerator(x, y, colour))
    return QuotientMatrix(sub.points, tuple(tuple(row) for row in rows))


def function_matrix(sub: SubSystem, values: Iterable[RationalComplex]) -> QuotientMatrix:
    """Image of a function coefficient: its values on the subset, diagonally."""
    vals = list(values)
    return QuotientMatrix.diagonal(sub.points, (vals[x] for x in sub.points))


def quotient_map(sub: SubSystem, element) -> QuotientMatrix:
    """Compress a symbolic element to the subset.

    ``element`` is a normal-form polynomial over ``sub.parent`` (see
    :mod:`dynalg.semicrossed`); the compression is the multiplicative
    linear extension of the generator and function images above.
    """
    if element.system != sub.parent:
        raise ValueError("element lives over a different system")
    gens = [generator_matrix(sub, i) for i in range(sub.arity)]
    acc = QuotientMatrix.zero(sub.points)
    for word, coeff in element.terms.items():
        m = function_matrix(sub, coeff.values)
        for letter in reversed(word):
            m = gens[letter] @ m
        acc = acc + m
    return acc


EntrySignature = tuple[int, ...]


def entry_signature(sub: SubSystem) -> EntrySignature:
    """Multiset (as a sorted tuple) of in-degrees per (colour, target)."""
    graph = colored_graph(sub)
    counts: dict[tuple[int, int], int] = {}
    for _, target, colour in graph.edges:
        counts[(colour, target)] = counts.get((colour, target), 0) + 1
    return tuple(sorted(counts.values()))


def local_signature(sys: FiniteSystem, x: int) -> EntrySignature:
    """Entry signature of the one-step neighbourhood {x} u {images of x}."""
    if not (0 <= x < sys.size):
        raise ValueError(f"point {x} outside 0..{sys.size - 1}")
    neighbourhood = {x} | {sys.tables[i][x] for i in range(sys.arity)}
    return entry_signature(restrict(sys, neighbourhood))


def signatures_equivalent(s1: Iterable[int], s2: Iterable[int]) -> bool:
    """Multiset equality of two signatures."""
    return sorted(s1) == sorted(s2)
