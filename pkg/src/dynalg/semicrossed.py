"""Normal-form symbolic arithmetic for covariant polynomials.

An element is a finite sum  sum_w s_w f_w  where w runs over words in
the colour generators s_0, ..., s_{n-1} of a finite system and each f_w
is a function on the points with exact complex-rational values.  The
defining rewriting rule

    f * s_i  =  s_i * (f o sigma_i)

pushes every function coefficient to the right of the generators, so
the product of two normal forms is again a normal form:

    (s_v f) (s_w g)  =  s_{vw} (f o sigma_w) g.

Equality of elements is literal equality of their term maps; no norms
or adjoints are defined at this level (they belong to the concrete
matrix representations in :mod:`dynalg.reps`).

The degree-k component map and its Cesaro means are computed by exact
combinatorial selection of the words of length k.  The circle-average
description of those projections motivates the definitions but plays no
computational role here; everything below is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dynsys import FiniteSystem, Word, evaluate_word, validate_word
from .scalars import ONE, ZERO, RationalComplex


@dataclass(frozen=True)
class FunctionCoeff:
    """A function on the points of a system, as a tuple of exact scalars."""

    values: tuple[RationalComplex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", tuple(RationalComplex.coerce(v) for v in self.values)
        )

    @staticmethod
    def constant(size: int, value: RationalComplex | int | Fraction) -> "FunctionCoeff":
        return FunctionCoeff((RationalComplex.coerce(value),) * size)

    @staticmethod
    def indicator(size: int, subset: Iterable[int]) -> "FunctionCoeff":
        inside = set(subset)
        return FunctionCoeff(tuple(ONE if x in inside else ZERO for x in range(size)))

    @staticmethod
    def zero(size: int) -> "FunctionCoeff":
        return FunctionCoeff.constant(size, ZERO)

    @staticmethod
    def one(size: int) -> "FunctionCoeff":
        return FunctionCoeff.constant(size, ONE)

    @property
    def size(self) -> int:
        return len(self.values)

    def __call__(self, x: int) -> RationalComplex:
        return self.values[x]

    def __add__(self, other: "FunctionCoeff") -> "FunctionCoeff":
        return FunctionCoeff(tuple(a + b for a, b in zip(self.values, other.values, strict=True)))

    def __sub__(self, other: "FunctionCoeff") -> "FunctionCoeff":
        return FunctionCoeff(tuple(a - b for a, b in zip(self.values, other.values, strict=True)))

    def __mul__(self, other: "FunctionCoeff") -> "FunctionCoeff":
        return FunctionCoeff(tuple(a * b for a, b in zip(self.values, other.values, strict=True)))

    def __neg__(self) -> "FunctionCoeff":
        return FunctionCoeff(tuple(-a for a in self.values))

    def scale(self, value: RationalComplex | int | Fraction) -> "FunctionCoeff":
        c = RationalComplex.coerce(value)
        return FunctionCoeff(tuple(a * c for a in self.values))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)


def pullback(f: FunctionCoeff, word: Sequence[int], sys: FiniteSystem) -> FunctionCoeff:
    """f o sigma_w, the composition with the word's map (rightmost letter first)."""
    w = validate_word(sys, word)
    return FunctionCoeff(tuple(f.values[evaluate_word(sys, w, x)] for x in range(sys.size)))


@dataclass(frozen=True, eq=True)
class SemicrossedElement:
    """A normal-form polynomial sum_w s_w f_w over a finite system.

    ``terms`` never stores a zero coefficient, so two elements are
    equal exactly when their term maps coincide.
    """

    system: FiniteSystem
    terms: dict[Word, FunctionCoeff]

    @staticmethod
    def make(system: FiniteSystem, terms: dict[Word, FunctionCoeff]) -> "SemicrossedElement":
        clean: dict[Word, FunctionCoeff] = {}
        for word, coeff in terms.items():
            w = validate_word(system, word)
            if coeff.size != system.size:
                raise ValueError(
                    f"coefficient has {coeff.size} values, system has {system.size} points"
                )
            if not coeff.is_zero():
                clean[w] = coeff
        return SemicrossedElement(system=system, terms=clean)

    @staticmethod
    def zero(system: FiniteSystem) -> "SemicrossedElement":
        return SemicrossedElement.make(system, {})

    @staticmethod
    def unit(system: FiniteSystem) -> "SemicrossedElement":
        return SemicrossedElement.make(system, {(): FunctionCoeff.one(system.size)})

    @staticmethod
    def from_function(system: FiniteSystem, f: FunctionCoeff) -> "SemicrossedElement":
        return SemicrossedElement.make(system, {(): f})

    @staticmethod
    def generator(system: FiniteSystem, colour: int) -> "SemicrossedElement":
        if not (0 <= colour < system.arity):
            raise ValueError(f"colour {colour} outside 0..{system.arity - 1}")
        return SemicrossedElement.make(system, {(colour,): FunctionCoeff.one(system.size)})

    @staticmethod
    def monomial(system: FiniteSystem, word: Sequence[int], f: FunctionCoeff) -> "SemicrossedElement":
        return SemicrossedElement.make(system, {tuple(word): f})

    # ---- linear structure ---------------------------------------------------

    def __add__(self, other: "SemicrossedElement") -> "SemicrossedElement":
        self._check(other)
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            out[word] = out[word] + coeff if word in out else coeff
        return SemicrossedElement.make(self.system, out)

    def __sub__(self, other: "SemicrossedElement") -> "SemicrossedElement":
        return self + (-other)

    def __neg__(self) -> "SemicrossedElement":
        return SemicrossedElement.make(
            self.system, {w: -c for w, c in self.terms.items()}
        )

    def scale(self, value: RationalComplex | int | Fraction) -> "SemicrossedElement":
        return SemicrossedElement.make(
            self.system, {w: c.scale(value) for w, c in self.terms.items()}
        )

    def __mul__(self, other: "SemicrossedElement") -> "SemicrossedElement":
        return sc_multiply(self, other)

    def _check(self, other: "SemicrossedElement") -> None:
        if self.system != other.system:
            raise ValueError("elements live over different systems")

    @property
    def degree(self) -> int:
        """Length of the longest word with a surviving coefficient; 0 if empty."""
        return max((len(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "SemicrossedElement(0)"
        parts = []
        for word in sorted(self.terms, key=lambda w: (len(w), w)):
            coeff = self.terms[word]
            head = "s" + "".join(str(l) for l in word) if word else "1"
            parts.append(f"{head}*{[str(v) for v in coeff.values]}")
        return "SemicrossedElement(" + " + ".join(parts) + ")"


def sc_multiply(a: SemicrossedElement, b: SemicrossedElement) -> SemicrossedElement:
    """Product in normal form: (s_v f)(s_w g) = s_{vw} (f o sigma_w) g."""
    a._check(b)
    sys = a.system
    out: dict[Word, FunctionCoeff] = {}
    for v, f in a.terms.items():
        for w, g in b.terms.items():
            word = v + w
            coeff = pullback(f, w, sys) * g
            out[word] = out[word] + coeff if word in out else coeff
    return SemicrossedElement.make(sys, out)


def gauge(a: SemicrossedElement, zs: Sequence[RationalComplex]) -> SemicrossedElement:
    """Scale the generators: s_w f picks up the product of z over w's letters.

    Each |z_i| must be at most 1 (checked exactly on the squared
    modulus), which keeps the map completely contractive in any
    representation; with every z_i nonzero it is injective on normal
    forms, one nonzero scalar per term.
    """
    if len(zs) != a.system.arity:
        raise ValueError(f"need {a.system.arity} gauge parameters, got {len(zs)}")
    zs = [RationalComplex.coerce(z) for z in zs]
    for z in zs:
        if z.abs_sq() > 1:
            raise ValueError(f"gauge parameter {z} lies outside the closed unit disc")
    out: dict[Word, FunctionCoeff] = {}
    for word, coeff in a.terms.items():
        factor = ONE
        for letter in word:
            factor = factor * zs[letter]
        out[word] = coeff.scale(factor)
    return SemicrossedElement.make(a.system, out)


def fourier_component(a: SemicrossedElement, k: int) -> SemicrossedElement:
    """The part of the element supported on words of length exactly k."""
    if k < 0:
        raise ValueError("component degree must be nonnegative")
    return SemicrossedElement.make(
        a.system, {w: c for w, c in a.terms.items() if len(w) == k}
    )


def cesaro_mean(a: SemicrossedElement, k: int) -> SemicrossedElement:
    """Fejer-weighted partial sum: components of length i scaled by 1 - i/k."""
    if k < 1:
        raise ValueError("Cesaro order must be at least 1")
    out: dict[Word, FunctionCoeff] = {}
    for word, coeff in a.terms.items():
        length = len(word)
        if length >= k:
            continue
        out[word] = coeff.scale(Fraction(k - length, k))
    return SemicrossedElement.make(a.system, out)


@dataclass(frozen=True)
class CovariantHom:
    """A homomorphism determined by its images of point masses and generators.

    ``point_mass_images[x]`` is the image of the indicator of x (this
    pins down the map on all function coefficients by linearity);
    ``generator_images[i]`` is the image of s_i.  A valid instance
    satisfies h(f) h(s_i) = h(s_i) h(f o sigma_i) for every indicator f,
    which :func:`covariance_defects` checks.
    """

    source: FiniteSystem
    target: FiniteSystem
    point_mass_images: tuple[FunctionCoeff, ...]
    generator_images: tuple[SemicrossedElement, ...]

    def function_image(self, f: FunctionCoeff) -> FunctionCoeff:
        out = FunctionCoeff.zero(self.target.size)
        for x, value in enumerate(f.values):
            if not value.is_zero():
                out = out + self.point_mass_images[x].scale(value)
        return out


def identity_hom(system: FiniteSystem) -> CovariantHom:
    return CovariantHom(
        source=system,
        target=system,
        point_mass_images=tuple(
            FunctionCoeff.indicator(system.size, {x}) for x in range(system.size)
        ),
        generator_images=tuple(
            SemicrossedElement.generator(system, i) for i in range(system.arity)
        ),
    )


def apply_hom(hom: CovariantHom, a: SemicrossedElement) -> SemicrossedElement:
    """Extend the generator and function images multiplicatively and linearly."""
    if a.system != hom.source:
        raise ValueError("element lives over a different system than the hom's source")
    acc = SemicrossedElement.zero(hom.target)
    for word, coeff in a.terms.items():
        term = SemicrossedElement.from_function(hom.target, hom.function_image(coeff))
        for letter in reversed(word):
            term = sc_multiply(hom.generator_images[letter], term)
        acc = acc + term
    return acc


def covariance_defects(hom: CovariantHom) -> list[tuple[int, int]]:
    """All (colour, point) pairs where the covariance relation fails."""
    defects = []
    for i in range(hom.source.arity):
        hi = hom.generator_images[i]
        for x in range(hom.source.size):
            chi = FunctionCoeff.indicator(hom.source.size, {x})
            lhs = sc_multiply(
                SemicrossedElement.from_function(hom.target, hom.function_image(chi)), hi
            )
            rhs = sc_multiply(
                hi,
                SemicrossedElement.from_function(
                    hom.target, hom.function_image(pullback(chi, (i,), hom.source))
                ),
            )
            if lhs != rhs:
                defects.append((i, x))
    return defects


def partition_isomorphism(a: FiniteSystem, b: FiniteSystem, witness) -> tuple[CovariantHom, CovariantHom]:
    """The mutually inverse homomorphism pair carried by a partition witness.

    With index sets V_{i,j} = {x : alpha_x(i) = j} the forward map sends
    f to f o gamma^-1 and s_i to sum_j t_j chi_{gamma(V_{i,j})}; the
    reverse map sends f to f o gamma and t_j to sum_i s_i chi_{V_{i,j}}.
    The witness is re-verified first; an invalid one is rejected.
    """
    from .conjugacy import PartitionWitness, verify_partition_witness

    if not isinstance(witness, PartitionWitness):
        witness = PartitionWitness(gamma=tuple(witness.gamma), alpha=tuple(witness.alpha))
    report = verify_partition_witness(a, b, witness)
    if not report.passed:
        conditions = ", ".join(sorted({f.condition for f in report.failures}))
        raise ValueError(f"witness fails verification: {conditions}")

    gamma = witness.gamma
    n = a.arity

    forward_gens = []
    for i in range(n):
        terms: dict[Word, FunctionCoeff] = {}
        for j in range(n):
            v = witness.index_set(i, j)
            if v:
                terms[(j,)] = FunctionCoeff.indicator(b.size, {gamma[x] for x in v})
        forward_gens.append(SemicrossedElement.make(b, terms))
    forward = CovariantHom(
        source=a,
        target=b,
        point_mass_images=tuple(
            FunctionCoeff.indicator(b.size, {gamma[x]}) for x in range(a.size)
        ),
        generator_images=tuple(forward_gens),
    )

    gamma_inv = [0] * len(gamma)
    for x, y in enumerate(gamma):
        gamma_inv[y] = x
    reverse_gens = []
    for j in range(n):
        terms = {}
        for i in range(n):
            v = witness.index_set(i, j)
            if v:
                terms[(i,)] = FunctionCoeff.indicator(a.size, v)
        reverse_gens.append(SemicrossedElement.make(a, terms))
    reverse = CovariantHom(
        source=b,
        target=a,
        point_mass_images=tuple(
            FunctionCoeff.indicator(a.size, {gamma_inv[y]}) for y in range(b.size)
        ),
        generator_images=tuple(reverse_gens),
    )
    return forward, reverse
