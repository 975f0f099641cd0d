"""Exact deciders for conjugacy notions between finite systems.

Three nested notions are decided here, each with a verifiable witness:

* conjugacy: a point bijection gamma intertwines the maps index by
  index (optionally after one global recolouring of the map indices);
* pointwise (piecewise) matching: gamma intertwines the maps up to a
  colour permutation alpha_x chosen separately at every point;
* partition matching: a pointwise witness whose colour field alpha is
  in addition saturated under preimages on both sides, i.e. points with
  a common image under a map must agree on that map's recolouring.

All searches are exhaustive and deterministic: bijections are tried in
lexicographic one-line-notation order, colour permutations pointwise in
lexicographic order, so the first witness found is the lexicographically
least one.  Candidate bijections in the partition search are pre-filtered
by per-point entry signatures (:func:`dynalg.quotient.local_signature`),
a sound prune: a partition witness forces matching signatures at every
pair of corresponding points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .dynsys import FiniteSystem
from .matching import lex_least_injective
from .quotient import local_signature

Permutation = tuple[int, ...]


class IncompatibleSystemsError(ValueError):
    """The two systems do not even have matching size and arity."""


class MalformedWitnessError(ValueError):
    """A witness object violates a structural invariant."""


@dataclass(frozen=True)
class ConjugacyWitness:
    gamma: Permutation
    recolor: Optional[Permutation]  # None means same-index conjugacy


@dataclass(frozen=True)
class PiecewiseWitness:
    gamma: Permutation
    alpha: tuple[Permutation, ...]  # alpha[x] permutes colours at x


@dataclass(frozen=True)
class PartitionWitness:
    gamma: Permutation
    alpha: tuple[Permutation, ...]

    def index_set(self, i: int, j: int) -> frozenset[int]:
        """V_{i,j}: the points whose colour field sends i to j."""
        return frozenset(x for x, perm in enumerate(self.alpha) if perm[i] == j)


@dataclass(frozen=True)
class WitnessFailure:
    condition: str
    detail: str


@dataclass(frozen=True)
class WitnessReport:
    passed: bool
    failures: tuple[WitnessFailure, ...]


def _check_compatible(a: FiniteSystem, b: FiniteSystem) -> None:
    if a.size != b.size or a.arity != b.arity:
        raise IncompatibleSystemsError(
            f"systems differ in shape: {a.size} points/{a.arity} maps"
            f" vs {b.size} points/{b.arity} maps"
        )


def _bijections(size: int) -> Iterator[Permutation]:
    return itertools.permutations(range(size))


def _invert(perm: Permutation) -> Permutation:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def decide_conjugate(
    a: FiniteSystem, b: FiniteSystem, allow_recolor: bool = False
) -> Optional[ConjugacyWitness]:
    """Search for gamma with gamma o sigma_i = tau_i o gamma for all i.

    With ``allow_recolor`` a single global colour permutation beta is
    also searched: gamma o sigma_i = tau_{beta(i)} o gamma.  Returns the
    lexicographically least witness (gamma first, then beta) or None.
    """
    _check_compatible(a, b)
    recolourings: list[Optional[Permutation]]
    if allow_recolor:
        recolourings = list(itertools.permutations(range(a.arity)))
    else:
        recolourings = [None]
    for gamma in _bijections(a.size):
        for beta in recolourings:
            ok = True
            for i in range(a.arity):
                ti = i if beta is None else beta[i]
                if any(gamma[a.tables[i][x]] != b.tables[ti][gamma[x]] for x in range(a.size)):
                    ok = False
                    break
            if ok:
                return ConjugacyWitness(gamma=gamma, recolor=beta)
    return None


def _pointwise_options(
    a: FiniteSystem, b: FiniteSystem, gamma: Permutation, x: int
) -> list[list[int]]:
    """For each colour i, the colours j with gamma(sigma_i(x)) = tau_j(gamma(x))."""
    gx = gamma[x]
    return [
        [j for j in range(a.arity) if gamma[a.tables[i][x]] == b.tables[j][gx]]
        for i in range(a.arity)
    ]


def decide_piecewise(a: FiniteSystem, b: FiniteSystem) -> Optional[PiecewiseWitness]:
    """Search for gamma plus a per-point colour permutation field.

    At every point x the colour permutation alpha_x must satisfy
    gamma(sigma_i(x)) = tau_{alpha_x(i)}(gamma(x)) for all i.  In a
    finite discrete space that pointwise condition is the whole of
    piecewise matching.  Returns the lexicographically least witness.
    """
    _check_compatible(a, b)
    for gamma in _bijections(a.size):
        alphas: list[Permutation] = []
        feasible = True
        for x in range(a.size):
            perm = lex_least_injective(_pointwise_options(a, b, gamma, x))
            if perm is None:
                feasible = False
                break
            alphas.append(perm)
        if feasible:
            return PiecewiseWitness(gamma=gamma, alpha=tuple(alphas))
    return None


def _signature_prune(a: FiniteSystem, b: FiniteSystem, gamma: Permutation) -> bool:
    return all(
        local_signature(a, x) == local_signature(b, gamma[x]) for x in range(a.size)
    )


def _partition_alpha_field(
    a: FiniteSystem, b: FiniteSystem, gamma: Permutation
) -> Optional[tuple[Permutation, ...]]:
    """Backtracking over alpha fields satisfying the preimage conditions."""
    n = a.arity
    all_perms = list(itertools.permutations(range(n)))
    options: list[list[Permutation]] = []
    for x in range(a.size):
        compat = _pointwise_options(a, b, gamma, x)
        ok = [p for p in all_perms if all(p[i] in compat[i] for i in range(n))]
        if not ok:
            return None
        options.append(ok)

    inverses = {p: _invert(p) for p in all_perms}
    chosen: list[Permutation] = []

    def consistent(x: int, perm: Permutation) -> bool:
        pinv = inverses[perm]
        for y in range(x):
            other = chosen[y]
            for i in range(n):
                if a.tables[i][x] == a.tables[i][y] and perm[i] != other[i]:
                    return False
            oinv = inverses[other]
            gx, gy = gamma[x], gamma[y]
            for j in range(n):
                if b.tables[j][gx] == b.tables[j][gy] and pinv[j] != oinv[j]:
                    return False
        return True

    def extend(x: int) -> bool:
        if x == a.size:
            return True
        for perm in options[x]:
            if consistent(x, perm):
                chosen.append(perm)
                if extend(x + 1):
                    return True
                chosen.pop()
        return False

    if extend(0):
        return tuple(chosen)
    return None


def decide_partition(a: FiniteSystem, b: FiniteSystem) -> Optional[PartitionWitness]:
    """Search for a preimage-saturated pointwise witness.

    Equivalent to exhausting every (gamma, alpha) pair; bijections that
    mismatch some local entry signature are skipped, which cannot drop
    a witness.  Returns the lexicographically least witness or None.
    """
    _check_compatible(a, b)
    for gamma in _bijections(a.size):
        if not _signature_prune(a, b, gamma):
            continue
        field = _partition_alpha_field(a, b, gamma)
        if field is not None:
            return PartitionWitness(gamma=gamma, alpha=field)
    return None


def _validate_witness_shape(
    a: FiniteSystem, b: FiniteSystem, witness: PartitionWitness
) -> None:
    _check_compatible(a, b)
    gamma = witness.gamma
    if len(gamma) != a.size or sorted(gamma) != list(range(a.size)):
        raise MalformedWitnessError(f"gamma {gamma} is not a bijection of 0..{a.size - 1}")
    if len(witness.alpha) != a.size:
        raise MalformedWitnessError(
            f"alpha field has {len(witness.alpha)} entries, expected {a.size}"
        )
    for x, perm in enumerate(witness.alpha):
        if len(perm) != a.arity or sorted(perm) != list(range(a.arity)):
            raise MalformedWitnessError(
                f"alpha[{x}] = {perm} is not a colour permutation of 0..{a.arity - 1}"
            )


def verify_partition_witness(
    a: FiniteSystem, b: FiniteSystem, witness: PartitionWitness
) -> WitnessReport:
    """Check every witness condition independently of the decider.

    Structural defects (wrong lengths, non-permutations) raise
    :class:`MalformedWitnessError`.  Semantic defects come back as a
    report listing each failed condition with a counterexample,
    including the literal saturation identities on the index sets
    V_{i,j} = {x : alpha_x(i) = j}.
    """
    _validate_witness_shape(a, b, witness)
    gamma, alpha = witness.gamma, witness.alpha
    n = a.arity
    failures: list[WitnessFailure] = []

    for x in range(a.size):
        for i in range(n):
            if gamma[a.tables[i][x]] != b.tables[alpha[x][i]][gamma[x]]:
                failures.append(
                    WitnessFailure(
                        "intertwining",
                        f"gamma(sigma_{i}({x})) = {gamma[a.tables[i][x]]} but "
                        f"tau_{alpha[x][i]}(gamma({x})) = {b.tables[alpha[x][i]][gamma[x]]}",
                    )
                )

    for i in range(n):
        for x in range(a.size):
            for y in range(x + 1, a.size):
                if a.tables[i][x] == a.tables[i][y] and alpha[x][i] != alpha[y][i]:
                    failures.append(
                        WitnessFailure(
                            "sigma-preimage",
                            f"sigma_{i} merges {x} and {y} but alpha_{x}({i}) = "
                            f"{alpha[x][i]} differs from alpha_{y}({i}) = {alpha[y][i]}",
                        )
                    )

    inv = [_invert(p) for p in alpha]
    for j in range(n):
        for x in range(a.size):
            for y in range(x + 1, a.size):
                if b.tables[j][gamma[x]] == b.tables[j][gamma[y]] and inv[x][j] != inv[y][j]:
                    failures.append(
                        WitnessFailure(
                            "tau-preimage",
                            f"tau_{j} merges gamma({x}) and gamma({y}) but "
                            f"alpha_{x}^-1({j}) = {inv[x][j]} differs from "
                            f"alpha_{y}^-1({j}) = {inv[y][j]}",
                        )
                    )

    # Literal set form of the saturation conditions.
    gamma_inv = _invert(gamma)
    for i in range(n):
        for j in range(n):
            v = witness.index_set(i, j)
            sigma_image = {a.tables[i][x] for x in v}
            saturated = {x for x in range(a.size) if a.tables[i][x] in sigma_image}
            if saturated != set(v):
                extra = min(saturated ^ set(v))
                failures.append(
                    WitnessFailure(
                        "sigma-saturation",
                        f"sigma_{i}^-1(sigma_{i}(V_{i},{j})) != V_{i},{j}: point {extra}",
                    )
                )
            tau_image = {b.tables[j][gamma[x]] for x in v}
            pulled = {gamma_inv[y] for y in range(b.size) if b.tables[j][y] in tau_image}
            if pulled != set(v):
                extra = min(pulled ^ set(v))
                failures.append(
                    WitnessFailure(
                        "tau-saturation",
                        f"gamma^-1(tau_{j}^-1(tau_{j}(gamma(V_{i},{j})))) != V_{i},{j}:"
                        f" point {extra}",
                    )
                )

    return WitnessReport(passed=not failures, failures=tuple(failures))
