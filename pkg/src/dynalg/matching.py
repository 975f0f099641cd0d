"""Lexicographically least injective assignments by backtracking."""

from __future__ import annotations

from typing import Optional, Sequence


def lex_least_injective(options: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Pick one value per position, all distinct, lexicographically least.

    ``options[k]`` lists the admissible values for position k.  Returns
    None when no system of distinct representatives exists.
    """
    sorted_options = [sorted(set(opts)) for opts in options]
    chosen: list[int] = []
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == len(sorted_options):
            return True
        for value in sorted_options[k]:
            if value in used:
                continue
            chosen.append(value)
            used.add(value)
            if extend(k + 1):
                return True
            chosen.pop()
            used.remove(value)
        return False

    if extend(0):
        return tuple(chosen)
    return None
