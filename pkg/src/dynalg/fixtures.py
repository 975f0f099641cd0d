"""Small named systems used across the test-suite, docs and self-test.

All points are 0-indexed.
"""

from __future__ import annotations

from .dynsys import FiniteSystem

#: Two points; map 0 is the identity, map 1 swaps them.
TWO_POINT_MIXED = FiniteSystem(size=2, tables=((0, 1), (1, 0)))

#: Two points; map 0 is constant 0, map 1 is constant 1.  Piecewise
#: conjugate to TWO_POINT_MIXED but not partition conjugate to it.
TWO_POINT_CONSTANT = FiniteSystem(size=2, tables=((0, 0), (1, 1)))

#: Four points with overlapping ranges: both maps send 0 to 1, map 0
#: sends everything else to 2, map 1 sends everything else to 3.
FOUR_POINT_OVERLAP = FiniteSystem(size=4, tables=((1, 2, 2, 2), (1, 3, 3, 3)))

#: The standalone system carried by the subset {1, 2, 3} of
#: FOUR_POINT_OVERLAP (relabelled 0..2): two disjoint constant maps.
THREE_POINT_DISJOINT = FiniteSystem(size=3, tables=((1, 1, 1), (2, 2, 2)))

#: A partition-conjugate (but not conjugate) pair on four points: the
#: identity witness swaps the colour roles on {2, 3} only.
FOUR_POINT_SPLIT_A = FiniteSystem(size=4, tables=((1, 0, 2, 3), (0, 1, 3, 2)))
FOUR_POINT_SPLIT_B = FiniteSystem(size=4, tables=((1, 0, 3, 2), (0, 1, 2, 3)))
