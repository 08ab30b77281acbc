"""Reference census of equal-mass Newtonian (alpha = -3) central configurations, n = 3..7.

Each row holds the reduced potential U*sqrt(I) to 8 decimals, the critical point
(Morse) index, the fixed-point index, the isotropy order and one representative
configuration with a body at (1, 0).  These are the golden data the acceptance
suite compares against; coordinates are rounded, so compare through invariants
such as sorted mutual distances rather than raw positions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class ReferenceRow:
    reduced_potential: float
    morse_index: int
    fp_index: int
    isotropy: int
    points: tuple[complex, ...]

    def configuration(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    def mutual_distances(self) -> np.ndarray:
        """Sorted pairwise distances after scaling to unit inertia (unit masses)."""
        z = self.configuration()
        z = z - z.mean()
        z = z / np.sqrt(np.sum(np.abs(z) ** 2))
        i, j = np.triu_indices(z.size, 1)
        return np.sort(np.abs(z[i] - z[j]))


def _row(u, h, fp, iso, pts):
    return ReferenceRow(u, h, fp, iso, tuple(complex(a, b) for a, b in pts))


REFERENCE_TABLES: dict[int, list[ReferenceRow]] = {
    3: [
        _row(3.00000000, 0, 1, 3, [(-0.5, 0.8660254), (1.0, 0.0), (-0.5, -0.8660254)]),
        _row(3.53553391, 1, -1, 2, [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]),
    ],
    4: [
        _row(7.65685425, 0, 1, 4, [(0.0, 1.0), (0.0, -1.0), (1.0, 0.0), (-1.0, 0.0)]),
        _row(8.19608063, 1, -1, 1, [(-0.01495777, -0.02424649), (-0.44867582, 0.89369458), (1.0, 0.0), (-0.53636641, -0.86944809)]),
        _row(8.19615242, 2, 1, 3, [(-0.0, 0.0), (-0.5, -0.8660254), (1.0, 0.0), (-0.5, 0.8660254)]),
        _row(9.67900415, 2, 1, 2, [(-0.31624349, -0.0), (0.31624349, -0.0), (1.0, 0.0), (-1.0, 0.0)]),
    ],
    5: [
        _row(15.38841769, 0, 1, 5, [(-0.80901699, -0.58778525), (0.30901699, 0.95105652), (0.30901699, -0.95105652), (1.0, 0.0), (-0.80901699, 0.58778525)]),
        _row(15.65685425, 0, 1, 4, [(0.0, -0.0), (-1.0, 0.0), (-0.0, -1.0), (1.0, 0.0), (0.0, 1.0)]),
        _row(15.68397123, 1, -1, 1, [(0.12867234, 0.1888118), (0.09578559, -0.88501108), (-0.85873077, -0.23452283), (1.0, 0.0), (-0.36572717, 0.93072211)]),
        _row(17.12399663, 2, 1, 1, [(0.34137918, 0.02633026), (-0.27690769, 0.20138312), (-0.21289415, -0.75194237), (1.0, 0.0), (-0.85157734, 0.52422899)]),
        _row(20.24094955, 3, -1, 2, [(0.0, -0.0), (0.47168469, -0.0), (-0.47168469, -0.0), (1.0, 0.0), (-1.0, 0.0)]),
    ],
    6: [
        _row(26.56875757, 0, 1, 5, [(-0.0, 0.0), (0.30901699, -0.95105652), (-0.80901699, 0.58778525), (-0.80901699, -0.58778525), (1.0, 0.0), (0.30901699, 0.95105652)]),
        _row(26.85636352, 0, 1, 3, [(0.46417852, 0.80398078), (-0.92835704, -0.0), (0.46417852, -0.80398078), (-0.5, -0.8660254), (1.0, 0.0), (-0.5, 0.8660254)]),
        _row(26.85645445, 1, -1, 6, [(0.5, -0.8660254), (-1.0, -0.0), (0.5, 0.8660254), (-0.5, 0.8660254), (1.0, 0.0), (-0.5, -0.8660254)]),
        _row(26.88681901, 1, -1, 1, [(0.30421317, 0.45080951), (-0.82401445, 0.09016574), (0.3919735, -0.73040157), (-0.49795663, -0.73791542), (1.0, 0.0), (-0.37421558, 0.92734174)]),
        _row(27.79833059, 2, 1, 2, [(0.33894038, -0.0), (-0.33894038, 0.0), (-0.0, -0.84172034), (0.0, 0.84172034), (1.0, 0.0), (-1.0, 0.0)]),
        _row(28.11615508, 2, 1, 1, [(0.36819982, 0.06656948), (-0.18216036, 0.32683361), (-0.68397183, -0.39013941), (0.13241025, -0.77620471), (1.0, 0.0), (-0.63447788, 0.77294102)]),
        _row(29.59724379, 3, -1, 3, [(-0.19887188, -0.34445619), (0.39774375, 0.0), (-0.19887188, 0.34445619), (-0.5, -0.8660254), (1.0, 0.0), (-0.5, 0.8660254)]),
        _row(30.99783846, 3, -1, 1, [(0.01360506, 0.06307395), (-0.43717775, 0.21223104), (0.48579169, 0.01314644), (-0.1511351, -0.7006724), (1.0, 0.0), (-0.9110839, 0.41222097)]),
        _row(36.25298863, 4, 1, 2, [(-0.18383207, 0.0), (0.18383207, 0.0), (0.56459754, 0.0), (-0.56459754, 0.0), (1.0, 0.0), (-1.0, -0.0)]),
    ],
    7: [
        _row(41.55339290, 0, 1, 6, [(-0.0, -0.0), (-0.5, -0.8660254), (0.5, -0.8660254), (0.5, 0.8660254), (-1.0, 0.0), (1.0, 0.0), (-0.5, 0.8660254)]),
        _row(42.32859664, 1, -1, 1, [(0.31194658, -0.28006242), (-0.39849482, 0.13018261), (0.42399335, 0.73425006), (-0.85245018, -0.47481689), (0.01487433, -0.97565421), (1.0, 0.0), (-0.49986928, 0.86610086)]),
        _row(42.45998988, 1, -1, 1, [(-0.46413573, 0.28708218), (0.37471387, 0.39677156), (0.47873707, -0.67327333), (-0.28952417, -0.77373246), (-0.96637766, -0.25712684), (1.0, 0.0), (-0.13341338, 1.02027888)]),
        _row(42.49618473, 2, 1, 1, [(0.38450652, -0.46240728), (-0.54943511, -0.29984561), (0.39504259, 0.48551796), (-0.20396196, 0.89597229), (-0.8437316, 0.36398326), (1.0, 0.0), (-0.18242044, -0.98322062)]),
        _row(42.60195114, 2, 1, 1, [(-0.30830344, -0.17397349), (0.34487831, -0.07985451), (-0.52605215, 0.65384386), (0.32005579, 0.77576217), (0.12874051, -0.8934537), (1.0, 0.0), (-0.95931901, -0.28232434)]),
        _row(42.68484275, 2, 1, 7, [(-0.22252093, 0.97492791), (-0.22252093, -0.97492791), (0.6234898, 0.78183148), (-0.90096887, -0.43388374), (0.6234898, -0.78183148), (1.0, 0.0), (-0.90096887, 0.43388374)]),
        _row(43.29826801, 2, 1, 1, [(0.40301374, 0.14262935), (-0.08849347, 0.41824886), (-0.37570676, -0.66999095), (-0.79143908, -0.04524148), (0.37416735, -0.69887152), (1.0, 0.0), (-0.52154178, 0.85322575)]),
        _row(44.26667553, 3, -1, 1, [(-0.36116383, 0.16545203), (0.39262204, -0.0605113), (-0.13252243, -0.44207852), (0.23659975, 0.78926767), (-0.83509338, 0.55010821), (1.0, 0.0), (-0.30044215, -1.00223809)]),
        _row(45.30890467, 3, -1, 2, [(-0.0, 0.0), (-0.48839825, 0.0), (0.48839825, 0.0), (0.0, -0.76203471), (-0.0, 0.76203471), (1.0, 0.0), (-1.0, -0.0)]),
        _row(45.89112647, 3, -1, 1, [(0.05012818, 0.1393608), (0.50089913, 0.03169978), (-0.36593875, 0.34350202), (-0.56667787, -0.44643585), (0.15246518, -0.70511215), (1.0, 0.0), (-0.77087587, 0.6369854)]),
        _row(47.89025883, 4, 1, 1, [(-0.02010407, 0.03184202), (0.48991124, 0.00365264), (-0.2139468, -0.44074157), (-0.27911603, 0.44208061), (-0.42997391, -0.90284131), (1.0, 0.0), (-0.54677044, 0.86600762)]),
        _row(47.89177651, 5, -1, 3, [(0.0, 0.0), (-0.24860773, 0.43060122), (0.49721546, 0.0), (-0.24860773, -0.43060122), (-0.5, 0.8660254), (1.0, 0.0), (-0.5, -0.8660254)]),
        _row(50.74714105, 4, 1, 1, [(-0.1739974, 0.09130693), (0.1944617, 0.02822588), (-0.53865669, 0.19808028), (0.57387182, 0.00761282), (-0.11263064, -0.65788036), (1.0, 0.0), (-0.94304879, 0.33265446)]),
        _row(58.69057642, 5, -1, 2, [(0.0, 0.0), (-0.30469288, 0.0), (0.30469288, 0.0), (-0.62669769, 0.0), (0.62669769, 0.0), (1.0, 0.0), (-1.0, -0.0)]),
    ],
}


def reference_morse_sum(n: int) -> Fraction:
    """Sum of (-1)^index / isotropy over the reference rows (every row is achiral)."""
    return sum((Fraction((-1) ** r.morse_index, r.isotropy) for r in REFERENCE_TABLES[n]), Fraction(0))
