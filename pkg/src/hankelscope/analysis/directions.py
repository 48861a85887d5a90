"""Direction family E_1..E_{2n-1}: standard basis plus Vandermonde rows.

E_{n+j} = sum_k k^{j-1} e_k.  Any n of the 2n-1 vectors are linearly
independent; the certificate is every n x n determinant, computed exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

MAX_N = 8


def bareiss_det(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass
class DirectionFamily:
    n: int
    vectors: list[tuple[int, ...]]
    determinants: dict[tuple[int, ...], int]

    @property
    def all_independent(self) -> bool:
        return all(d != 0 for d in self.determinants.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vectors": [list(v) for v in self.vectors],
            "determinants": [{"subset": [i + 1 for i in s], "det": d}
                             for s, d in self.determinants.items()],
            "all_independent": self.all_independent,
        }


def direction_family(n: int) -> DirectionFamily:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_N:
        raise ValueError(f"n = {n} exceeds the exact-determinant cap {MAX_N}")
    vecs = [tuple(int(i == k) for k in range(n)) for i in range(n)]
    vecs += [tuple(k ** (j - 1) for k in range(1, n + 1)) for j in range(1, n)]
    dets = {s: bareiss_det([vecs[i] for i in s]) for s in itertools.combinations(range(2 * n - 1), n)}
    return DirectionFamily(n, vecs, dets)
