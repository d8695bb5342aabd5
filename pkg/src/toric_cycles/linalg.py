"""Exact integer and rational linear algebra.

Matrices are plain lists of rows; entries are ``int`` or
:class:`fractions.Fraction`.  Nothing here ever touches floating point.
Vectors returned to callers are tuples so they can be hashed and shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InconsistentSystem, LatticeError, NotSaturated, SchemaError

Vector = tuple
Matrix = list


# ---------------------------------------------------------------------------
# rationals

def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; zero denominators and decimals are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise SchemaError(f"malformed rational {text!r}") from None
    if q == 0:
        raise SchemaError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# basic matrix helpers

def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def dot(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def vsub(x: Sequence, y: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vadd(x: Sequence, y: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vscale(c, x: Sequence) -> Vector:
    return tuple(c * a for a in x)


def normalize(v: Sequence) -> Vector:
    """Collapse integral Fractions to ints so equal vectors compare and hash equal."""
    return tuple(int(a) if isinstance(a, Fraction) and a.denominator == 1 else a for a in v)


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for a in v:
        g = math.gcd(g, int(a))
    if g == 0:
        return tuple(int(a) for a in v)
    return tuple(int(a) // g for a in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for a in v:
        g = math.gcd(g, int(a))
    return g == 1


def clear_denominators(v: Sequence) -> Vector:
    """Smallest positive rescaling of a rational vector that is integral and primitive."""
    l = 1
    for a in v:
        l = math.lcm(l, as_fraction(a).denominator)
    return primitive([int(as_fraction(a) * l) for a in v])


# ---------------------------------------------------------------------------
# rational elimination

def rref(A: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q together with the pivot columns."""
    R = [[as_fraction(a) for a in row] for row in A]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [a * inv for a in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def det(A: Sequence[Sequence]) -> Fraction:
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[as_fraction(a) for a in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    aug = [list(row) + identity(n)[i] for i, row in enumerate(A)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise LatticeError("matrix is singular")
    return [row[n:] for row in R]


def nullspace(A: Sequence[Sequence], ncols: Optional[int] = None) -> list[Vector]:
    """Basis of the right kernel {x : A x = 0} over Q."""
    if not A:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    n = len(A[0])
    R, piv = rref(A)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


@dataclass(frozen=True)
class Solution:
    """One solution of a linear system plus a basis of the homogeneous solutions."""

    particular: Vector
    kernel: tuple[Vector, ...]


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Solution:
    """Solve ``A x = b`` exactly; raises :class:`InconsistentSystem` if impossible."""
    m = len(A)
    if len(b) != m:
        raise ValueError("right-hand side has the wrong length")
    n = len(A[0]) if m else 0
    aug = [list(row) + [b_i] for row, b_i in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        raise InconsistentSystem("right-hand side is not in the column span")
    x = [Fraction(0)] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return Solution(tuple(x), tuple(nullspace(A, n)))


def solve_unique(A: Sequence[Sequence], b: Sequence) -> Vector:
    sol = solve_rational(A, b)
    if sol.kernel:
        raise LatticeError("system is underdetermined")
    return sol.particular


def row_space_contains(rows: Sequence[Sequence], v: Sequence) -> bool:
    if not rows:
        return all(a == 0 for a in v)
    return rank(list(rows) + [list(v)]) == rank(rows)


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    chosen: list[int] = []
    rows: list = []
    r = 0
    for i, v in enumerate(vectors):
        if rank(rows + [list(v)]) > r:
            rows.append(list(v))
            chosen.append(i)
            r += 1
    return chosen


# ---------------------------------------------------------------------------
# integer normal forms

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ A == H``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows at the bottom.
    """
    H = [[int(a) for a in row] for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            rows = [i for i in range(r, m) if H[i][c] != 0]
            if not rows:
                break
            p = min(rows, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    return H, U


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``S = U @ A @ V`` with ``d1 | d2 | ...`` on the diagonal.

    ``U`` and ``V`` are unimodular.  Pivots are chosen with minimal absolute
    value to keep entries small.
    """
    S = [[int(a) for a in row] for row in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (S, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for M in (S, V):
            for row in M:
                row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not entries:
                return S, U, V
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, S[i][t] // S[t][t])
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, S[t][j] // S[t][t])
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
    return S, U, V


def invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    S, _, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def integer_inverse(U: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(U)
    out = []
    for row in inv:
        if any(a.denominator != 1 for a in row):
            raise LatticeError("matrix is not unimodular")
        out.append([int(a) for a in row])
    return out


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of the saturated lattice {x in Z^n : A x = 0}."""
    if not A:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    S, _, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(S), ncols)) if S[i][i])
    return [tuple(V[i][j] for i in range(ncols)) for j in range(r, ncols)]


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class LatticeBasis:
    """Linearly independent integer vectors spanning a sublattice of Z^n."""

    ambient_rank: int
    vectors: tuple[Vector, ...]
    saturated: Optional[bool] = None

    def __post_init__(self):
        vecs = tuple(tuple(int(a) for a in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if any(len(v) != self.ambient_rank for v in vecs):
            raise LatticeError("basis vector has the wrong length")
        if rank(vecs) != len(vecs):
            raise LatticeError("basis vectors are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def contains(self, v: Sequence[int]) -> bool:
        try:
            return all(c.denominator == 1 for c in self.coordinates(v))
        except InconsistentSystem:
            return False

    def coordinates(self, v: Sequence) -> Vector:
        """Rational coordinates of ``v`` in this basis (raises if outside the span)."""
        if not self.vectors:
            if any(a != 0 for a in v):
                raise InconsistentSystem("vector outside the zero lattice")
            return ()
        return solve_rational(transpose(self.vectors), list(v)).particular


def saturate(vectors: Sequence[Sequence[int]], ambient_rank: int) -> tuple[LatticeBasis, int]:
    """Basis of (Q-span of ``vectors``) ∩ Z^n, and the index of the span in it."""
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return LatticeBasis(ambient_rank, (), True), 1
    S, _, V = smith_normal_form(rows)
    r = sum(1 for i in range(min(len(S), ambient_rank)) if S[i][i])
    Vinv = integer_inverse(V)
    index = 1
    for i in range(r):
        index *= S[i][i]
    return LatticeBasis(ambient_rank, tuple(tuple(Vinv[i]) for i in range(r)), True), index


def lattice_index(sub: LatticeBasis, sup: LatticeBasis) -> int:
    """Index ``[sup : sub]`` of one lattice of equal rank inside another."""
    if sub.ambient_rank != sup.ambient_rank or sub.rank != sup.rank:
        raise LatticeError("lattices of different rank have no finite index")
    coords = []
    for v in sub.vectors:
        try:
            c = sup.coordinates(v)
        except InconsistentSystem:
            raise LatticeError("sublattice is not contained in the superlattice") from None
        if any(a.denominator != 1 for a in c):
            raise LatticeError("sublattice is not contained in the superlattice")
        coords.append([int(a) for a in c])
    return abs(int(det(coords)))


@dataclass(frozen=True)
class QuotientChart:
    """Coordinates on Z^n / L for a saturated sublattice L.

    ``project`` sends a point of Z^n to Z^(n - rank L) with kernel exactly L;
    ``lift`` is a section of it.
    """

    ambient_rank: int
    sub: LatticeBasis
    _V: tuple = field(repr=False)
    _Vinv: tuple = field(repr=False)

    @property
    def quotient_rank(self) -> int:
        return self.ambient_rank - self.sub.rank

    def project(self, x: Sequence) -> Vector:
        k = self.sub.rank
        y = [sum(x[i] * self._V[i][j] for i in range(self.ambient_rank)) for j in range(self.ambient_rank)]
        return normalize(y[k:])

    def lift(self, q: Sequence) -> Vector:
        k = self.sub.rank
        y = [0] * k + list(q)
        return normalize([sum(y[i] * self._Vinv[i][j] for i in range(self.ambient_rank)) for j in range(self.ambient_rank)])


def quotient_coordinates(ambient_rank: int, sub: LatticeBasis, saturate_first: bool = False) -> QuotientChart:
    if sub.rank == 0:
        I = tuple(tuple(r) for r in identity(ambient_rank))
        return QuotientChart(ambient_rank, sub, I, I)
    S, _, V = smith_normal_form([list(v) for v in sub.vectors])
    if any(S[i][i] != 1 for i in range(sub.rank)):
        if not saturate_first:
            raise NotSaturated("sublattice is not saturated; pass saturate_first=True")
        sub, _ = saturate(sub.vectors, ambient_rank)
        S, _, V = smith_normal_form([list(v) for v in sub.vectors])
    Vinv = integer_inverse(V)
    return QuotientChart(ambient_rank, sub, tuple(map(tuple, V)), tuple(map(tuple, Vinv)))


# ---------------------------------------------------------------------------
# feasibility of linear systems with sign constraints

def nonnegative_solution(A: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """Some ``x >= 0`` with ``A x = b``, or ``None``.

    Phase one of the simplex method on exact rationals with Bland's rule, so
    it always terminates.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    rows = []
    for row, bi in zip(A, b):
        row = [as_fraction(a) for a in row]
        bi = as_fraction(bi)
        if bi < 0:
            row, bi = [-a for a in row], -bi
        rows.append(row + [Fraction(int(i == len(rows))) for i in range(m)] + [bi])
    # tableau columns: n originals, m artificials, rhs
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    # reduced costs for minimizing the sum of artificials
    red = cost[:]
    for row in rows:
        red = [a - c for a, c in zip(red, row)]
    while True:
        entering = next((j for j in range(width) if red[j] < 0), None)
        if entering is None:
            break
        ratios = [
            (rows[i][-1] / rows[i][entering], basis[i], i)
            for i in range(m)
            if rows[i][entering] > 0
        ]
        if not ratios:  # unbounded cannot happen for phase one
            break
        _, _, leave = min(ratios)
        piv = rows[leave][entering]
        rows[leave] = [a / piv for a in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][entering] != 0:
                f = rows[i][entering]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[leave])]
        f = red[entering]
        red = [a - f * c for a, c in zip(red, rows[leave])]
        basis[leave] = entering
    if -red[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return tuple(x)


def strictly_separable(positive: Sequence[Sequence], zero: Sequence[Sequence], dim: int) -> bool:
    """Whether some functional is > 0 on every ``positive`` vector and 0 on every ``zero`` vector.

    By the transposition theorem this fails exactly when a nonzero nonnegative
    combination of the positive vectors lies in the span of the zero vectors.
    """
    if not positive:
        return True
    k, z = len(positive), len(zero)
    # variables: lambda (k, >= 0), mu+ (z), mu- (z); sum(lambda) = 1
    A = []
    for i in range(dim):
        A.append([p[i] for p in positive] + [-q[i] for q in zero] + [q[i] for q in zero])
    A.append([1] * k + [0] * (2 * z))
    b = [0] * dim + [1]
    return nonnegative_solution(A, b) is None
