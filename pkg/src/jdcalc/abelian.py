"""Exact integer linear algebra and finitely presented abelian groups.

Everything is arbitrary precision.  The workhorse is a sparse Smith normal
form that splits a relation matrix into independent blocks first and then
pivots on a minimal-absolute-value entry inside each block.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Vec = dict  # sparse vector: index -> nonzero int


# ---------------------------------------------------------------- sparse matrices


class IntMatrix:
    """Sparse integer matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): x for i, r in enumerate(data) for j, x in enumerate(r) if x})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, int]]) -> "IntMatrix":
        return cls(rows, len(columns), {(i, j): x for j, c in enumerate(columns) for i, x in c.items() if x})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def row_dicts(self) -> list[dict]:
        out: list[dict] = [dict() for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def column_dicts(self) -> list[dict]:
        out: list[dict] = [dict() for _ in range(self.cols)]
        for (i, j), x in self.entries.items():
            out[j][i] = x
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): x for (i, j), x in self.entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        orows = other.row_dicts()
        out: dict = {}
        for (i, k), x in self.entries.items():
            for j, y in orows[k].items():
                out[(i, j)] = out.get((i, j), 0) + x * y
        return IntMatrix(self.rows, other.cols, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    if m.rows != m.cols:
        raise ValueError("square matrix required")
    a = m.dense()
    n = m.rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------- Smith normal form


@dataclass
class _SmithResult:
    pivots: list  # (row, col, d) with d > 0, divisibility chain in list order
    col_ops: dict  # Q by columns: col -> {row: val}
    col_ops_inv: dict  # Q^-1 by rows: row -> {col: val}
    row_ops: dict | None  # P by rows, when tracked
    ncols: int
    nrows: int


def _components(rows: list[dict], ncols: int) -> list[tuple[list[int], list[int]]]:
    parent = list(range(ncols))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in rows:
        it = iter(r)
        first = next(it, None)
        if first is None:
            continue
        a = find(first)
        for c in it:
            b = find(c)
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
                    a = b
    col_groups: dict[int, list[int]] = {}
    for c in range(ncols):
        col_groups.setdefault(find(c), []).append(c)
    row_groups: dict[int, list[int]] = {}
    for i, r in enumerate(rows):
        if r:
            row_groups.setdefault(find(next(iter(r))), []).append(i)
    return [(row_groups.get(root, []), cols) for root, cols in sorted(col_groups.items())]


def _smith_sparse(rows_in: Sequence[Mapping[int, int]], ncols: int, track_rows: bool = False) -> _SmithResult:
    """Diagonalize the row-matrix ``rows_in`` by unimodular row and column operations.

    Column operations are recorded in Q (and Q^-1) so that rowspace(A)·Q is
    spanned by the pivot rows ``d·e_col``.  Row operations are recorded only
    when ``track_rows`` is set.
    """
    nrows = len(rows_in)
    rows = [{c: v for c, v in r.items() if v} for r in rows_in]
    colidx: dict[int, set] = {c: set() for c in range(ncols)}
    for i, r in enumerate(rows):
        for c in r:
            colidx[c].add(i)
    Q: dict[int, dict] = {c: {c: 1} for c in range(ncols)}
    Qi: dict[int, dict] = {c: {c: 1} for c in range(ncols)}
    P: dict[int, dict] | None = {i: {i: 1} for i in range(nrows)} if track_rows else None

    def row_axpy(dst: int, src: int, q: int) -> None:
        # row_dst -= q * row_src
        rd = rows[dst]
        for c, v in rows[src].items():
            nv = rd.get(c, 0) - q * v
            if nv:
                if c not in rd:
                    colidx[c].add(dst)
                rd[c] = nv
            elif c in rd:
                del rd[c]
                colidx[c].discard(dst)
        if P is not None:
            pd = P[dst]
            for c, v in P[src].items():
                nv = pd.get(c, 0) - q * v
                if nv:
                    pd[c] = nv
                else:
                    pd.pop(c, None)

    def col_axpy(dst: int, src: int, q: int) -> None:
        # col_dst -= q * col_src   (A and Q); Q^-1: row_src += q * row_dst
        for i in list(colidx[src]):
            v = rows[i][src]
            rd = rows[i]
            nv = rd.get(dst, 0) - q * v
            if nv:
                if dst not in rd:
                    colidx[dst].add(i)
                rd[dst] = nv
            elif dst in rd:
                del rd[dst]
                colidx[dst].discard(i)
        qd = Q[dst]
        for r, v in Q[src].items():
            nv = qd.get(r, 0) - q * v
            if nv:
                qd[r] = nv
            else:
                qd.pop(r, None)
        qs = Qi[src]
        for c, v in Qi[dst].items():
            nv = qs.get(c, 0) + q * v
            if nv:
                qs[c] = nv
            else:
                qs.pop(c, None)

    def col_neg(c: int) -> None:
        for i in colidx[c]:
            rows[i][c] = -rows[i][c]
        Q[c] = {r: -v for r, v in Q[c].items()}
        Qi[c] = {k: -v for k, v in Qi[c].items()}

    pivots: list = []
    heap: list = []

    def push(i: int) -> None:
        heapq.heappush(heap, (len(rows[i]), i))

    blocks = _components(rows, ncols)
    for brows, bcols in blocks:
        active_rows = set(brows)
        heap.clear()
        for i in brows:
            push(i)
        while True:
            best = None
            while heap:
                ln, i = heapq.heappop(heap)
                if i not in active_rows or ln != len(rows[i]):
                    continue
                if ln == 0:
                    active_rows.discard(i)
                    continue
                r = rows[i]
                best = min((abs(v), len(colidx[c]), c, i) for c, v in r.items())
                best = (best[0], best[1], i, best[2])
                break
            if best is None:
                break
            _, _, pr, pc = best
            while True:
                p = rows[pr][pc]
                # clear the column with row operations
                again = None
                for i in sorted(colidx[pc]):
                    if i == pr:
                        continue
                    q = rows[i][pc] // p
                    if q:
                        row_axpy(i, pr, q)
                        if i in active_rows:
                            push(i)
                    if pc in rows[i]:
                        if again is None or abs(rows[i][pc]) < abs(rows[again][pc]):
                            again = i
                if again is not None:
                    pr = again
                    continue
                # clear the row with column operations (touches only row pr now)
                for c in sorted(rows[pr]):
                    if c == pc:
                        continue
                    q = rows[pr][c] // p
                    if q:
                        col_axpy(c, pc, q)
                    if c in rows[pr]:
                        if again is None or abs(rows[pr][c]) < abs(rows[pr][again]):
                            again = c
                if again is not None:
                    pc = again
                    continue
                break
            if rows[pr][pc] < 0:
                col_neg(pc)
            pivots.append([pr, pc, rows[pr][pc]])
            active_rows.discard(pr)
            popped = best[2]
            if popped in active_rows:
                push(popped)

    # divisibility chain on the diagonal
    pivots.sort(key=lambda x: (x[2], x[1]))
    k = len(pivots)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            for j in range(i + 1, k):
                a, b = pivots[i][2], pivots[j][2]
                if b % a == 0:
                    continue
                g = gcd(a, b)
                s, t = _bezout(a, b)
                ri, ci = pivots[i][0], pivots[i][1]
                rj, cj = pivots[j][0], pivots[j][1]
                # columns: ci' = ci + cj ; cj' = -(t b/g) ci + (s a/g) cj
                # rows:    ri' = s ri + t rj ; rj' = -(b/g) ri + (a/g) rj
                _col_combine(Q, Qi, ci, cj, 1, -(t * b // g), 1, s * a // g)
                rows[ri] = {ci: g}
                rows[rj] = {cj: a * b // g}
                if P is not None:
                    pi_, pj_ = P[ri], P[rj]
                    ni = _lin(pi_, s, pj_, t)
                    nj = _lin(pi_, -(b // g), pj_, a // g)
                    P[ri], P[rj] = ni, nj
                pivots[i][2] = g
                pivots[j][2] = a * b // g
                changed = True
        if changed:
            pivots.sort(key=lambda x: (x[2], x[1]))
    return _SmithResult([tuple(p) for p in pivots], Q, Qi, P, ncols, nrows)


def _lin(x: dict, a: int, y: dict, b: int) -> dict:
    out: dict = {}
    for k, v in x.items():
        out[k] = a * v
    for k, v in y.items():
        out[k] = out.get(k, 0) + b * v
    return {k: v for k, v in out.items() if v}


def _col_combine(Q: dict, Qi: dict, ci: int, cj: int, m11: int, m12: int, m21: int, m22: int) -> None:
    """Replace columns (ci, cj) of Q by (ci, cj)·[[m11, m12], [m21, m22]] (det 1)."""
    a, b = Q[ci], Q[cj]
    Q[ci] = _lin(a, m11, b, m21)
    Q[cj] = _lin(a, m12, b, m22)
    # inverse acts on rows ci, cj of Q^-1: inv = [[m22, -m12], [-m21, m11]]
    ra, rb = Qi[ci], Qi[cj]
    Qi[ci] = _lin(ra, m22, rb, -m12)
    Qi[cj] = _lin(ra, -m21, rb, m11)


def _bezout(a: int, b: int) -> tuple[int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    aa, bb = a, b
    while bb:
        q = aa // bb
        aa, bb = bb, aa - q * bb
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if aa < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def smith_decompose(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U·m·V = D diagonal, d1 | d2 | ..., U and V unimodular."""
    res = _smith_sparse(m.row_dicts(), m.cols, track_rows=True)
    piv_rows = [p[0] for p in res.pivots]
    piv_cols = [p[1] for p in res.pivots]
    rest_rows = [i for i in range(m.rows) if i not in set(piv_rows)]
    rest_cols = [j for j in range(m.cols) if j not in set(piv_cols)]
    row_order = piv_rows + rest_rows
    col_order = piv_cols + rest_cols
    U = IntMatrix(m.rows, m.rows, {(new, c): v for new, old in enumerate(row_order) for c, v in res.row_ops[old].items()})
    V = IntMatrix(m.cols, m.cols, {(r, new): v for new, old in enumerate(col_order) for r, v in res.col_ops[old].items()})
    D = IntMatrix(m.rows, m.cols, {(i, i): p[2] for i, p in enumerate(res.pivots)})
    return U, D, V


def invariant_factors(m: IntMatrix) -> list[int]:
    return [p[2] for p in _smith_sparse(m.row_dicts(), m.cols).pivots]


# ---------------------------------------------------------------- F2 linear algebra


class F2Basis:
    """Fully reduced row echelon form over GF(2); vectors are Python ints used as bitsets."""

    __slots__ = ("pivots", "mask")

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}
        self.mask = 0

    def reduce(self, v: int) -> int:
        m = v & self.mask
        piv = self.pivots
        while m:
            low = m & -m
            v ^= piv[low.bit_length() - 1]
            m ^= low
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        hb = v.bit_length() - 1
        for k, r in self.pivots.items():
            if r >> hb & 1:
                self.pivots[k] = r ^ v
        self.pivots[hb] = v
        self.mask |= 1 << hb
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0


def f2_rank(vectors: Iterable[int]) -> int:
    b = F2Basis()
    for v in vectors:
        b.add(v)
    return b.rank


def f2_kernel(vectors: Sequence[int]) -> list[int]:
    """Basis of {c : XOR of vectors[i] over bits i of c = 0}, as bitsets over indices."""
    basis: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for i, v in enumerate(vectors):
        comb = 1 << i
        while v:
            hb = v.bit_length() - 1
            if hb in basis:
                bv, bc = basis[hb]
                v ^= bv
                comb ^= bc
            else:
                basis[hb] = (v, comb)
                break
        else:
            kernel.append(comb)
    return kernel


def bits(v: int) -> list[int]:
    out = []
    while v:
        b = v & -v
        out.append(b.bit_length() - 1)
        v ^= b
    return out


def to_bits(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


# ---------------------------------------------------------------- presented groups


class WellDefinednessError(ValueError):
    def __init__(self, message: str, relator_index: int | None = None):
        super().__init__(message)
        self.relator_index = relator_index


def _axpy(acc: dict, vec: Mapping[int, int], c: int) -> None:
    for k, v in vec.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


class PresentedGroup:
    """Abelian group ℤ^n modulo the span of relator vectors.

    ``relators`` are sparse generator-coordinate vectors; ``relations`` exposes
    them as an IntMatrix whose columns are the relators.
    """

    def __init__(self, ngens: int, relators: Iterable[Mapping[int, int]], names: Sequence | None = None):
        self.ngens = ngens
        self.relators = [dict((k, v) for k, v in r.items() if v) for r in relators]
        self.relators = [r for r in self.relators if r]
        for r in self.relators:
            for k in r:
                if not 0 <= k < ngens:
                    raise ValueError(f"relator mentions generator {k} outside 0..{ngens - 1}")
        self.names = list(names) if names is not None else None
        self._smith: _SmithResult | None = None
        self._layout = None

    # -- presentation data
    @property
    def relations(self) -> IntMatrix:
        return IntMatrix.from_columns(self.ngens, self.relators)

    def smith(self) -> _SmithResult:
        if self._smith is None:
            self._smith = _smith_sparse(self.relators, self.ngens)
            tors = [(p[2], p[1]) for p in self._smith.pivots if p[2] > 1]
            pivot_cols = {p[1] for p in self._smith.pivots}
            free = [c for c in range(self.ngens) if c not in pivot_cols]
            self._layout = (tors, free)
        return self._smith

    @property
    def torsion_factors(self) -> list[int]:
        self.smith()
        return [d for d, _ in self._layout[0]]

    @property
    def invariant_factors(self) -> list[int]:
        return [p[2] for p in self.smith().pivots]

    @property
    def rank(self) -> int:
        self.smith()
        return len(self._layout[1])

    def structure(self) -> "Structure":
        sm = self.smith()
        tors, free = self._layout
        basis = [dict(sm.col_ops_inv[c]) for _, c in tors]
        free_basis = [dict(sm.col_ops_inv[c]) for c in free]
        return Structure(self.rank, [d for d, _ in tors], basis, free_basis)

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion_factors

    def describe(self) -> str:
        return describe_structure(self.rank, self.torsion_factors)

    # -- elements
    def smith_coords(self, vec: Mapping[int, int | Fraction]) -> tuple[tuple, tuple]:
        """(torsion coordinates reduced mod d_i, free coordinates)."""
        sm = self.smith()
        tors, free = self._layout
        # y = x·Q ; need Q by rows -> use columns of Q directly
        tc = []
        for d, c in tors:
            col = sm.col_ops[c]
            s = sum(vec.get(r, 0) * v for r, v in col.items())
            tc.append(s % d)
        fc = []
        for c in free:
            col = sm.col_ops[c]
            fc.append(sum(vec.get(r, 0) * v for r, v in col.items()))
        return tuple(tc), tuple(fc)

    def element(self, vec: Mapping[int, int]) -> "GroupElement":
        return GroupElement(self, *self.smith_coords(vec))

    def gen(self, i: int) -> "GroupElement":
        return self.element({i: 1})

    def zero(self) -> "GroupElement":
        return self.element({})

    def is_zero(self, vec: Mapping[int, int]) -> bool:
        t, f = self.smith_coords(vec)
        return not any(t) and not any(f)

    def lift(self, tors: Sequence[int], free: Sequence[int]) -> dict:
        """Generator-coordinate vector of the element with the given Smith coordinates."""
        sm = self.smith()
        tl, fl = self._layout
        out: dict = {}
        for (d, c), a in zip(tl, tors):
            if a:
                _axpy(out, sm.col_ops_inv[c], a)
        for c, a in zip(fl, free):
            if a:
                _axpy(out, sm.col_ops_inv[c], a)
        return out

    # -- coefficient changes
    def mod2_dimension(self) -> int:
        return self.rank + sum(1 for d in self.torsion_factors if d % 2 == 0)

    def mod2_coords(self, vec: Mapping[int, int]) -> int:
        """Bitset coordinates of vec ⊗ 1 in G ⊗ ℤ/2."""
        t, f = self.smith_coords(vec)
        out = 0
        pos = 0
        for d, a in zip(self.torsion_factors, t):
            if d % 2 == 0:
                if a % 2:
                    out |= 1 << pos
                pos += 1
        for a in f:
            if a % 2:
                out |= 1 << pos
            pos += 1
        return out

    def rational_coords(self, vec: Mapping[int, int | Fraction]) -> tuple:
        """Image in G ⊗ ℚ (free coordinates)."""
        return self.smith_coords(vec)[1]

    def qz_coords(self, vec: Mapping[int, int | Fraction]) -> tuple:
        """Image in G ⊗ ℚ/ℤ: free coordinates reduced mod 1."""
        sm = self.smith()
        _, free = self._layout
        out = []
        for c in free:
            s = sum(Fraction(vec.get(r, 0)) * v for r, v in sm.col_ops[c].items())
            out.append(s - (s.numerator // s.denominator))
        return tuple(out)

    def half_is_zero(self, vec: Mapping[int, int]) -> bool:
        """Is ½·vec zero in G ⊗ ℚ/ℤ?  (all free coordinates even)"""
        return all(a % 2 == 0 for a in self.smith_coords(vec)[1])

    # -- derived groups
    def subgroup(self, elems: Sequence[Mapping[int, int]]) -> "PresentedGroup":
        """Subgroup generated by ``elems``, presented on those generators."""
        return PresentedGroup(len(elems), self._relations_among(elems))

    def _relations_among(self, elems: Sequence[Mapping[int, int]]) -> list[dict]:
        """Lattice of integer relations c with Σ c_i elems_i = 0 in this group."""
        tors = self.torsion_factors
        nt = len(tors)
        coords = [self.smith_coords(e) for e in elems]
        width = nt + self.rank
        # rows of M: one per element, then one per torsion modulus
        mrows: list[dict] = []
        for t, f in coords:
            row = {}
            for j, a in enumerate(t):
                if a:
                    row[j] = a
            for j, a in enumerate(f):
                if a:
                    row[nt + j] = a
            mrows.append(row)
        for j, d in enumerate(tors):
            mrows.append({j: d})
        kern = left_kernel(mrows, width)
        n = len(elems)
        out = []
        for v in kern:
            w = {k: x for k, x in v.items() if k < n}
            if w:
                out.append(w)
        return out

    def quotient(self, elems: Iterable[Mapping[int, int]]) -> "PresentedGroup":
        return PresentedGroup(self.ngens, list(self.relators) + [dict(e) for e in elems], self.names)

    def __repr__(self) -> str:
        return f"PresentedGroup(gens={self.ngens}, relators={len(self.relators)})"


@dataclass
class Structure:
    rank: int
    torsion: list
    torsion_basis: list = field(repr=False)
    free_basis: list = field(repr=False)

    def describe(self) -> str:
        return describe_structure(self.rank, self.torsion)


def describe_structure(rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if rank:
        parts.append("Z" if rank == 1 else f"Z ^ {rank}")
    counts: dict[int, int] = {}
    for d in torsion:
        counts[d] = counts.get(d, 0) + 1
    for d in sorted(counts):
        parts.append(f"Z/{d}" if counts[d] == 1 else f"Z/{d} ^ {counts[d]}")
    return " + ".join(parts) if parts else "0"


def left_kernel(rows: Sequence[Mapping[int, int]], ncols: int) -> list[dict]:
    """Basis of the integer lattice {c : Σ c_i rows_i = 0}."""
    nrows = len(rows)
    # transpose: kernel of M^T acting on column vectors c
    trows: list[dict] = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            if v:
                trows[j][i] = v
    res = _smith_sparse(trows, nrows)
    pivot_cols = {p[1] for p in res.pivots}
    return [dict(res.col_ops[c]) for c in range(nrows) if c not in pivot_cols]


class GroupElement:
    """Element of a presented group held in Smith normal-form coordinates."""

    __slots__ = ("owner", "torsion", "free")

    def __init__(self, owner: PresentedGroup, torsion: tuple, free: tuple):
        self.owner = owner
        self.torsion = torsion
        self.free = free

    def __repr__(self) -> str:
        return f"GroupElement(torsion={self.torsion}, free={self.free})"

    def is_zero(self) -> bool:
        return not any(self.torsion) and not any(self.free)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.owner is other.owner
            and self.torsion == other.torsion
            and self.free == other.free
        )

    def __hash__(self) -> int:
        return hash((id(self.owner), self.torsion, self.free))

    def lift(self) -> dict:
        return self.owner.lift(self.torsion, self.free)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return self.owner.element(_sum_vecs(self.lift(), other.lift()))

    def __neg__(self) -> "GroupElement":
        return self.owner.element({k: -v for k, v in self.lift().items()})

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, c: int) -> "GroupElement":
        return self.owner.element({k: c * v for k, v in self.lift().items()})


def _sum_vecs(a: Mapping[int, int], b: Mapping[int, int]) -> dict:
    out = dict(a)
    _axpy(out, b, 1)
    return out


# ---------------------------------------------------------------- homomorphisms


class GroupHom:
    """Homomorphism given by images of generators, certified on construction."""

    def __init__(self, source: PresentedGroup, target: PresentedGroup, images: Sequence[Mapping[int, int]], check: bool = True):
        if len(images) != source.ngens:
            raise ValueError("one image per source generator is required")
        self.source = source
        self.target = target
        self.images = [dict((k, v) for k, v in im.items() if v) for im in images]
        if check:
            for idx, rel in enumerate(source.relators):
                if not target.is_zero(self.apply_vec(rel)):
                    raise WellDefinednessError(f"relator {idx} of the source does not map to zero", idx)

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.target.ngens, self.images)

    def apply_vec(self, vec: Mapping[int, int]) -> dict:
        out: dict = {}
        for k, c in vec.items():
            if c:
                _axpy(out, self.images[k], c)
        return out

    def __call__(self, x: GroupElement | Mapping[int, int]) -> GroupElement:
        vec = x.lift() if isinstance(x, GroupElement) else x
        return self.target.element(self.apply_vec(vec))

    def kernel_vectors(self) -> list[dict]:
        return self.target._relations_among(self.images)

    def kernel(self) -> PresentedGroup:
        return self.source.subgroup(self.kernel_vectors())

    def image(self) -> PresentedGroup:
        return self.target.subgroup(self.images)

    def cokernel(self) -> PresentedGroup:
        return self.target.quotient(self.images)

    def is_injective(self) -> bool:
        return all(self.source.is_zero(v) for v in self.kernel_vectors())

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self ∘ first."""
        return GroupHom(first.source, self.target, [self.apply_vec(im) for im in first.images], check=False)

    def mod2_matrix(self) -> list[int]:
        """Images of the source ⊗ ℤ/2 Smith basis, as bitsets in target ⊗ ℤ/2."""
        out = []
        src = self.source
        tors = src.torsion_factors
        st = src.structure()
        for d, b in zip(tors, st.torsion_basis):
            if d % 2 == 0:
                out.append(self.target.mod2_coords(self.apply_vec(b)))
        for b in st.free_basis:
            out.append(self.target.mod2_coords(self.apply_vec(b)))
        return out


def hom_from_images(source: PresentedGroup, target: PresentedGroup, images: Sequence[Mapping[int, int]]) -> GroupHom:
    return GroupHom(source, target, images)


def identity_hom(g: PresentedGroup) -> GroupHom:
    return GroupHom(g, g, [{i: 1} for i in range(g.ngens)])


def direct_sum(groups: Sequence[PresentedGroup]) -> PresentedGroup:
    rels = []
    off = 0
    for g in groups:
        rels.extend({k + off: v for k, v in r.items()} for r in g.relators)
        off += g.ngens
    return PresentedGroup(off, rels)


def cyclic_group(n: int) -> PresentedGroup:
    """ℤ/n (n = 0 gives ℤ)."""
    return PresentedGroup(1, [{0: n}] if n else [])
