"""Exact integer linear algebra and Bowen-Franks invariants.

Everything here works over arbitrary-precision Python integers; no floating
point is used anywhere.  The two workhorses are a fraction-free determinant
(Bareiss elimination) and a Smith normal form with unimodular transform
tracking, which together yield the Bowen-Franks data ``det(1 - A^t)`` and
the invariant factors of ``coker(1 - A^t)`` for a directed graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class IntegerMatrix:
    """Immutable rectangular matrix with exact integer entries.

    >>> m = IntegerMatrix([[2, 4], [6, 8]])
    >>> m[0, 1]
    4
    >>> det(m)
    -8
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data):
        data = [tuple(row) for row in data]
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows in matrix data")
        else:
            width = 0
        for row in data:
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"matrix entries must be int, got {x!r}")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "_data", tuple(data))

    def __setattr__(self, *args):
        raise AttributeError("IntegerMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def row(self, i):
        return self._data[i]

    def to_lists(self):
        return [list(row) for row in self._data]

    def transpose(self):
        return IntegerMatrix(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def is_square(self):
        return self.rows == self.cols

    def diagonal(self):
        return tuple(self._data[i][i] for i in range(min(self.rows, self.cols)))

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            [
                [self._data[i][j] - other._data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            [
                [
                    sum(self._data[i][k] * other._data[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def entry_sum(self):
        return sum(sum(row) for row in self._data)

    def format_text(self):
        """Rows separated by ``;``, entries by ``,``."""
        return ";".join(",".join(str(x) for x in row) for row in self._data)

    @classmethod
    def parse_text(cls, text):
        rows = []
        for chunk in text.strip().split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            rows.append([int(x) for x in chunk.split(",")])
        return cls(rows)

    def __repr__(self):
        return f"IntegerMatrix({self.to_lists()!r})"


def det(matrix: IntegerMatrix) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    if not matrix.is_square():
        raise ValueError("determinant requires a square matrix")
    n = matrix.rows
    if n == 0:
        return 1
    a = matrix.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """Factorization U @ M @ V = D with U, V unimodular and D diagonal.

    The diagonal of ``D`` is nonnegative and satisfies the divisibility chain
    d1 | d2 | ... (trailing zeros allowed).
    """

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    matrix: IntegerMatrix

    def invariant_factors(self):
        """Nonzero diagonal entries of D, in chain order."""
        return tuple(d for d in self.D.diagonal() if d != 0)

    def free_rank(self):
        """Number of zero diagonal entries plus any missing dimensions.

        For M acting Z^cols -> Z^rows, this is the rank of the free part of
        coker(M) = Z^rows / im(M).
        """
        zero_diag = sum(1 for d in self.D.diagonal() if d == 0)
        return zero_diag + max(0, self.D.rows - self.D.cols)

    def verify(self):
        """Recheck every structural invariant; raises on violation."""
        if self.U @ self.matrix @ self.V != self.D:
            raise AssertionError("U M V != D")
        if det(self.U) not in (1, -1):
            raise AssertionError("U not unimodular")
        if det(self.V) not in (1, -1):
            raise AssertionError("V not unimodular")
        diag = self.D.diagonal()
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                if i != j and self.D[i, j] != 0:
                    raise AssertionError("D not diagonal")
        for d in diag:
            if d < 0:
                raise AssertionError("negative diagonal entry")
        for a, b in zip(diag, diag[1:]):
            if a == 0 and b != 0:
                raise AssertionError("zero before nonzero on diagonal")
            if a != 0 and b % a != 0:
                raise AssertionError("divisibility chain broken")
        return True


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, factor):
    m[dst] = [a + factor * b for a, b in zip(m[dst], m[src])]


def _add_col(m, dst, src, factor):
    for row in m:
        row[dst] += factor * row[src]


def _scale_row(m, i, factor):
    m[i] = [factor * a for a in m[i]]


def smith_normal_form(matrix: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with smallest-absolute-value pivoting.

    Pivot choice: the entry of least nonzero absolute value in the working
    submatrix, ties broken by (row, col) position, so runs are reproducible
    and intermediate growth stays moderate.
    """
    rows, cols = matrix.rows, matrix.cols
    m = matrix.to_lists()
    u = IntegerMatrix.identity(rows).to_lists()
    v = IntegerMatrix.identity(cols).to_lists()

    def pivot_position(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = m[i][j]
                if x != 0 and (best is None or abs(x) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(rows, cols):
        pos = pivot_position(t)
        if pos is None:
            break
        pi, pj = pos
        if pi != t:
            _swap_rows(m, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(m, t, pj)
            _swap_cols(v, t, pj)
        while True:
            # clear column t below the pivot; a nonzero remainder becomes the
            # new (smaller) pivot, so this loop is a gcd computation
            restart = False
            for i in range(t + 1, rows):
                if m[i][t] == 0:
                    continue
                q = m[i][t] // m[t][t]
                _add_row(m, i, t, -q)
                _add_row(u, i, t, -q)
                if m[i][t] != 0:
                    _swap_rows(m, t, i)
                    _swap_rows(u, t, i)
                    restart = True
                    break
            if restart:
                continue
            for j in range(t + 1, cols):
                if m[t][j] == 0:
                    continue
                q = m[t][j] // m[t][t]
                _add_col(m, j, t, -q)
                _add_col(v, j, t, -q)
                if m[t][j] != 0:
                    _swap_cols(m, t, j)
                    _swap_cols(v, t, j)
                    restart = True
                    break
            if restart:
                continue
            break
        t += 1

    rank = t
    for t in range(rank):
        if m[t][t] < 0:
            _scale_row(m, t, -1)
            _scale_row(u, t, -1)

    # enforce the divisibility chain d_t | d_{t+1}
    changed = True
    while changed:
        changed = False
        for t in range(rank - 1):
            a, b = m[t][t], m[t + 1][t + 1]
            if b % a == 0:
                continue
            changed = True
            # fold entry b into row t, then re-diagonalize the 2x2 block
            _add_col(m, t, t + 1, 1)
            _add_col(v, t, t + 1, 1)
            while True:
                if m[t + 1][t] != 0:
                    q = m[t][t] // m[t + 1][t] if m[t + 1][t] != 0 else 0
                    if abs(m[t + 1][t]) <= abs(m[t][t]):
                        q = m[t][t] // m[t + 1][t]
                        _add_row(m, t, t + 1, -q)
                        _add_row(u, t, t + 1, -q)
                        if m[t][t] == 0:
                            _swap_rows(m, t, t + 1)
                            _swap_rows(u, t, t + 1)
                    else:
                        q = m[t + 1][t] // m[t][t]
                        _add_row(m, t + 1, t, -q)
                        _add_row(u, t + 1, t, -q)
                if m[t + 1][t] == 0:
                    break
            q = m[t][t + 1] // m[t][t]
            if q:
                _add_col(m, t + 1, t, -q)
                _add_col(v, t + 1, t, -q)
            if m[t][t] < 0:
                _scale_row(m, t, -1)
                _scale_row(u, t, -1)
            if m[t + 1][t + 1] < 0:
                _scale_row(m, t + 1, -1)
                _scale_row(u, t + 1, -1)

    return SmithDecomposition(
        U=IntegerMatrix(u), D=IntegerMatrix(m), V=IntegerMatrix(v), matrix=matrix
    )


@dataclass(frozen=True)
class BowenFranks:
    """det(1 - A^t) together with the cokernel structure of 1 - A^t."""

    determinant: int
    invariant_factors: tuple
    free_rank: int

    def describe(self):
        torsion = " x ".join(f"Z/{d}" for d in self.invariant_factors if d != 1)
        free = " x ".join(["Z"] * self.free_rank)
        group = " x ".join(p for p in (free, torsion) if p) or "0"
        return f"det={self.determinant}, coker(1 - A^t) = {group}"


def unit_minus_transpose(adjacency: IntegerMatrix) -> IntegerMatrix:
    return IntegerMatrix.identity(adjacency.rows) - adjacency.transpose()


def bowen_franks(graph) -> BowenFranks:
    """Bowen-Franks data of a directed graph.

    >>> from groupoidkit.graphs import builtin_graph
    >>> bowen_franks(builtin_graph("E2")).determinant
    -1
    """
    m = unit_minus_transpose(graph.adjacency_matrix())
    snf = smith_normal_form(m)
    return BowenFranks(
        determinant=det(m),
        invariant_factors=snf.invariant_factors(),
        free_rank=snf.free_rank(),
    )


@dataclass(frozen=True)
class CertifyResult:
    """Outcome of the stable-isomorphism obstruction check.

    ``distinguished`` is True only when both graphs are strongly connected and
    the determinants differ; that is the only configuration in which the
    invariant is known to separate.  Everything else is inconclusive, with
    any invariant mismatches reported as informational notes.
    """

    distinguished: bool
    reason: str
    left: BowenFranks
    right: BowenFranks
    hypothesis_met: bool
    notes: tuple = ()

    def describe(self):
        verdict = "Distinguished" if self.distinguished else "Inconclusive"
        lines = [f"{verdict}: {self.reason}"]
        lines.append(f"  left:  {self.left.describe()}")
        lines.append(f"  right: {self.right.describe()}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def certify_distinct(graph_e, graph_f) -> CertifyResult:
    """One-sided certificate that two graphs cannot have stably
    diagonal-isomorphic algebras.

    Sound but deliberately incomplete: a ``distinguished`` verdict is a
    proof, an ``inconclusive`` verdict claims nothing.
    """
    left = bowen_franks(graph_e)
    right = bowen_franks(graph_f)
    sc_e = graph_e.strongly_connected()
    sc_f = graph_f.strongly_connected()
    hypothesis = sc_e and sc_f
    notes = []
    left_coker = (tuple(d for d in left.invariant_factors if d != 1), left.free_rank)
    right_coker = (tuple(d for d in right.invariant_factors if d != 1), right.free_rank)
    if left_coker != right_coker:
        notes.append(
            "cokernel data differ "
            f"({left.describe()} vs {right.describe()}); informational only"
        )
    if hypothesis and left.determinant != right.determinant:
        return CertifyResult(
            distinguished=True,
            reason=f"det {left.determinant} != {right.determinant} "
            "with both graphs strongly connected",
            left=left,
            right=right,
            hypothesis_met=True,
            notes=tuple(notes),
        )
    if not hypothesis:
        if left.determinant != right.determinant:
            notes.append(
                "determinants differ but a graph is not strongly connected; "
                "the obstruction does not apply"
            )
        reason = "strong-connectedness hypothesis not met"
    else:
        reason = f"determinants agree ({left.determinant})"
    return CertifyResult(
        distinguished=False,
        reason=reason,
        left=left,
        right=right,
        hypothesis_met=hypothesis,
        notes=tuple(notes),
    )
