"""Exact integer linear algebra.

Matrices are numpy arrays.  Work starts in ``int64`` and every row or column
operation first bounds the result; if it could leave the safe range the
working array is converted to ``dtype=object`` (Python integers) and the
computation continues exactly.  Public functions return ``object`` arrays so
callers never see a fixed-width integer.

Finitely presented abelian groups are ``Z^n`` modulo a relation lattice given
by rows.  The lattice is stored in reduced row-style Hermite normal form, which
makes equality of presentations and normal forms of elements canonical.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "as_int_matrix",
    "hnf",
    "kernel",
    "smith_normal_form",
    "SNFResult",
    "solve_integer",
    "Solver",
    "FinAbGroup",
    "Subquotient",
    "subquotient",
    "element_normal_form",
    "kernel_mod",
    "ContainmentError",
]

_LIMIT = 1 << 62
_SMALL = 1 << 31


class ContainmentError(ValueError):
    """The image subgroup is not contained in the kernel subgroup."""


def as_int_matrix(a, ncols: int | None = None) -> np.ndarray:
    """Exact 2-d ``object`` array from nested sequences or an ndarray.

    ``ncols`` fixes the width of an empty matrix.
    """
    if isinstance(a, np.ndarray):
        arr = a
    else:
        rows = [list(r) for r in a]
        if not rows:
            return np.zeros((0, ncols or 0), dtype=object)
        arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else np.zeros((0, ncols or 0), dtype=object)
    if arr.dtype != object:
        arr = arr.astype(object)
    return np.array([[int(x) for x in row] for row in arr], dtype=object).reshape(arr.shape)


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(x) for x in a.flat)
    return int(np.abs(a).max())


def _work(a: np.ndarray) -> np.ndarray:
    """Working copy: int64 when entries are small, exact objects otherwise."""
    if a.dtype == object:
        if _maxabs(a) < _SMALL:
            return a.astype(np.int64)
        return a.copy()
    return a.astype(np.int64, copy=True)


def _exact(a: np.ndarray) -> np.ndarray:
    return a.astype(object) if a.dtype != object else a


def _sub_rows(W: np.ndarray, rows, q: np.ndarray, src: int, lo: int = 0) -> np.ndarray:
    """``W[rows, lo:] -= q * W[src, lo:]``; may return a promoted array."""
    if W.dtype != object:
        bound = _maxabs(W[rows, lo:]) + _maxabs(q) * _maxabs(W[src, lo:])
        if bound >= _LIMIT:
            W = W.astype(object)
            q = q.astype(object)
    W[rows, lo:] -= q[:, None] * W[src, lo:][None, :]
    return W


def _sub_cols(W: np.ndarray, cols, q: np.ndarray, src: int) -> np.ndarray:
    """``W[:, cols] -= W[:, src] * q``; may return a promoted array."""
    if W.dtype != object:
        bound = _maxabs(W[:, cols]) + _maxabs(q) * _maxabs(W[:, src])
        if bound >= _LIMIT:
            W = W.astype(object)
            q = q.astype(object)
    W[:, cols] -= W[:, src][:, None] * q[None, :]
    return W


def _echelon(A: np.ndarray, transform: bool = True, reduced: bool = False):
    """Row echelon form ``H = U A`` by unimodular row operations.

    Returns ``(H, U, pivots)``.  Pivots are positive; rows below ``len(pivots)``
    are zero.  With ``reduced`` the entries above each pivot lie in
    ``[0, pivot)`` (Hermite normal form).
    """
    m, n = A.shape
    if transform:
        W = _work(np.hstack([_exact(A), np.eye(m, dtype=np.int64).astype(object)]))
    else:
        W = _work(A)
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        found = False
        while True:
            col = W[r:, c]
            nz = np.flatnonzero(col)
            if nz.size == 0:
                break
            found = True
            k = r + int(nz[np.argmin(np.abs(col[nz]))])
            if k != r:
                W[[r, k]] = W[[k, r]]
            if nz.size == 1:
                break
            others = r + 1 + np.flatnonzero(W[r + 1:, c])
            q = W[others, c] // W[r, c]
            W = _sub_rows(W, others, q, r, lo=c)
        if not found:
            continue
        if W[r, c] < 0:
            W[r] = -W[r]
        if reduced and r:
            q = W[:r, c] // W[r, c]
            idx = np.flatnonzero(q)
            if idx.size:
                W = _sub_rows(W, idx, q[idx], r, lo=c)
        pivots.append(c)
        r += 1
    H = W[:, :n]
    U = W[:, n:] if transform else None
    return H, U, pivots


def hnf(rows, ncols: int | None = None) -> np.ndarray:
    """Reduced row-style Hermite normal form with zero rows removed."""
    A = as_int_matrix(rows, ncols)
    if A.shape[0] == 0:
        return A
    H, _, piv = _echelon(A, transform=False, reduced=True)
    return _exact(H[: len(piv)])


def kernel(A) -> np.ndarray:
    """Basis of the integer kernel ``{x : A x = 0}`` as the columns of a matrix.

    The basis is returned in Hermite normal form (as rows of its transpose).
    """
    A = as_int_matrix(A)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=object)
    if m == 0:
        return as_int_matrix(np.eye(n, dtype=np.int64))
    _, U, piv = _echelon(A.T, transform=True)
    K = U[len(piv):]
    if K.shape[0] == 0:
        return np.zeros((n, 0), dtype=object)
    return hnf(K, n).T.copy()


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == S`` with ``S`` diagonal, ``d_1 | d_2 | ...``, zeros last."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray | None = None

    @property
    def diagonal(self) -> list[int]:
        k = min(self.S.shape)
        return [int(self.S[i, i]) for i in range(k)]


def smith_normal_form(A, want_inverse: bool = False) -> SNFResult:
    """Smith normal form with unimodular transforms (and optionally ``U^-1``)."""
    A = as_int_matrix(A)
    m, n = A.shape
    S = _work(A)
    U = np.eye(m, dtype=np.int64)
    V = np.eye(n, dtype=np.int64)
    Ui = np.eye(m, dtype=np.int64) if want_inverse else None

    def row_swap(i, j):
        nonlocal S, U, Ui
        S[[i, j]] = S[[j, i]]
        U[[i, j]] = U[[j, i]]
        if Ui is not None:
            Ui[:, [i, j]] = Ui[:, [j, i]]

    def col_swap(i, j):
        S[:, [i, j]] = S[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]

    for t in range(min(m, n)):
        while True:
            sub = S[t:, t:]
            nz = np.argwhere(sub != 0)
            if nz.shape[0] == 0:
                return _finish_snf(U, S, V, Ui)
            vals = np.abs(sub[nz[:, 0], nz[:, 1]])
            i, j = nz[int(np.argmin(vals))]
            if i:
                row_swap(t, t + int(i))
            if j:
                col_swap(t, t + int(j))
            p = S[t, t]
            rows = t + 1 + np.flatnonzero(S[t + 1:, t])
            if rows.size:
                q = S[rows, t] // p
                S = _sub_rows(S, rows, q, t, lo=t)
                U = _sub_rows(U, rows, q, t)
                if Ui is not None:
                    # inverse of the row operation is a column operation on U^-1
                    if Ui.dtype != object:
                        bound = _maxabs(Ui[:, t]) + len(rows) * _maxabs(Ui[:, rows]) * _maxabs(q)
                        if bound >= _LIMIT:
                            Ui = Ui.astype(object)
                    qq = q.astype(object) if Ui.dtype == object else q
                    Ui[:, t] = Ui[:, t] + Ui[:, rows] @ qq
            cols = t + 1 + np.flatnonzero(S[t, t + 1:])
            if cols.size:
                q = S[t, cols] // p
                S = _sub_cols(S, cols, q, t)
                V = _sub_cols(V, cols, q, t)
            if np.any(S[t + 1:, t] != 0) or np.any(S[t, t + 1:] != 0):
                continue
            rest = S[t + 1:, t + 1:]
            bad = np.argwhere(rest % p != 0) if rest.size else np.zeros((0, 2))
            if bad.shape[0]:
                k = t + 1 + int(bad[0][0])
                S = _sub_rows(S, np.array([t]), np.array([-1]), k)
                U = _sub_rows(U, np.array([t]), np.array([-1]), k)
                if Ui is not None:
                    Ui = _sub_cols(Ui, np.array([k]), np.array([1]), t)
                continue
            break
        if S[t, t] < 0:
            S[t] = -S[t]
            U[t] = -U[t]
            if Ui is not None:
                Ui[:, t] = -Ui[:, t]
    return _finish_snf(U, S, V, Ui)


def _finish_snf(U, S, V, Ui) -> SNFResult:
    return SNFResult(_exact(U), _exact(S), _exact(V), None if Ui is None else _exact(Ui))


class Solver:
    """Repeated exact solving of ``A x = b`` over the integers.

    The echelon form of ``A^T`` is computed once; each right-hand side then
    costs a forward substitution.
    """

    def __init__(self, A):
        self.A = as_int_matrix(A)
        m, n = self.A.shape
        self.m, self.n = m, n
        if n == 0:
            self.H = np.zeros((0, m), dtype=object)
            self.U = np.zeros((0, 0), dtype=object)
            self.pivots: list[int] = []
        else:
            H, U, piv = _echelon(self.A.T, transform=True)
            self.H = _exact(H[: len(piv)])
            self.U = _exact(U[: len(piv)])
            self.pivots = piv

    def solve_many(self, B) -> tuple[np.ndarray, np.ndarray]:
        """Solve for every column of ``B``; returns ``(X, ok)``."""
        B = as_int_matrix(B)
        if B.shape[0] != self.m:
            raise ValueError(f"right-hand side has {B.shape[0]} rows, expected {self.m}")
        k = B.shape[1]
        res = B.copy()
        ok = np.ones(k, dtype=bool)
        Y = np.zeros((len(self.pivots), k), dtype=object)
        prev = -1
        for j, p in enumerate(self.pivots):
            if p - prev > 1:
                ok &= ~np.any(res[prev + 1:p] != 0, axis=0)
            h = self.H[j, p]
            col = res[p]
            ok &= (col % h) == 0
            y = col // h
            y[~ok] = 0
            Y[j] = y
            res -= np.outer(self.H[j], y)
            prev = p
        if prev + 1 < self.m:
            ok &= ~np.any(res[prev + 1:] != 0, axis=0)
        X = self.U.T @ Y if len(self.pivots) else np.zeros((self.n, k), dtype=object)
        X[:, ~ok] = 0
        return X, ok

    def solve(self, b) -> np.ndarray | None:
        b = [int(x) for x in b]
        if len(b) != self.m:
            raise ValueError(f"right-hand side has length {len(b)}, expected {self.m}")
        X, ok = self.solve_many(np.array(b, dtype=object).reshape(-1, 1))
        return X[:, 0].copy() if ok[0] else None


def solve_integer(A, b) -> np.ndarray | None:
    """An integer ``x`` with ``A x = b``, or ``None`` if there is none."""
    return Solver(A).solve(b)


def _diag_rows(diag: Sequence[int]) -> list[list[int]]:
    k = len(diag)
    return [[d if i == j else 0 for j in range(k)] for i, d in enumerate(diag) if d]


class FinAbGroup:
    """``Z^n_gen`` modulo the lattice spanned by the relation rows."""

    __slots__ = ("n_gen", "relations", "_pivots")

    def __init__(self, n_gen: int, relations=(), *, _canonical: bool = False):
        self.n_gen = int(n_gen)
        if _canonical:
            R = relations
        else:
            R = hnf(as_int_matrix(relations, self.n_gen), self.n_gen)
            if R.shape[1] != self.n_gen and R.shape[0]:
                raise ValueError("relation width does not match the number of generators")
        self.relations = R.reshape(-1, self.n_gen) if R.size else np.zeros((0, self.n_gen), dtype=object)
        self._pivots = [int(np.flatnonzero(row)[0]) for row in self.relations]

    @classmethod
    def free(cls, n: int) -> "FinAbGroup":
        return cls(n)

    @classmethod
    def from_invariants(cls, invariants: Sequence[int]) -> "FinAbGroup":
        """``Z/d_1 + Z/d_2 + ...``; a zero entry is a free summand."""
        return cls(len(invariants), _diag_rows(invariants))

    @classmethod
    def block_sum(cls, group: "FinAbGroup", copies: int) -> "FinAbGroup":
        """Direct sum of ``copies`` copies of ``group`` (canonical form kept)."""
        k = group.n_gen
        r = group.relations.shape[0]
        R = np.zeros((r * copies, k * copies), dtype=object)
        for i in range(copies):
            R[i * r:(i + 1) * r, i * k:(i + 1) * k] = group.relations
        return cls(k * copies, R, _canonical=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinAbGroup):
            return NotImplemented
        return self.n_gen == other.n_gen and self.relations.tolist() == other.relations.tolist()

    def __hash__(self) -> int:
        return hash((self.n_gen, tuple(map(tuple, self.relations.tolist()))))

    def __repr__(self) -> str:
        return f"FinAbGroup({self.n_gen}, {self.relations.tolist()})"

    def __str__(self) -> str:
        return format_invariants(self.invariants())

    def normal_form(self, v) -> tuple[int, ...]:
        v = [int(x) for x in v]
        if len(v) != self.n_gen:
            raise ValueError(f"vector of length {len(v)} in a group with {self.n_gen} generators")
        for row, p in zip(self.relations, self._pivots):
            q = v[p] // row[p]
            if q:
                for j in range(p, self.n_gen):
                    v[j] -= q * row[j]
        return tuple(v)

    def normal_form_rows(self, X: np.ndarray) -> np.ndarray:
        """Normal form of every row of ``X`` (vectorised)."""
        X = X.copy()
        for row, p in zip(self.relations, self._pivots):
            q = X[:, p] // row[p]
            if np.any(q != 0):
                if X.dtype != object and _maxabs(X) + _maxabs(q) * _maxabs(row) >= _LIMIT:
                    X = X.astype(object)
                X -= np.outer(q, np.asarray(row, dtype=X.dtype))
        return X

    def is_zero(self, v) -> bool:
        return not any(self.normal_form(v))

    def invariants(self) -> list[int]:
        """Invariant factors ``d_1 | d_2 | ...`` (units dropped, free rank as zeros)."""
        if self.n_gen == 0:
            return []
        if self.relations.shape[0] == 0:
            return [0] * self.n_gen
        diag = smith_normal_form(self.relations).diagonal
        diag += [0] * (self.n_gen - len(diag))
        return [d for d in diag if d != 1]

    def order(self) -> int | None:
        """Order of the group, ``None`` if infinite."""
        out = 1
        for d in self.invariants():
            if d == 0:
                return None
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariants()


def format_invariants(inv: Sequence[int]) -> str:
    if not inv:
        return "0"
    return " x ".join("Z" if d == 0 else f"Z/{d}" for d in inv)


def element_normal_form(M: FinAbGroup, v) -> tuple[int, ...]:
    return M.normal_form(v)


def kernel_mod(A, target: FinAbGroup) -> np.ndarray:
    """Generators (columns) of ``{x : A x = 0 in target}``."""
    A = as_int_matrix(A, None)
    n = A.shape[1]
    R = target.relations
    if R.shape[0] == 0:
        return kernel(A)
    K = kernel(np.hstack([A, R.T]))
    X = K[:n]
    if X.shape[1] == 0:
        return X
    return hnf(X.T, n).T.copy()


class Subquotient:
    """``(span K + R) / (span I + R)`` inside an ambient group.

    Unpacks as ``(group, projection)``; ``projection`` maps coordinates with
    respect to the columns of the kernel map to canonical coordinates of
    ``group``.
    """

    def __init__(self, ambient: FinAbGroup, kernel_map, image_map):
        self.ambient = ambient
        n = ambient.n_gen
        K = as_int_matrix(kernel_map, None).reshape(n, -1) if n else np.zeros((0, 0), dtype=object)
        I = as_int_matrix(image_map, None).reshape(n, -1) if n else np.zeros((0, 0), dtype=object)
        self.kernel_map = K
        R = ambient.relations.T
        self._member = Solver(np.hstack([K, R]))
        if I.shape[1]:
            _, ok = self._member.solve_many(I)
            if not ok.all():
                bad = int(np.flatnonzero(~ok)[0])
                raise ContainmentError(f"image column {bad} is not in the kernel subgroup")
        k = K.shape[1]
        if k == 0:
            self.group = FinAbGroup(0)
            self.projection = np.zeros((0, 0), dtype=object)
            self.generators = np.zeros((n, 0), dtype=object)
            return
        big = np.hstack([K, -I, -R]) if (I.shape[1] or R.shape[1]) else K
        rel = kernel(big)[:k]
        if rel.shape[1] == 0:
            rel = np.zeros((k, 1), dtype=object)
        snf = smith_normal_form(rel, want_inverse=True)
        diag = snf.diagonal + [0] * (k - min(rel.shape))
        keep = [i for i, d in enumerate(diag) if d != 1]
        self.projection = snf.U[keep].copy()
        self.generators = (K @ snf.U_inv[:, keep]) if keep else np.zeros((n, 0), dtype=object)
        self.group = FinAbGroup.from_invariants([diag[i] for i in keep])

    def __iter__(self):
        yield self.group
        yield self.projection

    def classify(self, v) -> tuple[int, ...] | None:
        """Class of an ambient vector, or ``None`` if it is outside the kernel subgroup."""
        x = self._member.solve(v)
        if x is None:
            return None
        y = x[: self.kernel_map.shape[1]]
        return self.group.normal_form(self.projection @ y if len(y) else [])

    def classify_many(self, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        X, ok = self._member.solve_many(V)
        Y = self.projection @ X[: self.kernel_map.shape[1]]
        return self.group.normal_form_rows(Y.T), ok


def subquotient(ambient: FinAbGroup, kernel_map, image_map) -> Subquotient:
    return Subquotient(ambient, kernel_map, image_map)


def lattice_contains(lattice_rows, v) -> bool:
    G = FinAbGroup(len(v), lattice_rows)
    return G.is_zero(v)


def same_lattice(rows_a, rows_b, n: int) -> bool:
    return hnf(as_int_matrix(rows_a, n), n).tolist() == hnf(as_int_matrix(rows_b, n), n).tolist()


def iter_columns(A: np.ndarray) -> Iterable[np.ndarray]:
    for j in range(A.shape[1]):
        yield A[:, j]
