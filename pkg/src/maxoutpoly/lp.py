"""Exact two-phase simplex over the rationals.

The solver works on tableaux of ``mpq`` entries with Bland's rule (lowest
index enters, ties in the ratio test go to the lowest basic index), so it
always terminates and re-running it on the same input is bit-identical.

Besides the general :func:`lp_optimize`, this module contains the two cone
predicates every geometric routine reduces to:

* :func:`cone_strict_feasible` -- does ``{x : A x > 0, E x = 0}`` have a point?
* :func:`cone_is_trivial` -- is ``{v : M v >= 0, E v = 0}`` just ``{0}``?

Both are solved through their Gordan-style alternative system, which has
``n + 1`` rows regardless of how many constraints the cone has, and both
return a certificate that :meth:`verify` re-checks with plain arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .rational import ONE, ZERO, Q, RatVector, dot, fmt, fmt_vec, mat, nullspace, rank, vec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, EQ, GE = "<=", "=", ">="


class LPError(ValueError):
    pass


@dataclass
class _StandardResult:
    status: str
    x: Optional[list] = None
    value: Optional[object] = None
    duals: Optional[list] = None
    farkas: Optional[list] = None


def _pivot(T: list, obj: list, r: int, j: int) -> None:
    pr = T[r]
    inv = 1 / pr[j]
    if inv != 1:
        for k in range(len(pr)):
            if pr[k]:
                pr[k] *= inv
    nz = [k for k, y in enumerate(pr) if y]
    for row in T:
        if row is pr:
            continue
        f = row[j]
        if f:
            for k in nz:
                row[k] -= f * pr[k]
    f = obj[j]
    if f:
        for k in nz:
            obj[k] -= f * pr[k]


def _run(T: list, obj: list, basis: list, allowed: int) -> bool:
    """Bland-rule simplex iterations; returns False when unbounded."""
    while True:
        j = next((k for k in range(allowed) if obj[k] < 0), None)
        if j is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[j]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        r = best[1]
        _pivot(T, obj, r, j)
        basis[r] = j


def _simplex_standard(A: Sequence[Sequence], b: Sequence, c: Sequence) -> _StandardResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``.

    Returns primal point, optimal value and the equality duals ``pi`` with
    ``c - pi A >= 0`` at optimality; for infeasible systems a Farkas vector
    ``y`` with ``y A <= 0`` and ``y b > 0``.
    """
    m = len(A)
    N = len(c)
    flip = [Q(bi) < 0 for bi in b]
    T = []
    for i in range(m):
        s = -1 if flip[i] else 1
        row = [s * Q(x) for x in A[i]] + [ZERO] * m + [s * Q(b[i])]
        row[N + i] = ONE
        T.append(row)
    basis = [N + i for i in range(m)]

    # Phase 1: minimize the sum of artificials; artificials never re-enter.
    obj = [ZERO] * (N + m + 1)
    for row in T:
        for k in range(N):
            if row[k]:
                obj[k] -= row[k]
        obj[-1] -= row[-1]
    _run(T, obj, basis, N)
    if obj[-1] != 0:
        farkas = []
        for i in range(m):
            yi = sum((T[r][N + i] for r in range(m) if basis[r] >= N), ZERO)
            farkas.append(-yi if flip[i] else yi)
        return _StandardResult(INFEASIBLE, farkas=farkas)

    # Drive zero-level artificials out of the basis where possible; rows that
    # cannot be cleared are redundant and keep their artificial at zero.
    for r in range(m):
        if basis[r] >= N:
            j = next((k for k in range(N) if T[r][k]), None)
            if j is not None:
                _pivot(T, obj, r, j)
                basis[r] = j

    cq = [Q(x) for x in c]
    obj = cq + [ZERO] * m + [ZERO]
    for r, bv in enumerate(basis):
        cb = cq[bv] if bv < N else ZERO
        if cb:
            row = T[r]
            for k, y in enumerate(row):
                if y:
                    obj[k] -= cb * y
    if not _run(T, obj, basis, N):
        return _StandardResult(UNBOUNDED)
    x = [ZERO] * N
    for r, bv in enumerate(basis):
        if bv < N:
            x[bv] = T[r][-1]
    value = sum((cq[k] * x[k] for k in range(N) if cq[k]), ZERO)
    duals = []
    for i in range(m):
        pi = ZERO
        for r, bv in enumerate(basis):
            if bv < N and cq[bv]:
                pi += cq[bv] * T[r][N + i]
        duals.append(-pi if flip[i] else pi)
    return _StandardResult(OPTIMAL, x=x, value=value, duals=duals)


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` ``c.x`` subject to ``A x (rel) b`` and per-variable bounds.

    ``bounds`` holds one ``(lower, upper)`` pair per variable, ``None``
    meaning unbounded on that side; omitted bounds make every variable free.
    """

    objective: RatVector
    A: tuple
    b: RatVector
    relations: tuple
    bounds: Optional[tuple] = None
    sense: str = "max"

    def __post_init__(self):
        object.__setattr__(self, "objective", vec(self.objective))
        object.__setattr__(self, "A", mat(self.A))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "relations", tuple(self.relations))
        n = len(self.objective)
        if any(len(r) != n for r in self.A):
            raise LPError("constraint rows must match the objective length")
        if len(self.b) != len(self.A) or len(self.relations) != len(self.A):
            raise LPError("one right-hand side and relation per constraint row")
        if any(rel not in (LE, EQ, GE) for rel in self.relations):
            raise LPError(f"relations must be one of {LE!r}, {EQ!r}, {GE!r}")
        if self.sense not in ("max", "min"):
            raise LPError("sense must be 'max' or 'min'")
        if self.bounds is not None:
            bnds = tuple(
                (None if lo is None else Q(lo), None if hi is None else Q(hi)) for lo, hi in self.bounds
            )
            if len(bnds) != n:
                raise LPError("one bound pair per variable")
            object.__setattr__(self, "bounds", bnds)

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[object] = None
    point: Optional[RatVector] = None

    def __repr__(self) -> str:
        if self.status == OPTIMAL:
            return f"Optimal(value={fmt(self.value)}, point=({', '.join(fmt_vec(self.point))}))"
        return self.status.capitalize()


def lp_optimize(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly. The three statuses are exhaustive."""
    n = lp.nvars
    bounds = lp.bounds or ((None, None),) * n
    # Each original variable becomes offset + sum(coef * standard column).
    cols: list[list[tuple[int, int]]] = []
    offset = [ZERO] * n
    ncol = 0
    extra_rows = []
    for k, (lo, hi) in enumerate(bounds):
        if lo is not None:
            offset[k] = lo
            cols.append([(ncol, 1)])
            if hi is not None:
                if hi < lo:
                    return LPResult(INFEASIBLE)
                extra_rows.append((ncol, hi - lo))
            ncol += 1
        elif hi is not None:
            offset[k] = hi
            cols.append([(ncol, -1)])
            ncol += 1
        else:
            cols.append([(ncol, 1), (ncol + 1, -1)])
            ncol += 2
    n_slack = sum(1 for rel in lp.relations if rel != EQ) + len(extra_rows)
    width = ncol + n_slack
    A_std, b_std = [], []
    s = ncol
    for row, rhs, rel in zip(lp.A, lp.b, lp.relations):
        r = [ZERO] * width
        for k, a in enumerate(row):
            if a:
                for cidx, sign in cols[k]:
                    r[cidx] += sign * a
        rhs = rhs - dot(row, offset)
        if rel == LE:
            r[s] = ONE
            s += 1
        elif rel == GE:
            r[s] = -ONE
            s += 1
        A_std.append(r)
        b_std.append(rhs)
    for cidx, cap in extra_rows:
        r = [ZERO] * width
        r[cidx] = ONE
        r[s] = ONE
        s += 1
        A_std.append(r)
        b_std.append(cap)
    sign = -1 if lp.sense == "max" else 1
    c_std = [ZERO] * width
    for k, ck in enumerate(lp.objective):
        if ck:
            for cidx, sg in cols[k]:
                c_std[cidx] += sign * sg * ck
    res = _simplex_standard(A_std, b_std, c_std)
    if res.status != OPTIMAL:
        return LPResult(res.status)
    point = tuple(offset[k] + sum((sg * res.x[cidx] for cidx, sg in cols[k]), ZERO) for k in range(n))
    return LPResult(OPTIMAL, dot(lp.objective, point), point)


def satisfies(lp: LinearProgram, point: Sequence) -> bool:
    """Exact replay of every constraint and bound at ``point``."""
    point = vec(point)
    for row, rhs, rel in zip(lp.A, lp.b, lp.relations):
        lhs = dot(row, point)
        if (rel == LE and lhs > rhs) or (rel == GE and lhs < rhs) or (rel == EQ and lhs != rhs):
            return False
    for x, (lo, hi) in zip(point, lp.bounds or ()):
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            return False
    return True


@dataclass
class ConeCertificate:
    """Outcome of a strict-feasibility query on ``{x : A x > 0, E x = 0}``.

    Exactly one of ``witness`` (a point with ``A x >= 1``, ``E x = 0``) or
    ``alternative`` (``y >= 0`` summing to 1 and ``w`` with
    ``A^T y + E^T w = 0``) is set.
    """

    A: tuple
    E: tuple
    n: int
    witness: Optional[RatVector] = None
    alternative: Optional[tuple] = None

    @property
    def feasible(self) -> bool:
        return self.witness is not None

    def verify(self) -> bool:
        if self.witness is not None:
            x = self.witness
            return all(dot(a, x) > 0 for a in self.A) and all(dot(e, x) == 0 for e in self.E)
        y, w = self.alternative
        if any(t < 0 for t in y) or sum(y, ZERO) != 1:
            return False
        for c in range(self.n):
            s = sum((y[k] * self.A[k][c] for k in range(len(self.A))), ZERO)
            s += sum((w[j] * self.E[j][c] for j in range(len(self.E))), ZERO)
            if s != 0:
                return False
        return True

    def to_json(self) -> dict:
        out = {
            "system": {
                "strict": [fmt_vec(a) for a in self.A],
                "equal": [fmt_vec(e) for e in self.E],
                "n": self.n,
                "lp": "max eps s.t. A x >= eps*1, E x = 0, eps <= 1",
            },
            "status": "strictly_feasible" if self.feasible else "no_interior",
        }
        if self.witness is not None:
            out["witness"] = fmt_vec(self.witness)
            out["eps"] = "1"
        else:
            out["multipliers"] = {"A": fmt_vec(self.alternative[0]), "E": fmt_vec(self.alternative[1])}
            out["eps"] = "0"
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConeCertificate":
        sysd = data["system"]
        n = int(sysd["n"])
        cert = cls(mat(sysd["strict"]), mat(sysd["equal"]), n)
        if "witness" in data:
            cert.witness = vec(data["witness"])
        else:
            cert.alternative = (vec(data["multipliers"]["A"]), vec(data["multipliers"]["E"]))
        return cert


def cone_certificate(A: Sequence[Sequence], n: int, E: Sequence[Sequence] = ()) -> ConeCertificate:
    """Decide strict feasibility of ``{x : A x > 0, E x = 0}`` with proof.

    This is the auxiliary program ``max eps s.t. A x >= eps 1, E x = 0,
    eps <= 1`` solved through its dual ``min t s.t. A^T y + E^T w = 0,
    1^T y + t = 1, y, t >= 0``: the optimum is 1 exactly when the cone has
    interior, and the dual multipliers of that program are a witness.
    """
    A = tuple(tuple(r) for r in A)
    E = tuple(tuple(r) for r in E)
    m, e = len(A), len(E)
    rows = []
    for c in range(n):
        rows.append([A[k][c] for k in range(m)] + [E[j][c] for j in range(e)] + [-E[j][c] for j in range(e)] + [ZERO])
    rows.append([ONE] * m + [ZERO] * (2 * e) + [ONE])
    b = [ZERO] * n + [ONE]
    cost = [ZERO] * (m + 2 * e) + [ONE]
    res = _simplex_standard(rows, b, cost)
    if res.status != OPTIMAL:
        raise LPError(f"alternative system unexpectedly {res.status}")
    cert = ConeCertificate(A, E, n)
    if res.value == 0:
        y = tuple(res.x[:m])
        w = tuple(res.x[m + j] - res.x[m + e + j] for j in range(e))
        cert.alternative = (y, w)
    else:
        cert.witness = tuple(-p for p in res.duals[:n])
    if not cert.verify():
        raise LPError("cone certificate failed exact verification")
    return cert


def _sqnorm(row) -> object:
    return sum((x * x for x in row), ZERO)


def cone_certificate_lazy(A: Sequence[Sequence], n: int, E: Sequence[Sequence] = (), start: int = 0) -> ConeCertificate:
    """Same answer as :func:`cone_certificate`, by constraint generation.

    Solves on a few short rows first and adds rows the current witness
    violates. A certificate of no interior on a subset of the rows is one
    for the whole system, so only the final witness needs the full check.
    """
    A = tuple(tuple(r) for r in A)
    E = tuple(tuple(r) for r in E)
    m = len(A)
    start = start or 2 * n
    if m <= start + n:
        return cone_certificate(A, n, E)
    order = sorted(range(m), key=lambda k: (_sqnorm(A[k]), k))
    active = sorted(order[:start])
    while True:
        sub_cert = cone_certificate([A[k] for k in active], n, E)
        if not sub_cert.feasible:
            y = [ZERO] * m
            for k, yk in zip(active, sub_cert.alternative[0]):
                y[k] = yk
            cert = ConeCertificate(A, E, n, alternative=(tuple(y), sub_cert.alternative[1]))
            break
        x = sub_cert.witness
        slack = [(dot(A[k], x), k) for k in range(m)]
        bad = sorted((v, k) for v, k in slack if v <= 0)
        if not bad:
            cert = ConeCertificate(A, E, n, witness=x)
            break
        active = sorted(set(active) | {k for _, k in bad[: n + 1]})
    if not cert.verify():
        raise LPError("cone certificate failed exact verification")
    return cert


def cone_strict_feasible(A: Sequence[Sequence], E: Sequence[Sequence] = (), n: Optional[int] = None) -> Optional[RatVector]:
    """A point ``x`` with ``A x >= 1`` and ``E x = 0``, or ``None`` if the
    cone ``{x : A x >= 0, E x = 0}`` has no point strictly inside all of the
    inequalities."""
    A = mat(A)
    E = mat(E)
    if n is None:
        if A:
            n = len(A[0])
        elif E:
            n = len(E[0])
        else:
            raise LPError("cannot infer the dimension of an empty system")
    return cone_certificate(A, n, E).witness


@dataclass
class TrivialConeCertificate:
    """Outcome of asking whether ``{v : M v >= 0, E v = 0}`` equals ``{0}``.

    ``trivial`` certificates carry ``y > 0`` and ``z`` with
    ``M^T y + E^T z = 0`` (together with ``rank [M; E] = n`` this makes the
    rows positively span the space); nontrivial ones carry a nonzero point.
    """

    M: tuple
    E: tuple
    n: int
    trivial: bool = False
    multipliers: Optional[tuple] = None
    point: Optional[RatVector] = None

    def verify(self) -> bool:
        if not self.trivial:
            v = self.point
            return (
                any(v)
                and all(dot(a, v) >= 0 for a in self.M)
                and all(dot(e, v) == 0 for e in self.E)
            )
        if rank(list(self.M) + list(self.E)) != self.n:
            return False
        y, z = self.multipliers
        if any(t <= 0 for t in y):
            return False
        for c in range(self.n):
            s = sum((y[k] * self.M[k][c] for k in range(len(self.M))), ZERO)
            s += sum((z[j] * self.E[j][c] for j in range(len(self.E))), ZERO)
            if s != 0:
                return False
        return True

    def to_json(self) -> dict:
        out = {
            "system": {"nonneg": [fmt_vec(a) for a in self.M], "equal": [fmt_vec(e) for e in self.E], "n": self.n},
            "status": "only_origin" if self.trivial else "contains_nonzero",
        }
        if self.trivial:
            out["multipliers"] = {"M": fmt_vec(self.multipliers[0]), "E": fmt_vec(self.multipliers[1])}
        else:
            out["point"] = fmt_vec(self.point)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TrivialConeCertificate":
        sysd = data["system"]
        cert = cls(mat(sysd["nonneg"]), mat(sysd["equal"]), int(sysd["n"]))
        if data["status"] == "only_origin":
            cert.trivial = True
            cert.multipliers = (vec(data["multipliers"]["M"]), vec(data["multipliers"]["E"]))
        else:
            cert.point = vec(data["point"])
        return cert


def cone_is_trivial(M: Sequence[Sequence], n: int, E: Sequence[Sequence] = ()) -> TrivialConeCertificate:
    """Decide whether the closed cone ``{v : M v >= 0, E v = 0}`` is ``{0}``."""
    M = tuple(tuple(r) for r in M)
    E = tuple(tuple(r) for r in E)
    cert = TrivialConeCertificate(M, E, n)
    stacked = list(M) + list(E)
    if rank(stacked) < n:
        cert.point = nullspace(stacked, n)[0]
    elif not M:
        cert.trivial = True
        cert.multipliers = ((), tuple(ZERO for _ in E))
    else:
        # max eps s.t. M^T (u + eps 1) + E^T z = 0, 1^T u + m eps = 1.
        m, e = len(M), len(E)
        colsum = [sum((M[k][c] for k in range(m)), ZERO) for c in range(n)]
        rows = []
        for c in range(n):
            rows.append([M[k][c] for k in range(m)] + [colsum[c]] + [E[j][c] for j in range(e)] + [-E[j][c] for j in range(e)])
        rows.append([ONE] * m + [Q(m)] + [ZERO] * (2 * e))
        b = [ZERO] * n + [ONE]
        cost = [ZERO] * m + [-ONE] + [ZERO] * (2 * e)
        res = _simplex_standard(rows, b, cost)
        if res.status == INFEASIBLE:
            # No nonzero y >= 0 annihilates the rows: the cone has interior.
            cert.point = cone_certificate(M, n, E).witness
        elif res.status != OPTIMAL:
            raise LPError(f"positive-span program unexpectedly {res.status}")
        elif res.x[m] > 0:
            eps = res.x[m]
            cert.trivial = True
            cert.multipliers = (
                tuple(res.x[k] + eps for k in range(m)),
                tuple(res.x[m + 1 + j] - res.x[m + 1 + e + j] for j in range(e)),
            )
        else:
            cert.point = tuple(-p for p in res.duals[:n])
    if not cert.verify():
        raise LPError("cone triviality certificate failed exact verification")
    return cert
