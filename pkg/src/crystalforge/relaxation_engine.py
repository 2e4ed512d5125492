"""Level-k lift-and-project systems over digraphs and their exact deciders.

``build_ip_system`` materializes the equation system with one lambda
variable per (vertex-tuple, value-tuple) pair and one mu variable per
(instance edge, template edge) pair: normalization, lambda marginality over
all k-tuples of positions, mu marginality, and the pattern-vanishing
equations (realized as forced-zero variables).

Three deciders share the infrastructure:

* BLP: nonnegative rational feasibility (exact-rational simplex, phase 1,
  Bland's anti-cycling rule);
* AIP: integer feasibility (Smith normal form with minimal-absolute-value
  pivoting);
* BA: rational feasibility, then integer feasibility of the system refined
  by zeroing every variable that vanishes on the whole polytope (the
  relative-interior support, found by maximizing variables one at a time).

Everything is exact: the only number types are arbitrary-precision
integers and rationals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

try:  # gmpy2 is markedly faster; fall back to the stdlib when unavailable
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

from .digraph_lab import Digraph

VarKey = tuple  # ('l', x_tuple, a_tuple) or ('m', x_edge, a_edge)


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple[VarKey, ...]
    equations: tuple[tuple[tuple[tuple[VarKey, int], ...], int], ...]
    forced_zero: frozenset[VarKey]

    def live_variables(self) -> list[VarKey]:
        return [v for v in self.variables if v not in self.forced_zero]


def refines(s: tuple, t: tuple) -> bool:
    """s < t in the pattern order: equal coordinates of s force equality in t."""
    seen: dict = {}
    for sv, tv in zip(s, t):
        if sv in seen:
            if seen[sv] != tv:
                return False
        else:
            seen[sv] = tv
    return True


def var_key_str(v: VarKey) -> str:
    kind, x, a = v
    return f"{kind}:{','.join(map(str, x))}:{','.join(map(str, a))}"


def _blocks(t: tuple) -> tuple[list[int], int]:
    """Equality pattern of a tuple: block id per position, number of blocks."""
    seen: dict = {}
    out = []
    for v in t:
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return out, len(seen)


def _canon(coeffs: dict, rhs: int):
    items = tuple(sorted(coeffs.items()))
    if not items:
        return (items, rhs)
    if items[0][1] < 0:
        items = tuple((v, -c) for v, c in items)
        rhs = -rhs
    return (items, rhs)


def build_ip_system(x_graph: Digraph, a_graph: Digraph, k: int) -> LinearSystem:
    """The full level-k equation system for instance X against template A.

    At k = 1 the mu pattern-vanishing family is dropped; everything else is
    uniform in k.  Forced-zero variables (pattern vanishing) are eliminated
    up front: they are declared but never appear in an equation.
    """
    if k < 1:
        raise ValueError("level k must be >= 1")
    xv = list(range(1, x_graph.vertex_count + 1))
    av = list(range(1, a_graph.vertex_count + 1))
    x_edges = x_graph.sorted_edges()
    a_edges = a_graph.sorted_edges()

    lam_keys = [
        ("l", x, a)
        for x in itertools.product(xv, repeat=k)
        for a in itertools.product(av, repeat=k)
    ]
    mu_keys = [("m", y, b) for y in x_edges for b in a_edges]

    forced = {key for key in lam_keys if not refines(key[1], key[2])}
    if k >= 2:
        forced.update(key for key in mu_keys if not refines(key[1], key[2]))

    equations: dict = {}

    def emit(coeffs: dict, rhs: int):
        if not coeffs and rhs == 0:
            return
        equations.setdefault(_canon(coeffs, rhs), None)

    def compatible(pattern_blocks: list[int], nblocks: int):
        for vals in itertools.product(av, repeat=nblocks):
            yield tuple(vals[b] for b in pattern_blocks)

    # normalization: each lambda slice sums to one
    for x in itertools.product(xv, repeat=k):
        bl, nb = _blocks(x)
        coeffs = {("l", x, a): 1 for a in compatible(bl, nb)}
        emit(coeffs, 1)

    # lambda marginality: projecting the x-slice onto any position tuple i
    # reproduces the slice of the projected vertex tuple
    positions = list(itertools.product(range(k), repeat=k))
    for x in itertools.product(xv, repeat=k):
        bl_x, nb_x = _blocks(x)
        for i in positions:
            xi = tuple(x[p] for p in i)
            bl_i, nb_i = _blocks(xi)
            for a in compatible(bl_i, nb_i):
                # pins: value of each x-block touched by a position of i
                pin: dict[int, int] = {}
                for pos, val in zip(i, a):
                    pin[bl_x[pos]] = val
                free = [b for b in range(nb_x) if b not in pin]
                coeffs: dict = {}
                for vals in itertools.product(av, repeat=len(free)):
                    assign = dict(pin)
                    assign.update(zip(free, vals))
                    ahat = tuple(assign[b] for b in bl_x)
                    key = ("l", x, ahat)
                    coeffs[key] = coeffs.get(key, 0) + 1
                rkey = ("l", xi, a)
                coeffs[rkey] = coeffs.get(rkey, 0) - 1
                coeffs = {v: c for v, c in coeffs.items() if c}
                emit(coeffs, 0)

    # mu marginality: the i-projection of an edge's mu slice reproduces
    # the lambda slice of the projected vertex tuple
    idx2 = list(itertools.product((0, 1), repeat=k))
    for y in x_edges:
        for i in idx2:
            yi = tuple(y[p] for p in i)
            by_a: dict[tuple, dict] = {}
            for b in a_edges:
                if ("m", y, b) in forced:
                    continue
                a = tuple(b[p] for p in i)
                by_a.setdefault(a, {})[("m", y, b)] = 1
            for a in itertools.product(av, repeat=k):
                coeffs = dict(by_a.get(a, {}))
                rkey = ("l", yi, a)
                if rkey not in forced:
                    coeffs[rkey] = coeffs.get(rkey, 0) - 1
                coeffs = {v: c for v, c in coeffs.items() if c}
                emit(coeffs, 0)

    eq_tuple = tuple(sorted(equations))
    return LinearSystem(tuple(lam_keys + mu_keys), eq_tuple, frozenset(forced))


# ---------------------------------------------------------------------------
# Presolve: repeatedly eliminate variables via equations that determine them,
# keeping the reduced system equivalent.  In nonneg (LP) mode a variable may
# only be replaced by an expression that is itself manifestly nonnegative;
# in integer mode any unit-coefficient variable may be eliminated.
# ---------------------------------------------------------------------------


class _Reduced:
    __slots__ = ("infeasible", "eqs", "subs", "live")

    def __init__(self):
        self.infeasible = False
        self.eqs: list[tuple[dict, object]] = []
        self.subs: dict = {}  # var -> (const, {var: coeff})
        self.live: set = set()

    def resolve(self, assignment: dict, cache: dict | None = None) -> dict:
        """Extend an assignment of live variables to all eliminated ones."""
        if cache is None:
            cache = {}

        def value(v):
            if v in cache:
                return cache[v]
            if v in self.subs:
                const, lin = self.subs[v]
                val = const + sum(c * value(w) for w, c in lin.items())
            else:
                val = assignment.get(v, 0)
            cache[v] = val
            return val

        out = {}
        for v in set(self.subs) | self.live | set(assignment):
            out[v] = value(v)
        return out

    def support_status(self, positive_live: set) -> set:
        """Variables that can be positive, given the support of live ones."""
        cache: dict = {}

        def pos(v):
            if v in cache:
                return cache[v]
            cache[v] = False  # guard (substitutions are acyclic anyway)
            if v in self.subs:
                const, lin = self.subs[v]
                r = const > 0 or any(c > 0 and pos(w) for w, c in lin.items())
            else:
                r = v in positive_live
            cache[v] = r
            return r

        return {v for v in set(self.subs) | self.live if pos(v)}


def _reduce(equations, nonneg: bool) -> _Reduced:
    red = _Reduced()
    num = _Q if nonneg else int
    eqs: dict[int, tuple[dict, object]] = {}
    occ: dict = {}
    for eid, (items, rhs) in enumerate(equations):
        coeffs = {v: num(c) for v, c in items if c}
        eqs[eid] = (coeffs, num(rhs))
        for v in coeffs:
            occ.setdefault(v, set()).add(eid)
    work = list(eqs)
    in_work = set(work)

    def substitute(v, const, lin):
        red.subs[v] = (const, dict(lin))
        for eid in list(occ.pop(v, ())):
            if eid not in eqs:
                continue
            coeffs, rhs = eqs[eid]
            c = coeffs.pop(v, None)
            if c is None:
                continue
            rhs = rhs - c * const
            for w, cw in lin.items():
                nc = coeffs.get(w, 0) + c * cw
                if nc:
                    coeffs[w] = nc
                    occ.setdefault(w, set()).add(eid)
                else:
                    coeffs.pop(w, None)
                    occ.get(w, set()).discard(eid)
            eqs[eid] = (coeffs, rhs)
            if eid not in in_work:
                work.append(eid)
                in_work.add(eid)

    while work:
        eid = work.pop()
        in_work.discard(eid)
        if eid not in eqs:
            continue
        coeffs, rhs = eqs[eid]
        if not coeffs:
            if rhs != 0:
                red.infeasible = True
                return red
            del eqs[eid]
            continue
        if len(coeffs) == 1:
            (v, c), = coeffs.items()
            if nonneg:
                val = rhs / c
                if val < 0:
                    red.infeasible = True
                    return red
            else:
                if rhs % c:
                    red.infeasible = True
                    return red
                val = rhs // c
            del eqs[eid]
            substitute(v, val, {})
            continue
        if nonneg:
            pos = all(c > 0 for c in coeffs.values())
            neg = all(c < 0 for c in coeffs.values())
            if pos or neg:
                if rhs == 0:
                    vs = list(coeffs)
                    del eqs[eid]
                    for v in vs:
                        substitute(v, num(0), {})
                    continue
                if (pos and rhs < 0) or (neg and rhs > 0):
                    red.infeasible = True
                    return red
            # substitution v := rhs/c - sum(cj/c) wj, valid when every term
            # of the replacement is nonnegative
            cand = None
            for v, c in coeffs.items():
                const = rhs / c
                if const < 0:
                    continue
                if all(w == v or (cw / c) <= 0 for w, cw in coeffs.items()):
                    use = len(occ.get(v, ()))
                    if cand is None or use < cand[0]:
                        cand = (use, v, c)
            if cand is not None:
                _, v, c = cand
                lin = {w: -cw / c for w, cw in coeffs.items() if w != v}
                del eqs[eid]
                occ.get(v, set()).discard(eid)
                for w in lin:
                    occ.get(w, set()).discard(eid)
                substitute(v, rhs / c, lin)
                continue
        else:
            cand = None
            for v, c in coeffs.items():
                if c in (1, -1):
                    use = len(occ.get(v, ()))
                    if cand is None or use < cand[0]:
                        cand = (use, v, c)
            if cand is not None:
                _, v, c = cand
                lin = {w: -cw // c for w, cw in coeffs.items() if w != v}
                del eqs[eid]
                occ.get(v, set()).discard(eid)
                for w in lin:
                    occ.get(w, set()).discard(eid)
                substitute(v, rhs // c, lin)
                continue

    # final dedup (and, in integer mode, content reduction)
    seen = set()
    final = []
    for coeffs, rhs in eqs.values():
        if not coeffs:
            if rhs != 0:
                red.infeasible = True
                return red
            continue
        if not nonneg:
            g = 0
            for c in coeffs.values():
                g = math.gcd(g, abs(int(c)))
            if g > 1:
                if rhs % g:
                    red.infeasible = True
                    return red
                coeffs = {v: c // g for v, c in coeffs.items()}
                rhs = rhs // g
        key_items = tuple(sorted(coeffs.items()))
        lead = key_items[0][1]
        if nonneg:
            key = (tuple((v, c / lead) for v, c in key_items), rhs / lead)
        else:
            if lead < 0:
                key = (tuple((v, -c) for v, c in key_items), -rhs)
            else:
                key = (key_items, rhs)
        if key in seen:
            continue
        seen.add(key)
        final.append((coeffs, rhs))
    red.eqs = final
    red.live = {v for coeffs, _ in final for v in coeffs}
    return red


# ---------------------------------------------------------------------------
# Exact-rational simplex (phase 1 + objective phase), Bland's rule.
# ---------------------------------------------------------------------------


class _Simplex:
    """Equality-form simplex over exact rationals.

    Rows are first brought to reduced row-echelon form (dropping dependent
    rows, detecting rational inconsistency), then phase 1 drives artificial
    variables out.  After ``feasible()`` succeeds, ``maximize`` can be
    called repeatedly with different objective columns (warm starts from
    the current feasible basis).
    """

    def __init__(self, eqs, variables):
        self.vars = list(variables)
        self.n = len(self.vars)
        self.col = {v: j for j, v in enumerate(self.vars)}
        self.inconsistent = False
        rows = []
        pivots: dict[int, int] = {}  # col -> row index in rows
        for coeffs, rhs in eqs:
            row = [_Q(0)] * (self.n + 1)
            for v, c in coeffs.items():
                row[self.col[v]] = _Q(c)
            row[self.n] = _Q(rhs)
            for j, ri in pivots.items():
                if row[j]:
                    f = row[j]
                    pr = rows[ri]
                    for jj in range(self.n + 1):
                        if pr[jj]:
                            row[jj] -= f * pr[jj]
            lead = next((j for j in range(self.n) if row[j]), None)
            if lead is None:
                if row[self.n]:
                    self.inconsistent = True
                    return
                continue
            f = row[lead]
            if f != 1:
                for jj in range(self.n + 1):
                    if row[jj]:
                        row[jj] /= f
            for ri, r2 in enumerate(rows):
                if r2[lead]:
                    f = r2[lead]
                    for jj in range(self.n + 1):
                        if row[jj]:
                            r2[jj] -= f * row[jj]
            pivots[lead] = len(rows)
            rows.append(row)
        self.rows = rows
        self.basis = [None] * len(rows)
        for j, ri in pivots.items():
            self.basis[ri] = j

    def feasible(self) -> bool:
        if self.inconsistent:
            return False
        m = len(self.rows)
        # phase 1: one artificial column per row with negative rhs
        ncols = self.n + m
        tab = []
        basis = []
        art = set()
        for i, r in enumerate(self.rows):
            row = list(r[: self.n])
            extra = [_Q(0)] * m
            if r[self.n] < 0:
                row = [-c for c in row]
                rhs = -r[self.n]
                extra[i] = _Q(1)
                basis.append(self.n + i)
                art.add(self.n + i)
            else:
                rhs = r[self.n]
                basis.append(self.basis[i])
            tab.append(row + extra + [rhs])
        self._tab, self._basis, self._ncols = tab, basis, ncols
        if art:
            cost = [_Q(0)] * ncols
            for j in art:
                cost[j] = _Q(-1)
            opt = self._run(cost)
            if opt is None or opt < 0:
                return False
        # drive leftover artificials out of the basis
        for i in range(len(tab) - 1, -1, -1):
            if basis[i] in art:
                piv = next((j for j in range(self.n) if tab[i][j]), None)
                if piv is None:
                    del tab[i]
                    del basis[i]
                else:
                    self._pivot(i, piv)
        for row in tab:
            del row[self.n : self.n + m]
        self._ncols = self.n
        return True

    def _pivot(self, i, j):
        tab = self._tab
        row = tab[i]
        p = row[j]
        if p != 1:
            inv = 1 / p
            tab[i] = row = [c * inv for c in row]
        for ii, r2 in enumerate(tab):
            if ii != i and r2[j]:
                f = r2[j]
                tab[ii] = [a - f * b for a, b in zip(r2, row)]
        self._basis[i] = j

    def _run(self, cost) -> Optional[object]:
        """Maximize cost^T x from the current feasible basis (Bland's rule).

        Returns the optimum, or None when unbounded.
        """
        tab, basis, ncols = self._tab, self._basis, self._ncols
        while True:
            cb = [cost[b] for b in basis]
            enter = None
            for j in range(ncols):
                if j in basis:
                    continue
                red = cost[j] - sum(cb[i] * tab[i][j] for i in range(len(tab)) if tab[i][j])
                if red > 0:
                    enter = j
                    break
            if enter is None:
                val = sum(cb[i] * tab[i][-1] for i in range(len(tab)))
                return val
            leave = None
            best = None
            for i in range(len(tab)):
                a = tab[i][enter]
                if a > 0:
                    ratio = tab[i][-1] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return None  # unbounded
            self._pivot(leave, enter)

    def maximize(self, var) -> Optional[object]:
        """Maximize a single variable from the current feasible state.

        Must be called after ``feasible()`` returned True.  Returns None
        when unbounded above.
        """
        cost = [_Q(0)] * self._ncols
        cost[self.col[var]] = _Q(1)
        return self._run(cost)

    def solution(self) -> dict:
        out = {}
        for i, b in enumerate(self._basis):
            if b is not None and b < self.n:
                out[self.vars[b]] = self._tab[i][-1]
        return out


# ---------------------------------------------------------------------------
# Smith normal form and integer linear systems.
# ---------------------------------------------------------------------------


def smith_normal_form(m_rows: list[list[int]]):
    """Diagonalize an integer matrix: returns (U, D, V) with U*M*V = D,
    U and V unimodular, and the diagonal entries in a divisibility chain.

    Pivots are chosen by minimal absolute value to contain growth.
    """
    r = len(m_rows)
    n = len(m_rows[0]) if r else 0
    M = [list(map(int, row)) for row in m_rows]
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def addmul_row(dst, src, f):
        Md, Ms = M[dst], M[src]
        for j in range(n):
            Md[j] += f * Ms[j]
        Ud, Us = U[dst], U[src]
        for j in range(r):
            Ud[j] += f * Us[j]

    def addmul_col(dst, src, f):
        for row in M:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(r, n):
        # locate the minimal-absolute-value nonzero in the working submatrix
        best = None
        for i in range(t, r):
            for j in range(t, n):
                v = M[i][j]
                if v:
                    if best is None or abs(v) < best[0]:
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, r):
                if M[i][t]:
                    q = M[i][t] // p
                    if q:
                        addmul_row(i, t, -q)
                    if M[i][t]:
                        swap_rows(t, i)
                        dirty = True
                        p = M[t][t]
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    if q:
                        addmul_col(j, t, -q)
                    if M[t][j]:
                        swap_cols(t, j)
                        dirty = True
                        p = M[t][t]
            if dirty:
                continue
            # enforce divisibility of the remaining submatrix
            p = M[t][t]
            viol = None
            for i in range(t + 1, r):
                row = M[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        viol = i
                        break
                if viol is not None:
                    break
            if viol is None:
                break
            addmul_row(t, viol, 1)
        if M[t][t] < 0:
            for j in range(n):
                M[t][j] = -M[t][j]
            for j in range(r):
                U[t][j] = -U[t][j]
        t += 1
    return U, M, V


def _independent_integer_rows(eqs, variables):
    """Rational row reduction: detect inconsistency, return an equivalent
    integer system with independent rows (same affine solution set, hence
    the same integer points)."""
    col = {v: j for j, v in enumerate(variables)}
    n = len(variables)
    kept: list[list] = []
    pivots: dict[int, int] = {}
    for coeffs, rhs in eqs:
        row = [_Q(0)] * (n + 1)
        for v, c in coeffs.items():
            row[col[v]] = _Q(c)
        row[n] = _Q(rhs)
        for j, ri in pivots.items():
            if row[j]:
                f = row[j]
                pr = kept[ri]
                for jj in range(n + 1):
                    if pr[jj]:
                        row[jj] -= f * pr[jj]
        lead = next((j for j in range(n) if row[j]), None)
        if lead is None:
            if row[n]:
                return None  # rationally inconsistent
            continue
        f = row[lead]
        if f != 1:
            for jj in range(n + 1):
                if row[jj]:
                    row[jj] /= f
        for r2 in kept:
            if r2[lead]:
                f = r2[lead]
                for jj in range(n + 1):
                    if row[jj]:
                        r2[jj] -= f * row[jj]
        pivots[lead] = len(kept)
        kept.append(row)
    # scale each row to coprime integers
    out = []
    for row in kept:
        lcm = 1
        for c in row:
            d = int(c.denominator)
            lcm = lcm * d // math.gcd(lcm, d)
        out.append([int(c * lcm) for c in row])
    return out


def integer_feasible(equations, variables=None) -> Optional[dict]:
    """Solve a sparse integer equality system exactly.

    ``equations`` is an iterable of (coefficient-dict, rhs).  Returns an
    integer assignment (defaulting unconstrained variables to zero) or
    None.
    """
    eq_list = [(dict(c), r) for c, r in equations]
    canon = tuple((tuple(sorted(c.items())), r) for c, r in eq_list)
    red = _reduce(canon, nonneg=False)
    if red.infeasible:
        return None
    live = sorted(red.live)
    assignment: dict = {}
    if red.eqs:
        rows = _independent_integer_rows(red.eqs, live)
        if rows is None:
            return None
        mat = [row[:-1] for row in rows]
        rhs = [row[-1] for row in rows]
        U, D, V = smith_normal_form(mat)
        r, n = len(mat), len(live)
        c = [sum(U[i][j] * rhs[j] for j in range(r)) for i in range(r)]
        y = [0] * n
        for i in range(r):
            d = D[i][i] if i < n else 0
            if d == 0:
                if c[i] != 0:
                    return None
            else:
                if c[i] % d:
                    return None
                y[i] = c[i] // d
        xs = [sum(V[i][j] * y[j] for j in range(n)) for i in range(n)]
        assignment = dict(zip(live, xs))
    full = red.resolve(assignment)
    out = {v: int(val) for v, val in full.items()}
    for coeffs, rhs in eq_list:
        if sum(c * out.get(v, 0) for v, c in coeffs.items()) != rhs:
            raise AssertionError("integer witness failed re-substitution")
    return out


# ---------------------------------------------------------------------------
# Public deciders.
# ---------------------------------------------------------------------------


def _system_equations(sys: LinearSystem, extra_zero: frozenset = frozenset()):
    if not extra_zero:
        return sys.equations
    out = []
    for items, rhs in sys.equations:
        kept = tuple((v, c) for v, c in items if v not in extra_zero)
        if kept or rhs:
            out.append((kept, rhs))
    return tuple(out)


def lp_feasible(sys: LinearSystem) -> Optional[dict]:
    """A nonnegative exact-rational solution, or None (phase-1 optimum > 0)."""
    red = _reduce(sys.equations, nonneg=True)
    if red.infeasible:
        return None
    live = sorted(red.live)
    sx = _Simplex(red.eqs, live)
    if not sx.feasible():
        return None
    full = red.resolve(sx.solution())
    out = {}
    for v in sys.live_variables():
        val = full.get(v, 0)
        out[v] = val if isinstance(val, Fraction) else Fraction(int(val.numerator), int(val.denominator)) if hasattr(val, "denominator") else Fraction(val)
    for items, rhs in sys.equations:
        if sum(out[v] * c for v, c in items) != rhs:
            raise AssertionError("rational witness failed re-substitution")
    if any(val < 0 for val in out.values()):
        raise AssertionError("rational witness not nonnegative")
    return out


def diophantine_feasible(sys: LinearSystem, forced_zero: Iterable[VarKey] = ()) -> Optional[dict]:
    """An integer solution of the system with the given variables zeroed."""
    extra = frozenset(forced_zero)
    eqs = _system_equations(sys, extra)
    sol = integer_feasible([(dict(items), rhs) for items, rhs in eqs])
    if sol is None:
        return None
    out = {v: 0 for v in sys.variables}
    out.update({v: sol.get(v, 0) for v in sys.live_variables() if v not in extra})
    return out


def relative_interior_support(sys: LinearSystem) -> set[VarKey]:
    """Variables positive somewhere on the feasible polytope.

    Found by maximizing the variables one at a time (warm-started on a
    shared tableau); a variable unbounded above is trivially positive
    somewhere, and every witness encountered marks all its positive
    variables, so most variables never need their own run.
    """
    red = _reduce(sys.equations, nonneg=True)
    if red.infeasible:
        raise Infeasible("system has no nonnegative rational solution")
    live = sorted(red.live)
    sx = _Simplex(red.eqs, live)
    if not sx.feasible():
        raise Infeasible("system has no nonnegative rational solution")
    positive = {v for v, val in sx.solution().items() if val > 0}
    for v in live:
        if v in positive:
            continue
        opt = sx.maximize(v)
        if opt is None or opt > 0:
            positive.add(v)
            positive.update(w for w, val in sx.solution().items() if val > 0)
    support = red.support_status(positive)
    # variables outside every equation are unconstrained, hence positive
    # somewhere; forced-zero variables are not
    for v in sys.live_variables():
        if v not in red.live and v not in red.subs:
            support.add(v)
    return {v for v in sys.live_variables() if v in support}


def decide_blp(x_graph: Digraph, a_graph: Digraph, k: int) -> bool:
    return lp_feasible(build_ip_system(x_graph, a_graph, k)) is not None


def decide_aip(x_graph: Digraph, a_graph: Digraph, k: int) -> bool:
    return diophantine_feasible(build_ip_system(x_graph, a_graph, k)) is not None


def decide_ba(x_graph: Digraph, a_graph: Digraph, k: int) -> bool:
    sys = build_ip_system(x_graph, a_graph, k)
    if lp_feasible(sys) is None:
        return False
    support = relative_interior_support(sys)
    dead = frozenset(v for v in sys.live_variables() if v not in support)
    return diophantine_feasible(sys, dead) is not None
