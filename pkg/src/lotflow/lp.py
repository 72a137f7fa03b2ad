"""Dense linear programming by two-phase primal simplex.

Maximization with mixed <=, =, >= rows and per-variable bounds. Problems
here are small (tens of variables), so a dense tableau is plenty. Pivoting
uses Dantzig's rule and falls back to Bland's rule after a stall so that
degenerate problems cannot cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# primal feasibility residual accepted on an Optimal result
TOL_LP_FEAS = 1e-7
# relative optimality tolerance
TOL_LP_OPT = 1e-6

_PIVOT_TOL = 1e-9
_RELATIONS = ("<=", "=", ">=")


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"


class LpError(Exception):
    """Malformed problem input."""


class LpNumericalError(Exception):
    """Raised by callers that cannot tolerate a NUMERICAL_FAILURE status."""


@dataclass
class LpProblem:
    """max objective . x  subject to rows and bounds.

    ``rows`` entries are ``(coeffs, relation, rhs)``; ``bounds`` defaults to
    ``[0, +inf)`` per variable. ``objective_offset`` is a constant added to
    the reported optimum (handy when the modeled objective has an affine
    constant term).
    """

    n_vars: int
    objective: np.ndarray
    rows: list = field(default_factory=list)
    bounds: list | None = None
    objective_offset: float = 0.0

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        if self.objective.shape != (self.n_vars,):
            raise LpError("objective length must equal n_vars")
        if self.bounds is None:
            self.bounds = [(0.0, math.inf)] * self.n_vars
        if len(self.bounds) != self.n_vars:
            raise LpError("bounds length must equal n_vars")

    def add_row(self, coeffs, relation: str, rhs: float):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_vars,):
            raise LpError("row length must equal n_vars")
        if relation not in _RELATIONS:
            raise LpError(f"relation must be one of {_RELATIONS}")
        if not math.isfinite(rhs):
            raise LpError("rhs must be finite")
        self.rows.append((coeffs, relation, float(rhs)))

    def dump(self) -> str:
        """Plain-text listing, for debugging failed solves."""
        lines = ["max " + " + ".join(f"{c:g}*x{j}" for j, c in enumerate(self.objective))]
        for coeffs, rel, rhs in self.rows:
            lhs = " + ".join(f"{a:g}*x{j}" for j, a in enumerate(coeffs) if a != 0) or "0"
            lines.append(f"  {lhs} {rel} {rhs:g}")
        for j, (lo, hi) in enumerate(self.bounds):
            lines.append(f"  {lo:g} <= x{j} <= {hi:g}")
        return "\n".join(lines)


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0


def _standardize(prob: LpProblem):
    """Rewrite general bounds into nonnegative variables.

    Returns (col_exprs, extra_rows, obj, obj_const, n_std) where each original
    variable i is col_exprs[i] = list of (std index, coeff) plus a constant.
    """
    col_terms: list[list[tuple[int, float]]] = []
    col_const: list[float] = []
    extra_rows: list[tuple[list[tuple[int, float]], str, float]] = []
    n_std = 0
    for lo, hi in prob.bounds:
        if lo > hi:
            # empty box: encode as an unsatisfiable row on a dummy variable
            col_terms.append([(n_std, 1.0)])
            col_const.append(0.0)
            extra_rows.append(([(n_std, 1.0)], "<=", -1.0))
            n_std += 1
        elif math.isfinite(lo):
            col_terms.append([(n_std, 1.0)])
            col_const.append(lo)
            if math.isfinite(hi):
                extra_rows.append(([(n_std, 1.0)], "<=", hi - lo))
            n_std += 1
        elif math.isfinite(hi):
            # x = hi - u, u >= 0
            col_terms.append([(n_std, -1.0)])
            col_const.append(hi)
            n_std += 1
        else:
            # free: x = u - w
            col_terms.append([(n_std, 1.0), (n_std + 1, -1.0)])
            col_const.append(0.0)
            n_std += 2
    return col_terms, col_const, extra_rows, n_std


def _pivot(tab: np.ndarray, basis: np.ndarray, row: int, col: int):
    tab[row] /= tab[row, col]
    colvals = tab[:, col].copy()
    colvals[row] = 0.0
    tab -= np.outer(colvals, tab[row])
    tab[:, col] = 0.0
    tab[row, col] = 1.0
    basis[row] = col


def _simplex_phase(tab: np.ndarray, basis: np.ndarray, iters: int,
                   max_iters: int, allowed_cols: np.ndarray):
    """Run simplex iterations on a tableau whose last row is the cost row.

    Returns (status_str, iterations) with status in
    {"optimal", "unbounded", "iteration_limit"}.
    """
    m = tab.shape[0] - 1
    stall = 0
    use_bland = False
    last_obj = tab[-1, -1]
    while True:
        cost = tab[-1, :-1]
        candidates = np.where((cost < -_PIVOT_TOL) & allowed_cols)[0]
        if candidates.size == 0:
            return "optimal", iters
        if iters >= max_iters:
            return "iteration_limit", iters
        if use_bland:
            col = int(candidates[0])
        else:
            col = int(candidates[np.argmin(cost[candidates])])
        colvec = tab[:m, col]
        positive = np.where(colvec > _PIVOT_TOL)[0]
        if positive.size == 0:
            return "unbounded", iters
        ratios = tab[positive, -1] / colvec[positive]
        best = ratios.min()
        ties = positive[ratios <= best + 1e-12]
        # among tied rows, pivot out the basic variable of lowest index
        row = int(ties[np.argmin(basis[ties])])
        _pivot(tab, basis, row, col)
        iters += 1
        obj = tab[-1, -1]
        if obj > last_obj - 1e-12:
            stall += 1
            if stall >= 50:
                use_bland = True
        else:
            stall = 0
        last_obj = obj


def lp_solve(prob: LpProblem, max_iterations: int | None = None) -> LpSolution:
    """Solve an :class:`LpProblem`; never raises for infeasible/unbounded input."""
    col_terms, col_const, extra_rows, n_std = _standardize(prob)

    rows: list[tuple[np.ndarray, str, float]] = []
    for coeffs, rel, rhs in prob.rows:
        arr = np.zeros(n_std)
        shift = 0.0
        for i in range(prob.n_vars):
            a = coeffs[i]
            if a == 0.0:
                continue
            shift += a * col_const[i]
            for j, cf in col_terms[i]:
                arr[j] += a * cf
        rows.append((arr, rel, rhs - shift))
    for terms, rel, rhs in extra_rows:
        arr = np.zeros(n_std)
        for j, cf in terms:
            arr[j] = cf
        rows.append((arr, rel, rhs))

    obj = np.zeros(n_std)
    obj_const = prob.objective_offset
    for i in range(prob.n_vars):
        a = prob.objective[i]
        if a == 0.0:
            continue
        obj_const += a * col_const[i]
        for j, cf in col_terms[i]:
            obj[j] += a * cf

    m = len(rows)
    if max_iterations is None:
        max_iterations = 50 * (n_std + m + 1)

    # assemble: columns = structural | slack/surplus | artificial | rhs
    n_slack = sum(1 for _, rel, _ in rows)  # at most one slack/surplus per row
    A = np.zeros((m, n_std + n_slack))
    b = np.zeros(m)
    slack_col = n_std
    art_rows = []
    for i, (arr, rel, rhs) in enumerate(rows):
        if rhs < 0:
            arr = -arr
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        A[i, :n_std] = arr
        b[i] = rhs
        if rel == "<=":
            A[i, slack_col] = 1.0
        elif rel == ">=":
            A[i, slack_col] = -1.0
            art_rows.append(i)
        else:
            art_rows.append(i)
        slack_col += 1
    n_art = len(art_rows)
    total = n_std + n_slack + n_art
    tab = np.zeros((m + 1, total + 1))
    tab[:m, : n_std + n_slack] = A
    tab[:m, -1] = b
    basis = np.full(m, -1, dtype=int)
    for i in range(m):
        # rows with a +1 slack start basic on the slack
        j = n_std + i
        if A[i, j] == 1.0:
            basis[i] = j
    for k, i in enumerate(art_rows):
        j = n_std + n_slack + k
        tab[i, j] = 1.0
        basis[i] = j

    iters = 0
    allowed = np.ones(total, dtype=bool)
    if n_art:
        # phase 1: minimize sum of artificials
        tab[-1, n_std + n_slack : total] = 1.0
        for i in art_rows:
            tab[-1] -= tab[i]
        status, iters = _simplex_phase(tab, basis, iters, max_iterations, allowed)
        if status == "iteration_limit":
            return LpSolution(LpStatus.NUMERICAL_FAILURE, iterations=iters)
        phase1 = -tab[-1, -1]
        if phase1 > TOL_LP_FEAS:
            return LpSolution(LpStatus.INFEASIBLE, iterations=iters)
        # drive leftover artificials out of the basis
        art_start = n_std + n_slack
        for i in range(m):
            if basis[i] >= art_start:
                pivots = np.where(np.abs(tab[i, :art_start]) > _PIVOT_TOL)[0]
                if pivots.size:
                    _pivot(tab, basis, i, int(pivots[0]))
                    iters += 1
        allowed[art_start:] = False

    # phase 2: maximize obj -> minimize -obj; rebuild the cost row
    tab[-1, :] = 0.0
    tab[-1, :n_std] = -obj
    for i in range(m):
        j = basis[i]
        if j >= 0 and abs(tab[-1, j]) > 0:
            tab[-1] -= tab[-1, j] * tab[i]
    status, iters = _simplex_phase(tab, basis, iters, max_iterations, allowed)
    if status == "iteration_limit":
        return LpSolution(LpStatus.NUMERICAL_FAILURE, iterations=iters)
    if status == "unbounded":
        return LpSolution(LpStatus.UNBOUNDED, iterations=iters)

    x_std = np.zeros(total)
    x_std[basis[basis >= 0]] = tab[np.where(basis >= 0)[0], -1]
    x = np.empty(prob.n_vars)
    for i in range(prob.n_vars):
        x[i] = col_const[i] + sum(cf * x_std[j] for j, cf in col_terms[i])
    value = float(prob.objective @ x) + prob.objective_offset
    return LpSolution(LpStatus.OPTIMAL, x=x, objective_value=value, iterations=iters)
