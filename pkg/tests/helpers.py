"""Test-side reference implementations and random problem factories.

``vertex_solve`` brute-forces small LPs by enumerating basic solutions
(every n-subset of the tight constraint candidates), giving an independent
optimum to check the simplex implementation against.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from lotflow.lp import LpProblem

VERTEX_FEAS_TOL = 1e-7


def _halfspaces(prob: LpProblem):
    """All constraints as A x <= b rows plus a list of equality row ids."""
    n = prob.n_vars
    A, b, eq_ids = [], [], []
    for coeffs, rel, rhs in prob.rows:
        coeffs = np.asarray(coeffs, dtype=float)
        if rel == "<=":
            A.append(coeffs)
            b.append(rhs)
        elif rel == ">=":
            A.append(-coeffs)
            b.append(-rhs)
        else:  # equality: both directions, remember to force tightness
            eq_ids.append(len(A))
            A.append(coeffs)
            b.append(rhs)
            A.append(-coeffs)
            b.append(-rhs)
    for j in range(n):
        lo, hi = prob.bounds[j]
        e = np.zeros(n)
        e[j] = 1.0
        if lo > -math.inf:
            A.append(-e.copy())
            b.append(-lo)
        if hi < math.inf:
            A.append(e.copy())
            b.append(hi)
    return np.array(A), np.array(b), eq_ids


def vertex_solve(prob: LpProblem):
    """Return (best objective incl. offset, argmax) or (None, None).

    Only meaningful for LPs whose feasible region is bounded (all test
    factories guarantee that); unbounded problems are out of scope here.
    """
    A, b, eq_ids = _halfspaces(prob)
    n = prob.n_vars
    m = len(A)
    c = np.asarray(prob.objective, dtype=float)
    del eq_ids  # equalities appear as opposed <= pairs, tight at any feasible x
    best, arg = None, None
    for subset in combinations(range(m), n):
        sub_A = A[list(subset)]
        sub_b = b[list(subset)]
        if abs(np.linalg.det(sub_A)) < 1e-10:
            continue
        x = np.linalg.solve(sub_A, sub_b)
        if np.all(A @ x <= b + VERTEX_FEAS_TOL):
            val = float(c @ x) + prob.objective_offset
            if best is None or val > best:
                best, arg = val, x
    return best, arg


def random_bounded_lp(rng: np.random.Generator) -> LpProblem:
    """Feasible LP with finite box bounds (hence a bounded optimum)."""
    n = int(rng.integers(2, 5))
    m = int(rng.integers(1, 5))
    obj = rng.uniform(-3.0, 3.0, n)
    prob = LpProblem(n_vars=n, objective=obj,
                     objective_offset=float(rng.uniform(-5.0, 5.0)))
    ub = rng.uniform(1.0, 10.0, n)
    prob.bounds = [(0.0, float(u)) for u in ub]
    x0 = rng.uniform(0.0, 1.0, n) * ub  # guaranteed-feasible anchor
    for _ in range(m):
        coeffs = rng.uniform(-2.0, 2.0, n)
        rhs = float(coeffs @ x0 + rng.uniform(0.0, 4.0))
        prob.add_row(coeffs, "<=", rhs)
    return prob


def random_infeasible_lp(rng: np.random.Generator) -> LpProblem:
    """Bounded LP plus a row that contradicts the nonnegativity bounds."""
    prob = random_bounded_lp(rng)
    n = prob.n_vars
    e = np.zeros(n)
    e[int(rng.integers(0, n))] = 1.0
    prob.add_row(e, "<=", -1.0 - float(rng.uniform(0.0, 3.0)))
    return prob


def random_unbounded_lp(rng: np.random.Generator) -> LpProblem:
    """LP with a guaranteed improving ray along the first variable."""
    n = int(rng.integers(2, 5))
    m = int(rng.integers(1, 4))
    obj = rng.uniform(-2.0, 2.0, n)
    obj[0] = float(rng.uniform(0.5, 3.0))  # pays to push x1 up
    prob = LpProblem(n_vars=n, objective=obj)
    prob.bounds = [(0.0, math.inf)] * n
    for _ in range(m):
        coeffs = rng.uniform(-2.0, 2.0, n)
        coeffs[0] = -abs(coeffs[0])  # the ray x1 -> inf never tightens rows
        rhs = float(rng.uniform(0.0, 5.0))  # origin stays feasible
        prob.add_row(coeffs, "<=", rhs)
    return prob
