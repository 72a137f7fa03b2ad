"""Exact ground-truth solver by exhaustive enumeration at small horizons.

Both binary decisions per period (setup on/off, demand surviving the goodwill
shrink or not) are enumerated, so every residual problem is a plain LP in the
continuous variables. No big-M constants appear anywhere. Infeasible binary
patterns are pruned cheaply before the LP is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .frh import Solution
from .lp import LpProblem, LpStatus, LpNumericalError, lp_solve
from .model import Instance, Plan, evaluate_plan


class OracleGuardError(ValueError):
    """Instance horizon exceeds the enumeration guard."""


@dataclass(frozen=True)
class OracleConfig:
    max_T: int = 8


def _delta_patterns(inst: Instance):
    """All setup-independent survival patterns that could possibly occur.

    delta[t] = 0 needs beta * w[t-1] >= d[t] with w[t-1] <= d[t-1], and a
    dead period leaves no lost sales behind, so a 0 can only follow a 1.
    Period 1 always survives (no prior lost sales).
    """
    T = inst.T
    free = []
    for t in range(1, T):
        if inst.beta * inst.d[t - 1] >= inst.d[t]:
            free.append(t)
    patterns = []
    for bits in product((1, 0), repeat=len(free)):
        delta = np.ones(T, dtype=int)
        for t, b in zip(free, bits):
            delta[t] = b
        ok = all(delta[t - 1] == 1 or delta[t] == 1 or inst.d[t] == 0
                 for t in range(1, T))
        if ok:
            patterns.append(delta)
    return patterns


def _combo_lp(inst: Instance, x: np.ndarray, delta: np.ndarray) -> LpProblem:
    """LP over (y, v, w, Ed, I, B) for fixed binaries."""
    T = inst.T
    # variable layout
    Y, V, W, E, Iv, Bv = (np.arange(T) + k * T for k in range(6))
    n = 6 * T
    obj = np.zeros(n)
    obj[Bv[T - 1]] = 1.0
    prob = LpProblem(n_vars=n, objective=obj,
                     objective_offset=-inst.B0)
    bounds = [(0.0, math.inf)] * n
    for t in range(T):
        if x[t] == 0:
            bounds[Y[t]] = (0.0, 0.0)
    prob.bounds = bounds

    def row(terms, rel, rhs):
        coeffs = np.zeros(n)
        for j, a in terms:
            coeffs[j] += a
        prob.add_row(coeffs, rel, rhs)

    for t in range(T):
        b_prev = [(Bv[t - 1], 1.0)] if t > 0 else []
        b_prev_rhs = inst.B0 if t == 0 else 0.0
        # capital sufficiency
        row([(Y[t], inst.c[t])] + [(j, -a) for j, a in b_prev], "<=",
            b_prev_rhs - inst.s[t] * x[t])
        # inventory balance
        i_prev = [(Iv[t - 1], 1.0)] if t > 0 else []
        row([(Iv[t], 1.0)] + [(j, -a) for j, a in i_prev]
            + [(Y[t], -1.0), (V[t], 1.0)], "=", 0.0)
        # realized demand identity
        row([(V[t], 1.0), (W[t], 1.0), (E[t], -1.0)], "=", 0.0)
        # lost sales within effective demand
        row([(W[t], 1.0), (E[t], -1.0)], "<=", 0.0)
        # capital balance with one-time repayment
        rhs = b_prev_rhs - inst.s[t] * x[t]
        if inst.BL > 0 and t + 1 == inst.TL:
            rhs -= inst.repayment
        row([(Bv[t], 1.0)] + [(j, -a) for j, a in b_prev]
            + [(V[t], -inst.p[t]), (Iv[t], inst.h[t]), (Y[t], inst.c[t])],
            "=", rhs)
        # effective demand per the survival flag
        w_prev = [(W[t - 1], inst.beta)] if t > 0 else []
        if delta[t] == 1:
            row([(E[t], 1.0)] + w_prev, "=", inst.d[t])
            if t > 0:
                row(w_prev, "<=", inst.d[t])
        else:
            row([(E[t], 1.0)], "=", 0.0)
            row([(j, -a) for j, a in w_prev], "<=", -inst.d[t])
    return prob


def solve_exact(inst: Instance, cfg: OracleConfig | None = None) -> Solution:
    """Enumerate all binary patterns and return the best feasible plan."""
    cfg = cfg or OracleConfig()
    if inst.T > cfg.max_T:
        raise OracleGuardError(
            f"T={inst.T} exceeds the enumeration guard max_T={cfg.max_T}")
    T = inst.T
    deltas = _delta_patterns(inst)
    best_val = -math.inf
    best_plan: Plan | None = None
    lp_count = 0
    for xbits in product((0, 1), repeat=T):
        x = np.array(xbits, dtype=int)
        for delta in deltas:
            prob = _combo_lp(inst, x, delta)
            lp_count += 1
            sol = lp_solve(prob)
            if sol.status is LpStatus.NUMERICAL_FAILURE:
                raise LpNumericalError("oracle sub-LP hit the iteration limit")
            if sol.status is not LpStatus.OPTIMAL:
                continue
            if sol.objective_value > best_val + 1e-12:
                best_val = sol.objective_value
                best_plan = Plan(sol.x[:T].copy(), sol.x[T : 2 * T].copy())
    if best_plan is None:
        # nothing feasible, not even idling: report the null plan
        traj = evaluate_plan(inst, Plan.null(T))
        return Solution(trajectory=traj, objective=traj.objective,
                        lp_count=lp_count, degenerate=True)
    # re-evaluate through the forward dynamics to get a clean trajectory
    traj = evaluate_plan(inst, best_plan)
    return Solution(trajectory=traj, objective=traj.objective, lp_count=lp_count)


def deviation(inst: Instance, cfg: OracleConfig | None = None,
              frh_solution: Solution | None = None) -> float:
    """Relative shortfall of the heuristic against the exact optimum."""
    from .frh import solve_frh

    exact = solve_exact(inst, cfg)
    heur = frh_solution if frh_solution is not None else solve_frh(inst)
    gap = exact.objective - heur.objective
    rel = gap / max(abs(exact.objective), 1e-12)
    return max(0.0, rel)
