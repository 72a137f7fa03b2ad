"""Forward-recursive heuristic over production rounds.

The planning horizon is swept forward; for each period ``n`` the best
attainable end-of-period capital is the maximum over extending the committed
plan with a new production round ending at ``n`` (or with an idle period).
With goodwill loss, three per-period plan adjustments try alternative cycle
layouts for the last round, and a final backward pass shifts production into
earlier, cheaper cycles when spare capital allows it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import (Instance, Plan, Trajectory, TOL_ZERO, TOL_FEAS,
                    evaluate_plan, check_feasibility)
from .rounds import (RoundSpec, RoundSolution, FEASIBLE,
                     enumerate_round_specs, solve_round)

_TIE_TOL = 1e-9


@dataclass
class Solution:
    """Solver output: the evaluated plan plus diagnostics."""

    trajectory: Trajectory
    objective: float
    lp_count: int = 0
    adjustments: list = field(default_factory=list)
    degenerate: bool = False

    def diagnostics(self) -> dict:
        return {
            "objective": self.objective,
            "lp_count": self.lp_count,
            "adjustments": [[kind, list(periods)] for kind, periods in self.adjustments],
            "degenerate": self.degenerate,
        }


@dataclass
class RecursionState:
    """Forward-recursion bookkeeping exposed to callers and tests."""

    B_star: np.ndarray          # best end capital per period, slot 0 = B0
    best_plan: Plan             # committed plan through the last processed period
    BB_table: np.ndarray        # round values indexed [m-1, n-1]
    lp_count: int = 0
    adjustments: list = field(default_factory=list)
    degenerate: bool = False
    trajectory: Trajectory | None = None


class _Prefix:
    """Committed plan through some period, evaluated over the full horizon."""

    __slots__ = ("y", "v", "traj", "last_round")

    def __init__(self, inst: Instance, y: np.ndarray, v: np.ndarray, last_round):
        self.y = y
        self.v = v
        self.traj = evaluate_plan(inst, Plan(y, v))
        self.last_round = last_round  # (cycle_starts tuple, end period) or None

    def last_cycle(self) -> int | None:
        if self.last_round is None:
            return None
        return self.last_round[0][-1]


def _prefix_feasible(inst: Instance, traj: Trajectory, n: int) -> bool:
    return check_feasibility(inst, traj, up_to=n).feasible


def _splice(base: _Prefix, round_sol: RoundSolution, spec: RoundSpec, T: int):
    y = base.y.copy()
    v = base.v.copy()
    lo, hi = spec.m - 1, spec.n
    y[lo:hi] = round_sol.y
    v[lo:hi] = round_sol.v
    y[hi:] = 0.0
    v[hi:] = 0.0
    return y, v


class _Frh:
    def __init__(self, inst: Instance):
        self.inst = inst
        T = inst.T
        self.prefixes: list[_Prefix] = [
            _Prefix(inst, np.zeros(T), np.zeros(T), None)
        ]
        self.bb_table = np.full((T, T), np.nan)
        self.lp_count = 0
        self.adjustments: list = []
        self.degenerate = False

    def _entry(self, base: _Prefix):
        traj = base.traj

        def entry(t0: int):
            # clamp away sub-tolerance float noise from the evaluated prefix
            b = max(0.0, float(traj.B[t0 - 1]))
            w = max(0.0, float(traj.w[t0 - 2])) if t0 >= 2 else 0.0
            return b, w

        return entry

    def _round_candidate(self, base: _Prefix, spec: RoundSpec, n: int,
                         w_cap: float | None = None):
        sol = solve_round(self.inst, spec, w_cap=w_cap)
        self.lp_count += sol.lp_solves
        if sol.status != FEASIBLE:
            return None
        y, v = _splice(base, sol, spec, self.inst.T)
        pref = _Prefix(self.inst, y, v, (spec.cycle_starts, n))
        if not _prefix_feasible(self.inst, pref.traj, n):
            return None
        return pref

    def step(self, n: int):
        """Commit the best plan through period n (recursion Steps 1-2)."""
        inst = self.inst
        candidates: list[tuple[float, float, _Prefix]] = []

        prev = self.prefixes[n - 1]
        if _prefix_feasible(inst, prev.traj, n):
            # idle period: demand in n is fully lost, capital carries over
            candidates.append((float(prev.traj.B[n]), math.inf,
                               _Prefix(inst, prev.y.copy(), prev.v.copy(),
                                       prev.last_round)))

        for m in range(1, n + 1):
            base = self.prefixes[m - 1]
            specs = enumerate_round_specs(inst, m, n,
                                          prev_cycle=base.last_cycle(),
                                          entry=self._entry(base))
            for spec in specs:
                sol = solve_round(inst, spec)
                self.lp_count += sol.lp_solves
                self.bb_table[m - 1, n - 1] = sol.BB if sol.status == FEASIBLE else np.nan
                if sol.status != FEASIBLE:
                    continue
                y, v = _splice(base, sol, spec, inst.T)
                pref = _Prefix(inst, y, v, (spec.cycle_starts, n))
                if not _prefix_feasible(inst, pref.traj, n):
                    continue
                candidates.append((float(pref.traj.B[n]), float(m), pref))

        if not candidates:
            # even idling violates capital nonnegativity (loan repayment due);
            # commit the idle plan anyway and flag the run degenerate
            self.degenerate = True
            self.prefixes.append(_Prefix(inst, prev.y.copy(), prev.v.copy(),
                                         prev.last_round))
            return

        best = max(candidates, key=lambda cand: (cand[0], cand[1]))
        # ties: later round starts (and the idle extension) win
        top = [cand for cand in candidates if cand[0] >= best[0] - _TIE_TOL]
        chosen = max(top, key=lambda cand: cand[1])
        self.prefixes.append(chosen[2])

    def adjust(self, n: int):
        """Try the three cycle-layout adjustments on the round ending at n."""
        inst = self.inst
        if inst.beta == 0:
            return
        cur = self.prefixes[n]
        if cur.last_round is None:
            return
        cycles, end = cur.last_round
        if end != n:
            return  # round already adjusted when it was committed

        w_cap = float(cur.traj.w[n - 1])
        m = cycles[0]

        def entry_state(t0: int):
            b = max(0.0, float(cur.traj.B[t0 - 1]))
            w = max(0.0, float(cur.traj.w[t0 - 2])) if t0 >= 2 else 0.0
            return b, w

        families: list[tuple[str, list[RoundSpec]]] = []

        # (a) split the round's first cycle with an extra launch
        first_end = cycles[1] - 1 if len(cycles) >= 2 else n
        if first_end > m:
            specs = []
            b_in, w_in = entry_state(m)
            for u in range(m + 1, first_end + 1):
                specs.append(RoundSpec(m=m, n=n,
                                       cycle_starts=(m, u) + cycles[1:],
                                       B_in=b_in, w_in=w_in))
            families.append(("Adj1", specs))

        # (b) insert a cycle in the idle stretch before the round
        if m > 1 and not cur.traj.x[: m - 1].any():
            specs = []
            for u in range(1, m):
                b_in, w_in = entry_state(u)
                specs.append(RoundSpec(m=u, n=n, cycle_starts=(u, m),
                                       B_in=b_in, w_in=w_in))
            families.append(("Adj2", specs))

        # (c) delay the first launch when the round starts the horizon
        if m == 1:
            specs = []
            idle = self.prefixes[0].traj  # all-idle reference trajectory
            next_start = cycles[1] if len(cycles) >= 2 else n + 1
            for u in range(2, next_start):
                b_in = float(idle.B[u - 1])
                w_in = max(0.0, float(idle.w[u - 2])) if u >= 2 else 0.0
                if b_in < 0:
                    continue
                specs.append(RoundSpec(m=u, n=n,
                                       cycle_starts=(u,) + cycles[1:],
                                       B_in=b_in, w_in=w_in))
            families.append(("Adj3", specs))

        for kind, specs in families:
            cur = self.prefixes[n]
            cur_B = float(cur.traj.B[n])
            cur_w = float(cur.traj.w[n - 1])
            best_pref = None
            best_key = (cur_B, -cur_w)
            best_u = None
            for spec in specs:
                base_y = cur.y.copy()
                base_v = cur.v.copy()
                base_y[spec.m - 1 :] = 0.0
                base_v[spec.m - 1 :] = 0.0
                base = _Prefix(inst, base_y, base_v, None)
                pref = self._round_candidate(base, spec, n, w_cap=w_cap)
                if pref is None:
                    continue
                key = (float(pref.traj.B[n]), -float(pref.traj.w[n - 1]))
                if key[0] > best_key[0] + _TIE_TOL or (
                        abs(key[0] - best_key[0]) <= _TIE_TOL
                        and key[1] > best_key[1] + _TIE_TOL):
                    best_key = key
                    best_pref = pref
                    best_u = spec.cycle_starts
            if best_pref is not None:
                self.prefixes[n] = best_pref
                self.adjustments.append((kind, tuple(best_u)))

    def state(self, through: int) -> RecursionState:
        inst = self.inst
        T = inst.T
        final = self.prefixes[through]
        B_star = np.array([float(p.traj.B[i]) for i, p in enumerate(self.prefixes)])
        return RecursionState(
            B_star=B_star,
            best_plan=Plan(final.y.copy(), final.v.copy()),
            BB_table=self.bb_table,
            lp_count=self.lp_count,
            adjustments=list(self.adjustments),
            degenerate=self.degenerate,
            trajectory=final.traj,
        )


def recurse(inst: Instance) -> RecursionState:
    """Plain forward recursion (no per-period adjustments, no post-pass)."""
    runner = _Frh(inst)
    for n in range(1, inst.T + 1):
        runner.step(n)
    return runner.state(inst.T)


def adjust_plan(inst: Instance, runner_or_state, t: int):
    """Apply the per-period adjustment families at period t (in place)."""
    if not isinstance(runner_or_state, _Frh):
        raise TypeError("adjust_plan operates on a running recursion")
    runner_or_state.adjust(t)
    return runner_or_state


def corollary2_postpass(inst: Instance, sol: Solution) -> Solution:
    """Shift production backward into cheaper cycles with spare capital.

    For consecutive launch periods t1 < t2, when producing a unit at t1 and
    holding it to t2 is cheaper than producing it at t2, move as much of
    y[t2] as entry capital at t1 (and capital nonnegativity in between)
    allows. Realized demands are untouched, so goodwill is unaffected.
    """
    y = sol.trajectory.plan.y.copy()
    v = sol.trajectory.plan.v.copy()
    traj = sol.trajectory
    adjustments = list(sol.adjustments)
    changed = True
    guard = 0
    while changed and guard < 4 * inst.T:
        changed = False
        guard += 1
        starts = [t for t in range(inst.T) if traj.x[t] == 1]
        for idx in range(len(starts) - 1, 0, -1):
            t2 = starts[idx]
            t1 = starts[idx - 1]
            hold = float(np.sum(inst.h[t1:t2]))
            if inst.c[t1] + hold >= inst.c[t2] - 1e-12:
                continue
            slack = float(traj.B[t1]) - inst.s[t1] - inst.c[t1] * y[t1]
            if slack <= TOL_FEAS:
                continue
            dy = min(slack / inst.c[t1], float(y[t2]))
            # keep end-of-period capital nonnegative while the extra stock
            # is carried from t1 to t2
            for t in range(t1, t2):
                denom = inst.c[t1] + float(np.sum(inst.h[t1 : t + 1]))
                dy = min(dy, float(traj.B[t + 1]) / denom)
            if dy <= TOL_ZERO:
                continue
            y[t1] += dy
            y[t2] = y[t2] - dy if y[t2] - dy > TOL_ZERO else 0.0
            traj = evaluate_plan(inst, Plan(y.copy(), v.copy()))
            adjustments.append(("Cor2", (t1 + 1, t2 + 1)))
            changed = True
            break
    return Solution(trajectory=traj, objective=traj.objective,
                    lp_count=sol.lp_count, adjustments=adjustments,
                    degenerate=sol.degenerate)


def solve_frh(inst: Instance) -> Solution:
    """Run the full solver: recursion, per-period adjustments, post-pass."""
    runner = _Frh(inst)
    for n in range(1, inst.T + 1):
        runner.step(n)
        runner.adjust(n)
    state = runner.state(inst.T)
    sol = Solution(trajectory=state.trajectory,
                   objective=state.trajectory.objective,
                   lp_count=state.lp_count,
                   adjustments=state.adjustments,
                   degenerate=state.degenerate)
    return corollary2_postpass(inst, sol)
