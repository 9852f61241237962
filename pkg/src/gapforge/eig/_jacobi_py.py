"""Pure-numpy Jacobi eigensolver (fallback when the compiled kernel is absent).

Uses round-robin (parallel) ordering: each round applies ``n // 2`` rotations
on disjoint index pairs, which commute, so a whole round is one vectorized
column update and one row update.
"""
from __future__ import annotations

import numpy as np


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi(m: np.ndarray, rtol: float = np.finfo(float).eps, max_sweeps: int = 100):
    a = np.array(m, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    target = (rtol * n) ** 2 * float(np.sum(a * a))
    rounds = _round_robin(n)
    sweep = 0

    def off2():
        upper = np.triu(a, 1)
        return 2.0 * float(np.sum(upper * upper))

    while sweep < max_sweeps and n > 1 and off2() > target:
        for P, Q in rounds:
            apq = a[P, Q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            safe = np.where(active, apq, 1.0)
            theta = (a[Q, Q] - a[P, P]) / (2.0 * safe)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            c = np.where(active, 1.0 / np.sqrt(t * t + 1.0), 1.0)
            s = np.where(active, t * c, 0.0)

            colp, colq = a[:, P].copy(), a[:, Q].copy()
            a[:, P] = colp * c - colq * s
            a[:, Q] = colp * s + colq * c
            rowp, rowq = a[P, :].copy(), a[Q, :].copy()
            a[P, :] = c[:, None] * rowp - s[:, None] * rowq
            a[Q, :] = s[:, None] * rowp + c[:, None] * rowq
            a[P[active], Q[active]] = 0.0
            a[Q[active], P[active]] = 0.0

            vp, vq = v[:, P].copy(), v[:, Q].copy()
            v[:, P] = vp * c - vq * s
            v[:, Q] = vp * s + vq * c
        a = 0.5 * (a + a.T)
        sweep += 1
    return np.diag(a).copy(), v, sweep
