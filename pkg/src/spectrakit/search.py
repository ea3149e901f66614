"""Batched derivative-free descent over unitary matrices.

Every candidate in a batch is an n x n unitary W. A sweep visits, for each
pair of rows (p, q), a real and an imaginary Givens rotation and keeps
any angle that lowers the objective. Optionally single-row phase moves
are tried too (needed when the objective sees row phases).
"""
from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np

from .qstate import random_unitary


def _rotate(W: np.ndarray, p: int, q: int, theta: np.ndarray, imaginary: bool) -> np.ndarray:
    out = W.copy()
    c = np.cos(theta)[:, None]
    s = np.sin(theta)[:, None]
    rp, rq = W[:, p, :], W[:, q, :]
    if imaginary:
        out[:, p, :] = c * rp + 1j * s * rq
        out[:, q, :] = 1j * s * rp + c * rq
    else:
        out[:, p, :] = c * rp - s * rq
        out[:, q, :] = s * rp + c * rq
    return out


def _phase(W: np.ndarray, p: int, theta: np.ndarray) -> np.ndarray:
    out = W.copy()
    out[:, p, :] = np.exp(1j * theta)[:, None] * W[:, p, :]
    return out


def givens_descent(
    objective: Callable[[np.ndarray, np.ndarray], np.ndarray],
    start: np.ndarray,
    step: float = np.pi / 4,
    decay: float = 0.5,
    min_step: float = 1e-7,
    ftol: float = 1e-13,
    max_sweeps: int = 200,
    phases: bool = False,
    rowwise: bool = False,
    max_moves: int | None = None,
    seed=0,
) -> tuple[np.ndarray, np.ndarray]:
    """Minimize objective over a batch of unitaries.

    objective(W, idx) receives unitaries of shape (m, n, n) for the batch
    members idx and returns their m values. W may carry extra columns
    (shape (m, n, n + extra)); moves rotate whole rows, so data that
    transforms like the rows of W can ride along. With rowwise=True the objective
    is a sum over rows: it receives row blocks of shape (m, k, n) and returns
    (m, k) row contributions, so each move only re-evaluates two rows.

    Along each move the objective is probed at +/- step and at the vertex of
    the parabola through the three values; the best point wins. A sweep
    without any gain halves the step (by `decay`). Once the step is small, a
    member stops as soon as a sweep gains less than ftol; otherwise it stops
    below min_step. When there are more than max_moves rotations, each
    sweep visits a seeded random subset of that size.
    """
    W = np.array(start, dtype=complex)
    B, n, _ = W.shape
    if rowwise:
        rows = objective(W, np.arange(B))
        f = rows.sum(axis=1)
    else:
        f = objective(W, np.arange(B))
    s = np.full(B, float(step))
    done = np.zeros(B, dtype=bool)
    all_moves = [(p, q, im) for p, q in combinations(range(n), 2) for im in (False, True)]
    rng = np.random.default_rng(seed)
    for _ in range(max_sweeps):
        idx = np.flatnonzero(~done & (s >= min_step))
        if idx.size == 0:
            break
        moves = all_moves
        if max_moves is not None and len(all_moves) > max_moves:
            moves = [all_moves[i] for i in rng.choice(len(all_moves), max_moves, replace=False)]
        if rowwise:
            Wa, ra, sa = W[idx], rows[idx], s[idx]
            f0 = f[idx]
            for p, q, im in moves:
                pair = Wa[:, [p, q], :]
                base = ra[:, p] + ra[:, q]
                cands, vals = [], []
                for th in (sa, -sa):
                    c = _rotate(pair, 0, 1, th, im)
                    cands.append(c)
                    vals.append(objective(c, idx))
                vp, vm = vals[0].sum(1), vals[1].sum(1)
                curv = vp + vm - 2 * base
                safe = np.where(curv > 0, curv, 1.0)
                vertex = np.where(curv > 0, np.clip(sa * (vm - vp) / (2 * safe), -2 * sa, 2 * sa), 0.0)
                c = _rotate(pair, 0, 1, vertex, im)
                cands.append(c)
                vals.append(objective(c, idx))
                options = np.stack([base, vp, vm, vals[2].sum(1)])
                pick = np.argmin(options, axis=0)
                for k in (1, 2, 3):
                    sel = pick == k
                    if sel.any():
                        Wa[sel, p], Wa[sel, q] = cands[k - 1][sel, 0], cands[k - 1][sel, 1]
                        ra[sel, p], ra[sel, q] = vals[k - 1][sel, 0], vals[k - 1][sel, 1]
            fa = ra.sum(axis=1)
            W[idx], rows[idx] = Wa, ra
        else:
            Wa, fa, sa = W[idx], f[idx], s[idx]
            f0 = fa.copy()
            trials = [lambda X, th, m=m: _rotate(X, m[0], m[1], th, m[2]) for m in moves]
            if phases:
                trials += [lambda X, th, p=p: _phase(X, p, th) for p in range(n)]
            for make in trials:
                plus, minus = make(Wa, sa), make(Wa, -sa)
                vp, vm = objective(plus, idx), objective(minus, idx)
                curv = vp + vm - 2 * fa
                safe = np.where(curv > 0, curv, 1.0)
                vertex = np.where(curv > 0, np.clip(sa * (vm - vp) / (2 * safe), -2 * sa, 2 * sa), 0.0)
                mid = make(Wa, vertex)
                vv = objective(mid, idx)
                options = np.stack([fa, vp, vm, vv])
                pick = np.argmin(options, axis=0)
                for k, cand in ((1, plus), (2, minus), (3, mid)):
                    sel = pick == k
                    Wa[sel] = cand[sel]
                fa = options[pick, np.arange(idx.size)]
            W[idx] = Wa
        gain = f0 - fa
        f[idx] = fa
        s[idx] = np.where(gain > 0, sa, sa * decay)
        done[idx] = (gain < ftol) & (sa < 1e-3)
    return W, f


def random_starts(n: int, restarts: int, seed) -> np.ndarray:
    """Haar-random unitaries, one independent stream per restart."""
    streams = np.random.SeedSequence(seed).spawn(restarts)
    return np.stack([random_unitary(n, np.random.default_rng(ss)) for ss in streams])
