"""Slow, independently written reference implementations used as test oracles.

None of these import the package's feedback or partition code.
"""
from __future__ import annotations

import itertools


def marking_feedback(query, master):
    """Two-pass peg marking: exact slots first, then pair leftovers by color."""
    query, master = list(query), list(master)
    used_q = [False] * len(query)
    used_m = [False] * len(master)
    black = 0
    for i, (q, m) in enumerate(zip(query, master)):
        if q == m:
            black += 1
            used_q[i] = used_m[i] = True
    white = 0
    for i, q in enumerate(query):
        if used_q[i]:
            continue
        for j, m in enumerate(master):
            if not used_m[j] and m == q:
                used_m[j] = True
                white += 1
                break
    return black, white


def all_codes(colors, pegs):
    return list(itertools.product(range(colors), repeat=pegs))


def naive_consistent(history, universe):
    out = []
    for x in universe:
        ok = True
        for q, f in history:
            if marking_feedback(q, x) != tuple(f):
                ok = False
        if ok:
            out.append(tuple(x))
    return sorted(out)


def literal_merc_expected(candidate, S):
    """Nested loops over candidate masters m' and codes c'.

    For each m', count the c' in S that land in the same reply class as m'
    when ``candidate`` is asked, then average over m'.
    """
    total = 0
    for m in S:
        reply = marking_feedback(candidate, m)
        for c2 in S:
            if marking_feedback(candidate, c2) == reply:
                total += 1
    return total / len(S)


def brute_force_worst_case(colors, pegs):
    """Unmemoized minimax over every adaptive strategy (tiny instances only)."""
    universe = all_codes(colors, pegs)
    win = (pegs, 0)

    def depth(S):
        if len(S) == 1:
            return 1
        best = None
        for g in universe:
            groups = {}
            for m in S:
                groups.setdefault(marking_feedback(g, m), []).append(m)
            if len(groups) == 1 and win not in groups:
                continue
            worst = max(1 if f == win else 1 + depth(part) for f, part in groups.items())
            best = worst if best is None else min(best, worst)
        return best

    return depth(universe)
