"""Compiled inner loops for the greedy and seed-and-grow solvers.

Everything here works on a precomputed distance matrix ``D``. Per-member
bookkeeping keeps the nearest (``d1``) and second-nearest (``d2``)
distances inside the current set, so the cost of ``S + {q}`` is an O(|S|)
update instead of a full recomputation.
"""

import numpy as np
from numba import njit

# candidates whose extended set cost is within this relative band below rho are accepted
THRESHOLD_SLACK = 1e-12


@njit(cache=True)
def _own_cost(D, q, members, m, gamma):
    # gamma smallest distances from q to members[:m], summed small + large
    a = np.inf
    b = np.inf
    for t in range(m):
        d = D[q, members[t]]
        if d < a:
            b = a
            a = d
        elif d < b:
            b = d
    if gamma == 1:
        return a
    return a + b


@njit(cache=True)
def _member_cost_with(d1, d2, dq, gamma):
    if gamma == 1:
        return min(d1, dq)
    if dq < d1:
        return dq + d1
    if dq < d2:
        return d1 + dq
    return d1 + d2


@njit(cache=True)
def _extended_cost(D, q, members, m, d1, d2, gamma, own, floor):
    """cost(S + {q}); stops early and returns a value below ``floor`` once one is seen."""
    c = own
    if c < floor:
        return c
    for t in range(m):
        s = members[t]
        v = _member_cost_with(d1[s], d2[s], D[s, q], gamma)
        if v < c:
            c = v
            if c < floor:
                return c
    return c


@njit(cache=True)
def _init_state(D, seed, members, in_set, d1, d2):
    m = seed.shape[0]
    for t in range(m):
        members[t] = seed[t]
        in_set[seed[t]] = True
    for t in range(m):
        s = members[t]
        a = np.inf
        b = np.inf
        for u in range(m):
            if u == t:
                continue
            d = D[s, members[u]]
            if d < a:
                b = a
                a = d
            elif d < b:
                b = d
        d1[s] = a
        d2[s] = b
    return m


@njit(cache=True)
def _add_member(D, q, members, m, in_set, d1, d2):
    a = np.inf
    b = np.inf
    for t in range(m):
        s = members[t]
        d = D[s, q]
        if d < a:
            b = a
            a = d
        elif d < b:
            b = d
        if d < d1[s]:
            d2[s] = d1[s]
            d1[s] = d
        elif d < d2[s]:
            d2[s] = d
    d1[q] = a
    d2[q] = b
    members[m] = q
    in_set[q] = True
    return m + 1


@njit(cache=True)
def _init_near(D, members, m, in_set, qa, qb):
    # two smallest distances from every non-member to the current members
    n = D.shape[0]
    for q in range(n):
        qa[q] = np.inf
        qb[q] = np.inf
    for t in range(m):
        _update_near(D, members[t], in_set, qa, qb)


@njit(cache=True)
def _update_near(D, new, in_set, qa, qb):
    n = D.shape[0]
    row = D[new]
    for q in range(n):
        d = row[q]
        if d < qa[q]:
            qb[q] = qa[q]
            qa[q] = d
        elif d < qb[q]:
            qb[q] = d


@njit(cache=True)
def grow(D, seed, k, gamma, rho, literal, members, in_set, d1, d2, qa, qb):
    """Extend ``seed`` while some candidate keeps the set cost >= rho.

    Returns the size reached; ``members[:size]`` holds the set in insertion
    order. ``in_set`` is left set for those members (callers reset it).
    """
    n = D.shape[0]
    m = _init_state(D, seed, members, in_set, d1, d2)
    if m < k:
        _init_near(D, members, m, in_set, qa, qb)
    floor = rho * (1.0 - THRESHOLD_SLACK)
    while m < k:
        chosen = -1
        if literal:
            # global minimiser(s) of own cost, then the first of them meeting rho
            g = np.inf
            for q in range(n):
                if not in_set[q]:
                    oc = qa[q] if gamma == 1 else qa[q] + qb[q]
                    if oc < g:
                        g = oc
            for q in range(n):
                if in_set[q]:
                    continue
                oc = qa[q] if gamma == 1 else qa[q] + qb[q]
                if oc == g and _extended_cost(D, q, members, m, d1, d2, gamma, oc, floor) >= floor:
                    chosen = q
                    break
        else:
            best = np.inf
            for q in range(n):
                if in_set[q]:
                    continue
                oc = qa[q] if gamma == 1 else qa[q] + qb[q]
                if oc >= best or oc < floor:
                    continue
                if _extended_cost(D, q, members, m, d1, d2, gamma, oc, floor) >= floor:
                    best = oc
                    chosen = q
        if chosen < 0:
            break
        m = _add_member(D, chosen, members, m, in_set, d1, d2)
        if m < k:
            _update_near(D, chosen, in_set, qa, qb)
    return m


@njit(cache=True)
def _seed_cost(D, i, j, l, gamma):
    if gamma == 1:
        return D[i, j]
    a = D[i, j] + D[i, l]
    b = D[i, j] + D[j, l]
    c = D[i, l] + D[j, l]
    return min(a, min(b, c))


@njit(cache=True)
def framework(D, k, gamma, lam, literal):
    """Seed-and-grow over every (gamma+1)-subset in lexicographic order.

    Returns (found, best_members, best_alpha, beta, n_seeds, n_attempts).
    """
    n = D.shape[0]
    members = np.empty(k, dtype=np.int64)
    best_members = np.empty(k, dtype=np.int64)
    in_set = np.zeros(n, dtype=np.bool_)
    d1 = np.empty(n)
    d2 = np.empty(n)
    qa = np.empty(n)
    qb = np.empty(n)
    seed = np.empty(gamma + 1, dtype=np.int64)
    beta = 0.0
    best_alpha = 0.0
    found = False
    n_seeds = 0
    n_attempts = 0
    last = n if gamma == 2 else 1
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1 if gamma == 2 else 0, last):
                n_seeds += 1
                alpha = _seed_cost(D, i, j, l, gamma)
                rho = alpha / lam
                if not rho > beta:
                    continue
                n_attempts += 1
                seed[0] = i
                seed[1] = j
                if gamma == 2:
                    seed[2] = l
                m = grow(D, seed, k, gamma, rho, literal, members, in_set, d1, d2, qa, qb)
                for t in range(m):
                    in_set[members[t]] = False
                if m == k:
                    found = True
                    beta = rho
                    best_alpha = alpha
                    for t in range(k):
                        best_members[t] = members[t]
    return found, best_members, best_alpha, beta, n_seeds, n_attempts


@njit(cache=True)
def greedy(D, k):
    """Best cost_2 triple (lexicographic on ties), then repeated best single additions."""
    n = D.shape[0]
    best = -1.0
    bi = bj = bl = -1
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                c = _seed_cost(D, i, j, l, 2)
                if c > best:
                    best = c
                    bi, bj, bl = i, j, l
    members = np.empty(k, dtype=np.int64)
    in_set = np.zeros(n, dtype=np.bool_)
    d1 = np.empty(n)
    d2 = np.empty(n)
    seed = np.array([bi, bj, bl], dtype=np.int64)
    m = _init_state(D, seed, members, in_set, d1, d2)
    while m < k:
        chosen = -1
        top = -np.inf
        for q in range(n):
            if in_set[q]:
                continue
            oc = _own_cost(D, q, members, m, 2)
            c = _extended_cost(D, q, members, m, d1, d2, 2, oc, -np.inf)
            if c > top:
                top = c
                chosen = q
        m = _add_member(D, chosen, members, m, in_set, d1, d2)
    return members
