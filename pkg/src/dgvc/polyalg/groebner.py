"""Buchberger's algorithm for ideals and submodules of free modules.

Vectors of a free module ``R^r`` are dicts ``{(position, exponent): coeff}``.
The module order is position-over-term: a smaller position index is larger,
ties are broken by weighted grevlex on the exponent.  Ideals are the rank-one
case (position 0 everywhere).
"""

from __future__ import annotations

import heapq
from functools import lru_cache
from fractions import Fraction
from typing import Iterable

from ..config import LIMITS, Limits
from ..errors import ResourceLimitError
from .poly import Exp, degree_of, divides, exp_add, exp_lcm, exp_sub

Key = tuple[int, Exp]
Vec = dict[Key, Fraction]


@lru_cache(maxsize=1 << 18)
def vkey(k: Key, weights) -> tuple:
    pos, e = k
    return (-pos, degree_of(e, weights), tuple(-x for x in reversed(e)))


def lead_key(v: Vec, weights) -> Key:
    return max(v, key=lambda k: vkey(k, weights))


def vec_scale_shift(v: Vec, c: Fraction, shift: Exp) -> Vec:
    return {(p, exp_add(e, shift)): c * a for (p, e), a in v.items()}


def vec_axpy(acc: Vec, c: Fraction, shift: Exp, v: Vec) -> None:
    """acc += c * x^shift * v (in place)."""
    for (p, e), a in v.items():
        k = (p, exp_add(e, shift))
        val = acc.get(k, 0) + c * a
        if val:
            acc[k] = val
        else:
            acc.pop(k, None)


def make_monic(v: Vec, weights) -> Vec:
    k = lead_key(v, weights)
    c = v[k]
    if c == 1:
        return dict(v)
    inv = 1 / c
    return {kk: a * inv for kk, a in v.items()}


class _Basis:
    """Monic basis elements indexed by leading position for fast lookup."""

    def __init__(self, weights):
        self.weights = weights
        self.items: list[tuple[Key, Vec]] = []
        self.by_pos: dict[int, list[int]] = {}

    def add(self, v: Vec) -> int:
        k = lead_key(v, self.weights)
        self.items.append((k, v))
        idx = len(self.items) - 1
        self.by_pos.setdefault(k[0], []).append(idx)
        return idx

    def divisor(self, key: Key, skip: int | None = None) -> int | None:
        pos, e = key
        for i in self.by_pos.get(pos, ()):
            if i == skip:
                continue
            lk = self.items[i][0]
            if divides(lk[1], e):
                return i
        return None


def reduce_vec(v: Vec, basis: Iterable[Vec], weights, full: bool = True) -> Vec:
    b = _Basis(weights)
    for g in basis:
        b.add(g if _is_monic(g, weights) else make_monic(g, weights))
    return _reduce(v, b, weights, full)


def _is_monic(v: Vec, weights) -> bool:
    return v[lead_key(v, weights)] == 1


def _reduce(v: Vec, basis: _Basis, weights, full: bool = True, skip: int | None = None) -> Vec:
    p = dict(v)
    r: Vec = {}
    while p:
        k = lead_key(p, weights)
        c = p[k]
        i = basis.divisor(k, skip)
        if i is None:
            if not full:
                r.update(p)
                return r
            r[k] = c
            del p[k]
            continue
        lk, g = basis.items[i]
        vec_axpy(p, -c, exp_sub(k[1], lk[1]), g)
    return r


def groebner_basis(vectors: Iterable[Vec], weights, limits: Limits | None = None,
                   is_ideal: bool = False) -> list[Vec]:
    """Reduced Groebner basis, monic, sorted by decreasing leading term."""
    limits = limits or LIMITS
    weights = tuple(weights)
    vectors = [v for v in vectors if v]
    if vectors and all(len(v) == 1 for v in vectors):
        return _monomial_basis(vectors, weights, limits)
    basis = _Basis(weights)
    pending: set[tuple[int, int]] = set()
    queue: list = []   # heap of (lcm key, pair); stale entries are skipped

    def lcm_of(pair):
        (ki, _), (kj, _) = basis.items[pair[0]], basis.items[pair[1]]
        return (ki[0], exp_lcm(ki[1], kj[1]))

    def enqueue(pair):
        pending.add(pair)
        heapq.heappush(queue, (vkey(lcm_of(pair), weights), pair))

    def push(v: Vec):
        v = make_monic(v, weights)
        deg = max(degree_of(e, weights) for _, e in v)
        if deg > limits.max_degree:
            raise ResourceLimitError(f"Groebner basis degree {deg} exceeds cap {limits.max_degree}")
        new = basis.add(v)
        if len(basis.items) > limits.max_basis:
            raise ResourceLimitError(f"Groebner basis size exceeds cap {limits.max_basis}")
        pos = basis.items[new][0][0]
        for i in basis.by_pos[pos]:
            if i != new:
                enqueue((i, new))

    for v in vectors:
        if v:
            r = _reduce(v, basis, weights)
            if r:
                push(r)

    while queue:
        _, pair = heapq.heappop(queue)
        if pair not in pending:
            continue
        pending.discard(pair)
        i, j = pair
        (ki, gi), (kj, gj) = basis.items[i], basis.items[j]
        L = exp_lcm(ki[1], kj[1])
        if is_ideal and all(a == 0 or b == 0 for a, b in zip(ki[1], kj[1])):
            continue
        if _chain_skip(i, j, L, ki[0], basis, pending):
            continue
        s: Vec = {}
        vec_axpy(s, Fraction(1), exp_sub(L, ki[1]), gi)
        vec_axpy(s, Fraction(-1), exp_sub(L, kj[1]), gj)
        if not s:
            continue
        r = _reduce(s, basis, weights)
        if r:
            push(r)

    return _interreduce([g for _, g in basis.items], weights)


def _monomial_basis(vectors: list[Vec], weights, limits: Limits) -> list[Vec]:
    """Monomial generators already form a Groebner basis; keep the minimal ones."""
    keys = sorted({k for v in vectors for k in v}, key=lambda k: vkey(k, weights))
    kept: list[Key] = []
    for k in keys:
        if not any(p == k[0] and divides(e, k[1]) for p, e in kept):
            kept.append(k)
    for _, e in kept:
        if degree_of(e, weights) > limits.max_degree:
            raise ResourceLimitError(f"Groebner basis degree {degree_of(e, weights)} exceeds cap {limits.max_degree}")
    if len(kept) > limits.max_basis:
        raise ResourceLimitError(f"Groebner basis size exceeds cap {limits.max_basis}")
    kept.sort(key=lambda k: vkey(k, weights), reverse=True)
    return [{k: Fraction(1)} for k in kept]


def _chain_skip(i, j, L, pos, basis: _Basis, pending) -> bool:
    for k in basis.by_pos.get(pos, ()):
        if k in (i, j):
            continue
        if not divides(basis.items[k][0][1], L):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _interreduce(gens: list[Vec], weights) -> list[Vec]:
    keyed = [(lead_key(g, weights), g) for g in gens]
    minimal: list[tuple[Key, Vec]] = []
    for idx, (k, g) in enumerate(keyed):
        dominated = False
        for jdx, (k2, _) in enumerate(keyed):
            if jdx == idx or k2[0] != k[0] or not divides(k2[1], k[1]):
                continue
            if k2[1] != k[1] or jdx < idx:
                dominated = True
                break
        if not dominated:
            minimal.append((k, g))
    b = _Basis(weights)
    for _, h in minimal:
        b.add(h)
    out = [make_monic(_reduce(g, b, weights, skip=idx), weights) for idx, (_, g) in enumerate(minimal)]
    out.sort(key=lambda v: vkey(lead_key(v, weights), weights), reverse=True)
    return out


def syzygies(columns: list[Vec], rank: int, weights, limits: Limits | None = None) -> list[Vec]:
    """Groebner basis of the kernel of ``R^m -> R^rank`` sending ``e_j`` to
    ``columns[j]``, computed by elimination in ``R^rank (+) R^m``."""
    m = len(columns)
    zero = (0,) * len(weights)
    ext: list[Vec] = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(rank + j, zero)] = Fraction(1)
        ext.append(v)
    gb = groebner_basis(ext, weights, limits)
    out = []
    for g in gb:
        if lead_key(g, weights)[0] >= rank:
            out.append({(p - rank, e): c for (p, e), c in g.items()})
    return out
