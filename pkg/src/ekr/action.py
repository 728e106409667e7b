"""Transitive actions of a group on the cosets of a subgroup."""
from __future__ import annotations

from functools import cached_property
from typing import Iterable

import numpy as np

from .groupcore import CapExceeded, Group, GroupError, Subgroup, conjugate_closure, left_cosets

MAX_POINTS = 1_000_000
TABLE_ENTRY_CAP = 64_000_000


class CosetAction:
    """``G`` acting on ``G/H`` by ``g . xH = (gx)H``; point 0 is ``H`` itself."""

    def __init__(self, G: Group, H: Subgroup, max_points: int = MAX_POINTS,
                 table_cap: int = TABLE_ENTRY_CAP):
        if H.parent is not G:
            raise GroupError("subgroup belongs to another group")
        if G.order % H.order:
            raise GroupError("subgroup order does not divide the group order")
        if G.order // H.order > max_points:
            raise CapExceeded(f"action on {G.order // H.order} points exceeds cap {max_points}")
        self.group = G
        self.subgroup = H
        self.table_cap = table_cap
        self.points, self.coset_of = left_cosets(G, H)

    @property
    def degree(self) -> int:
        return len(self.points)

    def __repr__(self):
        return f"<CosetAction {self.group!r} on {self.degree} points>"

    @cached_property
    def table(self) -> np.ndarray:
        """``table[g, x]`` is the point ``g . x``."""
        G = self.group
        if G.order * self.degree > self.table_cap:
            raise CapExceeded(f"action table of {G.order * self.degree} entries exceeds cap")
        reps = np.array(self.points, dtype=np.int64)
        if G.mul_table is not None:
            return self.coset_of[G.mul_table[:, reps]].astype(np.int32)
        out = np.empty((G.order, self.degree), dtype=np.int32)
        allg = G.all()
        for x, r in enumerate(reps):
            out[:, x] = self.coset_of[G.mul_many(allg, r)]
        return out

    @cached_property
    def fixers(self) -> np.ndarray:
        """Sorted indices of elements with a fixed point (the union of all
        conjugates of ``H``)."""
        return conjugate_closure(self.group, self.subgroup, reps=self.points)

    @cached_property
    def fixer_mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.fixers] = True
        return m

    def act(self, g: int, x: int) -> int:
        G = self.group
        return int(self.coset_of[G.mul(g, self.points[x])])


def build_coset_action(G: Group, H: Subgroup, **caps) -> CosetAction:
    return CosetAction(G, H, **caps)


def has_fixed_point(action: CosetAction, g: int) -> bool:
    return bool(action.fixer_mask[g])


def _as_index_array(S: Iterable[int]) -> np.ndarray:
    return np.unique(np.fromiter((int(s) for s in S), dtype=np.int64))


def is_intersecting(action: CosetAction, S: Iterable[int]) -> bool:
    """Every quotient ``s1^-1 s2`` of members of ``S`` fixes a point."""
    G = action.group
    S = _as_index_array(S)
    if len(S) <= 1:
        return True
    mask = action.fixer_mask
    inv = G.inverses[S]
    step = max(1, 2_000_000 // len(S))
    for s in range(0, len(S), step):
        Q = G.mul_many(inv[s:s + step, None], S[None, :])
        if not mask[Q].all():
            return False
    return True


def stabilizer(action: CosetAction, x: int) -> Subgroup:
    """Stabilizer of point ``x = rH``, i.e. ``r H r^-1``."""
    G = action.group
    r = action.points[x]
    members = G.mul_many(G.mul_many(r, action.subgroup.members), G.inv(r))
    return Subgroup(G, members)
