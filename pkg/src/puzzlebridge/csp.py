"""Constraint-network model, propagation and complete backtracking search.

Variables hold finite integer domains; constraints are a small tagged union
(Instantiation, AllDifferent, SumCompare, BinaryLess, Table, RunPattern).
Domains live in a trailed :class:`DomainStore` as bitmasks, filters prune via
a propagation queue, and :func:`solve` runs depth-first search with
propagation at every node (min-domain variable order, ascending values).
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Union


class ModelError(Exception):
    """Raised for malformed instances (bad scopes, arities, domains)."""


class ResourceLimitError(Exception):
    """A node or time budget was exceeded; carries partial statistics."""

    def __init__(self, kind: str, report: "SolveReport"):
        super().__init__(f"{kind} budget exceeded")
        self.kind = kind
        self.report = report


class PruneResult(Enum):
    FIXPOINT = "fixpoint"
    CHANGED = "changed"
    CONTRADICTION = "contradiction"


# ---------------------------------------------------------------------------
# Model


@dataclass(frozen=True)
class Variable:
    id: int
    name: str
    domain: tuple[int, ...]


@dataclass(frozen=True)
class Instantiation:
    """Fixes listed variables to listed values (used for puzzle hints)."""

    vars: tuple[int, ...]
    values: tuple[int, ...]
    label: str = ""


@dataclass(frozen=True)
class AllDifferent:
    vars: tuple[int, ...]


@dataclass(frozen=True)
class SumCompare:
    """Sum of scope compared against a constant; op is eq, le or ge."""

    vars: tuple[int, ...]
    op: str
    constant: int


@dataclass(frozen=True)
class BinaryLess:
    x: int
    y: int
    strict: bool = True


@dataclass(frozen=True)
class Table:
    vars: tuple[int, ...]
    tuples: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RunPattern:
    """Binary line with given run lengths; lowered to a Table at model build."""

    vars: tuple[int, ...]
    runs: tuple[int, ...]


Constraint = Union[Instantiation, AllDifferent, SumCompare, BinaryLess, Table, RunPattern]

RUN_PATTERN_TUPLE_CAP = 10**6


def scope_of(constraint: Constraint) -> tuple[int, ...]:
    if isinstance(constraint, BinaryLess):
        return (constraint.x, constraint.y)
    return constraint.vars


def run_pattern_count(length: int, runs: tuple[int, ...]) -> int:
    """Number of 0/1 lines of the given length realizing the run lengths."""
    free = length - sum(runs) - (len(runs) - 1)
    if free < 0:
        return 0
    if not runs:
        return 1
    return math.comb(free + len(runs), len(runs))


def run_pattern_tuples(length: int, runs: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Enumerate all 0/1 lines with the given run lengths, starts ascending."""
    runs = tuple(runs)
    out: list[tuple[int, ...]] = []
    line = [0] * length

    def place(run_idx: int, start: int) -> None:
        if run_idx == len(runs):
            out.append(tuple(line))
            return
        r = runs[run_idx]
        tail = sum(runs[run_idx + 1 :]) + (len(runs) - run_idx - 1)
        for pos in range(start, length - tail - r + 1):
            for i in range(pos, pos + r):
                line[i] = 1
            place(run_idx + 1, pos + r + 1)
            for i in range(pos, pos + r):
                line[i] = 0

    place(0, 0)
    return tuple(out)


def _lower_run_pattern(constraint: RunPattern) -> Table:
    count = run_pattern_count(len(constraint.vars), constraint.runs)
    if count > RUN_PATTERN_TUPLE_CAP:
        raise ModelError(
            f"run pattern {list(constraint.runs)} over {len(constraint.vars)} cells "
            f"expands to {count} tuples (cap {RUN_PATTERN_TUPLE_CAP})"
        )
    if count == 0:
        raise ModelError(f"run pattern {list(constraint.runs)} does not fit {len(constraint.vars)} cells")
    return Table(vars=constraint.vars, tuples=run_pattern_tuples(len(constraint.vars), constraint.runs))


@dataclass(frozen=True)
class CspInstance:
    """Immutable variables-plus-constraints model; validated on construction."""

    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    array_shape: Optional[tuple[int, int]] = None
    name: str = ""

    def __post_init__(self):
        names = set()
        for i, v in enumerate(self.variables):
            if v.id != i:
                raise ModelError(f"variable ids must be dense and ordered, got {v.id} at {i}")
            if not v.domain:
                raise ModelError(f"variable {v.name} has an empty domain")
            if tuple(sorted(set(v.domain))) != v.domain:
                raise ModelError(f"variable {v.name} domain must be sorted and duplicate-free")
            if v.name in names:
                raise ModelError(f"duplicate variable name {v.name}")
            names.add(v.name)
        if self.array_shape is not None:
            r, c = self.array_shape
            if r * c != len(self.variables):
                raise ModelError(f"array shape {self.array_shape} does not cover {len(self.variables)} variables")
        lowered = tuple(
            _lower_run_pattern(c) if isinstance(c, RunPattern) else c for c in self.constraints
        )
        object.__setattr__(self, "constraints", lowered)
        for c in self.constraints:
            self._check_constraint(c)

    def _check_constraint(self, c: Constraint) -> None:
        scope = scope_of(c)
        if not scope:
            raise ModelError("constraint with empty scope")
        for v in scope:
            if not 0 <= v < len(self.variables):
                raise ModelError(f"scope index {v} out of range")
        if len(set(scope)) != len(scope):
            raise ModelError(f"repeated variable in scope {scope}")
        if isinstance(c, Instantiation):
            if len(c.vars) != len(c.values):
                raise ModelError("instantiation vars and values differ in length")
            for v, val in zip(c.vars, c.values):
                if val not in self.variables[v].domain:
                    raise ModelError(
                        f"instantiation value {val} outside declared domain of {self.variables[v].name}"
                    )
        elif isinstance(c, SumCompare):
            if c.op not in ("eq", "le", "ge"):
                raise ModelError(f"unknown sum comparator {c.op}")
        elif isinstance(c, Table):
            if not c.tuples:
                raise ModelError("table constraint with no tuples")
            for t in c.tuples:
                if len(t) != len(c.vars):
                    raise ModelError(f"table tuple {t} has wrong arity")

    def variable_by_name(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True)
class Solution:
    """Total assignment, indexed by dense variable id."""

    values: tuple[int, ...]

    def __getitem__(self, var: int) -> int:
        return self.values[var]


def evaluate_constraint(c: Constraint, values) -> bool:
    """Check one constraint against a total assignment (id-indexed)."""
    if isinstance(c, Instantiation):
        return all(values[v] == val for v, val in zip(c.vars, c.values))
    if isinstance(c, AllDifferent):
        seen = [values[v] for v in c.vars]
        return len(set(seen)) == len(seen)
    if isinstance(c, SumCompare):
        s = sum(values[v] for v in c.vars)
        return s == c.constant if c.op == "eq" else s <= c.constant if c.op == "le" else s >= c.constant
    if isinstance(c, BinaryLess):
        return values[c.x] < values[c.y] if c.strict else values[c.x] <= values[c.y]
    if isinstance(c, Table):
        return tuple(values[v] for v in c.vars) in set(c.tuples)
    raise ModelError(f"cannot evaluate {type(c).__name__}")


def check_solution(instance: CspInstance, values) -> bool:
    """Solution invariant: in-domain everywhere and every constraint satisfied."""
    if len(values) != len(instance.variables):
        return False
    for v, val in zip(instance.variables, values):
        if val not in v.domain:
            return False
    return all(evaluate_constraint(c, values) for c in instance.constraints)


# ---------------------------------------------------------------------------
# Trailed domain store


class DomainStore:
    """Current candidate sets as bitmasks plus a trail for exact restoration."""

    __slots__ = ("offset", "masks", "trail", "touched")

    def __init__(self, variables: Iterable[Variable]):
        variables = tuple(variables)
        self.offset = min((min(v.domain) for v in variables), default=0)
        off = self.offset
        self.masks = [self._mask_of(v.domain, off) for v in variables]
        self.trail: list[tuple[int, int]] = []  # (var, removed bits)
        self.touched: list[int] = []  # vars changed since last drain

    @staticmethod
    def _mask_of(domain, off) -> int:
        m = 0
        for v in domain:
            m |= 1 << (v - off)
        return m

    # -- queries ----------------------------------------------------------

    def size(self, var: int) -> int:
        return self.masks[var].bit_count()

    def contains(self, var: int, value: int) -> bool:
        bit = value - self.offset
        return bit >= 0 and bool(self.masks[var] >> bit & 1)

    def values(self, var: int) -> list[int]:
        out = []
        m = self.masks[var]
        off = self.offset
        while m:
            b = m & -m
            m ^= b
            out.append(b.bit_length() - 1 + off)
        return out

    def min_value(self, var: int) -> int:
        m = self.masks[var]
        return (m & -m).bit_length() - 1 + self.offset

    def max_value(self, var: int) -> int:
        return self.masks[var].bit_length() - 1 + self.offset

    def is_assigned(self, var: int) -> bool:
        m = self.masks[var]
        return m != 0 and m & (m - 1) == 0

    def assigned_value(self, var: int) -> int:
        return self.min_value(var)

    def snapshot(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(self.values(i)) for i in range(len(self.masks)))

    # -- updates ----------------------------------------------------------

    def reduce(self, var: int, new_mask: int) -> bool:
        """Shrink a domain to new_mask; False when it would empty."""
        old = self.masks[var]
        if new_mask == old:
            return True
        if new_mask == 0:
            return False
        self.trail.append((var, old & ~new_mask))
        self.masks[var] = new_mask
        self.touched.append(var)
        return True

    def remove_value(self, var: int, value: int) -> bool:
        return self.reduce(var, self.masks[var] & ~(1 << (value - self.offset)))

    def assign(self, var: int, value: int) -> bool:
        bit = value - self.offset
        if bit < 0:
            return False
        return self.reduce(var, self.masks[var] & (1 << bit))

    def mark(self) -> int:
        return len(self.trail)

    def restore_to(self, mark: int) -> None:
        trail = self.trail
        masks = self.masks
        while len(trail) > mark:
            var, removed = trail.pop()
            masks[var] |= removed


# ---------------------------------------------------------------------------
# Filters


def filter_instantiation(store: DomainStore, scope, values) -> PruneResult:
    changed = False
    for var, value in zip(scope, values):
        if not store.contains(var, value):
            return PruneResult.CONTRADICTION
        if not store.is_assigned(var):
            store.assign(var, value)
            changed = True
    return PruneResult.CHANGED if changed else PruneResult.FIXPOINT


def filter_alldifferent(store: DomainStore, scope) -> PruneResult:
    """Matching-based generalized arc consistency for an allDifferent scope."""
    return _alldiff_filter(store, tuple(scope), {})


def _alldiff_core(store: DomainStore, scope):
    """Shared cheap phase: peel assigned variables, check counting limits.

    Returns (result, free_vars, union); free_vars is None when the scope needs
    no further (matching-based) work.
    """
    masks = store.masks
    changed = False

    free: list[int] = []
    fixed = 0
    for x in scope:
        m = masks[x]
        if m == 0:
            return PruneResult.CONTRADICTION, None, 0
        if m & (m - 1) == 0:
            if m & fixed:
                return PruneResult.CONTRADICTION, None, 0
            fixed |= m
        else:
            free.append(x)
    while fixed:
        new_fixed = 0
        next_free = []
        for x in free:
            m = masks[x]
            if m & fixed:
                if not store.reduce(x, m & ~fixed):
                    return PruneResult.CONTRADICTION, None, 0
                changed = True
                m = masks[x]
            if m & (m - 1) == 0:
                if m & new_fixed:
                    return PruneResult.CONTRADICTION, None, 0
                new_fixed |= m
            else:
                next_free.append(x)
        free = next_free
        fixed = new_fixed

    result = PruneResult.CHANGED if changed else PruneResult.FIXPOINT
    k = len(free)
    if k <= 1:
        return result, None, 0

    union = 0
    for x in free:
        union |= masks[x]
    if union.bit_count() < k:
        return PruneResult.CONTRADICTION, None, 0

    # Equal-domain scopes with enough values are already arc consistent.
    first = masks[free[0]]
    if all(masks[x] == first for x in free[1:]):
        return result, None, 0
    return result, free, union


def _alldiff_cheap(store: DomainStore, scope) -> PruneResult:
    """Elimination-only pass; the engine schedules the full filter separately."""
    result, _, _ = _alldiff_core(store, scope)
    return result


def _alldiff_filter(store: DomainStore, scope, match_cache: dict) -> PruneResult:
    masks = store.masks
    result, free, union = _alldiff_core(store, scope)
    if free is None:
        return result
    changed = result is PruneResult.CHANGED
    k = len(free)

    # Repair the cached variable-to-value matching.
    match_bit: dict[int, int] = {}
    owner: dict[int, int] = {}
    for x in free:
        b = match_cache.get(x, 0)
        if b and (masks[x] & b) and b not in owner:
            match_bit[x] = b
            owner[b] = x
    for x in free:
        if x not in match_bit:
            if not _augment(x, masks, match_bit, owner, set()):
                return PruneResult.CONTRADICTION
    match_cache.clear()
    match_cache.update(match_bit)

    # An unmatched edge survives iff it lies on an alternating path from an
    # unmatched value or on an alternating cycle.  Grow the set S of values
    # reachable by alternating paths first: for variables marked that way all
    # edges into S survive and no cycle analysis is needed.
    matched_bits = 0
    for x in free:
        matched_bits |= match_bit[x]
    reach = union & ~matched_bits  # unmatched values
    unmarked = free
    marked: list[int] = []
    if reach:
        while unmarked:
            rest = []
            grew = False
            for x in unmarked:
                if masks[x] & reach:
                    reach |= match_bit[x]
                    marked.append(x)
                    grew = True
                else:
                    rest.append(x)
            unmarked = rest
            if not grew:
                break
    for x in marked:
        keep = (masks[x] & reach) | match_bit[x]
        if keep != masks[x]:
            store.reduce(x, keep)  # keep contains the matched bit, never empties
            changed = True

    # Cycles only exist among unmarked variables and unreached values.
    if unmarked:
        val_index: dict[int, int] = {}
        nvars = len(unmarked)
        m = union & ~reach
        while m:
            b = m & -m
            m ^= b
            val_index[b] = nvars + len(val_index)
        adj: list[list[int]] = [[] for _ in range(nvars + len(val_index))]
        for i, x in enumerate(unmarked):
            mb = match_bit[x]
            adj[val_index[mb]].append(i)
            row = adj[i]
            mm = masks[x] & ~mb
            while mm:
                b = mm & -mm
                mm ^= b
                row.append(val_index[b])
        comp = _tarjan_scc(adj)
        for i, x in enumerate(unmarked):
            mb = match_bit[x]
            ci = comp[i]
            mm = masks[x] & ~mb
            drop = 0
            while mm:
                b = mm & -mm
                mm ^= b
                if comp[val_index[b]] != ci:
                    drop |= b
            if drop:
                store.reduce(x, masks[x] & ~drop)
                changed = True
    return PruneResult.CHANGED if changed else PruneResult.FIXPOINT


def _augment(x, masks, match_bit, owner, visited) -> bool:
    m = masks[x]
    mm = m
    while mm:
        b = mm & -mm
        mm ^= b
        if b not in owner and b not in visited:
            owner[b] = x
            match_bit[x] = b
            return True
    mm = m
    while mm:
        b = mm & -mm
        mm ^= b
        if b in visited:
            continue
        visited.add(b)
        if _augment(owner[b], masks, match_bit, owner, visited):
            owner[b] = x
            match_bit[x] = b
            return True
    return False


def _tarjan_scc(adj: list[list[int]]) -> list[int]:
    n = len(adj)
    index = [0] * n
    low = [0] * n
    on_stack = bytearray(n)
    comp = [0] * n
    stack: list[int] = []
    counter = 1
    ncomp = 0
    call_v: list[int] = []  # parallel stacks: node and next-edge pointer
    call_p: list[int] = []
    for start in range(n):
        if index[start]:
            continue
        call_v.append(start)
        call_p.append(0)
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = 1
        while call_v:
            v = call_v[-1]
            row = adj[v]
            pi = call_p[-1]
            if pi < len(row):
                call_p[-1] = pi + 1
                w = row[pi]
                if not index[w]:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = 1
                    call_v.append(w)
                    call_p.append(0)
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                call_v.pop()
                call_p.pop()
                lv = low[v]
                if lv == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = 0
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                if call_v and lv < low[call_v[-1]]:
                    low[call_v[-1]] = lv
    return comp


def filter_sum(store: DomainStore, scope, op: str, constant: int) -> PruneResult:
    """Bounds consistency for sum(scope) eq/le/ge constant."""
    scope = tuple(scope)
    off = store.offset
    masks = store.masks
    changed = False
    while True:
        lo_sum = 0
        hi_sum = 0
        for x in scope:
            m = masks[x]
            if m == 0:
                return PruneResult.CONTRADICTION
            lo_sum += (m & -m).bit_length() - 1 + off
            hi_sum += m.bit_length() - 1 + off
        if op in ("eq", "le") and lo_sum > constant:
            return PruneResult.CONTRADICTION
        if op in ("eq", "ge") and hi_sum < constant:
            return PruneResult.CONTRADICTION
        round_changed = False
        for x in scope:
            m = masks[x]
            lo_x = (m & -m).bit_length() - 1 + off
            hi_x = m.bit_length() - 1 + off
            keep_lo = lo_x
            keep_hi = hi_x
            if op in ("eq", "le"):
                keep_hi = min(keep_hi, constant - (lo_sum - lo_x))
            if op in ("eq", "ge"):
                keep_lo = max(keep_lo, constant - (hi_sum - hi_x))
            if keep_lo > lo_x or keep_hi < hi_x:
                if keep_lo > keep_hi:
                    return PruneResult.CONTRADICTION
                window = ((1 << (keep_hi - off + 1)) - 1) & ~((1 << (keep_lo - off)) - 1)
                if not store.reduce(x, m & window):
                    return PruneResult.CONTRADICTION
                changed = round_changed = True
        if not round_changed:
            return PruneResult.CHANGED if changed else PruneResult.FIXPOINT


def filter_binary_less(store: DomainStore, x: int, y: int, strict: bool = True) -> PruneResult:
    off = store.offset
    masks = store.masks
    gap = 1 if strict else 0
    changed = False
    while True:
        if masks[x] == 0 or masks[y] == 0:
            return PruneResult.CONTRADICTION
        hi_x = masks[y].bit_length() - 1 + off - gap
        lo_y = (masks[x] & -masks[x]).bit_length() - 1 + off + gap
        round_changed = False
        if store.max_value(x) > hi_x:
            if hi_x < off:
                return PruneResult.CONTRADICTION
            if not store.reduce(x, masks[x] & ((1 << (hi_x - off + 1)) - 1)):
                return PruneResult.CONTRADICTION
            changed = round_changed = True
        if store.min_value(y) < lo_y:
            if not store.reduce(y, masks[y] & ~((1 << (lo_y - off)) - 1)):
                return PruneResult.CONTRADICTION
            changed = round_changed = True
        if not round_changed:
            return PruneResult.CHANGED if changed else PruneResult.FIXPOINT


def filter_table(store: DomainStore, scope, tuples) -> PruneResult:
    scope = tuple(scope)
    return _table_filter(store, scope, _table_supports(scope, tuple(tuples), store.offset))


def _table_supports(scope, tuples, offset) -> list[dict[int, int]]:
    """Per position, per value-bit: bitmask over tuple indices supporting it."""
    supports: list[dict[int, int]] = [{} for _ in scope]
    for ti, t in enumerate(tuples):
        bit = 1 << ti
        for p, value in enumerate(t):
            vb = 1 << (value - offset)
            supports[p][vb] = supports[p].get(vb, 0) | bit
    return supports


def _table_filter(store: DomainStore, scope, supports) -> PruneResult:
    masks = store.masks
    viable = -1
    per_pos = []
    for p, x in enumerate(scope):
        acc = 0
        sup = supports[p]
        m = masks[x]
        while m:
            b = m & -m
            m ^= b
            s = sup.get(b)
            if s is not None:
                acc |= s
        per_pos.append(acc)
        viable &= acc
        if viable == 0:
            return PruneResult.CONTRADICTION
    changed = False
    for p, x in enumerate(scope):
        sup = supports[p]
        m = masks[x]
        drop = 0
        mm = m
        while mm:
            b = mm & -mm
            mm ^= b
            if sup.get(b, 0) & viable == 0:
                drop |= b
        if drop:
            if not store.reduce(x, m & ~drop):
                return PruneResult.CONTRADICTION
            changed = True
    return PruneResult.CHANGED if changed else PruneResult.FIXPOINT


# ---------------------------------------------------------------------------
# Propagation engine


class _Engine:
    """Per-instance compiled propagators with persistent filter caches.

    Propagation runs in two stages: cheap filters (and the elimination-only
    part of allDifferent) drain first, then one full matching-based filter
    runs at a time.  Both stages feed each other until a mutual fixpoint;
    since all filters are monotone the fixpoint is the same as with a single
    flat queue, only reached with far fewer expensive runs.
    """

    def __init__(self, instance: CspInstance):
        self.instance = instance
        nvars = len(instance.variables)
        self.watchers: list[list[int]] = [[] for _ in range(nvars)]
        self.cheap = []
        self.full = []
        for ci, c in enumerate(instance.constraints):
            cheap, full = self._make_runners(c)
            self.cheap.append(cheap)
            self.full.append(full)
            for v in scope_of(c):
                self.watchers[v].append(ci)
        ncons = len(instance.constraints)
        self.in_queue = bytearray(ncons)
        self.dirty = bytearray(ncons)

    @staticmethod
    def _make_runners(c: Constraint):
        if isinstance(c, Instantiation):
            return (lambda store, sc=c.vars, vals=c.values: filter_instantiation(store, sc, vals)), None
        if isinstance(c, AllDifferent):
            cache: dict[int, int] = {}
            cheap = lambda store, sc=c.vars: _alldiff_cheap(store, sc)  # noqa: E731
            full = lambda store, sc=c.vars, mc=cache: _alldiff_filter(store, sc, mc)  # noqa: E731
            return cheap, full
        if isinstance(c, SumCompare):
            return (lambda store, sc=c.vars, op=c.op, k=c.constant: filter_sum(store, sc, op, k)), None
        if isinstance(c, BinaryLess):
            return (lambda store, x=c.x, y=c.y, s=c.strict: filter_binary_less(store, x, y, s)), None
        if isinstance(c, Table):
            supports_cache: dict[int, list] = {}

            def run_table(store, sc=c.vars, tups=c.tuples, cache=supports_cache):
                sup = cache.get(store.offset)
                if sup is None:
                    sup = cache[store.offset] = _table_supports(sc, tups, store.offset)
                return _table_filter(store, sc, sup)

            return run_table, None
        raise ModelError(f"no filter for {type(c).__name__}")

    def run_queue(self, store: DomainStore, seed, deadline=None) -> bool:
        queue = deque()
        in_queue = self.in_queue
        dirty = self.dirty
        dirty_list: list[int] = []
        watchers = self.watchers
        cheap = self.cheap
        full = self.full
        touched = store.touched

        def fail_cleanup():
            del touched[:]
            for c in queue:
                in_queue[c] = 0
            for c in dirty_list:
                dirty[c] = 0

        def wake(exclude):
            for v in touched:
                for w in watchers[v]:
                    if w == exclude:
                        continue
                    if not in_queue[w]:
                        in_queue[w] = 1
                        queue.append(w)
                    if full[w] is not None and not dirty[w]:
                        dirty[w] = 1
                        dirty_list.append(w)

        for ci in seed:
            if not in_queue[ci]:
                in_queue[ci] = 1
                queue.append(ci)
            if full[ci] is not None and not dirty[ci]:
                dirty[ci] = 1
                dirty_list.append(ci)

        steps = 0
        while True:
            while queue:
                ci = queue.popleft()
                in_queue[ci] = 0
                del touched[:]
                result = cheap[ci](store)
                if result is PruneResult.CONTRADICTION:
                    fail_cleanup()
                    return False
                if touched:
                    wake(ci)
                steps += 1
                if deadline is not None and steps & 63 == 0 and time.perf_counter() > deadline:
                    fail_cleanup()
                    raise _DeadlineHit()
            ci = -1
            while dirty_list:
                c = dirty_list.pop()
                if dirty[c]:
                    dirty[c] = 0
                    ci = c
                    break
            if ci < 0:
                del touched[:]
                return True
            del touched[:]
            result = full[ci](store)
            if result is PruneResult.CONTRADICTION:
                fail_cleanup()
                return False
            if touched:
                wake(ci)
            steps += 1
            if deadline is not None and time.perf_counter() > deadline:
                fail_cleanup()
                raise _DeadlineHit()


class _DeadlineHit(Exception):
    pass


def propagate(instance: CspInstance, store: DomainStore) -> bool:
    """Run all constraint filters to a mutual fixpoint; False on contradiction."""
    engine = _Engine(instance)
    return engine.run_queue(store, range(len(instance.constraints)))


# ---------------------------------------------------------------------------
# Search


@dataclass
class SolveStats:
    nodes: int = 0
    backtracks: int = 0
    elapsed: float = 0.0


@dataclass
class SolveReport:
    solutions: tuple[Solution, ...]
    count: int
    complete: bool
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def satisfiable(self) -> bool:
        return self.count > 0


class _Frame:
    __slots__ = ("var", "values", "idx", "mark", "live")

    def __init__(self, var, values, mark, live):
        self.var = var
        self.values = values
        self.idx = 0
        self.mark = mark
        self.live = live


def solve(
    instance: CspInstance,
    mode: str = "all",
    *,
    limit: Optional[int] = None,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
) -> SolveReport:
    """Complete depth-first search with propagation at every node.

    mode: "first" (stop at one solution), "all" (enumerate, optionally up to
    `limit`), or "count" (like "all" but solutions are not stored).
    Raises ResourceLimitError when a node or time budget runs out.
    """
    if mode not in ("first", "all", "count"):
        raise ValueError(f"unknown solve mode {mode!r}")
    max_solutions = 1 if mode == "first" else limit
    keep = mode != "count"

    engine = _Engine(instance)
    store = DomainStore(instance.variables)
    stats = SolveStats()
    solutions: list[Solution] = []
    count = 0
    start = time.perf_counter()
    deadline = start + time_limit if time_limit is not None else None

    def report(complete: bool) -> SolveReport:
        stats.elapsed = time.perf_counter() - start
        return SolveReport(tuple(solutions), count, complete, stats)

    def out_of_budget() -> Optional[str]:
        if node_limit is not None and stats.nodes >= node_limit:
            return "nodes"
        if deadline is not None and time.perf_counter() > deadline:
            return "time"
        return None

    nvars = len(instance.variables)
    try:
        root_ok = engine.run_queue(store, range(len(instance.constraints)), deadline)
    except _DeadlineHit:
        raise ResourceLimitError("time", report(False)) from None
    if not root_ok:
        return report(True)

    masks = store.masks
    root_live = [i for i in range(nvars) if masks[i] & (masks[i] - 1)]
    frames: list[_Frame] = []

    def pick_var(live: list[int]) -> int:
        best = live[0]
        best_size = masks[best].bit_count()
        if best_size > 2:
            for i in live[1:]:
                s = masks[i].bit_count()
                if s < best_size:
                    best, best_size = i, s
                    if s == 2:
                        break
        return best

    while True:
        kind = out_of_budget()
        if kind:
            raise ResourceLimitError(kind, report(False))
        # Candidates at this depth: the parent frame's live list narrowed by
        # whatever the last assignment's propagation fixed.  Each frame keeps
        # its own list so backtracking restores the candidate set for free.
        parent_live = frames[-1].live if frames else root_live
        live = [i for i in parent_live if masks[i] & (masks[i] - 1)]
        if not live:
            count += 1
            if keep:
                solutions.append(Solution(tuple(store.assigned_value(i) for i in range(nvars))))
            if max_solutions is not None and count >= max_solutions:
                return report(False)
        else:
            var = pick_var(live)
            frames.append(_Frame(var, store.values(var), store.mark(), live))
        # Advance the deepest frame to its next consistent value, backtracking
        # through exhausted frames.
        advanced = False
        while frames:
            f = frames[-1]
            ok = False
            while f.idx < len(f.values):
                value = f.values[f.idx]
                f.idx += 1
                store.restore_to(f.mark)
                stats.nodes += 1
                store.assign(f.var, value)
                try:
                    if engine.run_queue(store, engine.watchers[f.var], deadline):
                        ok = True
                        break
                except _DeadlineHit:
                    raise ResourceLimitError("time", report(False)) from None
                stats.backtracks += 1
                if stats.nodes & 255 == 0:
                    kind = out_of_budget()
                    if kind:
                        raise ResourceLimitError(kind, report(False))
            if ok:
                advanced = True
                break
            store.restore_to(f.mark)
            frames.pop()
            stats.backtracks += 1
        if not advanced:
            return report(True)


def is_extensible(
    instance: CspInstance,
    partial: Mapping[int, int],
    *,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
) -> bool:
    """True iff some full solution agrees with the partial assignment."""
    for var, value in partial.items():
        if value not in instance.variables[var].domain:
            raise ModelError(
                f"partial value {value} outside declared domain of {instance.variables[var].name}"
            )
    if partial:
        pins = tuple(sorted(partial))
        extra = Instantiation(vars=pins, values=tuple(partial[v] for v in pins), label="partial")
        instance = CspInstance(
            variables=instance.variables,
            constraints=instance.constraints + (extra,),
            array_shape=instance.array_shape,
            name=instance.name,
        )
    report = solve(instance, "first", node_limit=node_limit, time_limit=time_limit)
    return report.satisfiable
