"""Programmatic generators for the bundled puzzle families.

Each family builds a complete solution in closed form (cyclic Latin squares,
a pattern Sudoku, Siamese / doubly-even magic squares, smoothed random
nonogram pictures) and, for the hinted families, reveals cells of it until
root propagation alone completes the grid.  That guarantees every generated
instance is uniquely solvable and solves fast, at the price of generous hint
counts; hint minimality is out of scope.

Bundled `.lud` files live under the repository's ``catalog/`` directory
(override with the ``PUZZLEBRIDGE_CATALOG`` environment variable) and are
regenerated by ``scripts/build_catalog.py``.
"""

from __future__ import annotations

import hashlib
import math
import os
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

from .csp import (
    DomainStore,
    ResourceLimitError,
    Solution,
    propagate,
    run_pattern_count,
    solve,
)
from .ludeme import (
    AllDifferent,
    BoardSpec,
    CellSet,
    ClueRun,
    Column,
    ConstraintLudeme,
    Diagonal,
    GameSpec,
    LessThan,
    Placement,
    Row,
    SumEquals,
    format_game,
    parse_game,
)
from .translate import compile_game


class CatalogError(Exception):
    pass


class InfeasibleParams(CatalogError):
    pass


class Family(Enum):
    FUTOSHIKI = "futoshiki"
    LATIN_SQUARE = "latin"
    MAGIC_SQUARE = "magic"
    NQUEENS = "nqueens"
    NONOGRAM = "nonogram"
    SUDOKU = "sudoku"

    @property
    def display(self) -> str:
        return _DISPLAY[self]


_DISPLAY = {
    Family.FUTOSHIKI: "Futoshiki",
    Family.LATIN_SQUARE: "Latin Square",
    Family.MAGIC_SQUARE: "Magic Square",
    Family.NQUEENS: "N Queens",
    Family.NONOGRAM: "Nonogram",
    Family.SUDOKU: "Sudoku",
}


@dataclass(frozen=True)
class FamilyDescriptor:
    """Parameters for one instance; explicit lists override generation.

    ``hints`` holds (cell, value) pairs; ``inequalities`` holds (a, b) cell
    pairs meaning value(a) < value(b); nonogram clues are run-length tuples
    per row and per column.  Leaving a field as None asks the generator to
    derive it (deterministically from ``seed``) from a constructed solution.
    """

    family: Family
    size: int
    box_side: Optional[int] = None
    hints: Optional[tuple[tuple[int, int], ...]] = None
    inequalities: Optional[tuple[tuple[int, int], ...]] = None
    row_clues: Optional[tuple[tuple[int, ...], ...]] = None
    column_clues: Optional[tuple[tuple[int, ...], ...]] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a solution-count probe capped at two solutions."""

    solution_count: int  # 0, 1, or 2 meaning "at least two"
    unique: bool
    first: Optional[Solution]


# The published results grid: family blocks in order, one row per size.
CATALOG_ROWS: tuple[tuple[Family, int], ...] = (
    (Family.FUTOSHIKI, 4),
    (Family.FUTOSHIKI, 5),
    (Family.FUTOSHIKI, 6),
    (Family.FUTOSHIKI, 9),
    (Family.LATIN_SQUARE, 5),
    (Family.LATIN_SQUARE, 10),
    (Family.LATIN_SQUARE, 100),
    (Family.MAGIC_SQUARE, 3),
    (Family.MAGIC_SQUARE, 5),
    (Family.MAGIC_SQUARE, 7),
    (Family.NQUEENS, 4),
    (Family.NQUEENS, 8),
    (Family.NONOGRAM, 5),
    (Family.NONOGRAM, 10),
    (Family.NONOGRAM, 20),
    (Family.NONOGRAM, 32),
    (Family.SUDOKU, 9),
    (Family.SUDOKU, 16),
    (Family.SUDOKU, 25),
)

# The worked 4x4 sudoku example ships alongside the results-grid rows.
SUDOKU_4X4_DESCRIPTOR = FamilyDescriptor(
    family=Family.SUDOKU,
    size=4,
    hints=((1, 4), (5, 1), (7, 3), (13, 3), (15, 1)),
)

BUNDLED_ROWS: tuple[tuple[Family, int], ...] = CATALOG_ROWS + ((Family.SUDOKU, 4),)

# Inequality counts chosen so constraint totals land on the published grid.
DEFAULT_INEQUALITIES = {4: 4, 5: 11, 6: 10, 9: 40}

CATALOG_ENV_VAR = "PUZZLEBRIDGE_CATALOG"

_BASE_REVEAL = {
    Family.SUDOKU: 0.4,
    Family.LATIN_SQUARE: 0.5,
    Family.MAGIC_SQUARE: 0.5,
    Family.FUTOSHIKI: 0.4,
}

# Reject generated nonogram pictures whose table lowering would be large;
# propagation cost scales with the lowered tuple counts, so these budgets
# keep bundled instances comfortably inside the solve-time targets.
_LINE_TUPLE_BUDGET = 20_000
_TOTAL_TUPLE_BUDGET = 150_000
# Node budget for the uniqueness probe during nonogram generation.
_PROBE_NODE_LIMIT = 200_000


def bundled_sizes(family: Family) -> tuple[int, ...]:
    return tuple(sorted(size for fam, size in BUNDLED_ROWS if fam is family))


def bundled_descriptor(family: Family, size: int) -> FamilyDescriptor:
    if (family, size) == (Family.SUDOKU, 4):
        return SUDOKU_4X4_DESCRIPTOR
    if (family, size) not in BUNDLED_ROWS:
        raise InfeasibleParams(f"no bundled {family.value} instance of size {size}")
    return FamilyDescriptor(family=family, size=size)


def catalog_dir() -> Path:
    env = os.environ.get(CATALOG_ENV_VAR)
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "catalog"


def instance_path(family: Family, size: int) -> Path:
    return catalog_dir() / f"{family.value}-{size}.lud"


def load_bundled(family: Family, size: int) -> GameSpec:
    path = instance_path(family, size)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CatalogError(f"bundled instance missing: {path}") from None
    return parse_game(text)


def expected_counts(family: Family, size: int, inequalities: Optional[int] = None):
    """(variables, domain size, constraints beyond hints) for a family/size."""
    n = size
    if family is Family.SUDOKU:
        return (n * n, n, 3 * n)
    if family is Family.LATIN_SQUARE:
        return (n * n, n, 2 * n)
    if family is Family.NONOGRAM:
        return (n * n, 2, 2 * n)
    if family is Family.MAGIC_SQUARE:
        return (n * n, n * n, 2 * n + 3)
    if family is Family.FUTOSHIKI:
        q = DEFAULT_INEQUALITIES.get(n, n) if inequalities is None else inequalities
        return (n * n, n, 2 * n + q)
    if family is Family.NQUEENS:
        return (n * n, 2, 2 if n == 1 else 6 * n - 6)
    raise InfeasibleParams(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Instance construction


def make_instance(desc: FamilyDescriptor) -> GameSpec:
    """Build a GameSpec for the descriptor; deterministic for a given seed."""
    if desc.size < 1:
        raise InfeasibleParams(f"size must be positive, got {desc.size}")
    builder = {
        Family.SUDOKU: _make_sudoku,
        Family.LATIN_SQUARE: _make_latin,
        Family.MAGIC_SQUARE: _make_magic,
        Family.FUTOSHIKI: _make_futoshiki,
        Family.NQUEENS: _make_nqueens,
        Family.NONOGRAM: _make_nonogram,
    }[desc.family]
    return builder(desc)


def verify_instance(
    desc: FamilyDescriptor,
    *,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
) -> VerifyReport:
    """Probe the descriptor's instance for 0, 1 or >=2 solutions."""
    instance = compile_game(make_instance(desc))
    report = solve(instance, mode="all", limit=2, node_limit=node_limit, time_limit=time_limit)
    first = report.solutions[0] if report.solutions else None
    return VerifyReport(solution_count=report.count, unique=report.count == 1, first=first)


def _rng(desc: FamilyDescriptor, salt: int = 0) -> random.Random:
    seed = 0 if desc.seed is None else desc.seed
    key = f"{desc.family.value}:{desc.size}:{seed}:{salt}"
    return random.Random(int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big"))


def _placements(hints: dict[int, int]) -> tuple[Placement, ...]:
    return tuple(Placement(value=hints[cell], cell=cell) for cell in sorted(hints))


def _check_hints(hints, cell_count: int, components) -> dict[int, int]:
    allowed = set(components)
    out: dict[int, int] = {}
    for cell, value in hints:
        if not 0 <= cell < cell_count:
            raise InfeasibleParams(f"hint cell {cell} out of range")
        if value not in allowed:
            raise InfeasibleParams(f"hint value {value} is not a component")
        if cell in out:
            raise InfeasibleParams(f"duplicate hint for cell {cell}")
        out[cell] = value
    return out


def _adaptive_hints(
    build: Callable[[dict[int, int]], GameSpec],
    solution: list[int],
    rng: random.Random,
    base_fraction: float,
    *,
    max_rounds: int = 64,
) -> dict[int, int]:
    """Reveal solution cells until root propagation fixes every variable.

    Because hints are drawn from an actual solution and the final instance is
    propagation-complete, the result is satisfiable and uniquely solvable.
    """
    n = len(solution)
    order = list(range(n))
    rng.shuffle(order)
    hints: dict[int, int] = {}
    for cell in order[: max(1, round(base_fraction * n))]:
        hints[cell] = solution[cell]
    for _ in range(max_rounds):
        instance = compile_game(build(dict(hints)))
        store = DomainStore(instance.variables)
        if not propagate(instance, store):
            raise CatalogError("hints drawn from a solution contradicted the model")
        unsolved = {
            i for i, mask in enumerate(store.masks) if mask & (mask - 1)
        }
        if not unsolved:
            return hints
        want = max(1, len(unsolved) // 4)
        picks = [c for c in order if c in unsolved][:want]
        for cell in picks:
            hints[cell] = solution[cell]
    raise CatalogError("hint revelation did not converge")


def _row_regions(n: int) -> list[ConstraintLudeme]:
    return [AllDifferent(region=Row(index=r)) for r in range(n)]


def _column_regions(n: int) -> list[ConstraintLudeme]:
    return [AllDifferent(region=Column(index=c)) for c in range(n)]


# -- Sudoku -----------------------------------------------------------------


def _sudoku_solution(n: int, box: int, rng: random.Random) -> list[int]:
    """Seeded valid grid: pattern square under band/stack/symbol shuffles."""
    syms = list(range(1, n + 1))
    rng.shuffle(syms)

    def line_perm() -> list[int]:
        groups = list(range(box))
        rng.shuffle(groups)
        perm = []
        for g in groups:
            inner = list(range(box))
            rng.shuffle(inner)
            perm.extend(g * box + i for i in inner)
        return perm

    rowp, colp = line_perm(), line_perm()
    return [
        syms[(box * (rowp[r] % box) + rowp[r] // box + colp[c]) % n]
        for r in range(n)
        for c in range(n)
    ]


def _box_regions(n: int, box: int) -> list[ConstraintLudeme]:
    regions = []
    for br in range(box):
        for bc in range(box):
            cells = tuple(
                (br * box + r) * n + bc * box + c for r in range(box) for c in range(box)
            )
            regions.append(AllDifferent(region=CellSet(cells=cells)))
    return regions


def _make_sudoku(desc: FamilyDescriptor) -> GameSpec:
    n = desc.size
    box = desc.box_side if desc.box_side is not None else math.isqrt(n)
    if box * box != n:
        raise InfeasibleParams(f"sudoku side must be a perfect square, got {n}")
    values = tuple(range(1, n + 1))
    conditions = tuple(_row_regions(n) + _column_regions(n) + _box_regions(n, box))
    board = BoardSpec(rows=n, columns=n, box_side=box)

    def build(hints: dict[int, int]) -> GameSpec:
        return GameSpec(
            name=f"Sudoku {n}x{n}",
            players=1,
            board=board,
            components=values,
            placements=_placements(hints),
            play_values=values,
            end_conditions=conditions,
        )

    if desc.hints is not None:
        return build(_check_hints(desc.hints, n * n, values))
    rng = _rng(desc)
    solution = _sudoku_solution(n, box, rng)
    return build(_adaptive_hints(build, solution, rng, _BASE_REVEAL[Family.SUDOKU]))


# -- Latin square -----------------------------------------------------------


def _latin_solution(n: int, rng: random.Random) -> list[int]:
    """Cyclic square under symbol/row/column shuffles; valid by construction."""
    syms = list(range(1, n + 1))
    rng.shuffle(syms)
    rows = list(range(n))
    rng.shuffle(rows)
    cols = list(range(n))
    rng.shuffle(cols)
    return [syms[(rows[r] + cols[c]) % n] for r in range(n) for c in range(n)]


def _make_latin(desc: FamilyDescriptor) -> GameSpec:
    n = desc.size
    values = tuple(range(1, n + 1))
    conditions = tuple(_row_regions(n) + _column_regions(n))
    board = BoardSpec(rows=n, columns=n, box_side=None)

    def build(hints: dict[int, int]) -> GameSpec:
        return GameSpec(
            name=f"Latin Square {n}x{n}",
            players=1,
            board=board,
            components=values,
            placements=_placements(hints),
            play_values=values,
            end_conditions=conditions,
        )

    if desc.hints is not None:
        return build(_check_hints(desc.hints, n * n, values))
    rng = _rng(desc)
    solution = _latin_solution(n, rng)
    return build(_adaptive_hints(build, solution, rng, _BASE_REVEAL[Family.LATIN_SQUARE]))


# -- Magic square -----------------------------------------------------------


def _siamese_square(n: int) -> list[list[int]]:
    grid = [[0] * n for _ in range(n)]
    r, c = 0, n // 2
    for v in range(1, n * n + 1):
        grid[r][c] = v
        nr, nc = (r - 1) % n, (c + 1) % n
        if grid[nr][nc]:
            nr, nc = (r + 1) % n, c
        r, c = nr, nc
    return grid


def _doubly_even_square(n: int) -> list[list[int]]:
    grid = [[r * n + c + 1 for c in range(n)] for r in range(n)]
    for r in range(n):
        for c in range(n):
            if (r % 4 == c % 4) or ((r % 4) + (c % 4) == 3):
                grid[r][c] = n * n + 1 - grid[r][c]
    return grid


def _magic_solution(n: int, rng: random.Random) -> list[int]:
    grid = _siamese_square(n) if n % 2 else _doubly_even_square(n)
    for _ in range(rng.randrange(4)):  # rotation
        grid = [list(row) for row in zip(*grid[::-1])]
    if rng.random() < 0.5:  # reflection
        grid = [row[::-1] for row in grid]
    if rng.random() < 0.5:  # complement v -> n^2+1-v keeps all line sums
        grid = [[n * n + 1 - v for v in row] for row in grid]
    return [v for row in grid for v in row]


def _make_magic(desc: FamilyDescriptor) -> GameSpec:
    n = desc.size
    if n < 3 or n % 4 == 2:
        raise InfeasibleParams(
            f"magic square generation supports odd or doubly-even sides >= 3, got {n}"
        )
    values = tuple(range(1, n * n + 1))
    magic_sum = n * (n * n + 1) // 2
    conditions: list[ConstraintLudeme] = []
    conditions += [SumEquals(region=Row(index=r), target=magic_sum) for r in range(n)]
    conditions += [SumEquals(region=Column(index=c), target=magic_sum) for c in range(n)]
    conditions.append(SumEquals(region=Diagonal(anti=False), target=magic_sum))
    conditions.append(SumEquals(region=Diagonal(anti=True), target=magic_sum))
    conditions.append(AllDifferent(region=CellSet(cells=tuple(range(n * n)))))
    board = BoardSpec(rows=n, columns=n, box_side=None)

    def build(hints: dict[int, int]) -> GameSpec:
        return GameSpec(
            name=f"Magic Square {n}x{n}",
            players=1,
            board=board,
            components=values,
            placements=_placements(hints),
            play_values=values,
            end_conditions=tuple(conditions),
        )

    if desc.hints is not None:
        return build(_check_hints(desc.hints, n * n, values))
    rng = _rng(desc)
    solution = _magic_solution(n, rng)
    return build(_adaptive_hints(build, solution, rng, _BASE_REVEAL[Family.MAGIC_SQUARE]))


# -- Futoshiki --------------------------------------------------------------


def _adjacent_edges(n: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(n):
        for c in range(n):
            cell = r * n + c
            if c + 1 < n:
                edges.append((cell, cell + 1))
            if r + 1 < n:
                edges.append((cell, cell + n))
    return edges


def _make_futoshiki(desc: FamilyDescriptor) -> GameSpec:
    n = desc.size
    if n < 2:
        raise InfeasibleParams(f"futoshiki needs side >= 2, got {n}")
    values = tuple(range(1, n + 1))
    board = BoardSpec(rows=n, columns=n, box_side=None)
    base = _row_regions(n) + _column_regions(n)

    def build_with(inequalities, hints: dict[int, int]) -> GameSpec:
        conditions = tuple(base) + tuple(LessThan(a=a, b=b) for a, b in inequalities)
        return GameSpec(
            name=f"Futoshiki {n}x{n}",
            players=1,
            board=board,
            components=values,
            placements=_placements(hints),
            play_values=values,
            end_conditions=conditions,
        )

    if desc.inequalities is not None:
        seen = set()
        for a, b in desc.inequalities:
            if not (0 <= a < n * n and 0 <= b < n * n) or a == b:
                raise InfeasibleParams(f"bad inequality pair ({a}, {b})")
            if (a, b) in seen:
                raise InfeasibleParams(f"duplicate inequality ({a}, {b})")
            seen.add((a, b))
        hints = _check_hints(desc.hints or (), n * n, values)
        return build_with(tuple(desc.inequalities), hints)

    rng = _rng(desc)
    solution = _latin_solution(n, rng)
    q = DEFAULT_INEQUALITIES.get(n, n)
    edges = _adjacent_edges(n)
    if q > len(edges):
        raise InfeasibleParams(f"cannot place {q} inequalities on a {n}x{n} board")
    chosen = rng.sample(edges, q)
    oriented = tuple(
        (a, b) if solution[a] < solution[b] else (b, a) for a, b in chosen
    )
    if desc.hints is not None:
        return build_with(oriented, _check_hints(desc.hints, n * n, values))
    hints = _adaptive_hints(
        lambda h: build_with(oriented, h), solution, rng, _BASE_REVEAL[Family.FUTOSHIKI]
    )
    return build_with(oriented, hints)


# -- N Queens ---------------------------------------------------------------


def _queen_diagonals(n: int) -> list[tuple[int, ...]]:
    diagonals = []
    for d in range(-(n - 2), n - 1):  # r - c == d, length >= 2
        diagonals.append(tuple(r * n + (r - d) for r in range(n) if 0 <= r - d < n))
    for s in range(1, 2 * n - 2):  # r + c == s, length >= 2
        diagonals.append(tuple(r * n + (s - r) for r in range(n) if 0 <= s - r < n))
    return diagonals


def _make_nqueens(desc: FamilyDescriptor) -> GameSpec:
    n = desc.size
    conditions: list[ConstraintLudeme] = []
    conditions += [SumEquals(region=Row(index=r), target=1) for r in range(n)]
    conditions += [SumEquals(region=Column(index=c), target=1) for c in range(n)]
    if n >= 2:
        conditions += [
            SumEquals(region=CellSet(cells=cells), target=1, op="le")
            for cells in _queen_diagonals(n)
        ]
    hints = _check_hints(desc.hints or (), n * n, (1,))
    return GameSpec(
        name=f"N Queens {n}x{n}",
        players=1,
        board=BoardSpec(rows=n, columns=n, box_side=None),
        components=(1,),
        placements=_placements(hints),
        play_values=(0, 1),
        end_conditions=tuple(conditions),
    )


# -- Nonogram ---------------------------------------------------------------


def _line_runs(line: list[int]) -> tuple[int, ...]:
    runs = []
    count = 0
    for v in line:
        if v:
            count += 1
        elif count:
            runs.append(count)
            count = 0
    if count:
        runs.append(count)
    return tuple(runs)


def _smoothed_picture(n: int, rng: random.Random) -> list[list[int]]:
    grid = [[1 if rng.random() < 0.55 else 0 for _ in range(n)] for _ in range(n)]
    for _ in range(2):  # orthogonal-majority smoothing grows blobby regions
        nxt = [[0] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                total, ones = 1, grid[r][c]
                for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < n and 0 <= cc < n:
                        total += 1
                        ones += grid[rr][cc]
                nxt[r][c] = 1 if 2 * ones >= total else 0
        grid = nxt
    return grid


def _nonogram_clue_sets(n: int, rng: random.Random):
    grid = _smoothed_picture(n, rng)
    rows = [_line_runs(grid[r]) for r in range(n)]
    cols = [_line_runs([grid[r][c] for r in range(n)]) for c in range(n)]
    if any(not runs for runs in rows + cols):
        return None  # blank lines make dull puzzles; resample
    counts = [run_pattern_count(n, runs) for runs in rows + cols]
    if max(counts) > _LINE_TUPLE_BUDGET or sum(counts) > _TOTAL_TUPLE_BUDGET:
        return None
    return tuple(rows), tuple(cols)


def _check_clues(clues, n: int, axis: str) -> tuple[tuple[int, ...], ...]:
    if len(clues) != n:
        raise InfeasibleParams(f"need {n} {axis} clues, got {len(clues)}")
    for runs in clues:
        if any(r <= 0 for r in runs):
            raise InfeasibleParams(f"run lengths must be positive in {tuple(runs)}")
        if sum(runs) + max(0, len(runs) - 1) > n:
            raise InfeasibleParams(f"{axis} clue {tuple(runs)} does not fit in {n} cells")
    return tuple(tuple(runs) for runs in clues)


def _make_nonogram(desc: FamilyDescriptor) -> GameSpec:
    n = desc.size
    if n < 2:
        raise InfeasibleParams(f"nonogram needs side >= 2, got {n}")
    board = BoardSpec(rows=n, columns=n, box_side=None)

    def build(rows, cols, hints: dict[int, int]) -> GameSpec:
        conditions = [ClueRun(region=Row(index=r), runs=rows[r]) for r in range(n)]
        conditions += [ClueRun(region=Column(index=c), runs=cols[c]) for c in range(n)]
        return GameSpec(
            name=f"Nonogram {n}x{n}",
            players=1,
            board=board,
            components=(1,),
            placements=_placements(hints),
            play_values=(0, 1),
            end_conditions=tuple(conditions),
        )

    hints = _check_hints(desc.hints or (), n * n, (1,))
    if desc.row_clues is not None or desc.column_clues is not None:
        if desc.row_clues is None or desc.column_clues is None:
            raise InfeasibleParams("row and column clues must be given together")
        rows = _check_clues(desc.row_clues, n, "row")
        cols = _check_clues(desc.column_clues, n, "column")
        return build(rows, cols, hints)

    for attempt in range(200):
        clues = _nonogram_clue_sets(n, _rng(desc, salt=attempt))
        if clues is None:
            continue
        spec = build(clues[0], clues[1], hints)
        try:
            report = solve(compile_game(spec), mode="all", limit=2, node_limit=_PROBE_NODE_LIMIT)
        except ResourceLimitError:
            continue
        if report.count == 1:
            return spec
    raise InfeasibleParams(f"could not generate a uniquely solvable {n}x{n} nonogram")


__all__ = [
    "BUNDLED_ROWS",
    "CATALOG_ENV_VAR",
    "CATALOG_ROWS",
    "CatalogError",
    "DEFAULT_INEQUALITIES",
    "Family",
    "FamilyDescriptor",
    "InfeasibleParams",
    "SUDOKU_4X4_DESCRIPTOR",
    "VerifyReport",
    "bundled_descriptor",
    "bundled_sizes",
    "catalog_dir",
    "expected_counts",
    "format_game",
    "instance_path",
    "load_bundled",
    "make_instance",
    "verify_instance",
]
