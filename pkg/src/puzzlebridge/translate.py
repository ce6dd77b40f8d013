"""Compile game specs into constraint networks and map solutions to moves.

The forward direction (`compile_game`) produces one CSP variable per board
cell; the reverse direction (`moves_from_solution`) turns a total assignment
into the ``Add(cell,value)`` move sequence that fills the board, and
`replay` re-applies such a sequence against the spec's own end rules.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Sequence, Union

from .csp import (
    AllDifferent as CspAllDifferent,
    BinaryLess,
    Constraint,
    CspInstance,
    Instantiation,
    RunPattern,
    Solution,
    SumCompare,
    Variable,
)
from .ludeme import (
    AllDifferent,
    BoardSpec,
    ClueRun,
    GameSpec,
    LessThan,
    SumEquals,
    region_cells,
)

WIN = "Win"
LOSS = "Loss"


class TranslateError(Exception):
    """Base class for compilation and replay failures."""


class UnsupportedCondition(TranslateError):
    def __init__(self, condition):
        super().__init__(f"no constraint mapping for {type(condition).__name__}")
        self.condition = condition


class InconsistentHint(TranslateError):
    def __init__(self, cell: int, expected: int, got: int):
        super().__init__(f"solution value {got} at cell {cell} contradicts hint {expected}")
        self.cell = cell


class IllegalMove(TranslateError):
    def __init__(self, detail: str):
        super().__init__(detail)


# ---------------------------------------------------------------------------
# Moves


@dataclass(frozen=True)
class Move:
    """An Add move: put `value` on empty cell `cell`."""

    cell: int
    value: int

    kind = "Add"

    def __str__(self) -> str:
        return f"Add({self.cell},{self.value})"


_MOVE_RE = re.compile(r"\s*Add\((\d+)\s*,\s*(\d+)\)\s*\Z")


@dataclass(frozen=True)
class MoveList:
    moves: tuple[Move, ...]

    def __iter__(self):
        return iter(self.moves)

    def __len__(self) -> int:
        return len(self.moves)

    def to_text(self) -> str:
        return "".join(f"{m}\n" for m in self.moves)

    def to_obj(self) -> list[dict[str, int]]:
        return [{"cell": m.cell, "value": m.value} for m in self.moves]

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def from_text(cls, text: str) -> "MoveList":
        moves = []
        for line in text.splitlines():
            if not line.strip():
                continue
            m = _MOVE_RE.match(line)
            if m is None:
                raise IllegalMove(f"unparseable move line {line!r}")
            moves.append(Move(cell=int(m.group(1)), value=int(m.group(2))))
        return cls(tuple(moves))

    @classmethod
    def from_obj(cls, data: Iterable[dict]) -> "MoveList":
        return cls(tuple(Move(cell=int(d["cell"]), value=int(d["value"])) for d in data))


# ---------------------------------------------------------------------------
# Forward direction: GameSpec -> CspInstance


def cell_name(board: BoardSpec, cell: int) -> str:
    return f"x[{cell // board.columns}][{cell % board.columns}]"


def compile_game(spec: GameSpec) -> CspInstance:
    """One variable per grid cell, hints as an Instantiation, end rules as constraints."""
    board = spec.board
    if 0 in spec.play_values:
        domain = tuple(sorted(spec.play_values))
    else:
        domain = tuple(sorted(spec.components))
    variables = tuple(
        Variable(id=i, name=cell_name(board, i), domain=domain)
        for i in range(board.cell_count)
    )
    constraints: list[Constraint] = []
    if spec.placements:
        hints = spec.placement_map()
        cells = tuple(sorted(hints))
        constraints.append(
            Instantiation(vars=cells, values=tuple(hints[c] for c in cells), label="hints")
        )
    for condition in spec.end_conditions:
        constraints.append(_compile_condition(condition, board))
    return CspInstance(
        variables=variables,
        constraints=tuple(constraints),
        array_shape=(board.rows, board.columns),
        name=spec.name,
    )


def _compile_condition(condition, board: BoardSpec) -> Constraint:
    if isinstance(condition, AllDifferent):
        return CspAllDifferent(vars=region_cells(board, condition.region))
    if isinstance(condition, SumEquals):
        return SumCompare(
            vars=region_cells(board, condition.region), op=condition.op, constant=condition.target
        )
    if isinstance(condition, LessThan):
        return BinaryLess(x=condition.a, y=condition.b, strict=True)
    if isinstance(condition, ClueRun):
        return RunPattern(vars=region_cells(board, condition.region), runs=condition.runs)
    raise UnsupportedCondition(condition)


# ---------------------------------------------------------------------------
# Reverse direction: Solution -> MoveList -> terminal check


def _values_of(sol: Union[Solution, Sequence[int]]) -> tuple[int, ...]:
    if isinstance(sol, Solution):
        return sol.values
    return tuple(sol)


def moves_from_solution(spec: GameSpec, sol: Union[Solution, Sequence[int]]) -> MoveList:
    """Add moves for every non-hinted, non-zero cell, in ascending cell order."""
    values = _values_of(sol)
    if len(values) != spec.board.cell_count:
        raise TranslateError(
            f"solution has {len(values)} values for a {spec.board.cell_count}-cell board"
        )
    hints = spec.placement_map()
    for cell, expected in hints.items():
        if values[cell] != expected:
            raise InconsistentHint(cell, expected, values[cell])
    moves = tuple(
        Move(cell=cell, value=value)
        for cell, value in enumerate(values)
        if value != 0 and cell not in hints
    )
    return MoveList(moves)


def replay(spec: GameSpec, moves: MoveList) -> str:
    """Apply placements then moves to a fresh board; Win iff the end rules hold."""
    board = spec.board
    grid: list = [None] * board.cell_count
    for p in spec.placements:
        grid[p.cell] = p.value
    for move in moves:
        if not 0 <= move.cell < board.cell_count:
            raise IllegalMove(f"cell {move.cell} out of range")
        if grid[move.cell] is not None:
            raise IllegalMove(f"cell {move.cell} already occupied")
        if move.value == 0 or move.value not in spec.components:
            raise IllegalMove(f"value {move.value} is not a placeable component")
        grid[move.cell] = move.value
    if 0 in spec.play_values:
        grid = [0 if v is None else v for v in grid]
    if any(v is None for v in grid):
        return LOSS
    return WIN if all(_holds(c, grid, board) for c in spec.end_conditions) else LOSS


def _holds(condition, grid, board: BoardSpec) -> bool:
    if isinstance(condition, AllDifferent):
        values = [grid[c] for c in region_cells(board, condition.region)]
        return len(set(values)) == len(values)
    if isinstance(condition, SumEquals):
        s = sum(grid[c] for c in region_cells(board, condition.region))
        if condition.op == "eq":
            return s == condition.target
        return s <= condition.target if condition.op == "le" else s >= condition.target
    if isinstance(condition, LessThan):
        return grid[condition.a] < grid[condition.b]
    if isinstance(condition, ClueRun):
        line = [grid[c] for c in region_cells(board, condition.region)]
        runs = tuple(len(list(g)) for bit, g in groupby(line) if bit == 1)
        return runs == condition.runs
    raise UnsupportedCondition(condition)
