"""Ludemic S-expression language for single-player deduction puzzles.

Parses `.lud` game descriptions (a small subset of a ludemic class grammar:
mode / equipment / rules with start, play and end sections) into a validated
:class:`GameSpec`, and prints specs back to canonical `.lud` text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


# ---------------------------------------------------------------------------
# Errors


class LudemeError(Exception):
    """Base class for all ludeme-language failures."""


class EmptyInput(LudemeError):
    pass


class UnbalancedDelimiter(LudemeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnexpectedToken(LudemeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnsupportedLudeme(LudemeError):
    def __init__(self, name: str, detail: str = ""):
        msg = f"unsupported ludeme: {name}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.name = name


class MultiPlayer(LudemeError):
    def __init__(self, players: int):
        super().__init__(f"only single-player games are supported, got mode {players}")
        self.players = players


class BadRegion(LudemeError):
    pass


class DuplicatePlacement(LudemeError):
    def __init__(self, cell: int):
        super().__init__(f"two placements on cell {cell}")
        self.cell = cell


# ---------------------------------------------------------------------------
# Concrete syntax: S-expression nodes


@dataclass(frozen=True)
class Atom:
    text: str


@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class NodeList:
    children: tuple["LudemeNode", ...]


@dataclass(frozen=True)
class Braced:
    children: tuple["LudemeNode", ...]


LudemeNode = Union[Atom, Number, NodeList, Braced]

_INT_RE = re.compile(r"-?\d+\Z")
_DELIMS = set("(){}")


def _tokenize(text: str):
    """Yield (kind, value, position) triples; kind is one of ( ) { } atom num str."""
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _DELIMS:
            yield ch, ch, i
            i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise UnbalancedDelimiter("unterminated string", i)
            yield "str", text[i + 1 : end], i
            i = end + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in _DELIMS and text[j] != '"':
            j += 1
        word = text[i:j]
        if _INT_RE.match(word):
            yield "num", int(word), i
        else:
            yield "atom", word, i
        i = j


def parse_sexpr(text: str) -> LudemeNode:
    """Parse one S-expression: parentheses open node lists, braces open sets."""
    tokens = list(_tokenize(text))
    if not tokens:
        raise EmptyInput("no expression in input")
    node, rest = _parse_one(tokens, 0)
    if rest < len(tokens):
        kind, value, pos = tokens[rest]
        raise UnexpectedToken(f"trailing token {value!r}", pos)
    return node


def _parse_one(tokens, i):
    kind, value, pos = tokens[i]
    if kind == "(" or kind == "{":
        close = ")" if kind == "(" else "}"
        children = []
        j = i + 1
        while True:
            if j >= len(tokens):
                raise UnbalancedDelimiter(f"missing {close!r}", pos)
            if tokens[j][0] == close:
                break
            if tokens[j][0] in (")", "}"):
                raise UnbalancedDelimiter(f"mismatched {tokens[j][1]!r}", tokens[j][2])
            child, j = _parse_one(tokens, j)
            children.append(child)
        node = NodeList(tuple(children)) if kind == "(" else Braced(tuple(children))
        return node, j + 1
    if kind in (")", "}"):
        raise UnbalancedDelimiter(f"unmatched {value!r}", pos)
    if kind == "num":
        return Number(value), i + 1
    return Atom(value), i + 1


def _needs_quotes(text: str) -> bool:
    if text == "" or _INT_RE.match(text):
        return True
    return any(c.isspace() or c in _DELIMS or c == '"' for c in text)


def format_node(node: LudemeNode) -> str:
    """Print a node so that parsing the result yields a structurally equal tree."""
    if isinstance(node, Atom):
        return f'"{node.text}"' if _needs_quotes(node.text) else node.text
    if isinstance(node, Number):
        return str(node.value)
    inner = " ".join(format_node(c) for c in node.children)
    return f"({inner})" if isinstance(node, NodeList) else "{" + inner + "}"


# ---------------------------------------------------------------------------
# Abstract syntax: boards, regions, constraints, game specs


@dataclass(frozen=True)
class BoardSpec:
    """A square grid, cell indices row-major: cell i -> (i // columns, i % columns)."""

    rows: int
    columns: int
    box_side: int | None = None  # set for Sudoku boards (rows == box_side**2)

    kind = "square-grid"

    @property
    def cell_count(self) -> int:
        return self.rows * self.columns

    def row_cells(self, r: int) -> tuple[int, ...]:
        return tuple(r * self.columns + c for c in range(self.columns))

    def column_cells(self, c: int) -> tuple[int, ...]:
        return tuple(r * self.columns + c for r in range(self.rows))

    def box_cells(self, b: int) -> tuple[int, ...]:
        if self.box_side is None:
            raise BadRegion("board has no boxes")
        s = self.box_side
        br, bc = divmod(b, s)
        return tuple(
            (br * s + r) * self.columns + bc * s + c for r in range(s) for c in range(s)
        )

    @property
    def named_regions(self) -> dict[str, tuple[int, ...]]:
        regions = {}
        for r in range(self.rows):
            regions[f"row{r}"] = self.row_cells(r)
        for c in range(self.columns):
            regions[f"col{c}"] = self.column_cells(c)
        if self.box_side is not None:
            for b in range(self.rows):
                regions[f"box{b}"] = self.box_cells(b)
        return regions

    @staticmethod
    def square(n: int) -> "BoardSpec":
        return BoardSpec(rows=n, columns=n)

    @staticmethod
    def sudoku(box_side: int) -> "BoardSpec":
        n = box_side * box_side
        return BoardSpec(rows=n, columns=n, box_side=box_side)


@dataclass(frozen=True)
class Row:
    index: int


@dataclass(frozen=True)
class Column:
    index: int


@dataclass(frozen=True)
class Diagonal:
    anti: bool = False


@dataclass(frozen=True)
class CellSet:
    cells: tuple[int, ...]


RegionRef = Union[Row, Column, Diagonal, CellSet]


def region_cells(board: BoardSpec, region: RegionRef) -> tuple[int, ...]:
    """Resolve a region reference to its cell indices, validating ranges."""
    if isinstance(region, Row):
        if not 0 <= region.index < board.rows:
            raise BadRegion(f"row {region.index} out of range")
        return board.row_cells(region.index)
    if isinstance(region, Column):
        if not 0 <= region.index < board.columns:
            raise BadRegion(f"column {region.index} out of range")
        return board.column_cells(region.index)
    if isinstance(region, Diagonal):
        if board.rows != board.columns:
            raise BadRegion("diagonal on a non-square board")
        n = board.rows
        if region.anti:
            return tuple(r * n + (n - 1 - r) for r in range(n))
        return tuple(r * n + r for r in range(n))
    cells = region.cells
    if len(set(cells)) != len(cells):
        raise BadRegion(f"duplicate cells in region {cells}")
    for cell in cells:
        if not 0 <= cell < board.cell_count:
            raise BadRegion(f"cell {cell} out of range")
    return cells


@dataclass(frozen=True)
class Placement:
    value: int
    cell: int


@dataclass(frozen=True)
class AllDifferent:
    region: RegionRef


@dataclass(frozen=True)
class SumEquals:
    """Sum over a region compared against a fixed target (eq, le or ge)."""

    region: RegionRef
    target: int
    op: str = "eq"


@dataclass(frozen=True)
class LessThan:
    a: int
    b: int


@dataclass(frozen=True)
class ClueRun:
    region: RegionRef
    runs: tuple[int, ...]


ConstraintLudeme = Union[AllDifferent, SumEquals, LessThan, ClueRun]


@dataclass(frozen=True)
class GameSpec:
    name: str
    players: int
    board: BoardSpec
    components: tuple[int, ...]
    placements: tuple[Placement, ...]
    play_values: tuple[int, ...]
    end_conditions: tuple[ConstraintLudeme, ...]

    def placement_map(self) -> dict[int, int]:
        return {p.cell: p.value for p in self.placements}


# ---------------------------------------------------------------------------
# Game parsing

_SUM_OPS = {"le", "ge"}


def parse_game(text: str) -> GameSpec:
    """Parse a `.lud` document into a validated GameSpec."""
    root = parse_sexpr(text)
    if not (isinstance(root, NodeList) and root.children and root.children[0] == Atom("game")):
        raise UnsupportedLudeme(_head_name(root), "expected a (game ...) form")
    items = root.children[1:]
    if not items or not isinstance(items[0], Atom):
        raise UnsupportedLudeme("game", "missing game name")
    name = items[0].text

    mode = _find_section(items, "mode")
    equipment = _find_section(items, "equipment")
    rules = _find_section(items, "rules")

    players = _expect_int(mode, 1, "mode")
    if players != 1:
        raise MultiPlayer(players)

    board, components = _parse_equipment(equipment)
    placements, play_values, conditions = _parse_rules(rules, board, components)

    return GameSpec(
        name=name,
        players=players,
        board=board,
        components=components,
        placements=placements,
        play_values=play_values,
        end_conditions=conditions,
    )


def _head_name(node: LudemeNode) -> str:
    if isinstance(node, NodeList) and node.children and isinstance(node.children[0], Atom):
        return node.children[0].text
    return format_node(node)


def _find_section(items, head: str) -> NodeList:
    for item in items:
        if isinstance(item, NodeList) and item.children and item.children[0] == Atom(head):
            return item
    raise UnsupportedLudeme("game", f"missing ({head} ...) section")


def _expect_int(node: NodeList, index: int, what: str) -> int:
    if len(node.children) <= index or not isinstance(node.children[index], Number):
        raise UnsupportedLudeme(what, "expected an integer argument")
    return node.children[index].value


def _parse_equipment(node: NodeList) -> tuple[BoardSpec, tuple[int, ...]]:
    if len(node.children) != 2 or not isinstance(node.children[1], Braced):
        raise UnsupportedLudeme("equipment", "expected (equipment { ... })")
    board = None
    components = None
    for item in node.children[1].children:
        head = _head_name(item)
        if head == "SudokuBoard":
            board = BoardSpec.sudoku(_expect_int(item, 1, "SudokuBoard"))
        elif head == "board":
            # accept both (board n) and (board square n)
            if len(item.children) == 3 and item.children[1] == Atom("square"):
                board = BoardSpec.square(_expect_int(item, 2, "board"))
            else:
                board = BoardSpec.square(_expect_int(item, 1, "board"))
        elif head == "number":
            if len(item.children) != 3 or not isinstance(item.children[2], Braced):
                raise UnsupportedLudeme("number", "expected (number P1 {values})")
            values = _int_list(item.children[2], "number")
            # 0 is allowed and means "leave the cell empty" (used by nonograms).
            if not values or any(v < 0 for v in values):
                raise UnsupportedLudeme("number", "component values must be non-negative")
            if len(set(values)) != len(values):
                raise UnsupportedLudeme("number", "duplicate component values")
            components = values
        else:
            raise UnsupportedLudeme(head)
    if board is None:
        raise UnsupportedLudeme("equipment", "missing board")
    if components is None:
        raise UnsupportedLudeme("equipment", "missing component values")
    return board, components


def _int_list(node: Braced, what: str) -> tuple[int, ...]:
    values = []
    for child in node.children:
        if not isinstance(child, Number):
            raise UnsupportedLudeme(what, f"expected integers, got {format_node(child)}")
        values.append(child.value)
    return tuple(values)


def _parse_rules(node: NodeList, board: BoardSpec, components):
    placements: tuple[Placement, ...] = ()
    play_values: tuple[int, ...] = ()
    conditions: tuple[ConstraintLudeme, ...] | None = None
    for item in node.children[1:]:
        head = _head_name(item)
        if head == "start":
            placements = _parse_start(item, board, components)
        elif head == "play":
            play_values = _parse_play(item)
        elif head in ("if", "end"):
            conditions = _parse_end(item, board)
        else:
            raise UnsupportedLudeme(head)
    if conditions is None:
        raise UnsupportedLudeme("rules", "missing end rules")
    return placements, play_values, conditions


def _parse_start(node: NodeList, board: BoardSpec, components) -> tuple[Placement, ...]:
    if len(node.children) != 2 or not isinstance(node.children[1], Braced):
        raise UnsupportedLudeme("start", "expected (start { ... })")
    placements: list[Placement] = []
    seen: set[int] = set()
    for item in node.children[1].children:
        if _head_name(item) != "place":
            raise UnsupportedLudeme(_head_name(item))
        if (
            len(item.children) != 3
            or not isinstance(item.children[1], Braced)
            or not isinstance(item.children[2], Braced)
        ):
            raise UnsupportedLudeme("place", "expected (place {values} {sites})")
        values = _int_list(item.children[1], "place")
        sites = _int_list(item.children[2], "place")
        if len(values) != len(sites):
            raise UnsupportedLudeme("place", "values and sites differ in length")
        for value, site in zip(values, sites):
            if not 0 <= site < board.cell_count:
                raise BadRegion(f"placement site {site} out of range")
            if value not in components:
                raise UnsupportedLudeme("place", f"value {value} is not a component")
            if site in seen:
                raise DuplicatePlacement(site)
            seen.add(site)
            placements.append(Placement(value=value, cell=site))
    return tuple(placements)


def _parse_play(node: NodeList) -> tuple[int, ...]:
    # (play (to {values} (empty)))
    if len(node.children) != 2 or _head_name(node.children[1]) != "to":
        raise UnsupportedLudeme("play", "expected (play (to {values} (empty)))")
    to = node.children[1]
    if len(to.children) != 3 or not isinstance(to.children[1], Braced):
        raise UnsupportedLudeme("to", "expected (to {values} (empty))")
    if _head_name(to.children[2]) != "empty":
        raise UnsupportedLudeme(_head_name(to.children[2]))
    return _int_list(to.children[1], "to")


_COUNT_EMPTY_ZERO = NodeList(
    (
        Atom("equal"),
        NodeList((Atom("count"), NodeList((Atom("empty"),)))),
        Number(0),
    )
)


def _parse_end(node: NodeList, board: BoardSpec) -> tuple[ConstraintLudeme, ...]:
    # Outer wrapper (if (equal (count (empty)) 0) (end ...)) is structural; strip it.
    if _head_name(node) == "if":
        if len(node.children) < 3 or node.children[1] != _COUNT_EMPTY_ZERO:
            raise UnsupportedLudeme("if", "expected (if (equal (count (empty)) 0) (end ...))")
        node = node.children[2]
    if _head_name(node) != "end":
        raise UnsupportedLudeme(_head_name(node), "expected (end ...)")
    if len(node.children) != 2 or _head_name(node.children[1]) != "if":
        raise UnsupportedLudeme("end", "expected (end (if ...))")
    inner = node.children[1]
    if len(inner.children) < 3:
        raise UnsupportedLudeme("if", "expected a condition and a Win result")
    condition = inner.children[1]
    for result in inner.children[2:]:
        if _head_name(result) != "result":
            raise UnsupportedLudeme(_head_name(result))
    if _head_name(condition) == "and":
        if len(condition.children) != 2 or not isinstance(condition.children[1], Braced):
            raise UnsupportedLudeme("and", "expected (and { ... })")
        forms = condition.children[1].children
    else:
        forms = (condition,)
    return tuple(_parse_condition(form, board) for form in forms)


def _parse_condition(node: LudemeNode, board: BoardSpec) -> ConstraintLudeme:
    head = _head_name(node)
    if head == "allDifferent":
        if len(node.children) != 2:
            raise UnsupportedLudeme("allDifferent", "expected one region")
        return AllDifferent(region=_parse_region(node.children[1], board))
    if head == "sum":
        return _parse_sum(node, board)
    if head == "lessThan":
        if len(node.children) != 3:
            raise UnsupportedLudeme("lessThan", "expected two cell indices")
        a = _expect_int(node, 1, "lessThan")
        b = _expect_int(node, 2, "lessThan")
        for cell in (a, b):
            if not 0 <= cell < board.cell_count:
                raise BadRegion(f"cell {cell} out of range")
        return LessThan(a=a, b=b)
    if head == "clue":
        if len(node.children) != 3 or not isinstance(node.children[2], Braced):
            raise UnsupportedLudeme("clue", "expected (clue REGION {runs})")
        region = _parse_region(node.children[1], board)
        runs = _int_list(node.children[2], "clue")
        if any(r <= 0 for r in runs):
            raise UnsupportedLudeme("clue", "run lengths must be positive")
        length = len(region_cells(board, region))
        if sum(runs) + len(runs) - 1 > length:
            raise BadRegion(f"clue runs {list(runs)} do not fit a line of {length} cells")
        return ClueRun(region=region, runs=runs)
    raise UnsupportedLudeme(head)


def _parse_sum(node: NodeList, board: BoardSpec) -> SumEquals:
    # (sum REGION TARGET) or (sum REGION le|ge TARGET); target `common` means
    # the magic constant n(n^2+1)/2 of the board, resolved here.
    if len(node.children) == 3:
        op, target_node = "eq", node.children[2]
    elif len(node.children) == 4 and isinstance(node.children[2], Atom):
        op = node.children[2].text
        if op not in _SUM_OPS:
            raise UnsupportedLudeme("sum", f"unknown comparator {op}")
        target_node = node.children[3]
    else:
        raise UnsupportedLudeme("sum", "expected (sum REGION [le|ge] TARGET)")
    region = _parse_region(node.children[1], board)
    if target_node == Atom("common"):
        n = board.rows
        target = n * (n * n + 1) // 2
    elif isinstance(target_node, Number):
        target = target_node.value
    else:
        raise UnsupportedLudeme("sum", "target must be an integer or `common`")
    region_cells(board, region)  # range validation
    return SumEquals(region=region, target=target, op=op)


def _parse_region(node: LudemeNode, board: BoardSpec) -> RegionRef:
    head = _head_name(node)
    if head == "Row":
        region: RegionRef = Row(_expect_int(node, 1, "Row"))
    elif head == "Column":
        region = Column(_expect_int(node, 1, "Column"))
    elif head == "Diagonal":
        if len(node.children) == 1:
            region = Diagonal(anti=False)
        elif node.children[1] in (Atom("main"), Atom("anti")):
            region = Diagonal(anti=node.children[1] == Atom("anti"))
        else:
            raise UnsupportedLudeme("Diagonal", "expected main or anti")
    elif head == "set":
        if len(node.children) != 2 or not isinstance(node.children[1], Braced):
            raise UnsupportedLudeme("set", "expected (set {cells})")
        region = CellSet(cells=_int_list(node.children[1], "set"))
    else:
        raise UnsupportedLudeme(head)
    region_cells(board, region)  # range validation
    return region


# ---------------------------------------------------------------------------
# Game printing


def format_game(spec: GameSpec) -> str:
    """Render a GameSpec as canonical `.lud` text; parse_game inverts this."""
    out = [f'(game "{spec.name}"']
    out.append(f" (mode {spec.players})")
    out.append(" (equipment {")
    out.append(f"  {_format_board(spec.board)}")
    out.append("  (number P1 {" + _ints(spec.components) + "})")
    out.append(" })")
    out.append(" (rules")
    if spec.placements:
        out.append("  (start {")
        out.append("   (place")
        out.append("    {" + _ints(p.value for p in spec.placements) + "}")
        out.append("    {" + _ints(p.cell for p in spec.placements) + "}")
        out.append("   )")
        out.append("  })")
    else:
        out.append("  (start {})")
    out.append("  (play (to {" + _ints(spec.play_values) + "} (empty)))")
    out.append("  (if (equal (count (empty)) 0)")
    out.append("   (end")
    out.append("    (if (and {")
    for condition in spec.end_conditions:
        out.append(f"     {_format_condition(condition)}")
    out.append("     })")
    out.append("     (result 1 Win)")
    out.append("     (result 1 Loss)")
    out.append("    )")
    out.append("   )")
    out.append("  )")
    out.append(" )")
    out.append(")")
    return "\n".join(out) + "\n"


def _ints(values) -> str:
    return " ".join(str(v) for v in values)


def _format_board(board: BoardSpec) -> str:
    if board.box_side is not None:
        return f"(SudokuBoard {board.box_side})"
    return f"(board {board.rows})"


def _format_region(region: RegionRef) -> str:
    if isinstance(region, Row):
        return f"(Row {region.index})"
    if isinstance(region, Column):
        return f"(Column {region.index})"
    if isinstance(region, Diagonal):
        return "(Diagonal anti)" if region.anti else "(Diagonal main)"
    return "(set {" + _ints(region.cells) + "})"


def _format_condition(condition: ConstraintLudeme) -> str:
    if isinstance(condition, AllDifferent):
        return f"(allDifferent {_format_region(condition.region)})"
    if isinstance(condition, SumEquals):
        if condition.op == "eq":
            return f"(sum {_format_region(condition.region)} {condition.target})"
        return f"(sum {_format_region(condition.region)} {condition.op} {condition.target})"
    if isinstance(condition, LessThan):
        return f"(lessThan {condition.a} {condition.b})"
    return f"(clue {_format_region(condition.region)} {{{_ints(condition.runs)}}})"
