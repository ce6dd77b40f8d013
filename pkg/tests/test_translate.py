"""Tests for GameSpec -> CspInstance compilation and the move mapping."""

from __future__ import annotations

import pytest

from puzzlebridge.csp import (
    AllDifferent as CspAllDifferent,
    BinaryLess,
    Instantiation,
    Solution,
    SumCompare,
    Table,
    solve,
)
from puzzlebridge.ludeme import parse_game
from puzzlebridge.translate import (
    LOSS,
    WIN,
    IllegalMove,
    InconsistentHint,
    Move,
    MoveList,
    TranslateError,
    UnsupportedCondition,
    compile_game,
    moves_from_solution,
    replay,
)

from samples import (
    NONOGRAM_LUD,
    NONOGRAM_SOLUTION,
    SUDOKU_4X4_HINTS,
    SUDOKU_4X4_LUD,
    SUDOKU_4X4_MOVES,
    SUDOKU_4X4_SOLUTION,
)


@pytest.fixture(scope="module")
def sudoku_spec():
    return parse_game(SUDOKU_4X4_LUD)


@pytest.fixture(scope="module")
def sudoku_instance(sudoku_spec):
    return compile_game(sudoku_spec)


# ---------------------------------------------------------------------------
# compile_game


def test_compile_sudoku_shape(sudoku_instance):
    inst = sudoku_instance
    assert len(inst.variables) == 16
    assert inst.array_shape == (4, 4)
    assert all(v.domain == (1, 2, 3, 4) for v in inst.variables)
    assert inst.variables[0].name == "x[0][0]"
    assert inst.variables[7].name == "x[1][3]"
    assert inst.name == "Sudoku 4x4"


def test_compile_sudoku_hints_first(sudoku_instance):
    head = sudoku_instance.constraints[0]
    assert isinstance(head, Instantiation)
    assert head.label == "hints"
    assert head.vars == (1, 5, 7, 13, 15)
    assert head.values == (4, 1, 3, 3, 1)


def test_compile_sudoku_conditions_in_source_order(sudoku_instance):
    rest = sudoku_instance.constraints[1:]
    assert len(rest) == 12
    assert all(isinstance(c, CspAllDifferent) for c in rest)
    assert rest[0].vars == (0, 1, 2, 3)  # Row 0
    assert rest[4].vars == (0, 4, 8, 12)  # Column 0
    assert rest[8].vars == (0, 1, 4, 5)  # first box
    assert rest[11].vars == (10, 11, 14, 15)


def test_compile_is_deterministic(sudoku_spec):
    assert compile_game(sudoku_spec) == compile_game(sudoku_spec)


def test_compile_zero_admitting_domain():
    inst = compile_game(parse_game(NONOGRAM_LUD))
    assert all(v.domain == (0, 1) for v in inst.variables)
    assert len(inst.constraints) == 6
    assert all(isinstance(c, Table) for c in inst.constraints)  # clue lines lowered


def test_compile_sum_and_less():
    text = (
        '(game "T" (mode 1)'
        " (equipment { (board 3) (number P1 {1 2 3}) })"
        " (rules (start {})"
        " (play (to {1 2 3} (empty)))"
        " (end (if (and { (sum (Row 0) 6) (sum (Column 0) le 5) (lessThan 0 8) })"
        " (result 1 Win) (result 1 Loss))))"
        ")"
    )
    inst = compile_game(parse_game(text))
    assert inst.constraints == (
        SumCompare(vars=(0, 1, 2), op="eq", constant=6),
        SumCompare(vars=(0, 3, 6), op="le", constant=5),
        BinaryLess(x=0, y=8, strict=True),
    )


def test_compile_rejects_unknown_condition(sudoku_spec):
    class Bogus:
        pass

    spoofed = sudoku_spec.__class__(
        name=sudoku_spec.name,
        players=1,
        board=sudoku_spec.board,
        components=sudoku_spec.components,
        placements=sudoku_spec.placements,
        play_values=sudoku_spec.play_values,
        end_conditions=(Bogus(),),
    )
    with pytest.raises(UnsupportedCondition):
        compile_game(spoofed)


def test_compiled_sudoku_solves_to_expected_grid(sudoku_instance):
    report = solve(sudoku_instance, "all", limit=50)
    values = [s.values for s in report.solutions]
    assert SUDOKU_4X4_SOLUTION in values


# ---------------------------------------------------------------------------
# moves_from_solution


def test_moves_for_reference_solution(sudoku_spec):
    ml = moves_from_solution(sudoku_spec, Solution(SUDOKU_4X4_SOLUTION))
    assert [(m.cell, m.value) for m in ml] == SUDOKU_4X4_MOVES


def test_moves_ascending_and_disjoint_from_hints(sudoku_spec):
    ml = moves_from_solution(sudoku_spec, SUDOKU_4X4_SOLUTION)
    cells = [m.cell for m in ml]
    assert cells == sorted(cells)
    assert not set(cells) & set(SUDOKU_4X4_HINTS)


def test_move_count_accounting(sudoku_spec):
    # moves + placements + zero-valued cells cover the board exactly.
    ml = moves_from_solution(sudoku_spec, SUDOKU_4X4_SOLUTION)
    zeros = sum(1 for v in SUDOKU_4X4_SOLUTION if v == 0)
    assert len(ml) + len(sudoku_spec.placements) + zeros == sudoku_spec.board.cell_count


def test_moves_skip_zero_cells():
    spec = parse_game(NONOGRAM_LUD)
    ml = moves_from_solution(spec, NONOGRAM_SOLUTION)
    assert [(m.cell, m.value) for m in ml] == [(0, 1), (2, 1), (4, 1), (6, 1), (7, 1), (8, 1)]
    zeros = sum(1 for v in NONOGRAM_SOLUTION if v == 0)
    assert len(ml) + zeros == 9


def test_moves_reject_hint_disagreement(sudoku_spec):
    tampered = list(SUDOKU_4X4_SOLUTION)
    tampered[1] = 1  # hint says 4
    with pytest.raises(InconsistentHint) as err:
        moves_from_solution(sudoku_spec, tampered)
    assert err.value.cell == 1


def test_moves_reject_wrong_length(sudoku_spec):
    with pytest.raises(TranslateError):
        moves_from_solution(sudoku_spec, (1, 2, 3))


# ---------------------------------------------------------------------------
# replay


def test_replay_reference_moves_win(sudoku_spec):
    ml = moves_from_solution(sudoku_spec, SUDOKU_4X4_SOLUTION)
    assert replay(sudoku_spec, ml) == WIN


def test_replay_all_solver_solutions_win(sudoku_spec, sudoku_instance):
    report = solve(sudoku_instance, "all", limit=50)
    for sol in report.solutions:
        assert replay(sudoku_spec, moves_from_solution(sudoku_spec, sol)) == WIN


def test_replay_bad_value_loses(sudoku_spec):
    ml = moves_from_solution(sudoku_spec, SUDOKU_4X4_SOLUTION)
    swapped = MoveList((Move(0, 4),) + ml.moves[1:])  # duplicate 4 in row 0
    assert replay(sudoku_spec, swapped) == LOSS


def test_replay_incomplete_board_loses(sudoku_spec):
    assert replay(sudoku_spec, MoveList(())) == LOSS


def test_replay_nonogram_zero_fill():
    spec = parse_game(NONOGRAM_LUD)
    ml = moves_from_solution(spec, NONOGRAM_SOLUTION)
    assert replay(spec, ml) == WIN
    # dropping a move leaves a 0 where a 1 was needed: board "full", rules broken
    assert replay(spec, MoveList(ml.moves[1:])) == LOSS


def test_replay_rejects_occupied_cell(sudoku_spec):
    with pytest.raises(IllegalMove):
        replay(sudoku_spec, MoveList((Move(1, 2),)))  # cell 1 is hinted


def test_replay_rejects_duplicate_move_cell(sudoku_spec):
    with pytest.raises(IllegalMove):
        replay(sudoku_spec, MoveList((Move(0, 3), Move(0, 2))))


def test_replay_rejects_out_of_range(sudoku_spec):
    with pytest.raises(IllegalMove):
        replay(sudoku_spec, MoveList((Move(99, 1),)))
    with pytest.raises(IllegalMove):
        replay(sudoku_spec, MoveList((Move(0, 9),)))


# ---------------------------------------------------------------------------
# MoveList serialization


def test_movelist_text_round_trip(sudoku_spec):
    ml = moves_from_solution(sudoku_spec, SUDOKU_4X4_SOLUTION)
    text = ml.to_text()
    assert text.splitlines()[0] == "Add(0,3)"
    assert MoveList.from_text(text) == ml


def test_movelist_json_round_trip(sudoku_spec):
    ml = moves_from_solution(sudoku_spec, SUDOKU_4X4_SOLUTION)
    obj = ml.to_obj()
    assert obj[0] == {"cell": 0, "value": 3}
    assert MoveList.from_obj(obj) == ml


def test_movelist_from_text_rejects_garbage():
    with pytest.raises(IllegalMove):
        MoveList.from_text("Add(1,2)\nRemove(3)\n")


def test_move_str():
    assert str(Move(12, 4)) == "Add(12,4)"
    assert Move.kind == "Add"
