"""Tests for the puzzle generators and bundled catalog files."""

from __future__ import annotations

from itertools import permutations

import pytest

from puzzlebridge.catalog import (
    BUNDLED_ROWS,
    CATALOG_ENV_VAR,
    CATALOG_ROWS,
    CatalogError,
    DEFAULT_INEQUALITIES,
    Family,
    FamilyDescriptor,
    InfeasibleParams,
    SUDOKU_4X4_DESCRIPTOR,
    bundled_descriptor,
    bundled_sizes,
    catalog_dir,
    expected_counts,
    instance_path,
    load_bundled,
    make_instance,
    verify_instance,
)
from puzzlebridge.csp import solve
from puzzlebridge.ludeme import GameSpec, LessThan, format_game, parse_game
from puzzlebridge.translate import compile_game, moves_from_solution, replay, WIN

from samples import SUDOKU_4X4_LUD


@pytest.fixture(scope="module")
def bundled_specs():
    return {
        (family, size): make_instance(bundled_descriptor(family, size))
        for family, size in BUNDLED_ROWS
    }


# ---------------------------------------------------------------------------
# Count-table invariant and bundled files


def test_counts_match_table_for_all_rows(bundled_specs):
    for (family, size), spec in bundled_specs.items():
        instance = compile_game(spec)
        non_hint = sum(
            1 for c in instance.constraints if type(c).__name__ != "Instantiation"
        )
        got = (len(instance.variables), len(instance.variables[0].domain), non_hint)
        assert got == expected_counts(family, size), (family, size)


def test_bundled_files_match_generators(bundled_specs, monkeypatch):
    monkeypatch.delenv(CATALOG_ENV_VAR, raising=False)
    for (family, size), spec in bundled_specs.items():
        path = instance_path(family, size)
        assert path.is_file(), f"missing catalog file {path}"
        assert path.read_text(encoding="utf-8") == format_game(spec), path.name
        assert load_bundled(family, size) == spec


def test_specs_self_parse(bundled_specs):
    for spec in bundled_specs.values():
        assert parse_game(format_game(spec)) == spec


def test_sudoku4_descriptor_reproduces_the_worked_example():
    assert make_instance(SUDOKU_4X4_DESCRIPTOR) == parse_game(SUDOKU_4X4_LUD)


def test_bundled_rows_cover_the_results_grid():
    assert len(CATALOG_ROWS) == 19
    assert BUNDLED_ROWS == CATALOG_ROWS + ((Family.SUDOKU, 4),)
    assert bundled_sizes(Family.SUDOKU) == (4, 9, 16, 25)
    assert bundled_sizes(Family.NQUEENS) == (4, 8)
    assert bundled_sizes(Family.NONOGRAM) == (5, 10, 20, 32)


# ---------------------------------------------------------------------------
# Generation semantics


def test_seeded_determinism_and_seed_sensitivity():
    a = make_instance(FamilyDescriptor(Family.SUDOKU, 9, seed=11))
    b = make_instance(FamilyDescriptor(Family.SUDOKU, 9, seed=11))
    c = make_instance(FamilyDescriptor(Family.SUDOKU, 9, seed=12))
    assert a == b
    assert a.placements != c.placements


def test_hinted_instances_are_unique():
    for family, size in [
        (Family.SUDOKU, 9),
        (Family.LATIN_SQUARE, 5),
        (Family.MAGIC_SQUARE, 5),
        (Family.FUTOSHIKI, 5),
        (Family.NONOGRAM, 10),
    ]:
        report = verify_instance(bundled_descriptor(family, size))
        assert (report.solution_count, report.unique) == (1, True), (family, size)


def test_generated_hints_replay_to_win():
    spec = make_instance(FamilyDescriptor(Family.LATIN_SQUARE, 5, seed=3))
    report = solve(compile_game(spec), mode="first")
    moves = moves_from_solution(spec, report.solutions[0].values)
    assert replay(spec, moves.moves) == WIN


def test_nqueens_multi_solution_and_counts():
    report = verify_instance(FamilyDescriptor(Family.NQUEENS, 4))
    assert report.solution_count == 2
    assert not report.unique

    # Full counts against a brute-force permutation oracle.
    def oracle(n):
        total = 0
        for perm in permutations(range(n)):
            if all(
                abs(perm[i] - perm[j]) != j - i
                for i in range(n)
                for j in range(i + 1, n)
            ):
                total += 1
        return total

    for n in (4, 8):
        instance = compile_game(make_instance(FamilyDescriptor(Family.NQUEENS, n)))
        assert solve(instance, mode="count").count == oracle(n)


def test_nqueens_side_one_has_single_solution():
    report = verify_instance(FamilyDescriptor(Family.NQUEENS, 1))
    assert (report.solution_count, report.unique) == (1, True)
    assert report.first.values == (1,)


def test_contradictory_hints_verify_to_zero():
    desc = FamilyDescriptor(Family.SUDOKU, 4, hints=((0, 4), (1, 4)))
    assert verify_instance(desc).solution_count == 0


def test_latin_without_hints_counts_all_squares():
    desc = FamilyDescriptor(Family.LATIN_SQUARE, 4, hints=())
    assert verify_instance(desc).solution_count == 2
    instance = compile_game(make_instance(desc))
    assert solve(instance, mode="count").count == 576


def test_magic_doubly_even_side_generates():
    report = verify_instance(FamilyDescriptor(Family.MAGIC_SQUARE, 4))
    assert (report.solution_count, report.unique) == (1, True)


def test_futoshiki_inequalities_are_adjacent_and_counted(bundled_specs):
    for size in (4, 5, 6, 9):
        spec = bundled_specs[(Family.FUTOSHIKI, size)]
        pairs = [c for c in spec.end_conditions if isinstance(c, LessThan)]
        assert len(pairs) == DEFAULT_INEQUALITIES[size]
        for lt in pairs:
            lo, hi = sorted((lt.a, lt.b))
            assert hi - lo in (1, size)
            if hi - lo == 1:
                assert lo // size == hi // size  # same row


def test_explicit_futoshiki_lists_respected():
    desc = FamilyDescriptor(
        Family.FUTOSHIKI,
        4,
        inequalities=((0, 1), (5, 1)),
        hints=((0, 1),),
    )
    spec = make_instance(desc)
    assert sum(isinstance(c, LessThan) for c in spec.end_conditions) == 2
    assert spec.placements[0].cell == 0


def test_explicit_nonogram_clues_respected():
    desc = FamilyDescriptor(
        Family.NONOGRAM,
        3,
        row_clues=((1, 1), (1,), (3,)),
        column_clues=((1, 1), (2,), (1, 1)),
    )
    report = verify_instance(desc)
    assert (report.solution_count, report.unique) == (1, True)
    assert report.first.values == (1, 0, 1, 0, 1, 0, 1, 1, 1)


# ---------------------------------------------------------------------------
# Parameter validation


@pytest.mark.parametrize(
    "desc",
    [
        FamilyDescriptor(Family.SUDOKU, 3),
        FamilyDescriptor(Family.SUDOKU, 0),
        FamilyDescriptor(Family.SUDOKU, 9, box_side=2),
        FamilyDescriptor(Family.MAGIC_SQUARE, 2),
        FamilyDescriptor(Family.MAGIC_SQUARE, 6),
        FamilyDescriptor(Family.FUTOSHIKI, 1),
        FamilyDescriptor(Family.NONOGRAM, 1),
        FamilyDescriptor(Family.LATIN_SQUARE, -2),
        FamilyDescriptor(Family.SUDOKU, 4, hints=((99, 1),)),
        FamilyDescriptor(Family.SUDOKU, 4, hints=((0, 9),)),
        FamilyDescriptor(Family.SUDOKU, 4, hints=((0, 1), (0, 2))),
        FamilyDescriptor(Family.FUTOSHIKI, 4, inequalities=((0, 0),)),
        FamilyDescriptor(Family.FUTOSHIKI, 4, inequalities=((0, 1), (0, 1))),
        FamilyDescriptor(Family.FUTOSHIKI, 4, inequalities=((0, 99),)),
        FamilyDescriptor(Family.NONOGRAM, 3, row_clues=((1,),), column_clues=((1,), (1,), (1,))),
        FamilyDescriptor(
            Family.NONOGRAM,
            3,
            row_clues=((4,), (1,), (1,)),
            column_clues=((1,), (1,), (1,)),
        ),
        FamilyDescriptor(
            Family.NONOGRAM,
            3,
            row_clues=((0,), (1,), (1,)),
            column_clues=((1,), (1,), (1,)),
        ),
    ],
)
def test_infeasible_params(desc):
    with pytest.raises(InfeasibleParams):
        make_instance(desc)


def test_bundled_descriptor_rejects_unknown_rows():
    with pytest.raises(InfeasibleParams):
        bundled_descriptor(Family.SUDOKU, 36)


def test_catalog_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv(CATALOG_ENV_VAR, str(tmp_path))
    assert catalog_dir() == tmp_path
    assert instance_path(Family.SUDOKU, 4) == tmp_path / "sudoku-4.lud"
    with pytest.raises(CatalogError):
        load_bundled(Family.SUDOKU, 4)
    (tmp_path / "sudoku-4.lud").write_text(SUDOKU_4X4_LUD, encoding="utf-8")
    assert isinstance(load_bundled(Family.SUDOKU, 4), GameSpec)
