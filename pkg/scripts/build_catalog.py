#!/usr/bin/env python3
"""Regenerate the bundled catalog/*.lud files from the programmatic generators.

Writes one file per bundled row (the results-grid sizes plus the worked 4x4
sudoku) and reports hint counts plus a capped solution-count probe for each.
With --check, compares the generators' output against the files on disk and
exits nonzero if any file is stale.
"""

from __future__ import annotations

import argparse
import sys
import time

from puzzlebridge.catalog import (
    BUNDLED_ROWS,
    bundled_descriptor,
    format_game,
    instance_path,
    make_instance,
    verify_instance,
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--families",
        help="comma-separated family names to rebuild (default: all)",
    )
    parser.add_argument(
        "--check",
        action="store_true",
        help="verify files on disk match the generators instead of writing",
    )
    args = parser.parse_args(argv)
    wanted = set(args.families.split(",")) if args.families else None

    stale = 0
    for family, size in BUNDLED_ROWS:
        if wanted is not None and family.value not in wanted:
            continue
        started = time.perf_counter()
        desc = bundled_descriptor(family, size)
        text = format_game(make_instance(desc))
        report = verify_instance(desc)
        path = instance_path(family, size)
        if args.check:
            on_disk = path.read_text(encoding="utf-8") if path.exists() else None
            status = "ok" if on_disk == text else "STALE"
            stale += status != "ok"
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            status = "written"
        elapsed = time.perf_counter() - started
        count = f"{report.solution_count}{'+' if report.solution_count >= 2 else ' '}"
        print(
            f"{family.value}-{size:<4} {status:8s} solutions={count} "
            f"unique={str(report.unique):5s} {elapsed:6.2f}s  {path}"
        )
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
