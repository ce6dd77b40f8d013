"""Shared fixture texts for parser and translator tests."""

SUDOKU_4X4_LUD = """\
(game "Sudoku 4x4"
 (mode 1)

 (equipment {
  (SudokuBoard 2)
  (number P1 {1 2 3 4})
  })

 (rules
  (start {
   (place
    {4 1 3 3  1}
    {1 5 7 13 15}
   )
  })

 (play (to {1 2 3 4} (empty)))

  (if (equal (count (empty)) 0)
   (end
    (if (and {
     (allDifferent (Row 0))
     (allDifferent (Row 1))
     (allDifferent (Row 2))
     (allDifferent (Row 3))
     (allDifferent (Column 0))
     (allDifferent (Column 1))
     (allDifferent (Column 2))
     (allDifferent (Column 3))
     (allDifferent (set {0  1  4  5}))
     (allDifferent (set {2  3  6  7}))
     (allDifferent (set {8  9  12 13}))
     (allDifferent (set {10 11 14 15}))
     })
     (result 1 Win)
     (result 1 Loss)
    )
   )
  )
 )
)
"""

SUDOKU_4X4_HINTS = {1: 4, 5: 1, 7: 3, 13: 3, 15: 1}

SUDOKU_4X4_SOLUTION = (3, 4, 1, 2, 2, 1, 4, 3, 1, 2, 3, 4, 4, 3, 2, 1)

SUDOKU_4X4_MOVES = [
    (0, 3), (2, 1), (3, 2), (4, 2), (6, 4), (8, 1),
    (9, 2), (10, 3), (11, 4), (12, 4), (14, 2),
]


NONOGRAM_LUD = """\
(game "Nono 3x3"
 (mode 1)
 (equipment { (board 3) (number P1 {1}) })
 (rules
  (start {})
  (play (to {0 1} (empty)))
  (if (equal (count (empty)) 0)
   (end
    (if (and {
     (clue (Row 0) {1 1})
     (clue (Row 1) {1})
     (clue (Row 2) {3})
     (clue (Column 0) {1 1})
     (clue (Column 1) {2})
     (clue (Column 2) {1 1})
     })
     (result 1 Win)
     (result 1 Loss)
    )
   )
  )
 )
)
"""
# Unique picture for the clues above:
#   1 0 1
#   0 1 0
#   1 1 1
NONOGRAM_SOLUTION = (1, 0, 1, 0, 1, 0, 1, 1, 1)
