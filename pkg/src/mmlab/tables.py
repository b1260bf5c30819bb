"""Reference values for MM(6,4) and four pegs, used by ``mmlab verify``."""
from __future__ import annotations

from .core import Feedback

LEGAL_CLASSES_4 = (
    (0, 0), (0, 1), (0, 2), (0, 3), (0, 4),
    (1, 0), (1, 1), (1, 2), (1, 3),
    (2, 0), (2, 1), (2, 2),
    (3, 0),
    (4, 0),
)

_ROWS = [Feedback(*f) for f in LEGAL_CLASSES_4]

# Partition sizes of all 1296 codes for five openings, rows in LEGAL_CLASSES_4 order.
_COLUMNS = {
    "1111": (625, 0, 0, 0, 0, 500, 0, 0, 0, 150, 0, 0, 20, 1),
    "1112": (256, 308, 61, 0, 0, 317, 156, 27, 0, 123, 24, 3, 20, 1),
    "1122": (256, 256, 96, 16, 1, 256, 208, 36, 0, 114, 32, 4, 20, 1),
    "1123": (81, 276, 222, 44, 2, 182, 230, 84, 4, 105, 40, 5, 20, 1),
    "1234": (16, 152, 312, 136, 9, 108, 252, 132, 8, 96, 48, 6, 20, 1),
}

OPENING_PARTITIONS: dict[str, dict[Feedback, int]] = {
    opening: dict(zip(_ROWS, sizes)) for opening, sizes in _COLUMNS.items()
}

COLOR_TERMS_6_4 = {1: 6, 2: 210, 3: 720, 4: 360}
