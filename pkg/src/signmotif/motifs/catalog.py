"""The nine signed predictors: 3-node wedges and 4-node paths around a target link.

A triad predictor is a common neighbour ``M`` of the target ``(A, B)``; its
context is the unordered pair of signs on ``(A, M)`` and ``(B, M)``. A quad
predictor is a link ``(C, D)`` closing the path ``A-C-D-B``; its context is
the sign sequence ``(A,C), (C,D), (D,B)`` taken up to reversal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TRIAD = "triad"
QUAD = "quad"


def _sym(s: int) -> str:
    return "+" if s > 0 else "-"


@dataclass(frozen=True, order=True)
class PredictorId:
    index: int
    kind: str
    pattern: tuple[int, ...]

    @property
    def label(self) -> str:
        return ("T" if self.kind == TRIAD else "Q") + "".join(map(_sym, self.pattern))

    @property
    def is_triad(self) -> bool:
        return self.kind == TRIAD

    def __str__(self) -> str:
        return self.label


_TRIAD_PATTERNS = [(1, 1), (1, -1), (-1, -1)]
_QUAD_PATTERNS = [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, -1)]

CATALOG: tuple[PredictorId, ...] = tuple(
    [PredictorId(i, TRIAD, p) for i, p in enumerate(_TRIAD_PATTERNS)]
    + [PredictorId(3 + i, QUAD, p) for i, p in enumerate(_QUAD_PATTERNS)]
)
N_PREDICTORS = len(CATALOG)

# 3-bit code (bit set = negative, first sign most significant) -> catalog index
QUAD_CODE_TO_INDEX = np.array([3, 4, 5, 6, 4, 7, 6, 8], dtype=np.int64)

# Conventional numbering S1..S9; rows pair each wedge with the quads sharing its leading signs.
DEFAULT_S_INDEX = {
    "S1": "T++", "S2": "Q+++", "S3": "Q++-",
    "S4": "T+-", "S5": "Q+-+", "S6": "Q+--",
    "S7": "T--", "S8": "Q-+-", "S9": "Q---",
}


def catalog() -> list[PredictorId]:
    return list(CATALOG)


def triad_index(s1: int, s2: int) -> int:
    """Catalog index of the wedge with context signs ``s1, s2`` (order-free)."""
    return (s1 < 0) + (s2 < 0)


def quad_index(s1: int, s2: int, s3: int) -> int:
    """Catalog index of the path with signs ``s1, s2, s3`` (reversal-free)."""
    return int(QUAD_CODE_TO_INDEX[(s1 < 0) * 4 + (s2 < 0) * 2 + (s3 < 0)])


def canonical_quad(pattern: tuple[int, int, int]) -> tuple[int, int, int]:
    rev = pattern[::-1]
    # '+' sorts before '-'
    return min(pattern, rev, key=lambda p: [s < 0 for s in p])


def get_predictor(name: str, s_index: dict[str, str] | None = None) -> PredictorId:
    """Look up a predictor by canonical label (``T+-``, ``Q-+-``) or S-index name."""
    key = name.strip().replace("−", "-")
    mapping = DEFAULT_S_INDEX if s_index is None else s_index
    if key.upper() in mapping:
        key = mapping[key.upper()]
    for p in CATALOG:
        if p.label == key:
            return p
    valid = [p.label for p in CATALOG] + sorted(mapping)
    raise KeyError(f"unknown predictor {name!r}; valid: {', '.join(valid)}")


def s_name(predictor: PredictorId, s_index: dict[str, str] | None = None) -> str:
    mapping = DEFAULT_S_INDEX if s_index is None else s_index
    for s, label in mapping.items():
        if label == predictor.label:
            return s
    return ""
