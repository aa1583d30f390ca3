"""Height values, surface types and the p-rank -> height dictionary."""

from __future__ import annotations

import math
from enum import Enum

INF = math.inf


class CaseType(str, Enum):
    ORDINARY = "ordinary"
    P_RANK_1 = "pRank1"
    SS_NOT_SUPERSPECIAL = "ssNotSuperspecial"
    SUPERSPECIAL = "superspecial"


def height_from_p_rank(r: int) -> float | int:
    """Height of the formal Brauer group of an abelian surface of p-rank r."""
    return {2: 1, 1: 2, 0: INF}[r]


def case_type(p_rank: int, a_number: int) -> CaseType:
    if p_rank == 2:
        return CaseType.ORDINARY
    if p_rank == 1:
        return CaseType.P_RANK_1
    return CaseType.SUPERSPECIAL if a_number == 2 else CaseType.SS_NOT_SUPERSPECIAL


def format_height(h) -> str:
    return "inf" if h == INF else str(int(h))


def parse_height(text: str):
    text = text.strip().lower()
    if text in ("inf", "infinity", "∞"):
        return INF
    return int(text)
