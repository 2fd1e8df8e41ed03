"""Extraction outcomes: a tagged record of vertex sets plus exact numeric data.

Every extractor returns an :class:`Outcome`.  The ``sets`` field holds the
witness vertex sets (bitmasks in the input graph's labelling); ``margins``
holds the exact rationals the extractor compared; ``trace`` is a linear log
of the construction steps taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .graph import VertexSet, as_list

COMPLETE_PAIR = "complete_pair"
ANTICOMPLETE_PAIR = "anticomplete_pair"
INDUCED_COPY = "induced_copy"
STABLE_SET = "stable_set"
NEAR_PURE_PAIR = "near_pure_pair"
COLOURFUL_SUBGRAPH = "colourful_subgraph"
COVERING_BLOCKADE = "covering_blockade"
COLOURING = "colouring"
BROOM_PAIR = "broom_pair"
DECOMPOSITION = "decomposition"
PAIR_XY = "pair_xy"
ANTICOMPLETE_STABLE = "anticomplete_stable"
CLIQUE = "clique"
NOT_VIVID = "not_vivid"
VERTEX = "vertex"
SUBGRAPH = "subgraph"
TERMINAL_PARTITION = "terminal_partition"
COVER = "cover"
OK = "ok"
P5_WITNESS = "p5_witness"


class ExtractionError(RuntimeError):
    """An extractor's precondition failed or a proof step could not be carried out.

    ``witness`` carries whatever certificate explains the failure (for
    example an induced copy of the excluded graph).
    """

    def __init__(self, message: str, witness: dict | None = None, trace: list[str] | None = None):
        super().__init__(message)
        self.witness = witness or {}
        self.trace = trace or []


class NotHFree(ExtractionError):
    pass


@dataclass
class Outcome:
    kind: str
    sets: dict[str, VertexSet] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    margins: dict[str, Fraction] = field(default_factory=dict)
    degenerate: bool = False
    trace: list[str] = field(default_factory=list)

    def __getitem__(self, key: str) -> VertexSet:
        return self.sets[key]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "sets": {k: as_list(v) for k, v in sorted(self.sets.items())},
            "data": _jsonable(self.data),
            "margins": {k: fraction_str(v) for k, v in sorted(self.margins.items())},
            "degenerate": self.degenerate,
        }


def fraction_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str | int | float | Fraction) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, str):
        return Fraction(s.strip())
    return Fraction(s)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x
