"""Check results and budgeted enumeration shared by every checker."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

PASS = "pass"
FAIL = "fail"
PASS_ON_PATCH = "pass-on-patch"


@dataclass
class Verdict:
    """Outcome of one check.

    ``tuples`` counts the quantifier instances examined; ``exhaustive`` is
    False when a budget forced seeded sampling. A counterexample, when found,
    is a plain value in ``witness`` (JSON-serializable).
    """

    check: str
    status: str
    witness: Optional[dict] = None
    tuples: int = 0
    exhaustive: bool = True
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in (PASS, PASS_ON_PATCH)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "status": self.status,
            "witness": self.witness,
            "tuples": self.tuples,
            "exhaustive": self.exhaustive,
            "detail": self.detail,
        }

    def line(self) -> str:
        mode = "exhaustive" if self.exhaustive else "sampled"
        return f"{self.check}\t{self.status}\t{self.tuples}\t{mode}"


def budgeted_indices(total: int, budget: Optional[int], seed: int = 0) -> tuple[Iterator[int], bool]:
    """Indices 0..total-1, or a seeded uniform sample of ``budget`` of them.

    Returns the iterator and whether it is exhaustive. Sampled indices are
    sorted so the first counterexample found is reproducible.
    """
    if budget is None or total <= budget:
        return iter(range(total)), True
    rng = random.Random(seed)
    return iter(sorted(rng.sample(range(total), budget))), False


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_to_list(x: int) -> list[int]:
    return list(iter_bits(x))


def lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def list_to_bits(ids) -> int:
    b = 0
    for i in ids:
        b |= 1 << i
    return b
