"""Synthetic traffic patterns over host indices 0..N-1.

Bit-oriented patterns require a power-of-two host count; callers that want to
drive them on other sizes map onto the largest power-of-two host subset.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class PatternKind(Enum):
    UNIFORM_RANDOM = "uniform"
    BIT_COMPLEMENT = "complement"
    BIT_REVERSE = "reverse"
    TORNADO = "tornado"
    PERMUTATION = "permutation"


@dataclass(frozen=True)
class TrafficPattern:
    kind: PatternKind
    mapping: Optional[dict[int, int]] = None  # only for PERMUTATION

    @staticmethod
    def uniform() -> "TrafficPattern":
        return TrafficPattern(PatternKind.UNIFORM_RANDOM)

    @staticmethod
    def complement() -> "TrafficPattern":
        return TrafficPattern(PatternKind.BIT_COMPLEMENT)

    @staticmethod
    def reverse() -> "TrafficPattern":
        return TrafficPattern(PatternKind.BIT_REVERSE)

    @staticmethod
    def tornado() -> "TrafficPattern":
        return TrafficPattern(PatternKind.TORNADO)

    @staticmethod
    def permutation(mapping: dict[int, int]) -> "TrafficPattern":
        return TrafficPattern(PatternKind.PERMUTATION, dict(mapping))


PATTERNS_BY_NAME = {
    "uniform": TrafficPattern.uniform(),
    "complement": TrafficPattern.complement(),
    "reverse": TrafficPattern.reverse(),
    "tornado": TrafficPattern.tornado(),
}


def _require_power_of_two(n: int, pattern: str) -> int:
    bits = n.bit_length() - 1
    if n < 2 or (1 << bits) != n:
        raise ValueError(f"{pattern} traffic needs a power-of-two host count, got {n}")
    return bits


def pattern_destination(
    pattern: TrafficPattern,
    src: int,
    n: int,
    bits: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Optional[int]:
    """Destination host index for ``src`` under ``pattern``.

    Bit complement/reverse operate on ``bits``-wide addresses (derived from
    ``n`` when omitted). Deterministic patterns may map a host to itself
    (e.g. palindromic addresses under bit reverse); callers treat that as
    "host does not send". Returns None for hosts outside a permutation map.
    """
    if n < 2:
        raise ValueError("need at least two hosts")
    if not 0 <= src < n:
        raise ValueError(f"src {src} out of range [0, {n})")
    kind = pattern.kind
    if kind is PatternKind.UNIFORM_RANDOM:
        if rng is None:
            raise ValueError("uniform random pattern needs an rng")
        dst = rng.randrange(n - 1)
        return dst + 1 if dst >= src else dst
    if kind is PatternKind.TORNADO:
        return (src + (n - 1) // 2) % n
    if kind is PatternKind.BIT_COMPLEMENT:
        if bits is None:
            bits = _require_power_of_two(n, "bit complement")
        return (~src) & ((1 << bits) - 1)
    if kind is PatternKind.BIT_REVERSE:
        if bits is None:
            bits = _require_power_of_two(n, "bit reverse")
        out = 0
        for i in range(bits):
            if src >> i & 1:
                out |= 1 << (bits - 1 - i)
        return out
    if kind is PatternKind.PERMUTATION:
        if pattern.mapping is None:
            raise ValueError("permutation pattern needs a mapping")
        return pattern.mapping.get(src)
    raise ValueError(f"unknown pattern {pattern}")
