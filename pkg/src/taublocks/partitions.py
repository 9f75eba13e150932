"""Young-diagram combinatorics: partitions, conjugates, hooks, contents,
containment, and skew cells.

A partition is a plain tuple of weakly decreasing positive ints; () is the
empty partition.  Cells are 1-based (i, j) pairs with 1 <= i <= len(parts)
and 1 <= j <= parts[i-1].  The cell content is i - j (row minus column);
this sign convention is used consistently by every combinatorial factor in
the package and is the opposite of much of the symmetric-function
literature, so beware when comparing against other sources.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

Partition = Tuple[int, ...]
Cell = Tuple[int, int]


class InvalidPartition(ValueError):
    pass


class ContainmentViolation(ValueError):
    pass


def validate(parts: Partition) -> Partition:
    """Check weak decrease and positivity; return the tuple unchanged."""
    for i, p in enumerate(parts):
        if p < 1:
            raise InvalidPartition(f"part {p} at index {i} is not positive")
        if i > 0 and parts[i - 1] < p:
            raise InvalidPartition(f"parts not weakly decreasing at index {i}")
    return tuple(parts)


def size(parts: Partition) -> int:
    return sum(parts)


def conjugate(parts: Partition) -> Partition:
    if not parts:
        return ()
    cols = [0] * parts[0]
    for p in parts:
        for j in range(p):
            cols[j] += 1
    return tuple(cols)


def cells(parts: Partition) -> List[Cell]:
    return [(i, j) for i, p in enumerate(parts, 1) for j in range(1, p + 1)]


def part_at(parts: Partition, i: int) -> int:
    """parts[i] with 1-based i, zero beyond the last row."""
    return parts[i - 1] if 1 <= i <= len(parts) else 0


def hook_length(parts: Partition, conj: Partition, i: int, j: int) -> int:
    return parts[i - 1] + conj[j - 1] - i - j + 1


@dataclass(frozen=True)
class PartitionData:
    partition: Partition
    conjugate: Partition
    cells: Tuple[Cell, ...]
    hooks: Dict[Cell, int]
    contents: Dict[Cell, int]


def partition_data(parts: Partition) -> PartitionData:
    """Conjugate, cell list, hook lengths and contents of a partition."""
    parts = validate(parts)
    conj = conjugate(parts)
    cs = tuple(cells(parts))
    hooks = {(i, j): hook_length(parts, conj, i, j) for (i, j) in cs}
    contents = {(i, j): i - j for (i, j) in cs}
    return PartitionData(parts, conj, cs, hooks, contents)


def enumerate_partitions(n: int, max_part: int | None = None) -> List[Partition]:
    """All partitions of n in lexicographically decreasing order.

    The order is canonical for the whole package: cached block coefficients,
    Gram-matrix rows and parallel reductions all rely on it.
    """
    if n < 0:
        raise InvalidPartition("cannot partition a negative integer")
    return list(_gen(n, n if max_part is None else max_part))


def _gen(n: int, max_part: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _gen(n - first, first):
            yield (first,) + rest


def partitions_upto(m: int) -> List[Partition]:
    """Partitions of 0, 1, ..., m concatenated, each block in canonical order."""
    out: List[Partition] = []
    for k in range(m + 1):
        out.extend(enumerate_partitions(k))
    return out


def partition_count(n: int) -> int:
    return len(enumerate_partitions(n))


def skew_contains(lam: Partition, nu: Partition) -> bool:
    """True iff nu fits inside lam row by row."""
    return all(part_at(lam, i) >= p for i, p in enumerate(nu, 1))


def skew_cells(lam: Partition, nu: Partition) -> List[Cell]:
    """Cells of lam not in nu; raises if nu is not contained in lam."""
    if not skew_contains(lam, nu):
        raise ContainmentViolation(f"{nu} is not contained in {lam}")
    return [(i, j) for i, p in enumerate(lam, 1)
            for j in range(part_at(nu, i) + 1, p + 1)]


def to_json(parts: Partition) -> List[int]:
    return list(parts)


def from_json(data: List[int]) -> Partition:
    return validate(tuple(int(x) for x in data))
