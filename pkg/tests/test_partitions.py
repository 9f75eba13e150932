from collections import Counter

import pytest

from taublocks.partitions import (ContainmentViolation, InvalidPartition,
                                  conjugate, enumerate_partitions, from_json,
                                  partition_count, partition_data,
                                  partitions_upto, skew_cells, skew_contains,
                                  to_json)


def test_partition_data_small():
    pd = partition_data((2, 1))
    assert pd.conjugate == (2, 1)
    assert pd.hooks == {(1, 1): 3, (1, 2): 1, (2, 1): 1}
    assert pd.contents == {(1, 1): 0, (1, 2): -1, (2, 1): 1}


def test_partition_data_larger_conjugate():
    assert partition_data((6, 4, 4, 3, 2, 1)).conjugate == (6, 5, 4, 3, 1, 1)


def test_partition_data_empty():
    pd = partition_data(())
    assert pd.conjugate == ()
    assert pd.hooks == {} and pd.contents == {}


def test_validate_rejects_bad_input():
    with pytest.raises(InvalidPartition):
        partition_data((1, 2))
    with pytest.raises(InvalidPartition):
        partition_data((2, 0))


def test_enumeration_order_and_counts():
    assert enumerate_partitions(0) == [()]
    assert enumerate_partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert partition_count(5) == 7


def test_pentagonal_recurrence():
    # independent count oracle: Euler's pentagonal-number recurrence
    counts = [partition_count(n) for n in range(31)]
    for n in range(1, 31):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = 1 if k % 2 == 1 else -1
            if g1 <= n:
                total += sign * counts[n - g1]
            if g2 <= n:
                total += sign * counts[n - g2]
            k += 1
        assert counts[n] == total


def test_hook_multiset_conjugation_and_cell_count():
    for n in range(11):
        for lam in enumerate_partitions(n):
            pd = partition_data(lam)
            assert len(pd.cells) == n
            assert Counter(pd.hooks.values()) == Counter(
                partition_data(pd.conjugate).hooks.values())


def test_skew_contains_and_cells():
    assert skew_contains((2, 1), (1,))
    assert skew_cells((2, 1), (1,)) == [(1, 2), (2, 1)]
    assert not skew_contains((1, 1), (2,))
    assert skew_cells((3, 2), (2, 2)) == [(1, 3)]
    with pytest.raises(ContainmentViolation):
        skew_cells((1, 1), (2,))


def test_content_multiset_nests_under_containment():
    for n in range(7):
        for lam in enumerate_partitions(n):
            lam_contents = Counter(partition_data(lam).contents.values())
            for m in range(n + 1):
                for nu in enumerate_partitions(m):
                    if skew_contains(lam, nu):
                        nu_contents = Counter(partition_data(nu).contents.values())
                        assert all(lam_contents[c] >= k for c, k in nu_contents.items())


def test_json_round_trip():
    assert to_json((6, 4, 4, 3, 2, 1)) == [6, 4, 4, 3, 2, 1]
    assert from_json([3, 1]) == (3, 1)


def test_partitions_upto():
    ps = partitions_upto(3)
    assert ps == [(), (1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)]
