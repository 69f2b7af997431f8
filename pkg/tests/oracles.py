"""Brute-force reference implementations used as test oracles.

Kept deliberately naive: explicit suffix copies, quadratic scans.
"""


def naive_sa(t: bytes) -> list[int]:
    return sorted(range(len(t)), key=lambda i: t[i:])


def common_prefix(a: bytes, b: bytes) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def naive_lcp(t: bytes, sa) -> list[int]:
    sa = list(sa)
    return [0] + [common_prefix(t[sa[j - 1]:], t[sa[j]:]) for j in range(1, len(sa))]


def naive_range(t: bytes, sa, sym: int) -> list[int]:
    return [j for j, p in enumerate(sa) if t[p] == sym]


def naive_longest(t: bytes, pattern: bytes) -> int:
    """Longest prefix of ``pattern`` occurring in ``t`` (with its start inside ``t``)."""
    return max((common_prefix(t[i:], pattern) for i in range(len(t))), default=0)


def naive_lab_best(data: bytes, lab_start: int, dict_len: int, i: int, room: int) -> int:
    """Longest match for LAB offset ``i`` against the dictionary preceding ``lab_start``."""
    d = data[lab_start - dict_len:lab_start]
    return naive_longest(d, data[lab_start + i:lab_start + i + room])
