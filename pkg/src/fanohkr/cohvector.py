"""Graded cohomology dimension vectors whose entries may be bounded unknowns."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import UnknownEntries


@dataclass(frozen=True)
class Unknown:
    """An undetermined dimension with bounds ``lo <= value <= hi``.

    ``hi`` is None when no finite upper bound could be certified.
    """

    lo: int
    hi: int | None
    var: str = ""

    def __post_init__(self):
        if self.lo < 0 or (self.hi is not None and self.hi < self.lo):
            raise ValueError(f"bad bounds [{self.lo}, {self.hi}]")

    def __str__(self):
        hi = "inf" if self.hi is None else self.hi
        return f"[{self.lo},{hi}]"


Entry = Union[int, Unknown]


def _bounds(e: Entry) -> tuple[int, int | None]:
    if isinstance(e, Unknown):
        return e.lo, e.hi
    return e, e


def make_entry(lo: int, hi: int | None, var: str = "") -> Entry:
    if hi is not None and lo == hi:
        return lo
    return Unknown(lo, hi, var)


class CohVector:
    """Dimensions h^0, ..., h^n of some sheaf, indexed by cohomological degree."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Entry]):
        ents = []
        for e in entries:
            if isinstance(e, Unknown):
                ents.append(make_entry(e.lo, e.hi, e.var))
            else:
                if int(e) != e or e < 0:
                    raise ValueError(f"cohomology dimension must be a nonnegative integer, got {e!r}")
                ents.append(int(e))
        self.entries = tuple(ents)

    @classmethod
    def zero(cls, length: int) -> CohVector:
        return cls([0] * length)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if isinstance(other, CohVector):
            return self.entries == other.entries
        if isinstance(other, (tuple, list)):
            return self.entries == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "CohVector(" + ", ".join(str(e) for e in self.entries) + ")"

    @property
    def is_known(self) -> bool:
        return all(isinstance(e, int) for e in self.entries)

    def values(self) -> tuple[int, ...]:
        if not self.is_known:
            raise UnknownEntries(f"{self!r} has undetermined entries")
        return self.entries

    def chi(self) -> int:
        return sum((-1) ** i * v for i, v in enumerate(self.values()))

    def bounds(self) -> list[tuple[int, int | None]]:
        return [_bounds(e) for e in self.entries]

    def padded(self, length: int) -> CohVector:
        if length < len(self):
            if any(e != 0 for e in self.entries[length:]):
                raise ValueError("cannot truncate nonzero entries")
            return CohVector(self.entries[:length])
        return CohVector(self.entries + (0,) * (length - len(self)))

    def __add__(self, other: CohVector) -> CohVector:
        n = max(len(self), len(other))
        a, b = self.padded(n), other.padded(n)
        out = []
        for x, y in zip(a, b):
            if isinstance(x, int) and isinstance(y, int):
                out.append(x + y)
            else:
                (l1, h1), (l2, h2) = _bounds(x), _bounds(y)
                hi = None if h1 is None or h2 is None else h1 + h2
                out.append(make_entry(l1 + l2, hi))
        return CohVector(out)

    def scaled(self, k: int) -> CohVector:
        return CohVector(
            [e * k if isinstance(e, int) else make_entry(e.lo * k, None if e.hi is None else e.hi * k) for e in self]
        )

    def shifted(self, s: int, length: int) -> CohVector:
        """Move entry i to i - s, dropping nothing (raises if nonzero falls off)."""
        out = [0] * length
        for i, e in enumerate(self.entries):
            j = i - s
            if 0 <= j < length:
                out[j] = e
            elif e != 0:
                raise ValueError("shift drops a nonzero entry")
        return CohVector(out)

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def cohvec(values: Sequence[int]) -> CohVector:
    return CohVector(values)
