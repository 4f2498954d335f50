"""
Frobenius-semilinear maps between free modules.

A ``TwistedMap`` with twist r stores the matrix of a linear map
M -> N^{(p^r)}, with N^{(p^r)} written in the twisted basis.  V: D -> D^{(p)}
is the basic example.  To follow B by A, A is first base-changed along the
twist of B, which raises its entries to the p^{B.twist}-th power, so

    compose(A, B).matrix == frob^{B.twist}(A.matrix) @ B.matrix

and twists add.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg


@dataclass(frozen=True)
class TwistedMap:
    ring: object
    matrix: tuple  # tuple of row tuples
    twist: int = 0
    ncols: int | None = None  # only needed when there are no rows

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        if rows and self.ncols is not None and len(rows[0]) != self.ncols:
            raise ValueError("ncols disagrees with the matrix")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "ncols", len(rows[0]) if rows else (self.ncols or 0))

    @classmethod
    def from_rows(cls, ring, rows, twist: int = 0) -> "TwistedMap":
        return cls(ring, tuple(tuple(ring(x) if isinstance(x, int) else x for x in r) for r in rows), twist)

    @classmethod
    def identity(cls, ring, n: int, twist: int = 0) -> "TwistedMap":
        return cls(ring, linalg.identity(ring, n), twist)

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    @property
    def source_rank(self) -> int:
        return self.ncols

    @property
    def shape(self) -> tuple[int, int]:
        return self.target_rank, self.source_rank

    def rows(self) -> list[list]:
        return [list(r) for r in self.matrix]

    def rank(self) -> int:
        return linalg.rank(self.rows())

    def det(self):
        return linalg.det(self.rows(), self.ring)

    def __matmul__(self, other: "TwistedMap") -> "TwistedMap":
        return compose(self, other)

    def __str__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.matrix)
        return f"[{body}] (twist {self.twist})"


def frobenius_twist(A: TwistedMap) -> TwistedMap:
    """Entrywise Frobenius; the result is recorded with twist one higher."""
    return TwistedMap(A.ring, linalg.mat_frobenius(A.rows()), A.twist + 1, A.ncols)


def compose(A: TwistedMap, B: TwistedMap) -> TwistedMap:
    """A after B."""
    if B.target_rank != A.source_rank:
        raise ValueError(
            f"dimension mismatch: {A.shape} after {B.shape}"
        )
    twist = A.twist + B.twist
    if A.source_rank == 0:
        return TwistedMap(A.ring, linalg.zeros(A.ring, A.target_rank, B.source_rank), twist, B.source_rank)
    Am = linalg.mat_frobenius(A.rows(), B.twist)
    return TwistedMap(A.ring, linalg.mat_mul(Am, B.rows(), A.ring), twist, B.source_rank)
