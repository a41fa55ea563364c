"""Exact row spaces over Q for sparse vectors (dicts key -> Fraction)."""
from fractions import Fraction


class RowSpace:
    """Incrementally built subspace in echelon form.

    Each stored row is monic at its pivot, the largest key under ``order``.
    """

    def __init__(self, order=None):
        self.order = order
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        vec = {k: v for k, v in vec.items() if v}
        rows = self.rows
        while True:
            hits = [k for k in vec if k in rows]
            if not hits:
                return vec
            k = max(hits, key=self.order)
            c = vec[k]
            for key, v in rows[k].items():
                w = vec.get(key, 0) - c * v
                if w:
                    vec[key] = w
                else:
                    vec.pop(key, None)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; returns True when the dimension grew."""
        vec = self.reduce(vec)
        if not vec:
            return False
        pivot = max(vec, key=self.order)
        inv = Fraction(1) / vec[pivot]
        self.rows[pivot] = {k: v * inv for k, v in vec.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        return [self.rows[k] for k in sorted(self.rows, key=self.order)]
