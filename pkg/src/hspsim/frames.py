"""Weighted measurement frames: sum_b a_b |b><b| = I."""
from __future__ import annotations

import numpy as np


class Frame:
    """Unit vectors (columns) with positive weights resolving the identity."""

    def __init__(self, vectors, weights, check=True):
        self.vectors = np.ascontiguousarray(vectors, dtype=np.complex128)
        self.weights = np.ascontiguousarray(weights, dtype=float)
        if self.vectors.ndim != 2 or self.weights.shape != (self.vectors.shape[1],):
            raise ValueError("need (d, m) vectors and (m,) weights")
        if check:
            self._validate()

    @property
    def dim(self):
        return self.vectors.shape[0]

    @property
    def size(self):
        return self.vectors.shape[1]

    def _validate(self):
        norms = np.linalg.norm(self.vectors, axis=0)
        if np.abs(norms - 1.0).max() > 1e-12:
            raise ValueError("frame vectors must be unit norm")
        if (self.weights <= 0).any():
            raise ValueError("frame weights must be positive")
        S = np.einsum("im,m,jm->ij", self.vectors, self.weights,
                      self.vectors.conj())
        if np.abs(S - np.eye(self.dim)).max() > 1e-9:
            raise ValueError("frame does not resolve the identity")

    def __repr__(self):
        return f"<frame dim={self.dim} size={self.size}>"


def _haar_basis(d, rng):
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(A)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph.conj()


def random_frame(d, seed, kind="basis"):
    """Haar-random frame on C^d.

    kind='basis': one random orthonormal basis, unit weights.
    kind='fused': two stacked random bases, weights 1/2.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = np.random.default_rng(seed)
    if kind == "basis":
        return Frame(_haar_basis(d, rng), np.ones(d))
    if kind == "fused":
        B1 = _haar_basis(d, rng)
        B2 = _haar_basis(d, rng)
        return Frame(np.concatenate([B1, B2], axis=1), np.full(2 * d, 0.5))
    raise ValueError(f"unknown frame kind {kind!r}")
