"""Unitary irreducible representations of the supported groups.

Matrices are stored stacked as shape (|G|, d, d) complex arrays indexed by
element id, so group averages become single einsum reductions.
"""
from __future__ import annotations

import math

import numpy as np

from .groups import SymmetricGroup

GENERIC_ORDER_LIMIT = 2000


class Irrep:
    """One unitary representation: label plus stacked matrices."""

    def __init__(self, group, label, mats):
        self.group = group
        self.label = label
        self.mats = np.ascontiguousarray(mats, dtype=np.complex128)
        if self.mats.shape[0] != group.order or self.mats.ndim != 3:
            raise ValueError("matrix stack must have shape (|G|, d, d)")
        self._char = None

    @property
    def degree(self):
        return self.mats.shape[1]

    def matrix(self, x):
        return self.mats[x]

    def character(self):
        if self._char is None:
            self._char = np.einsum("gii->g", self.mats)
        return self._char

    def conjugate(self):
        other = Irrep(self.group, _conj_label(self.label), self.mats.conj())
        return other

    def __repr__(self):
        return f"<irrep {self.label} degree={self.degree}>"


def _conj_label(label):
    return label[:-1] if label.endswith("*") else label + "*"


def conjugate_irrep(rho):
    return rho.conjugate()


# ---------------------------------------------------------------------------
# partitions and standard tableaux

def partitions(n):
    """All partitions of n in descending lexicographic order."""
    out = []

    def rec(rem, mx, prefix):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for k in range(min(rem, mx), 0, -1):
            rec(rem - k, k, prefix + [k])

    rec(n, n, [])
    return out


def partition_label(lam):
    return "[" + ",".join(str(k) for k in lam) + "]"


def hook_length_degree(lam):
    n = sum(lam)
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for r in lam[i + 1:] if r > j)
            prod *= arm + leg + 1
    return math.factorial(n) // prod


def standard_tableaux(lam):
    """Tableaux as tuples pos[k] = (row, col) of entry k+1; fixed order."""
    n = sum(lam)
    out = []

    def rec(fill, pos):
        if len(pos) == n:
            out.append(tuple(pos))
            return
        for r, width in enumerate(lam):
            if fill[r] < width and (r == 0 or fill[r - 1] > fill[r]):
                fill[r] += 1
                pos.append((r, fill[r] - 1))
                rec(fill, pos)
                pos.pop()
                fill[r] -= 1

    rec([0] * len(lam), [])
    return out


def _yor_generator(lam, tableaux, k):
    """Matrix of the adjacent transposition (k, k+1), 1-based k."""
    d = len(tableaux)
    index = {t: i for i, t in enumerate(tableaux)}
    M = np.zeros((d, d))
    for i, t in enumerate(tableaux):
        r1, c1 = t[k - 1]
        r2, c2 = t[k]
        ax = (c2 - r2) - (c1 - r1)  # axial distance, never 0
        M[i, i] = 1.0 / ax
        if abs(ax) > 1:
            swapped = list(t)
            swapped[k - 1], swapped[k] = swapped[k], swapped[k - 1]
            M[i, index[tuple(swapped)]] = math.sqrt(1.0 - 1.0 / ax ** 2)
    return M


def _extend_over_group(group, gen_ids, gen_mats, d):
    """Fill mats for all elements by BFS over right multiplication."""
    mats = np.zeros((group.order, d, d), dtype=np.complex128)
    known = np.zeros(group.order, dtype=bool)
    mats[group.identity] = np.eye(d)
    known[group.identity] = True
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for gid, gm in zip(gen_ids, gen_mats):
                y = group.compose(x, gid)
                if not known[y]:
                    mats[y] = mats[x] @ gm
                    known[y] = True
                    nxt.append(y)
        frontier = nxt
    if not known.all():
        raise ValueError("generators do not generate the group")
    return mats


def irreps_symmetric(n):
    """Young's orthogonal form; one irrep per partition, descending lex."""
    if not 1 <= n <= 5:
        raise ValueError("symmetric-group irreps supported for 1 <= n <= 5")
    G = SymmetricGroup(n)
    gen_ids = [G.from_perm(tuple(range(k - 1)) + (k, k - 1) + tuple(range(k + 1, n)))
               for k in range(1, n)]
    out = []
    for lam in partitions(n):
        tabs = standard_tableaux(lam)
        gens = [_yor_generator(lam, tabs, k) for k in range(1, n)]
        mats = _extend_over_group(G, gen_ids, gens, len(tabs))
        out.append(Irrep(G, partition_label(lam), mats))
    return out


def irreps_cyclic(n):
    from .groups import CyclicGroup
    G = CyclicGroup(n)
    out = []
    for j in range(n):
        vals = np.exp(2j * np.pi * j * np.arange(n) / n)
        out.append(Irrep(G, f"chi{j}", vals.reshape(n, 1, 1)))
    return out


# ---------------------------------------------------------------------------
# wreath-product irreps

def _tensor_swap(d):
    S = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            S[j * d + i, i * d + j] = 1.0
    return S


def irreps_wreath(n):
    """All irreps of S_n wr S_2.

    For each partition two degree-d^2 irreps (swap acts as +/- the tensor
    swap); for each unordered pair of distinct partitions one induced irrep
    of degree 2 d_i d_j.  Count: 2 p(n) + C(p(n), 2).
    """
    from .groups import WreathS2Group
    if not 2 <= n <= 4:
        raise ValueError("wreath irreps supported for 2 <= n <= 4")
    W = WreathS2Group(n)
    base = irreps_symmetric(n)
    lams = partitions(n)
    packed = [W.unpack(x) for x in range(W.order)]

    out = []
    for sign, tag in ((1.0, "theta"), (-1.0, "theta'")):
        for lam, rho in zip(lams, base):
            d = rho.degree
            S = sign * _tensor_swap(d)
            mats = np.empty((W.order, d * d, d * d), dtype=np.complex128)
            for x, (p, s, b) in enumerate(packed):
                M = np.kron(rho.mats[p], rho.mats[s])
                mats[x] = M @ S if b else M
            out.append(Irrep(W, tag + partition_label(lam), mats))
    for i in range(len(lams)):
        for j in range(i + 1, len(lams)):
            ri, rj = base[i], base[j]
            di, dj = ri.degree, rj.degree
            d = 2 * di * dj
            mats = np.zeros((W.order, d, d), dtype=np.complex128)
            half = di * dj
            for x, (p, s, b) in enumerate(packed):
                A = np.kron(ri.mats[p], rj.mats[s])
                B = np.kron(ri.mats[s], rj.mats[p])
                if b:
                    mats[x, :half, half:] = A
                    mats[x, half:, :half] = B
                else:
                    mats[x, :half, :half] = A
                    mats[x, half:, half:] = B
            lab = "kappa" + partition_label(lams[i]) + "x" + partition_label(lams[j])
            out.append(Irrep(W, lab, mats))
    return out


# ---------------------------------------------------------------------------
# generic decomposition of the regular representation

def _cluster(eigvals, tol):
    segs, start = [], 0
    for i in range(1, len(eigvals)):
        if eigvals[i] - eigvals[i - 1] > tol:
            segs.append((start, i))
            start = i
    segs.append((start, len(eigvals)))
    return segs


def _char_norm(mats):
    chi = np.einsum("gii->g", mats)
    return float(np.vdot(chi, chi).real) / mats.shape[0]


def _split_unitary_rep(mats, tol, rng, depth=0):
    """Recursively split a unitary rep (stacked matrices) into irreducibles."""
    m = mats.shape[1]
    if m == 1 or abs(_char_norm(mats) - 1.0) < 1e-6:
        return [mats]
    if depth > 12:
        raise RuntimeError("representation failed to split")
    A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    M = (A + A.conj().T) / 2
    C = np.einsum("gij,jk,glk->il", mats, M, mats.conj()) / mats.shape[0]
    C = (C + C.conj().T) / 2
    w, V = np.linalg.eigh(C)
    segs = _cluster(w, tol)
    if len(segs) == 1:
        # non-generic draw; try again
        return _split_unitary_rep(mats, tol, rng, depth + 1)
    out = []
    for a, b in segs:
        U = V[:, a:b]
        sub = np.einsum("ji,gjk,kl->gil", U.conj(), mats, U)
        out.extend(_split_unitary_rep(sub, tol, rng, depth + 1))
    return out


def irreps_generic(group, tol=1e-6, seed=0):
    """All irreps via numerical decomposition of the regular representation.

    A random Hermitian matrix is averaged into the commutant (an O(|G|^2)
    index trick), its eigenspaces are split off, and each block is reduced
    recursively until the character norm certifies irreducibility.  Retries
    with fresh randomness on a degenerate draw.  Result is canonically
    sorted and labeled rho0, rho1, ...
    """
    N = group.order
    if N > GENERIC_ORDER_LIMIT:
        raise ValueError(f"generic decomposition capped at order {GENERIC_ORDER_LIMIT}")
    table = group.table()
    invs = np.array([group.inverse(g) for g in range(N)])
    last_err = None
    for attempt in range(5):
        rng = np.random.default_rng(seed + attempt)
        try:
            pieces = _decompose_regular(group, table, invs, tol, rng)
        except RuntimeError as err:
            last_err = err
            continue
        distinct = _dedupe(pieces)
        if sum(p.shape[1] ** 2 for p in distinct) == N:
            reps = [Irrep(group, "", p) for p in distinct]
            reps = canonical_sort(group, reps)
            for i, r in enumerate(reps):
                r.label = f"rho{i}"
            return reps
        last_err = RuntimeError("sum of squared degrees mismatch")
    raise RuntimeError(f"regular representation failed to decompose: {last_err}")


def _decompose_regular(group, table, invs, tol, rng):
    N = group.order
    A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    M = (A + A.conj().T) / 2
    # E_g[R(g) M R(g)^dag][a,b] depends only on a^{-1} b:
    #   m[z] = mean_u M[u, u z];  C[a,b] = m[a^{-1} b]
    m = np.empty(N, dtype=np.complex128)
    rows = np.arange(N)
    for z in range(N):
        m[z] = M[rows, table[:, z]].mean()
    C = m[table[invs, :]]
    C = (C + C.conj().T) / 2
    w, V = np.linalg.eigh(C)
    segs = _cluster(w, tol)
    if len(segs) < 2 and N > 1:
        raise RuntimeError("commutant average did not split")
    out = []
    for a, b in segs:
        U = V[:, a:b]
        # rho(g) = U^dag R(g) U and (R(g) U)[a] = U[g^{-1} a]
        sub = np.empty((N, b - a, b - a), dtype=np.complex128)
        for g in range(N):
            sub[g] = U.conj().T @ U[table[invs[g], :], :]
        out.extend(_split_unitary_rep(sub, tol, rng))
    return out


def _dedupe(pieces):
    kept, chars = [], []
    for p in pieces:
        chi = np.einsum("gii->g", p)
        dup = False
        for c in chars:
            if abs(np.vdot(c, chi).real / p.shape[0] - 1.0) < 1e-6:
                dup = True
                break
        if not dup:
            kept.append(p)
            chars.append(chi)
    return kept


# ---------------------------------------------------------------------------
# canonical ordering

def canonical_sort(group, irreps):
    """Sort by degree, then by character vector (descending lex).

    Characters are compared at class representatives with classes ordered by
    (size, smallest member); values are rounded so float noise cannot flip
    the order.  Descending lex puts the trivial character first.
    """
    reps = [c[0] for c in group.conjugacy_classes()]

    def key(rho):
        chi = rho.character()[reps]
        return (rho.degree,
                tuple((-round(z.real, 8), -round(z.imag, 8)) for z in chi))

    return sorted(irreps, key=key)


GENERIC_ORDER_LIMIT = 700


def irreps_for(group, seed=0):
    """Complete unitary irreps for a group, preferring explicit constructions.

    Symmetric groups up to n = 5, cyclic groups, and wreath products with
    2 <= n <= 4 get their labeled explicit irreps; anything else falls back
    to the numeric regular-representation decomposition, capped by order.
    """
    kind, params = group.kind, group.params
    if kind == "symmetric" and params[0] <= 5:
        return irreps_symmetric(params[0])
    if kind == "cyclic":
        return irreps_cyclic(params[0])
    if kind == "wreath" and 2 <= params[0] <= 4:
        return irreps_wreath(params[0])
    if group.order > GENERIC_ORDER_LIMIT:
        raise ValueError(
            f"resource cap: numeric irrep construction supports order up to "
            f"{GENERIC_ORDER_LIMIT}, got {group.order}")
    return irreps_generic(group, seed=seed)


# ---------------------------------------------------------------------------
# consistency helpers used by tests and the verify command

def hom_unitarity_error(rho, pairs=None):
    """Max deviation from rho(xy) = rho(x)rho(y) and unitarity.

    pairs=None checks all |G|^2 pairs (vectorized); otherwise an iterable of
    (x, y) id pairs.
    """
    G, mats = rho.group, rho.mats
    d = rho.degree
    eye = np.eye(d)
    uerr = max(float(np.abs(m.conj().T @ m - eye).max()) for m in mats)
    if pairs is None:
        table = G.table()
        prod = np.einsum("aij,bjk->abik", mats, mats)
        herr = float(np.abs(prod - mats[table]).max())
    else:
        herr = 0.0
        for x, y in pairs:
            diff = np.abs(mats[G.compose(x, y)] - mats[x] @ mats[y]).max()
            herr = max(herr, float(diff))
    return max(uerr, herr)


def schur_orthogonality_error(group, irreps):
    """Max deviation of (d/|G|) sum_g r1(g)_ij conj(r2(g)_kl) from deltas."""
    N = group.order
    worst = 0.0
    for a, r1 in enumerate(irreps):
        for b, r2 in enumerate(irreps):
            M = np.einsum("gij,gkl->ikjl", r1.mats, r2.mats.conj()) / N
            if a == b:
                d = r1.degree
                expect = np.einsum("ik,jl->ikjl", np.eye(d), np.eye(d)) / d
                worst = max(worst, float(np.abs(M - expect).max()))
            else:
                worst = max(worst, float(np.abs(M).max()))
    return worst
