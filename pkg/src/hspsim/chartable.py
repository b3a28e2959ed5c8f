"""Character tables: from explicit irreps, or numerically from class sums."""
from __future__ import annotations

import csv
import io

import numpy as np

from .irreps import canonical_sort
from .util import fmt_complex


class CharacterTable:
    """Rows are irreps (canonical order), columns conjugacy classes."""

    def __init__(self, group, labels, degrees, values):
        self.group = group
        self.classes = group.conjugacy_classes()
        self.class_reps = [c[0] for c in self.classes]
        self.class_sizes = [len(c) for c in self.classes]
        self.labels = list(labels)
        self.degrees = [int(d) for d in degrees]
        self.values = np.asarray(values, dtype=np.complex128)
        if self.values.shape != (len(self.labels), len(self.classes)):
            raise ValueError("table shape mismatch")

    @classmethod
    def from_irreps(cls, group, irreps):
        irreps = canonical_sort(group, irreps)
        reps = [c[0] for c in group.conjugacy_classes()]
        values = np.array([r.character()[reps] for r in irreps])
        return cls(group, [r.label for r in irreps],
                   [r.degree for r in irreps], values)

    # -- checks -------------------------------------------------------------
    def row_orthogonality_error(self):
        sizes = np.array(self.class_sizes, dtype=float)
        gram = (self.values * sizes) @ self.values.conj().T / self.group.order
        return float(np.abs(gram - np.eye(len(self.labels))).max())

    def column_orthogonality_error(self):
        """Columns satisfy sum_rho chi(x) conj(chi(y)) = |C_G(x)| delta_xy."""
        gram = self.values.conj().T @ self.values
        cent = np.array([self.group.order / s for s in self.class_sizes])
        return float(np.abs(gram - np.diag(cent)).max())

    def sum_of_squared_degrees(self):
        return sum(d * d for d in self.degrees)

    # -- export -------------------------------------------------------------
    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class_rep", "class_size"] + self.labels)
        for j, (rep, size) in enumerate(zip(self.class_reps, self.class_sizes)):
            row = [self.group.pretty(rep), size]
            row += [fmt_complex(v) for v in self.values[:, j]]
            w.writerow(row)
        return buf.getvalue()

    def to_json_obj(self):
        return {
            "group": repr(self.group),
            "class_reps": [self.group.pretty(r) for r in self.class_reps],
            "class_sizes": list(self.class_sizes),
            "labels": list(self.labels),
            "degrees": list(self.degrees),
            "values": [[fmt_complex(v) for v in row] for row in self.values],
        }


def character_table_numeric(group, seed=0):
    """Character table from the class-sum algebra, no irrep matrices.

    The structure constants a_{ijk} (K_i K_j = sum_k a_{ijk} K_k) give
    matrices M_i = a[i,:,:] whose simultaneous eigenvectors are the central
    characters |C_k| chi(g_k)/chi(1); a random real combination separates
    them.  Rows come back canonically sorted.  Purely numeric - this is an
    independent path from any irrep construction.
    """
    G = group
    classes = G.conjugacy_classes()
    r = len(classes)
    cls_index = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(classes):
        for x in c:
            cls_index[x] = i
    reps = [c[0] for c in classes]
    sizes = np.array([len(c) for c in classes], dtype=float)
    ident_cls = int(cls_index[G.identity])

    a = np.zeros((r, r, r))
    for i, c in enumerate(classes):
        for x in c:
            xi = G.inverse(x)
            for k, z in enumerate(reps):
                a[i, cls_index[G.compose(xi, z)], k] += 1.0

    last = None
    for attempt in range(5):
        rng = np.random.default_rng(seed + attempt)
        T = np.tensordot(rng.standard_normal(r), a, axes=1)
        w, V = np.linalg.eig(T)
        # reject nearly repeated eigenvalues: eigenvectors would mix rows
        ws = np.sort_complex(w)
        if r > 1 and min(abs(ws[i + 1] - ws[i]) for i in range(r - 1)) < 1e-6:
            last = "degenerate eigenvalues"
            continue
        rows = []
        ok = True
        for v in V.T:
            if abs(v[ident_cls]) < 1e-12:
                ok = False
                break
            u = v / v[ident_cls]
            d2 = G.order / float(np.sum(np.abs(u) ** 2 / sizes))
            d = np.sqrt(d2)
            if abs(d - round(d)) > 1e-6:
                ok = False
                break
            chi = np.round(d) * u / sizes
            rows.append((int(round(d)), chi))
        if not ok:
            last = "eigenvector did not normalize to a character"
            continue
        rows.sort(key=lambda t: (t[0], tuple((-round(z.real, 8), -round(z.imag, 8))
                                             for z in t[1])))
        values = np.array([chi for _, chi in rows])
        tab = CharacterTable(G, [f"rho{i}" for i in range(r)],
                             [d for d, _ in rows], values)
        if tab.row_orthogonality_error() < 1e-8 and tab.column_orthogonality_error() < 1e-8:
            return tab
        last = "orthogonality check failed"
    raise RuntimeError(f"class-sum character table failed: {last}")


def best_character_table(group, seed=0):
    """Character table with the most informative labels available.

    Families with explicit irrep constructions (symmetric n <= 5, cyclic,
    dihedral-by-generic, wreath 2..4) get labeled rows; anything else falls
    back to the purely numeric class-sum table with rho<i> labels.
    """
    from . import irreps as irr
    kind, params = group.kind, group.params
    try:
        if kind == "symmetric" and params[0] <= 5:
            return CharacterTable.from_irreps(group, irr.irreps_symmetric(params[0]))
        if kind == "cyclic":
            return CharacterTable.from_irreps(group, irr.irreps_cyclic(params[0]))
        if kind == "wreath" and 2 <= params[0] <= 4:
            return CharacterTable.from_irreps(group, irr.irreps_wreath(params[0]))
    except Exception:
        pass
    return character_table_numeric(group, seed=seed)


def tables_match_up_to_rows(t1, t2, tol=1e-8):
    """True when the two tables hold the same rows (same class order)."""
    if t1.values.shape != t2.values.shape:
        return False
    used = set()
    for row in t1.values:
        hit = None
        for j, other in enumerate(t2.values):
            if j not in used and np.abs(row - other).max() < tol:
                hit = j
                break
        if hit is None:
            return False
        used.add(hit)
    return True
