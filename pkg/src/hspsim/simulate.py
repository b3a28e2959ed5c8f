"""Exact k-register Fourier sampling on coset states, and distance checks.

Conventions
-----------
* Hidden subgroups have order two: H = {e, h} with h an involution; the
  conjugate H^g = {e, ghg^{-1}} is parametrized by the class element
  c = ghg^{-1} (uniform g gives uniform c over the conjugacy class).
* A measurement setting is a tuple of k irreps (one per register) plus a
  frame on the product space; outcome probabilities are weighted quadratic
  forms in the frame vectors.
* Distances between outcome distributions are reported both as the full
  l1 sum and as total variation (half the l1 sum).
"""
from __future__ import annotations

import itertools

import numpy as np

from .fourier import factor_stack, qft, rank_r
from .frames import random_frame
from .groups import Subgroup, order_two_subgroup
from .util import pairwise_sum, parallel_map

COSET_ORDER_LIMIT = 2000
ROUNDTRIP_ORDER_LIMIT = 100
REGISTER_BUDGET = 1e8
MIXED_TRACE_CAPS = ((3, 100), (2, 600))  # allowed (t, |G|) ceilings


# ---------------------------------------------------------------------------
# coset states and their Fourier form

def coset_state(group, H):
    """Density matrix (1/|G|) [y, z in the same left coset of H]."""
    N = group.order
    if N > COSET_ORDER_LIMIT:
        raise ValueError(
            f"resource cap: coset state needs order <= {COSET_ORDER_LIMIT}, "
            f"got {N}")
    hs = list(H.elements)
    sigma = np.zeros((N, N))
    seen = np.zeros(N, dtype=bool)
    for x in range(N):
        if seen[x]:
            continue
        coset = [group.compose(x, h) for h in hs]
        for y in coset:
            seen[y] = True
            for z in coset:
                sigma[y, z] = 1.0
    return sigma / N


def fourier_blocks(group, H, irreps):
    """Per-irrep weighted blocks of the Fourier-transformed coset state.

    The block for rho is (|H| d/|G|) conj(rho)(H), carried with
    multiplicity d; its trace is the probability of observing rho.
    """
    N = group.order
    hs = list(H.elements)
    out = []
    for r in irreps:
        P = np.mean(r.mats[hs].conj(), axis=0)
        out.append({
            "label": r.label,
            "multiplicity": r.degree,
            "block": (len(hs) * r.degree / N) * P,
        })
    return out


def fourier_roundtrip_error(group, H, irreps):
    """Max deviation between F sigma F^dag and the block expansion."""
    N = group.order
    if N > ROUNDTRIP_ORDER_LIMIT:
        raise ValueError(
            f"resource cap: round-trip check needs order <= "
            f"{ROUNDTRIP_ORDER_LIMIT}, got {N}")
    F = qft(group, irreps)
    sigma = coset_state(group, H)
    lhs = F @ sigma @ F.conj().T
    rhs = np.zeros((N, N), dtype=np.complex128)
    pos = 0
    for entry in fourier_blocks(group, H, irreps):
        d = entry["multiplicity"]
        sub = entry["block"] / d
        for i in range(d):
            rhs[pos:pos + d, pos:pos + d] = sub
            pos += d
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# register tuples and frames

def register_budget(group, irreps, k):
    """Work estimate (sum over tuples of squared dimension) with a cap."""
    total = float(sum(r.degree ** 2 for r in irreps)) ** k
    if total > REGISTER_BUDGET:
        big = max(irreps, key=lambda r: r.degree)
        worst = "|".join([big.label] * k)
        raise ValueError(
            f"resource cap: k={k} needs {total:.3g} work units "
            f"(limit {REGISTER_BUDGET:.0e}); largest tuple {worst} "
            f"alone has dimension {big.degree ** k}")
    return total


class RegisterSpace:
    """All k-tuples of irreps with a deterministic frame per tuple."""

    def __init__(self, group, irreps, k, seed=0, kind="basis"):
        if k < 1:
            raise ValueError("k must be at least 1")
        register_budget(group, irreps, k)
        self.group = group
        self.irreps = list(irreps)
        self.k = k
        self.kind = kind
        self.seed = seed
        self.tuples = list(itertools.product(range(len(irreps)), repeat=k))
        self.degrees = [r.degree for r in self.irreps]
        self.dims = [int(np.prod([self.degrees[i] for i in t]))
                     for t in self.tuples]
        self.labels = ["|".join(self.irreps[i].label for i in t)
                       for t in self.tuples]
        children = np.random.SeedSequence(seed).spawn(len(self.tuples))
        self.frames = [random_frame(d, s, kind)
                       for d, s in zip(self.dims, children)]

    def plancherel(self, ti):
        """Probability of tuple ti under the uniform-state measurement."""
        N = self.group.order
        p = 1.0
        for i in self.tuples[ti]:
            p *= self.degrees[i] ** 2 / N
        return p

    def tuple_ranks(self, H):
        """Per-tuple product of subgroup-average ranks (0 kills the tuple)."""
        per_irrep = [rank_r(r, H) for r in self.irreps]
        return [int(np.prod([per_irrep[i] for i in t])) for t in self.tuples]

    def subgroup_prob(self, ti, ranks):
        """|H|^k d r / |G|^k for H of order two."""
        N = self.group.order
        d = self.dims[ti]
        return (2 ** self.k) * d * ranks[ti] / N ** self.k

    def projected_forms(self, ti, c):
        """<b| prod_i (I + rho_i(c))/2 |b> for every frame vector b."""
        K = None
        for i in self.tuples[ti]:
            m = self.irreps[i].mats[c]
            blk = (np.eye(m.shape[0]) + m) / 2
            K = blk if K is None else np.kron(K, blk)
        V = self.frames[ti].vectors
        vals = np.einsum("im,ij,jm->m", V.conj(), K, V)
        if np.max(np.abs(vals.imag)) > 1e-8:
            raise ValueError("projected quadratic form has imaginary part "
                             f"{np.max(np.abs(vals.imag)):.3g}")
        return vals.real


def reference_distribution(space):
    """Joint outcome probabilities for the uniform (trivial-subgroup) state."""
    out = []
    for ti in range(len(space.tuples)):
        f = space.frames[ti]
        out.append(space.plancherel(ti) * f.weights / space.dims[ti])
    return out


def coset_distribution(space, c, ranks=None):
    """Joint outcome probabilities for the coset state of H^g = {e, c}."""
    if ranks is None:
        ranks = space.tuple_ranks(order_two_subgroup(space.group, c))
    out = []
    for ti in range(len(space.tuples)):
        r = ranks[ti]
        f = space.frames[ti]
        if r == 0:
            out.append(np.zeros(f.size))
            continue
        vals = space.projected_forms(ti, c)
        out.append(space.subgroup_prob(ti, ranks) * f.weights * vals / r)
    return out


def conditional_distribution(space, ti, c, ranks):
    """Outcome probabilities within tuple ti, given tuple ti was observed."""
    r = ranks[ti]
    f = space.frames[ti]
    if r == 0:
        return np.zeros(f.size)
    return f.weights * space.projected_forms(ti, c) / r


def l1_distance(dist_a, dist_b):
    """Full l1 sum over all (tuple, outcome) pairs."""
    per_tuple = [float(np.sum(np.abs(a - b)))
                 for a, b in zip(dist_a, dist_b)]
    return pairwise_sum(per_tuple)


def total_variation(dist_a, dist_b):
    """Half the l1 sum."""
    return 0.5 * l1_distance(dist_a, dist_b)


def distribution_rows(space, dist):
    """(label, outcome index, probability) rows of a joint distribution."""
    rows = []
    for ti, vec in enumerate(dist):
        lab = space.labels[ti]
        for bi, p in enumerate(vec):
            rows.append((lab, bi, float(p)))
    return rows


def avg_tv_over_conjugates(space, h, threads=1):
    """Distances to the uniform-state distribution, per conjugate and mean.

    The average over the conjugacy class of h equals the average over a
    uniformly random conjugating element.
    """
    group = space.group
    H = order_two_subgroup(group, h)
    ranks = space.tuple_ranks(H)  # ranks are conjugation-invariant
    ref = reference_distribution(space)
    cls = list(group.class_of(h))

    def work(c):
        return l1_distance(coset_distribution(space, c, ranks), ref)

    l1s = parallel_map(work, cls, threads)
    per_conj = [{"element": group.pretty(c), "l1": v, "tv": 0.5 * v}
                for c, v in zip(cls, l1s)]
    avg_l1 = pairwise_sum(l1s) / len(cls)
    return {
        "per_conjugate": per_conj,
        "avg_l1": avg_l1,
        "avg_tv": 0.5 * avg_l1,
        "max_tv": 0.5 * max(l1s),
    }


# ---------------------------------------------------------------------------
# the X deviation and its second moment

def _quadforms_all(stacks, dims, b):
    """<b| (x)_i A_i(g) |b> for all g; axis i uses stacks[i] or identity."""
    k = len(dims)
    N = next(s.shape[0] for s in stacks.values())
    cur = np.broadcast_to(np.asarray(b, dtype=np.complex128).reshape(dims),
                          (N, *dims))
    axes = [a + 1 for a in range(k)]
    for i, S in sorted(stacks.items()):
        op_axes = [0, k + 1, i + 1]
        out_axes = [0] + [(k + 1 if a == i else a + 1) for a in range(k)]
        cur = np.einsum(S, op_axes, cur, [0] + axes, out_axes)
    return np.einsum(cur, [0] + axes,
                     np.asarray(b, dtype=np.complex128).conj().reshape(dims),
                     axes, [0])


def _tuple_mats(irreps, tup):
    return [irreps[i].mats for i in tup]


def q_subset_values(irreps, tup, b, subset):
    """q_I(g) = <b| rho^I(g) |b> for all g, identity on registers outside I."""
    mats = _tuple_mats(irreps, tup)
    dims = tuple(m.shape[1] for m in mats)
    stacks = {i: mats[i] for i in subset}
    if not stacks:
        raise ValueError("subset must be nonempty")
    return _quadforms_all(stacks, dims, b)


def q_total_values(irreps, tup, b):
    """Q(g) = <b| (x)_i (I + rho_i(g)) |b> - 1 for all g."""
    mats = _tuple_mats(irreps, tup)
    dims = tuple(m.shape[1] for m in mats)
    stacks = {i: m + np.eye(m.shape[1]) for i, m in enumerate(mats)}
    return _quadforms_all(stacks, dims, b) - 1.0


def x_function(irreps, tup, b, c):
    """X = <b| (x)_i (I + rho_i(c))/2 |b> - 2^{-k} at the class element c."""
    k = len(tup)
    K = None
    for i in tup:
        m = irreps[i].mats[c]
        blk = (np.eye(m.shape[0]) + m) / 2
        K = blk if K is None else np.kron(K, blk)
    val = complex(np.asarray(b).conj() @ (K @ np.asarray(b)))
    if abs(val.imag) > 1e-8:
        raise ValueError(f"X has imaginary part {val.imag:.3g}")
    return val.real - 0.5 ** k


def second_moment_check(group, irreps, tup, b, h):
    """Class-average of X^2 versus its character-weighted Fourier form.

    Returns (lhs, rhs): lhs averages X^2 over the conjugacy class of h;
    rhs is 4^{-k} sum_tau chi_tau(h) E_g[conj(chi_tau(g)) Q(g)^2].
    """
    k = len(tup)
    cls = list(group.class_of(h))
    Q = q_total_values(irreps, tup, b)
    Qc = Q[cls]
    if np.max(np.abs(Qc.imag)) > 1e-8:
        raise ValueError("Q is not real on the conjugacy class")
    X = Qc.real / 2 ** k
    lhs = float(np.mean(X ** 2))
    rhs = 0.0 + 0.0j
    Q2 = Q * Q
    for tau in irreps:
        chi = tau.character()
        chi_h = chi[h]
        rhs += chi_h * np.mean(chi.conj() * Q2)
    rhs /= 4 ** k
    if abs(rhs.imag) > 1e-8:
        raise ValueError("Fourier side of the identity is not real")
    return lhs, float(rhs.real)


def second_moment_terms(group, irreps, tup, b, h):
    """Per-subset-pair breakdown of the second-moment identity.

    For each pair (I1, I2) of nonempty register subsets, compares the
    class-average of q_I1 q_I2 with sum_tau chi_tau(h) E_g[conj(chi_tau) q_I1 q_I2].
    Summing either column over all pairs gives 4^k times the X^2 averages.
    """
    k = len(tup)
    cls = list(group.class_of(h))
    subsets = [s for r in range(1, k + 1)
               for s in itertools.combinations(range(k), r)]
    qs = {s: q_subset_values(irreps, tup, b, s) for s in subsets}
    chars = [(tau.character()[h], tau.character().conj()) for tau in irreps]
    out = {}
    for s1 in subsets:
        for s2 in subsets:
            prod = qs[s1] * qs[s2]
            lhs = complex(np.mean(prod[cls]))
            rhs = sum(ch * np.mean(cc * prod) for ch, cc in chars)
            out[(s1, s2)] = (lhs, complex(rhs))
    return out


# ---------------------------------------------------------------------------
# bound suite on simulated quantities

def _spectral_sets(irreps, h, eps):
    """(S_eps labels, D_eps, sum of d|chi(h)| over S_eps, sum of all degrees)."""
    s_labels = []
    d_eps = 0
    sum_dchi = 0.0
    sum_d = 0
    for tau in irreps:
        chi_h = tau.character()[h]
        if abs(chi_h.imag) > 1e-8:
            raise ValueError(f"character of {tau.label} not real at h")
        a = abs(chi_h.real)
        sum_d += tau.degree
        if a / tau.degree >= eps:
            s_labels.append(tau.label)
            d_eps += tau.degree ** 2
            sum_dchi += tau.degree * a
    return s_labels, d_eps, sum_dchi, sum_d


def lemma_suite(group, irreps, h, k, eps, seed=0, kind="basis", threads=1,
                n_sample_tuples=3, n_sample_vectors=3):
    """Numerical check of the bound chain behind the distance theorem.

    Exact expectations over tuples, frame outcomes, and group elements;
    a small deterministic sample for the per-vector projector inequality
    and the second-moment identity. Returns one entry per check.
    """
    N = group.order
    space = RegisterSpace(group, irreps, k, seed=seed, kind=kind)
    H = order_two_subgroup(group, h)
    ranks = space.tuple_ranks(H)
    cls = list(group.class_of(h))
    s_labels, d_eps, sum_dchi, sum_d = _spectral_sets(irreps, h, eps)
    delta1 = eps + sum_d * sum_dchi / N
    entries = []
    rng = np.random.default_rng(seed + 987654321)

    # --- second-moment identity on sampled (tuple, vector) pairs
    worst = (0.0, None)
    picks = rng.choice(len(space.tuples),
                       size=min(n_sample_tuples, len(space.tuples)),
                       replace=False)
    for ti in picks:
        f = space.frames[ti]
        cols = rng.choice(f.size, size=min(n_sample_vectors, f.size),
                          replace=False)
        for bi in cols:
            lhs, rhs = second_moment_check(group, irreps, space.tuples[ti],
                                           f.vectors[:, bi], h)
            err = abs(lhs - rhs)
            if err > worst[0]:
                worst = (err, space.labels[ti])
    entries.append({
        "check": "second-moment identity",
        "lhs": worst[0], "rhs": 1e-8, "slack": 1e-8 - worst[0],
        "detail": f"worst |class-avg - fourier| at tuple {worst[1]}",
        "pass": bool(worst[0] <= 1e-8),
    })

    # --- isotypic-projector bound on sampled (tuple, vector) pairs
    worst = (np.inf, None)
    subsets = [s for r in range(1, k + 1)
               for s in itertools.combinations(range(k), r)]
    for ti in picks:
        tup = space.tuples[ti]
        f = space.frames[ti]
        stacks = {}
        for s in subsets:
            factors = [irreps[i] if pos in s else irreps[i].degree
                       for pos, i in enumerate(tup)]
            stacks[s] = factor_stack(group, factors)
        cols = rng.choice(f.size, size=min(n_sample_vectors, f.size),
                          replace=False)
        for bi in cols:
            b = f.vectors[:, bi]
            W = np.outer(b, b)
            qmean = {s: float(np.mean(np.abs(
                np.einsum("i,gij,j->g", b.conj(), stacks[s], b)) ** 2))
                for s in subsets}
            for s1 in subsets:
                for s2 in subsets:
                    for tau in irreps:
                        chi = tau.character().conj()
                        y = (tau.degree / N) * np.einsum(
                            "g,gik,kl,gjl->ij", chi, stacks[s1], W, stacks[s2])
                        lhs = float(np.sum(np.abs(y) ** 2))
                        rhs = (tau.degree ** 2 / 2) * (qmean[s1] + qmean[s2])
                        if rhs - lhs < worst[0]:
                            worst = (rhs - lhs,
                                     (space.labels[ti], s1, s2, tau.label),
                                     lhs, rhs)
    entries.append({
        "check": "isotypic projection bound",
        "lhs": worst[2], "rhs": worst[3], "slack": worst[0],
        "detail": f"tightest case {worst[1]}",
        "pass": bool(worst[0] >= -1e-9),
    })

    # --- averaged diagonal-overlap bound, per nonempty register subset
    rhs_mub = sum_d / N
    worst = (np.inf, None)
    for s in subsets:
        contrib = []
        for ti in range(len(space.tuples)):
            tup = space.tuples[ti]
            f = space.frames[ti]
            per_b = []
            for bi in range(f.size):
                q = q_subset_values(irreps, tup, f.vectors[:, bi], s)
                per_b.append(f.weights[bi] / space.dims[ti]
                             * float(np.mean(np.abs(q) ** 2)))
            contrib.append(space.plancherel(ti) * pairwise_sum(per_b))
        lhs = pairwise_sum(contrib)
        if rhs_mub - lhs < worst[0]:
            worst = (rhs_mub - lhs, s, lhs)
    entries.append({
        "check": "diagonal overlap bound",
        "lhs": worst[2], "rhs": rhs_mub, "slack": worst[0],
        "detail": f"tightest register subset {worst[1]}",
        "pass": bool(worst[0] >= -1e-9),
    })

    # --- X second moment against delta1, and per-conjugate distances
    def tuple_work(ti):
        f = space.frames[ti]
        wd = f.weights / space.dims[ti]
        xsq = np.zeros(len(cls))
        xabs = np.zeros(len(cls))
        for ci, c in enumerate(cls):
            vals = space.projected_forms(ti, c)
            X = vals - 0.5 ** k
            xsq[ci] = float(np.dot(wd, X ** 2))
            xabs[ci] = float(np.dot(wd, np.abs(X)))
        return xsq, xabs

    per_tuple = parallel_map(tuple_work, range(len(space.tuples)), threads)
    planch = np.array([space.plancherel(ti)
                       for ti in range(len(space.tuples))])
    xsq_mat = np.array([t[0] for t in per_tuple])   # (tuple, conjugate)
    xabs_mat = np.array([t[1] for t in per_tuple])
    lhs_delta1 = float(np.mean(planch @ xsq_mat))
    entries.append({
        "check": "x second moment below delta1",
        "lhs": lhs_delta1, "rhs": delta1, "slack": delta1 - lhs_delta1,
        "detail": f"S_eps={s_labels}, D_eps={d_eps}",
        "pass": bool(lhs_delta1 < delta1 + 1e-12),
    })

    if 2 * k * eps >= 1:
        entries.append({
            "check": "distance against x first moment",
            "lhs": None, "rhs": None, "slack": None,
            "detail": f"hypothesis 2*k*eps < 1 fails (2*{k}*{eps} >= 1)",
            "pass": None,
        })
    else:
        mu = planch @ xabs_mat                      # per-conjugate first moment
        ref = reference_distribution(space)
        worst = (np.inf, None)
        for ci, c in enumerate(cls):
            lhs = l1_distance(coset_distribution(space, c, ranks), ref)
            rhs = (2 ** k * (1 + 2 * k * eps) * float(mu[ci])
                   + 3 * k * eps + 3 * k * d_eps / N)
            if rhs - lhs < worst[0]:
                worst = (rhs - lhs, group.pretty(c), lhs, rhs)
        entries.append({
            "check": "distance against x first moment",
            "lhs": worst[2], "rhs": worst[3], "slack": worst[0],
            "detail": f"tightest conjugate {worst[1]}",
            "pass": bool(worst[0] >= -1e-9),
        })
    return entries


# ---------------------------------------------------------------------------
# multi-copy mixture of conjugate coset states

def mixed_conjugate_trace_distance(group, irreps, h, t):
    """Trace distance between the conjugate-averaged t-fold coset state
    and the t-fold uniform state.

    Block form: (1/|G|^t) sum over t-tuples of d_rho times the trace norm
    of E_{x in class}[(x)_i (I + rho_i(x))] - I.
    """
    N = group.order
    if not any(t <= mt and N <= mo for mt, mo in MIXED_TRACE_CAPS):
        caps = " or ".join(f"t<={mt} for order<={mo}"
                           for mt, mo in MIXED_TRACE_CAPS)
        raise ValueError(
            f"resource cap: mixed-state distance supports {caps}; "
            f"got t={t}, order {N}")
    cls = list(group.class_of(h))
    stacks = []
    for r in irreps:
        m = r.mats[cls]
        stacks.append(m + np.eye(r.degree))
    contrib = []
    for tup in itertools.product(range(len(irreps)), repeat=t):
        acc = stacks[tup[0]]
        for i in tup[1:]:
            s = stacks[i]
            a, b = acc.shape[1], s.shape[1]
            acc = np.einsum("cij,ckl->cikjl", acc, s).reshape(
                len(cls), a * b, a * b)
        M = acc.mean(axis=0) - np.eye(acc.shape[1])
        tn = float(np.sum(np.abs(np.linalg.eigvalsh(M))))
        d = int(np.prod([irreps[i].degree for i in tup]))
        contrib.append(d * tn)
    return pairwise_sum(contrib) / N ** t


# ---------------------------------------------------------------------------
# transfer checks between related groups

def transfer_subgroup_report(big, mapping, small, h_small, tol=1e-9):
    """Coset-state spectra under an embedding small -> big.

    The nonzero spectrum of the big-group coset state is the small one
    repeated [big:small] times and scaled by 1/[big:small]; the zero
    multiplicities agree too, so full sorted spectra are compared.
    """
    mapping = np.asarray(mapping)
    if int(mapping[small.identity]) != big.identity:
        raise ValueError("embedding does not send identity to identity")
    index, rem = divmod(big.order, small.order)
    if rem:
        raise ValueError("small group order does not divide big group order")
    ev_big = np.sort(np.linalg.eigvalsh(
        coset_state(big, order_two_subgroup(big, int(mapping[h_small])))))
    ev_small = np.sort(np.linalg.eigvalsh(
        coset_state(small, order_two_subgroup(small, h_small))))
    expected = np.sort(np.repeat(ev_small, index) / index)
    diff = float(np.max(np.abs(ev_big - expected)))
    return {
        "mode": "subgroup",
        "index": index,
        "max_spectral_diff": diff,
        "pass": bool(diff <= tol),
    }


def transfer_quotient_report(big, projection, small, h_small, tol=1e-9):
    """Coset-state spectra under a quotient map big -> small.

    The subgroup upstairs is the full preimage of {e, h}; the nonzero
    spectra downstairs and upstairs coincide as multisets.
    """
    projection = np.asarray(projection)
    targets = {small.identity, h_small}
    pre = [x for x in range(big.order) if int(projection[x]) in targets]
    H_big = Subgroup(big, pre)
    ev_big = np.linalg.eigvalsh(coset_state(big, H_big))
    ev_small = np.linalg.eigvalsh(
        coset_state(small, order_two_subgroup(small, h_small)))
    nz_big = np.sort(ev_big[ev_big > 1e-12])
    nz_small = np.sort(ev_small[ev_small > 1e-12])
    if len(nz_big) != len(nz_small):
        return {
            "mode": "quotient",
            "nonzero_count": (len(nz_big), len(nz_small)),
            "max_spectral_diff": float("inf"),
            "pass": False,
        }
    diff = float(np.max(np.abs(nz_big - nz_small)))
    return {
        "mode": "quotient",
        "preimage_order": len(pre),
        "nonzero_count": len(nz_small),
        "zero_counts": (big.order - len(nz_big), small.order - len(nz_small)),
        "max_spectral_diff": diff,
        "pass": bool(diff <= tol),
    }
