"""Adversary matrices and spectral lower-bound evaluation.

An adversary matrix for a problem is a nonnegative symmetric matrix over its
instances that vanishes on same-answer pairs.  The ratio

    ||Gamma|| / max_i ||Gamma o D_i||

(with D_i the position-i distinguisher) times ``1 - 2*sqrt(eps*(1-eps))``
lower-bounds the eps-error quantum query complexity.  This module builds the
explicit candidates used throughout the package:

  * ``hilbert_tile(m)``      -- the m x m tile with entries 1/(|i-j|+1);
  * ``os_adversary(m)``      -- the same weights off-diagonal, over ordered
                                search instances;
  * ``uniform_from_tile``    -- expands an m x m tile to a full uniform
                                adversary matrix for a search labeling;
  * ``compose_adversary``    -- the tensor-structured adversary matrix of a
                                block composition, whose norm factorizes as
                                ||Gamma_f|| * prod_i ||A_i||;
  * ``symmetrize``           -- averages a matrix over all permutations of
                                the answer alphabet, yielding a uniform
                                matrix that is never a worse candidate.

Ratios are *evaluated* for these explicit candidates; no optimization over
all adversary matrices is attempted (a lower bound needs no optimality).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .matrices import LabeledMatrix, int_labels, power_norm, spectral_norm
from .problems import (
    ComposedProblem,
    QueryProblem,
    SearchLabeling,
    Sym,
    compose,
    make_hsos,
    restrict_labeling,
)

logger = logging.getLogger(__name__)


class AdversaryError(ValueError):
    """Invalid adversary matrix or unusable candidate."""


@dataclass(frozen=True)
class AdversaryMatrix:
    """A labeled matrix paired with the problem whose instances index it."""

    matrix: LabeledMatrix
    problem: QueryProblem

    def __post_init__(self):
        if self.matrix.labels != self.problem.instances:
            raise AdversaryError("matrix labels do not match problem instances")
        ans = self.problem.answers_in_order()
        ids = {}
        ans_idx = np.array([ids.setdefault(a, len(ids)) for a in ans])
        same = ans_idx[:, None] == ans_idx[None, :]
        ent = self.matrix.entries
        if self.matrix.is_exact:
            bad = [(i, j) for i, j in np.argwhere(same) if ent[i, j] != 0]
        else:
            bad = np.argwhere(same & (ent != 0.0))
        if len(bad):
            i, j = map(int, bad[0])
            raise AdversaryError(
                f"nonzero entry at same-answer pair "
                f"({self.problem.instances[i]!r}, {self.problem.instances[j]!r})"
            )

    @property
    def dim(self) -> int:
        return self.matrix.dim


@dataclass(frozen=True)
class Tile:
    """m x m core of a uniform adversary matrix, indexed by variant."""

    matrix: LabeledMatrix
    labeling: SearchLabeling

    def __post_init__(self):
        if self.matrix.dim != self.labeling.variants:
            raise AdversaryError(
                f"tile dim {self.matrix.dim} != {self.labeling.variants} variants"
            )


@dataclass(frozen=True)
class BoundReport:
    """One evaluated spectral-adversary ratio and the implied query bound."""

    numerator: float
    denominator: float
    sa_value: float
    worst_position: int
    epsilon: float
    query_lower_bound: float


def error_factor(eps: float) -> float:
    """The eps-error prefactor ``1 - 2*sqrt(eps*(1-eps))``."""
    if not 0.0 < eps < 0.5:
        raise AdversaryError(f"epsilon must be in (0, 1/2), got {eps}")
    return 1.0 - 2.0 * math.sqrt(eps * (1.0 - eps))


def hsos_labeling(m: int) -> SearchLabeling:
    """Canonical search labeling of hidden-symbol ordered search.

    (sigma, j) names the instance RT^(j-1) sigma LT^(m-j).  Built in closed
    form; ``detect_search_labeling(make_hsos(m))`` recovers the same
    labeling and is exercised in the tests.
    """
    p = make_hsos(m)
    answers = (Sym.UP, Sym.DN, Sym.ST)
    instance_of = {
        (sigma, j): bytes([Sym.RT] * (j - 1) + [sigma] + [Sym.LT] * (m - j))
        for sigma in answers
        for j in range(1, m + 1)
    }
    return SearchLabeling(problem=p, variants=m, answers=answers,
                          instance_of=instance_of)


def hilbert_tile(m: int) -> Tile:
    """Tile with exact entries 1/(|i-j|+1), over the HSOS_m labeling."""
    rows = [[Fraction(1, abs(i - j) + 1) for j in range(m)] for i in range(m)]
    mat = LabeledMatrix.from_rows(int_labels(m), rows, exact=True, name=f"A_{m}")
    return Tile(matrix=mat, labeling=hsos_labeling(m))


def tile_distinguisher(lab: SearchLabeling, i: int) -> LabeledMatrix:
    """m x m 0/1 matrix: entry (a, b) is 1 iff instances (sigma1, a) and
    (sigma2, b) differ at position i for every pair sigma1 != sigma2.

    Raises if the answer pairs disagree, which would mean ``lab`` is not a
    valid search labeling.
    """
    p = lab.problem
    if not 1 <= i <= p.length:
        raise AdversaryError(f"position {i} out of range 1..{p.length}")
    m = lab.variants
    chars = np.array(
        [[list(lab.instance_of[(sigma, j)]) for j in range(1, m + 1)]
         for sigma in lab.answers],
        dtype=np.uint8,
    )  # (|Sigma|, m, length)
    col = chars[:, :, i - 1]
    out = None
    for s1 in range(len(lab.answers)):
        for s2 in range(len(lab.answers)):
            if s1 == s2:
                continue
            diff = col[s1][:, None] != col[s2][None, :]
            if out is None:
                out = diff
            elif not np.array_equal(out, diff):
                a, b = map(int, np.argwhere(out != diff)[0])
                raise AdversaryError(
                    f"equality pattern at position {i} not well-defined for "
                    f"variants ({a + 1}, {b + 1})"
                )
    return LabeledMatrix(int_labels(m), out.astype(np.float64), name=f"D^A_{i}")


def interval_distinguisher(m: int, i: int) -> LabeledMatrix:
    """Closed form of the HSOS tile distinguisher: 1 iff i lies weakly
    between the two hidden-symbol positions.  Cross-checked against
    ``tile_distinguisher`` in the tests; used for large sweeps."""
    idx = np.arange(1, m + 1)
    between = (idx[:, None] <= i) & (i <= idx[None, :])
    ent = (between | between.T).astype(np.float64)
    return LabeledMatrix(int_labels(m), ent, name=f"D^A_{i}")


def uniform_from_tile(lab: SearchLabeling, t: Tile) -> AdversaryMatrix:
    """Expand a tile to the full uniform adversary matrix: entry
    ((sigma1, a), (sigma2, b)) is A[a, b] when sigma1 != sigma2, else 0."""
    if t.matrix.dim != lab.variants:
        raise AdversaryError("tile dimension does not match labeling variants")
    p = lab.problem
    pair_of = lab.pair_of
    var = np.array([pair_of[s][1] - 1 for s in p.instances])
    ans = [pair_of[s][0] for s in p.instances]
    same = np.array([[a1 == a2 for a2 in ans] for a1 in ans])
    ent = t.matrix.entries[np.ix_(var, var)].copy()
    ent[same] = Fraction(0) if t.matrix.is_exact else 0.0
    mat = LabeledMatrix(p.instances, ent, name=f"uniform({t.matrix.name})")
    return AdversaryMatrix(matrix=mat, problem=p)


def tile_of_uniform(g: AdversaryMatrix, lab: SearchLabeling) -> Tile:
    """Inverse of ``uniform_from_tile``; errors with a witness entry pair if
    ``g`` is not uniform with respect to ``lab``."""
    p = g.problem
    m = lab.variants
    idx = {s: r for r, s in enumerate(p.instances)}
    ent = g.matrix.entries
    zero = Fraction(0) if g.matrix.is_exact else 0.0
    tile = np.empty((m, m), dtype=ent.dtype)
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            val = None
            witness = None
            for s1 in lab.answers:
                for s2 in lab.answers:
                    r1, r2 = idx[lab.instance_of[(s1, a)]], idx[lab.instance_of[(s2, b)]]
                    e = ent[r1, r2]
                    if s1 == s2:
                        if e != zero:
                            raise AdversaryError(
                                f"nonzero same-answer entry at (({s1},{a}),({s2},{b}))"
                            )
                        continue
                    if val is None:
                        val, witness = e, (s1, a, s2, b)
                    elif e != val:
                        raise AdversaryError(
                            f"not uniform: entry (({s1},{a}),({s2},{b}))={e} "
                            f"differs from (({witness[0]},{witness[1]}),"
                            f"({witness[2]},{witness[3]}))={val}"
                        )
            tile[a - 1, b - 1] = val if val is not None else zero
    mat = LabeledMatrix(int_labels(m), tile, name="tile")
    return Tile(matrix=mat, labeling=lab)


def os_adversary(m: int) -> AdversaryMatrix:
    """Adversary matrix for ordered search: 1/(|x-y|+1) off the diagonal."""
    from .problems import make_os

    p = make_os(m)
    rows = [
        [Fraction(0) if x == y else Fraction(1, abs(x - y) + 1) for y in range(m)]
        for x in range(m)
    ]
    mat = LabeledMatrix.from_rows(p.instances, rows, exact=True, name=f"Gamma_OS_{m}")
    return AdversaryMatrix(matrix=mat, problem=p)


def _tile_block(t: Tile, tile_float: np.ndarray, cx: int, cy: int,
                tile_norm: float) -> np.ndarray:
    """Block of the composition for inner answer chars (cx, cy), rows/cols in
    the order the composition enumerates the preimages."""
    m = t.labeling.variants
    if cx == cy:
        return tile_norm * np.eye(m)
    g = t.labeling.problem
    pair_of = t.labeling.pair_of
    rows = [pair_of[s][1] - 1 for s in g.instances if g.answer[s] == Sym(cx)]
    cols = [pair_of[s][1] - 1 for s in g.instances if g.answer[s] == Sym(cy)]
    return tile_float[np.ix_(rows, cols)]


def compose_adversary(outer: AdversaryMatrix, tiles: Sequence[Tile]) -> AdversaryMatrix:
    """Tensor-structured adversary matrix for the block composition.

    Entry (x, y) is Gamma_f[xt, yt] times the product over blocks d of
    either A_d[j_d(x), j_d(y)] (when the outer characters differ at d) or
    ||A_d|| * [j_d(x) == j_d(y)] (when they agree).  Same-outer-answer rows
    are zero because Gamma_f vanishes there, so the result is a valid
    adversary matrix for the composition.
    """
    f = outer.problem
    if len(tiles) != f.length:
        raise AdversaryError(f"need {f.length} tiles, got {len(tiles)}")
    h = compose(f, [t.labeling.problem for t in tiles])
    gf = outer.matrix.to_float()
    tile_floats = [t.matrix.to_float() for t in tiles]
    tile_norms = [spectral_norm(t.matrix).norm for t in tiles]
    block_cache: list[dict] = [{} for _ in tiles]

    def block(d: int, cx: int, cy: int) -> np.ndarray:
        key = (cx, cy)
        if key not in block_cache[d]:
            block_cache[d][key] = _tile_block(
                tiles[d], tile_floats[d], cx, cy, tile_norms[d]
            )
        return block_cache[d][key]

    sizes = [t.labeling.variants for t in tiles]
    bs = math.prod(sizes)
    n_outer = f.size
    ent = np.zeros((n_outer * bs, n_outer * bs))
    for a, x in enumerate(f.instances):
        for b, y in enumerate(f.instances):
            if gf[a, b] == 0.0:
                continue
            k = block(0, x[0], y[0])
            for d in range(1, len(tiles)):
                k = np.kron(k, block(d, x[d], y[d]))
            ent[a * bs:(a + 1) * bs, b * bs:(b + 1) * bs] = gf[a, b] * k
    mat = LabeledMatrix(h.instances, ent, name="Gamma_h")
    return AdversaryMatrix(matrix=mat, problem=h)


def composed_principal_vector(outer: AdversaryMatrix, tiles: Sequence[Tile],
                              composed: ComposedProblem,
                              tol: float = 1e-9) -> np.ndarray:
    """Eigenvector of the composed matrix built from the factors' principal
    eigenvectors: component at x is delta_f[xt] * prod_d delta_d[j_d(x)]."""
    df = spectral_norm(outer.matrix, tol).eigenvector
    dts = [spectral_norm(t.matrix, tol).eigenvector for t in tiles]
    f_index = {s: r for r, s in enumerate(outer.problem.instances)}
    labs = [t.labeling for t in tiles]
    pair_maps = [lab.pair_of for lab in labs]
    out = np.empty(composed.size)
    for r, s in enumerate(composed.instances):
        v = df[f_index[composed.tilde[s]]]
        for d, blk in enumerate(composed.blocks(s)):
            v *= dts[d][pair_maps[d][blk][1] - 1]
        out[r] = v
    return out


def _masked_norm(arr: np.ndarray, mask: np.ndarray, tol: float,
                 name: str) -> float:
    return power_norm(arr * mask, tol=tol, name=name).norm


def sa_ratio(g: AdversaryMatrix, eps: float = 1.0 / 3.0,
             tol: float = 1e-9) -> BoundReport:
    """Evaluate ||Gamma|| / max_i ||Gamma o D_i|| for this candidate and the
    implied eps-error quantum query lower bound."""
    factor = error_factor(eps)
    numerator = spectral_norm(g.matrix, tol).norm
    arr = g.matrix.to_float()
    chars = g.problem.char_table()
    denominator = 0.0
    worst = 0
    for i in range(1, g.problem.length + 1):
        col = chars[:, i - 1]
        mask = col[:, None] != col[None, :]
        nrm = _masked_norm(arr, mask, tol, name=f"Gamma∘D_{i}")
        if nrm > denominator:
            denominator, worst = nrm, i
    if denominator == 0.0:
        raise AdversaryError(
            "all distinguisher products vanish: instances with different "
            "answers are indistinguishable"
        )
    sa = numerator / denominator
    return BoundReport(
        numerator=numerator,
        denominator=denominator,
        sa_value=sa,
        worst_position=worst,
        epsilon=eps,
        query_lower_bound=factor * sa,
    )


def symmetrize(g: AdversaryMatrix, lab: SearchLabeling,
               tol: float = 1e-9, zero_threshold: float = 1e-12) -> AdversaryMatrix:
    """Average ``g`` over all permutations of the answer alphabet.

    Implements the elementwise average of row/column-permuted copies of
    Gamma, weighted by the correspondingly permuted principal eigenvector
    and normalized by the per-instance weight beta.  Because the group is
    all |Sigma|! permutations, the sum collapses to a sum over ordered
    answer pairs with a common factorial factor, which we use directly: the
    output is then uniform *exactly*, not merely up to rounding.

    Variants where the eigenvector is below ``zero_threshold`` for every
    answer are dropped first (they contribute nothing to the ratio); a
    warning is logged when that happens.  The answer alphabet is capped at 6
    symbols.
    """
    sig = lab.answers
    k = len(sig)
    if k > 6:
        raise AdversaryError(f"answer alphabet of size {k} > 6 not supported")
    p = g.problem
    m = lab.variants
    garr = g.matrix.to_float()
    res = spectral_norm(g.matrix, tol)
    delta = np.maximum(res.eigenvector, 0.0)
    if res.norm > 0:
        # A zero row forces a zero eigenvector entry exactly (lam*d[x] = 0),
        # so snap those before thresholding.
        delta[~(garr != 0.0).any(axis=1)] = 0.0
    idx = {s: r for r, s in enumerate(p.instances)}
    dmat = np.array(
        [[delta[idx[lab.instance_of[(sigma, j)]]] for j in range(1, m + 1)]
         for sigma in sig]
    )  # (k, m)
    keep = [j for j in range(1, m + 1) if (dmat[:, j - 1] >= zero_threshold).any()]
    if len(keep) < m:
        logger.warning(
            "symmetrize: dropping %d variant(s) with vanishing eigenvector: %s",
            m - len(keep), [j for j in range(1, m + 1) if j not in keep],
        )
        lab = restrict_labeling(lab, keep)
        dmat = dmat[:, [j - 1 for j in keep]]
        p = lab.problem
        m = lab.variants
    if k == 1:
        tile = LabeledMatrix(int_labels(m), np.zeros((m, m)), name="tile")
        return uniform_from_tile(lab, Tile(matrix=tile, labeling=lab))
    order = [idx[lab.instance_of[(sigma, j)]] for sigma in sig for j in range(1, m + 1)]
    P = garr[np.ix_(order, order)].reshape(k, m, k, m)
    full = np.einsum("iajb,ia,jb->ab", P, dmat, dmat)
    same = np.einsum("iaib,ia,ib->ab", P, dmat, dmat)  # exactly zero for a valid g
    wsq = (dmat ** 2).sum(axis=0)
    # (k-2)!/( (k-1)! sqrt(wsq_a wsq_b) ) = 1/((k-1) sqrt(wsq_a wsq_b))
    denom = (k - 1) * np.sqrt(wsq[:, None] * wsq[None, :])
    tile_entries = (full - same) / denom
    tile_entries = 0.5 * (tile_entries + tile_entries.T)
    tile = LabeledMatrix(int_labels(m), tile_entries, name="symmetrized tile")
    return uniform_from_tile(lab, Tile(matrix=tile, labeling=lab))


# ---------------------------------------------------------------------------
# Exact elementwise form of the denominator identity.
#
# Hadamard-multiplying the composed matrix by the position-i distinguisher
# equals, entry by entry, the composed matrix generated by (Gamma_f o D_p),
# the unchanged tiles, and (A_p o D_q) in block p.  Both sides involve the
# spectral-norm scalars ||A_d|| and ||A_p o D_q|| on their diagonal blocks;
# we keep those as opaque tokens so the comparison stays in exact rational
# arithmetic.
# ---------------------------------------------------------------------------


def _formal_product(coef: Fraction, tokens: tuple) -> tuple:
    return (coef, tuple(sorted(tokens)))


def denominator_identity_mismatches(outer: AdversaryMatrix, tiles: Sequence[Tile],
                                    position: int, limit: int = 3) -> list[str]:
    """Entries where the exact elementwise identity fails (empty if none).

    Requires an exact outer matrix and exact tiles.  Norm scalars are
    treated as formal tokens, so a reported mismatch is a genuine
    counterexample, not a rounding artifact.
    """
    if not outer.matrix.is_exact or any(not t.matrix.is_exact for t in tiles):
        raise AdversaryError("exact (rational) outer matrix and tiles required")
    f = outer.problem
    h = compose(f, [t.labeling.problem for t in tiles])
    p_blk, q = h.block_of_position(position)
    labs = [t.labeling for t in tiles]
    f_index = {s: r for r, s in enumerate(f.instances)}
    dq = tile_distinguisher(labs[p_blk - 1], q)

    infos = []
    for s in h.instances:
        xt = h.tilde[s]
        blocks = h.blocks(s)
        jvec = tuple(labs[d].pair_of[blocks[d]][1] for d in range(len(tiles)))
        infos.append((s[position - 1], f_index[xt], xt, jvec))

    gf = outer.matrix.entries
    tiles_exact = [t.matrix.entries for t in tiles]
    mismatches = []
    for xi, (cx, fx, xt, jx) in enumerate(infos):
        for yi, (cy, fy, yt, jy) in enumerate(infos):
            gfe = gf[fx, fy]
            # left side: (Gamma_h o D^h_i)[x, y]
            lcoef = gfe * (1 if cx != cy else 0)
            ltokens = []
            # right side: composition generated by Gamma_f o D^f_p etc.
            rcoef = gfe * (1 if xt[p_blk - 1] != yt[p_blk - 1] else 0)
            rtokens = []
            for d in range(len(tiles)):
                ax, ay = xt[d], yt[d]
                if d == p_blk - 1:
                    if ax == ay:
                        rcoef *= 1 if jx[d] == jy[d] else 0
                        rtokens.append(("|ApDq|", p_blk, q))
                    else:
                        rcoef *= tiles_exact[d][jx[d] - 1, jy[d] - 1] * Fraction(
                            int(dq.entries[jx[d] - 1, jy[d] - 1])
                        )
                else:
                    if ax == ay:
                        rcoef *= 1 if jx[d] == jy[d] else 0
                        rtokens.append(("|A|", d + 1))
                    else:
                        rcoef *= tiles_exact[d][jx[d] - 1, jy[d] - 1]
                if ax == ay:
                    lcoef *= 1 if jx[d] == jy[d] else 0
                    ltokens.append(("|A|", d + 1))
                else:
                    lcoef *= tiles_exact[d][jx[d] - 1, jy[d] - 1]
            left = _formal_product(lcoef, ltokens)
            right = _formal_product(rcoef, rtokens)
            if left[0] == 0 and right[0] == 0:
                continue
            if left != right:
                mismatches.append(
                    f"position {position}, pair ({xi},{yi}): {left} != {right}"
                )
                if len(mismatches) >= limit:
                    return mismatches
    return mismatches
