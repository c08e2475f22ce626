"""Assembly of the Khovanov cochain complex and bigraded homology.

The homological degree of a state s is h(s) = l(s) - n_minus.  The
quantum grading of a generator is p + n_plus - n_minus + theta, which the
differential preserves, so homology is computed per (p, q) block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from .algebra import GF2, Generator, phi
from .cube import EdgeDescriptor, classify_saddle, edge_sign, transfer_labels
from .diagram import TangleDiagram, resolve, validate


class ComplexError(ValueError):
    pass


@dataclass
class GradedChainComplex:
    diagram: TangleDiagram
    functor: str
    field: object
    n_plus: int
    n_minus: int
    basis: dict          # p -> list[Generator]
    index: dict          # (state, labels) -> (p, i)
    differentials: dict  # p -> list of column dicts into basis[p+1] indices
    resolutions: dict    # state -> Resolution

    @property
    def degrees(self):
        return sorted(self.basis)

    def dim(self, p):
        return len(self.basis.get(p, ()))

    def total_dim(self):
        return sum(len(b) for b in self.basis.values())

    def q_of(self, p, i):
        return phi(self.basis[p][i].labels, p, self.n_plus, self.n_minus)

    def q_blocks(self, p):
        """Generator indices at degree p grouped by quantum grading."""
        out = {}
        for i in range(self.dim(p)):
            out.setdefault(self.q_of(p, i), []).append(i)
        return out

    def differential_column(self, p, i):
        cols = self.differentials.get(p)
        return cols[i] if cols is not None else {}


def _labelings(resolution):
    choices = [("w",) if c.kind == "arc" else ("+", "-")
               for c in resolution.components]
    return itertools.product(*choices)


def build_complex(d: TangleDiagram, functor="G", field=GF2,
                  sign_flip=None) -> GradedChainComplex:
    """Assemble the cochain complex of ``d`` under the given functor.

    ``sign_flip`` optionally names one edge ``(state, star)`` whose sign is
    negated; it exists purely as a corruption hook for self-tests.
    """
    rep = validate(d)
    if not rep.ok:
        raise ComplexError("invalid diagram: " + "; ".join(rep.problems))
    if functor == "F" and d.boundary:
        raise ComplexError("functor F requires an empty boundary")
    if functor not in ("F", "G"):
        raise ComplexError(f"unknown functor {functor!r}")

    n, n_plus, n_minus = d.n, d.n_plus, d.n_minus
    resolutions = {}
    basis = {}
    index = {}
    state_span = {}
    for state in itertools.product((0, 1), repeat=n):
        res = resolve(d, state)
        resolutions[state] = res
        p = sum(state) - n_minus
        bucket = basis.setdefault(p, [])
        start = len(bucket)
        for labels in _labelings(res):
            index[(state, labels)] = (p, len(bucket))
            bucket.append(Generator(state=state, labels=labels))
        state_span[state] = (p, start, len(bucket) - start)

    one = field.one
    neg_one = field.neg(one)
    differentials = {p: [dict() for _ in gens] for p, gens in basis.items()}

    for state in resolutions:
        res_s = resolutions[state]
        p = sum(state) - n_minus
        cols = differentials[p]
        for star in range(n):
            if state[star]:
                continue
            e = EdgeDescriptor(source=state, star=star)
            tgt_state = e.target
            res_t = resolutions[tgt_state]
            cls = classify_saddle(res_s, res_t, e, d)
            sgn = edge_sign(e)
            if sign_flip == (state, star):
                sgn = -sgn
            coeff = one if sgn > 0 else neg_one

            _, start, count = state_span[state]
            for gen_idx in range(start, start + count):
                gen = basis[p][gen_idx]
                col = cols[gen_idx]
                for out2 in transfer_labels(cls, res_s, res_t, gen.labels):
                    _, ti = index[(tgt_state, out2)]
                    val = field.add(col.get(ti, field.zero), coeff)
                    if val == field.zero:
                        col.pop(ti, None)
                    else:
                        col[ti] = val

    return GradedChainComplex(
        diagram=d, functor=functor, field=field,
        n_plus=n_plus, n_minus=n_minus,
        basis=basis, index=index,
        differentials=differentials, resolutions=resolutions)


def verify_d_squared(c: GradedChainComplex):
    """Check d(p+1) . d(p) = 0; returns (ok, first violating (p, column))."""
    f = c.field
    for p in c.degrees:
        nxt = c.differentials.get(p + 1)
        if nxt is None:
            continue
        for i, col in enumerate(c.differentials[p]):
            acc = {}
            for j, coeff in col.items():
                linalg.add_into(acc, nxt[j], coeff, f)
            if acc:
                return False, (p, i)
    return True, None


def verify_phi_homogeneous(c: GradedChainComplex):
    """Every differential entry must preserve the quantum grading."""
    for p in c.degrees:
        for i, col in enumerate(c.differentials[p]):
            q = c.q_of(p, i)
            for j in col:
                if c.q_of(p + 1, j) != q:
                    return False, (p, i, j)
    return True, None


@dataclass
class BigradedHomology:
    field: object
    n_plus: int
    n_minus: int
    ranks: dict            # (p, q) -> rank
    representatives: dict  # (p, q) -> list of chain vectors at degree p
    complex: GradedChainComplex = dc_field(repr=False, default=None)

    def rank(self, p, q):
        return self.ranks.get((p, q), 0)

    def total_rank(self, p):
        return sum(r for (pp, _), r in self.ranks.items() if pp == p)

    @property
    def degrees(self):
        return sorted({p for (p, _) in self.ranks})

    def to_json(self):
        return {
            "field": self.field.name,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "ranks": [{"p": p, "q": q, "rank": r}
                      for (p, q), r in sorted(self.ranks.items())],
        }


def _block_columns(c, p, q_blocks_p, q_blocks_next, q):
    """Columns of d^p restricted to the q block, in local row indices."""
    rows = {g: k for k, g in enumerate(q_blocks_next.get(q, ()))}
    cols = []
    for i in q_blocks_p.get(q, ()):
        col = c.differential_column(p, i)
        cols.append({rows[j]: v for j, v in col.items()})
    return cols, rows


def homology(c: GradedChainComplex, representatives=True) -> BigradedHomology:
    """Bigraded homology ranks with reduced kernel representatives."""
    f = c.field
    use_bits = (f == GF2)
    ranks = {}
    reps = {}

    blocks = {p: c.q_blocks(p) for p in c.degrees}
    for p in c.degrees:
        qb = blocks[p]
        qb_next = blocks.get(p + 1, {})
        qb_prev = blocks.get(p - 1, {})
        for q, gens in qb.items():
            cols, _ = _block_columns(c, p, qb, qb_next, q)
            # image of the previous differential, in degree-p global indices
            img = []
            for i in qb_prev.get(q, ()):
                col = c.differential_column(p - 1, i)
                if col:
                    img.append(col)

            if use_bits:
                # augmented elimination: aug bit j marks block column j,
                # which is also the j-th block generator
                kernel = []
                pivots = {}
                for jidx, col in enumerate(cols):
                    v = linalg.pack(col)
                    aug = 1 << jidx
                    while v:
                        hit = pivots.get(v & -v)
                        if hit is None:
                            break
                        v ^= hit[0]
                        aug ^= hit[1]
                    if v:
                        pivots[v & -v] = (v, aug)
                    else:
                        kernel.append(aug)
                img_red = linalg.ColumnReducer2()
                local = {g: k for k, g in enumerate(gens)}
                for col in img:
                    img_red.add(linalg.pack({local[j]: 1 for j in col}))
                block_reps = []
                for aug in kernel:
                    res = img_red.add(aug)
                    if res:
                        block_reps.append(
                            {gens[k]: f.one
                             for k in linalg.unpack(res, f)})
                h = len(block_reps)
            else:
                kernel = linalg.kernel_basis(cols, f)
                img_red = linalg.ColumnReducer(f)
                for col in img:
                    img_red.add(col)
                block_reps = []
                for kvec in kernel:
                    chain = {}
                    for jidx, coeff in kvec.items():
                        g = gens[jidx]
                        chain[g] = f.add(chain.get(g, f.zero), coeff)
                    chain = {k: v for k, v in chain.items() if v != f.zero}
                    res, _ = img_red.add(chain)
                    if res:
                        block_reps.append(res)
                h = len(block_reps)

            if h:
                ranks[(p, q)] = h
                if representatives:
                    reps[(p, q)] = block_reps

    return BigradedHomology(field=f, n_plus=c.n_plus, n_minus=c.n_minus,
                            ranks=ranks, representatives=reps, complex=c)
