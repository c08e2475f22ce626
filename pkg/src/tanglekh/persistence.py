"""Chain maps along filtrations of tangles and persistent homology.

Closure morphisms (from 1-input planar operations) induce the monomial
chain map: arcs that stay arcs keep w, circles keep their label, arcs
that close up send w to v-, and every brand-new circle is filled with v+.
Cap, cup, and saddle generator maps are provided for the link case, the
saddle both as the direct state-wise map and as the projection out of the
mapping-cone complex of the added crossing.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import LaurentPolynomial
from .complex import BigradedHomology, GradedChainComplex, build_complex
from .cube import classify_nodes, transfer_labels
from .diagram import Crossing, TangleDiagram


class MorphismError(ValueError):
    """A filtration step outside the constructible class of chain maps."""


@dataclass(frozen=True)
class ClosureMorphismSpec:
    """Combinatorial description of a closure morphism T -> D(T).

    ``arc_images`` has one entry per portless arc of the source (canonical
    order): ("arc", i) for the i-th portless arc of the target,
    ("circle", i) for the i-th free circle, or ("port", label) when the
    arc was spliced into a strand through crossings (a component merge;
    no chain map exists for those).  ``circle_images`` maps source free
    circles to target free-circle indices.
    """

    source: TangleDiagram
    target: TangleDiagram
    arc_images: tuple
    circle_images: tuple

    @classmethod
    def identity(cls, d: TangleDiagram):
        return cls(source=d, target=d,
                   arc_images=tuple(("arc", i)
                                    for i in range(len(d.portless_arcs()))),
                   circle_images=tuple(range(d.free_circles)))

    def validate(self):
        s, t = self.source, self.target
        if s.crossings != t.crossings:
            raise MorphismError(
                "closure morphism requires identical crossing sets")
        if len(self.arc_images) != len(s.portless_arcs()):
            raise MorphismError("arc_images length mismatch")
        if len(self.circle_images) != s.free_circles:
            raise MorphismError("circle_images length mismatch")
        for img in self.arc_images:
            if img[0] == "port":
                raise MorphismError(
                    f"source arc merges into strand at {img[1]}: "
                    "no induced chain map is defined")
            if img[0] == "circle" and not 0 <= img[1] < t.free_circles:
                raise MorphismError(f"free circle index {img[1]} out of range")
            if img[0] == "arc" and not 0 <= img[1] < len(t.portless_arcs()):
                raise MorphismError(f"portless arc index {img[1]} out of range")
        for i in self.circle_images:
            if not 0 <= i < t.free_circles:
                raise MorphismError(f"free circle index {i} out of range")
        images = list(self.arc_images)
        images += [("circle", i) for i in self.circle_images]
        if len(set(images)) != len(images):
            raise MorphismError(
                "two source components share an image: merge cobordisms "
                "carry no induced chain map")


@dataclass
class ChainMap:
    src: GradedChainComplex
    dst: GradedChainComplex
    columns: dict   # p -> list of column dicts into dst basis[p] indices
    q_shift: int

    def apply(self, p, vec):
        cols = self.columns.get(p)
        if cols is None:
            return {}
        return linalg.matvec(cols, vec, self.src.field)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """The composite g after f."""
    if g.src is not f.dst and g.src.diagram != f.dst.diagram:
        raise MorphismError("chain maps are not composable")
    field = f.src.field
    columns = {}
    for p, cols in f.columns.items():
        gcols = g.columns.get(p)
        if gcols is None:
            columns[p] = [dict() for _ in cols]
        else:
            columns[p] = linalg.matmul(gcols, cols, field)
    return ChainMap(src=f.src, dst=g.dst, columns=columns,
                    q_shift=f.q_shift + g.q_shift)


def verify_chain_map(f: ChainMap):
    """Check d_dst . f = f . d_src degreewise; returns (ok, witness)."""
    fld = f.src.field
    for p in f.src.degrees:
        cols = f.columns.get(p, [])
        for i in range(f.src.dim(p)):
            lhs = f.apply(p + 1, f.src.differential_column(p, i))
            rhs = {}
            if i < len(cols):
                for j, c in cols[i].items():
                    linalg.add_into(rhs, f.dst.differential_column(p, j),
                                    c, fld)
            if lhs != rhs:
                return False, (p, i)
    return True, None


def compose_specs(g: ClosureMorphismSpec,
                  f: ClosureMorphismSpec) -> ClosureMorphismSpec:
    """The combinatorial composite of two closure morphisms (g after f)."""
    if f.target != g.source:
        raise MorphismError("closure specs are not composable")
    arc_images = []
    for img in f.arc_images:
        if img[0] == "arc":
            arc_images.append(g.arc_images[img[1]])
        elif img[0] == "circle":
            arc_images.append(("circle", g.circle_images[img[1]]))
        else:
            arc_images.append(img)
    return ClosureMorphismSpec(
        source=f.source, target=g.target,
        arc_images=tuple(arc_images),
        circle_images=tuple(g.circle_images[k] for k in f.circle_images))


# -- closure morphisms ---------------------------------------------------


def _portless_arc_lookup(d: TangleDiagram, res):
    """Component index of each portless arc, by canonical arc order."""
    eps = {frozenset(pair): i for i, pair in enumerate(d.portless_arcs())}
    out = {}
    for ci, comp in enumerate(res.components):
        if comp.kind == "arc" and not any(
                d.is_port(x) for x in comp.ports):
            out[eps[frozenset(comp.endpoints)]] = ci
    return out


def build_psi(src: GradedChainComplex, dst: GradedChainComplex,
              spec: ClosureMorphismSpec) -> ChainMap:
    """The induced chain map of a closure morphism."""
    if src.field != dst.field:
        raise MorphismError("complexes over different fields")
    if src.functor != "G" or dst.functor != "G":
        raise MorphismError("closure maps require the arc-aware functor")
    if spec.source != src.diagram or spec.target != dst.diagram:
        raise MorphismError("spec does not match the given complexes")
    spec.validate()

    field = src.field
    one = field.one
    columns = {p: [dict() for _ in gens] for p, gens in src.basis.items()}
    q_shift = None

    for state, res_s in src.resolutions.items():
        res_t = dst.resolutions[state]
        node_to_tgt = {}
        for j, comp in enumerate(res_t.components):
            for x in comp.ports:
                node_to_tgt[x] = j

        src_free = res_s.free_circle_indices
        tgt_free = res_t.free_circle_indices
        src_arcs = _portless_arc_lookup(spec.source, res_s)
        tgt_arcs = _portless_arc_lookup(spec.target, res_t)

        mapping = {}
        for i, comp in enumerate(res_s.components):
            ports = [x for x in comp.ports if spec.source.is_port(x)]
            if ports:
                mapping[i] = node_to_tgt[ports[0]]
            elif comp.kind == "arc":
                ai = next(k for k, ci in src_arcs.items() if ci == i)
                img = spec.arc_images[ai]
                if img[0] == "arc":
                    mapping[i] = tgt_arcs[img[1]]
                else:  # ("circle", k)
                    mapping[i] = tgt_free[img[1]]
            else:
                k = src_free.index(i)
                mapping[i] = tgt_free[spec.circle_images[k]]

        images = list(mapping.values())
        if len(set(images)) != len(images):
            raise MorphismError(
                f"components merge in state {state}: no chain map exists")
        for i, j in mapping.items():
            if (res_s.components[i].kind == "circle"
                    and res_t.components[j].kind == "arc"):
                raise MorphismError(
                    f"circle maps to arc in state {state}")

        new = [j for j in range(len(res_t.components)) if j not in images]
        shift = sum(1 if res_t.components[j].kind == "circle" else -1
                    for j in new)
        if q_shift is None:
            q_shift = shift
        elif q_shift != shift:
            raise MorphismError("quantum shift varies across states")

        p, start, count = _span(src, state)
        for gi in range(start, start + count):
            gen = src.basis[p][gi]
            out = [None] * len(res_t.components)
            for j in new:
                out[j] = "+" if res_t.components[j].kind == "circle" else "w"
            for i, j in mapping.items():
                sym = gen.labels[i]
                if (res_s.components[i].kind == "arc"
                        and res_t.components[j].kind == "circle"):
                    sym = "-"
                out[j] = sym
            _, ti = dst.index[(state, tuple(out))]
            columns[p][gi][ti] = one

    return ChainMap(src=src, dst=dst, columns=columns,
                    q_shift=0 if q_shift is None else q_shift)


def _span(c: GradedChainComplex, state):
    """(p, start, count) of the generators living over one state."""
    p = sum(state) - c.n_minus
    gens = c.basis[p]
    start = None
    count = 0
    for i, g in enumerate(gens):
        if g.state == state:
            if start is None:
                start = i
            count += 1
        elif start is not None:
            break
    return p, 0 if start is None else start, count


# -- cobordism generator maps (link mode) --------------------------------


def cap_map(c: GradedChainComplex):
    """x -> x (x) v+ into the complex of the diagram plus one circle."""
    if c.diagram.boundary:
        raise MorphismError("cap map is defined in link mode only")
    d2 = TangleDiagram(boundary=(), crossings=c.diagram.crossings,
                       connections=c.diagram.connections,
                       free_circles=c.diagram.free_circles + 1)
    dst = build_complex(d2, functor=c.functor, field=c.field)
    one = c.field.one
    columns = {}
    for p, gens in c.basis.items():
        cols = []
        for g in gens:
            _, ti = dst.index[(g.state, g.labels + ("+",))]
            cols.append({ti: one})
        columns[p] = cols
    return ChainMap(src=c, dst=dst, columns=columns, q_shift=1)


def cup_map(c: GradedChainComplex, circle_index=-1):
    """x (x) v+ -> 0, x (x) v- -> x, deleting one crossing-free circle."""
    if c.diagram.free_circles < 1:
        raise MorphismError("cup map needs a crossing-free circle")
    circle_index = range(c.diagram.free_circles)[circle_index]
    d2 = TangleDiagram(boundary=c.diagram.boundary,
                       crossings=c.diagram.crossings,
                       connections=c.diagram.connections,
                       free_circles=c.diagram.free_circles - 1)
    dst = build_complex(d2, functor=c.functor, field=c.field)
    one = c.field.one
    columns = {}
    for p, gens in c.basis.items():
        cols = []
        for g in gens:
            res = c.resolutions[g.state]
            pos = res.free_circle_indices[circle_index]
            if g.labels[pos] == "+":
                cols.append({})
            else:
                labels = g.labels[:pos] + g.labels[pos + 1:]
                _, ti = dst.index[(g.state, labels)]
                cols.append({ti: one})
        columns[p] = cols
    return ChainMap(src=c, dst=dst, columns=columns, q_shift=1)


def saddle_target_diagram(d: TangleDiagram, site):
    """The diagram after re-pairing the four strand nodes of ``site``.

    ``site`` is ``((a, b), (c, d))``: the connections (a,b) and (c,d) are
    replaced by (a,c) and (b,d).
    """
    (a, b), (cc, dd) = site
    pairs = {frozenset(p) for p in d.connections}
    for pair in ((a, b), (cc, dd)):
        if frozenset(pair) not in pairs:
            raise MorphismError(f"site pair {pair} is not a connection")
    pairs -= {frozenset((a, b)), frozenset((cc, dd))}
    pairs |= {frozenset((a, cc)), frozenset((b, dd))}
    return TangleDiagram(boundary=d.boundary, crossings=d.crossings,
                         connections=[tuple(p) for p in pairs],
                         free_circles=d.free_circles)


def saddle_map(src: GradedChainComplex, dst: GradedChainComplex, site,
               construction="direct") -> ChainMap:
    """The chain map of a saddle cobordism between ``src`` and ``dst``.

    The direct construction applies the local merge/split at the site in
    every state; the cone construction realizes the map as the projection
    p1 of the differential of the complex with one extra crossing at the
    site.  Both must agree.
    """
    (a, b), (cc, dd) = site
    if saddle_target_diagram(src.diagram, site) != dst.diagram:
        raise MorphismError(
            "diagrams do not differ by the given site re-pairing")
    if construction == "cone":
        return _saddle_cone(src, dst, site)

    field = src.field
    one = field.one
    nodes = (a, b, cc, dd)
    columns = {p: [dict() for _ in gens] for p, gens in src.basis.items()}
    for state, res_s in src.resolutions.items():
        res_t = dst.resolutions[state]
        cls = classify_nodes(res_s, res_t, nodes)
        p, start, count = _span(src, state)
        for gi in range(start, start + count):
            gen = src.basis[p][gi]
            for out in transfer_labels(cls, res_s, res_t, gen.labels):
                _, ti = dst.index[(state, out)]
                columns[p][gi][ti] = one
    return ChainMap(src=src, dst=dst, columns=columns, q_shift=-1)


def _saddle_cone(src: GradedChainComplex, dst: GradedChainComplex, site):
    """p1 after the cone differential, built from the extra-crossing
    complex whose 0-smoothing restores the source pairing."""
    (a, b), (cc, dd) = site
    d = src.diagram
    new_id = (min(c.id for c in d.crossings) - 1) if d.crossings else 0
    xp = tuple(("cone", new_id, k) for k in range(4))
    pairs = [p for p in d.connections
             if frozenset(p) not in (frozenset((a, b)), frozenset((cc, dd)))]
    # 0-smoothing joins (x0,x3),(x1,x2): a-b and c-d; 1-smoothing joins
    # (x0,x1),(x2,x3): a-c and b-d
    pairs += [(a, xp[0]), (cc, xp[1]), (dd, xp[2]), (b, xp[3])]
    tilde = TangleDiagram(
        boundary=d.boundary,
        crossings=d.crossings + (Crossing(id=new_id, ports=xp, sign=-1),),
        connections=pairs, free_circles=d.free_circles)
    ct = build_complex(tilde, functor=src.functor, field=src.field)

    def correspondence(res_from, res_to, labels_from):
        """Transport labels between resolutions sharing strand nodes."""
        out = [None] * len(res_to.components)
        free_from = res_from.free_circle_indices
        free_to = res_to.free_circle_indices
        node_to = {}
        for j, comp in enumerate(res_to.components):
            for x in comp.ports:
                node_to[x] = j
        for i, comp in enumerate(res_from.components):
            shared = [x for x in comp.ports if x in node_to]
            if shared:
                out[node_to[shared[0]]] = labels_from[i]
            else:
                out[free_to[free_from.index(i)]] = labels_from[i]
        return tuple(out)

    field = src.field
    columns = {p: [dict() for _ in gens] for p, gens in src.basis.items()}
    for state, res_s in src.resolutions.items():
        # new crossing has the smallest id, so it is the first state bit
        tstate = (0,) + state
        res_tilde = ct.resolutions[tstate]
        p, start, count = _span(src, state)
        for gi in range(start, start + count):
            gen = src.basis[p][gi]
            tlabels = correspondence(res_s, res_tilde, gen.labels)
            tp, ti = ct.index[(tstate, tlabels)]
            col = ct.differential_column(tp, ti)
            for j, coeff in col.items():
                tgt = ct.basis[tp + 1][j]
                if tgt.state[0] != 1:
                    continue
                dstate = tgt.state[1:]
                dlabels = correspondence(ct.resolutions[tgt.state],
                                         dst.resolutions[dstate],
                                         tgt.labels)
                _, di = dst.index[(dstate, dlabels)]
                prev = columns[p][gi].get(di, field.zero)
                val = field.add(prev, coeff)
                if val == field.zero:
                    columns[p][gi].pop(di, None)
                else:
                    columns[p][gi][di] = val
    return ChainMap(src=src, dst=dst, columns=columns, q_shift=-1)


# -- induced maps on homology and the rank invariant ---------------------


def rep_order(h: BigradedHomology, p):
    """Deterministic ordering of homology representatives at degree p."""
    out = []
    for (pp, q) in sorted(h.ranks):
        if pp != p:
            continue
        for j in range(h.ranks[(pp, q)]):
            out.append((q, j))
    return out


def induced_on_homology(f: ChainMap, h_src: BigradedHomology,
                        h_dst: BigradedHomology):
    """Matrices of the induced map per homological degree.

    Columns follow ``rep_order(h_src, p)``, rows ``rep_order(h_dst, p)``.
    """
    field = f.src.field
    out = {}
    degrees = sorted(set(h_src.degrees) | set(h_dst.degrees))
    for p in degrees:
        dst_order = rep_order(h_dst, p)
        solver = linalg.ColumnReducer(field, track=True)
        n_img = 0
        prev = f.dst.differentials.get(p - 1, [])
        for col in prev:
            if col:
                solver.add(col)
                n_img += 1
        rep_pos = {}
        for k, (q, j) in enumerate(dst_order):
            solver.add(h_dst.representatives[(p, q)][j])
            rep_pos[n_img + k] = k

        cols = []
        for (q, j) in rep_order(h_src, p):
            z = h_src.representatives[(p, q)][j]
            fz = f.apply(p, z)
            residual, coords = solver.reduce(fz)
            if residual:
                raise MorphismError(
                    f"image of a cocycle is not a cocycle at p={p}")
            col = {}
            for idx, c in coords.items():
                k = rep_pos.get(idx)
                if k is not None and c != field.zero:
                    col[k] = c
            cols.append(col)
        out[p] = cols
    return out


@dataclass
class RankTable:
    p: int
    size: int
    dims: list            # dims[i] = dim H^p(i)
    r: dict               # (i, j) -> rank of composite, i <= j

    def rank(self, i, j):
        if i < 0 or j < 0 or i > j:
            return 0
        return self.r[(i, j)]


@dataclass
class Bar:
    birth: int
    death: object  # index or None for an infinite bar
    multiplicity: int


def barcode_from_ranks(rt: RankTable):
    """Interval multiplicities of a one-directional persistence module."""
    bars = []
    n = rt.size
    for i in range(n):
        for j in range(i + 1, n):
            mu = (rt.rank(i, j - 1) - rt.rank(i - 1, j - 1)) \
                - (rt.rank(i, j) - rt.rank(i - 1, j))
            if mu < 0:
                raise ArithmeticError(
                    f"negative multiplicity at [{i},{j}): rank table invalid")
            if mu:
                bars.append(Bar(birth=i, death=j, multiplicity=mu))
        mu_inf = rt.rank(i, n - 1) - rt.rank(i - 1, n - 1)
        if mu_inf < 0:
            raise ArithmeticError("negative infinite-bar multiplicity")
        if mu_inf:
            bars.append(Bar(birth=i, death=None, multiplicity=mu_inf))
    return bars


class FiltrationRun:
    """A maximal stretch of a filtration with composable chain maps."""

    def __init__(self, grades, complexes, chain_maps, homologies):
        self.grades = list(grades)
        self.complexes = list(complexes)
        self.chain_maps = list(chain_maps)
        self.homologies = list(homologies)
        self._induced = {}

    @property
    def size(self):
        return len(self.complexes)

    def degrees(self):
        out = set()
        for h in self.homologies:
            out.update(h.degrees)
        return sorted(out)

    def induced(self, i, p):
        key = (i, p)
        if key not in self._induced:
            mats = induced_on_homology(self.chain_maps[i],
                                       self.homologies[i],
                                       self.homologies[i + 1])
            for pp, cols in mats.items():
                self._induced[(i, pp)] = cols
            self._induced.setdefault(key, [])
        return self._induced[key]

    def rank_table(self, p) -> RankTable:
        field = self.complexes[0].field
        n = self.size
        dims = [len(rep_order(h, p)) for h in self.homologies]
        r = {}
        for i in range(n):
            r[(i, i)] = dims[i]
            comp = None
            for j in range(i, n - 1):
                step = self.induced(j, p)
                if comp is None:
                    comp = [dict(c) for c in step]
                else:
                    comp = linalg.matmul(step, comp, field)
                r[(i, j + 1)] = linalg.rank(comp, field)
        return RankTable(p=p, size=n, dims=dims, r=r)

    def q_shift_between(self, a, b):
        return sum(self.chain_maps[i].q_shift for i in range(a, b))

    def persistent_betti(self, a, b, p) -> LaurentPolynomial:
        """Graded rank of im(H^p(a) -> H^p(b)) in target quantum degrees."""
        field = self.complexes[0].field
        order = rep_order(self.homologies[a], p)
        if a == b:
            h = self.homologies[a]
            return LaurentPolynomial(
                {q: r for (pp, q), r in h.ranks.items() if pp == p})
        comp = None
        for i in range(a, b):
            step = self.induced(i, p)
            comp = [dict(c) for c in step] if comp is None \
                else linalg.matmul(step, comp, field)
        shift = self.q_shift_between(a, b)
        out = LaurentPolynomial.zero()
        by_q = {}
        for idx, (q, _) in enumerate(order):
            by_q.setdefault(q, []).append(idx)
        for q, idxs in sorted(by_q.items()):
            rk = linalg.rank([comp[i] for i in idxs], field)
            if rk:
                out = out + LaurentPolynomial.q(q + shift, rk)
        return out

    def barcodes(self):
        """Per homological degree: the interval decomposition."""
        return {p: barcode_from_ranks(self.rank_table(p))
                for p in self.degrees()}


class Filtration:
    """An ordered sequence of diagrams joined by morphism steps.

    Steps are dicts: {"kind": "identity" | "closure" | "cap" | "cup" |
    "saddle" | "break", ...}.  A "break" severs the sequence into runs
    (no induced map is defined across it).
    """

    def __init__(self, grades, diagrams, steps, functor="G", field=None):
        from .algebra import GF2
        if list(grades) != sorted(set(grades)):
            raise MorphismError("grades must be strictly increasing")
        if len(diagrams) != len(grades):
            raise MorphismError("one diagram per grade required")
        if len(steps) != max(len(grades) - 1, 0):
            raise MorphismError("one step per consecutive grade pair")
        self.grades = list(grades)
        self.diagrams = list(diagrams)
        self.steps = list(steps)
        self.functor = functor
        self.field = GF2 if field is None else field
        self._runs = None

    def _chain_map(self, i, src, dst):
        from .diagram import PlanarTangleSpec, apply_planar
        step = self.steps[i]
        kind = step["kind"]
        if kind == "identity":
            return build_psi(src, dst,
                             ClosureMorphismSpec.identity(src.diagram))
        if kind == "closure":
            if "spec" in step:
                try:
                    return build_psi(src, dst, step["spec"])
                except MorphismError as e:
                    raise MorphismError(f"step {i}: {e}")
            op = step["op"]
            if not isinstance(op, PlanarTangleSpec):
                op = PlanarTangleSpec(
                    inner_boundary=op["inner_boundary"],
                    outer_boundary=op.get("outer_boundary", ()),
                    arcs=[tuple(a) for a in op.get("arcs", ())],
                    circles=op.get("circles", 0))
            target, spec = apply_planar(op, src.diagram)
            if target != dst.diagram:
                raise MorphismError(
                    f"step {i}: closure result does not match next diagram")
            return build_psi(src, dst, spec)
        if kind == "cap":
            f = cap_map(src)
            if f.dst.diagram != dst.diagram:
                raise MorphismError(f"step {i}: cap target mismatch")
            return ChainMap(src=src, dst=dst, columns=f.columns,
                            q_shift=f.q_shift)
        if kind == "cup":
            f = cup_map(src, step.get("site", -1))
            if f.dst.diagram != dst.diagram:
                raise MorphismError(f"step {i}: cup target mismatch")
            return ChainMap(src=src, dst=dst, columns=f.columns,
                            q_shift=f.q_shift)
        if kind == "saddle":
            site = (tuple(step["site"]["from"][0]),
                    tuple(step["site"]["from"][1]))
            return saddle_map(src, dst, site)
        raise MorphismError(f"unknown step kind {kind!r}")

    def runs(self):
        if self._runs is not None:
            return self._runs
        complexes = [build_complex(d, functor=self.functor, field=self.field)
                     for d in self.diagrams]
        from .complex import homology
        homologies = [homology(c) for c in complexes]
        runs = []
        start = 0
        maps = []
        for i, step in enumerate(self.steps):
            if step["kind"] == "break":
                runs.append(FiltrationRun(self.grades[start:i + 1],
                                          complexes[start:i + 1],
                                          maps, homologies[start:i + 1]))
                start = i + 1
                maps = []
            else:
                maps.append(self._chain_map(i, complexes[i],
                                            complexes[i + 1]))
        runs.append(FiltrationRun(self.grades[start:],
                                  complexes[start:],
                                  maps, homologies[start:]))
        self._runs = runs
        return runs

    def barcode_report(self):
        """JSON-ready rows: one per bar, per run, per degree."""
        rows = []
        for run_idx, run in enumerate(self.runs()):
            for p, bars in sorted(run.barcodes().items()):
                for bar in bars:
                    birth = run.grades[bar.birth]
                    death = (None if bar.death is None
                             else run.grades[bar.death])
                    rows.append({
                        "run": run_idx,
                        "p": p,
                        "birth": birth,
                        "death": death,
                        "multiplicity": bar.multiplicity,
                        "q_shift_at_birth": run.q_shift_between(0, bar.birth),
                    })
        return rows
