"""State cube edges, differential signs, and saddle classification.

An edge flips one crossing bit from 0 to 1; its word over {0,1,*} puts a
star at the flipped position.  The sign is (-1)^(number of 1s before the
star), crossings ordered by ascending id.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import Resolution, TangleDiagram


@dataclass(frozen=True)
class EdgeDescriptor:
    source: tuple
    star: int

    def __post_init__(self):
        if self.source[self.star] != 0:
            raise ValueError("star position must be a 0-bit of the source")

    @property
    def target(self):
        return tuple(1 if i == self.star else b
                     for i, b in enumerate(self.source))

    @property
    def word(self):
        return tuple("*" if i == self.star else b
                     for i, b in enumerate(self.source))


@dataclass(frozen=True)
class SaddleClassification:
    kind: str
    source_active: tuple  # component indices in the source resolution
    target_active: tuple
    bystanders: tuple     # (source index, target index) pairs


KINDS = ("circle-merge", "circle-split", "arc-arc-reconnect",
         "arc-split-circle", "arc-circle-merge")


def edges(d: TangleDiagram):
    """All n * 2^(n-1) cube edges, grouped by source height h(s)."""
    n = d.n
    out = {}
    for s in itertools.product((0, 1), repeat=n):
        h = sum(s) - d.n_minus
        for i in range(n):
            if s[i] == 0:
                out.setdefault(h, []).append(EdgeDescriptor(source=s, star=i))
    return out


def edge_sign(e: EdgeDescriptor) -> int:
    return -1 if sum(e.source[:e.star]) % 2 else 1


def _signature(comp):
    if comp.ports:
        return ("p", tuple(sorted(map(str, comp.ports))))
    return ("f",)


def classify_saddle(res_s: Resolution, res_t: Resolution, e: EdgeDescriptor,
                    d: TangleDiagram) -> SaddleClassification:
    """Identify the local cobordism type of one cube edge.

    Active components are those containing a port of the flipped crossing;
    bystanders are matched by identical port sets (free circles by index).
    """
    if res_s.state != e.source or res_t.state != e.target:
        raise ValueError("resolutions are not adjacent along this edge")
    return classify_nodes(res_s, res_t, d.crossings[e.star].ports)


def classify_nodes(res_s: Resolution, res_t: Resolution,
                   nodes) -> SaddleClassification:
    """Classify the local move re-pairing the four given strand nodes."""
    ports = set(nodes)

    src_active = tuple(i for i, c in enumerate(res_s.components)
                       if ports & set(c.ports))
    tgt_active = tuple(i for i, c in enumerate(res_t.components)
                       if ports & set(c.ports))

    src_kinds = sorted(res_s.components[i].kind for i in src_active)
    tgt_kinds = sorted(res_t.components[i].kind for i in tgt_active)
    key = (tuple(src_kinds), tuple(tgt_kinds))
    table = {
        (("circle", "circle"), ("circle",)): "circle-merge",
        (("circle",), ("circle", "circle")): "circle-split",
        (("arc", "arc"), ("arc", "arc")): "arc-arc-reconnect",
        (("arc",), ("arc", "arc")): "arc-arc-reconnect",
        (("arc", "arc"), ("arc",)): "arc-arc-reconnect",
        (("arc",), ("arc", "circle")): "arc-split-circle",
        (("arc", "circle"), ("arc",)): "arc-circle-merge",
    }
    kind = table.get(key)
    if kind is None:
        raise ValueError(
            f"active pattern {key} is outside the five local cases "
            "(diagram encoding bug)")

    # bystanders: everything else, matched by signature
    tgt_by_sig = {}
    free_idx = 0
    for j, c in enumerate(res_t.components):
        if j in tgt_active:
            continue
        sig = _signature(c)
        if sig == ("f",):
            sig = ("f", free_idx)
            free_idx += 1
        tgt_by_sig[sig] = j
    bystanders = []
    free_idx = 0
    for i, c in enumerate(res_s.components):
        if i in src_active:
            continue
        sig = _signature(c)
        if sig == ("f",):
            sig = ("f", free_idx)
            free_idx += 1
        j = tgt_by_sig.get(sig)
        if j is None:
            raise ValueError("bystander correspondence is not total")
        if res_t.components[j].kind != c.kind:
            raise ValueError("bystander correspondence changes kind")
        bystanders.append((i, j))

    return SaddleClassification(kind=kind,
                                source_active=src_active,
                                target_active=tgt_active,
                                bystanders=tuple(bystanders))


def transfer_labels(cls: SaddleClassification, res_s, res_t, src_labels):
    """Image labelings of one generator under the local saddle map.

    Returns a list of target labeling tuples, each with coefficient +1
    (all five local maps have 0/1 entries).
    """
    from .algebra import MERGE, SPLIT

    nt = len(res_t.components)
    out = [None] * nt
    for si, ti in cls.bystanders:
        out[ti] = src_labels[si]

    k = cls.kind
    terms = []
    if k == "circle-merge":
        i1, i2 = cls.source_active
        j = cls.target_active[0]
        for sym in MERGE[(src_labels[i1], src_labels[i2])]:
            out2 = list(out)
            out2[j] = sym
            terms.append(tuple(out2))
    elif k == "circle-split":
        i1 = cls.source_active[0]
        j1, j2 = cls.target_active
        for s1, s2 in SPLIT[src_labels[i1]]:
            out2 = list(out)
            out2[j1], out2[j2] = s1, s2
            terms.append(tuple(out2))
    elif k == "arc-split-circle":
        out2 = list(out)
        for j in cls.target_active:
            out2[j] = "w" if res_t.components[j].kind == "arc" else "-"
        terms.append(tuple(out2))
    elif k == "arc-circle-merge":
        ic = next(i for i in cls.source_active
                  if res_s.components[i].kind == "circle")
        if src_labels[ic] == "+":
            out2 = list(out)
            out2[cls.target_active[0]] = "w"
            terms.append(tuple(out2))
    # arc-arc-reconnect: zero map, no terms
    return terms
