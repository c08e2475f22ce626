"""Exact coefficient fields, Laurent polynomials, gradings, and the local
saddle maps of the two functors.

Circle labels are '+' and '-', arcs always carry 'w'.  Matrix bases over
labelings are ordered lexicographically with '+' before '-'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction


# -- fields --------------------------------------------------------------


class Rationals:
    name = "Q"
    char = 0

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    def __init__(self, p):
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x):
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return self.name


QQ = Rationals()
GF2 = PrimeField(2)


def field_from_name(name):
    name = name.lower()
    if name in ("q", "rationals"):
        return QQ
    if name == "f2":
        return GF2
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    if name.startswith("f") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown field {name!r}")


# -- Laurent polynomials -------------------------------------------------


class LaurentPolynomial:
    """Laurent polynomial in q with exact coefficients; zero terms dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(e): c for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def q(cls, exponent=1, coeff=1):
        return cls({exponent: coeff})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return LaurentPolynomial(out)

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial(
                {e: c * other for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = LaurentPolynomial.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        return isinstance(other, LaurentPolynomial) and \
            self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def to_json(self):
        return {str(e): (str(c) if isinstance(c, Fraction) else c)
                for e, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, data):
        return cls({int(e): (Fraction(c) if isinstance(c, str) else c)
                    for e, c in data.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            base = "1" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if c == 1 and e != 0:
                terms.append(base)
            elif c == -1 and e != 0:
                terms.append(f"-{base}")
            elif e == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}*{base}")
        s = terms[0]
        for t in terms[1:]:
            s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return s


Q_PLUS_QINV = LaurentPolynomial({1: 1, -1: 1})


def qdim(graded_ranks) -> LaurentPolynomial:
    """Graded dimension from a {degree: rank} map."""
    return LaurentPolynomial(dict(graded_ranks))


# -- generators and gradings ---------------------------------------------


THETA = {"+": 1, "-": -1, "w": -1}


@dataclass(frozen=True)
class Generator:
    """A basis element: a state plus one symbol per component."""

    state: tuple
    labels: tuple

    def __post_init__(self):
        for sym in self.labels:
            if sym not in THETA:
                raise ValueError(f"unknown label {sym!r}")


def theta(labels) -> int:
    labels = labels.labels if isinstance(labels, Generator) else labels
    return sum(THETA[sym] for sym in labels)


def phi(labels, p, n_plus, n_minus) -> int:
    """Quantum grading: p + n_plus - n_minus + theta."""
    return p + n_plus - n_minus + theta(labels)


# -- local saddle maps ---------------------------------------------------

# merge of two circles (the Frobenius multiplication)
MERGE = {
    ("+", "+"): {"+": 1},
    ("+", "-"): {"-": 1},
    ("-", "+"): {"-": 1},
    ("-", "-"): {},
}
# split of one circle (the comultiplication)
SPLIT = {
    "+": {("+", "-"): 1, ("-", "+"): 1},
    "-": {("-", "-"): 1},
}
# arc splitting off a circle
ARC_SPLIT = {("w",): {("w", "-"): 1}}
# arc absorbing a circle
ARC_MERGE = {("w", "+"): {("w",): 1}, ("w", "-"): {}}


def _basis(shape):
    """Lexicographic labelings for a tuple of component kinds."""
    choices = [("w",) if k == "arc" else ("+", "-") for k in shape]
    return [tuple(t) for t in itertools.product(*choices)]


def local_map(kind, functor="G"):
    """Matrix of the local map for one saddle kind.

    Returns ``(src_basis, dst_basis, entries)`` with integer entries keyed
    by ``(dst_labeling, src_labeling)``.  The functor for links ('F') is
    only defined on the circle cases.
    """
    circle_only = kind in ("circle-merge", "circle-split")
    if functor == "F" and not circle_only:
        raise ValueError(f"functor F is undefined on arc case {kind!r}")
    if functor not in ("F", "G"):
        raise ValueError(f"unknown functor {functor!r}")

    if kind == "circle-merge":
        src, dst = _basis(("circle", "circle")), _basis(("circle",))
        table = {(a, b): {(x,): c for x, c in MERGE[(a, b)].items()}
                 for a, b in src}
    elif kind == "circle-split":
        src, dst = _basis(("circle",)), _basis(("circle", "circle"))
        table = {(a,): SPLIT[a] for (a,) in src}
    elif kind == "arc-split-circle":
        src, dst = _basis(("arc",)), _basis(("arc", "circle"))
        table = ARC_SPLIT
    elif kind == "arc-circle-merge":
        src, dst = _basis(("arc", "circle")), _basis(("arc",))
        table = ARC_MERGE
    elif kind == "arc-arc-reconnect":
        src, dst = _basis(("arc", "arc")), _basis(("arc", "arc"))
        table = {("w", "w"): {}}
    else:
        raise ValueError(f"unknown saddle kind {kind!r}")

    entries = {}
    for s, terms in table.items():
        for t, c in terms.items():
            entries[(t, s)] = c
    return src, dst, entries


def unit_counit():
    """The cap map (1 -> v+) and cup map (v+ -> 0, v- -> 1).

    Both come as entry dicts keyed by (dst_labeling, src_labeling); the
    empty labeling () stands for the ground field.
    """
    eps = {(("+",), ()): 1}
    eta = {((), ("-",)): 1}
    return eps, eta
