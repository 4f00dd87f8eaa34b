"""Multivariate polynomials over exact fields, monomial orders, Groebner bases.

Monomials are exponent tuples.  A `Poly` stores its terms sorted strictly
descending under graded reverse lexicographic order; that is only a storage
convention, every Groebner computation takes an explicit `MonomialOrder`.
Buchberger's algorithm uses the two classical pair criteria (coprime
leading terms and the chain criterion) and returns the reduced monic basis,
so equal inputs give the identical basis.

The text grammar for polynomials: variables are identifiers, `^` marks
powers, `*` is optional between factors, rational coefficients are written
`a/b`.  Rings serialize as `Q[x,y]` or `Fp:7[x,y]`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainMismatchError, ValidationError
from .fields import Field

Monomial = tuple

# -- monomial helpers --------------------------------------------------------


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a: Monomial) -> int:
    return sum(a)


def _grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or a block elimination order.

    `block` compares the first `block_size` exponents by grevlex, then the
    rest by grevlex, so it eliminates the leading block of variables.
    """

    kind: str = "grevlex"
    block_size: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValidationError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.block_size <= 0:
            raise ValidationError("block order needs a positive block size")

    def key(self, m: Monomial):
        if self.kind == "lex":
            return m
        if self.kind == "grevlex":
            return _grevlex_key(m)
        k = self.block_size
        return (_grevlex_key(m[:k]), _grevlex_key(m[k:]))

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(block_size: int) -> MonomialOrder:
    return MonomialOrder("block", block_size)


# -- ring and polynomials -----------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class PolyRing:
    field: Field
    variables: tuple

    def __post_init__(self) -> None:
        seen = set()
        for v in self.variables:
            if not _NAME_RE.match(v):
                raise ValidationError(f"bad variable name {v!r}")
            if v in seen:
                raise ValidationError(f"duplicate variable {v!r}")
            seen.add(v)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def describe(self) -> str:
        return f"{self.field.describe()}[{','.join(self.variables)}]"

    @staticmethod
    def parse(text: str) -> "PolyRing":
        m = re.match(r"^\s*([^\[\]]+)\[([^\[\]]*)\]\s*$", text)
        if not m:
            raise ValidationError(f"bad ring descriptor {text!r}")
        field = Field.parse(m.group(1))
        names = tuple(v.strip() for v in m.group(2).split(",") if v.strip())
        return PolyRing(field, names)

    def zero(self) -> "Poly":
        return Poly(self, ())

    def one(self) -> "Poly":
        return self.const(self.field.one())

    def const(self, c) -> "Poly":
        self.field.check(c)
        if self.field.is_zero(c):
            return Poly(self, ())
        return Poly(self, (((0,) * self.nvars, c),))

    def from_int(self, n: int) -> "Poly":
        return self.const(self.field.from_int(n))

    def var(self, name: str) -> "Poly":
        i = self.variables.index(name)
        expo = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, ((expo, self.field.one()),))

    def gens(self) -> tuple:
        return tuple(self.var(v) for v in self.variables)

    def monomial(self, expo: Monomial, coeff=None) -> "Poly":
        c = self.field.one() if coeff is None else coeff
        if self.field.is_zero(c):
            return self.zero()
        return Poly(self, ((tuple(expo), c),))

    def from_terms(self, terms) -> "Poly":
        acc: dict = {}
        f = self.field
        for mono, c in terms:
            mono = tuple(mono)
            if len(mono) != self.nvars:
                raise ValidationError("monomial width does not match ring")
            prev = acc.get(mono)
            acc[mono] = f.add(prev, c) if prev is not None else c
        cleaned = tuple(
            (m, c)
            for m, c in sorted(acc.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)
            if not f.is_zero(c)
        )
        return Poly(self, cleaned)

    def parse_poly(self, text: str) -> "Poly":
        return _parse_poly(self, text)


@dataclass(frozen=True)
class Poly:
    """Polynomial with terms sorted strictly descending by grevlex."""

    ring: PolyRing
    terms: tuple

    def _match(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise DomainMismatchError("polynomials from different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        # degree of 0 reported as -1 so callers can branch on it
        if not self.terms:
            return -1
        return max(mono_deg(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {mono_deg(m) for m, _ in self.terms}
        return len(degs) == 1

    def constant_value(self):
        """The coefficient of the constant term."""
        zero_mono = (0,) * self.ring.nvars
        for m, c in self.terms:
            if m == zero_mono:
                return c
        return self.ring.field.zero()

    def is_constant(self) -> bool:
        return all(mono_deg(m) == 0 for m, _ in self.terms)

    def coeff_of(self, mono: Monomial):
        for m, c in self.terms:
            if m == tuple(mono):
                return c
        return self.ring.field.zero()

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        self._match(other)
        return self.ring.from_terms(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, tuple((m, f.neg(c)) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._match(other)
        f = self.ring.field
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                c = f.mul(c1, c2)
                prev = acc.get(m)
                acc[m] = f.add(prev, c) if prev is not None else c
        cleaned = tuple(
            (m, c)
            for m, c in sorted(acc.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)
            if not f.is_zero(c)
        )
        return Poly(self.ring, cleaned)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        f = self.ring.field
        f.check(c)
        if f.is_zero(c):
            return self.ring.zero()
        return Poly(self.ring, tuple((m, f.mul(c, a)) for m, a in self.terms))

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValidationError("negative polynomial power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def leading(self, order: MonomialOrder):
        """(monomial, coeff) maximal under the given order."""
        if not self.terms:
            raise ValidationError("zero polynomial has no leading term")
        return max(self.terms, key=lambda t: order.key(t[0]))

    def monic(self, order: MonomialOrder) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self.scale(self.ring.field.inv(c))

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Evaluate at variable images, which live in the images' ring."""
        if len(images) != self.ring.nvars:
            raise ValidationError("substitution needs one image per variable")
        target = images[0].ring if images else self.ring
        for im in images:
            if im.ring != target:
                raise DomainMismatchError("substitution images from different rings")
        if target.field != self.ring.field:
            raise DomainMismatchError("substitution across different fields")
        out = target.zero()
        for m, c in self.terms:
            part = target.const(c)
            for e, im in zip(m, images):
                if e:
                    part = part * (im ** e)
            out = out + part
        return out

    def __str__(self) -> str:
        return poly_to_str(self)

    def __repr__(self) -> str:
        return f"Poly({poly_to_str(self)})"


# -- printing and parsing ------------------------------------------------------


def poly_to_str(p: Poly) -> str:
    if not p.terms:
        return "0"
    f = p.ring.field
    chunks = []
    for idx, (m, c) in enumerate(p.terms):
        factors = []
        for name, e in zip(p.ring.variables, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if f.p == 0:
            negative = c < 0
            mag = -c if negative else c
        else:
            negative = False
            mag = c
        mag_str = f.scalar_repr(mag)
        if factors and mag_str == "1":
            body = "*".join(factors)
        elif factors:
            body = mag_str + "*" + "*".join(factors)
        else:
            body = mag_str
        if idx == 0:
            chunks.append(("-" if negative else "") + body)
        else:
            chunks.append((" - " if negative else " + ") + body)
    return "".join(chunks)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[\^\*\+\-]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValidationError(f"cannot tokenize polynomial at: {text[pos:pos+20]!r}")
        if m.group("num"):
            out.append(("num", m.group("num")))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


def _parse_poly(ring: PolyRing, text: str) -> Poly:
    tokens = _tokenize(text)
    if not tokens:
        raise ValidationError("empty polynomial text")
    f = ring.field
    terms = []
    i = 0
    n = len(tokens)

    def parse_term(i: int, sign: int):
        coeff = f.from_int(sign)
        expo = [0] * ring.nvars
        saw_factor = False
        while i < n:
            kind, val = tokens[i]
            if kind == "op" and val == "*":
                if not saw_factor:
                    raise ValidationError("unexpected '*'")
                i += 1
                kind, val = tokens[i] if i < n else (None, None)
                if kind not in ("num", "name"):
                    raise ValidationError("dangling '*'")
                continue
            if kind == "num":
                if "/" in val:
                    a, b = val.split("/")
                    coeff = f.mul(coeff, f.from_fraction(int(a), int(b)))
                else:
                    coeff = f.mul(coeff, f.from_int(int(val)))
                i += 1
                saw_factor = True
            elif kind == "name":
                if val not in ring.variables:
                    raise ValidationError(f"unknown variable {val!r} in {ring.describe()}")
                idx = ring.variables.index(val)
                e = 1
                if i + 1 < n and tokens[i + 1] == ("op", "^"):
                    if i + 2 >= n or tokens[i + 2][0] != "num" or "/" in tokens[i + 2][1]:
                        raise ValidationError("exponent must be an integer")
                    e = int(tokens[i + 2][1])
                    i += 2
                expo[idx] += e
                i += 1
                saw_factor = True
            else:
                break
        if not saw_factor:
            raise ValidationError("empty term in polynomial text")
        return i, (tuple(expo), coeff)

    sign = 1
    kind, val = tokens[0]
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i = 1
    while True:
        i, term = parse_term(i, sign)
        terms.append(term)
        if i == n:
            break
        kind, val = tokens[i]
        if kind != "op" or val not in "+-":
            raise ValidationError(f"expected '+' or '-' at token {i}")
        sign = -1 if val == "-" else 1
        i += 1
        if i == n:
            raise ValidationError("trailing sign in polynomial text")
    return ring.from_terms(terms)


# -- division and Groebner bases ------------------------------------------------


def poly_divmod(f: Poly, divisors: Sequence[Poly], order: MonomialOrder):
    """Multivariate division: f = sum(q_i g_i) + r, no term of r divisible
    by any leading term.  The first divisor whose leading term divides wins,
    so the output is deterministic in the order given."""
    ring = f.ring
    fld = ring.field
    divisors = list(divisors)
    leads = [g.leading(order) for g in divisors]
    quots = [dict() for _ in divisors]
    rem: dict = {}
    work = dict(f.terms)

    def lead_mono(d: dict):
        return max(d.keys(), key=order.key)

    while work:
        m = lead_mono(work)
        c = work[m]
        hit = None
        for i, (lm, lc) in enumerate(leads):
            if mono_divides(lm, m):
                hit = i
                break
        if hit is None:
            rem[m] = fld.add(rem.get(m, fld.zero()), c) if m in rem else c
            del work[m]
            continue
        lm, lc = leads[hit]
        qm = mono_div(m, lm)
        qc = fld.div(c, lc)
        qd = quots[hit]
        qd[qm] = fld.add(qd.get(qm, fld.zero()), qc) if qm in qd else qc
        for gm, gc in divisors[hit].terms:
            tm = mono_mul(qm, gm)
            delta = fld.mul(qc, gc)
            cur = work.get(tm, fld.zero())
            new = fld.sub(cur, delta)
            if fld.is_zero(new):
                work.pop(tm, None)
            else:
                work[tm] = new
    mk = lambda d: ring.from_terms(d.items())
    return [mk(q) for q in quots], mk(rem)


def normal_form(f: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    if f.is_zero():
        return f
    basis = [g for g in basis if not g.is_zero()]
    if not basis:
        return f
    return poly_divmod(f, basis, order)[1]


def s_poly(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    ring = f.ring
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    l = mono_lcm(fm, gm)
    a = ring.monomial(mono_div(l, fm), ring.field.inv(fc))
    b = ring.monomial(mono_div(l, gm), ring.field.inv(gc))
    return a * f - b * g


def buchberger(gens: Sequence[Poly], order: MonomialOrder = GREVLEX) -> list:
    """Reduced monic Groebner basis of the ideal generated by gens.

    Pair selection: smallest lcm under the order (normal strategy).  Pairs
    are discarded by the coprime criterion and by the chain criterion when
    a third leading term divides the lcm and both side pairs are done.
    """
    ring = None
    basis = []
    for g in gens:
        if ring is None:
            ring = g.ring
        elif g.ring != ring:
            raise DomainMismatchError("generators from different rings")
        if not g.is_zero():
            basis.append(g.monic(order))
    if not basis:
        return []

    leads = [g.leading(order)[0] for g in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done = set()

    def lcm_of(p):
        return mono_lcm(leads[p[0]], leads[p[1]])

    while pairs:
        pair = min(pairs, key=lambda p: (order.key(lcm_of(p)), p))
        pairs.discard(pair)
        done.add(pair)
        i, j = pair
        li, lj = leads[i], leads[j]
        l = mono_lcm(li, lj)
        if l == mono_mul(li, lj):
            continue  # coprime leading terms
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(leads[k], l):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        r = normal_form(s_poly(basis[i], basis[j], order), basis, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        basis.append(r)
        leads.append(r.leading(order)[0])
        new_idx = len(basis) - 1
        for k in range(new_idx):
            pairs.add((k, new_idx))
    return interreduce(basis, order)


def interreduce(basis: Sequence[Poly], order: MonomialOrder) -> list:
    """Reduce a Groebner basis to the unique reduced monic basis."""
    basis = [g.monic(order) for g in basis if not g.is_zero()]
    # drop elements whose leading term another element's leading term divides
    keep = []
    for i, g in enumerate(basis):
        lm = g.leading(order)[0]
        dominated = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            hm = h.leading(order)[0]
            if mono_divides(hm, lm) and (hm != lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(g)
    changed = True
    while changed:
        changed = False
        for i in range(len(keep)):
            others = keep[:i] + keep[i + 1 :]
            if not others:
                continue
            r = normal_form(keep[i], others, order)
            if r.is_zero():
                keep.pop(i)
                changed = True
                break
            r = r.monic(order)
            if r != keep[i]:
                keep[i] = r
                changed = True
    keep.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    return keep


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolyRing
    order: MonomialOrder
    polys: tuple

    @staticmethod
    def of(gens: Sequence[Poly], order: MonomialOrder = GREVLEX) -> "GroebnerBasis":
        gens = list(gens)
        if not gens:
            raise ValidationError("need at least one generator (possibly zero)")
        ring = gens[0].ring
        return GroebnerBasis(ring, order, tuple(buchberger(gens, order)))

    def normal_form(self, f: Poly) -> Poly:
        return normal_form(f, self.polys, self.order)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() and not self.polys[0].is_zero()

    def leading_monomials(self) -> list:
        return [g.leading(self.order)[0] for g in self.polys]


# -- ring extension and elimination ---------------------------------------------


def ring_with_prefix(ring: PolyRing, names: Sequence[str]) -> PolyRing:
    return PolyRing(ring.field, tuple(names) + ring.variables)


def lift_to_prefix(p: Poly, big: PolyRing, k: int) -> Poly:
    """View p inside a ring with k extra leading variables."""
    pad = (0,) * k
    return Poly(big, tuple((pad + m, c) for m, c in p.terms))


def drop_prefix(p: Poly, small: PolyRing, k: int) -> Poly:
    for m, _ in p.terms:
        if any(m[:k]):
            raise ValidationError("polynomial still involves eliminated variables")
    return Poly(small, tuple((m[k:], c) for m, c in p.terms))


def eliminate(gens: Sequence[Poly], k: int) -> list:
    """Generators of (ideal) intersected with the subring dropping the first
    k variables, returned in the smaller ring."""
    if not gens:
        return []
    big = gens[0].ring
    small = PolyRing(big.field, big.variables[k:])
    gb = buchberger(list(gens), block_order(k))
    out = []
    for g in gb:
        if all(not any(m[:k]) for m, _ in g.terms):
            out.append(drop_prefix(g, small, k))
    return out


# -- ideal-level operations ------------------------------------------------------


def radical_member(f: Poly, gens: Sequence[Poly]) -> bool:
    """Whether f lies in the radical of (gens), by the extra-variable trick:
    f in rad(I) iff 1 in I + (1 - t f) in the extended ring."""
    ring = f.ring
    if f.is_zero():
        gb = GroebnerBasis.of(list(gens) or [ring.zero()])
        return True if not gb.polys else gb.is_unit_ideal() or f.is_zero()
    big = ring_with_prefix(ring, ("_t",))
    t = big.var("_t")
    lifted = [lift_to_prefix(g, big, 1) for g in gens]
    lifted.append(big.one() - t * lift_to_prefix(f, big, 1))
    gb = buchberger(lifted, GREVLEX)
    return len(gb) == 1 and gb[0].is_constant()


def ideal_contains_radical(small: Sequence[Poly], big: Sequence[Poly]) -> bool:
    """rad(small) <= rad(big): every generator of small is in rad(big)."""
    return all(radical_member(g, big) for g in small)


def radical_equal(a: Sequence[Poly], b: Sequence[Poly]) -> bool:
    return ideal_contains_radical(a, b) and ideal_contains_radical(b, a)


def ideal_intersection(a: Sequence[Poly], b: Sequence[Poly]) -> list:
    """Generators of (a) cap (b) via the tag variable t."""
    a, b = list(a), list(b)
    if not a or not b:
        return []
    ring = a[0].ring
    big = ring_with_prefix(ring, ("_t",))
    t = big.var("_t")
    gens = [t * lift_to_prefix(f, big, 1) for f in a]
    gens += [(big.one() - t) * lift_to_prefix(g, big, 1) for g in b]
    return eliminate(gens, 1)


def exact_divide(f: Poly, g: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    quots, rem = poly_divmod(f, [g], order)
    if not rem.is_zero():
        raise ValidationError("division is not exact")
    return quots[0]


def ideal_quotient(a: Sequence[Poly], b: Sequence[Poly]) -> list:
    """Generators of (a : b) = {f : f*(b) <= (a)}."""
    a, b = list(a), list(b)
    if not a:
        a = []
    result: list | None = None
    for g in b:
        if g.is_zero():
            continue
        inter = ideal_intersection(a, [g])
        quot = [exact_divide(h, g) for h in inter]
        if result is None:
            result = quot
        else:
            result = ideal_intersection(result, quot)
    if result is None:
        raise ValidationError("ideal quotient by the zero ideal")
    return result


def ideal_sum(a: Sequence[Poly], b: Sequence[Poly]) -> list:
    return list(a) + list(b)


def ideal_product(a: Sequence[Poly], b: Sequence[Poly]) -> list:
    return [f * g for f in a for g in b]


def ideal_is_proper(gens: Sequence[Poly]) -> bool:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return True
    return not GroebnerBasis.of(gens).is_unit_ideal()
