"""Split supercommutative algebras and their module pairs.

An algebra here is A tensor an exterior algebra on d odd generators, and a
module is a pair of presented A-modules with multiplication maps for every
nonzero exterior-basis element.  Validation checks the multiplication
against the exterior products on all basis pairs, which is exactly the
commuting-diagram datum that reconstructs the one-object picture.

Basis order is graded lexicographic in the odd indices: shorter products
first, ties broken by index tuples.  The empty product always acts as the
identity and is never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainMismatchError, ValidationError
from .geometry import ClosedSet, closed_union, closed_union_all
from .polyring import Poly, PolyRing
from .polymod import (
    ModuleMap,
    PresentedComplex,
    PresentedModule,
    annihilator,
    cohomology,
    direct_sum,
    map_is_isomorphism,
    module_tensor,
    submodule_lift,
    submodule_presentation,
    unit_vector,
    vec_add,
    vec_scale,
    vec_sub,
    vec_is_zero,
    zero_vector,
)


# -- exterior basis combinatorics ---------------------------------------------------


def all_subsets(d: int) -> list:
    out = [()]
    for j in range(d):
        out = out + [s + (j,) for s in out]
    return sorted(out, key=lambda s: (len(s), s))


def parity_basis(d: int, parity: int) -> list:
    return [s for s in all_subsets(d) if len(s) % 2 == parity]


def wedge(s: tuple, t: tuple):
    """theta_s theta_t as (sign, union); sign 0 encodes a repeated factor."""
    if set(s) & set(t):
        return 0, ()
    inversions = sum(1 for a in s for b in t if a > b)
    return (-1) ** inversions, tuple(sorted(s + t))


@dataclass(frozen=True)
class SuperAlgebra:
    """A tensor Lambda(theta_0 .. theta_{d-1}) with A a polynomial ring."""

    base: PolyRing
    odd_rank: int

    def __post_init__(self) -> None:
        if self.odd_rank < 0:
            raise ValidationError("odd rank must be nonnegative")

    def basis(self, parity: int) -> list:
        return parity_basis(self.odd_rank, parity % 2)

    def nonempty_subsets(self) -> list:
        return [s for s in all_subsets(self.odd_rank) if s]

    def describe(self) -> str:
        names = ", ".join(f"t{j}" for j in range(self.odd_rank))
        return f"{self.base.describe()} (x) Lambda({names})"


# -- supermodules --------------------------------------------------------------------


@dataclass(frozen=True)
class SuperModule:
    """Pair of presented modules with one action map per exterior generator word.

    actions holds ((parity, subset, columns), ...) for every nonempty
    subset, both parities; column j is the image of generator j of the
    source component, a vector over the component of parity
    (parity + len(subset)) mod 2.
    """

    algebra: SuperAlgebra
    even: PresentedModule
    odd: PresentedModule
    actions: tuple

    def component(self, i: int) -> PresentedModule:
        return self.even if i % 2 == 0 else self.odd

    def action_columns(self, i: int, subset: tuple) -> tuple:
        if not subset:
            mod = self.component(i)
            return tuple(unit_vector(mod.ring, mod.rank, j) for j in range(mod.rank))
        for p, s, cols in self.actions:
            if p == i % 2 and s == tuple(subset):
                return cols
        raise ValidationError(f"no action stored for parity {i} and word {subset}")

    def action_map(self, i: int, subset: tuple) -> ModuleMap:
        tgt = self.component(i + len(subset))
        return ModuleMap(self.component(i), tgt, self.action_columns(i, subset))

    def apply_word(self, i: int, subset: tuple, v: Sequence[Poly]) -> tuple:
        cols = self.action_columns(i, subset)
        tgt = self.component(i + len(subset))
        out = zero_vector(tgt.ring, tgt.rank)
        for j, entry in enumerate(v):
            if not entry.is_zero():
                out = vec_add(out, vec_scale(entry, cols[j]))
        return out

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def validate(self) -> None:
        alg = self.algebra
        ring = alg.base
        if self.even.ring != ring or self.odd.ring != ring:
            raise DomainMismatchError("components must live over the base ring")
        wanted = {(i, s) for i in (0, 1) for s in alg.nonempty_subsets()}
        stored = {(p, s) for p, s, _ in self.actions}
        if stored != wanted:
            raise ValidationError("action table does not match the exterior basis")
        for p, s, cols in self.actions:
            src, tgt = self.component(p), self.component(p + len(s))
            if len(cols) != src.rank or any(len(c) != tgt.rank for c in cols):
                raise ValidationError(f"action ({p}, {s}) has the wrong shape")
            self.action_map(p, s).check_well_defined()
        for s in alg.nonempty_subsets():
            for t in alg.nonempty_subsets():
                sign, union = wedge(s, t)
                for i in (0, 1):
                    mid = (i + len(t)) % 2
                    tgt = self.component(i + len(t) + len(s))
                    for j in range(self.component(i).rank):
                        step = self.apply_word(mid, s, self.action_columns(i, t)[j])
                        if sign == 0:
                            if not tgt.contains_in_relations(step):
                                raise ValidationError(
                                    f"repeated factor {s} * {t} does not act as zero"
                                )
                            continue
                        want = self.action_columns(i, union)[j]
                        if sign < 0:
                            want = tuple(-q for q in want)
                        if not tgt.contains_in_relations(vec_sub(step, want)):
                            raise ValidationError(
                                f"multiplication disagrees with the exterior "
                                f"product on {s} * {t} at parity {i}"
                            )


def assemble_actions(alg: SuperAlgebra, even: PresentedModule, odd: PresentedModule,
                     theta: Sequence) -> tuple:
    """Full action table from single-generator actions.

    theta[j] = (columns on the even part, columns on the odd part).  Longer
    words compose with the smallest index applied last, which matches the
    sorted-word convention with no extra sign.
    """
    comps = (even, odd)

    def word_columns(i: int, subset: tuple) -> tuple:
        src = comps[i % 2]
        tgt = comps[(i + len(subset)) % 2]
        if not subset:
            return tuple(unit_vector(src.ring, src.rank, j) for j in range(src.rank))
        head, rest = subset[0], subset[1:]
        inner = word_columns(i, rest)
        head_cols = theta[head][(i + len(rest)) % 2]
        out = []
        for j in range(src.rank):
            acc = zero_vector(src.ring, tgt.rank)
            for k, entry in enumerate(inner[j]):
                if not entry.is_zero():
                    acc = vec_add(acc, vec_scale(entry, head_cols[k]))
            out.append(acc)
        return tuple(out)

    table = []
    for i in (0, 1):
        for s in alg.nonempty_subsets():
            table.append((i, s, word_columns(i, s)))
    return tuple(table)


def zero_supermodule(alg: SuperAlgebra) -> SuperModule:
    z = PresentedModule.zero(alg.base)
    actions = tuple((i, s, ()) for i in (0, 1) for s in alg.nonempty_subsets())
    return SuperModule(alg, z, z, actions)


def i_rd(alg: SuperAlgebra, n: PresentedModule) -> SuperModule:
    """The even-concentrated module (N, 0) with all odd scalars acting by zero."""
    if n.ring != alg.base:
        raise DomainMismatchError("module must live over the base ring")
    z = PresentedModule.zero(alg.base)
    actions = []
    for i in (0, 1):
        for s in alg.nonempty_subsets():
            src = n if i == 0 else z
            tgt = n if (i + len(s)) % 2 == 0 else z
            cols = tuple(zero_vector(alg.base, tgt.rank) for _ in range(src.rank))
            actions.append((i, s, cols))
    return SuperModule(alg, n, z, tuple(actions))


def ring_supermodule(alg: SuperAlgebra) -> SuperModule:
    """The algebra over itself: components indexed by the exterior basis."""
    ring = alg.base
    ev, od = alg.basis(0), alg.basis(1)
    comps = (PresentedModule.free(ring, len(ev)), PresentedModule.free(ring, len(od)))
    bases = (ev, od)
    actions = []
    for i in (0, 1):
        for s in alg.nonempty_subsets():
            tgt_basis = bases[(i + len(s)) % 2]
            tindex = {b: k for k, b in enumerate(tgt_basis)}
            cols = []
            for b in bases[i]:
                sign, union = wedge(s, b)
                col = zero_vector(ring, len(tgt_basis))
                if sign != 0:
                    unit = ring.one() if sign > 0 else -ring.one()
                    col = tuple(unit if k == tindex[union] else ring.zero()
                                for k in range(len(tgt_basis)))
                cols.append(col)
            actions.append((i, s, tuple(cols)))
    return SuperModule(alg, comps[0], comps[1], tuple(actions))


def parity_change(m: SuperModule) -> SuperModule:
    """Swap the components; action maps are relabeled with no extra sign."""
    actions = tuple((1 - p, s, cols) for p, s, cols in m.actions)
    actions = tuple(sorted(actions, key=lambda e: (e[0], len(e[1]), e[1])))
    return SuperModule(m.algebra, m.odd, m.even, actions)


def direct_sum_super(a: SuperModule, b: SuperModule) -> SuperModule:
    if a.algebra != b.algebra:
        raise DomainMismatchError("summands over different superalgebras")
    ring = a.algebra.base
    even = direct_sum(a.even, b.even)
    odd = direct_sum(a.odd, b.odd)
    comps = {0: (a.even, b.even, even), 1: (a.odd, b.odd, odd)}
    actions = []
    for i in (0, 1):
        for s in a.algebra.nonempty_subsets():
            t = (i + len(s)) % 2
            ta, tb, _ = comps[t]
            cols = []
            for col in a.action_columns(i, s):
                cols.append(tuple(col) + zero_vector(ring, tb.rank))
            for col in b.action_columns(i, s):
                cols.append(zero_vector(ring, ta.rank) + tuple(col))
            actions.append((i, s, tuple(cols)))
    return SuperModule(a.algebra, even, odd, tuple(actions))


def free_supermodule(alg: SuperAlgebra, even_rank: int, odd_rank: int) -> SuperModule:
    """R^(even_rank | odd_rank): copies of the algebra, some parity-shifted."""
    out = None
    for _ in range(even_rank):
        piece = ring_supermodule(alg)
        out = piece if out is None else direct_sum_super(out, piece)
    for _ in range(odd_rank):
        piece = parity_change(ring_supermodule(alg))
        out = piece if out is None else direct_sum_super(out, piece)
    return out if out is not None else zero_supermodule(alg)


# -- free-module coordinates -----------------------------------------------------------


def free_slot(alg: SuperAlgebra, shape: tuple, copy: int, subset: tuple):
    """(parity, index) of theta_subset e_copy inside the free module of the shape.

    Copies are numbered with the even ones first; component p of copy u is
    spanned by the words of parity p + parity(u).
    """
    a, b = shape
    copy_parity = 0 if copy < a else 1
    parity = (copy_parity + len(subset)) % 2
    index = 0
    for u in range(copy):
        index += len(alg.basis((parity + (0 if u < a else 1)) % 2))
    words = alg.basis((parity + copy_parity) % 2)
    return parity, index + words.index(tuple(subset))


def free_component_rank(alg: SuperAlgebra, shape: tuple, parity: int) -> int:
    a, b = shape
    return a * len(alg.basis(parity)) + b * len(alg.basis((parity + 1) % 2))


def free_supermap(alg: SuperAlgebra, src_shape: tuple, tgt_shape: tuple,
                  entries) -> SuperMap:
    """Map of free supermodules from a matrix over the whole algebra.

    entries[(w, u)] is the coefficient of target copy w in the image of
    source copy u, a sequence of (word, Poly) pairs whose parities must
    all equal parity(u) + parity(w).
    """
    ring = alg.base
    src = free_supermodule(alg, *src_shape)
    tgt = free_supermodule(alg, *tgt_shape)
    sa, sb = src_shape
    for (w, u), elem in entries.items():
        want = ((0 if u < sa else 1) + (0 if w < tgt_shape[0] else 1)) % 2
        for word, _ in elem:
            if len(word) % 2 != want:
                raise ValidationError(
                    f"entry ({w}, {u}) mixes parities in the free map")
    parts = []
    for parity in (0, 1):
        cols = []
        for u in range(sa + sb):
            copy_parity = 0 if u < sa else 1
            for word in alg.basis((parity + copy_parity) % 2):
                col = [ring.zero()] * free_component_rank(alg, tgt_shape, parity)
                for (w, uu), elem in entries.items():
                    if uu != u:
                        continue
                    for s, coeff in elem:
                        sign, combined = wedge(word, s)
                        if sign == 0 or coeff.is_zero():
                            continue
                        p2, idx = free_slot(alg, tgt_shape, w, combined)
                        if p2 != parity:
                            raise ValidationError("free map is not even")
                        scaled = coeff if sign > 0 else -coeff
                        col[idx] = col[idx] + scaled
                cols.append(tuple(col))
        parts.append(ModuleMap(src.component(parity), tgt.component(parity),
                               tuple(cols)))
    return SuperMap(src, tgt, parts[0], parts[1])


def scalar_supermap(alg: SuperAlgebra, shape: tuple, f: Poly) -> SuperMap:
    """Multiplication by an even base element on the free module of the shape."""
    copies = shape[0] + shape[1]
    entries = {(u, u): (((), f),) for u in range(copies)}
    return free_supermap(alg, shape, shape, entries)


def koszul_complex_super(alg: SuperAlgebra, elements: Sequence[Poly]) -> SuperComplex:
    """Tensor of the two-term complexes R -f-> R; realizes V(elements)."""
    if not elements:
        return single_supercomplex(ring_supermodule(alg), 0, (1, 0))
    out = None
    for f in elements:
        f_map = scalar_supermap(alg, (1, 0), f)
        step = SuperComplex(alg, 0, (f_map.source, f_map.target), (f_map,),
                            ((1, 0), (1, 0)))
        out = step if out is None else tensor_supercomplexes(out, step)
    return out


# -- maps of supermodules --------------------------------------------------------------


@dataclass(frozen=True)
class SuperMap:
    """Even map of supermodules: a pair of component maps commuting with scalars."""

    source: SuperModule
    target: SuperModule
    even: ModuleMap
    odd: ModuleMap

    def validate(self) -> None:
        if self.source.algebra != self.target.algebra:
            raise DomainMismatchError("map between different superalgebras")
        self.even.check_well_defined()
        self.odd.check_well_defined()
        parts = (self.even, self.odd)
        for i in (0, 1):
            src = self.source.component(i)
            for s in self.source.algebra.nonempty_subsets():
                t = (i + len(s)) % 2
                tgt = self.target.component(t)
                for j in range(src.rank):
                    via_map = self.target.apply_word(
                        i, s, parts[i].columns[j]
                    )
                    via_action = parts[t].apply_vector(
                        self.source.action_columns(i, s)[j]
                    )
                    if not tgt.contains_in_relations(vec_sub(via_map, via_action)):
                        raise ValidationError(
                            f"map does not commute with theta word {s} at parity {i}"
                        )

    def compose(self, first: "SuperMap") -> "SuperMap":
        return SuperMap(first.source, self.target,
                        self.even.compose(first.even), self.odd.compose(first.odd))

    def is_zero_map(self) -> bool:
        return self.even.is_zero_map() and self.odd.is_zero_map()

    def is_isomorphism(self) -> bool:
        return map_is_isomorphism(self.even) and map_is_isomorphism(self.odd)


def zero_supermap(source: SuperModule, target: SuperModule) -> SuperMap:
    return SuperMap(source, target,
                    ModuleMap.zero(source.even, target.even),
                    ModuleMap.zero(source.odd, target.odd))


# -- tensor product ---------------------------------------------------------------------


def tensor_blocks(parity: int) -> tuple:
    """Component pairs feeding the given parity, in fixed order."""
    return ((0, 0), (1, 1)) if parity == 0 else ((0, 1), (1, 0))


def _block_layout(m: SuperModule, n: SuperModule, parity: int):
    """(block list, offsets, total rank) for the tensor component."""
    blocks = tensor_blocks(parity)
    offsets = []
    total = 0
    for i, j in blocks:
        offsets.append(total)
        total += m.component(i).rank * n.component(j).rank
    return blocks, offsets, total


def tensor_index(m: SuperModule, n: SuperModule, parity: int,
                 i: int, j: int, p: int, q: int) -> int:
    blocks, offsets, _ = _block_layout(m, n, parity)
    for b, (bi, bj) in enumerate(blocks):
        if (bi, bj) == (i % 2, j % 2):
            return offsets[b] + p * n.component(j).rank + q
    raise ValidationError("component pair does not land in this parity")


def koszul_tensor(m: SuperModule, n: SuperModule) -> SuperModule:
    """M (x) N over the superalgebra, with odd scalars moved by the sign rule.

    Components are direct sums of componentwise tensors; relations add the
    moves (theta u) (x) v = (-1)^{|u|} u (x) (theta v) for each single odd
    generator, which generate all scalar moves.  Actions go through the
    left factor.
    """
    if m.algebra != n.algebra:
        raise DomainMismatchError("tensor over different superalgebras")
    alg = m.algebra
    ring = alg.base

    comps = {}
    for parity in (0, 1):
        blocks, offsets, total = _block_layout(m, n, parity)
        base = None
        for i, j in blocks:
            piece = module_tensor(m.component(i), n.component(j))
            base = piece if base is None else direct_sum(base, piece)
        if base is None:
            base = PresentedModule.zero(ring)
        rels = list(base.relations)
        for i, j in tensor_blocks(1 - parity):
            sign = ring.one() if i % 2 == 0 else -ring.one()
            for t in range(alg.odd_rank):
                mcols = m.action_columns(i, (t,))
                ncols = n.action_columns(j, (t,))
                for p in range(m.component(i).rank):
                    for q in range(n.component(j).rank):
                        rel = [ring.zero()] * total
                        for k, c in enumerate(mcols[p]):
                            if not c.is_zero():
                                idx = tensor_index(m, n, parity, i + 1, j, k, q)
                                rel[idx] = rel[idx] + c
                        for l, c in enumerate(ncols[q]):
                            if not c.is_zero():
                                idx = tensor_index(m, n, parity, i, j + 1, p, l)
                                rel[idx] = rel[idx] - sign * c
                        if not vec_is_zero(rel):
                            rels.append(tuple(rel))
        comps[parity] = PresentedModule(ring, total, tuple(rels))

    actions = []
    for parity in (0, 1):
        blocks, offsets, total = _block_layout(m, n, parity)
        for s in alg.nonempty_subsets():
            tparity = (parity + len(s)) % 2
            _, _, ttotal = _block_layout(m, n, tparity)
            cols = []
            for i, j in blocks:
                mcols = m.action_columns(i, s)
                for p in range(m.component(i).rank):
                    for q in range(n.component(j).rank):
                        col = [ring.zero()] * ttotal
                        for k, c in enumerate(mcols[p]):
                            if not c.is_zero():
                                idx = tensor_index(m, n, tparity, i + len(s), j, k, q)
                                col[idx] = col[idx] + c
                        cols.append(tuple(col))
            actions.append((parity, s, tuple(cols)))
    return SuperModule(alg, comps[0], comps[1], tuple(actions))


def unit_isomorphism(m: SuperModule) -> SuperMap:
    """M (x) R -> M sending u (x) theta_S to (-1)^{|u| |S|} theta_S u."""
    alg = m.algebra
    ring = alg.base
    r = ring_supermodule(alg)
    src = koszul_tensor(m, r)
    bases = (alg.basis(0), alg.basis(1))
    parts = []
    for parity in (0, 1):
        blocks, _, _ = _block_layout(m, r, parity)
        tgt = m.component(parity)
        cols = []
        for i, j in blocks:
            for p in range(m.component(i).rank):
                for s in bases[j]:
                    img = m.apply_word(i, s, unit_vector(ring, m.component(i).rank, p))
                    if (i % 2) * (len(s) % 2) == 1:
                        img = tuple(-q for q in img)
                    cols.append(img)
        parts.append(ModuleMap(src.component(parity), tgt, tuple(cols)))
    return SuperMap(src, m, parts[0], parts[1])


def parity_shift_isomorphism(m: SuperModule, n: SuperModule) -> SuperMap:
    """(Pi M) (x) N -> Pi(M (x) N); the sign tracks the right-factor parity."""
    alg = m.algebra
    ring = alg.base
    src = koszul_tensor(parity_change(m), n)
    tgt = parity_change(koszul_tensor(m, n))
    pm = parity_change(m)
    parts = []
    for parity in (0, 1):
        blocks, _, _ = _block_layout(pm, n, parity)
        cols = []
        for i, j in blocks:
            # generator (p, q) of (Pi M)^i (x) N^j is (p, q) of M^{1-i} (x) N^j,
            # which sits in (M (x) N)^{1 - parity} = target parity component
            for p in range(pm.component(i).rank):
                for q in range(n.component(j).rank):
                    col = [ring.zero()] * tgt.component(parity).rank
                    idx = tensor_index(m, n, 1 - parity, i + 1, j, p, q)
                    col[idx] = -ring.one() if j % 2 == 1 else ring.one()
                    cols.append(tuple(col))
        parts.append(ModuleMap(src.component(parity), tgt.component(parity),
                               tuple(cols)))
    return SuperMap(src, tgt, parts[0], parts[1])


def right_shift_isomorphism(m: SuperModule, n: SuperModule) -> SuperMap:
    """M (x) (Pi N) -> Pi(M (x) N); no sign is needed on this side."""
    alg = m.algebra
    ring = alg.base
    pn = parity_change(n)
    src = koszul_tensor(m, pn)
    tgt = parity_change(koszul_tensor(m, n))
    parts = []
    for parity in (0, 1):
        blocks, _, _ = _block_layout(m, pn, parity)
        cols = []
        for i, j in blocks:
            for p in range(m.component(i).rank):
                for q in range(pn.component(j).rank):
                    col = [ring.zero()] * tgt.component(parity).rank
                    idx = tensor_index(m, n, 1 - parity, i, j + 1, p, q)
                    col[idx] = ring.one()
                    cols.append(tuple(col))
        parts.append(ModuleMap(src.component(parity), tgt.component(parity),
                               tuple(cols)))
    return SuperMap(src, tgt, parts[0], parts[1])


# -- complexes ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SuperComplex:
    """Bounded complex of supermodules with even differentials.

    free_shapes, when present, witnesses that every term was produced by
    the standard free construction; entry k is the (even, odd) rank over
    the whole algebra of the term in degree start + k.
    """

    algebra: SuperAlgebra
    start: int
    terms: tuple
    maps: tuple
    free_shapes: Optional[tuple] = None

    def __post_init__(self) -> None:
        if len(self.maps) != max(len(self.terms) - 1, 0):
            raise ValidationError("need one differential between consecutive terms")
        if self.free_shapes is not None and len(self.free_shapes) != len(self.terms):
            raise ValidationError("one free shape per term required")

    def degrees(self) -> range:
        return range(self.start, self.start + len(self.terms))

    def term(self, i: int) -> SuperModule:
        if i in self.degrees():
            return self.terms[i - self.start]
        return zero_supermodule(self.algebra)

    def map_from(self, i: int) -> Optional[SuperMap]:
        k = i - self.start
        if 0 <= k < len(self.maps):
            return self.maps[k]
        return None

    def is_perfect(self) -> bool:
        return self.free_shapes is not None

    def validate(self) -> None:
        for t in self.terms:
            if t.algebra != self.algebra:
                raise DomainMismatchError("term over a different superalgebra")
        for k, f in enumerate(self.maps):
            if f.source != self.terms[k] or f.target != self.terms[k + 1]:
                raise ValidationError(f"differential {k} does not match its terms")
            f.validate()
        for k in range(len(self.maps) - 1):
            if not self.maps[k + 1].compose(self.maps[k]).is_zero_map():
                raise ValidationError(f"d^2 is nonzero starting in slot {k}")


def single_supercomplex(m: SuperModule, degree: int = 0,
                        free_shape: Optional[tuple] = None) -> SuperComplex:
    shapes = (free_shape,) if free_shape is not None else None
    return SuperComplex(m.algebra, degree, (m,), (), shapes)


def component_complex(c: SuperComplex, parity: int) -> PresentedComplex:
    ring = c.algebra.base
    mods = tuple(t.component(parity) for t in c.terms)
    maps = tuple((f.even if parity % 2 == 0 else f.odd) for f in c.maps)
    if not mods:
        mods = (PresentedModule.zero(ring),)
        maps = ()
    return PresentedComplex(ring, c.start, mods, maps)


def shift_supercomplex(c: SuperComplex, k: int = 1) -> SuperComplex:
    """c[k]: degree n picks up the old degree n + k; odd k flips the signs."""
    if k % 2 == 0:
        maps = c.maps
    else:
        maps = tuple(
            SuperMap(f.source, f.target,
                     ModuleMap(f.even.source, f.even.target,
                               tuple(tuple(-e for e in col) for col in f.even.columns)),
                     ModuleMap(f.odd.source, f.odd.target,
                               tuple(tuple(-e for e in col) for col in f.odd.columns)))
            for f in c.maps
        )
    return SuperComplex(c.algebra, c.start - k, c.terms, maps, c.free_shapes)


def _embed_cols(cols, before: int, after: int, ring: PolyRing):
    pad_l = zero_vector(ring, before)
    pad_r = zero_vector(ring, after)
    return tuple(pad_l + tuple(col) + pad_r for col in cols)


def direct_sum_supercomplex(a: SuperComplex, b: SuperComplex) -> SuperComplex:
    if a.algebra != b.algebra:
        raise DomainMismatchError("summands over different superalgebras")
    ring = a.algebra.base
    lo = min(a.start, b.start)
    hi = max(a.start + len(a.terms), b.start + len(b.terms))
    terms, maps, shapes = [], [], []
    for n in range(lo, hi):
        terms.append(direct_sum_super(a.term(n), b.term(n)))
        sa = _term_shape(a, n)
        sb = _term_shape(b, n)
        shapes.append(None if sa is None or sb is None
                      else (sa[0] + sb[0], sa[1] + sb[1]))
    for n in range(lo, hi - 1):
        fa = a.map_from(n) or zero_supermap(a.term(n), a.term(n + 1))
        fb = b.map_from(n) or zero_supermap(b.term(n), b.term(n + 1))
        parts = []
        for parity in (0, 1):
            ca = fa.even if parity == 0 else fa.odd
            cb = fb.even if parity == 0 else fb.odd
            cols = _embed_cols(ca.columns, 0, cb.target.rank, ring) + _embed_cols(
                cb.columns, ca.target.rank, 0, ring)
            parts.append(ModuleMap(
                terms[n - lo].component(parity),
                terms[n + 1 - lo].component(parity), cols))
        maps.append(SuperMap(terms[n - lo], terms[n + 1 - lo], parts[0], parts[1]))
    all_shapes = tuple(shapes) if all(s is not None for s in shapes) else None
    return SuperComplex(a.algebra, lo, tuple(terms), tuple(maps), all_shapes)


def _term_shape(c: SuperComplex, n: int):
    if n not in c.degrees():
        return (0, 0)
    if c.free_shapes is None:
        return None
    return c.free_shapes[n - c.start]


def tensor_map_left(f: SuperMap, n: SuperModule) -> SuperMap:
    """f (x) id on the standard tensor presentations."""
    ring = f.source.algebra.base
    src = koszul_tensor(f.source, n)
    tgt = koszul_tensor(f.target, n)
    fparts = (f.even, f.odd)
    parts = []
    for parity in (0, 1):
        cols = []
        for i, j in tensor_blocks(parity):
            fcols = fparts[i].columns
            for p in range(f.source.component(i).rank):
                for q in range(n.component(j).rank):
                    col = [ring.zero()] * tgt.component(parity).rank
                    for k, cf in enumerate(fcols[p]):
                        if not cf.is_zero():
                            idx = tensor_index(f.target, n, parity, i, j, k, q)
                            col[idx] = col[idx] + cf
                    cols.append(tuple(col))
        parts.append(ModuleMap(src.component(parity), tgt.component(parity),
                               tuple(cols)))
    return SuperMap(src, tgt, parts[0], parts[1])


def tensor_map_right(m: SuperModule, g: SuperMap) -> SuperMap:
    """id (x) g; g is even, so no scalar sign appears."""
    ring = m.algebra.base
    src = koszul_tensor(m, g.source)
    tgt = koszul_tensor(m, g.target)
    gparts = (g.even, g.odd)
    parts = []
    for parity in (0, 1):
        cols = []
        for i, j in tensor_blocks(parity):
            gcols = gparts[j].columns
            for p in range(m.component(i).rank):
                for q in range(g.source.component(j).rank):
                    col = [ring.zero()] * tgt.component(parity).rank
                    for l, cg in enumerate(gcols[q]):
                        if not cg.is_zero():
                            idx = tensor_index(m, g.target, parity, i, j, p, l)
                            col[idx] = col[idx] + cg
                    cols.append(tuple(col))
        parts.append(ModuleMap(src.component(parity), tgt.component(parity),
                               tuple(cols)))
    return SuperMap(src, tgt, parts[0], parts[1])


def tensor_supercomplexes(c: SuperComplex, d: SuperComplex) -> SuperComplex:
    """Total complex of the termwise tensor; 1 (x) d picks up the sign (-1)^i."""
    if c.algebra != d.algebra:
        raise DomainMismatchError("tensor over different superalgebras")
    alg = c.algebra
    ring = alg.base
    lo = c.start + d.start
    hi = (c.start + len(c.terms) - 1) + (d.start + len(d.terms) - 1)
    pairs = {}
    ten = {}
    for n in range(lo, hi + 1):
        pairs[n] = [(i, n - i) for i in c.degrees() if (n - i) in d.degrees()]
        for i, j in pairs[n]:
            ten[(i, j)] = koszul_tensor(c.term(i), d.term(j))
    terms = []
    for n in range(lo, hi + 1):
        t = None
        for key in pairs[n]:
            t = ten[key] if t is None else direct_sum_super(t, ten[key])
        terms.append(t if t is not None else zero_supermodule(alg))
    maps = []
    for n in range(lo, hi):
        parts = []
        for parity in (0, 1):
            src_mod = terms[n - lo].component(parity)
            tgt_mod = terms[n + 1 - lo].component(parity)
            tgt_offsets = {}
            off = 0
            for key in pairs[n + 1]:
                tgt_offsets[key] = off
                off += ten[key].component(parity).rank
            cols = []
            for i, j in pairs[n]:
                block_cols = [
                    [ring.zero()] * tgt_mod.rank
                    for _ in range(ten[(i, j)].component(parity).rank)
                ]
                fc = c.map_from(i)
                if fc is not None and (i + 1, j) in tgt_offsets:
                    left = tensor_map_left(fc, d.term(j))
                    lcols = (left.even if parity == 0 else left.odd).columns
                    base = tgt_offsets[(i + 1, j)]
                    for g, col in enumerate(lcols):
                        for k, e in enumerate(col):
                            if not e.is_zero():
                                block_cols[g][base + k] = block_cols[g][base + k] + e
                fd = d.map_from(j)
                if fd is not None and (i, j + 1) in tgt_offsets:
                    right = tensor_map_right(c.term(i), fd)
                    rcols = (right.even if parity == 0 else right.odd).columns
                    sign = ring.one() if i % 2 == 0 else -ring.one()
                    base = tgt_offsets[(i, j + 1)]
                    for g, col in enumerate(rcols):
                        for k, e in enumerate(col):
                            if not e.is_zero():
                                block_cols[g][base + k] = (
                                    block_cols[g][base + k] + sign * e)
                cols.extend(tuple(col) for col in block_cols)
            parts.append(ModuleMap(src_mod, tgt_mod, tuple(cols)))
        maps.append(SuperMap(terms[n - lo], terms[n + 1 - lo], parts[0], parts[1]))
    shapes = []
    for n in range(lo, hi + 1):
        total = (0, 0)
        for i, j in pairs[n]:
            si, sj = _term_shape(c, i), _term_shape(d, j)
            if si is None or sj is None:
                total = None
                break
            total = (total[0] + si[0] * sj[0] + si[1] * sj[1],
                     total[1] + si[0] * sj[1] + si[1] * sj[0])
        shapes.append(total)
    all_shapes = tuple(shapes) if all(s is not None for s in shapes) else None
    return SuperComplex(alg, lo, tuple(terms), tuple(maps), all_shapes)


def cone_supercomplex(src: SuperComplex, tgt: SuperComplex,
                      chain_maps: Sequence[SuperMap]) -> SuperComplex:
    """Mapping cone of a termwise chain map; degree n holds src_{n+1} + tgt_n."""
    if src.algebra != tgt.algebra:
        raise DomainMismatchError("cone over different superalgebras")
    if len(chain_maps) != len(src.terms):
        raise ValidationError("one chain map per source term required")
    alg = src.algebra
    ring = alg.base
    shifted = {n - 1: src.term(n) for n in src.degrees()}
    lo = min([tgt.start] + list(shifted))
    hi = max([tgt.start + len(tgt.terms) - 1] + list(shifted))
    fmap = {n: chain_maps[n - src.start] for n in src.degrees()}
    terms, shapes = [], []
    for n in range(lo, hi + 1):
        terms.append(direct_sum_super(shifted.get(n, zero_supermodule(alg)),
                                      tgt.term(n)))
        sa = _term_shape(src, n + 1)
        sb = _term_shape(tgt, n)
        shapes.append(None if sa is None or sb is None
                      else (sa[0] + sb[0], sa[1] + sb[1]))
    maps = []
    for n in range(lo, hi):
        s_now = shifted.get(n, zero_supermodule(alg))
        t_now = tgt.term(n)
        s_next = shifted.get(n + 1, zero_supermodule(alg))
        t_next = tgt.term(n + 1)
        ds = src.map_from(n + 1)
        dt = tgt.map_from(n)
        f = fmap.get(n + 1)
        parts = []
        for parity in (0, 1):
            cols = []
            for p in range(s_now.component(parity).rank):
                left = zero_vector(ring, s_next.component(parity).rank)
                if ds is not None:
                    dcol = (ds.even if parity == 0 else ds.odd).columns[p]
                    left = tuple(-e for e in dcol)
                right = zero_vector(ring, t_next.component(parity).rank)
                if f is not None:
                    right = (f.even if parity == 0 else f.odd).columns[p]
                cols.append(tuple(left) + tuple(right))
            for p in range(t_now.component(parity).rank):
                right = zero_vector(ring, t_next.component(parity).rank)
                if dt is not None:
                    right = (dt.even if parity == 0 else dt.odd).columns[p]
                cols.append(zero_vector(ring, s_next.component(parity).rank)
                            + tuple(right))
            parts.append(ModuleMap(terms[n - lo].component(parity),
                                   terms[n + 1 - lo].component(parity),
                                   tuple(cols)))
        maps.append(SuperMap(terms[n - lo], terms[n + 1 - lo], parts[0], parts[1]))
    all_shapes = tuple(shapes) if all(s is not None for s in shapes) else None
    return SuperComplex(alg, lo, tuple(terms), tuple(maps), all_shapes)


# -- supports ----------------------------------------------------------------------------


def support_super(m: SuperModule) -> ClosedSet:
    """Union of the component supports; V of the intersected annihilators."""
    ring = m.algebra.base
    se = ClosedSet(ring, tuple(annihilator(m.even)))
    so = ClosedSet(ring, tuple(annihilator(m.odd)))
    return closed_union(se, so)


def supph_super(c: SuperComplex) -> ClosedSet:
    """Union over degrees and parities of the cohomology supports."""
    ring = c.algebra.base
    parts = []
    for parity in (0, 1):
        pc = component_complex(c, parity)
        for i in pc.degrees():
            h = cohomology(pc, i)
            parts.append(ClosedSet(ring, tuple(annihilator(h))))
    return closed_union_all(ring, parts)


def vanishes_at_site(m: SuperModule, site) -> bool:
    from .geometry import site_in_closed

    ring = m.algebra.base
    if site.ring != ring:
        raise DomainMismatchError("site over a different ring")
    se = ClosedSet(ring, tuple(annihilator(m.even)))
    so = ClosedSet(ring, tuple(annihilator(m.odd)))
    return not site_in_closed(site, se) and not site_in_closed(site, so)


# -- the odd-generator filtration ---------------------------------------------------------


@dataclass(frozen=True)
class JLayer:
    """One step J^i M of the odd-ideal filtration with its subquotient."""

    stage: SuperModule
    gens_even: tuple
    gens_odd: tuple
    quotient_even: PresentedModule
    quotient_odd: PresentedModule


def _prune_generators(vectors, ambient: PresentedModule) -> list:
    kept = []
    for v in vectors:
        if ambient.contains_in_relations(v):
            continue
        if kept and submodule_lift(v, kept, ambient) is not None:
            continue
        kept.append(tuple(v))
    return kept


def _stage_supermodule(m: SuperModule, gens_even, gens_odd) -> SuperModule:
    alg = m.algebra
    sub0, _ = submodule_presentation(list(gens_even), m.even)
    sub1, _ = submodule_presentation(list(gens_odd), m.odd)
    gens = (gens_even, gens_odd)
    subs = (sub0, sub1)
    theta = []
    for t in range(alg.odd_rank):
        per_parity = []
        for i in (0, 1):
            cols = []
            for v in gens[i]:
                w = m.apply_word(i, (t,), v)
                lifted = submodule_lift(w, list(gens[1 - i]), m.component(1 - i))
                if lifted is None:
                    raise ValidationError("odd action leaves the filtration stage")
                cols.append(tuple(lifted))
            per_parity.append(tuple(cols))
        theta.append((per_parity[0], per_parity[1]))
    actions = assemble_actions(alg, sub0, sub1, theta)
    return SuperModule(alg, sub0, sub1, actions)


def j_filtration(m: SuperModule) -> tuple:
    """Stages M, JM, J^2 M, ... with subquotients, until the ideal clears.

    J is the two-sided ideal of the odd generators; the filtration must
    vanish after at most odd_rank + 1 steps, anything longer is rejected.
    """
    alg = m.algebra
    gens_even = _prune_generators(
        [unit_vector(alg.base, m.even.rank, j) for j in range(m.even.rank)], m.even)
    gens_odd = _prune_generators(
        [unit_vector(alg.base, m.odd.rank, j) for j in range(m.odd.rank)], m.odd)
    layers = []
    step = 0
    while gens_even or gens_odd:
        if step > alg.odd_rank:
            raise ValidationError("odd ideal powers do not terminate")
        next_even = _prune_generators(
            [m.apply_word(1, (t,), v) for v in gens_odd for t in range(alg.odd_rank)],
            m.even)
        next_odd = _prune_generators(
            [m.apply_word(0, (t,), v) for v in gens_even for t in range(alg.odd_rank)],
            m.odd)
        stage = _stage_supermodule(m, tuple(gens_even), tuple(gens_odd))
        extra_even = []
        for w in next_even:
            lifted = submodule_lift(w, list(gens_even), m.even)
            if lifted is None:
                raise ValidationError("next stage does not embed in the current one")
            extra_even.append(tuple(lifted))
        extra_odd = []
        for w in next_odd:
            lifted = submodule_lift(w, list(gens_odd), m.odd)
            if lifted is None:
                raise ValidationError("next stage does not embed in the current one")
            extra_odd.append(tuple(lifted))
        layers.append(JLayer(
            stage, tuple(gens_even), tuple(gens_odd),
            PresentedModule(alg.base, stage.even.rank,
                            stage.even.relations + tuple(extra_even)),
            PresentedModule(alg.base, stage.odd.rank,
                            stage.odd.relations + tuple(extra_odd)),
        ))
        gens_even, gens_odd = next_even, next_odd
        step += 1
    return tuple(layers)
