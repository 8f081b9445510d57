"""Subgroup-class lattice of S_k and exact Burnside-ring arithmetic.

A lattice holds one representative per conjugacy class of subgroups of S_k
(k <= 6), its normalizer and Weyl order, the containment partial order, and
the table n(L, H) = |N(L, H)| / |N(H)| counting conjugates of L inside H.
On top of that, BurnsideElement implements exact ring arithmetic where the
product of two generators is resolved by the descending recursion

    n_L = (n(L,K)|W(K)| n(L,H)|W(H)| - sum_{(Lt)>(L)} n(L,Lt) n_Lt |W(Lt)|)
          / |W(L)|

with every division asserted exact.  The mark homomorphism
mark_L(H) = n(L,H)|W(H)| is exposed separately: it is injective, so mark
vectors are the independent oracle for every product.

Permutations are tuples of images on {0, ..., k-1}; subgroups are frozensets
of such tuples.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field
from .errors import CapacityError, ConsistencyError, DomainError

Perm = tuple[int, ...]

MAX_LATTICE_K = 6


# ---------------------------------------------------------------------------
# permutation helpers
# ---------------------------------------------------------------------------

def identity_perm(k: int) -> Perm:
    return tuple(range(k))


def compose(p: Perm, q: Perm) -> Perm:
    """(p*q)(i) = p(q(i)): apply q first."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def cycle_type(p: Perm) -> tuple[int, ...]:
    """Cycle lengths, weakly decreasing, including fixed points."""
    seen = [False] * len(p)
    lens = []
    for i in range(len(p)):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        lens.append(n)
    return tuple(sorted(lens, reverse=True))


def perm_order(p: Perm) -> int:
    from math import lcm

    return lcm(*cycle_type(p))


def perm_to_cycles(p: Perm) -> str:
    """1-based disjoint cycle notation, '()' for the identity."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc, j = [], i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = p[j]
        parts.append("(" + " ".join(str(c) for c in cyc) + ")")
    return "".join(parts) if parts else "()"


def cycles_to_perm(text: str, k: int) -> Perm:
    """Inverse of perm_to_cycles."""
    images = list(range(k))
    text = text.strip()
    if text == "()":
        return tuple(images)
    depth = 0
    cyc: list[int] = []
    tok = ""

    def flush_tok():
        if tok:
            cyc.append(int(tok) - 1)

    for ch in text:
        if ch == "(":
            depth += 1
            cyc = []
        elif ch == ")":
            flush_tok()
            tok = ""
            depth -= 1
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        elif ch in " ,":
            flush_tok()
            tok = ""
        else:
            tok += ch
    if depth != 0:
        raise DomainError(f"unbalanced cycle notation: {text!r}")
    return tuple(images)


def closure(generators: list[Perm], k: int, limit: int | None = None) -> frozenset[Perm]:
    """Subgroup generated by the given permutations (orbit algorithm)."""
    ident = identity_perm(k)
    elems = {ident}
    frontier = [ident]
    gens = [g for g in generators if g != ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = compose(g, h)
                if x not in elems:
                    elems.add(x)
                    nxt.append(x)
                    if limit is not None and len(elems) > limit:
                        raise CapacityError("closure exceeded limit")
        frontier = nxt
    return frozenset(elems)


# ---------------------------------------------------------------------------
# lattice data model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupClass:
    """One conjugacy class of subgroups, carried by a chosen representative."""

    index: int
    order: int
    normalizer_order: int
    weyl_order: int
    canonical_key: tuple
    label: str
    generators: tuple[Perm, ...]
    representative: frozenset[Perm] = field(repr=False, hash=False, compare=False)
    n_conjugates: int = 0

    def __hash__(self):  # identity within one lattice
        return hash((self.index, self.order, self.canonical_key))


@dataclass
class SubgroupLattice:
    """All subgroup classes of S_k with order relation and n(L,H) table."""

    k: int
    classes: list[SubgroupClass]
    # leq[(i, j)] True iff some conjugate of class i is contained in class j
    leq: dict[tuple[int, int], bool]
    # n_table[(i, j)] = n(L_i, H_j); zero entries omitted
    n_table: dict[tuple[int, int], int]

    @property
    def group_order(self) -> int:
        import math

        return math.factorial(self.k)

    @property
    def trivial_index(self) -> int:
        return 0

    @property
    def full_index(self) -> int:
        return len(self.classes) - 1

    def n(self, li: int, hi: int) -> int:
        return self.n_table.get((li, hi), 0)

    def mark(self, li: int, hi: int) -> int:
        """|(G/H_hi)^{L_li}| = n(L,H)|W(H)| -- the table of marks."""
        return self.n(li, hi) * self.classes[hi].weyl_order

    def class_by_label(self, label: str) -> SubgroupClass:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)

    def strictly_above(self, li: int) -> list[int]:
        return [j for j in range(len(self.classes))
                if j != li and self.leq.get((li, j), False)]

    def total_subgroups(self) -> int:
        return sum(c.n_conjugates for c in self.classes)


# ---------------------------------------------------------------------------
# lattice construction
# ---------------------------------------------------------------------------

def _all_perms(k: int) -> list[Perm]:
    return [tuple(p) for p in itertools.permutations(range(k))]


class _GroupTables:
    """Index-space multiplication/conjugation tables for S_k (k <= 6)."""

    def __init__(self, k: int):
        self.k = k
        self.perms = _all_perms(k)
        self.index = {p: i for i, p in enumerate(self.perms)}
        n = len(self.perms)
        self.mul = [[0] * n for _ in range(n)]
        for i, p in enumerate(self.perms):
            row = self.mul[i]
            for j, q in enumerate(self.perms):
                row[j] = self.index[compose(p, q)]
        self.inv = [self.index[invert(p)] for p in self.perms]
        # conj[g][h] = g h g^-1
        self.conj = [[0] * n for _ in range(n)]
        for g in range(n):
            gi = self.inv[g]
            mg = self.mul[g]
            for h in range(n):
                self.conj[g][h] = self.mul[mg[h]][gi]

    def conjugate_set(self, g: int, sub: frozenset[int]) -> frozenset[int]:
        cg = self.conj[g]
        return frozenset(cg[h] for h in sub)

    def close_indices(self, gens: list[int]) -> frozenset[int]:
        ident = self.index[identity_perm(self.k)]
        elems = {ident}
        frontier = [ident]
        gens = [g for g in gens if g != ident]
        mul = self.mul
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    x = mul[g][h]
                    if x not in elems:
                        elems.add(x)
                        nxt.append(x)
            frontier = nxt
        return frozenset(elems)


def _fingerprint(tables: _GroupTables, sub: frozenset[int]) -> tuple:
    types = sorted(cycle_type(tables.perms[h]) for h in sub)
    return (len(sub), tuple(types))


def _isomorphism_label(tables: _GroupTables, sub: frozenset[int]) -> str:
    """Coarse structural name: Z_n, D_n, V4, A_m, S_m, F20, or G<order>.

    Conjugacy classes sharing a name get primes appended later.  The names
    follow the dihedral convention D_n = symmetries of the n-gon (order 2n);
    an order-2 class generated by a single transposition is called D1 to
    distinguish it from Z2 classes generated by products of 2-cycles.
    """
    order = len(sub)
    perms = [tables.perms[h] for h in sub]
    k = tables.k
    if order == 1:
        return "Z1"
    elem_orders = sorted(perm_order(p) for p in perms)
    cyclic = elem_orders[-1] == order
    if order == 2:
        nontriv = next(p for p in perms if p != identity_perm(k))
        n2 = sum(1 for c in cycle_type(nontriv) if c == 2)
        return "D1" if n2 == 1 else "Z2"
    if cyclic:
        return f"Z{order}"
    abelian = all(
        tables.mul[a][b] == tables.mul[b][a] for a in sub for b in sub
    )
    if order == 4 and abelian:
        all_even = all(_is_even(p) for p in perms)
        return "V4" if all_even else "D2"
    moved = [i for i in range(k) if any(p[i] != i for p in perms)]
    m = len(moved)
    import math

    if order == math.factorial(m):
        # symmetric group on its moved points?
        if _acts_fully(perms, moved, symmetric=True):
            return f"S{m}"
    if order == math.factorial(m) // 2 and all(_is_even(p) for p in perms):
        if _acts_fully(perms, moved, symmetric=False):
            return f"A{m}"
    if order == 20:
        return "F20"
    if _is_dihedral(tables, sub):
        return f"D{order // 2}"
    if order == 12 and all(_is_even(p) for p in perms):
        return "A4"
    return f"G{order}"


def _is_even(p: Perm) -> bool:
    return sum(c - 1 for c in cycle_type(p)) % 2 == 0


def _acts_fully(perms: list[Perm], moved: list[int], symmetric: bool) -> bool:
    """Does the restriction to the moved points give the full S_m (or A_m)?"""
    images = {tuple(p[i] for i in moved) for p in perms}
    import math

    want = math.factorial(len(moved)) // (1 if symmetric else 2)
    return len(images) == len(perms) == want


def _is_dihedral(tables: _GroupTables, sub: frozenset[int]) -> bool:
    order = len(sub)
    if order % 2 or order < 6:
        return False
    n = order // 2
    rotations = [h for h in sub if perm_order(tables.perms[h]) == n]
    if not rotations:
        return False
    r = rotations[0]
    cyc = tables.close_indices([r])
    if len(cyc) != n:
        return False
    return all(
        perm_order(tables.perms[s]) == 2 for s in sub if s not in cyc
    ) and len(sub - cyc) == n


def build_lattice(k: int) -> SubgroupLattice:
    """Enumerate all conjugacy classes of subgroups of S_k, 2 <= k <= 6.

    Classes are found by closing class representatives against every cyclic
    subgroup (joining a representative with all conjugates of a cyclic group
    reaches every class; subgroups are generated by their cyclic subgroups).
    Deduplication goes through an order/cycle-type fingerprint first and an
    explicit conjugator search only within fingerprint buckets.
    """
    if not 2 <= k <= MAX_LATTICE_K:
        raise DomainError(f"lattice construction supports 2 <= k <= {MAX_LATTICE_K}, got {k}")

    tables = _GroupTables(k)
    n_g = len(tables.perms)
    ident = tables.index[identity_perm(k)]

    # every cyclic subgroup, as index sets
    cyclic: dict[frozenset[int], int] = {}
    for g in range(n_g):
        c = tables.close_indices([g])
        cyclic.setdefault(c, g)
    cyclic_list = sorted(cyclic.items(), key=lambda it: (len(it[0]), sorted(it[0])))

    # class discovery: map subgroup set -> class id, reps list
    reps: list[frozenset[int]] = []
    rep_gens: list[list[int]] = []
    set_to_class: dict[frozenset[int], int] = {}
    buckets: dict[tuple, list[int]] = {}

    def classify(sub: frozenset[int], gens: list[int]) -> int:
        known = set_to_class.get(sub)
        if known is not None:
            return known
        fp = _fingerprint(tables, sub)
        for ci in buckets.get(fp, []):
            target = reps[ci]
            for g in range(n_g):
                if tables.conjugate_set(g, sub) == target:
                    set_to_class[sub] = ci
                    return ci
        ci = len(reps)
        reps.append(sub)
        rep_gens.append(list(gens))
        buckets.setdefault(fp, []).append(ci)
        set_to_class[sub] = ci
        return ci

    trivial = frozenset({ident})
    classify(trivial, [])
    frontier = [0]
    done: set[int] = set()
    while frontier:
        ci = frontier.pop()
        if ci in done:
            continue
        done.add(ci)
        base = reps[ci]
        gens = rep_gens[ci]
        for csub, cgen in cyclic_list:
            if csub <= base:
                continue
            joined = tables.close_indices(gens + [cgen])
            cj = classify(joined, gens + [cgen])
            if cj not in done:
                frontier.append(cj)

    # normalizers and distinct conjugates per class
    norm_orders: list[int] = []
    conjugates: list[list[frozenset[int]]] = []
    for sub in reps:
        seen: set[frozenset[int]] = set()
        stab = 0
        for g in range(n_g):
            cs = tables.conjugate_set(g, sub)
            if cs == sub:
                stab += 1
            seen.add(cs)
        norm_orders.append(stab)
        conjugates.append(sorted(seen, key=sorted))
        if stab * len(seen) != n_g:
            raise ConsistencyError("orbit-stabilizer mismatch in normalizer computation")

    # deterministic class ordering: (order, fingerprint, normalizer order)
    order_key = [
        (len(reps[i]), _fingerprint(tables, reps[i]), norm_orders[i])
        for i in range(len(reps))
    ]
    perm_order_ids = sorted(range(len(reps)), key=lambda i: order_key[i])
    old_to_new = {old: new for new, old in enumerate(perm_order_ids)}

    # labels with disambiguation primes
    raw_labels = [_isomorphism_label(tables, reps[i]) for i in perm_order_ids]
    seen_labels: dict[str, int] = {}
    labels = []
    for lab in raw_labels:
        cnt = seen_labels.get(lab, 0)
        labels.append(lab + "'" * cnt)
        seen_labels[lab] = cnt + 1

    classes: list[SubgroupClass] = []
    for new_i, old_i in enumerate(perm_order_ids):
        sub = reps[old_i]
        gens_idx = rep_gens[old_i]
        if not gens_idx:
            gens_idx = [ident]
        order = len(sub)
        nrm = norm_orders[old_i]
        classes.append(
            SubgroupClass(
                index=new_i,
                order=order,
                normalizer_order=nrm,
                weyl_order=nrm // order,
                canonical_key=_fingerprint(tables, sub),
                label=labels[new_i],
                generators=tuple(tables.perms[g] for g in _minimal_gens(tables, sub, gens_idx)),
                representative=frozenset(tables.perms[h] for h in sub),
                n_conjugates=len(conjugates[old_i]),
            )
        )

    # containment order / n(L,H) via distinct conjugates of L inside H
    n_table: dict[tuple[int, int], int] = {}
    leq: dict[tuple[int, int], bool] = {}
    for li, old_l in enumerate(perm_order_ids):
        lsize = len(reps[old_l])
        n_l = norm_orders[old_l]
        for hi, old_h in enumerate(perm_order_ids):
            hsub = reps[old_h]
            if len(hsub) % lsize:
                continue
            count = sum(1 for cs in conjugates[old_l] if cs <= hsub)
            if count == 0:
                continue
            num = count * n_l
            n_h = norm_orders[old_h]
            if num % n_h:
                raise ConsistencyError("n(L,H) not integral")
            n_table[(li, hi)] = num // n_h
            leq[(li, hi)] = True

    return SubgroupLattice(k=k, classes=classes, leq=leq, n_table=n_table)


def _minimal_gens(tables: _GroupTables, sub: frozenset[int], seed: list[int]) -> list[int]:
    """Trim a generating list greedily; keeps serialization short."""
    gens: list[int] = []
    span: frozenset[int] = frozenset({tables.index[identity_perm(tables.k)]})
    for g in sorted(sub):
        if g in span:
            continue
        gens.append(g)
        span = tables.close_indices(gens)
        if span == sub:
            return gens
    return gens if span == sub else list(seed)


# ---------------------------------------------------------------------------
# n(L,H) lookup (the table is precomputed at build time)
# ---------------------------------------------------------------------------

def n_count(L: SubgroupClass, H: SubgroupClass, lattice: SubgroupLattice) -> int:
    """n(L,H) = |{g : g L g^-1 <= H}| / |N(H)|; zero when (L) is not below (H)."""
    return lattice.n(L.index, H.index)


# ---------------------------------------------------------------------------
# Burnside elements
# ---------------------------------------------------------------------------

@dataclass
class BurnsideElement:
    """Integer formal sum of subgroup classes of a fixed lattice."""

    lattice: SubgroupLattice
    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {i: c for i, c in self.coeffs.items() if c != 0}

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(lattice: SubgroupLattice) -> "BurnsideElement":
        return BurnsideElement(lattice, {})

    @staticmethod
    def generator(lattice: SubgroupLattice, class_index: int) -> "BurnsideElement":
        return BurnsideElement(lattice, {class_index: 1})

    @staticmethod
    def one(lattice: SubgroupLattice) -> "BurnsideElement":
        return BurnsideElement.generator(lattice, lattice.full_index)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return BurnsideElement(self.lattice, out)

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self + (-other)

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement(self.lattice, {i: -c for i, c in self.coeffs.items()})

    def __rmul__(self, scalar: int) -> "BurnsideElement":
        return BurnsideElement(self.lattice, {i: scalar * c for i, c in self.coeffs.items()})

    def __mul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return multiply(self, other, self.lattice)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BurnsideElement) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- marks ---------------------------------------------------------------
    def mark_vector(self) -> list[int]:
        """mark_L(a) for every class L; the injective ring homomorphism."""
        lat = self.lattice
        n = len(lat.classes)
        out = [0] * n
        for li in range(n):
            out[li] = sum(c * lat.mark(li, hi) for hi, c in self.coeffs.items())
        return out

    def pretty(self) -> str:
        lat = self.lattice
        parts = []
        for i in sorted(self.coeffs, key=lambda i: (lat.classes[i].order, i)):
            c = self.coeffs[i]
            lab = f"({lat.classes[i].label})"
            if c == 1:
                parts.append(f"+ {lab}")
            elif c == -1:
                parts.append(f"- {lab}")
            elif c > 0:
                parts.append(f"+ {c}{lab}")
            else:
                parts.append(f"- {-c}{lab}")
        if not parts:
            return "0"
        head = parts[0].lstrip("+ ").replace("- ", "-", 1) if parts[0].startswith("- ") else parts[0][2:]
        return " ".join([head] + parts[1:])


def solve_from_marks(lattice: SubgroupLattice, marks: dict[int, int] | list[int]) -> BurnsideElement:
    """Invert the (triangular) mark system by descending recursion.

    Classes are processed from large subgroup order to small; strict
    containment (Lt) > (L) forces |Lt| > |L|, so each coefficient only
    depends on already-solved ones.  Non-integral division means the marks
    do not come from an actual element and raises ConsistencyError.
    """
    if isinstance(marks, dict):
        marks = [marks.get(i, 0) for i in range(len(lattice.classes))]
    order_desc = sorted(range(len(lattice.classes)),
                        key=lambda i: -lattice.classes[i].order)
    coeffs: dict[int, int] = {}
    for li in order_desc:
        acc = marks[li]
        for hi in lattice.strictly_above(li):
            c = coeffs.get(hi, 0)
            if c:
                acc -= c * lattice.n(li, hi) * lattice.classes[hi].weyl_order
        w = lattice.classes[li].weyl_order
        if acc % w:
            raise ConsistencyError(
                f"non-integer coefficient at class {lattice.classes[li].label}: {acc}/{w}"
            )
        if acc:
            coeffs[li] = acc // w
    return BurnsideElement(lattice, coeffs)


def multiply(x: BurnsideElement, y: BurnsideElement, lattice: SubgroupLattice) -> BurnsideElement:
    """Exact product via the descending recursion on generator pairs."""
    if x.lattice is not lattice or y.lattice is not lattice:
        raise DomainError("elements belong to a different lattice")
    out = BurnsideElement.zero(lattice)
    for hi, ch in x.coeffs.items():
        for ki, ck in y.coeffs.items():
            prod = _generator_product(lattice, hi, ki)
            out = out + (ch * ck) * prod
    return out


def _generator_product(lattice: SubgroupLattice, hi: int, ki: int) -> BurnsideElement:
    cache = getattr(lattice, "_product_cache", None)
    if cache is None:
        cache = {}
        lattice._product_cache = cache  # type: ignore[attr-defined]
    key = (min(hi, ki), max(hi, ki))
    hit = cache.get(key)
    if hit is not None:
        return hit
    marks = [lattice.mark(li, hi) * lattice.mark(li, ki)
             for li in range(len(lattice.classes))]
    result = solve_from_marks(lattice, marks)
    cache[key] = result
    return result


# ---------------------------------------------------------------------------
# serialization (versioned text cache)
# ---------------------------------------------------------------------------

_CACHE_HEADER = "burnside-lattice v1"


def serialize_lattice(lattice: SubgroupLattice) -> bytes:
    """Byte-stable text format; trailing line carries a CRC32 checksum."""
    lines = [f"{_CACHE_HEADER} k={lattice.k}"]
    for c in lattice.classes:
        gens = ",".join(perm_to_cycles(g) for g in c.generators)
        lines.append(f"{c.index}|{c.order}|{c.normalizer_order}|generators={gens}|{c.label}")
    lines.append("leq:")
    for (li, hi) in sorted(lattice.leq):
        if lattice.leq[(li, hi)]:
            lines.append(f"{li} {hi}")
    lines.append("n:")
    for (li, hi) in sorted(lattice.n_table):
        lines.append(f"{li} {hi} {lattice.n_table[(li, hi)]}")
    body = "\n".join(lines) + "\n"
    checksum = zlib.crc32(body.encode("ascii"))
    return (body + f"checksum {checksum}\n").encode("ascii")


def load_lattice(blob: bytes) -> SubgroupLattice:
    """Rebuild a lattice from serialize_lattice output, verifying the checksum."""
    text = blob.decode("ascii")
    lines = text.splitlines()
    if not lines or not lines[-1].startswith("checksum "):
        raise ConsistencyError("lattice cache missing checksum")
    stated = int(lines[-1].split()[1])
    body = "\n".join(lines[:-1]) + "\n"
    if zlib.crc32(body.encode("ascii")) != stated:
        raise ConsistencyError("lattice cache checksum mismatch")
    header = lines[0]
    if not header.startswith(_CACHE_HEADER):
        raise ConsistencyError(f"unsupported lattice cache version: {header!r}")
    k = int(header.split("k=")[1])

    classes: list[SubgroupClass] = []
    mode = "classes"
    leq: dict[tuple[int, int], bool] = {}
    n_table: dict[tuple[int, int], int] = {}
    counts_by_class: dict[int, int] = {}
    for line in lines[1:-1]:
        if line == "leq:":
            mode = "leq"
            continue
        if line == "n:":
            mode = "n"
            continue
        if mode == "classes":
            idx_s, order_s, nrm_s, gens_s, label = line.split("|")
            gens_text = gens_s.removeprefix("generators=")
            gens = tuple(
                cycles_to_perm(t, k) for t in _split_cycles(gens_text)
            )
            rep = closure(list(gens), k)
            order = int(order_s)
            if len(rep) != order:
                raise ConsistencyError("cached generators do not regenerate the class order")
            nrm = int(nrm_s)
            classes.append(
                SubgroupClass(
                    index=int(idx_s),
                    order=order,
                    normalizer_order=nrm,
                    weyl_order=nrm // order,
                    canonical_key=(order, tuple(sorted(cycle_type(p) for p in rep))),
                    label=label,
                    generators=gens,
                    representative=rep,
                )
            )
        elif mode == "leq":
            li, hi = map(int, line.split())
            leq[(li, hi)] = True
        else:
            li, hi, val = map(int, line.split())
            n_table[(li, hi)] = val
            if li == 0:
                counts_by_class[hi] = val

    import math

    g_order = math.factorial(k)
    classes = [
        SubgroupClass(
            index=c.index,
            order=c.order,
            normalizer_order=c.normalizer_order,
            weyl_order=c.weyl_order,
            canonical_key=c.canonical_key,
            label=c.label,
            generators=c.generators,
            representative=c.representative,
            n_conjugates=g_order // c.normalizer_order,
        )
        for c in classes
    ]
    return SubgroupLattice(k=k, classes=classes, leq=leq, n_table=n_table)


def _split_cycles(text: str) -> list[str]:
    """Split 'g1,g2,...' where each g is cycle notation without commas inside."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur += ch
    if cur:
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# brute-force oracles (used by the verify pipeline and the test suite)
# ---------------------------------------------------------------------------

def orbit_count_product(lattice: SubgroupLattice, hi: int, ki: int) -> dict[int, int]:
    """Coefficients of (H)*(K) by direct orbit counting on G/H x G/K.

    For each pair of cosets the exact stabilizer aHa^-1 n bKb^-1 is computed;
    pairs whose stabilizer equals the class representative L are counted up
    to the N(L)-action.  Independent of the recursion; exponential-ish, keep
    to k <= 5.
    """
    k = lattice.k
    perms = _all_perms(k)
    H = lattice.classes[hi].representative
    K = lattice.classes[ki].representative

    def cosets(sub: frozenset[Perm]) -> list[frozenset[Perm]]:
        seen: set[frozenset[Perm]] = set()
        out = []
        for g in perms:
            cs = frozenset(compose(g, h) for h in sub)
            if cs not in seen:
                seen.add(cs)
                out.append(cs)
        return out

    cos_h = cosets(H)
    cos_k = cosets(K)

    # stabilizer of the coset aS under left translation is aSa^-1
    def stab(cs: frozenset[Perm], sub: frozenset[Perm]) -> frozenset[Perm]:
        a = next(iter(cs))
        ai = invert(a)
        return frozenset(compose(a, compose(s, ai)) for s in sub)

    stab_h = [stab(cs, H) for cs in cos_h]
    stab_k = [stab(cs, K) for cs in cos_k]

    out: dict[int, int] = {}
    rep_sets = {ci: lattice.classes[ci].representative for ci in range(len(lattice.classes))}
    normalizers: dict[int, list[Perm]] = {}
    for ci, rep in rep_sets.items():
        normalizers[ci] = [g for g in perms
                           if frozenset(compose(g, compose(h, invert(g))) for h in rep) == rep]

    # group pairs by exact stabilizer set, count N(L)-orbits of pairs whose
    # stabilizer IS the chosen representative
    for ci, rep in rep_sets.items():
        matched: set[tuple[int, int]] = set()
        for ia, sa in enumerate(stab_h):
            for ib, sb in enumerate(stab_k):
                if sa & sb == rep:
                    matched.add((ia, ib))
        if not matched:
            continue
        # orbits of N(L) acting by left translation on both coordinates
        norm = normalizers[ci]
        coset_index_h = {cs: i for i, cs in enumerate(cos_h)}
        coset_index_k = {cs: i for i, cs in enumerate(cos_k)}
        seen_pairs: set[tuple[int, int]] = set()
        orbits = 0
        for pair in matched:
            if pair in seen_pairs:
                continue
            orbits += 1
            ia, ib = pair
            for g in norm:
                na = coset_index_h[frozenset(compose(g, x) for x in cos_h[ia])]
                nb = coset_index_k[frozenset(compose(g, x) for x in cos_k[ib])]
                seen_pairs.add((na, nb))
        out[ci] = orbits
    return out


def enumerate_all_subgroups(k: int) -> list[frozenset[Perm]]:
    """Exhaustive subgroup enumeration by closing joins with cyclic groups.

    Test oracle for build_lattice; practical for k <= 5.
    """
    perms = _all_perms(k)
    cyclics: set[frozenset[Perm]] = set()
    for p in perms:
        cyclics.add(closure([p], k))
    subs: set[frozenset[Perm]] = set(cyclics)
    frontier = list(cyclics)
    while frontier:
        base = frontier.pop()
        for c in cyclics:
            if c <= base:
                continue
            joined = closure(list(base | c), k)
            if joined not in subs:
                subs.add(joined)
                frontier.append(joined)
    return sorted(subs, key=lambda s: (len(s), sorted(s)))
