"""Comparison of computed width-5 objects against the frozen reference data.

The reference expansions name subgroup classes with conventional symbols
(Z_n, D_n, V4, S4, ...) that identify conjugacy classes, not abstract
isomorphism types: S_5 has two order-2 classes, two Klein classes, and two
order-6 nonabelian classes.  The correspondence between those symbols and
the lattice classes is therefore inferred, not assumed: candidate classes
are filtered by order and structure, and the unique injective assignment
that reproduces every reference expansion as an exact coefficient multiset
is selected and published with the report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .burnside import BurnsideElement, SubgroupClass, SubgroupLattice, perm_order
from .degrees import BasicDegree, BifurcationInvariant
from .symrep import character_table, diag_square_character


def load_golden() -> dict:
    with resources.files("symbreak").joinpath("data/golden_k5.json").open("r") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# structural candidate filters
# ---------------------------------------------------------------------------

def _is_cyclic(cls: SubgroupClass) -> bool:
    return any(perm_order(p) == cls.order for p in cls.representative)


def _is_abelian(cls: SubgroupClass) -> bool:
    from .burnside import compose

    elems = list(cls.representative)
    return all(compose(a, b) == compose(b, a) for a in elems for b in elems)


def _candidates(label: str, order: int, lattice: SubgroupLattice) -> list[int]:
    out = []
    for cls in lattice.classes:
        if cls.order != order:
            continue
        if label.startswith("Z"):
            if not _is_cyclic(cls):
                continue
        elif label == "V4" or label == "D2":
            if not (_is_abelian(cls) and not _is_cyclic(cls)):
                continue
        elif label == "D1":
            pass  # any order-2 class
        elif label.startswith("D"):
            if _is_abelian(cls):
                continue
        elif label.startswith("A"):
            if cls.order not in (12, 60) or not all(
                sum(c - 1 for c in _ct(p)) % 2 == 0 for p in cls.representative
            ):
                continue
        out.append(cls.index)
    return out


def _ct(p):
    from .burnside import cycle_type

    return cycle_type(p)


@dataclass
class NameMap:
    label_to_class: dict[str, int]
    class_to_label: dict[int, str]
    score: int
    total: int
    per_display: dict[str, bool] = field(default_factory=dict)


def _display_targets(golden: dict) -> dict[str, dict[str, int]]:
    targets = {}
    for key, entry in golden["basic_degrees"].items():
        targets[f"degree_{key}"] = entry["terms"]
    for key, entry in golden["invariants"].items():
        targets[f"invariant_{key}"] = entry["terms"]
    return targets


def infer_name_map(
    lattice: SubgroupLattice,
    computed: dict[str, BurnsideElement],
    golden: dict | None = None,
) -> NameMap:
    """Search injective label->class assignments maximizing the number of
    reference expansions reproduced exactly.  computed maps display keys
    (degree_hook, ..., invariant_at_zero, ...) to Burnside elements."""
    if golden is None:
        golden = load_golden()
    targets = _display_targets(golden)
    labels = sorted({lab for terms in targets.values() for lab in terms})
    orders = golden["label_orders"]
    cand = {lab: _candidates(lab, orders[lab], lattice) for lab in labels}

    best: NameMap | None = None
    order_of = sorted(labels, key=lambda lab: len(cand[lab]))

    def score_assignment(assign: dict[str, int]) -> tuple[int, dict[str, bool]]:
        per: dict[str, bool] = {}
        for key, terms in targets.items():
            want = {assign[lab]: c for lab, c in terms.items()}
            got = computed[key].coeffs if key in computed else None
            per[key] = got == want
        return sum(per.values()), per

    def backtrack(i: int, assign: dict[str, int], used: set[int]):
        nonlocal best
        if i == len(order_of):
            sc, per = score_assignment(assign)
            if best is None or sc > best.score:
                best = NameMap(
                    label_to_class=dict(assign),
                    class_to_label={v: k for k, v in assign.items()},
                    score=sc,
                    total=len(targets),
                    per_display=per,
                )
            return
        lab = order_of[i]
        for ci in cand[lab]:
            if ci in used:
                continue
            assign[lab] = ci
            used.add(ci)
            backtrack(i + 1, assign, used)
            used.discard(ci)
            del assign[lab]

    backtrack(0, {}, set())
    if best is None:
        raise RuntimeError("no injective label assignment exists")
    return best


# ---------------------------------------------------------------------------
# full k = 5 comparison
# ---------------------------------------------------------------------------

_GOLDEN_KEY_TO_PARTITION = {
    "hook": (3, 1, 1),
    "two_row": (3, 2),
    "standard": (4, 1),
    "trivial": (5,),
}
_INVARIANT_KEYS = ("at_zero", "at_standard", "at_trivial")


def compare_k5(
    lattice: SubgroupLattice,
    degrees: dict[tuple, BasicDegree],
    invariants: list[BifurcationInvariant],
    golden: dict | None = None,
) -> dict:
    """Match the four basic degrees and three invariants against the frozen
    expansions; returns the inferred name map, per-display verdicts, maximal
    orbit-type comparisons, and any repair notes from the reference data."""
    if golden is None:
        golden = load_golden()
    computed: dict[str, BurnsideElement] = {}
    for key, eta in _GOLDEN_KEY_TO_PARTITION.items():
        computed[f"degree_{key}"] = degrees[eta].element
    for key, inv in zip(_INVARIANT_KEYS, invariants):
        computed[f"invariant_{key}"] = inv.element

    name_map = infer_name_map(lattice, computed, golden)
    inv_label = name_map.class_to_label

    def to_labels(indices: list[int]) -> list[str]:
        return sorted(
            inv_label.get(i, lattice.classes[i].label) for i in indices
        )

    maximal_checks = {}
    for key, eta in _GOLDEN_KEY_TO_PARTITION.items():
        got = to_labels(degrees[eta].maximal_types)
        want = sorted(golden["basic_degrees"][key]["maximal"])
        maximal_checks[f"degree_{key}"] = {
            "computed": got,
            "reference": want,
            "equal": got == want,
        }
    for key, inv in zip(_INVARIANT_KEYS, invariants):
        got = to_labels(inv.maximal_types)
        marked = sorted(golden["invariants"][key]["marked_maximal"])
        maximal_checks[f"invariant_{key}"] = {
            "computed": got,
            "reference_marked": marked,
            "marked_subset_of_computed": set(marked) <= set(got),
            "equal": got == marked,
        }

    notes = {}
    for key, entry in golden["basic_degrees"].items():
        if "repair" in entry:
            notes[f"degree_{key}"] = entry["repair"]
    for key, entry in golden["invariants"].items():
        if "note" in entry:
            notes[f"invariant_{key}"] = entry["note"]

    expansions_ok = name_map.score == name_map.total
    marked_ok = all(
        entry.get("equal", False) or entry.get("marked_subset_of_computed", False)
        for entry in maximal_checks.values()
    )
    return {
        "name_map": {
            lab: lattice.classes[ci].label
            for lab, ci in sorted(name_map.label_to_class.items())
        },
        "displays_matched": name_map.per_display,
        "expansions_ok": expansions_ok,
        "maximal_checks": maximal_checks,
        "maximal_ok": marked_ok,
        "notes": notes,
        "ok": expansions_ok and marked_ok,
    }


def compare_character_table(golden: dict | None = None) -> dict:
    """Entrywise comparison of character_table(5) against the published
    7 x 7 table, its class sizes, the permutation-character row, and the
    stated decomposition of R^25."""
    if golden is None:
        golden = load_golden()
    ref = golden["character_table"]
    table = character_table(5)
    mismatches = []
    for row_label, eta, row in zip(ref["row_labels"], ref["row_partitions"], ref["values"]):
        mine = table.character(tuple(eta))
        for ct, want in zip(ref["column_cycle_types"], row):
            got = mine[tuple(sorted(ct, reverse=True))]
            if got != want:
                mismatches.append({"row": row_label, "class": ct, "got": got, "want": want})
    sizes_ok = [
        table.class_sizes[table.cycle_types.index(tuple(sorted(ct, reverse=True)))]
        for ct in ref["column_cycle_types"]
    ] == ref["class_sizes"]
    chi_v = diag_square_character(5)
    chi_v_ok = [chi_v[tuple(sorted(ct, reverse=True))] for ct in ref["column_cycle_types"]] == ref["chi_V"]
    from .symrep import decompose_diag_square

    mults = decompose_diag_square(5)
    label_of = dict(zip(map(tuple, ref["row_partitions"]), ref["row_labels"]))
    decomposition = {label_of[eta]: m for eta, m in mults.items()}
    decomp_ok = decomposition == ref["decomposition"]
    return {
        "entries_ok": not mismatches,
        "mismatches": mismatches,
        "class_sizes_ok": sizes_ok,
        "chi_V_ok": chi_v_ok,
        "decomposition": decomposition,
        "decomposition_ok": decomp_ok,
        "ok": not mismatches and sizes_ok and chi_v_ok and decomp_ok,
    }
