"""Evaluate every bound and formula on groups and emit reports.

Rows are produced per (group, tag); tags quantified over a prime (the
cyclic/non-cyclic normal Sylow statements) give one row per qualifying prime.
"""

from __future__ import annotations

import csv
import enum
import functools
import hashlib
import io
import json
import logging
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from . import recipes as R
from .classify import (
    Classification,
    abelian_groups_of_order,
    classify,
    frobenius_structure,
    is_cyclic,
    prime_divisors,
)
from .errors import RhoGroupsError
from .exact_arith import (
    Comparison,
    FactoredNat,
    bound_main,
    bound_qq,
    factor,
    fn_mul,
    fn_pow,
    fr_compare,
    remark_p_sides,
    remark_qp_sides,
    rho_cyclic,
)
from .groups import DEFAULT_CAP, Group, Subgroup, build, order_multiset
from .invariants import (
    InvariantRecord,
    check_mercede_divisibility,
    invariants_direct,
    rho_frobenius,
    rho_frobenius_times_cyclic,
    rho_semidirect_cyclic_sylow,
)

log = logging.getLogger(__name__)

__all__ = [
    "Tag",
    "GROUP_TAGS",
    "VerificationRow",
    "VerificationReport",
    "check_group",
    "run_corpus",
    "check_abelian_distinguish",
    "remark_rows",
    "corpus_digest",
]


class Tag(str, enum.Enum):
    GP_GLOBAL = "GP_GLOBAL"
    MAIN_THM = "MAIN_THM"
    COR_B = "COR_B"
    THM_PQ = "THM_PQ"
    FROB_FORMULA = "FROB_FORMULA"
    FROB_BOUND = "FROB_BOUND"
    MERCEDE_I = "MERCEDE_I"
    MERCEDE_II = "MERCEDE_II"
    COR_MERCEDE = "COR_MERCEDE"
    PROP_NONCYCLIC_SYLOW = "PROP_NONCYCLIC_SYLOW"
    PROP_NILPOTENT = "PROP_NILPOTENT"
    EXAMPLE_FXC = "EXAMPLE_FXC"
    ABELIAN_DISTINGUISH = "ABELIAN_DISTINGUISH"
    PSI_7_11 = "PSI_7_11"
    REMARK_P = "REMARK_P"
    REMARK_QP = "REMARK_QP"

    def __str__(self) -> str:
        return self.value


TAG_ORDER = list(Tag)
# the REMARK_* tags range over numbers, not groups
GROUP_TAGS = [t for t in Tag if t not in (Tag.REMARK_P, Tag.REMARK_QP)]


def parse_tags(text: str | None) -> list[Tag]:
    if not text:
        return list(GROUP_TAGS)
    wanted = {Tag(t.strip().upper()) for t in text.split(",") if t.strip()}
    return [t for t in TAG_ORDER if t in wanted]


@dataclass(frozen=True)
class VerificationRow:
    label: str
    tag: Tag
    applicable: bool
    holds: bool | None = None
    tight: bool = False
    lhs: str = ""
    rhs: str = ""
    notes: str = ""

    def __post_init__(self):
        if (self.holds is None) == self.applicable:
            raise ValueError("holds must be None exactly when the row is not applicable")
        if self.tight and not self.holds:
            raise ValueError("a tight row must hold")

    @property
    def violation(self) -> bool:
        return self.applicable and not self.holds

    def as_dict(self) -> dict:
        d = asdict(self)
        d["tag"] = self.tag.value
        return d


def _na(label: str, tag: Tag, why: str = "") -> VerificationRow:
    return VerificationRow(label, tag, applicable=False, notes=why)


def _inequality(label: str, tag: Tag, lhs, rhs, notes: str = "") -> VerificationRow:
    cmp = fr_compare(lhs, rhs)
    holds = cmp is not Comparison.GREATER
    return VerificationRow(label, tag, True, holds, cmp is Comparison.EQUAL, str(lhs), str(rhs), notes)


def _identity(label: str, tag: Tag, lhs, rhs, notes: str = "") -> VerificationRow:
    equal = fr_compare(lhs, rhs) is Comparison.EQUAL
    return VerificationRow(label, tag, True, equal, equal, str(lhs), str(rhs), notes)


@functools.lru_cache(maxsize=None)
def _psi_cyclic(n: int) -> int:
    # by enumeration of the cyclic table, deliberately not a closed form
    return int(build(R.Cyclic(n), cap=max(n, DEFAULT_CAP)).elem_order.sum())


@functools.lru_cache(maxsize=None)
def _abelian_rhos(n: int) -> dict[tuple[int, ...], FactoredNat]:
    out = {}
    for inv in abelian_groups_of_order(n):
        recipe = R.Abelian(tuple(inv)) if inv else R.Cyclic(1)
        out[tuple(inv)] = invariants_direct(build(recipe, cap=max(n, DEFAULT_CAP))).rho
    return out


class _Profile:
    """Everything the tag checks need about one group, computed once."""

    def __init__(self, G: Group, label: str):
        self.G = G
        self.label = label
        self.record: InvariantRecord = invariants_direct(G)
        self.cls: Classification = classify(G)
        self._rho_cache: dict[tuple[int, ...], FactoredNat] = {}

    @property
    def n(self) -> int:
        return self.G.order

    @property
    def q(self) -> int:
        assert self.record.q_min is not None
        return self.record.q_min

    @property
    def rho(self) -> FactoredNat:
        return self.record.rho

    def rho_of(self, H: Subgroup) -> FactoredNat:
        # computed on the standalone subgroup table, independent of G's record
        if H.members not in self._rho_cache:
            self._rho_cache[H.members] = invariants_direct(H.as_group()).rho
        return self._rho_cache[H.members]


def _check_gp(P: _Profile) -> list[VerificationRow]:
    rhs = rho_cyclic(P.n)
    cmp = fr_compare(P.rho, rhs)
    cyclic = P.cls.cyclic
    holds = cmp is Comparison.LESS and not cyclic or cmp is Comparison.EQUAL and cyclic
    note = "cyclic: equality expected" if cyclic else "non-cyclic: strict inequality expected"
    return [VerificationRow(P.label, Tag.GP_GLOBAL, True, holds, holds and cmp is Comparison.EQUAL, str(P.rho), str(rhs), note)]


def _check_main(P: _Profile) -> list[VerificationRow]:
    c = P.cls
    if c.cyclic or not c.supersoluble:
        return [_na(P.label, Tag.MAIN_THM, "cyclic" if c.cyclic else "not supersoluble")]
    if not c.nilpotent and c.metacyclic_paper:
        return [_na(P.label, Tag.MAIN_THM, "excluded: supersoluble, non-nilpotent and metacyclic")]
    why = "nilpotent" if c.nilpotent else "supersoluble, not metacyclic"
    return [_inequality(P.label, Tag.MAIN_THM, P.rho, bound_main(P.n, P.q), why)]


def _check_prop_nilpotent(P: _Profile) -> list[VerificationRow]:
    if P.cls.cyclic or not P.cls.nilpotent:
        return [_na(P.label, Tag.PROP_NILPOTENT, "cyclic" if P.cls.cyclic else "not nilpotent")]
    return [_inequality(P.label, Tag.PROP_NILPOTENT, P.rho, bound_main(P.n, P.q))]


def _check_cor_b(P: _Profile) -> list[VerificationRow]:
    if P.cls.cyclic or not P.cls.sylow_tower:
        return [_na(P.label, Tag.COR_B, "cyclic" if P.cls.cyclic else "no Sylow tower")]
    return [_inequality(P.label, Tag.COR_B, P.rho, bound_qq(P.n, P.q))]


def _check_pq(P: _Profile) -> list[VerificationRow]:
    primes = prime_divisors(P.n)
    if P.cls.cyclic or len(primes) != 2:
        return [_na(P.label, Tag.THM_PQ, "cyclic" if P.cls.cyclic else f"{len(primes)} prime divisors")]
    return [_inequality(P.label, Tag.THM_PQ, P.rho, bound_qq(P.n, P.q), f"primes {primes[1]} > {primes[0]}")]


def _check_frob_formula(P: _Profile) -> list[VerificationRow]:
    fs = P.cls.frobenius
    if fs is None:
        return [_na(P.label, Tag.FROB_FORMULA, "not Frobenius")]
    rhs = rho_frobenius(fs, P.rho_of(fs.kernel), P.rho_of(fs.complement))
    return [_identity(P.label, Tag.FROB_FORMULA, P.rho, rhs, f"|N|={fs.kernel.order}, |H|={fs.complement.order}")]


def _check_frob_bound(P: _Profile) -> list[VerificationRow]:
    fs = P.cls.frobenius
    if fs is None:
        return [_na(P.label, Tag.FROB_BOUND, "not Frobenius")]
    return [_inequality(P.label, Tag.FROB_BOUND, P.rho, bound_qq(P.n, P.q), f"|N|={fs.kernel.order}, |H|={fs.complement.order}")]


def _cyclic_splits(P: _Profile):
    for p, split in P.cls.splits.items():
        if split is not None and split.sylow.is_cyclic():
            yield p, split


def _split_note(p: int, split) -> str:
    return f"p={p}, |P|={split.sylow.order}, |F|={split.complement.order}, |Z|={split.centralizer_in_complement.order}"


def _check_mercede_i(P: _Profile) -> list[VerificationRow]:
    rows = []
    for p, split in _cyclic_splits(P):
        rhs = rho_semidirect_cyclic_sylow(split, P.rho_of(split.sylow), P.rho_of(split.complement))
        rows.append(_identity(P.label, Tag.MERCEDE_I, P.rho, rhs, _split_note(p, split)))
    return rows or [_na(P.label, Tag.MERCEDE_I, "no normal cyclic Sylow subgroup")]


def _check_mercede_ii(P: _Profile) -> list[VerificationRow]:
    rows = []
    for p, split in _cyclic_splits(P):
        rho_P, rho_F = P.rho_of(split.sylow), P.rho_of(split.complement)
        divides, equal = check_mercede_divisibility(split, P.rho, rho_P, rho_F)
        z_is_f = split.centralizer_in_complement.order == split.complement.order
        bound = fn_mul(fn_pow(rho_P, split.complement.order), fn_pow(rho_F, split.sylow.order))
        holds = divides and equal == z_is_f
        note = f"{_split_note(p, split)}, divides={divides}, equal={equal}, Z=F: {z_is_f}"
        rows.append(VerificationRow(P.label, Tag.MERCEDE_II, True, holds, holds and equal, str(P.rho), str(bound), note))
    return rows or [_na(P.label, Tag.MERCEDE_II, "no normal cyclic Sylow subgroup")]


def _check_cor_mercede(P: _Profile) -> list[VerificationRow]:
    rows = []
    for p, split in _cyclic_splits(P):
        if split.centralizer_in_complement.order == split.complement.order:
            continue
        rows.append(_inequality(P.label, Tag.COR_MERCEDE, P.rho, bound_qq(P.n, P.q), _split_note(p, split)))
    return rows or [_na(P.label, Tag.COR_MERCEDE, "no normal cyclic Sylow subgroup with C_F(P) != F")]


def _check_noncyclic_sylow(P: _Profile) -> list[VerificationRow]:
    rows = []
    for p, split in P.cls.splits.items():
        if p == 2 or split is None or split.sylow.is_cyclic():
            continue
        size = split.sylow.order
        first = fn_mul(fn_pow(factor(size // p), P.n), fn_pow(P.rho_of(split.complement), size))
        second = bound_qq(P.n, P.q)
        c1, c2 = fr_compare(P.rho, first), fr_compare(P.rho, second)
        holds = Comparison.GREATER not in (c1, c2)
        tighter, c = (first, c1) if fr_compare(first, second) is not Comparison.GREATER else (second, c2)
        note = f"p={p}, |P|={size}, |F|={split.complement.order}; (|P|/p)^|G| rho(F)^|P| = {first}: {c1.name}; q^-q rho(C_n) = {second}: {c2.name}"
        rows.append(VerificationRow(P.label, Tag.PROP_NONCYCLIC_SYLOW, True, holds, holds and c is Comparison.EQUAL, str(P.rho), str(tighter), note))
    return rows or [_na(P.label, Tag.PROP_NONCYCLIC_SYLOW, "no normal non-cyclic Sylow subgroup for an odd prime")]


def _fxc_parts(G: Group):
    """``(frobenius structure of F, |C|)`` when ``G`` was built as ``F x C`` per the example's hypotheses."""
    r = G.recipe
    if not isinstance(r, R.Direct):
        return None
    for f_recipe, c_recipe in ((r.left, r.right), (r.right, r.left)):
        C = build(c_recipe, cap=max(c_recipe.order, DEFAULT_CAP))
        if not is_cyclic(C) or math.gcd(C.order, f_recipe.order) != 1:
            continue
        F = build(f_recipe, cap=max(f_recipe.order, DEFAULT_CAP))
        fs = frobenius_structure(F)
        if fs is not None and fs.kernel.is_cyclic() and fs.complement.is_cyclic() and G.order > 5:
            return fs, C.order
    return None


def _check_fxc(P: _Profile) -> list[VerificationRow]:
    parts = _fxc_parts(P.G)
    if parts is None:
        return [_na(P.label, Tag.EXAMPLE_FXC, "not built as (Frobenius, cyclic kernel and complement) x coprime cyclic")]
    fs, c = parts
    rhs = rho_frobenius_times_cyclic(fs, c)
    return [_identity(P.label, Tag.EXAMPLE_FXC, P.rho, rhs, f"|N|={fs.kernel.order}, |H|={fs.complement.order}, |C|={c}")]


def _check_abelian(P: _Profile) -> list[VerificationRow]:
    inv = P.cls.abelian_invariants
    if inv is None:
        return [_na(P.label, Tag.ABELIAN_DISTINGUISH, "not abelian")]
    classes = _abelian_rhos(P.n)
    own = classes[tuple(inv)]
    clashes = [k for k, rho in classes.items() if k != tuple(inv) and rho == P.rho]
    holds = own == P.rho and not clashes
    note = f"invariants={list(inv)}, classes of order {P.n}: {len(classes)}"
    if clashes:
        note += f", same rho as {[list(k) for k in clashes]}"
    return [VerificationRow(P.label, Tag.ABELIAN_DISTINGUISH, True, holds, holds, str(P.rho), str(own), note)]


def _check_psi(P: _Profile) -> list[VerificationRow]:
    if P.cls.cyclic:
        return [_na(P.label, Tag.PSI_7_11, "cyclic")]
    psi, psi_c = P.record.psi, _psi_cyclic(P.n)
    lhs, rhs = factor(11 * psi), factor(7 * psi_c)
    return [_inequality(P.label, Tag.PSI_7_11, lhs, rhs, f"11*psi(G) = {11 * psi}, 7*psi(C_n) = {7 * psi_c}")]


_CHECKS: dict[Tag, Callable[[_Profile], list[VerificationRow]]] = {
    Tag.GP_GLOBAL: _check_gp,
    Tag.MAIN_THM: _check_main,
    Tag.COR_B: _check_cor_b,
    Tag.THM_PQ: _check_pq,
    Tag.FROB_FORMULA: _check_frob_formula,
    Tag.FROB_BOUND: _check_frob_bound,
    Tag.MERCEDE_I: _check_mercede_i,
    Tag.MERCEDE_II: _check_mercede_ii,
    Tag.COR_MERCEDE: _check_cor_mercede,
    Tag.PROP_NONCYCLIC_SYLOW: _check_noncyclic_sylow,
    Tag.PROP_NILPOTENT: _check_prop_nilpotent,
    Tag.EXAMPLE_FXC: _check_fxc,
    Tag.ABELIAN_DISTINGUISH: _check_abelian,
    Tag.PSI_7_11: _check_psi,
}


def _error_rows(label: str, tags: Iterable[Tag], exc: Exception) -> list[VerificationRow]:
    note = f"error {getattr(exc, 'code', type(exc).__name__)}: {exc}"
    return [VerificationRow(label, t, True, False, notes=note) for t in tags]


def check_group(G: Group, tags: Iterable[Tag] | None = None, label: str | None = None) -> list[VerificationRow]:
    """Rows for every requested group tag, in the fixed tag order.

    Engine errors become failing rows with the error in ``notes``.
    """
    wanted = set(GROUP_TAGS if tags is None else tags)
    ordered = [t for t in GROUP_TAGS if t in wanted]
    label = label if label is not None else G.label
    if G.order == 1:
        return [_na(label, t, "trivial group: no least prime") for t in ordered]
    try:
        profile = _Profile(G, label)
    except (RhoGroupsError, ArithmeticError, ValueError) as exc:
        log.warning("profiling %s failed: %s", label, exc)
        return _error_rows(label, ordered, exc)
    rows: list[VerificationRow] = []
    for tag in ordered:
        try:
            rows.extend(_CHECKS[tag](profile))
        except (RhoGroupsError, ArithmeticError, ValueError) as exc:
            log.warning("%s on %s failed: %s", tag.value, label, exc)
            rows.extend(_error_rows(label, [tag], exc))
    return rows


@dataclass
class _GroupResult:
    rows: list[VerificationRow]
    order: int = 0
    rho: str = ""
    fingerprint: str = ""


def _run_one(item: tuple[str, R.GroupRecipe, tuple[Tag, ...], int]) -> _GroupResult:
    label, recipe, tags, cap = item
    try:
        G = build(recipe, cap=cap)
    except (RhoGroupsError, ValueError) as exc:
        return _GroupResult(_error_rows(label, [t for t in GROUP_TAGS if t in tags], exc))
    rows = check_group(G, tags, label=label)
    rec = invariants_direct(G)
    try:
        flags = sorted(k for k, v in classify(G).flags().items() if v)
    except RhoGroupsError:
        flags = ["?"]
    fingerprint = json.dumps([sorted(order_multiset(G).items()), flags])
    return _GroupResult(rows, G.order, str(rec.rho), fingerprint)


def corpus_digest(corpus: Sequence[tuple[str, R.GroupRecipe]]) -> str:
    text = "".join(f"{label}: {recipe}\n" for label, recipe in corpus)
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass
class VerificationReport:
    rows: list[VerificationRow]
    tags: list[Tag]
    corpus_hash: str = ""
    tool_version: str = __version__
    collisions: list[dict] | None = None
    extra: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict[str, dict[str, int]]:
        out = {}
        for tag in self.tags:
            rows = [r for r in self.rows if r.tag is tag]
            out[tag.value] = {
                "rows": len(rows),
                "applicable": sum(r.applicable for r in rows),
                "holds": sum(bool(r.holds) for r in rows),
                "violations": sum(r.violation for r in rows),
                "tight": sum(r.tight for r in rows),
            }
        return out

    @property
    def violations(self) -> list[VerificationRow]:
        return [r for r in self.rows if r.violation]

    @property
    def exit_status(self) -> int:
        return 1 if self.violations else 0

    def to_dict(self) -> dict:
        d = {
            "tool_version": self.tool_version,
            "corpus_hash": self.corpus_hash,
            "rows": [r.as_dict() for r in self.rows],
            "summary": self.summary,
        }
        if self.collisions is not None:
            d["collisions"] = self.collisions
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(
                [
                    r.label,
                    r.tag.value,
                    _csv_bool(r.applicable),
                    "N/A" if r.holds is None else _csv_bool(r.holds),
                    _csv_bool(r.tight),
                    r.lhs,
                    r.rhs,
                    r.notes,
                ]
            )
        return buf.getvalue()


CSV_COLUMNS = ["label", "tag", "applicable", "holds", "tight", "lhs", "rhs", "notes"]


def _csv_bool(b: bool) -> str:
    return "true" if b else "false"


def run_corpus(
    corpus: Sequence[tuple[str, R.GroupRecipe]],
    tags: Iterable[Tag] | None = None,
    *,
    jobs: int = 1,
    cap: int = DEFAULT_CAP,
    collisions: bool = False,
    corpus_hash: str | None = None,
) -> VerificationReport:
    """Check every group of ``corpus`` against ``tags`` (default: all group tags).

    Row order is corpus order, then the fixed tag order, independent of
    ``jobs``.  With ``collisions`` the report also lists pairs of corpus
    groups of equal order and equal rho whose element-order statistics or
    structure flags differ (so they are certainly not isomorphic).
    """
    tag_list = [t for t in TAG_ORDER if t in set(GROUP_TAGS if tags is None else tags)]
    group_tags = tuple(t for t in tag_list if t in GROUP_TAGS)
    items = [(label, recipe, group_tags, cap) for label, recipe in corpus]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, items, chunksize=4))
    else:
        results = [_run_one(item) for item in items]

    rows = [row for res in results for row in res.rows]
    if Tag.REMARK_P in tag_list or Tag.REMARK_QP in tag_list:
        rows.extend(r for r in remark_rows() if r.tag in tag_list)
    report = VerificationReport(rows, tag_list, corpus_hash or corpus_digest(corpus))
    if collisions:
        report.collisions = _collisions(corpus, results)
    return report


def _collisions(corpus, results: list[_GroupResult]) -> list[dict]:
    out = []
    labelled = [(label, res) for (label, _), res in zip(corpus, results) if res.rho]
    for i, (a, ra) in enumerate(labelled):
        for b, rb in labelled[i + 1 :]:
            if ra.order == rb.order and ra.rho == rb.rho and ra.fingerprint != rb.fingerprint:
                out.append({"order": ra.order, "rho": ra.rho, "labels": [a, b]})
    return out


def check_abelian_distinguish(n_max: int, cap: int = DEFAULT_CAP) -> list[VerificationRow]:
    """For each order ``n <= n_max``: rho separates the abelian isomorphism classes."""
    if n_max > cap:
        raise ValueError(f"n_max={n_max} exceeds the order cap {cap}")
    rows = []
    for n in range(1, n_max + 1):
        classes = _abelian_rhos(n)
        values = list(classes.values())
        injective = len(set(values)) == len(values)
        lhs = "; ".join(str(v) for v in values)
        note = f"{len(values)} classes: " + " ".join(str(list(k) or [1]) for k in classes)
        rows.append(VerificationRow(f"n={n}", Tag.ABELIAN_DISTINGUISH, True, injective, False, lhs, "", note))
    return rows


def remark_rows(p_max: int = 97, alpha_max: int = 8, qp_max: int = 100) -> list[VerificationRow]:
    """Sweeps of the two arithmetic remarks as rows (REMARK_P first, then REMARK_QP)."""
    from sympy import primerange

    rows = []
    for p in primerange(2, p_max + 1):
        for alpha in range(1, alpha_max + 1):
            for strong in (False, True):
                if strong and (p == 2 or alpha < 2):
                    continue
                lhs, rhs = remark_p_sides(p, alpha, strong)
                row = _inequality(f"p={p},alpha={alpha}", Tag.REMARK_P, lhs, rhs, "strong (p^-p)" if strong else "weak (p^-1)")
                rows.append(row)
    for p in range(1, qp_max + 1):
        for q in range(1, p + 1):
            small, big = remark_qp_sides(p, q)
            ok = small <= big
            rows.append(
                VerificationRow(
                    f"p={p},q={q}",
                    Tag.REMARK_QP,
                    True,
                    ok,
                    ok and small == big,
                    str(fn_pow(factor(q), p * (q - 1))),
                    str(fn_pow(factor(p), q * (p - 1))),
                    "q^(p(q-1)) <= p^(q(p-1))",
                )
            )
    return rows
