"""Falsifiable claim sweeps over subgroup families, with reporting.

Each claim is an exhaustive check over one group and one prime partition.
A fail on any claim other than CONJ1 means a bug somewhere in this package;
a fail on CONJ1 is a genuine finding (a level-2 subgroup that is not
level-1) and is reported with a full witness instead of treated as a bug.

Exit code contract: 1 when any non-CONJ1 claim fails, else 3 when CONJ1
produced findings, else 0.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import UnknownClaimError
from .group import FiniteGroup
from .lattice import SubgroupLattice, lattice_of
from .pi import (
    PrimeSet,
    _has_d_pi_in,
    _hall_in,
    _is_nilpotent_in,
    _o_pi_in,
    _o_upper_pi_in,
    _sylow_in,
    is_pi_number,
    prime_support,
)
from .sigma import (
    PermutabilityLevel,
    SigmaPartition,
    _block_data,
    canonicalize_sigma,
    enumerate_sigma_partitions,
    level_indices,
    s_permutable,
    sigma_nilpotent_section,
    subnormal_indices,
)

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_INAPPLICABLE = "inapplicable"

CLAIM_IDS: tuple[str, ...] = (
    "T1", "T2", "T3a", "T3b", "T4", "T5",
    "L1", "L2", "L4", "L5",
    "C1", "C2", "C3", "C4", "C5", "C6", "C7",
    "CONJ1",
)

CLAIM_TITLES: dict[str, str] = {
    "T1": "level-2 and level-3 families coincide",
    "T2": "closure-over-core section of a level-3 subgroup is nilpotent across blocks",
    "T3a": "levels 1, 2, 3 agree on block-nilpotent subgroups",
    "T3b": "a block-nilpotent subgroup is level-3 iff all its Hall block-subgroups are",
    "T4": "the level-3 family is closed under meet and join",
    "T5": "normalizers of level-3 subgroups are level-3",
    "L1": "level membership transfers along quotient maps, both directions",
    "L2": "subnormal transfer: meets stay subnormal; O^block agrees when the index is a block number",
    "L4": "a subnormal block-subgroup sits inside O_block of the group",
    "L5": "O^block of the group normalises O_block of every level-3 subgroup",
    "C1": "S-permutable subgroups have nilpotent closure-over-core sections",
    "C2": "skiba-permutable subgroups have block-nilpotent closure-over-core sections",
    "C3": "level-3 subgroups are subnormal",
    "C4": "a nilpotent subgroup is S-permutable iff all its Sylow subgroups are",
    "C5": "the S-permutable family is closed under meet and join",
    "C6": "the skiba family is closed under meet and join when every block is conjugacy-complete",
    "C7": "normalizers of S-permutable subgroups are S-permutable",
    "CONJ1": "scan for level-2 subgroups that are not level-1",
}


@dataclass(frozen=True)
class WitnessRecord:
    subject: str
    block: str
    offender: str
    detail: str

    def to_record(self) -> dict:
        return {
            "subject": self.subject,
            "block": self.block,
            "offender": self.offender,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    group_id: str
    sigma: str
    claim_id: str
    status: str
    witnesses: tuple[WitnessRecord, ...]
    timing_ms: float

    def to_record(self) -> dict:
        return {
            "group_id": self.group_id,
            "sigma": self.sigma,
            "claim_id": self.claim_id,
            "status": self.status,
            "witnesses": [w.to_record() for w in self.witnesses],
            "timing_ms": self.timing_ms,
        }


class _Ctx:
    """Shared state for one (group, partition) pair."""

    def __init__(self, G: FiniteGroup, sigma: SigmaPartition, lat: SubgroupLattice):
        self.G = G
        self.sigma = sigma
        self.lat = lat

    def level(self, level: PermutabilityLevel) -> Optional[frozenset[int]]:
        return level_indices(self.lat, self.sigma, level)

    def desc(self, i: int) -> str:
        return self.lat.subgroups[i].describe()

    def subnormal(self, top: Optional[int] = None) -> frozenset[int]:
        return subnormal_indices(self.lat, self.sigma, top)

    def closure_core(self, i: int) -> tuple[int, int]:
        """(normal closure index, core index) of lattice member i."""
        def build() -> tuple[int, int]:
            lat = self.lat
            nc = i
            for j in lat.conjugacy_classes[lat.class_of[i]]:
                nc = lat.join_indices(nc, j)
            core = lat.index_of_mask(lat.core_mask_in(i, lat.whole_index))
            return nc, core

        return self.lat.memo(("closure-core", i), build)

    def quotient_analysis(self, n_idx: int):
        def build():
            from .lattice import quotient

            qm = quotient(self.G, self.lat.subgroups[n_idx])
            return qm, lattice_of(qm.quotient)

        return self.lat.memo(("quotient-analysis", n_idx), build)

    def s_permutable_set(self) -> frozenset[int]:
        def build() -> frozenset[int]:
            return frozenset(
                i
                for i in range(len(self.lat.subgroups))
                if s_permutable(self.lat.subgroups[i], self.G, self.lat)
            )

        return self.lat.memo(("s-permutable-set",), build)

    def block_nilpotent(self, i: int) -> bool:
        return sigma_nilpotent_section(self.lat, self.sigma, i, self.lat.trivial_index)


Check = tuple[str, list[WitnessRecord]]


def _pass_fail(witnesses: list[WitnessRecord]) -> Check:
    return (STATUS_FAIL if witnesses else STATUS_PASS, witnesses)


def _check_t1(ctx: _Ctx) -> Check:
    lvl2 = ctx.level(PermutabilityLevel.PROJECTOR)
    lvl3 = ctx.level(PermutabilityLevel.PROJECTOR_CLASS)
    out = []
    for i in sorted(lvl2 ^ lvl3):
        side = "level-3 only" if i in lvl3 else "level-2 only"
        out.append(WitnessRecord(ctx.desc(i), "-", "-", f"family mismatch: {side}"))
    return _pass_fail(out)


def _check_t2(ctx: _Ctx) -> Check:
    out = []
    for i in sorted(ctx.level(PermutabilityLevel.PROJECTOR_CLASS)):
        nc, cr = ctx.closure_core(i)
        if not sigma_nilpotent_section(ctx.lat, ctx.sigma, nc, cr):
            out.append(
                WitnessRecord(
                    ctx.desc(i),
                    "-",
                    f"closure {ctx.desc(nc)}, core {ctx.desc(cr)}",
                    "closure-over-core section is not nilpotent across blocks",
                )
            )
    return _pass_fail(out)


def _check_t3a(ctx: _Ctx) -> Check:
    sets = {lvl: ctx.level(lvl) for lvl in (
        PermutabilityLevel.MAXIMAL, PermutabilityLevel.PROJECTOR, PermutabilityLevel.PROJECTOR_CLASS
    )}
    out = []
    for i in range(len(ctx.lat.subgroups)):
        if not ctx.block_nilpotent(i):
            continue
        verdicts = {lvl.value: i in s for lvl, s in sets.items()}
        if len(set(verdicts.values())) > 1:
            out.append(
                WitnessRecord(
                    ctx.desc(i), "-", "-",
                    f"levels disagree on a block-nilpotent subgroup: {verdicts}",
                )
            )
    return _pass_fail(out)


def _check_t3b(ctx: _Ctx) -> Check:
    lvl3 = ctx.level(PermutabilityLevel.PROJECTOR_CLASS)
    out = []
    for i in range(len(ctx.lat.subgroups)):
        if not ctx.block_nilpotent(i):
            continue
        bad_hall = None
        for block in ctx.sigma.blocks:
            for h in _hall_in(ctx.lat, block, i):
                if h not in lvl3:
                    bad_hall = (block, h)
                    break
            if bad_hall:
                break
        lhs = i in lvl3
        rhs = bad_hall is None
        if lhs != rhs:
            block, h = bad_hall if bad_hall else ("-", i)
            out.append(
                WitnessRecord(
                    ctx.desc(i),
                    str(block),
                    ctx.desc(h) if bad_hall else "-",
                    f"level-3 is {lhs} but Hall criterion is {rhs}",
                )
            )
    return _pass_fail(out)


def _closure_witnesses(ctx: _Ctx, members: frozenset[int], family: str) -> list[WitnessRecord]:
    out = []
    ordered = sorted(members)
    for a_pos, i in enumerate(ordered):
        for j in ordered[a_pos:]:
            meet = ctx.lat.meet_indices(i, j)
            if meet not in members:
                out.append(
                    WitnessRecord(
                        ctx.desc(i), "-", ctx.desc(j),
                        f"meet {ctx.desc(meet)} left the {family} family",
                    )
                )
            joined = ctx.lat.join_indices(i, j)
            if joined not in members:
                out.append(
                    WitnessRecord(
                        ctx.desc(i), "-", ctx.desc(j),
                        f"join {ctx.desc(joined)} left the {family} family",
                    )
                )
    return out


def _check_t4(ctx: _Ctx) -> Check:
    return _pass_fail(
        _closure_witnesses(ctx, ctx.level(PermutabilityLevel.PROJECTOR_CLASS), "level-3")
    )


def _check_t5(ctx: _Ctx) -> Check:
    lvl3 = ctx.level(PermutabilityLevel.PROJECTOR_CLASS)
    out = []
    for i in sorted(lvl3):
        nz = ctx.lat.normalizer_index(i)
        if nz not in lvl3:
            out.append(
                WitnessRecord(ctx.desc(i), "-", ctx.desc(nz), "normalizer left the level-3 family")
            )
    return _pass_fail(out)


def _check_l1(ctx: _Ctx) -> Check:
    out = []
    lat = ctx.lat
    for n_idx, flag in enumerate(lat.normal_flags):
        if not flag or n_idx in (lat.trivial_index, lat.whole_index):
            continue
        qm, qlat = ctx.quotient_analysis(n_idx)
        qsigma = ctx.sigma.restricted_to(qm.quotient)
        n_mask = lat.subgroups[n_idx].mask
        for level in (PermutabilityLevel.PROJECTOR, PermutabilityLevel.PROJECTOR_CLASS):
            gset = ctx.level(level)
            qset = level_indices(qlat, qsigma, level)
            for i in sorted(gset):
                img = qm.image(lat.subgroups[i])
                if qlat.index_of(img) not in qset:
                    out.append(
                        WitnessRecord(
                            ctx.desc(i), "-", f"quotient by {ctx.desc(n_idx)}",
                            f"level-{level.value} lost under projection",
                        )
                    )
            for k in sorted(qset):
                pre = qm.preimage(qlat.subgroups[k])
                if lat.index_of(pre) not in gset:
                    out.append(
                        WitnessRecord(
                            qlat.subgroups[k].describe(), "-",
                            f"quotient by {ctx.desc(n_idx)}",
                            f"level-{level.value} not lifted by preimage",
                        )
                    )
    return _pass_fail(out)


def _check_l2(ctx: _Ctx) -> Check:
    out = []
    lat = ctx.lat
    subnormal = ctx.subnormal()
    for h in sorted(subnormal):
        for k in range(len(lat.subgroups)):
            meet = lat.meet_indices(h, k)
            if meet not in ctx.subnormal(top=k):
                out.append(
                    WitnessRecord(
                        ctx.desc(h), "-", ctx.desc(k),
                        "intersection is not subnormal in the second subgroup",
                    )
                )
    whole = lat.whole_index
    for h in sorted(subnormal):
        index = lat.orders[whole] // lat.orders[h]
        for block in ctx.sigma.blocks:
            if not is_pi_number(index, block):
                continue
            if _o_upper_pi_in(lat, block, h) != _o_upper_pi_in(lat, block, whole):
                out.append(
                    WitnessRecord(
                        ctx.desc(h), str(block), "-",
                        "O^block of the subgroup differs from O^block of the group",
                    )
                )
    return _pass_fail(out)


def _check_l4(ctx: _Ctx) -> Check:
    out = []
    lat = ctx.lat
    subnormal = ctx.subnormal()
    for block in ctx.sigma.blocks:
        o_mask = lat.subgroups[_o_pi_in(lat, block, lat.whole_index)].mask
        for h in sorted(subnormal):
            if not is_pi_number(lat.orders[h], block):
                continue
            if lat.subgroups[h].mask & o_mask != lat.subgroups[h].mask:
                out.append(
                    WitnessRecord(
                        ctx.desc(h), str(block), "-",
                        "subnormal block-subgroup escapes O_block of the group",
                    )
                )
    return _pass_fail(out)


def _check_l5(ctx: _Ctx) -> Check:
    out = []
    lat = ctx.lat
    for i in sorted(ctx.level(PermutabilityLevel.PROJECTOR_CLASS)):
        for block in ctx.sigma.blocks:
            o_h = _o_pi_in(lat, block, i)
            nz_mask = lat.normalizer_mask(o_h)
            o_upper = lat.subgroups[_o_upper_pi_in(lat, block, lat.whole_index)].mask
            if o_upper & nz_mask != o_upper:
                out.append(
                    WitnessRecord(
                        ctx.desc(i), str(block), ctx.desc(o_h),
                        "O^block of the group does not normalise O_block of the subgroup",
                    )
                )
    return _pass_fail(out)


def _require_singletons(ctx: _Ctx) -> Optional[Check]:
    if not ctx.sigma.is_singletons:
        return (STATUS_INAPPLICABLE, [])
    return None


def _check_c1(ctx: _Ctx) -> Check:
    gate = _require_singletons(ctx)
    if gate:
        return gate
    out = []
    for i in sorted(ctx.s_permutable_set()):
        nc, cr = ctx.closure_core(i)
        if not sigma_nilpotent_section(ctx.lat, ctx.sigma, nc, cr):
            out.append(
                WitnessRecord(
                    ctx.desc(i), "-",
                    f"closure {ctx.desc(nc)}, core {ctx.desc(cr)}",
                    "S-permutable subgroup with a non-nilpotent closure-over-core section",
                )
            )
    return _pass_fail(out)


def _check_c2(ctx: _Ctx) -> Check:
    skiba = ctx.level(PermutabilityLevel.SKIBA)
    if skiba is None:
        return (STATUS_INAPPLICABLE, [])
    out = []
    for i in sorted(skiba):
        nc, cr = ctx.closure_core(i)
        if not sigma_nilpotent_section(ctx.lat, ctx.sigma, nc, cr):
            out.append(
                WitnessRecord(
                    ctx.desc(i), "-",
                    f"closure {ctx.desc(nc)}, core {ctx.desc(cr)}",
                    "skiba subgroup with a section that is not nilpotent across blocks",
                )
            )
    return _pass_fail(out)


def _check_c3(ctx: _Ctx) -> Check:
    subnormal = ctx.subnormal()
    out = []
    for i in sorted(ctx.level(PermutabilityLevel.PROJECTOR_CLASS)):
        if i not in subnormal:
            out.append(WitnessRecord(ctx.desc(i), "-", "-", "level-3 subgroup is not subnormal"))
    return _pass_fail(out)


def _check_c4(ctx: _Ctx) -> Check:
    gate = _require_singletons(ctx)
    if gate:
        return gate
    lat = ctx.lat
    sperm = ctx.s_permutable_set()
    out = []
    for i in range(len(lat.subgroups)):
        if not _is_nilpotent_in(lat, i):
            continue
        lhs = i in sperm
        rhs = True
        offender = None
        for p in prime_support(lat.orders[i]):
            for s in _sylow_in(lat, p, i):
                if s not in sperm:
                    rhs = False
                    offender = s
                    break
            if not rhs:
                break
        if lhs != rhs:
            out.append(
                WitnessRecord(
                    ctx.desc(i), "-",
                    ctx.desc(offender) if offender is not None else "-",
                    f"S-permutability is {lhs} but the Sylow criterion is {rhs}",
                )
            )
    return _pass_fail(out)


def _check_c5(ctx: _Ctx) -> Check:
    gate = _require_singletons(ctx)
    if gate:
        return gate
    return _pass_fail(_closure_witnesses(ctx, ctx.s_permutable_set(), "S-permutable"))


def _check_c6(ctx: _Ctx) -> Check:
    lat = ctx.lat
    for i in range(len(lat.subgroups)):
        for block in ctx.sigma.blocks:
            if not _has_d_pi_in(lat, block, i):
                return (STATUS_INAPPLICABLE, [])
    skiba = ctx.level(PermutabilityLevel.SKIBA)
    return _pass_fail(_closure_witnesses(ctx, skiba, "skiba"))


def _check_c7(ctx: _Ctx) -> Check:
    gate = _require_singletons(ctx)
    if gate:
        return gate
    sperm = ctx.s_permutable_set()
    out = []
    for i in sorted(sperm):
        nz = ctx.lat.normalizer_index(i)
        if nz not in sperm:
            out.append(
                WitnessRecord(
                    ctx.desc(i), "-", ctx.desc(nz),
                    "normalizer left the S-permutable family",
                )
            )
    return _pass_fail(out)


def _check_conj1(ctx: _Ctx) -> Check:
    lvl1 = ctx.level(PermutabilityLevel.MAXIMAL)
    lvl2 = ctx.level(PermutabilityLevel.PROJECTOR)
    out = []
    for i in sorted(lvl2 - lvl1):
        sub = ctx.lat.subgroups[i]
        elements = ", ".join(
            ctx.G.elements[g].cycle_string() for g in sub.indices
        )
        block, offender = None, None
        for b in ctx.sigma.blocks:
            data = _block_data(ctx.lat, b)
            if i not in data.lvl1:
                block = b
                for m in data.pm:
                    if not ctx.lat.permutes_indices(i, m):
                        offender = m
                        break
                break
        out.append(
            WitnessRecord(
                ctx.desc(i),
                str(block),
                ctx.desc(offender),
                f"level-2 but not level-1; elements: {elements}",
            )
        )
    return _pass_fail(out)


_CHECKERS = {
    "T1": _check_t1,
    "T2": _check_t2,
    "T3a": _check_t3a,
    "T3b": _check_t3b,
    "T4": _check_t4,
    "T5": _check_t5,
    "L1": _check_l1,
    "L2": _check_l2,
    "L4": _check_l4,
    "L5": _check_l5,
    "C1": _check_c1,
    "C2": _check_c2,
    "C3": _check_c3,
    "C4": _check_c4,
    "C5": _check_c5,
    "C6": _check_c6,
    "C7": _check_c7,
    "CONJ1": _check_conj1,
}


def validate_claims(claims: Optional[Iterable[str]]) -> tuple[str, ...]:
    """Normalise a claim filter; None means every claim."""
    if claims is None:
        return CLAIM_IDS
    out = []
    for c in claims:
        c = c.strip()
        if not c:
            continue
        if c not in _CHECKERS:
            raise UnknownClaimError(f"unknown claim {c!r}; known: {', '.join(CLAIM_IDS)}")
        if c not in out:
            out.append(c)
    if not out:
        raise UnknownClaimError("empty claim filter")
    return tuple(out)


def verify_claim(
    G: FiniteGroup,
    sigma: SigmaPartition,
    claim_id: str,
    lattice: Optional[SubgroupLattice] = None,
    group_id: Optional[str] = None,
) -> VerificationReport:
    """Run one claim for one group and partition."""
    if claim_id not in _CHECKERS:
        raise UnknownClaimError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIM_IDS)}")
    lat = lattice_of(G) if lattice is None else lattice
    ctx = _Ctx(G, sigma, lat)
    start = time.perf_counter()
    status, witnesses = _CHECKERS[claim_id](ctx)
    elapsed = (time.perf_counter() - start) * 1000.0
    return VerificationReport(
        group_id=group_id if group_id is not None else f"order{G.order}:deg{G.degree}",
        sigma=str(sigma),
        claim_id=claim_id,
        status=status,
        witnesses=tuple(witnesses),
        timing_ms=round(elapsed, 3),
    )


@dataclass
class SuiteResult:
    reports: list[VerificationReport] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_INAPPLICABLE: 0}
        for r in self.reports:
            out[r.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        if any(r.status == STATUS_FAIL and r.claim_id != "CONJ1" for r in self.reports):
            return 1
        if any(r.status == STATUS_FAIL and r.claim_id == "CONJ1" for r in self.reports):
            return 3
        return 0


def run_suite(
    entries: Sequence[tuple[str, FiniteGroup]],
    claims: Optional[Iterable[str]] = None,
    sigma: Optional[SigmaPartition] = None,
) -> SuiteResult:
    """Sweep claims over catalog entries; partitions default to all of them."""
    claim_ids = validate_claims(claims)
    result = SuiteResult()
    for gid, G in entries:
        lat = lattice_of(G)
        partitions = [sigma.restricted_to(G)] if sigma is not None else enumerate_sigma_partitions(G)
        for part in partitions:
            for cid in claim_ids:
                result.reports.append(verify_claim(G, part, cid, lat, group_id=gid))
    return result


def check_conjecture1(
    entries: Sequence[tuple[str, FiniteGroup]],
) -> list[VerificationReport]:
    """CONJ1 across all partitions of every entry; fails are findings, not bugs."""
    return run_suite(entries, claims=["CONJ1"]).reports


# -- serialization ------------------------------------------------------------

def reports_to_jsonl(reports: Iterable[VerificationReport], include_timing: bool = True) -> str:
    lines = []
    for r in reports:
        rec = r.to_record()
        if not include_timing:
            rec.pop("timing_ms")
        lines.append(json.dumps(rec))
    return "\n".join(lines) + ("\n" if lines else "")


def summary_text(reports: Sequence[VerificationReport]) -> str:
    by_claim: dict[str, dict[str, int]] = {}
    for r in reports:
        slot = by_claim.setdefault(r.claim_id, {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_INAPPLICABLE: 0})
        slot[r.status] += 1
    lines = []
    for cid in CLAIM_IDS:
        if cid not in by_claim:
            continue
        c = by_claim[cid]
        lines.append(
            f"{cid:6s} pass {c[STATUS_PASS]:5d}  fail {c[STATUS_FAIL]:5d}  "
            f"inapplicable {c[STATUS_INAPPLICABLE]:5d}  ({CLAIM_TITLES[cid]})"
        )
    suite = SuiteResult(list(reports))
    counts = suite.counts
    lines.append(
        f"total  pass {counts[STATUS_PASS]:5d}  fail {counts[STATUS_FAIL]:5d}  "
        f"inapplicable {counts[STATUS_INAPPLICABLE]:5d}"
    )
    lines.append(f"exit code {suite.exit_code}")
    return "\n".join(lines) + "\n"


def write_report_files(reports: Sequence[VerificationReport], outdir) -> list[str]:
    """Write reports.jsonl, summary.txt, and the figures; returns the paths."""
    from pathlib import Path

    from .plots import render_report_figures

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    jsonl = out / "reports.jsonl"
    jsonl.write_text(reports_to_jsonl(reports))
    summary = out / "summary.txt"
    summary.write_text(summary_text(reports))
    paths = [str(jsonl), str(summary)]
    paths.extend(render_report_figures(reports, out))
    return paths
