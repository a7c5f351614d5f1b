"""Plain-text certificates and their checkers.

Local certificate: one ``key: value`` line per field, every polynomial in
canonical form.

Global certificate: a header with the configuration echo and counts, then
one ``root`` record (verdicts of the 806,400 cover cubes, run-length encoded
in cover order) and one ``node`` record per subdivided cube listing the
verdicts of its 4096 children in lexicographic order.  Verdict letters:

    d subdivided      i infeasible     n inside the excluded neighborhood
    b bound filter    y symmetry       s sum test       x exhausted

A third-party checker re-derives every verdict and checks that each ``d``
child has its own node record.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

import numpy as np

from .exact import format_q2, format_rat, parse_q2
from .geometry import NeighborhoodSpec
from .local import K2Report, LocalCertificate, Stage, SymMatrix3
from .poly import format_form, format_poly, parse_form, parse_poly
from .search import (
    SURVIVE,
    GlobalResult,
    NodeRecord,
    SearchConfig,
    _rle_np,
    child_slots,
    classify,
    classify_children,
    initial_cover_indices,
    rle_decode,
)

LOCAL_HEADER = "hemisum-local-certificate v1"
GLOBAL_HEADER = "hemisum-global-certificate v1"


class CertificateError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _parse_bool(x: str) -> bool:
    if x not in ("true", "false"):
        raise ValueError(f"expected true/false, got {x!r}")
    return x == "true"


def _q2s(xs) -> str:
    return " ; ".join(format_q2(x) for x in xs)


def _parse_q2s(text: str) -> tuple:
    return tuple(parse_q2(x) for x in text.split(";"))


# local -------------------------------------------------------------------

def _report_lines(prefix: str, r: K2Report) -> list[str]:
    return [
        f"{prefix}.half_width: {format_rat(r.half_width)}",
        f"{prefix}.critical_point: " + ("none" if r.critical_point is None else _q2s(r.critical_point)),
        f"{prefix}.critical_point_inside_cube: "
        + ("none" if r.critical_point_inside_cube is None else _bool(r.critical_point_inside_cube)),
        f"{prefix}.value_at_origin: {format_q2(r.value_at_origin)}",
        f"{prefix}.value_at_critical_point: "
        + ("none" if r.value_at_critical_point is None else format_q2(r.value_at_critical_point)),
        f"{prefix}.max_value: {format_q2(r.max_value)}",
        f"{prefix}.argmax: {_q2s(r.argmax)}",
    ] + [f"{prefix}.face {name}: {format_q2(v)}" for name, v in r.face_maxima]


def serialize_local(c: LocalCertificate) -> str:
    lines = [
        LOCAL_HEADER,
        f"r0: {format_rat(c.r0)}",
        f"majorizer: {c.majorizer_used}",
        f"orientation_assumption: {_bool(c.orientation_assumption)}",
        f"valid: {_bool(c.valid)}",
        f"samples: {c.samples}",
        "witness: " + ("none" if c.witness is None else " ; ".join(format_rat(x) for x in c.witness)),
    ]
    for st in c.stages:
        lines.append(f"stage {st.name}: {'ok' if st.ok else 'FAIL'} | {st.detail}")
    lines.append(f"J_terms: {c.term_count}")
    lines.append(f"J: {format_poly(c.J)}")
    for d, h in sorted(c.H_components.items()):
        lines.append(f"H{d}: {format_poly(h)}")
    lines.append(f"theta: {format_poly(c.theta)}")
    lines.append(f"res5: {format_form(c.res5)}")
    lines.append(f"res5_cap: {format_form(c.res5_cap)}")
    for name in ("K2", "k20", "k30", "k40", "k42", "q2"):
        lines.append(f"{name}: {format_poly(getattr(c, name))}")
    lines.append(f"k44: {format_q2(c.k44)}")
    lines.append(f"k30_bound: {format_form(c.k30_bound)}")
    lines.append(f"k40_bound: {format_form(c.k40_bound)}")
    lines += _report_lines("K2_report", c.K2_report)
    lines += _report_lines("K2_loose", c.K2_loose)
    M = c.final_matrix
    lines.append("final_matrix: " + _q2s((M.m11, M.m22, M.m33, M.m12, M.m13, M.m23)))
    lines.append(f"nsd_verdict: {_bool(c.nsd_verdict)}")
    return "\n".join(lines) + "\n"


def _parse_report(kv: dict, prefix: str) -> K2Report:
    def opt(key, fn):
        v = kv[f"{prefix}.{key}"]
        return None if v == "none" else fn(v)

    faces = [(k[len(prefix) + 6:], parse_q2(v)) for k, v in kv.items() if k.startswith(f"{prefix}.face ")]
    return K2Report(
        critical_point=opt("critical_point", _parse_q2s),
        critical_point_inside_cube=opt("critical_point_inside_cube", _parse_bool),
        value_at_origin=parse_q2(kv[f"{prefix}.value_at_origin"]),
        value_at_critical_point=opt("value_at_critical_point", parse_q2),
        face_maxima=faces,
        max_value=parse_q2(kv[f"{prefix}.max_value"]),
        argmax=_parse_q2s(kv[f"{prefix}.argmax"]),
        half_width=Fraction(kv[f"{prefix}.half_width"]),
    )


def parse_local(text: str) -> LocalCertificate:
    lines = text.splitlines()
    if not lines or lines[0] != LOCAL_HEADER:
        raise CertificateError(f"missing header {LOCAL_HEADER!r}", 1)
    kv: Dict[str, str] = {}
    stages = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        key, sep, val = line.partition(": ")
        if not sep:
            raise CertificateError(f"malformed line {line[:40]!r}", no)
        if key.startswith("stage "):
            status, _, detail = val.partition(" | ")
            stages.append(Stage(key[6:], status == "ok", detail))
        else:
            kv[key] = val
    try:
        H = {int(k[1:]): parse_poly(v) for k, v in kv.items() if k[0] == "H" and k[1:].isdigit()}
        m = _parse_q2s(kv["final_matrix"])
        witness = None if kv["witness"] == "none" else tuple(Fraction(x) for x in kv["witness"].split(";"))
        return LocalCertificate(
            r0=Fraction(kv["r0"]), majorizer_used=kv["majorizer"], J=parse_poly(kv["J"]), H_components=H,
            theta=parse_poly(kv["theta"]), res5=parse_form(kv["res5"]), res5_cap=parse_form(kv["res5_cap"]),
            K2=parse_poly(kv["K2"]), K2_report=_parse_report(kv, "K2_report"),
            K2_loose=_parse_report(kv, "K2_loose"), k20=parse_poly(kv["k20"]), k30=parse_poly(kv["k30"]),
            k40=parse_poly(kv["k40"]), k42=parse_poly(kv["k42"]), k44=parse_q2(kv["k44"]),
            k30_bound=parse_form(kv["k30_bound"]), k40_bound=parse_form(kv["k40_bound"]),
            q2=parse_poly(kv["q2"]), final_matrix=SymMatrix3(*m), nsd_verdict=_parse_bool(kv["nsd_verdict"]),
            orientation_assumption=_parse_bool(kv["orientation_assumption"]), stages=stages,
            witness=witness, samples=int(kv["samples"]),
        )
    except KeyError as e:
        raise CertificateError(f"missing field {e.args[0]!r}") from None


# global ------------------------------------------------------------------

@dataclass
class GlobalCertificate:
    config: dict
    counts: dict
    valid: bool
    root: str
    records: list = field(default_factory=list)    # NodeRecord
    failures: list = field(default_factory=list)   # (level, idx)
    seconds: float = 0.0

    @classmethod
    def from_result(cls, r: GlobalResult) -> "GlobalCertificate":
        return cls(dict(r.cfg.echo()), r.counts(), r.valid, r.root_codes, list(r.records),
                   list(r.failures), r.seconds)

    def search_config(self) -> SearchConfig:
        c = self.config
        return SearchConfig(
            bfs_edges=tuple(Fraction(x) for x in c["bfs_edges"].split(",")),
            dfs_max_edge=Fraction(c["dfs_max_edge"]),
            use_bound_filter=c["mode"] == "paper",
            sqrt_precision=int(c["sqrt_precision"]),
            exclude_neighborhood=str(c["exclude_neighborhood"]).lower() == "true",
            canonical_labels=str(c["canonical_labels"]).lower() == "true",
        )

    def __eq__(self, other):
        if not isinstance(other, GlobalCertificate):
            return NotImplemented
        return (_norm(self.config) == _norm(other.config) and self.counts == other.counts
                and self.valid == other.valid and self.root == other.root
                and self.records == other.records and self.failures == other.failures)


def _norm(d: dict) -> dict:
    return {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in d.items()}


def serialize_global(c: GlobalCertificate, include_timing: bool = False) -> str:
    lines = [GLOBAL_HEADER]
    for k, v in c.config.items():
        lines.append(f"config {k}: {str(v).lower() if isinstance(v, bool) else v}")
    lines.append(f"valid: {_bool(c.valid)}")
    if include_timing:
        lines.append(f"seconds: {c.seconds:.1f}")
    for k, v in c.counts.items():
        lines.append(f"count {k}: {v}")
    for level, idx in c.failures:
        lines.append(f"failure {level} " + " ".join(map(str, idx)))
    lines.append(f"root {c.root}")
    for r in c.records:
        lines.append(f"node {r.level} " + " ".join(map(str, r.idx)) + f" {r.children}")
    return "\n".join(lines) + "\n"


def parse_global(text: str) -> GlobalCertificate:
    lines = text.splitlines()
    if not lines or lines[0] != GLOBAL_HEADER:
        raise CertificateError(f"missing header {GLOBAL_HEADER!r}", 1)
    config, counts, records, failures = {}, {}, [], []
    valid, root, seconds = None, None, 0.0
    for no, line in enumerate(lines[1:], start=2):
        try:
            if line.startswith("config "):
                k, _, v = line[7:].partition(": ")
                config[k] = v
            elif line.startswith("count "):
                k, _, v = line[6:].partition(": ")
                counts[k] = int(v)
            elif line.startswith("valid: "):
                valid = _parse_bool(line[7:])
            elif line.startswith("seconds: "):
                seconds = float(line[9:])
            elif line.startswith("failure "):
                parts = line.split()
                failures.append((int(parts[1]), tuple(int(x) for x in parts[2:8])))
            elif line.startswith("root "):
                root = line[5:]
            elif line.startswith("node "):
                parts = line.split()
                if len(parts) != 9:
                    raise ValueError("node record needs level, 6 indices and codes")
                records.append(NodeRecord(int(parts[1]), tuple(int(x) for x in parts[2:8]), parts[8]))
            elif line.strip():
                raise ValueError(f"unknown record {line[:30]!r}")
        except ValueError as e:
            raise CertificateError(str(e), no) from None
    if valid is None or root is None:
        raise CertificateError("certificate lacks a valid flag or root record")
    return GlobalCertificate(config, counts, valid, root, records, failures, seconds)


@dataclass
class CheckResult:
    ok: bool
    nodes_checked: int
    problems: list


def check_global(cert: GlobalCertificate, spec: NeighborhoodSpec = NeighborhoodSpec(),
                 max_problems: int = 20) -> CheckResult:
    """Re-derive every verdict and the covering structure of the certificate."""
    cfg = cert.search_config()
    problems = []
    cover = initial_cover_indices()
    codes, _ = classify(cover, 0, cfg, spec, feasible_known=True)
    if _rle_np(codes) != cert.root:
        problems.append("root verdicts differ")
    pending = {(0, tuple(int(x) for x in row)) for row in cover[codes == SURVIVE]}
    last_bfs = len(cfg.bfs_edges) - 1
    by_level: Dict[int, list] = {}
    for r in cert.records:
        by_level.setdefault(r.level, []).append(r)
    failures = set()
    checked = 0
    for level in sorted(by_level):
        recs = by_level[level]
        idx = np.array([r.idx for r in recs], dtype=np.int64)
        use_bound = cfg.use_bound_filter and level < last_bfs
        for i in range(0, len(recs), 256):
            block = idx[i:i + 256]
            _, codes, _ = classify_children(block, level, cfg, spec, use_bound)
            for j in range(block.shape[0]):
                rec = recs[i + j]
                key = (rec.level, rec.idx)
                if key not in pending:
                    problems.append(f"node {key} is not a subdivided cube")
                pending.discard(key)
                sub = codes[j * 4096:(j + 1) * 4096]
                if _rle_np(sub) != rec.children:
                    problems.append(f"node {key}: child verdicts differ")
                    continue
                kids = _child_indices(np.array(rec.idx), level)
                for k in np.nonzero(sub == SURVIVE)[0]:
                    child = (level + 1, tuple(int(x) for x in kids[k]))
                    if level + 1 >= cfg.max_level:
                        failures.add(child)
                    else:
                        pending.add(child)
                checked += 1
                if len(problems) >= max_problems:
                    return CheckResult(False, checked, problems)
    failures |= {p for p in pending if p[0] >= cfg.max_level}
    pending = {p for p in pending if p[0] < cfg.max_level}
    if pending:
        problems.append(f"{len(pending)} subdivided cubes have no node record")
    if failures != set(cert.failures):
        problems.append("failure list does not match the replay")
    if cert.valid != (not failures):
        problems.append("valid flag inconsistent with failures")
    return CheckResult(not problems, checked, problems)


def _child_indices(idx: np.ndarray, level: int) -> np.ndarray:
    kids, _ = child_slots(idx[None, :], level)
    return kids


def rle_counts(text: str) -> dict:
    out: dict = {}
    for c in rle_decode(text):
        out[c] = out.get(c, 0) + 1
    return out
