"""Side-by-side comparison of a run against the reference values."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import reference as ref
from .exact import format_q2
from .local import LocalCertificate, sd_dominates_lemma3, theta
from .search import grid_counts

EXACT, DEVIATION, FAILURE = "exact-match", "expected-deviation", "FAILURE"
REPORT_HEADER = "hemisum-report v1"


@dataclass
class Comparison:
    name: str
    ours: str
    reference: str
    classification: str
    note: str = ""


@dataclass
class RunReport:
    modes: dict = field(default_factory=dict)
    comparisons: list = field(default_factory=list)

    def add(self, name, ours, reference, classification, note=""):
        self.comparisons.append(Comparison(name, str(ours), str(reference), classification, note))

    def exact(self, name, ours, reference, deviation_note: str | None = None):
        """exact-match on equality; otherwise FAILURE unless a documented note applies."""
        if ours == reference:
            self.add(name, ours, reference, EXACT)
        elif deviation_note is not None:
            self.add(name, ours, reference, DEVIATION, deviation_note)
        else:
            self.add(name, ours, reference, FAILURE)

    def estimator(self, name, ours, reference, note="estimator-dependent"):
        self.add(name, ours, reference, EXACT if ours == reference else DEVIATION, note)

    @property
    def has_failure(self) -> bool:
        return any(c.classification == FAILURE for c in self.comparisons)

    def render(self) -> str:
        lines = [REPORT_HEADER]
        for k, v in self.modes.items():
            lines.append(f"mode {k}: {v}")
        for c in self.comparisons:
            note = f"  ({c.note})" if c.note else ""
            body = c.ours if c.ours == c.reference else f"{c.ours} vs {c.reference}"
            lines.append(f"{c.name}: {body} [{c.classification}]{note}")
        lines.append(f"overall: {'FAILURE' if self.has_failure else 'ok'}")
        return "\n".join(lines) + "\n"

    def table(self) -> str:
        """Tab-separated machine-readable deviation table."""
        rows = ["name\tours\treference\tclassification"]
        rows += [f"{c.name}\t{c.ours}\t{c.reference}\t{c.classification}" for c in self.comparisons]
        return "\n".join(rows) + "\n"


H3_NOTE = "reference H3 polynomial has 6 terms and the 1288 total needs 6"


def compare_local(rep: RunReport, c: LocalCertificate) -> None:
    R = ref.REFERENCE
    rep.modes["local.r0"] = str(c.r0)
    rep.modes["local.majorizer"] = c.majorizer_used
    rep.modes["local.valid"] = str(c.valid).lower()
    rep.exact("local", f"{c.term_count} monomials", f"{R.J_terms} monomials")
    rep.exact("local: J degrees", (c.J.min_degree(), c.J.max_degree()), R.J_degrees)
    ours = c.H_counts()
    for d, (a, b) in enumerate(zip(ours, R.H_counts), start=2):
        rep.exact(f"local: H{d} terms", a, b, H3_NOTE if d == 3 else None)
    H = c.H_components
    for d, p in ((2, ref.H2), (3, ref.H3), (4, ref.H4), (23, ref.H23), (24, ref.H24)):
        rep.exact(f"local: H{d} polynomial", "match" if H.get(d) == p else "differs", "match")
    rep.exact("local: theta terms", len(c.theta), R.theta_terms)
    if c.r0 == Fraction(1, 7):
        if c.majorizer_used == "rounded":
            rep.exact("local: res5", format_form_short(c.res5), format_form_short(R.res5))
        else:
            rep.add("local: res5", format_form_short(c.res5), format_form_short(R.res5),
                    EXACT if c.res5 == R.res5 else DEVIATION, f"majorizer {c.majorizer_used}")
        if c.majorizer_used == "sd-literal":
            sound = sd_dominates_lemma3(theta(c.H_components), c.r0)
            rep.add("local: literal S_d dominates the AM-GM bound", str(sound).lower(), "true",
                    EXACT if sound else FAILURE, "literal S_d is sound but does not reproduce the printed res5"
                    if sound and c.res5 != R.res5 else "")
    cap_ok = c.res5.dominated_by(c.res5_cap)
    rep.add("local: res5 below cap", str(cap_ok).lower(), "true", EXACT if cap_ok else FAILURE,
            "" if cap_ok else f"majorizer {c.majorizer_used} exceeds the cap; failing stage majorize")
    if c.r0 == Fraction(1, 7):
        rep.exact("local: K2 critical point", _q2t(c.K2_report.critical_point), _q2t(ref.K2_CRITICAL_POINT))
        rep.add("local: K2 critical point inside cube", str(c.K2_report.critical_point_inside_cube).lower(),
                "false", EXACT if not c.K2_report.critical_point_inside_cube else DEVIATION,
                "validity rests on the exact cube maximum instead" if c.K2_report.critical_point_inside_cube else "")
        rep.add("local: K2 max on cube", format_q2(c.K2_report.max_value), "< 0",
                EXACT if c.K2_report.valid else FAILURE)
        rep.exact("local: K2(0,0,0)", format_q2(c.K2_report.value_at_origin), format_q2(R.K2_at_origin))
        rep.exact("local: k30 bound", str(c.k30_bound), str(ref.K30_BOUND))
        rep.exact("local: k40 bound", str(c.k40_bound), str(ref.K40_BOUND))
        rep.exact("local: final matrix", _rows(c.final_matrix.rows()), _rows(ref.MATRIX))
    rep.add("local: negative semidefinite", str(c.nsd_verdict).lower(), "true",
            EXACT if c.nsd_verdict else FAILURE)
    rep.add("local: certificate valid", str(c.valid).lower(), "true",
            EXACT if c.valid else FAILURE, "" if c.valid else f"failing stage {c.failing_stage}")


def format_form_short(f) -> str:
    return "; ".join(format_q2(x) for x in f.coeffs)


def _q2t(xs) -> str:
    return "(" + ", ".join(format_q2(x) for x in xs) + ")" if xs else "none"


def _rows(rows) -> str:
    return "[" + "; ".join(", ".join(format_q2(x) for x in r) for r in rows) + "]"


def compare_global(rep: RunReport, cfg_echo: dict, counts: dict, valid: bool) -> None:
    R = ref.REFERENCE
    for k, v in cfg_echo.items():
        rep.modes[f"global.{k}"] = str(v).lower() if isinstance(v, bool) else str(v)
    rep.modes["global.valid"] = str(valid).lower()
    circ, disk = grid_counts()
    rep.exact("global: grid circle cells", circ, R.grid_circle)
    rep.exact("global: grid disk cells", disk, R.grid_disk)
    rep.exact("global: cover size", counts.get("step1.raw"), R.cover_size)
    paper = cfg_echo.get("mode") == "paper"
    if paper:
        rep.estimator("global: step1 bound pass", counts.get("step1.bound_pass"), R.step1_bound_pass)
    rep.estimator("global: step1 survivors", counts.get("step1.survivors"), R.step1_survivors)
    if "step2.raw" in counts:
        rep.estimator("global: step2 raw children", counts["step2.raw"], R.step2_raw)
        rep.estimator("global: step2 feasible", counts["step2.feasible"], R.step2_feasible)
        if paper:
            rep.estimator("global: step2 bound pass", counts["step2.bound_pass"], R.step2_bound_pass)
        rep.estimator("global: step2 neighborhood", counts["step2.neighborhood"], R.step2_neighborhood,
                      "depends on which step-1 cubes survive")
        rep.estimator("global: step2 survivors", counts["step2.survivors"], R.step2_survivors)
    key128 = "resolved_at_edge_1/128"
    key512 = "resolved_at_edge_1/512"
    rep.estimator("global: resolved at 1/128", counts.get(key128, 0), R.step3_resolved_128)
    rep.estimator("global: resolved at 1/512", counts.get(key512, 0), R.step3_resolved_512)
    rep.add("global: failures", counts.get("failures", 0), 0,
            EXACT if valid else FAILURE)


def build_report(local: LocalCertificate | None = None, global_cert=None) -> RunReport:
    rep = RunReport()
    if local is not None:
        compare_local(rep, local)
    if global_cert is not None:
        compare_global(rep, global_cert.config, global_cert.counts, global_cert.valid)
    return rep

