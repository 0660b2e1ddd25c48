"""Per-graph verdicts and batch classification, with a JSON-lines record format."""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .constructions import (
    CertifiedMatrix,
    cycle_matrix,
    even_complete,
    frame_realize,
    rank2_for_graph,
    recognize_rank2,
    relabel_certified,
)
from .errors import PreconditionError, SoundnessError
from .graphs import Graph, enumerate_connected, is_connected, parse_graph6, write_graph6
from .linalg import DEFAULT_TOL, SymMatrix, certify_square, pattern_of
from .obstructions import Obstruction, all_obstructions, first_obstruction, replay
from .search import SearchConfig, numeric_certify, search_detailed


class Verdict(str, Enum):
    PROVED_NO = "ProvedNo"
    CERTIFIED_YES = "CertifiedYes"
    NUMERIC_YES = "NumericYes"
    UNKNOWN = "Unknown"

    @property
    def is_yes(self) -> bool:
        return self in (Verdict.CERTIFIED_YES, Verdict.NUMERIC_YES)


@dataclass
class ClassificationRecord:
    graph6: str
    verdict: Verdict
    reason: str
    certificate: dict | None = None
    obstruction: Obstruction | None = None
    best_cost: float | None = None
    timings: dict = field(default_factory=dict)

    def to_dict(self, with_timings: bool = False) -> dict:
        out = {
            "graph6": self.graph6,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "certificate": self.certificate,
            "obstruction": self.obstruction.to_dict() if self.obstruction else None,
            "best_cost": self.best_cost,
        }
        if with_timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    def to_json(self, with_timings: bool = False) -> str:
        return json.dumps(self.to_dict(with_timings), sort_keys=True)

    def matrix(self) -> SymMatrix | None:
        return certificate_matrix(self.certificate) if self.certificate else None


def certificate_dict(c: CertifiedMatrix) -> dict:
    m = c.matrix
    cert = c.certificate
    out = {
        "order": m.order,
        "upper": list(m.upper),
        "eigenvalues": list(cert.eigenvalues),
        "max_gap": cert.max_gap,
        "mode": cert.mode,
        "tol": cert.tol,
        "provenance": c.provenance,
    }
    if m.exact is not None:
        out["exact_upper"] = [str(x) for x in m.exact]
    return out


def certificate_matrix(d: dict) -> SymMatrix:
    if "exact_upper" in d:
        return SymMatrix.from_upper(d["order"], [Fraction(x) for x in d["exact_upper"]], exact=True)
    return SymMatrix.from_upper(d["order"], [float(x) for x in d["upper"]], exact=False)


def verify_record(rec: ClassificationRecord) -> None:
    """Re-check the evidence behind a record; raises ValueError on mismatch."""
    g = parse_graph6(rec.graph6)
    if rec.verdict is Verdict.PROVED_NO:
        if rec.obstruction is None or not replay(g, rec.obstruction):
            raise ValueError(f"{rec.graph6}: obstruction witness does not replay")
    elif rec.verdict.is_yes:
        if rec.certificate is None:
            raise ValueError(f"{rec.graph6}: YES verdict without a certificate")
        m = certificate_matrix(rec.certificate)
        if pattern_of(m, 1e-10) != g:
            raise ValueError(f"{rec.graph6}: certificate pattern differs from the graph")
        if not certify_square(m, rec.certificate.get("tol", DEFAULT_TOL)).is_square:
            raise ValueError(f"{rec.graph6}: certificate does not re-verify")


def record_from_dict(d: dict, verify: bool = True) -> ClassificationRecord:
    obs = Obstruction.from_dict(d["obstruction"]) if d.get("obstruction") else None
    rec = ClassificationRecord(d["graph6"], Verdict(d["verdict"]), d["reason"], d.get("certificate"),
                               obs, d.get("best_cost"), d.get("timings", {}))
    if verify:
        verify_record(rec)
    return rec


def load_records(lines, verify: bool = True) -> list[ClassificationRecord]:
    return [record_from_dict(json.loads(line), verify) for line in lines if line.strip()]


def _is_cycle(g: Graph) -> bool:
    return g.order >= 3 and all(d == 2 for d in g.degrees()) and is_connected(g)


def _is_complete(g: Graph) -> bool:
    return g.size == g.order * (g.order - 1) // 2


def construct_for(g: Graph, seed: int = 0) -> tuple[CertifiedMatrix, Verdict] | None:
    """Constructive certificate for ``g`` when a recogniser applies."""
    if _is_cycle(g) and g.order % 2 == 0:
        return relabel_certified(cycle_matrix(g.order), g), Verdict.CERTIFIED_YES
    if _is_complete(g) and g.order % 2 == 0 and g.order >= 4:
        return even_complete(g.order, list(range(1, g.order // 2 + 1))), Verdict.CERTIFIED_YES
    dec = recognize_rank2(g)
    if dec is not None and g.order % 2 == 0:
        if dec.all_q_positive:
            return rank2_for_graph(g), Verdict.CERTIFIED_YES
        found = frame_realize(g, seed=seed)
        if found is not None:
            return found, Verdict.NUMERIC_YES
    return None


def classify_graph(g: Graph, cfg: SearchConfig = SearchConfig(), tol: float = DEFAULT_TOL) -> ClassificationRecord:
    if not is_connected(g):
        raise PreconditionError("classify_graph expects a connected graph")
    g6 = write_graph6(g)
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    obs = first_obstruction(g)
    timings["obstructions"] = 1000 * (time.perf_counter() - t0)
    if obs is not None:
        return ClassificationRecord(g6, Verdict.PROVED_NO, obs.kind.value, obstruction=obs, timings=timings)

    t0 = time.perf_counter()
    built = construct_for(g, cfg.seed)
    timings["constructions"] = 1000 * (time.perf_counter() - t0)
    if built is not None:
        cm, verdict = built
        rec = ClassificationRecord(g6, verdict, cm.provenance["name"], certificate_dict(cm), timings=timings)
    else:
        t0 = time.perf_counter()
        res = search_detailed(g, cfg)
        cm = numeric_certify(g, cfg, tol, result=res)
        timings["search"] = 1000 * (time.perf_counter() - t0)
        if cm is None:
            return ClassificationRecord(g6, Verdict.UNKNOWN, "search", best_cost=res.cost, timings=timings)
        rec = ClassificationRecord(g6, Verdict.NUMERIC_YES, "search", certificate_dict(cm),
                                   best_cost=res.cost, timings=timings)
    clash = all_obstructions(g)
    if clash:
        raise SoundnessError(f"{g6}: YES certificate ({rec.reason}) but obstruction {clash[0].to_dict()}; "
                             f"record: {rec.to_json()}")
    return rec


def _classify_job(args):
    g6, cfg, tol = args
    return classify_graph(parse_graph6(g6), cfg, tol)


def classify_all(n: int, cfg: SearchConfig = SearchConfig(), tol: float = DEFAULT_TOL,
                 workers: int | None = None) -> list[ClassificationRecord]:
    """One record per connected graph on ``n`` vertices, in enumeration order."""
    graphs = enumerate_connected(n)
    jobs = [(write_graph6(g), cfg, tol) for g in graphs]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_classify_job, jobs))
    return [_classify_job(j) for j in jobs]


def summarize(records) -> dict[str, int]:
    counts = Counter(r.verdict.value for r in records)
    return {v.value: counts.get(v.value, 0) for v in Verdict}
