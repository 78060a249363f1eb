"""End-to-end run: family search, tables, k-selection, certificates, sum check."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import gcd
from pathlib import Path

from .bipolar_cert import certify_zero_bipolar
from .cfk import ConnectedSum, FilteredComplex, VSequence, trefoil
from .dinv import CorrectionTable, assert_order_two_vanishing, lens_space_table, surgery_table
from .linkform import LinkingGroup, structured_metabolizers
from .numtheory import find_family, sqrt_minus_one
from .obstruction import KnotDescriptor, connected_sum_decision, select_k


@dataclass
class PipelineConfig:
    n_lo: int = 21
    n_hi: int = 120
    family_size: int = 1000
    d_model: str = "staircase"
    q_D: int | str = "2n"
    q_U: int | str = "2n"
    companion: str = "double"
    unit_a: int = 1
    bound_check: bool = True
    output_dir: str | None = None

    @classmethod
    def from_dict(cls, doc: dict) -> PipelineConfig:
        known = set(cls.__dataclass_fields__)
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config fields {sorted(extra)}")
        cfg = cls(**doc)
        cfg.check()
        return cfg

    def check(self) -> None:
        if self.n_lo > self.n_hi:
            raise ValueError("n_lo > n_hi")
        if self.companion not in ("double", "single"):
            raise ValueError(f"companion must be 'double' or 'single', got {self.companion!r}")
        for q in (self.q_D, self.q_U):
            if not (q == "2n" or (isinstance(q, int) and q > 0)):
                raise ValueError(f"q must be '2n' or a positive integer, got {q!r}")

    def q_for(self, which: str, n: int) -> int:
        q = self.q_D if which == "D" else self.q_U
        q = 2 * n if q == "2n" else q
        if gcd(q, 4 * n * n + 1) != 1:
            raise ValueError(f"q={q} is not coprime to 4n^2+1 for n={n}")
        return q

    def model(self) -> FilteredComplex:
        return _load_model(_model_text(self.d_model))


def _model_text(source: str) -> str:
    # cache on contents, not path, so an edited file is picked up
    return "" if source == "staircase" else Path(source).read_text()


@lru_cache(maxsize=8)
def _load_model(text: str) -> FilteredComplex:
    return FilteredComplex.from_json(text) if text else trefoil()


def companion_v_sequence(k: int, cfg: PipelineConfig) -> VSequence:
    copies = k * (2 if cfg.companion == "double" else 1)
    return _companion_v(copies, _model_text(cfg.d_model))


@lru_cache(maxsize=256)
def _companion_v(copies: int, text: str) -> VSequence:
    return ConnectedSum([_load_model(text)] * copies).v_sequence()


def knot_tables(n: int, k: int, cfg: PipelineConfig) -> tuple[CorrectionTable, CorrectionTable]:
    """Tables for M(K_{D_k,n}) and M(K_{U,n}); both have order p = 4n^2+1."""
    p = 4 * n * n + 1
    q_d, q_u = cfg.q_for("D", n), cfg.q_for("U", n)
    comp = "D_k # D_k^r" if cfg.companion == "double" else "D_k"
    v = companion_v_sequence(k, cfg)
    t_d = surgery_table(
        v, p, q_d, f"computed: S^3_{p}/{q_d}({comp}), k={k}, D-model={cfg.d_model}, V_0={v.V(0)}"
    )
    t_u = lens_space_table(p, q_u, f"computed: S^3_{p}/{q_u}(U)")
    for t in (t_d, t_u):
        t.validate()
    if t_d.m != p or t_u.m != p:
        raise AssertionError("table order differs from 4n^2+1")
    return t_d, t_u


def run_pipeline(cfg: PipelineConfig) -> dict:
    cfg.check()
    family = find_family(cfg.n_lo, cfg.n_hi, cfg.family_size)
    members = []
    chosen = []
    for cand in family:
        n, m = cand.n, cand.m
        roots = sqrt_minus_one(m)
        group = LinkingGroup(m, cfg.unit_a)
        mets = structured_metabolizers(m)
        if not all(h.is_isotropic(group) and h.order == m for h in mets):
            raise AssertionError(f"structured metabolizers fail for m={m}")
        top = (n - 1) // 2 if cfg.bound_check else n // 4
        tables = {k: knot_tables(n, k, cfg) for k in range(1, top + 1)}
        t_u = tables[1][1]
        if not assert_order_two_vanishing(t_u):
            raise AssertionError(f"d(M(K_U,{n}), s_0) != 0")
        sel = select_k(n, tables, roots)
        entry = {
            "n": n,
            "m": m,
            "roots": list(roots),
            "metabolizers": [[1, b] for b in roots],
            "selected_k": sel.selected,
            "k": sel.selected[0] if sel.selected else None,
            "exceptional_k_below_n_over_2": sel.inconclusive_full_range,
            "warnings": sel.warnings,
            "pairs": [],
        }
        for k in sel.selected:
            rep = sel.reports[k]
            t_d, t_u = tables[k]
            if not rep.verify(t_d, t_u):
                raise AssertionError(f"witness re-verification failed for n={n}, k={k}")
            if t_d[0] + t_u[0] != 0:
                # only reachable with a user-supplied D model
                raise ValueError(f"d(M(K_{n},{k}), s_0) != 0 under D-model {cfg.d_model}")
            entry["pairs"].append(
                {"k": k, "certificate": certify_zero_bipolar(n, k).to_dict(), "report": rep.to_dict()}
            )
        members.append(entry)
        if sel.selected:
            k = sel.selected[0]
            chosen.append((KnotDescriptor(n, k), *tables[k], roots))

    family_check = None
    if chosen:
        verdicts = [connected_sum_decision(chosen, position=i).verdict for i in range(len(chosen))]
        first = connected_sum_decision(chosen)
        family_check = {
            "knots": [{"n": d.n, "k": d.k} for d, *_ in chosen],
            "verdict": first.verdict,
            "position_independent": len(set(verdicts)) == 1,
            "chain": first.chain,
        }
    return {
        "config": asdict(cfg) | {"output_dir": None},
        "family": members,
        "family_check": family_check,
    }


def render_text(report: dict) -> str:
    lines = []
    cfg = report["config"]
    lines.append(f"family search n in [{cfg['n_lo']}, {cfg['n_hi']}], D-model={cfg['d_model']}")
    for e in report["family"]:
        ks = ",".join(map(str, e["selected_k"])) or "-"
        lines.append(f"n={e['n']:>5} m={e['m']:>8} roots={len(e['roots'])} obstructed k: {ks}")
        for w in e["warnings"]:
            lines.append(f"        warning: {w}")
    fc = report["family_check"]
    if fc:
        names = " # ".join(f"K_{{{x['n']},{x['k']}}}" for x in fc["knots"])
        lines.append(f"connected sum {names}: {fc['verdict']}"
                     f" (position independent: {fc['position_independent']})")
    else:
        lines.append("no member with an obstructed k")
    return "\n".join(lines) + "\n"


def write_report(report: dict, outdir: str | Path) -> tuple[Path, Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    js, txt = out / "pipeline.json", out / "pipeline.txt"
    js.write_text(json.dumps(report, indent=2) + "\n")
    txt.write_text(render_text(report))
    return js, txt
