"""Command line front-end: ``toric-qdm <command> <problem.json>``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import gkz, mirror
from .batyrev import (batyrev_rank_generic, build_ideals, initial_ideal_check, rank_triple,
                      residual_rank)
from .checks import leading_term_suite, negation_suite, unsupported_suite
from .model import ToricModel
from .toricfan import BundleData, Fan, FanError, concavity_margins

SCHEMA_VERSION = "1"
COMMANDS = ("validate", "primitive", "batyrev", "residual", "gkz", "colon", "ifunction", "all")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNDETERMINED = 3


class ProblemError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None, col: Optional[int] = None) -> None:
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.col = col


@dataclass
class ProblemFile:
    lattice_rank: int
    rays: List[List[int]]
    max_cones: List[List[int]]
    bundles: List[List[int]] = field(default_factory=list)
    h2_basis: Optional[List[List[int]]] = None
    ample_weights: Optional[List[Fraction]] = None
    truncation_order: int = 3
    name: Optional[str] = None


def _int_matrix(obj, key: str) -> List[List[int]]:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ProblemError(f"'{key}' must be a list of integer lists")
    for row in obj:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise ProblemError(f"'{key}' must contain integers only")
    return [list(r) for r in obj]


def _rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ProblemError("rationals must be integers or 'p/q' strings")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise ProblemError(f"bad rational {x!r}; use an integer or a 'p/q' string")


def parse_text(text: str) -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise ProblemError("top level must be an object")
    known = {"lattice_rank", "rays", "max_cones", "bundles", "h2_basis", "ample_weights",
             "truncation_order", "name"}
    extra = sorted(set(data) - known)
    if extra:
        raise ProblemError(f"unknown keys: {', '.join(extra)}")
    for key in ("lattice_rank", "rays", "max_cones"):
        if key not in data:
            raise ProblemError(f"missing key '{key}'")
    n = data["lattice_rank"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ProblemError("'lattice_rank' must be a positive integer")
    rays = _int_matrix(data["rays"], "rays")
    cones = _int_matrix(data["max_cones"], "max_cones")
    bundles = _int_matrix(data.get("bundles", []), "bundles")
    basis = data.get("h2_basis")
    if basis is not None:
        basis = _int_matrix(basis, "h2_basis")
    weights = data.get("ample_weights")
    if weights is not None:
        if not isinstance(weights, list):
            raise ProblemError("'ample_weights' must be a list")
        weights = [_rational(w) for w in weights]
    order = data.get("truncation_order", 3)
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise ProblemError("'truncation_order' must be a nonnegative integer")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise ProblemError("'name' must be a string")
    return ProblemFile(n, rays, cones, bundles, basis, weights, order, name)


def parse(path) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ProblemError(f"cannot read {path}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise ProblemError(f"{path} is not UTF-8") from None
    return parse_text(text)


def emit_problem(pf: ProblemFile) -> str:
    out: Dict[str, object] = {}
    if pf.name is not None:
        out["name"] = pf.name
    out["lattice_rank"] = pf.lattice_rank
    out["rays"] = pf.rays
    out["max_cones"] = pf.max_cones
    out["bundles"] = pf.bundles
    if pf.h2_basis is not None:
        out["h2_basis"] = pf.h2_basis
    if pf.ample_weights is not None:
        out["ample_weights"] = [str(w) for w in pf.ample_weights]
    out["truncation_order"] = pf.truncation_order
    lines = []
    for k, v in out.items():
        if isinstance(v, list) and v and isinstance(v[0], list):
            rows = ",\n".join("    " + json.dumps(r) for r in v)
            lines.append(f'  {json.dumps(k)}: [\n{rows}\n  ]')
        else:
            lines.append(f"  {json.dumps(k)}: {json.dumps(v)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def build_model(pf: ProblemFile) -> ToricModel:
    try:
        fan = Fan.make(pf.lattice_rank, pf.rays, pf.max_cones)
        bundles = BundleData(tuple(tuple(b) for b in pf.bundles))
    except (TypeError, ValueError) as e:
        raise FanError(str(e)) from None
    return ToricModel.build(fan, bundles, pf.h2_basis, pf.ample_weights)


# ---------------------------------------------------------------------------
# report


@dataclass
class Report:
    command: str
    problem: Optional[str]
    sections: Dict[str, Dict[str, object]] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    undetermined: List[str] = field(default_factory=list)

    def fail(self, name: str) -> None:
        self.failures.append(name)

    @property
    def exit_code(self) -> int:
        if self.failures:
            return EXIT_FAIL
        if self.undetermined:
            return EXIT_UNDETERMINED
        return EXIT_OK

    def as_dict(self) -> Dict[str, object]:
        return {"schema_version": SCHEMA_VERSION, "command": self.command, "problem": self.problem,
                "status": {EXIT_OK: "pass", EXIT_FAIL: "fail", EXIT_UNDETERMINED: "undetermined"}[self.exit_code],
                "failures": self.failures, "undetermined": self.undetermined,
                "sections": self.sections}


def _s(x) -> object:
    """JSON-safe exact value."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_s(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _s(v) for k, v in x.items()}
    return x


def _classes(model: ToricModel) -> List[List[int]]:
    return [list(c) for c in model.gens.classes]


def stage_validate(model: ToricModel, rep: Report) -> None:
    margins = concavity_margins(model.delta, model.phi.weights)
    rep.sections["validate"] = {
        "fan": "valid",
        "delta_rays": [list(v) for v in model.delta.rays],
        "delta_max_cones": [sorted(c) for c in sorted(model.delta.max_cones, key=sorted)],
        "support_function": _s(list(model.phi.weights)),
        "min_concavity_margin": _s(min(margins) if margins else None),
        "bundles_nef": model.bundles_nef(),
        "bundles_ample": model.bundles_ample(),
        "anticanonical_minus_bundles_nef": model.anticanonical_twist_nef(),
    }
    if margins and min(margins) <= 0:
        rep.fail("support-function-strictly-concave")


def stage_primitive(model: ToricModel, rep: Report) -> None:
    rep.sections["primitive"] = {
        "collections": [list(c) for c in model.gens.collections],
        "classes": _classes(model),
        "h2_basis": [list(b) for b in model.basis.basis],
        "dual_classes_nef": list(model.basis.dual_nef or ()),
        "q_names": model.qnames(),
    }


def stage_batyrev(model: ToricModel, rep: Report, seed: int) -> None:
    ranks = rank_triple(model)
    ideals = build_ideals(model)
    brank = batyrev_rank_generic(ideals)
    init = initial_ideal_check(ideals)
    suites = [negation_suite(model, seed), unsupported_suite(model, seed),
              leading_term_suite(ideals, seed)]
    sec = {
        "cohomology_dim": ranks.cohomology,
        "max_cones": ranks.max_cones,
        "det_volume": ranks.det_sum,
        "hull_volume": ranks.hull_volume,
        "batyrev_rank": brank if isinstance(brank, int) else "infinite",
        "qsr": [p.to_str() for p in ideals.qsr],
        "initial_ideal": init.leading,
        "initial_ideal_ok": init.ok,
        "property_suites": [{"name": s.name, "seed": s.seed, "trials": s.trials,
                             "failures": [list(d) for d in s.failures]} for s in suites],
    }
    rep.sections["batyrev"] = sec
    if not ranks.agree:
        rep.fail("rank-triple-agreement")
    if brank != ranks.cohomology:
        rep.fail("batyrev-rank-equals-cohomology")
    if not init.ok:
        rep.fail("initial-ideal")
        sec["initial_ideal_messages"] = init.messages
    for s in suites:
        if s.trials and s.failures:
            rep.fail(s.name)


def stage_residual(model: ToricModel, rep: Report) -> None:
    if model.k == 0 or not model.bundles_ample():
        rep.sections["residual"] = {"skipped": "needs at least one bundle, all ample"}
        return
    rr = residual_rank(build_ideals(model))
    rep.sections["residual"] = {
        "residual_rank": rr.colon_rank if isinstance(rr.colon_rank, int) else "infinite",
        "cohomology_dim": rr.cohomology_dim,
        "ker_ctop": rr.ker_ctop,
        "dim_quotient_by_xtop": rr.quotient_by_xtop if isinstance(rr.quotient_by_xtop, int) else "infinite",
        "discriminant": rr.discriminant,
    }
    if not rr.consistent:
        rep.fail("residual-rank-equals-cohomology-minus-kernel")


def stage_gkz(model: ToricModel, rep: Report, system: gkz.BoxSystem) -> None:
    qn = model.qnames()
    sring = gkz.symbol_ring(model.r, qn)
    qw = gkz.q_weights(model)
    boxes = []
    homogeneous = True
    for c, box in zip(system.classes, system.boxes):
        w = gkz.op_weights(box, qw)
        homogeneous &= len(w) <= 1
        boxes.append({"class": list(c), "factored": gkz.render_box(model, c),
                      "expanded": gkz.fmt_op(box, qn), "symbol": gkz.symbol(box, sring).to_str(),
                      "weight": sorted(w)[0] if w else None})
    bridge = gkz.bridge_check(system)
    rep.sections["gkz"] = {
        "ctop_hat": gkz.fmt_op(system.ctop, qn),
        "euler": gkz.fmt_op(system.euler, qn),
        "boxes": boxes,
        "bridge_q_sign_twist": list(bridge.sign_twist),
        "bridge_boxes_to_relations": bridge.boxes_to_relations,
    }
    if not homogeneous:
        rep.fail("box-weight-homogeneity")
    if not all(bridge.boxes_to_relations):
        rep.fail("bridge-box-to-relation")


def stage_colon(model: ToricModel, rep: Report, system: gkz.BoxSystem, level: int) -> None:
    qn = model.qnames()
    if model.k and not model.bundles_ample():
        rep.sections["colon"] = {"skipped": "split form of the boxes needs ample bundles"}
        return
    try:
        cands = gkz.candidate_colon_generators(system, q_support_level=level)
    except gkz.Undetermined as e:
        rep.sections["colon"] = {"undetermined": str(e), "q_support_level": level}
        rep.undetermined.append("colon-membership")
        return
    out = []
    for cand in cands:
        cert = cand.certificate
        entry = {"name": cand.name, "operator": gkz.fmt_op(cand.op, qn), "degree": cand.op.degree(),
                 "verified": bool(cert and cert.verified)}
        if cert:
            entry["cofactors"] = [gkz.fmt_op(b, qn) for b in cert.cofactors]
            consts = [b.terms.get(((0,) * model.r, 0, (0,) * model.r, 0)) for b in cert.cofactors]
            if len(cert.cofactors) == 1 and len(cert.cofactors[0].terms) == 1 and consts[0] is not None:
                entry["scalar"] = str(consts[0])
            entry["unknowns"] = cert.unknowns
        out.append(entry)
        if not entry["verified"]:
            rep.fail(f"colon-certificate:{cand.name}")
    bridge = gkz.bridge_check(system, [c.certificate for c in cands if c.certificate])
    rep.sections["colon"] = {
        "label": "CONJECTURAL-COMPLETE",
        "q_support_level": level,
        "candidates": out,
        "bridge_certificates_in_batyrev_ideal": bridge.certificates_in_ideal,
    }
    if not all(bridge.certificates_in_ideal):
        rep.fail("bridge-certificate-in-ideal")


def stage_ifunction(model: ToricModel, rep: Report, order: int) -> None:
    from .batyrev import cohomology_ring

    coh = cohomology_ring(model)
    qn = model.qnames()
    ne = mirror.ne_classes(model, order) if model.r else []
    ann_fail = [[list(d), list(c)] for d in ne for c in model.gens.classes
                if not mirror.check_annihilation(model, d, c, coh)]
    w_fail = [list(d) for d in ne
              if not mirror.a_coefficient(model, d, coh).weights() <= {mirror.a_weight(model, d)}]
    sec: Dict[str, object] = {"order": order, "ne_classes": len(ne),
                              "annihilation_failures": ann_fail, "weight_failures": w_fail}
    if ann_fail:
        rep.fail("box-annihilates-I-function")
    if w_fail:
        rep.fail("A-coefficient-weight-homogeneity")
    if model.r:
        it = mirror.i_truncate(model, order, coh)
        ms = mirror.extract_fg(model, it)
        sec["F"] = mirror.fmt_series(ms.F, qn)
        sec["g0"] = mirror.fmt_series(ms.g0, qn)
        sec["g"] = [mirror.fmt_series(s, qn) for s in ms.g]
        sec["layers_clean"] = ms.clean
        if ms.clean:
            mm = mirror.mirror_map(ms, model.r, order)
            sec["mirror_map_convention"] = "q'_a = q_a exp(g_a/F), t0 = g0/F; no 2*pi*i factor"
            sec["t0"] = mirror.fmt_series(mm.t0, qn)
            sec["q_prime"] = [mirror.fmt_series(s, qn) for s in mm.q_prime]
            sec["mirror_map_leading_ok"] = mm.leading_ok(model.r)
            if not sec["mirror_map_leading_ok"]:
                rep.fail("mirror-map-leading-term")
    rep.sections["ifunction"] = sec


def run(pf: ProblemFile, command: str, order: Optional[int] = None, q_support_level: int = 2,
        seed: int = 0) -> Report:
    if command not in COMMANDS:
        raise ProblemError(f"unknown command {command!r}")
    rep = Report(command, pf.name)
    try:
        model = build_model(pf)
    except FanError as e:
        rep.sections["validate"] = {"fan": "invalid", "problems": str(e).split("; ")}
        rep.fail("fan-validation")
        return rep
    stage_validate(model, rep)
    want = set(COMMANDS[1:-1]) if command == "all" else {command}
    if "primitive" in want or command == "all":
        stage_primitive(model, rep)
    if "batyrev" in want:
        stage_batyrev(model, rep, seed)
    if "residual" in want:
        stage_residual(model, rep)
    if want & {"gkz", "colon"}:
        system = gkz.box_system(model)
        if "gkz" in want:
            stage_gkz(model, rep, system)
        if "colon" in want:
            stage_colon(model, rep, system, q_support_level)
    if "ifunction" in want:
        stage_ifunction(model, rep, pf.truncation_order if order is None else order)
    return rep


def _human(obj, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v) and \
        all(not isinstance(x, list) or all(not isinstance(y, (list, dict)) for y in x) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def emit(rep: Report, fmt: str = "human") -> str:
    d = rep.as_dict()
    if fmt == "machine":
        return json.dumps(d, indent=1, sort_keys=True, ensure_ascii=False) + "\n"
    head = [f"toric-qdm {rep.command}" + (f" [{rep.problem}]" if rep.problem else ""),
            f"status: {d['status']}"]
    if rep.failures:
        head.append("failed: " + ", ".join(rep.failures))
    if rep.undetermined:
        head.append("undetermined: " + ", ".join(rep.undetermined))
    return "\n".join(head + _human(rep.sections)) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="toric-qdm",
                                 description="Quantum D-modules of toric vector bundles: exact checks.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file")
    ap.add_argument("--order", type=int, default=None, help="I-function truncation (default: from file, else 3)")
    ap.add_argument("--q-support-level", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("human", "machine"), default="human")
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.order is not None and args.order < 0:
        print("error: --order must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        pf = parse(args.file)
    except ProblemError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    rep = run(pf, args.command, args.order, args.q_support_level, args.seed)
    sys.stdout.write(emit(rep, args.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
