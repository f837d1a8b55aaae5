"""Batch front end: one JSON job in, aligned text tables and one JSON report out.

Job document::

    {
      "group": "symmetric(3)",
      "ring": "gf(7,1)",
      "action": "trivial" | "frobenius(1)" | {"frobenius": 1} | {"explicit": {"<g>": [table]}},
      "task": "verify-mackey",
      "instance": "k0",            # verify-mackey only
      "J": ["(1,2)"], "K": [], "H": ["(1,2,3)", "(1,2)"],   # subgroup generators
      "options": {"n": 3}
    }

Tasks can also be written call-style, e.g. ``"task": "verify-mackey(units)"``.
Exit codes: 0 all checks pass, 1 a check failed, 2 parse/validation error,
3 unsupported instance.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import Any

import numpy as np

from . import burnside as bs
from . import mackey as mk
from .algebra import AlgebraError
from .groups import (
    GroupError,
    Subgroup,
    build_group,
    double_coset_reps,
    intersect,
    upper_conjugate,
)
from .modules import k0_class, mackey_decomposition_witness, regular_module
from .rings import RingError, build_ring
from .twisted import (
    GRing,
    NonInvertibleOrderError,
    TwistedRingError,
    UnsupportedBaseError,
    UnsupportedInstanceError,
    auslander_map,
)

TASKS = ("verify-mackey", "k0", "burnside", "double-cosets", "auslander", "decompose")
INSTANCES = ("burnside", "k0", "units", "endomorphism", "dress-kuku", "constant", "quillen")
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class JobError(ValueError):
    """Parse or validation error, with a ``line:column`` location when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        super().__init__(message)
        self.line, self.column = line, column

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}: " if self.line is not None else ""
        return where + super().__str__()


class Unsupported(Exception):
    pass


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    i = text.find(f'"{key}"')
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


# -- job parsing ------------------------------------------------------------------------------


class Job:
    def __init__(self, text: str, max_order: int, allow_external: bool) -> None:
        self.text = text
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise JobError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        if not isinstance(doc, dict):
            raise JobError("job must be a JSON object", 1, 1)
        self.doc = doc
        self.max_order = max_order
        self.allow_external = allow_external
        task = doc.get("task")
        if not isinstance(task, str):
            raise self.error("task", "missing or non-string 'task'")
        m = re.fullmatch(r"\s*([a-z0-9-]+)\s*(?:\((.*)\))?\s*", task)
        if not m or m.group(1) not in TASKS:
            raise self.error("task", f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
        self.task = m.group(1)
        self.instance = doc.get("instance") or (m.group(2) or "").strip() or None
        if self.task == "verify-mackey" and self.instance not in INSTANCES:
            raise self.error("instance" if "instance" in doc else "task", f"unknown Mackey instance {self.instance!r}; expected one of {', '.join(INSTANCES)}")
        self.options = doc.get("options", {})
        if not isinstance(self.options, dict):
            raise self.error("options", "options must be an object")
        try:
            self.group = build_group(doc.get("group", ""))
        except GroupError as exc:
            raise self.error("group", str(exc)) from exc
        if self.group.order > max_order:
            raise self.error("group", f"|G| = {self.group.order} exceeds the bound {max_order}")
        self._gring: GRing | None = None

    def error(self, key: str, message: str) -> JobError:
        return JobError(message, *_locate(self.text, key))

    def subgroup(self, key: str, default: Subgroup | None = None) -> Subgroup:
        if key not in self.doc:
            if default is None:
                raise self.error("task", f"task needs subgroup {key!r}")
            return default
        spec = self.doc[key]
        try:
            if isinstance(spec, dict) and "elements" in spec:
                return self.group.subgroup([self.group.element(e) for e in spec["elements"]])
            if isinstance(spec, list):
                return self.group.generate(spec)
        except GroupError as exc:
            raise self.error(key, str(exc)) from exc
        raise self.error(key, "subgroups are lists of generators or {\"elements\": [...]}")

    @property
    def gring(self) -> GRing:
        if self._gring is None:
            self._gring = self._build_gring()
        return self._gring

    def _build_gring(self) -> GRing:
        if "ring" not in self.doc:
            raise self.error("task", "task needs a 'ring'")
        try:
            ring = build_ring(self.doc["ring"])
        except (RingError, ValueError) as exc:
            raise self.error("ring", str(exc)) from exc
        action = self.doc.get("action", "trivial")
        G = self.group
        try:
            if action == "trivial":
                return GRing.trivial(ring, G)
            power = None
            if isinstance(action, str):
                m = re.fullmatch(r"\s*frobenius\s*\(\s*(-?\d+)\s*\)\s*", action)
                if m:
                    power = int(m.group(1))
            elif isinstance(action, dict) and "frobenius" in action:
                power = int(action["frobenius"])
            if power is not None:
                from .fields import FiniteField

                if not isinstance(ring, FiniteField):
                    raise self.error("action", "a Frobenius action needs a finite field ring")
                return GRing.frobenius(ring, G, power)
            if isinstance(action, dict) and "explicit" in action:
                tables = {G.element(_index_or_label(g)): t for g, t in action["explicit"].items()}
                return GRing.from_generators(ring, G, tables)
        except NonInvertibleOrderError as exc:
            raise self.error("ring", f"hypothesis violated: {exc}") from exc
        except (TwistedRingError, GroupError, RingError) as exc:
            raise self.error("action", str(exc)) from exc
        raise self.error("action", f"cannot interpret action {action!r}")


def _index_or_label(g: str):
    return int(g) if re.fullmatch(r"\d+", g) else g


# -- JSON helpers -----------------------------------------------------------------------------


def _sub(H: Subgroup) -> str:
    return H.label()


def _jsonable(x: Any):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _mackey_json(M: mk.MackeyData) -> dict:
    G = M.group
    lab = {H.elements: _sub(H) for H in M.subgroups}
    values = {lab[H.elements]: {"kind": v.kind, "size": v.size, "label": v.label} for H in M.subgroups for v in [M.value(H)]}
    maps = []
    for name, table in (("res", M.res), ("tr", M.tr)):
        for (h, k), f in table.items():
            maps.append({"map": name, "H": lab[h], "K": lab[k], "data": f.to_json()})
    for (g, h), f in M.conj.items():
        maps.append({"map": "conj", "g": G.element_labels[g], "H": lab[h], "data": f.to_json()})
    return {"label": M.label, "flags": list(M.flags), "values": values, "maps": maps}


def _axioms_json(report: mk.AxiomReport) -> dict:
    return report.to_json()


# -- tasks ------------------------------------------------------------------------------------


def task_verify_mackey(job: Job) -> tuple[dict, dict]:
    G, inst = job.group, job.instance
    extra: dict = {}
    if inst == "burnside":
        M = mk.burnside_mackey(G, job.max_order)
    elif inst == "constant":
        M = mk.constant_functor(G)
    elif inst == "k0":
        M = mk.k0_twisted_mackey(job.gring, job.max_order)
        extra["idempotents"] = {_sub(H): M.extras["idempotents"][H.elements] for H in M.subgroups}
    elif inst == "units":
        M = mk.units_mackey(job.gring, job.max_order)
    elif inst == "endomorphism":
        E = mk.endomorphism_mackey(job.gring, job.max_order)
        M = E.mackey
        extra["squares"] = {"checked": E.squares, "failures": E.square_failures}
    elif inst == "dress-kuku":
        C = mk.dress_kuku_compare(job.gring, job.max_order)
        M = mk.k0_twisted_mackey(job.gring, job.max_order)
        extra["comparison"] = {
            "values_equal": C.values_equal,
            "structure_constants_equal": C.constants_equal,
            "maps_compared": C.compared,
            "mismatches": C.mismatches,
        }
    elif inst == "quillen":
        if not job.allow_external:
            raise Unsupported("the Quillen instance uses external data; rerun with --allow-external-data")
        ring = job.gring.ring
        M = mk.quillen_kn_instance(ring.p, ring.k, int(job.options.get("n", 1)), True)
    else:  # pragma: no cover - validated at parse time
        raise JobError(f"unknown instance {inst}")
    report = mk.check_axioms(M)
    results = {"instance": inst, "mackey": _mackey_json(M), "axioms": _axioms_json(report)} | extra
    verdicts = {f"axiom {n}": r.passed for n, r in report.results.items()}
    verdicts["MF6 transversal independence"] = report.transversals_agree
    if "squares" in extra:
        verdicts["squares commute"] = not extra["squares"]["failures"]
    if "comparison" in extra:
        c = extra["comparison"]
        verdicts["untwisted comparison"] = c["values_equal"] and not c["mismatches"]
    if inst == "constant":
        # the control passes when exactly MF6 is flagged
        verdicts = {"negative control flagged at MF6 only": report.failing() == ["MF6"]}
    return results, verdicts


def task_k0(job: Job) -> tuple[dict, dict]:
    R = job.gring
    H = job.subgroup("H", job.group.whole)
    A = R.algebra(H).algebra
    blocks = [
        {
            "idempotent": b.idempotent.tolist(),
            "block_dim": b.block_dim,
            "center_dim": b.center_dim,
            "matrix_size": b.matrix_size,
            "simple_dim": b.simple_dim,
        }
        for b in A.blocks
    ]
    reg = k0_class(regular_module(A))
    results = {"H": _sub(H), "gate": R.gate, "dim": A.dim, "rank": len(blocks), "blocks": blocks, "regular_class": list(reg.multiplicities)}
    total = sum(b["block_dim"] for b in blocks)
    return results, {"blocks sum to the algebra": total == A.dim}


def task_burnside(job: Job) -> tuple[dict, dict]:
    G = job.group
    W = G.whole
    reps = bs.subgroup_class_reps(W)
    names = [_sub(S) for S in reps]
    sets = [bs.cosets(S) for S in reps]
    marks = [bs.marks_vector(X).tolist() for X in sets]
    table = []
    for X in sets:
        row = []
        for Y in sets:
            dec = bs.orbit_decompose(bs.product(X, Y))
            counts = [0] * len(reps)
            for stab, _ in dec:
                counts[reps.index(bs.canonical_subgroup(stab, W))] += 1
            row.append(counts)
        table.append(row)
    ranks, full, dc = [], [], []
    ok = True
    for a, X in enumerate(sets):
        r1, r2, r3 = [], [], []
        for b, Y in enumerate(sets):
            r1.append(len(bs.burnside_hom_basis(X, Y)))
            r2.append(len(bs.transitive_span_basis(X, Y)))
            r3.append(len(double_coset_reps(reps[a], reps[b], W)))
            ok &= r1[-1] == r3[-1]
        ranks.append(r1)
        full.append(r2)
        dc.append(r3)
    results = {
        "classes": names,
        "marks": marks,
        "product": table,
        "hom_rank_orbit_spans": ranks,
        "hom_rank_transitive_spans": full,
        "double_cosets": dc,
    }
    return results, {"orbit-span rank equals double coset count": ok}


def task_double_cosets(job: Job) -> tuple[dict, dict]:
    H = job.subgroup("H", job.group.whole)
    J, K = job.subgroup("J"), job.subgroup("K")
    for name, S in (("J", J), ("K", K)):
        if not S.issubset(H):
            raise job.error(name, f"{name} = {_sub(S)} is not contained in H = {_sub(H)}")
    G = job.group
    reps = double_coset_reps(J, K, H)
    terms = [K.order // intersect(upper_conjugate(J, x), K).order for x, _ in reps]
    results = {
        "J": _sub(J),
        "K": _sub(K),
        "H": _sub(H),
        "representatives": [G.element_labels[x] for x, _ in reps],
        "sizes": [s for _, s in reps],
        "index_H_J": H.order // J.order,
        "terms": terms,
    }
    return results, {"index equals sum of terms": sum(terms) == H.order // J.order, "sizes sum to |H|": sum(s for _, s in reps) == H.order}


def task_auslander(job: Job) -> tuple[dict, dict]:
    R = job.gring
    H = job.subgroup("H", job.group.whole)
    a = auslander_map(R, H)
    results = {
        "H": _sub(H),
        "fixed_dim": a.fixed_dim,
        "rank_over_fixed": a.rank_over_fixed,
        "domain_dim": a.domain_dim,
        "codomain_dim": a.codomain_dim,
        "image_rank": a.image_rank,
        "multiplicative": a.multiplicative,
        "verdict": a.verdict,
        "images": a.images.tolist(),
    }
    return results, {"Auslander map is an isomorphism": a.is_isomorphism, "multiplicative": a.multiplicative}


def task_decompose(job: Job) -> tuple[dict, dict]:
    R = job.gring
    G = job.group
    H = job.subgroup("H", G.whole)
    J, K = job.subgroup("J"), job.subgroup("K")
    for name, S in (("J", J), ("K", K)):
        if not S.issubset(H):
            raise job.error(name, f"{name} = {_sub(S)} is not contained in H = {_sub(H)}")
    rep = mackey_decomposition_witness(R, J, K, H)
    results = {
        "J": _sub(J),
        "K": _sub(K),
        "H": _sub(H),
        "representatives": [G.element_labels[x] for x in rep.reps],
        "betas": [[G.element_labels[b] for b in bs_] for bs_ in rep.betas],
        "dim_p": rep.dim_p,
        "dim_q": rep.dim_q,
        "k0_p": list(rep.k0_p),
        "k0_q": list(rep.k0_q),
        "elementwise_pairs": rep.elementwise_pairs,
        "failures": rep.failures,
        "epsilon": rep.epsilon.tolist() if rep.epsilon is not None else None,
    }
    verdicts = {
        "left module isomorphism": rep.left_iso and rep.invertible,
        "right multiplication": rep.right_matrix_check and rep.elementwise_failure is None,
        "transversal": rep.q_basis_free,
        "K0 classes agree": rep.k0_agree,
    }
    return results, verdicts


HANDLERS = {
    "verify-mackey": task_verify_mackey,
    "k0": task_k0,
    "burnside": task_burnside,
    "double-cosets": task_double_cosets,
    "auslander": task_auslander,
    "decompose": task_decompose,
}


# -- rendering -------------------------------------------------------------------------------


def _table(rows: list[list[str]], header: list[str] | None = None) -> list[str]:
    rows = ([header] if header else []) + rows
    if not rows:
        return []
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    if header:
        out.insert(1, "  ".join("-" * w for w in widths))
    return out


def render_text(doc: dict) -> str:
    """Aligned text built only from the JSON report."""
    res = doc["results"]
    lines = [f"task: {doc['spec_echo'].get('task')}  group: {doc['spec_echo'].get('group')}", ""]
    if "mackey" in res:
        M = res["mackey"]
        lines += [f"Mackey functor {M['label']}" + (f" [{', '.join(M['flags'])}]" if M["flags"] else "")]
        lines += _table([[h, v["label"], v["kind"], str(v["size"])] for h, v in M["values"].items()], ["subgroup", "value", "kind", "rank/order"])
        lines += ["", "axioms"]
        ax = res["axioms"]
        lines += _table(
            [[n, "pass" if r["passed"] else "FAIL", str(r["instances"]), "; ".join(r["failures"][:2])] for n, r in ax.items() if isinstance(r, dict)],
            ["axiom", "verdict", "instances", "witness"],
        )
    elif "blocks" in res:
        lines += [f"K0 of the twisted algebra over {res['H']} (dim {res['dim']}, gate {res['gate']})"]
        lines += _table(
            [[str(i), str(b["block_dim"]), str(b["center_dim"]), str(b["matrix_size"]), str(m)] for i, (b, m) in enumerate(zip(res["blocks"], res["regular_class"]))],
            ["block", "dim", "center", "matrix size", "regular mult."],
        )
    elif "marks" in res:
        names = res["classes"]
        lines += ["table of marks"] + _table([[n] + [str(v) for v in row] for n, row in zip(names, res["marks"])], ["G/H"] + names)
        lines += ["", "hom ranks (orbit spans / transitive spans / double cosets)"]
        lines += _table(
            [[n] + [f"{a}/{b}/{c}" for a, b, c in zip(r1, r2, r3)] for n, r1, r2, r3 in zip(names, res["hom_rank_orbit_spans"], res["hom_rank_transitive_spans"], res["double_cosets"])],
            ["from \\ to"] + names,
        )
    elif "sizes" in res:
        lines += [f"J = {res['J']}, K = {res['K']}, H = {res['H']}, |H:J| = {res['index_H_J']}"]
        lines += _table([[r, str(s), str(t)] for r, s, t in zip(res["representatives"], res["sizes"], res["terms"])], ["rep", "|JxK|", "|K:J^x∩K|"])
    elif "verdict" in res:
        lines += _table(
            [[k, str(res[k])] for k in ("H", "fixed_dim", "rank_over_fixed", "domain_dim", "codomain_dim", "image_rank", "multiplicative", "verdict")]
        )
    elif "epsilon" in res:
        lines += [f"J = {res['J']}, K = {res['K']}, H = {res['H']}; dim P = {res['dim_p']}, dim Q = {res['dim_q']}"]
        lines += _table([[r, " ".join(b)] for r, b in zip(res["representatives"], res["betas"])], ["x", "betas"])
        lines += [f"K0(P) = {res['k0_p']}  K0(Q) = {res['k0_q']}  pure pairs checked: {res['elementwise_pairs']}"]
    lines += ["", "verdicts"]
    lines += _table([[k, "pass" if v else "FAIL"] for k, v in doc["verdicts"].items()])
    return "\n".join(lines) + "\n"


# -- entry point ------------------------------------------------------------------------------


def run_job(text: str, max_order: int = 48, allow_external: bool = False, timings: bool = False) -> tuple[int, dict | None, str]:
    """Run one job; returns ``(exit code, report or None, message)``."""
    stages: list[tuple[str, float]] = []
    t0 = time.perf_counter()
    try:
        job = Job(text, max_order, allow_external)
        stages.append(("parse", time.perf_counter() - t0))
        t1 = time.perf_counter()
        results, verdicts = HANDLERS[job.task](job)
        stages.append(("compute", time.perf_counter() - t1))
    except JobError as exc:
        return EXIT_INPUT, None, f"error: {exc}"
    except (Unsupported, UnsupportedInstanceError, UnsupportedBaseError, mk.ExternalDataError) as exc:
        return EXIT_UNSUPPORTED, None, f"unsupported: {exc}"
    except (GroupError, RingError) as exc:
        return EXIT_INPUT, None, f"error: {exc}"
    except (mk.OracleMismatchError, AlgebraError, mk.MackeyError) as exc:
        return EXIT_FAIL, None, f"check failed: {exc}"
    if timings:
        timing = {"recorded": True, "stages": {name: round(t, 6) for name, t in stages}}
    else:
        timing = {"recorded": False, "stages": [name for name, _ in stages]}
    doc = {"spec_echo": job.doc, "results": _jsonable(results), "verdicts": verdicts, "timings": timing}
    code = EXIT_OK if all(verdicts.values()) else EXIT_FAIL
    return code, doc, ""


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="twistmackey", description="Run a twisted group ring / Mackey functor job.")
    ap.add_argument("job", help="path to the JSON job file")
    ap.add_argument("--json-out", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    ap.add_argument("--max-group-order", type=int, default=48, metavar="N")
    ap.add_argument("--allow-external-data", action="store_true", help="enable the higher K-group instance")
    ap.add_argument("--timings", action="store_true", help="record wall-clock stage times (breaks byte-identical output)")
    args = ap.parse_args(argv)
    try:
        with open(args.job, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.job}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    code, doc, msg = run_job(text, args.max_group_order, args.allow_external_data, args.timings)
    if doc is None:
        print(msg, file=sys.stderr)
        return code
    payload = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if args.json_out == "-":
        sys.stdout.write(payload)
    else:
        if args.json_out:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        sys.stdout.write(render_text(doc))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
