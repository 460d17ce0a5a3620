"""Batch command line front-end.

Reports go to stdout (or ``--output``) as JSON; ``--format csv`` flattens the
row-shaped reports.  Exit codes: 0 completed, 2 incomplete (subgroup cap),
3 internal invariant violated, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .conjugacy import class_label, enumerate_class, representatives
from .core import ElementSyntaxError, GroupSpec, format_element, member, parse_element, sign_cycle_type, sigma_type_string
from .rack import DEFAULT_SUBGROUP_CAP, type_D_certificate

EXIT_OK, EXIT_INCOMPLETE, EXIT_INVARIANT, EXIT_USAGE = 0, 2, 3, 64

CONFIG_KEYS = {"subgroup_cap", "jobs", "max_rack_size", "max_tensor_rows", "format"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k, "") for k in columns})
    return buf.getvalue()


# --- csv flattening ------------------------------------------------------------------

SWEEP_COLUMNS = ["label", "sigma_type", "representative", "class_size", "status", "r", "s",
                 "subgroup_order", "check_sq", "check_nonconjugate", "check_decomposition",
                 "predicate", "consistent_with_list", "interpretation"]

CLASSES_COLUMNS = ["label", "split", "representative", "size"]

AUDIT_COLUMNS = ["prop", "family", "degree", "a", "b", "x", "y", "conjugate", "sq_differs",
                 "decomposition_exact", "decomposition_cyclic", "class_status"]


def flatten_sweep(report: dict) -> list[dict]:
    out = []
    for r in report["rows"]:
        c = r["certificate"] or {}
        checks = c.get("checks", {})
        out.append({
            "label": r["labelText"], "sigma_type": r["sigmaType"],
            "representative": r["representative"], "class_size": r["classSize"],
            "status": r["status"], "r": c.get("r", ""), "s": c.get("s", ""),
            "subgroup_order": c.get("subgroupOrder", ""),
            "check_sq": checks.get("sq", ""), "check_nonconjugate": checks.get("nonconjugate", ""),
            "check_decomposition": checks.get("decomposition", ""),
            "predicate": r["predicate"], "consistent_with_list": r["consistentWithList"],
            "interpretation": r["interpretation"],
        })
    return out


def flatten_audit(report: dict) -> list[dict]:
    out = []
    for section in report["audits"]:
        for r in section["rows"]:
            out.append({
                "prop": r["prop"], "family": r["group"]["family"], "degree": r["group"]["degree"],
                "a": r["a"], "b": r["b"], "x": r["x"], "y": r["y"],
                "conjugate": r["verdicts"]["conjugate"], "sq_differs": r["verdicts"]["sqDiffers"],
                "decomposition_exact": r["decomposition"]["exact"]["passed"],
                "decomposition_cyclic": r["decomposition"]["cyclic"]["passed"],
                "class_status": r.get("classSearch", {}).get("status", ""),
            })
    return out


# --- verbs ----------------------------------------------------------------------------------

def _spec(args) -> GroupSpec:
    try:
        return GroupSpec(args.family, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _element(args, spec: GroupSpec):
    try:
        g = parse_element(args.element)
    except ElementSyntaxError as exc:
        raise UsageError(f"bad element ({exc.kind}): {exc}") from None
    if g.degree != spec.degree or not member(spec, g):
        raise UsageError(f"{args.element} is not an element of {spec}")
    return g


def cmd_classes(args, cfg):
    spec = _spec(args)
    rows = []
    for lab, g in representatives(spec):
        rows.append({"label": lab.to_json(), "labelText": str(lab),
                     "representative": format_element(g),
                     "size": enumerate_class(spec, g).size})
    if cfg["format"] == "csv":
        return _csv([{"label": str(r["labelText"]), "split": r["label"]["split"],
                      "representative": r["representative"], "size": r["size"]} for r in rows],
                    CLASSES_COLUMNS), EXIT_OK
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows), EXIT_OK


def cmd_class_info(args, cfg):
    from .nichols import MAX_CENTRALIZER_DEGREE, centralizer
    from .verify import exception_predicate

    spec = _spec(args)
    g = _element(args, spec)
    cls = enumerate_class(spec, g)
    info = {
        "kind": "class-info",
        "group": {"family": spec.family, "degree": spec.degree, "order": spec.order},
        "element": format_element(g),
        "label": class_label(spec, g).to_json(),
        "signedCycleType": str(sign_cycle_type(g)),
        "sigmaType": sigma_type_string(g.perm.cycle_type()),
        "representative": format_element(cls.representative),
        "classSize": cls.size,
        "centralizerOrder": len(centralizer(spec, g)) if spec.degree <= MAX_CENTRALIZER_DEGREE else None,
        "predicate": None if g.perm.is_identity() else exception_predicate(g),
    }
    return _dump(info), EXIT_OK


def cmd_typed(args, cfg):
    spec = _spec(args)
    g = _element(args, spec)
    cls = enumerate_class(spec, g)
    res = type_D_certificate(cls, cap=cfg["subgroup_cap"], jobs=cfg["jobs"])
    out = {
        "kind": "typed",
        "group": {"family": spec.family, "degree": spec.degree, "order": spec.order},
        "element": format_element(g),
        "representative": format_element(cls.representative),
        "classSize": cls.size,
        "status": res.status,
        "certificate": res.certificate.to_json() if res.certificate else None,
        "scanned": res.scanned,
        "sqCandidates": res.sq_candidates,
        "skipped": res.skipped,
    }
    code = EXIT_OK
    if res.status == "incomplete":
        code = EXIT_INCOMPLETE
    if res.certificate and not res.certificate.valid:
        code = EXIT_INVARIANT
    return _dump(out), code


AUDIT_PLAN = [("P3.3", 5), ("P3.4", 6), ("P3.5i", 6), ("P3.6", 6), ("P3.6", 7), ("P3.5ii", 8)]


def cmd_audit(args, cfg):
    from .verify import audit_proposition, total_parity_statement

    families = ["B", "D"] if args.family == "both" else [args.family]
    if args.prop == "all":
        plan = AUDIT_PLAN
    else:
        deg = args.degree or dict(AUDIT_PLAN).get(args.prop)
        plan = [(args.prop, deg)]
    audits = []
    for fam in families:
        for prop, deg in plan:
            try:
                spec = GroupSpec(fam, deg)
                audits.append(audit_proposition(prop, spec, sample=args.sample, seed=args.seed,
                                                 jobs=cfg["jobs"]))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    parity = [total_parity_statement(GroupSpec(fam, d)) for fam in families for d in (2, 3, 4)]
    report = {"kind": "audit", "tool": f"weylrack {__version__}", "audits": audits,
              "totalParityStatement": parity}
    bad = any(a["summary"]["revalidationFailures"] or a["summary"]["certificateFailures"] for a in audits)
    code = EXIT_INVARIANT if bad else EXIT_OK
    if cfg["format"] == "csv":
        return _csv(flatten_audit(report), AUDIT_COLUMNS), code
    return _dump(report), code


def cmd_sweep(args, cfg):
    from .verify import sweep_exit_code, theorem_sweep

    spec = _spec(args)
    try:
        report = theorem_sweep(spec, jobs=cfg["jobs"], cap=cfg["subgroup_cap"], timings=args.timings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = sweep_exit_code(report)
    if cfg["format"] == "csv":
        return _csv(flatten_sweep(report), SWEEP_COLUMNS), code
    return _dump(report), code


def cmd_nichols(args, cfg):
    from .nichols import (
        BraidedSpace,
        BudgetExceeded,
        centralizer_characters,
        check_braid_equation,
        graded_dims,
        yd_data,
        yd_rack,
        yd_space,
    )

    spec = _spec(args)
    g = _element(args, spec)
    try:
        if args.q is not None:
            data = yd_data(spec, g, chi={g: 1}, check=False)
            space = BraidedSpace.constant(yd_rack(data), args.q)
            source = {"kind": "constant", "q": args.q}
        else:
            chars = centralizer_characters(spec, g)
            if not 0 <= args.character < len(chars):
                raise UsageError(f"character index must be in 0..{len(chars) - 1}")
            data = yd_data(spec, g, chars[args.character], check=False)
            space = yd_space(data)
            source = {"kind": "yd-character", "index": args.character, "characters": len(chars)}
        braid_ok = check_braid_equation(space)
        rep = graded_dims(space, args.max_degree, max_rack=cfg["max_rack_size"],
                          max_rows=cfg["max_tensor_rows"])
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    out = {
        "kind": "nichols",
        "group": {"family": spec.family, "degree": spec.degree, "order": spec.order},
        "rack": {"points": [format_element(t) for t in data.points], "size": space.dimension},
        "cocycle": {"source": source, "table": space.cocycle.to_json()},
        "braidEquation": braid_ok,
        "graded": rep.to_json(),
    }
    code = EXIT_OK if braid_ok else EXIT_INVARIANT
    if rep.truncated and code == EXIT_OK:
        code = EXIT_INCOMPLETE
    return _dump(out), code


def cmd_selftest(args, cfg):
    from .selftest import run_selftest

    lines, ok = run_selftest()
    return "".join(line + "\n" for line in lines), EXIT_OK if ok else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    def globals_(sp, default):
        sp.add_argument("--config", default=default,
                        help="JSON file with defaults for subgroup_cap, jobs, "
                             "max_rack_size, max_tensor_rows, format")
        sp.add_argument("--output", "-o", default=default,
                        help="write the report here instead of stdout")

    p = _Parser(prog="weylrack", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"weylrack {__version__}")
    globals_(p, None)
    # accepted after the verb too; SUPPRESS keeps the top-level value when absent
    shared = _Parser(add_help=False)
    globals_(shared, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[shared], **k)

    def common(sp, element=False, fmt=False):
        sp.add_argument("--family", choices=["B", "D"], required=True)
        sp.add_argument("--degree", type=int, required=True)
        if element:
            sp.add_argument("--element", required=True, help="e.g. '00000:(1 2)(3 4)'")
        if fmt:
            sp.add_argument("--format", choices=["json", "csv"], default=None)

    common(sub.add_parser("classes", help="list conjugacy classes"), fmt=True)
    common(sub.add_parser("class-info", help="describe the class of an element"), element=True)
    sp = sub.add_parser("typed", help="search a type D certificate for a class")
    common(sp, element=True)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=None)

    sp = sub.add_parser("audit", help="audit the witness constructions")
    sp.add_argument("--prop", default="all", choices=["all", "P3.3", "P3.4", "P3.5i", "P3.5ii", "P3.6"])
    sp.add_argument("--family", choices=["B", "D", "both"], default="both")
    sp.add_argument("--degree", type=int, default=None)
    sp.add_argument("--sample", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--format", choices=["json", "csv"], default=None)

    sp = sub.add_parser("sweep", help="type D sweep over all classes")
    common(sp, fmt=True)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--timings", action="store_true", help="add per-class seconds (not byte-stable)")

    sp = sub.add_parser("nichols", help="graded Nichols dimensions of a class rack")
    common(sp, element=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--q", type=int, choices=[1, -1], default=None, help="constant cocycle")
    grp.add_argument("--character", type=int, default=0,
                     help="index into the +-1 characters of the centralizer (0 = trivial)")
    sp.add_argument("--max-degree", type=int, default=4)

    sub.add_parser("selftest", help="exhaustive invariant checks at degree <= 4")
    return p


def _config(args) -> dict:
    cfg = {"subgroup_cap": DEFAULT_SUBGROUP_CAP, "jobs": 1, "max_rack_size": 12,
           "max_tensor_rows": 3_000_000, "format": "json"}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        unknown = set(loaded) - CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, attr in (("subgroup_cap", "cap"), ("jobs", "jobs"), ("format", "format")):
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    return cfg


VERBS = {
    "classes": cmd_classes, "class-info": cmd_class_info, "typed": cmd_typed,
    "audit": cmd_audit, "sweep": cmd_sweep, "nichols": cmd_nichols, "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb is None:
            raise UsageError(parser.format_usage() + "weylrack: error: a verb is required")
        cfg = _config(args)
        text, code = VERBS[args.verb](args, cfg)
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip() + "\n")
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
