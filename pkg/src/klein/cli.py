"""``klein`` command line: every checker and simulator, JSON on stdout.

Each run prints one envelope::

    {"command", "inputs", "catalog_version", "verdict", "citations",
     "evidence_grade", "wall_time"}

``inputs`` echoes the normalized arguments, so ``argv_from_inputs`` rebuilds
a command line that reproduces the envelope (use ``--no-wall-time`` for a
byte-identical rerun).  Exit codes: 0 success, 2 input error, 3 numeric
failure, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from .errors import KleinError, KleinInputError, NumericFailure

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_USAGE = 0, 2, 3, 64
CERTIFIED, EVIDENCE = "CERTIFIED", "EVIDENCE"

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


# ---------------------------------------------------------------------------
# argument helpers


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise KleinInputError(f"{what} is not valid JSON: {exc}") from None


def _numbers(text: str, what: str) -> list:
    try:
        return [Fraction(x.strip()) for x in str(text).split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise KleinInputError(f"{what} must be comma-separated numbers, got {text!r}") from None


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _plain(obj):
    """JSON-ready copy with numpy scalars and tuples converted."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, Fraction):
        return _fstr(obj)
    return obj


def _group_name(text: str) -> str:
    from .groups import parse_group
    return parse_group(text).name


def _subgroup_text(text: str) -> str:
    return "".join(str(text).split())


# ---------------------------------------------------------------------------
# commands: each returns (inputs, verdict, citations, grade)


def cmd_cartan_project(a):
    from .cartan import nu
    G = _group_name(a.G)
    m = _json_arg(a.matrix, "--matrix")
    v = nu(G, m, check=not a.no_check)
    inputs = {"G": G, "matrix": _plain(np.asarray(m, dtype=float)), "no_check": bool(a.no_check)}
    return inputs, v.to_json(), ["Def nu"], EVIDENCE


def _spec(G, text, gens_json, word_length):
    from .catalog import parse_subgroup, sampled_subgroup
    if gens_json is not None:
        gens = _json_arg(gens_json, "generators")
        return sampled_subgroup(G, gens, word_length), {"generators": _plain(np.asarray(gens, dtype=float))}
    if text is None:
        raise KleinInputError("give either a catalog subgroup or generators")
    return parse_subgroup(text, G), {"subgroup": _subgroup_text(text)}


def cmd_check_proper(a):
    from .criteria import check_proper_pair
    G = _group_name(a.G)
    H, h_in = _spec(G, a.H, a.H_generators, a.max_len)
    L, l_in = _spec(G, a.L, a.L_generators, a.max_len)
    v = check_proper_pair(G, H, L, max_len=a.max_len)
    inputs = {"G": G, "H": h_in, "L": l_in, "max_len": a.max_len}
    return inputs, v.to_json(), v.citations, CERTIFIED if v.certified else EVIDENCE


def cmd_calabi_markus(a):
    from .criteria import calabi_markus
    G, H = _group_name(a.G), _group_name(a.H)
    v = calabi_markus(G, H)
    return {"G": G, "H": H}, v.to_json(), v.citations, CERTIFIED


def cmd_spaceform(a):
    from .criteria import spaceform_status
    v = spaceform_status(a.p, a.q)
    return {"p": a.p, "q": a.q}, v.to_json(), v.citations, CERTIFIED


def cmd_compact_form(a):
    from .criteria import compact_form_search
    G = _group_name(a.G)
    v = compact_form_search(G, a.H)
    cites = v.citations or ["Thm 15", "Thm 16"]
    return {"G": G, "H": _subgroup_text(a.H)}, v.to_json(), cites, CERTIFIED


def cmd_sl_table(a):
    from .criteria import sl_nonexistence
    hits = sl_nonexistence(a.n, a.m, a.embedding)
    verdict = {"theorems": [t.to_json() for t in hits], "applicable": [t.tag for t in hits]}
    cites = [t.tag for t in hits] or ["Conj 17"]
    return {"n": a.n, "m": a.m, "embedding": a.embedding}, verdict, cites, CERTIFIED


def cmd_orbit_sim(a):
    from . import dynamics as D
    act = D.get_action(a.action)
    p = _numbers(a.point, "--point")
    if len(p) != 2:
        raise KleinInputError("--point needs two coordinates")
    window = [float(x) for x in _numbers(a.window, "--window")]
    if len(window) != 4:
        raise KleinInputError("--window needs xmin,xmax,ymin,ymax")
    origin = None if a.origin_radius == "none" else float(a.origin_radius)
    acc = D.accumulation_scan(act, tuple(p), a.n_bound, tuple(window), origin)
    stab = D.stabilizer(act, tuple(p), a.n_bound)
    verdict = {"accumulation": acc.to_json(), "stabilizer": [list(g) for g in stab],
               "free_at_point": stab == [tuple([0] * act.rank)], "orbit_points": len(act.elements(a.n_bound))}
    inputs = {"action": act.kind, "point": [_fstr(x) for x in p], "n_bound": a.n_bound,
              "window": [repr(x) for x in window], "origin_radius": a.origin_radius}
    cites = ["Ex 9", "Def 10"]
    if a.q is not None:
        q = _numbers(a.q, "--q")
        eps = [float(x) for x in _numbers(a.epsilons, "--epsilons")]
        sep = D.separation_test(act, tuple(p), tuple(q), eps, a.sep_bound)
        verdict["separation"] = sep.to_json()
        inputs.update({"q": [_fstr(x) for x in q], "epsilons": [repr(e) for e in eps], "sep_bound": a.sep_bound})
        cites.append("Lemma 11")
    if a.svg:
        pts = [tuple(float(x) for x in p)]
        if a.q is not None:
            pts.append(tuple(float(x) for x in _numbers(a.q, "--q")))
        with open(a.svg, "w", encoding="utf-8") as fh:
            fh.write(D.orbit_svg(act, pts, a.n_bound, tuple(window)))
    return inputs, verdict, cites, EVIDENCE


def cmd_gamma_s(a):
    from . import dynamics as D
    act = D.get_action(a.action)
    spec = _json_arg(a.set, "--set")
    if not isinstance(spec, dict):
        raise KleinInputError("--set must be a JSON object")
    S = D.parse_set(spec)
    r = D.gamma_S(act, S, a.n_bound)
    verdict = r.to_json()
    verdict["properly_discontinuous_on_S"] = not r.truncated
    grade = CERTIFIED if not r.undecided else EVIDENCE
    return {"action": act.kind, "set": spec, "n_bound": a.n_bound}, verdict, ["Def 10"], grade


def _family(a):
    from . import deform as F
    from .linalg import block_diag
    name = a.family
    if name == "diagonal-stretch":
        return F.diagonal_stretch_family(a.t_min, a.t_max, a.step)
    G, H = F.diagonal_pair()
    base = F.stretch_point(a.base_t)
    if name == "constant":
        return F.constant_family(base, H, a.t_min, a.t_max, a.step)
    if name == "conjugation":
        from scipy.linalg import expm
        x1 = np.array([[0.3, 1.0], [-0.5, -0.3]])
        x2 = np.array([[-0.2, 0.4], [0.7, 0.2]])
        return F.conjugation_family(base, H, lambda t: block_diag(expm(t * x1), expm(t * x2)),
                                    a.t_min, a.t_max, a.step)
    raise KleinInputError(f"unknown family {name!r}")


def cmd_deform_scan(a):
    fam = _family(a)
    from .deform import deform_scan
    res = deform_scan(fam, a.max_len)
    verdict = res.to_json()
    if a.csv:
        with open(a.csv, "w", encoding="utf-8") as fh:
            fh.write("t,overall\n")
            for t, r in res.points:
                fh.write(f"{t!r},{r.overall}\n")
    inputs = {"family": a.family, "t_min": a.t_min, "t_max": a.t_max, "step": a.step,
              "max_len": a.max_len, "base_t": a.base_t}
    return inputs, verdict, ["Def 29", "Thm 28", "Thm 14"], EVIDENCE


def cmd_dual_subspace(a):
    from . import rational as Q
    from .cones import sign_vector_subspaces, subspace_discontinuous_dual
    h = _json_arg(a.H, "--H")
    if a.candidates == "sign-vectors":
        if a.dim is None:
            raise KleinInputError("--dim is required with --candidates sign-vectors")
        cands = sign_vector_subspaces(a.dim)
        dim = a.dim
    else:
        cands = [[tuple(Q.to_fraction(x) for x in v) for v in c] for c in _json_arg(a.candidates, "--candidates")]
        dim = a.dim or (len(h[0]) if h else len(next(v for c in cands for v in c)))
    hb = [tuple(Q.to_fraction(x) for x in v) for v in h]
    if any(len(v) != dim for v in hb):
        raise KleinInputError(f"--H vectors must have {dim} coordinates")
    dual = subspace_discontinuous_dual(hb, cands, dim)
    dual_keys = {Q.span_key(c, dim) for c in dual}
    same = [c for c in cands
            if {Q.span_key(x, dim) for x in subspace_discontinuous_dual(c, cands, dim)} == dual_keys]
    enc = lambda sub: [[_fstr(x) for x in v] for v in sub]
    verdict = {"dual": [enc(c) for c in dual], "dual_size": len(dual),
               "reconstructed": [enc(c) for c in same], "unique": len(same) == 1}
    inputs = {"H": [[_fstr(Q.to_fraction(x)) for x in v] for v in h], "candidates": a.candidates, "dim": dim}
    return inputs, verdict, ["Thm 13"], CERTIFIED


COMMANDS = {
    "cartan-project": (cmd_cartan_project,
                       "Cartan projection nu(g), half the log of the eigenvalues of g^T g, folded to the "
                       "dominant chamber (THEOREMS.md: Def nu)."),
    "check-proper": (cmd_check_proper,
                     "Decide L ⋔ H through nu(L) ∩ nu(H) = {0} (THEOREMS.md: Thm 14). Sampled subgroups "
                     "give evidence only."),
    "calabi-markus": (cmd_calabi_markus,
                      "Only finite discontinuous groups iff rank G = rank H (THEOREMS.md: Thm 3; Thm 9 "
                      "for O(p,q+1)/O(p,q))."),
    "spaceform": (cmd_spaceform,
                  "Compact space forms of signature (p,q) (THEOREMS.md: Conj 8, Thm 9)."),
    "compact-form": (cmd_compact_form,
                     "Search catalog subgroups L for Thm 15 (L ⋔ H, d(L)+d(H)=d(G)) or Thm 16 "
                     "(L ∼ H, d(L)>d(H)); SL(n)/SL(m) falls back to Thm 20-26 (THEOREMS.md)."),
    "sl-table": (cmd_sl_table,
                 "Nonexistence theorems for SL(n)/SL(m) (THEOREMS.md: Thm 20, 21, 22, 24, 25, 26)."),
    "orbit-sim": (cmd_orbit_sim,
                  "Orbits of a planar action: accumulation, stabilizers, separation "
                  "(THEOREMS.md: Ex 9, Def 10, Lemma 11)."),
    "gamma-s": (cmd_gamma_s,
                "Return set Gamma_S = {g : gS ∩ S ≠ ∅} for an analytic compact set (THEOREMS.md: Def 10)."),
    "deform-scan": (cmd_deform_scan,
                    "Scan a one-parameter family for membership in R(Gamma,G,H) (THEOREMS.md: Def 29, "
                    "Thm 28, Thm 14)."),
    "dual-subspace": (cmd_dual_subspace,
                      "Discontinuous dual of a rational subspace of R^n and its reconstruction "
                      "(THEOREMS.md: Thm 13)."),
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="klein", description="Proper actions on G/H through the Cartan projection.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    P = {}
    for name, (_, text) in COMMANDS.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.add_argument("--no-wall-time", action="store_true", help="omit timing so output is reproducible")
        P[name] = p
    p = P["cartan-project"]
    p.add_argument("--G", required=True, help='group, e.g. "SL(3)" or "O(2,1)"')
    p.add_argument("--matrix", required=True, help="JSON list of rows")
    p.add_argument("--no-check", action="store_true", help="skip the membership check")
    p = P["check-proper"]
    p.add_argument("--G", required=True)
    p.add_argument("--H", help='catalog subgroup, e.g. "O(4,1):standard"')
    p.add_argument("--L", help='catalog subgroup, e.g. "U(2,1):realification"')
    p.add_argument("--H-generators", dest="H_generators", help="JSON list of generator matrices (sampled H)")
    p.add_argument("--L-generators", dest="L_generators", help="JSON list of generator matrices (sampled L)")
    p.add_argument("--max-len", type=int, default=8, help="word length for sampled subgroups")
    for name in ("calabi-markus", "compact-form"):
        P[name].add_argument("--G", required=True)
        P[name].add_argument("--H", required=True)
    P["spaceform"].add_argument("--p", type=int, required=True)
    P["spaceform"].add_argument("--q", type=int, required=True)
    p = P["sl-table"]
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--embedding", choices=("block", "irreducible"), default="block")
    p = P["orbit-sim"]
    p.add_argument("--action", default="hyperbolic", help="hyperbolic, contracting or translation")
    p.add_argument("--point", required=True, help="x,y (fractions allowed)")
    p.add_argument("--n-bound", type=int, default=40)
    p.add_argument("--window", default="-10,10,-10,10")
    p.add_argument("--origin-radius", default="0.001", help='radius removed around the origin, or "none"')
    p.add_argument("--q", help="second point for the separation test")
    p.add_argument("--epsilons", default="0.1,0.001,0.000001")
    p.add_argument("--sep-bound", type=int, default=64)
    p.add_argument("--svg", help="write an SVG of the orbits")
    p = P["gamma-s"]
    p.add_argument("--action", default="hyperbolic")
    p.add_argument("--set", required=True, help='JSON, e.g. {"type": "segment", "start": [1,0], "end": [0,1]}')
    p.add_argument("--n-bound", type=int, default=40)
    p = P["deform-scan"]
    p.add_argument("--family", default="diagonal-stretch", choices=("diagonal-stretch", "constant", "conjugation"))
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--base-t", type=float, default=0.5, help="stretch parameter of the base point")
    p.add_argument("--csv", help="write t,overall rows")
    p = P["dual-subspace"]
    p.add_argument("--H", required=True, help="JSON list of spanning vectors")
    p.add_argument("--candidates", default="sign-vectors", help='"sign-vectors" or a JSON list of subspaces')
    p.add_argument("--dim", type=int)
    return ap


def argv_from_inputs(command: str, inputs: dict) -> list:
    """Command line reproducing an envelope's echoed inputs."""
    argv = [command]

    def flag(k):
        return "--" + k.replace("_", "-")

    if command == "check-proper":
        argv += ["--G", inputs["G"], "--max-len", str(inputs["max_len"])]
        for side in ("H", "L"):
            d = inputs[side]
            if "subgroup" in d:
                argv += [f"--{side}", d["subgroup"]]
            else:
                argv += [f"--{side}-generators", json.dumps(d["generators"])]
        return argv
    for k, v in inputs.items():
        if isinstance(v, bool):
            if v:
                argv.append(flag(k))
            continue
        if k in ("point", "q", "window", "epsilons") and isinstance(v, list):
            text = ",".join(v)
        elif isinstance(v, (list, dict)):
            text = json.dumps(v)
        else:
            text = str(v)
        # "--window=-10,..." keeps argparse from reading the value as an option
        argv += [f"{flag(k)}={text}"] if text.startswith("-") else [flag(k), text]
    return argv


def _render(env: dict) -> str:
    lines = [f"{env['command']}: {env['evidence_grade']}"]

    def walk(obj, indent):
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v:
                    lines.append(" " * indent + f"{k}:")
                    walk(v, indent + 2)
                else:
                    lines.append(" " * indent + f"{k}: {v}")
        elif isinstance(obj, list):
            for v in obj[:20]:
                if isinstance(v, (dict, list)):
                    lines.append(" " * indent + "-")
                    walk(v, indent + 2)
                else:
                    lines.append(" " * indent + f"- {v}")
            if len(obj) > 20:
                lines.append(" " * indent + f"... ({len(obj) - 20} more)")

    walk(env["verdict"], 2)
    lines.append(f"citations: {', '.join(env['citations'])} (see THEOREMS.md)")
    return "\n".join(lines)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    t0 = time.perf_counter()
    func = COMMANDS[args.command][0]
    try:
        inputs, verdict, cites, grade = func(args)
        from .catalog import load_catalog
        version = load_catalog().version
    except NumericFailure as exc:
        print(json.dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)},
                         sort_keys=True), file=out)
        return EXIT_NUMERIC
    except (KleinError, KleinInputError, OSError) as exc:
        print(json.dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)},
                         sort_keys=True), file=out)
        return EXIT_INPUT
    env = {
        "command": args.command,
        "inputs": _plain(inputs),
        "catalog_version": version,
        "verdict": _plain(verdict),
        "citations": list(cites),
        "evidence_grade": grade,
        "wall_time": None if args.no_wall_time else round(time.perf_counter() - t0, 6),
    }
    if args.pretty:
        print(_render(env), file=out)
    else:
        print(json.dumps(env, sort_keys=True), file=out)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
