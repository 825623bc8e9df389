"""Command-line entry point.

Exit codes: 0 success, 1 a verdict came out false, 2 usage or input error.
Graphs are read from ``-g FILE`` or standard input when the flag is omitted
or given as ``-``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .covering import CoverError, check_cover, lift_homotopy, lift_walk
from .deck import (
    DeckError, ShiftSubgroup, Subgroup, closure, deck_group, detect_shift,
    enumerate_covers, fundamental_group, identify_group, quotient,
)
from .families import ARITY, FAMILIES, FamilySpec, generate
from .graph import GraphError, diamonds, is_bipartite, is_stiff, load_graph, save_graph, to_dot
from .morphism import Morphism, MorphismError, homotopic, load_morphism, pleat, save_morphism
from .universal import CoverTooLarge, build_folded_cover, homotopic_rel_endpoints
from .walks import Walk, WalkError, oracle_homotopic_rel_endpoints

DOMAIN_ERRORS = (GraphError, WalkError, MorphismError, CoverError, DeckError, CoverTooLarge, OSError)


class UsageError(Exception):
    pass


# -- I/O helpers -----------------------------------------------------------------
def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _graph(args):
    return load_graph(_read_text(args.graph))


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _morphism(path: str, dom=None, cod=None) -> Morphism:
    p = Path(path)
    return load_morphism(p.read_text(encoding="utf-8"), dom, cod, base_dir=p.parent)


def _graph_dict(G) -> dict:
    return {"name": G.name, "vertices": list(G.vertices), "edges": [list(e) for e in G.edges()]}


def _basepoint(G, v):
    return G.vertices[0] if v is None else str(v)


def load_chain(text: str, K, cod) -> list[Morphism]:
    """Chain file: optional ``dom``/``cod`` references, then one block per map,
    each opened by a ``step`` line and followed by ``m <k> <image>`` lines."""
    blocks: list[dict] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] in ("dom", "cod") and len(tok) == 2:
            continue
        if tok[0] == "step" and len(tok) == 1:
            blocks.append({})
        elif tok[0] == "m" and len(tok) == 3:
            if not blocks:
                raise MorphismError(f"line {lineno}: 'm' line before the first 'step'")
            blocks[-1][tok[1]] = tok[2]
        else:
            raise MorphismError(f"line {lineno}: cannot parse {line!r}")
    return [Morphism(K, cod, b) for b in blocks]


def chain_refs(text: str) -> dict[str, str]:
    refs = {}
    for raw in text.splitlines():
        tok = raw.split("#", 1)[0].split()
        if len(tok) == 2 and tok[0] in ("dom", "cod"):
            refs[tok[0]] = tok[1]
    return refs


# -- commands ----------------------------------------------------------------------
def cmd_gen(args):
    if args.family not in ARITY:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    G = generate(FamilySpec(args.family, tuple(args.params)))
    if args.json:
        return 0, {"graph": _graph_dict(G)}
    _write(args.output, save_graph(G))
    return 0, None


def cmd_info(args):
    G = _graph(args)
    ds = diamonds(G)
    rep = {
        "name": G.name, "order": G.order, "size": G.size,
        "loops": list(G.loops()),
        "diamonds": [list(d) for d in ds], "stiff": is_stiff(G), "bipartite": is_bipartite(G),
    }
    if not args.json:
        print(f"name: {G.name}\norder: {G.order}\nsize: {G.size}")
        print(f"loops: {' '.join(rep['loops']) or '-'}")
        print(f"diamonds: {len(ds)}")
        for d in ds:
            print("  " + " ".join(d))
        print(f"stiff: {'yes' if rep['stiff'] else 'no'}")
        print(f"bipartite: {'yes' if rep['bipartite'] else 'no'}")
    return 0, rep


def cmd_pleat(args):
    G = _graph(args)
    S, r = pleat(G)
    if args.json:
        return 0, {"graph": _graph_dict(S), "retraction": r.as_dict(), "stiff": True}
    _write(args.output, save_graph(S))
    return 0, None


def cmd_check_cover(args):
    f = _morphism(args.map)
    rep = check_cover(f)
    out = rep.as_dict()
    if not args.json:
        print(f"surjective: {'yes' if rep.is_surjective else 'no'}")
        print(f"cover: {'yes' if rep.is_cover else 'no'}")
        for v, d in rep.neighborhood_failures:
            print(f"  neighbourhood of {v}: {d}")
        print(f"homotopy cover: {'yes' if rep.is_homotopy_cover else 'no'}")
        for d in rep.diamond_failures:
            print(f"  diamond {' '.join(d)} does not lift")
    return (0 if rep.is_homotopy_cover else 1), out


def cmd_lift_walk(args):
    f = _morphism(args.map)
    w = Walk.parse(f.cod, args.walk)
    lifted = lift_walk(f, w, args.start)
    if not args.json:
        print(lifted)
    return 0, {"walk": list(w.seq), "lift": list(lifted.seq)}


def cmd_lift_homotopy(args):
    f = _morphism(args.map)
    text = Path(args.chain).read_text(encoding="utf-8")
    refs = chain_refs(text)
    if "dom" not in refs:
        raise UsageError("chain file needs a 'dom <graph file>' line naming K")
    K = load_graph((Path(args.chain).parent / refs["dom"]).read_text(encoding="utf-8"))
    chain = load_chain(text, K, f.cod)
    start = _morphism(args.start_lift, K, f.dom)
    choose = {}
    for item in args.choose or []:
        if "=" not in item:
            raise UsageError(f"--choose expects k=k', got {item!r}")
        k, kp = item.split("=", 1)
        choose[k] = kp
    lifts = lift_homotopy(f, chain, start, choose or None)
    if not args.json:
        for i, h in enumerate(lifts):
            print(f"step {i}: " + " ".join(f"{k}->{v}" for k, v in h.as_dict().items()))
    return 0, {"lifts": [h.as_dict() for h in lifts]}


def cmd_homotopic_walks(args):
    G = _graph(args)
    a = Walk.parse(G, args.walk_a)
    b = Walk.parse(G, args.walk_b)
    if a.start != b.start or a.end != b.end:
        raise WalkError("walks must share both endpoints")
    out = {"walk_a": list(a.seq), "walk_b": list(b.seq)}
    v = homotopic_rel_endpoints(G, a.start, a, b, slack=args.slack)
    out.update(verdict=v.verdict, certified=v.certified, depths=list(v.depths))
    answer = v.verdict
    if args.oracle and v.verdict != "yes":
        o = oracle_homotopic_rel_endpoints(a, b, args.max_len, args.max_states)
        out["oracle"] = o
        if o == "yes":
            answer = "yes"
    out["answer"] = answer
    if not args.json:
        cert = "certified" if v.certified else f"uncertified, depths {', '.join(map(str, v.depths))}"
        print(f"{answer} ({cert})")
        if "oracle" in out:
            print(f"oracle: {out['oracle']}")
    return (0 if answer == "yes" else 1), out


def cmd_homotopic_maps(args):
    f = _morphism(args.f)
    g = _morphism(args.g, f.dom, f.cod)
    v = homotopic(f, g, args.max_states)
    moves = [[m.vertex, m.image] for m in v.moves]
    if not args.json:
        print(v.verdict)
        for x, c in moves:
            print(f"  move {x} -> {c}")
    return (0 if v.verdict == "yes" else 1), {"verdict": v.verdict, "moves": moves, "states": v.states}


def _cover_summary(U) -> dict:
    return {
        "basepoint": U.basepoint, "depth": U.depth, "stabilized": U.stabilized,
        "classes": U.size, "edges": U.graph.size, "fibre_size": len(U.fibre()),
        "frontier": len(U.frontier),
    }


def cmd_universal_cover(args):
    G = _graph(args)
    U = build_folded_cover(G, _basepoint(G, args.vertex), args.depth)
    out = _cover_summary(U)
    out["labels"] = U.labels()
    if args.dot:
        _write(args.dot, to_dot(U.graph, U.labels()))
    if args.output:
        _write(args.output, save_graph(U.graph))
    if not args.json:
        state = "stabilized" if U.stabilized else f"not stabilized at depth {U.depth}"
        print(f"{state}: {U.size} classes, {U.graph.size} edges, fibre {out['fibre_size']}")
        if args.verbose:
            for i in range(U.size):
                print(f"  {U.graph.vertices[i]}: {U.label(i)}")
    return 0, out


def cmd_fundamental_group(args):
    G = _graph(args)
    out = fundamental_group(G, _basepoint(G, args.vertex), args.depth)
    if not args.json:
        if out["stabilized"]:
            print(out["name"] if out["name"] else f"non-abelian group of order {out['order']}")
        else:
            print(f"not stabilized at depth {out['depth']}")
            if out["shift"]:
                sh = out["shift"]
                print(f"shift generator: {sh['generator']}")
                print("fibre sizes: " + ", ".join(f"depth {d}: {s}" for d, s in sh["fibre_sizes"].items()))
    return 0, out


def cmd_deck_group(args):
    G = _graph(args)
    U = build_folded_cover(G, _basepoint(G, args.vertex), args.depth)
    D = deck_group(U)
    desc = identify_group(D)
    elems = [{"loop": str(D.loop(g)), "order": D.element_order(g)} for g in range(D.order)]
    out = {**desc.as_dict(), "elements": elems, "table": D.table}
    if not args.json:
        print(f"order {D.order}: {desc.name or 'non-abelian'}")
        for g, e in enumerate(elems):
            print(f"  g{g} (order {e['order']}): {e['loop']}")
    return 0, out


def _write_covers(out_dir: Path, G, covers) -> list[dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    base = out_dir / "base.graph"
    base.write_text(save_graph(G), encoding="utf-8")
    files = []
    for i, (H, r, index) in enumerate(covers):
        gpath = out_dir / f"cover{i}.graph"
        mpath = out_dir / f"cover{i}.morph"
        gpath.write_text(save_graph(H), encoding="utf-8")
        mpath.write_text(save_morphism(r, gpath.name, base.name), encoding="utf-8")
        files.append({"graph": str(gpath), "morphism": str(mpath)})
    return files


def cmd_enumerate_covers(args):
    G = _graph(args)
    E = enumerate_covers(G, _basepoint(G, args.vertex), args.depth, args.max_index)
    out = {
        "status": E.status, "depth": E.depth,
        "covers": [{"index": n, "order": H.order, "size": H.size} for H, _, n in E],
        "group": E.group.as_dict() if E.group else None,
        "shift": E.evidence.as_dict() if E.evidence else None,
    }
    if args.out_dir:
        for entry, files in zip(out["covers"], _write_covers(Path(args.out_dir), G, E.covers)):
            entry.update(files)
    if not args.json:
        if E.status == "not-stabilized":
            print(f"not stabilized at depth {E.depth} and no shift generator found; enumeration unsupported")
        for i, c in enumerate(out["covers"]):
            print(f"cover{i}: index {c['index']}, {c['order']} vertices, {c['size']} edges")
    return (0 if E.status != "not-stabilized" else 1), out


def cmd_quotient(args):
    G = _graph(args)
    v = _basepoint(G, args.vertex)
    U = build_folded_cover(G, v, args.depth)
    loops = [Walk.parse(G, w) for w in args.generator]
    for w in loops:
        if w.start != v or w.end != v:
            raise WalkError(f"generator {w} is not a closed walk at {v}")
    if U.stabilized:
        D = deck_group(U)
        pos = {c: g for g, c in enumerate(D.fibre)}
        gens = []
        for w in loops:
            cls = 0
            for _ in range(args.power):
                cls = U.trace(w.indices, cls)
            gens.append(pos[cls])
        H, r = quotient(U, Subgroup(closure(D.table, gens)), D)
    else:
        if len(loops) != 1:
            raise UsageError("a cover that has not stabilized can only be quotiented by one shift generator")
        H, r = quotient(U, ShiftSubgroup(loops[0], args.power))
    if args.morph:
        _write(args.morph, save_morphism(r, args.output, args.graph if args.graph not in (None, "-") else None))
    if args.json:
        return 0, {"graph": _graph_dict(H), "projection": r.as_dict()}
    _write(args.output, save_graph(H))
    return 0, None


def cmd_export_dot(args):
    G = _graph(args)
    dot = to_dot(G)
    if args.json:
        return 0, {"dot": dot}
    _write(args.output, dot)
    return 0, None


# -- parser --------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a machine-readable report")
    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("-g", "--graph", default="-", help="graph file (default: standard input)")
    based = argparse.ArgumentParser(add_help=False)
    based.add_argument("-v", "--vertex", help="basepoint (default: first vertex)")
    based.add_argument("--depth", type=int, default=10, help="truncation depth in reduced walk length")

    p = argparse.ArgumentParser(prog="homcover", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate a family graph")
    s.add_argument("family", help=", ".join(FAMILIES))
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("info", parents=[common, graph_in], help="order, size, diamonds, stiffness")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("pleat", parents=[common, graph_in], help="fold down to a stiff graph")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_pleat)

    s = sub.add_parser("check-cover", parents=[common], help="cover and homotopy-cover verdicts")
    s.add_argument("--map", required=True)
    s.set_defaults(func=cmd_check_cover)

    s = sub.add_parser("lift-walk", parents=[common], help="lift a walk through a cover")
    s.add_argument("--map", required=True)
    s.add_argument("--walk", required=True)
    s.add_argument("--start", required=True)
    s.set_defaults(func=cmd_lift_walk)

    s = sub.add_parser("lift-homotopy", parents=[common], help="lift a chain of one-step homotopies")
    s.add_argument("--map", required=True)
    s.add_argument("--chain", required=True)
    s.add_argument("--start-lift", required=True)
    s.add_argument("--choose", action="append", metavar="K=K'", help="neighbour used for vertex K")
    s.set_defaults(func=cmd_lift_homotopy)

    s = sub.add_parser("homotopic-walks", parents=[common, graph_in], help="homotopy rel endpoints")
    s.add_argument("walk_a")
    s.add_argument("walk_b")
    s.add_argument("--slack", type=int, default=2)
    s.add_argument("--oracle", action="store_true", help="fall back to the bounded rewriting search")
    s.add_argument("--max-len", type=int)
    s.add_argument("--max-states", type=int, default=200_000)
    s.set_defaults(func=cmd_homotopic_walks)

    s = sub.add_parser("homotopic-maps", parents=[common], help="spider-move search between maps")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--max-states", type=int, default=10**6)
    s.set_defaults(func=cmd_homotopic_maps)

    s = sub.add_parser("universal-cover", parents=[common, graph_in, based], help="folded universal cover")
    s.add_argument("--dot")
    s.add_argument("-o", "--output")
    s.add_argument("--verbose", action="store_true", help="list class labels")
    s.set_defaults(func=cmd_universal_cover)

    s = sub.add_parser("fundamental-group", parents=[common, graph_in, based], help="identify the deck group")
    s.set_defaults(func=cmd_fundamental_group)

    s = sub.add_parser("deck-group", parents=[common, graph_in, based], help="deck transformations")
    s.set_defaults(func=cmd_deck_group)

    s = sub.add_parser("enumerate-covers", parents=[common, graph_in, based], help="connected homotopy covers")
    s.add_argument("--max-index", type=int, default=4)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_enumerate_covers)

    s = sub.add_parser("quotient", parents=[common, graph_in, based], help="quotient of the universal cover")
    s.add_argument("--generator", action="append", required=True, help="closed walk at the basepoint")
    s.add_argument("--power", type=int, default=1)
    s.add_argument("-o", "--output")
    s.add_argument("--morph", help="also write the projection to this file")
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("export-dot", parents=[common, graph_in], help="DOT rendering of a graph")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, report = args.func(args)
    except UsageError as exc:
        print(f"homcover {args.command}: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"homcover {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        report = {"command": args.command, "exit_code": code, **(report or {})}
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
