"""Command-line surface: file I/O, subcommands wiring the core modules
together, and SVG rendering of wiring diagrams."""

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import FormatError, SandwichError
from .fillings import incidence_canonical, incidence_equiv, unexpected_arrangement
from .mcg import Factorization
from .plumbing import (
    automorphisms,
    extend_chains,
    germ_from_augmentation,
    germ_from_cluster,
    germ_json,
    graph_from_cluster,
    parse_germ,
    parse_plumb,
    serialize_plumb,
)
from .wiring import (
    FreePoint,
    Intersection,
    Tangency,
    WiringDiagram,
    enclosure_from_wiring,
    factorization_from_json,
    factorization_json,
    incidence,
    incidence_json,
    inside_out,
    parse_wire,
    scott,
    serialize_wire,
    validate_wiring,
    vanishing_data,
    wiring_from_vanishing,
)

SUPPORTED_FORMAT_VERSIONS = (1,)


def _format_version() -> int:
    raw = os.environ.get("SANDWICH_FORMAT_VERSION", "1")
    try:
        version = int(raw)
    except ValueError:
        raise FormatError(f"bad format version {raw!r}", location="SANDWICH_FORMAT_VERSION")
    if version not in SUPPORTED_FORMAT_VERSIONS:
        raise FormatError(f"unsupported format version {version}", location="SANDWICH_FORMAT_VERSION")
    return version


def _emit_error(code: str, message: str, location=None) -> None:
    payload = {"code": code, "message": message, "location": location}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _write_json(data: dict, out, version: int) -> None:
    payload = {"formatVersion": version}
    payload.update(data)
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)


def _read(path: str) -> str:
    return Path(path).read_text()


class _Parser(argparse.ArgumentParser):
    # usage problems follow the same stderr JSON contract as parse errors
    def error(self, message):
        _emit_error("usage", message)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sandwich", description="plumbing graphs, wiring diagrams, fillings")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, wants_out=True, **kwargs):
        q = sub.add_parser(name, **kwargs)
        if wants_out:
            q.add_argument("-o", "--out", help="output path (default stdout)")
        return q

    q = cmd("germ", help="decorated germ of a plumbing graph, as JSON")
    q.add_argument("--graph", required=True)

    q = cmd("graph", help="plumbing graph presenting a cluster")
    q.add_argument("--germ", required=True)

    q = cmd("scott", help="wiring diagram laid out straight from a cluster")
    q.add_argument("--germ", required=True)

    q = cmd("validate", help="check a wiring diagram, optionally against a cluster")
    q.add_argument("--wire", required=True)
    q.add_argument("--germ")

    q = cmd("vanishing", help="vanishing-cycle factorization of a diagram, as JSON")
    q.add_argument("--wire", required=True)

    q = cmd("wire-from-vanishing", help="rebuild the diagram of a factorization")
    q.add_argument("--fact", required=True)

    q = cmd("incidence", help="canonical incidence matrix of a diagram, as JSON")
    q.add_argument("--wire", required=True)

    q = cmd("compare", help="exit 0 iff two diagrams have equivalent incidence data")
    q.add_argument("--wire", action="append", required=True)
    q.add_argument("--unlabeled", action="store_true", help="allow any row bijection")

    q = cmd("inside-out", help="enclosure data re-read through one hole")
    q.add_argument("--wire", required=True)
    q.add_argument("--hole", type=int, required=True)

    q = cmd("extend", help="insert -2 chains before the arrows of a graph")
    q.add_argument("--graph", required=True)
    q.add_argument("--chains", required=True, help="comma list, e.g. c=3,d=4")

    q = cmd("unexpected", wants_out=False,
            help="star-extended arrangement: graph plus combined diagram")
    q.add_argument("--graph", required=True)
    q.add_argument("-N", type=int, required=True, dest="n")
    q.add_argument("--wmax", type=int, required=True)
    q.add_argument("-o", "--out", default="K", help="output prefix (default K)")

    q = cmd("auts", help="graph automorphisms, as JSON")
    q.add_argument("--graph", required=True)

    q = cmd("render", help="SVG picture of a wiring diagram")
    q.add_argument("--wire", required=True)

    return p


# ---------------------------------------------------------------------------
# rendering

_STRAND_STYLE = 'fill="none" stroke="black" stroke-width="0.05"'


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _seg(x0, y0, x1, y1) -> str:
    return f"M {_fmt(x0)} {_fmt(y0)} L {_fmt(x1)} {_fmt(y1)}"


def render(w: WiringDiagram, version: int = 1) -> str:
    """Strands as polylines left to right, position 1 at the bottom; one x
    unit per seq element, one y unit per strand position.  Crossings break
    the understrand; tangencies are filled diamonds, intersections filled
    dots sized by strand count, free points open circles."""
    n = w.n

    def y(pos: int) -> float:
        return n - pos + 1

    paths: list[str] = []
    markers: list[str] = []
    x = 0
    positions = list(range(1, n + 1))  # positions currently in use, constant

    def horizontal(x0, x1, skip=()):
        for pos in positions:
            if pos not in skip:
                paths.append(_seg(x0, y(pos), x1, y(pos)))

    elements: list[tuple[str, object]] = []
    for i, ev in enumerate(w.events):
        elements.append(("braid", w.braids[i]))
        elements.append(("event", ev))
    elements.append(("braid", w.braids[len(w.events)]))

    for kind, payload in elements:
        if kind == "braid":
            word = payload
            if not word:
                horizontal(x, x + 1)
            else:
                m = len(word)
                # rightmost letter acts first, so it is drawn first
                for t, letter in enumerate(reversed(word)):
                    x0 = x + t / m
                    x1 = x + (t + 1) / m
                    i = abs(letter)
                    ya, yb = y(i), y(i + 1)
                    rising = _seg(x0, ya, x1, yb)
                    falling = _seg(x0, yb, x1, ya)
                    over = rising if letter > 0 else falling
                    under = falling if letter > 0 else rising
                    u0, u1 = (yb, ya) if letter > 0 else (ya, yb)
                    xm, ym = (x0 + x1) / 2, (ya + yb) / 2
                    gap = 0.18
                    paths.append(over)
                    paths.append(_seg(x0, u0, x0 + (0.5 - gap) * (x1 - x0), u0 + (0.5 - gap) * (u1 - u0)))
                    paths.append(_seg(x0 + (0.5 + gap) * (x1 - x0), u0 + (0.5 + gap) * (u1 - u0), x1, u1))
                    horizontal(x0, x1, skip=(i, i + 1))
        else:
            ev = payload
            if isinstance(ev, Tangency):
                involved = (ev.pos, ev.pos + 1)
            elif isinstance(ev, Intersection):
                involved = tuple(range(ev.lo, ev.hi + 1))
            else:
                involved = (ev.pos,)
            yc = sum(y(p) for p in involved) / len(involved)
            cx = x + 0.5
            for p in involved:
                paths.append(_seg(x, y(p), cx, yc))
                paths.append(_seg(cx, yc, x + 1, y(p)))
            horizontal(x, x + 1, skip=involved)
            if isinstance(ev, Tangency):
                r = 0.16
                markers.append(
                    f'<path class="tangency" fill="black" d="M {_fmt(cx)} {_fmt(yc - r)} '
                    f'L {_fmt(cx + r)} {_fmt(yc)} L {_fmt(cx)} {_fmt(yc + r)} '
                    f'L {_fmt(cx - r)} {_fmt(yc)} Z"/>'
                )
            elif isinstance(ev, Intersection):
                r = 0.08 + 0.03 * len(involved)
                markers.append(
                    f'<circle class="intersection" fill="black" '
                    f'cx="{_fmt(cx)}" cy="{_fmt(yc)}" r="{_fmt(r)}"/>'
                )
            else:
                markers.append(
                    f'<circle class="free" fill="white" stroke="black" stroke-width="0.04" '
                    f'cx="{_fmt(cx)}" cy="{_fmt(yc)}" r="0.110"/>'
                )
        x += 1

    width = len(elements)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.5 0 {width + 1} {n + 1}">',
        f"<!-- format {version} -->",
        f'<path class="strand" {_STRAND_STYLE} d="{" ".join(paths)}"/>',
    ]
    lines.extend(markers)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def _load_plumb(path: str):
    g, aug, chains = parse_plumb(_read(path))
    if chains:
        g, aug = extend_chains(g, aug, chains)
    return g, aug


def _cmd_germ(args, version):
    g, aug = _load_plumb(args.graph)
    _write_json(germ_json(germ_from_augmentation(g, aug)), args.out, version)
    return 0


def _cmd_graph(args, version):
    c = parse_germ(_read(args.germ))
    g, aug = graph_from_cluster(c)
    _write(serialize_plumb(g, aug), args.out)
    return 0


def _cmd_scott(args, version):
    c = parse_germ(_read(args.germ))
    _write(serialize_wire(scott(c)), args.out)
    return 0


def _cmd_validate(args, version):
    w = parse_wire(_read(args.wire))
    germ = germ_from_cluster(parse_germ(_read(args.germ))) if args.germ else None
    report = validate_wiring(w, germ=germ)
    problems = [{"code": code, "message": msg} for code, msg in report.entries]
    _write_json({"ok": report.ok, "problems": problems}, args.out, version)
    return 0 if report.ok else 1


def _cmd_vanishing(args, version):
    w = parse_wire(_read(args.wire))
    _write_json(factorization_json(vanishing_data(w)), args.out, version)
    return 0


def _cmd_wire_from_vanishing(args, version):
    fact = factorization_from_json(json.loads(_read(args.fact)))
    _write(serialize_wire(wiring_from_vanishing(fact)), args.out)
    return 0


def _cmd_incidence(args, version):
    w = parse_wire(_read(args.wire))
    _write_json(incidence_json(incidence_canonical(incidence(w))), args.out, version)
    return 0


def _cmd_compare(args, version):
    if len(args.wire) != 2:
        raise FormatError("compare needs exactly two --wire inputs")
    a, b = (incidence(parse_wire(_read(p))) for p in args.wire)
    equivalent = incidence_equiv(a, b, unlabeled=args.unlabeled)
    _write_json({"equivalent": equivalent}, args.out, version)
    return 0 if equivalent else 1


def _cmd_inside_out(args, version):
    w = parse_wire(_read(args.wire))
    e = inside_out(enclosure_from_wiring(w), args.hole)
    data = {
        "holes": e.n,
        "components": list(e.components),
        "items": [{"kind": kind, "holes": sorted(holes)} for kind, holes in e.items],
    }
    _write_json(data, args.out, version)
    return 0


def _cmd_extend(args, version):
    g, aug, chains = parse_plumb(_read(args.graph))
    if chains:
        g, aug = extend_chains(g, aug, chains)
    lengths = {}
    for part in args.chains.split(","):
        name, sep, value = part.partition("=")
        if not sep or not name:
            raise FormatError(f"bad chain spec {part!r}", location="--chains")
        try:
            lengths[name.strip()] = int(value)
        except ValueError:
            raise FormatError(f"bad chain length in {part!r}", location="--chains")
    g, aug = extend_chains(g, aug, lengths)
    _write(serialize_plumb(g, aug), args.out)
    return 0


def _cmd_unexpected(args, version):
    g, aug = _load_plumb(args.graph)
    arr = unexpected_arrangement(g, aug, args.n, args.wmax)
    plumb_path = f"{args.out}.plumb"
    wire_path = f"{args.out}.wire"
    _write(serialize_plumb(arr.graph, arr.arrows), plumb_path)
    _write(serialize_wire(arr.wiring), wire_path)
    _write_json(
        {"plumb": plumb_path, "wire": wire_path, "germ": germ_json(arr.germ)},
        None, version,
    )
    return 0


def _cmd_auts(args, version):
    g, aug, _ = parse_plumb(_read(args.graph))
    _write_json({"automorphisms": automorphisms(g)}, args.out, version)
    return 0


def _cmd_render(args, version):
    w = parse_wire(_read(args.wire))
    _write(render(w, version), args.out)
    return 0


_COMMANDS = {
    "germ": _cmd_germ,
    "graph": _cmd_graph,
    "scott": _cmd_scott,
    "validate": _cmd_validate,
    "vanishing": _cmd_vanishing,
    "wire-from-vanishing": _cmd_wire_from_vanishing,
    "incidence": _cmd_incidence,
    "compare": _cmd_compare,
    "inside-out": _cmd_inside_out,
    "extend": _cmd_extend,
    "unexpected": _cmd_unexpected,
    "auts": _cmd_auts,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    try:
        version = _format_version()
        return _COMMANDS[args.command](args, version)
    except SandwichError as exc:
        _emit_error(exc.code, exc.message, exc.location)
        return 2
    except json.JSONDecodeError as exc:
        _emit_error("format", str(exc), f"line {exc.lineno}")
        return 2
    except OSError as exc:
        _emit_error("io", str(exc), getattr(exc, "filename", None))
        return 2


if __name__ == "__main__":
    sys.exit(main())
