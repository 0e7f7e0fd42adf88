"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from .cochains import Cochain, TableTooLarge, coboundary
from .cohomology import cohomology, is_coboundary
from .docfmt import Document, DocumentError, read_document
from .groups import GroupError
from .notation import NotationError, format_value, parse_value
from .quadric import MUTABLE, STEPS, QuadricModel, verify_theorem
from .report import Report, Section

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_MUTATION = re.compile(r"^\s*([A-Za-z_']+)\s*\(([^)]*)\)\s*=\s*(.+?)\s*$")


class InputError(Exception):
    pass


def _emit(report: Report, fmt: str, out) -> None:
    out.write(report.to_machine() if fmt == "machine" else report.to_text())


def _cochain_lines(c: Cochain, indent: str = "  ") -> list[str]:
    rows = []
    for t in c.support():
        key = c.format_tuple(t) if c.degree else "value"
        rows.append(f"{indent}{key} = {format_value(c.module, c.value(t))}")
    return rows or [f"{indent}(zero)"]


def parse_mutation(text: str) -> tuple[str, tuple[str, ...], str]:
    """``Phi(t,t,s)=1`` -> ``("Phi", ("t", "t", "s"), "1")``."""
    m = _MUTATION.match(text)
    if not m:
        raise InputError(f"malformed --debug-mutate {text!r}; expected NAME(g1,...)=VALUE")
    name = m.group(1).replace("'", "_prime") if m.group(1).endswith("'") else m.group(1)
    if name not in MUTABLE:
        raise InputError(f"cannot mutate {name!r}; choose from {', '.join(MUTABLE)}")
    args = tuple(a.strip() for a in m.group(2).split(",")) if m.group(2).strip() else ()
    return name, args, m.group(3)


_MUTATION_TARGET = {
    "phi": ("G", "pic", 1),
    "Phi": ("G", "symbols", 3),
    "Psi": ("G", "mu2_base", 2),
    "psi": ("G8", "squares", 2),
    "psi_tilde": ("G8", "symbols_ext", 2),
    "Phi_prime": ("G8", "mu2", 3),
}


def _collect_mutations(items: Sequence[str]) -> dict:
    model = QuadricModel()
    out: dict[str, dict] = {}
    for text in items:
        name, args, value = parse_mutation(text)
        gattr, mattr, degree = _MUTATION_TARGET[name]
        G, M = getattr(model, gattr), getattr(model, mattr)
        if len(args) != degree:
            raise InputError(f"{name} takes {degree} arguments, got {len(args)}")
        try:
            for a in args:
                G.parse_element(a)
            parse_value(M, value)
        except (GroupError, NotationError) as exc:
            raise InputError(f"--debug-mutate {text!r}: {exc}") from None
        out.setdefault(name, {})[args] = value
    return out


def cmd_verify(args, out) -> int:
    mutations = _collect_mutations(args.debug_mutate or [])
    rep = verify_theorem(args.step, mutations)
    if args.step == "picard" and args.format == "text":
        for c in rep.checks():
            out.write(c.message + "\n")
    else:
        _emit(rep, args.format, out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _load(paths: Sequence[str | None]) -> Document:
    return read_document([p for p in paths if p])


def cmd_compute(args, out) -> int:
    doc = _load([args.group, args.module])
    if doc.group is None:
        raise InputError("no [group] section found")
    M = doc.module(args.module_name)
    if args.degree < 0:
        raise InputError("degree must be nonnegative")
    H = cohomology(M, args.degree)
    sec = Section("compute", f"H^{args.degree}")
    sec.add(f"H^{args.degree}", True, f"H^{args.degree} = {H}", f"invariants={H}")
    if args.format == "machine":
        _emit(Report([sec]), "machine", out)
        return EXIT_OK
    out.write(f"H^{args.degree} = {H}\n")
    if args.show_generators:
        for i, (z, d) in enumerate(zip(H.generator_cocycles, H.invariants)):
            order = "infinite" if d == 0 else str(d)
            out.write(f"generator {i + 1} (order {order}):\n")
            out.write("\n".join(_cochain_lines(z)) + "\n")
    return EXIT_OK


def cmd_check_cocycle(args, out) -> int:
    doc = _load([args.group, args.module, args.cochain])
    z = doc.cochain
    if z is None:
        raise InputError("no [cochain] section found")
    sec = Section("check", "cocycle check")
    dz = coboundary(z)
    lines = []
    if not dz.is_zero():
        bad = dz.format_tuple(dz.support()[0])
        sec.add("cocycle", False, "cocycle: no", f"offending=({bad})")
        lines += ["cocycle: no", f"offending: d({bad}) = {format_value(dz.module, dz.value(dz.support()[0]))}"]
        code = EXIT_FAIL
    else:
        sec.add("cocycle", True, "cocycle: yes", "")
        lines.append("cocycle: yes")
        if z.degree == 0:
            w = Cochain.zero(z.module, 0) if z.is_zero() else None
        else:
            w = is_coboundary(z)
        sec.add("coboundary", True, f"coboundary: {'yes' if w is not None else 'no'}",
                f"coboundary={'yes' if w is not None else 'no'}")
        lines.append(f"coboundary: {'yes' if w is not None else 'no'}")
        if w is not None and args.witness and z.degree > 0:
            lines.append("witness:")
            lines += _cochain_lines(w)
        code = EXIT_OK
    if args.format == "machine":
        _emit(Report([sec]), "machine", out)
    else:
        out.write("\n".join(lines) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cohomo", description="Exact cohomology of finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute H^n(G, M) from input files")
    c.add_argument("--group", help="file with a [group] section")
    c.add_argument("--module", required=True, help="file with a [module] section (may include [group])")
    c.add_argument("--module-name", help="module to use when the file defines several")
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--show-generators", action="store_true", help="print generator cocycles")
    c.add_argument("--format", choices=["text", "machine"], default="text")
    c.set_defaults(func=cmd_compute)

    k = sub.add_parser("check-cocycle", help="check a cochain file")
    k.add_argument("--cochain", required=True)
    k.add_argument("--group")
    k.add_argument("--module")
    k.add_argument("--witness", action="store_true", help="print a coboundary witness when one exists")
    k.add_argument("--format", choices=["text", "machine"], default="text")
    k.set_defaults(func=cmd_check_cocycle)

    v = sub.add_parser("verify-paper", help="replay the quadric computation")
    v.add_argument("--step", choices=list(STEPS), default="all")
    v.add_argument("--format", choices=["text", "machine"], default="text")
    v.add_argument("--debug-mutate", action="append", metavar="NAME(g1,..)=VALUE",
                   help="override one transcribed entry, e.g. 'Phi(t,t,s)=1'")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (InputError, DocumentError, TableTooLarge) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
