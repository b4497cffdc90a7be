"""Command-line front end.

Exit codes: 0 everything passed, 1 a mathematical check failed, 2 bad input,
3 a resource cap was exceeded.  ``--json`` prints a versioned report; the
human-readable output is rendered from the same dictionary.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import kzero
from .algebra import (
    FiniteAlgebra,
    ideal_generated,
    jacobson_radical,
    quotient_by_ideal,
    radical_power_series,
    unit_group,
)
from .allowable import All, AllowableClass, ProjGenerated, InjGenerated, Pullback, Pushforward, Trivial
from .decomp import enumerate_indecomposables, krull_schmidt
from .errors import BudgetExceeded, CapExceeded, StableKError
from .formats import ParseError, load_algebra, parse_element
from .homproj import indecomposable_projectives, simples
from .module import ModuleHom, coregular, regular_module, zero_module
from .waldhausen import WaldhausenSpec, check_axioms, check_quasi_frobenius

SCHEMA = 1


class InputError(click.ClickException):
    exit_code = 2


class CheckFailed(Exception):
    pass


def _emit(report: dict, as_json: bool, render) -> None:
    report = {"schema": SCHEMA, **report}
    if as_json:
        click.echo(json.dumps(report, sort_keys=True, indent=2, default=_jsonable))
    else:
        render(report)


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _run(fn):
    """Map library exceptions onto exit codes."""
    try:
        return fn()
    except ParseError as exc:
        raise InputError(str(exc))
    except (CapExceeded, BudgetExceeded) as exc:
        click.echo(f"resource cap exceeded: {exc}", err=True)
        sys.exit(3)
    except (StableKError, ValueError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}")


def _algebra(ref: str) -> FiniteAlgebra:
    return _run(lambda: load_algebra(ref))


@click.group()
def main() -> None:
    """Stable module categories, Waldhausen structures and degree-zero K-groups."""


# ---------------------------------------------------------------------------
# alg info


@main.group()
def alg() -> None:
    """Algebra inspection."""


def alg_info_report(a: FiniteAlgebra, cap: int) -> dict:
    series = radical_power_series(a)
    rad = jacobson_radical(a)
    out = {
        "command": "alg info",
        "algebra": a.name,
        "p": a.p,
        "dim": a.dim,
        "radical_series_dims": [i.dim for i in series],
        "semisimple": rad.dim == 0,
        "simple_dims": [s.dim for s in simples(a)],
        "projective_dims": [q.dim for q in indecomposable_projectives(a)],
        "injective_dims": sorted(piece.dim for piece in krull_schmidt(coregular(a)).pieces),
        "quasi_frobenius": check_quasi_frobenius(a),
    }
    if a.is_commutative():
        ug = unit_group(a, cap=cap)
        out["units"] = {
            "group": str(ug.group),
            "invariant_factors": ug.group.factors(),
            "order": ug.count,
            "generators": [list(map(int, g)) for g in ug.generators],
            "generator_orders": list(ug.orders),
        }
    return out


def _render_info(r: dict) -> None:
    click.echo(f"{r['algebra']}  (p = {r['p']}, dim = {r['dim']})")
    click.echo(f"  radical series dims : {r['radical_series_dims']}")
    click.echo(f"  semisimple          : {r['semisimple']}")
    click.echo(f"  simples             : {r['simple_dims']}")
    click.echo(f"  indec. projectives  : {r['projective_dims']}")
    click.echo(f"  indec. injectives   : {r['injective_dims']}")
    click.echo(f"  quasi-Frobenius     : {r['quasi_frobenius']}")
    if "units" in r:
        u = r["units"]
        click.echo(f"  unit group          : {u['group']} (order {u['order']})")


@alg.command("info")
@click.argument("algebra")
@click.option("--cap", default=1 << 16, show_default=True, help="Largest algebra size to enumerate.")
@click.option("--json", "as_json", is_flag=True)
def alg_info(algebra: str, cap: int, as_json: bool) -> None:
    """Dimensions, radical series, projectives, QF verdict and units."""
    a = _algebra(algebra)
    report = _run(lambda: alg_info_report(a, cap))
    _emit(report, as_json, _render_info)


# ---------------------------------------------------------------------------
# kgroups


THEORIES = ("k0", "g0", "rep", "stabrep", "gst0")


def kgroups_report(a: FiniteAlgebra, theory: str, max_dim: int, cap: int) -> dict:
    if theory == "k0":
        g = kzero.k0(a)
    elif theory == "g0":
        g = kzero.g0(a)
    elif theory == "rep":
        g = kzero.rep_split(a, max_dim, cap=cap)
    elif theory == "stabrep":
        g = kzero.stabrep_split(a, max_dim, cap=cap)
    else:
        g = kzero.gst0(a, max_dim, cap=cap)
    out = {"command": "kgroups", "algebra": a.name, "theory": theory, "max_dim": max_dim}
    out.update(g.to_dict())
    out["generator_dims"] = [m.dim for m in g.generators]
    return out


def _render_kgroups(r: dict) -> None:
    click.echo(f"{r['theory']}({r['algebra']}) = {r['group']}")
    for lab, d in zip(r["generators"], r["generator_dims"]):
        click.echo(f"  generator {lab}  (dim {d})")
    if r["possibly_incomplete"]:
        click.echo("  warning: the enumeration bound may miss indecomposables")


@main.command("kgroups")
@click.argument("algebra")
@click.argument("theory", type=click.Choice(THEORIES))
@click.option("--max-dim", default=4, show_default=True)
@click.option("--cap", default=200_000, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def kgroups(algebra: str, theory: str, max_dim: int, cap: int, as_json: bool) -> None:
    """Presentation of a degree-zero group."""
    a = _algebra(algebra)
    _emit(_run(lambda: kgroups_report(a, theory, max_dim, cap)), as_json, _render_kgroups)


# ---------------------------------------------------------------------------
# waldhausen-check


def _even_fixture(f: ModuleHom) -> bool:
    """Deliberately broken weak equivalences: isomorphisms plus every map
    between even-dimensional modules."""
    return f.is_iso() or (f.source.dim % 2 == 0 and f.target.dim % 2 == 0)


def parse_class(text: str, a: FiniteAlgebra, universe, phi) -> AllowableClass:
    """all | trivial | projgen:<gens> | injgen:<gens> | pullback | pushforward.

    Generators are comma separated: regular, coregular, simple, or an
    indecomposable label from the enumeration (I1, I2, ...).
    """
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head == "all":
        return All(a)
    if head == "trivial":
        return Trivial(a)
    if head in ("pullback", "pushforward"):
        if phi is None:
            raise InputError(f"class {head!r} needs --quotient")
        inner = All(phi.target)
        return Pullback(phi, inner, universe=universe) if head == "pullback" else Pushforward(phi, inner)
    if head in ("projgen", "injgen"):
        names = [x.strip() for x in rest.split(",") if x.strip()]
        if not names:
            raise InputError(f"class {head!r} needs generators")
        lookup = {m.label(): m for m in universe if m.dim}
        gens = []
        for n in names:
            if n == "regular":
                gens.append(regular_module(a))
            elif n == "coregular":
                gens.append(coregular(a))
            elif n == "simple":
                gens.extend(simples(a))
            elif n in lookup:
                gens.append(lookup[n])
            else:
                raise InputError(f"unknown generator {n!r}")
        return ProjGenerated(gens) if head == "projgen" else InjGenerated(gens, universe=universe)
    raise InputError(f"unknown class syntax {text!r}")


def _quotient(a: FiniteAlgebra, quotient: str | None):
    if not quotient:
        return None
    elems = [parse_element(a, t) for t in quotient.split(",")]
    return quotient_by_ideal(a, ideal_generated(a, elems))[1]


def waldhausen_report(
    a: FiniteAlgebra, cof: str, we: str, quotient: str | None, max_dim: int, budget: int, seed: int, cap: int
) -> dict:
    phi = _run(lambda: _quotient(a, quotient))
    en = _run(lambda: enumerate_indecomposables(a, max_dim, cap=cap))
    universe = [zero_module(a)] + list(en.modules)
    we_override = None
    if we.strip().lower() == "fixture:even":
        we_class, we_override = All(a), _even_fixture
    else:
        we_class = parse_class(we, a, universe, phi)
    spec = WaldhausenSpec(parse_class(cof, a, universe, phi), we_class, we_override=we_override)
    reports = _run(lambda: check_axioms(spec, universe, budget=budget, seed=seed))
    return {
        "command": "waldhausen-check",
        "input": {
            "algebra": a.name,
            "cof": cof,
            "we": we,
            "quotient": quotient,
            "max_dim": max_dim,
            "budget": budget,
            "seed": seed,
        },
        "universe": [m.label() for m in universe],
        "universe_incomplete": en.possibly_incomplete,
        "reports": [r.to_dict() for r in sorted(reports, key=lambda r: r.name)],
        "passed": all(r.verdict for r in reports),
    }


def _render_waldhausen(r: dict) -> None:
    click.echo(f"universe: {', '.join(r['universe'])}")
    for rep in r["reports"]:
        line = f"  [{rep['verdict']:4}] {rep['axiom']}  ({rep['regime']}, {rep['count']} checked)"
        click.echo(line)
        for w in rep.get("witnesses", []):
            click.echo(f"         witness: {json.dumps(w, sort_keys=True, default=_jsonable)}")


@main.command("waldhausen-check")
@click.argument("algebra")
@click.option("--cof", default="all", show_default=True, help="Cofibration class.")
@click.option("--we", default="all", show_default=True, help="Weak-equivalence class (or fixture:even).")
@click.option("--quotient", default=None, help="Ideal generators defining phi for pullback/pushforward.")
@click.option("--max-dim", default=3, show_default=True)
@click.option("--budget", default=100_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--cap", default=200_000, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--verify-witness", "verify", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Re-run a saved JSON report and confirm its witnesses.")
def waldhausen_check(algebra, cof, we, quotient, max_dim, budget, seed, cap, as_json, verify) -> None:
    """Check the Waldhausen axioms over the indecomposables up to --max-dim."""
    if verify:
        _verify(algebra, verify, cap, as_json)
        return
    a = _algebra(algebra)
    report = waldhausen_report(a, cof, we, quotient, max_dim, budget, seed, cap)
    _emit(report, as_json, _render_waldhausen)
    if not report["passed"]:
        sys.exit(1)


def _verify(algebra: str, path: str, cap: int, as_json: bool) -> None:
    try:
        saved = json.loads(Path(path).read_text())
        inp = saved["input"]
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"{path}: not a waldhausen-check report ({exc})")
    a = _algebra(algebra)
    fresh = waldhausen_report(
        a, inp["cof"], inp["we"], inp["quotient"], inp["max_dim"], inp["budget"], inp["seed"], cap
    )
    by_name = {r["axiom"]: r for r in fresh["reports"]}
    results = []
    for rep in saved["reports"]:
        if rep["verdict"] == "pass":
            continue
        again = by_name.get(rep["axiom"], {})
        for w in rep.get("witnesses", []):
            results.append({"axiom": rep["axiom"], "reproduced": w in again.get("witnesses", [])})
    out = {"command": "verify-witness", "report": str(path), "witnesses": results}

    def render(r):
        for item in r["witnesses"]:
            click.echo(f"  {item['axiom']}: {'reproduced' if item['reproduced'] else 'NOT reproduced'}")
        if not r["witnesses"]:
            click.echo("  no failing witnesses in the report")

    _emit(out, as_json, render)
    if results and all(x["reproduced"] for x in results):
        sys.exit(1)


# ---------------------------------------------------------------------------
# exactness


def _render_exactness(r: dict) -> None:
    for stage in r.get("stages", [r]):
        if "stage" in stage:
            click.echo(f"stage {stage['stage']}: {stage['algebra']}")
        click.echo("  hypotheses:")
        for k, v in stage["hypotheses"].items():
            click.echo(f"    [{'pass' if v['verdict'] else 'FAIL'}] {k}")
        if stage["group_names"]:
            g = stage["group_names"]
            click.echo(f"  groups: A = {g['A']}, B = {g['B']}, C = {g['C']}  (absolute gst0 of B: {g['B_absolute']})")
            click.echo(f"  surjective at C : {stage['surjective_at_C']}")
            click.echo(f"  exact at B      : {stage['exact_at_B']}")
            v = stage["variant_all_monos"]
            click.echo(f"  all-monos variant: {v['group_name']} (diverges: {v['diverges']})")
        for note in stage["notes"]:
            click.echo(f"  note: {note}")


def les_report(a: FiniteAlgebra, sub: str, ideal: str, max_dim: int) -> tuple[dict, bool]:
    from .algebra import subalgebra_generated

    sub_elems = [parse_element(a, t) for t in sub.split(",") if t.strip()]
    ideal_elems = [parse_element(a, t) for t in ideal.split(",") if t.strip()]
    _, inc = subalgebra_generated(a, sub_elems)
    phi = quotient_by_ideal(a, ideal_generated(a, ideal_elems))[1] if ideal_elems else None
    if phi is None:
        from .algebra import identity_morphism

        phi = identity_morphism(a)
    rep = kzero.les_tail_check(inc, phi, max_dim)
    return {"command": "les-check", "algebra": a.name, "max_dim": max_dim, **rep.to_dict()}, rep.passed


@main.command("les-check")
@click.argument("algebra")
@click.option("--sub", default="", help="Subalgebra generators, comma separated.")
@click.option("--ideal", default="", help="Quotient ideal generators, comma separated (empty: identity).")
@click.option("--max-dim", default=4, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def les_check(algebra, sub, ideal, max_dim, as_json) -> None:
    """Degree-zero exactness of gst0(A) -> K0 -> gst0(C) -> 0."""
    a = _algebra(algebra)
    report, ok = _run(lambda: les_report(a, sub, ideal, max_dim))
    _emit(report, as_json, _render_exactness)
    if not ok:
        sys.exit(1)


def parse_tower(text: str, source: str):
    """First line: algebra reference.  Then one stage per line: ``sub: ... ; ideal: ...``."""
    lines = [(i, l.split("#", 1)[0].strip()) for i, l in enumerate(text.splitlines(), start=1)]
    lines = [(i, l) for i, l in lines if l]
    if not lines:
        raise ParseError("empty tower file", None, source)
    a = load_algebra(lines[0][1])
    stages = []
    current = a
    for no, line in lines[1:]:
        fields = {}
        for part in line.split(";"):
            key, sep, val = part.partition(":")
            if not sep or key.strip() not in ("sub", "ideal"):
                raise ParseError("stage lines read 'sub: <elems> ; ideal: <elems>'", no, source)
            fields[key.strip()] = val.strip()
        stages.append((fields.get("sub", ""), fields.get("ideal", ""), no))
    return a, stages


@main.command("tower-check")
@click.argument("tower_file", type=click.Path(dir_okay=False))
@click.option("--max-dim", default=4, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def tower_check_cmd(tower_file, max_dim, as_json) -> None:
    """Run the exactness check down a tower of subalgebras."""
    path = Path(tower_file)
    if not path.exists():
        raise InputError(f"{tower_file}: no such file")
    a, raw = _run(lambda: parse_tower(path.read_text(), tower_file))

    def build():
        from .algebra import subalgebra_generated

        stages, current = [], a
        for sub, ideal, no in raw:
            try:
                s = [parse_element(current, t) for t in sub.split(",") if t.strip()]
                i = [parse_element(current, t) for t in ideal.split(",") if t.strip()]
            except ParseError as exc:
                raise ParseError(str(exc), no, tower_file) from exc
            stages.append((s, i))
            current = subalgebra_generated(current, s)[0]
        return kzero.tower_check(a, stages, max_dim)

    reports, table = _run(build)
    out = {
        "command": "tower-check",
        "algebra": a.name,
        "stages": [dict(r.to_dict(), stage=k, algebra=row["algebra"]) for k, (r, row) in enumerate(zip(reports, table))],
        "summary": table,
    }
    _emit(out, as_json, _render_exactness)
    if not all(r.passed for r in reports):
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
